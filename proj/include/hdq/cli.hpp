#pragma once

#include "hdq/deciders.hpp"
#include "hdq/evaluate.hpp"
#include "hdq/export.hpp"
#include "hdq/format.hpp"
#include "hdq/oracle.hpp"
#include "hdq/suites.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

namespace hdq::cli {

enum exit_code : int { ok = 0, failure = 1, input_error = 2, out_of_scope = 3 };

namespace detail {

inline automaton load(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw validation_error("cannot read '" + path + "'");
  try {
    return parse_automaton(in);
  } catch (const parse_error& e) {
    throw validation_error(path + ": " + e.what());
  }
}

inline token_game build_game(const automaton& a, int which, int tokens)
{
  const auto& vf = a.value_fn();
  const bool finite = a.mode() == word_mode::finite;
  if (which == 1) {
    if (vf.boolean != boolean_class::none)
      return build_g1_reach_safety(a);
    switch (vf.kind) {
    case value_kind::sup: return finite ? build_g1_sup_finite(a) : build_g1_sup_infinite(a);
    case value_kind::inf: return build_g1_inf(a);
    case value_kind::dsum: return build_g1_dsum(a);
    case value_kind::lim_sup: return build_gk_limsup(a, 1);
    default: break;
    }
    throw unsupported_error("no G1 arena for " + vf.name() + " automata");
  }
  if (which == 2) {
    if (vf.boolean == boolean_class::none) {
      if (vf.kind == value_kind::sup && !finite)
        return build_g2_sup(a);
      if (vf.kind == value_kind::lim_sup)
        return build_g2_limsup(a);
      if (vf.kind == value_kind::lim_inf)
        return build_g2_liminf(a);
    }
    throw unsupported_error("no G2 arena for " + vf.name() + " automata on "
                            + to_string(a.mode()) + " words");
  }
  if (vf.kind != value_kind::lim_sup)
    throw unsupported_error("G_k arenas are built for LimSup automata only");
  return build_gk_limsup(a, tokens);
}

inline value_function value_fn_from(const std::string& text)
{
  return hdq::detail::parse_value_fn(hdq::detail::split_tokens(text), 1);
}

} // namespace detail

/// Runs one command line. Output goes to `out`, diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Decide history-determinism of quantitative automata", "hdq"};
  app.require_subcommand(1);

  std::string file, word, suite = "all", valuefn = "Sup", mode = "finite", output;
  bool json = false, with_resolver = false, g1 = false, g2 = false, dot = false, as_json = false,
       annotate = false;
  int tokens = 0;
  gen_config cfg;
  if (const char* s = std::getenv("HDQ_SEED"))
    cfg.seed = std::strtoull(s, nullptr, 10);

  auto* decide = app.add_subcommand("decide", "decide whether an automaton is HD");
  decide->add_option("file", file, ".hdq automaton")->required();
  decide->add_flag("--json", json, "emit the verdict as JSON");
  decide->add_flag("--resolver", with_resolver, "include the resolver table");

  auto* value = app.add_subcommand("value", "exact value of a word");
  value->add_option("file", file, ".hdq automaton")->required();
  value->add_option("word", word, "word literal u(v), or u for finite words")->required();

  auto* game = app.add_subcommand("game", "export a token-game arena");
  game->add_option("file", file, ".hdq automaton")->required();
  auto* o1 = game->add_flag("--g1", g1, "one-token game");
  auto* o2 = game->add_flag("--g2", g2, "two-token game");
  auto* ok_ = game->add_option("--gk", tokens, "LimSup game with N Adam tokens")->check(CLI::Range(1, 3));
  o1->excludes(o2)->excludes(ok_);
  o2->excludes(ok_);
  auto* d1 = game->add_flag("--dot", dot, "Graphviz output (default)");
  auto* d2 = game->add_flag("--json", as_json, "JSON output");
  d1->excludes(d2);
  game->add_flag("--solve", annotate, "annotate positions with their winner");

  auto* gen = app.add_subcommand("gen", "write a random automaton");
  gen->add_option("--states", cfg.states)->check(CLI::PositiveNumber);
  gen->add_option("--letters", cfg.letters)->check(CLI::PositiveNumber);
  gen->add_option("--weights", cfg.weights)->check(CLI::PositiveNumber);
  gen->add_option("--min-out", cfg.min_out);
  gen->add_option("--max-out", cfg.max_out);
  gen->add_option("--valuefn", valuefn, "e.g. Sup, LimInf, \"DSum 1/2\", Reachability");
  gen->add_option("--mode", mode)->check(CLI::IsMember({"finite", "infinite"}));
  gen->add_option("--seed", cfg.seed, "defaults to $HDQ_SEED, else 0");
  gen->add_option("-o,--output", output, "write to a file instead of stdout");

  auto* check = app.add_subcommand("check", "run a self-check suite");
  std::vector<std::string> choices = suite_names();
  choices.push_back("all");
  check->add_option("--suite", suite, "suite name or all")->check(CLI::IsMember(choices));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? ok : input_error;
  }

  try {
    if (*decide) {
      auto a = detail::load(file);
      auto v = decide_hd(a);
      if (json) {
        auto j = to_json(a, v);
        if (!with_resolver)
          j.erase("resolver");
        out << j.dump(2) << '\n';
      } else {
        out << (v.is_hd ? "HD" : "NOT-HD") << " route=" << v.route << " game_size=" << v.game_size()
            << '\n';
        if (with_resolver) {
          if (!v.strategy)
            out << "resolver: none for this route\n";
          else
            out << to_json(a, *v.strategy).dump(2) << '\n';
        }
      }
    } else if (*value) {
      auto a = detail::load(file);
      auto w = parse_lasso(word, a.alphabet());
      out << to_string(automaton_value(a, w)) << '\n';
    } else if (*game) {
      if (!g1 && !g2 && tokens == 0)
        throw validation_error("choose one of --g1, --g2, --gk N");
      auto a = detail::load(file);
      auto g = detail::build_game(a, g1 ? 1 : g2 ? 2 : 3, tokens);
      std::optional<solve_result> sol;
      if (annotate)
        sol = solve(g.game);
      const solve_result* s = sol ? &*sol : nullptr;
      if (as_json)
        out << to_json(g, s).dump(2) << '\n';
      else
        out << to_dot(g, s);
    } else if (*gen) {
      cfg.value_fn = detail::value_fn_from(valuefn);
      cfg.mode = mode == "finite" ? word_mode::finite : word_mode::infinite;
      auto text = serialize(generate_random(cfg));
      if (output.empty()) {
        out << text;
      } else {
        std::ofstream f(output);
        if (!f)
          throw validation_error("cannot write '" + output + "'");
        f << text;
      }
    } else if (*check) {
      std::vector<std::string> names = suite == "all" ? suite_names() : std::vector<std::string>{suite};
      bool all_passed = true;
      out << std::left << std::setw(10) << "suite" << std::setw(6) << "result" << std::right
          << std::setw(8) << "checks" << std::setw(10) << "failures" << std::setw(10) << "seconds"
          << '\n';
      for (const auto& n : names) {
        auto r = run_suite(n);
        all_passed = all_passed && r.passed();
        out << std::left << std::setw(10) << r.name << std::setw(6) << (r.passed() ? "pass" : "FAIL")
            << std::right << std::setw(8) << r.instances << std::setw(10) << r.failures
            << std::setw(10) << std::fixed << std::setprecision(2) << r.seconds << '\n';
        for (const auto& note : r.notes)
          out << "    " << note << '\n';
      }
      return all_passed ? ok : failure;
    }
  } catch (const out_of_scope_error& e) {
    err << "hdq: out of scope: " << e.what() << '\n';
    return out_of_scope;
  } catch (const unsupported_error& e) {
    err << "hdq: unsupported: " << e.what() << '\n';
    return out_of_scope;
  } catch (const internal_error& e) {
    err << "hdq: internal error: " << e.what() << '\n';
    return failure;
  } catch (const error& e) {
    err << "hdq: " << e.what() << '\n';
    return input_error;
  }
  return ok;
}

} // namespace hdq::cli
