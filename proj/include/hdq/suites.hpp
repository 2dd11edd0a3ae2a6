#pragma once

#include "hdq/deciders.hpp"
#include "hdq/format.hpp"
#include "hdq/oracle.hpp"
#include "hdq/samples.hpp"
#include "hdq/solve.hpp"
#include "hdq/token_games.hpp"

#include <chrono>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace hdq {

struct suite_report
{
  std::string name;
  std::size_t instances = 0;
  std::size_t failures = 0;
  std::size_t skipped = 0;
  double seconds = 0;
  std::vector<std::string> notes;

  bool passed() const { return failures == 0 && instances > 0; }
  void fail(std::string what)
  {
    ++failures;
    if (notes.size() < 20)
      notes.push_back(std::move(what));
  }
};

/// HD automata whose verdict carries a resolver, collected for the resolver suite.
using resolver_sink = std::vector<automaton>;

namespace detail {

class stopwatch
{
public:
  double seconds() const
  {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline void keep_resolver(resolver_sink* sink, const automaton& a, const verdict& v)
{
  if (sink && v.is_hd && v.strategy)
    sink->push_back(a);
}

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t i)
{
  std::seed_seq s{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                  static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
  std::uint32_t w[2];
  s.generate(w, w + 2);
  return (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
}

} // namespace detail

/// Verdicts on the worked examples.
inline suite_report suite_figures(resolver_sink* sink = nullptr)
{
  detail::stopwatch clock;
  suite_report r;
  r.name = "figures";
  auto expect = [&](const std::string& what, bool got, bool want) {
    ++r.instances;
    if (got != want)
      r.fail(what + ": got " + (got ? "true" : "false"));
  };

  auto limsup = parse_automaton(samples::fig_limsup);
  auto v = decide_hd(limsup);
  expect("LimSup figure not HD", v.is_hd, false);
  expect("LimSup figure route", v.route == "G2-LimSup-parity", true);
  auto parts = decompose(limsup);
  for (int x = 2; x <= 3; ++x) {
    auto vx = decide_hd(parts.at(x));
    expect("component A_" + std::to_string(x) + " HD", vx.is_hd, true);
  }

  auto sup = parse_automaton(samples::fig_sup);
  auto vs = decide_hd(sup);
  expect("Sup figure not HD", vs.is_hd, false);
  expect("Sup figure route", vs.route == "G2-Sup-cobuchi", true);
  auto g1 = build_g1_sup_infinite(sup);
  expect("Sup figure: Eve wins G1", solve(g1.game).eve_wins[g1.game.initial()], true);

  auto b_inf = parse_automaton(samples::fig_reach_b_infinite);
  auto vb = decide_hd(b_inf);
  expect("B infinite HD", vb.is_hd, true);
  detail::keep_resolver(sink, b_inf, vb);
  auto b_fin = parse_automaton(samples::fig_reach_b_finite);
  expect("B finite not HD", decide_hd(b_fin).is_hd, false);

  r.seconds = clock.seconds();
  if (r.seconds >= 1.0)
    r.fail("runtime " + std::to_string(r.seconds) + " s exceeds 1 s");
  return r;
}

/// decide_hd against the brute-force letter game on finite words.
inline suite_report suite_oracle(std::size_t count = 500, std::uint64_t seed = 1,
                                 resolver_sink* sink = nullptr)
{
  detail::stopwatch clock;
  suite_report r;
  r.name = "oracle";
  const value_function classes[] = {
      {value_kind::sup, std::nullopt, boolean_class::none},
      {value_kind::inf, std::nullopt, boolean_class::none},
      value_function::reachability(),
      value_function::safety(),
  };
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  std::size_t hd = 0;
  for (std::size_t i = 0; i < count; ++i) {
    gen_config c;
    c.value_fn = classes[i % 4];
    c.mode = word_mode::finite;
    c.states = pick(2, 5);
    c.letters = pick(2, 3);
    c.weights = pick(2, 3);
    c.min_out = pick(1, 2);
    c.max_out = pick(2, 3);
    c.seed = detail::mix(seed, i);
    auto a = generate_random(c);
    auto v = decide_hd(a);
    bool o = finite_letter_game_oracle(a);
    ++r.instances;
    hd += v.is_hd;
    if (v.is_hd != o)
      r.fail(a.value_fn().name() + " instance seed " + std::to_string(c.seed) + ": decider "
             + (v.is_hd ? "HD" : "NOT-HD") + ", oracle " + (o ? "HD" : "NOT-HD"));
    detail::keep_resolver(sink, a, v);
  }
  r.notes.insert(r.notes.begin(), std::to_string(hd) + " HD / " + std::to_string(count - hd) + " not HD");
  r.seconds = clock.seconds();
  if (r.seconds >= 60.0)
    r.fail("runtime exceeds 60 s");
  return r;
}

/// Sup-G2 vs Reachability-G1 and Inf-G1 vs Safety-G1 on infinite words.
inline suite_report suite_boolean(std::size_t count = 200, std::uint64_t seed = 2,
                                  resolver_sink* sink = nullptr)
{
  detail::stopwatch clock;
  suite_report r;
  r.name = "boolean";
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  std::size_t hd = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const bool reach = i % 2 == 0;
    gen_config c;
    c.value_fn = reach ? value_function::reachability() : value_function::safety();
    c.mode = word_mode::infinite;
    c.states = pick(3, 5);
    c.letters = 2;
    c.min_out = pick(1, 2);
    c.max_out = pick(2, 3);
    c.seed = detail::mix(seed, i);
    auto a = generate_random(c);
    auto plain = a.with_value_fn({reach ? value_kind::sup : value_kind::inf, std::nullopt,
                                  boolean_class::none});
    auto vb = decide_hd(a);
    auto vp = decide_hd(plain);
    ++r.instances;
    hd += vb.is_hd;
    if (vb.is_hd != vp.is_hd)
      r.fail(a.value_fn().name() + " seed " + std::to_string(c.seed) + ": " + vb.route + " says "
             + (vb.is_hd ? "HD" : "NOT-HD") + ", " + vp.route + " says "
             + (vp.is_hd ? "HD" : "NOT-HD"));
    detail::keep_resolver(sink, a, vb);
    detail::keep_resolver(sink, plain, vp);
  }
  r.notes.insert(r.notes.begin(), std::to_string(hd) + " HD / " + std::to_string(count - hd) + " not HD");
  r.seconds = clock.seconds();
  return r;
}

/// Two-token and three-token LimSup games have the same winner.
inline suite_report suite_g2g3(std::size_t count = 100, std::uint64_t seed = 3)
{
  detail::stopwatch clock;
  suite_report r;
  r.name = "g2g3";
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  std::size_t eve = 0;
  for (std::size_t i = 0; i < count; ++i) {
    gen_config c;
    c.value_fn = {value_kind::lim_sup, std::nullopt, boolean_class::none};
    c.mode = word_mode::infinite;
    c.states = pick(2, 4);
    c.letters = pick(1, 2);
    c.weights = pick(2, 3);
    c.min_out = pick(1, 2);
    c.max_out = pick(2, 3);
    c.seed = detail::mix(seed, i);
    auto a = generate_random(c);
    auto g2 = build_gk_limsup(a, 2);
    auto g3 = build_gk_limsup(a, 3);
    bool w2 = solve(g2.game).eve_wins[g2.game.initial()];
    bool w3 = solve(g3.game).eve_wins[g3.game.initial()];
    ++r.instances;
    eve += w2;
    if (w2 != w3)
      r.fail("seed " + std::to_string(c.seed) + ": G2 " + (w2 ? "Eve" : "Adam") + ", G3 "
             + (w3 ? "Eve" : "Adam"));
  }
  r.notes.insert(r.notes.begin(), "Eve wins " + std::to_string(eve) + " / " + std::to_string(count));
  r.seconds = clock.seconds();
  return r;
}

namespace detail {

// Exhaustive positional-strategy search for a multi-discount threshold game:
// every Eve strategy (product of her choices) against every Adam lasso
// consistent with it, play values computed exactly. nullopt past the budget.
class positional_enumeration
{
public:
  positional_enumeration(const arena& ar, std::size_t budget) : ar_(ar), budget_(budget) {}

  std::optional<bool> eve_wins()
  {
    std::vector<position_id> choice_points;
    double combos = 1;
    for (position_id p = 0; p < ar_.size(); ++p)
      if (ar_.owner(p) == player::eve && ar_.out(p).size() > 1) {
        choice_points.push_back(p);
        combos *= static_cast<double>(ar_.out(p).size());
      }
    if (combos > static_cast<double>(budget_))
      return std::nullopt;
    sigma_.assign(ar_.size(), 0);
    on_path_.assign(ar_.size(), -1);
    std::vector<std::size_t> digit(choice_points.size(), 0);
    for (;;) {
      for (std::size_t i = 0; i < choice_points.size(); ++i)
        sigma_[choice_points[i]] = digit[i];
      path_.clear();
      sums_.assign(1, rational(0));
      scale_.assign(1, rational(1));
      bool refuted = adam_refutes(ar_.initial());
      if (work_ > budget_)
        return std::nullopt;
      if (!refuted)
        return true;
      std::size_t i = 0;
      for (; i < digit.size(); ++i) {
        if (++digit[i] < ar_.out(choice_points[i]).size())
          break;
        digit[i] = 0;
      }
      if (i == digit.size())
        return false;
    }
  }

private:
  bool adam_refutes(position_id p)
  {
    if (++work_ > budget_)
      return true;
    if (on_path_[p] >= 0) {
      auto c = static_cast<std::size_t>(on_path_[p]);
      const rational& head = sums_[c];
      rational loop = (sums_.back() - head) / (1 - scale_.back() / scale_[c]);
      return head + loop < ar_.goal().threshold;
    }
    on_path_[p] = static_cast<std::int64_t>(path_.size());
    auto moves = ar_.out(p);
    bool refuted = false;
    auto take = [&](move_id m) {
      path_.push_back(m);
      sums_.push_back(sums_.back() + scale_.back() * ar_.weight(m));
      scale_.push_back(scale_.back() * ar_.discount(m));
      refuted = adam_refutes(ar_.to(m));
      path_.pop_back();
      sums_.pop_back();
      scale_.pop_back();
    };
    if (ar_.owner(p) == player::eve)
      take(moves[sigma_[p]]);
    else
      for (auto m : moves) {
        take(m);
        if (refuted)
          break;
      }
    on_path_[p] = -1;
    return refuted;
  }

  const arena& ar_;
  std::size_t budget_;
  std::size_t work_ = 0;
  std::vector<std::size_t> sigma_;
  std::vector<std::int64_t> on_path_;
  std::vector<move_id> path_;
  std::vector<rational> sums_, scale_;
};

} // namespace detail

inline std::optional<bool> enumerate_multidiscount(const arena& ar, std::size_t budget = 2'000'000)
{
  if (ar.goal().kind != objective_kind::multi_discount)
    throw validation_error("positional enumeration expects a multi-discount arena");
  return detail::positional_enumeration(ar, budget).eve_wins();
}

/// Discount split identity and multi-discount solving against enumeration.
inline suite_report suite_dsum(std::size_t count = 50, std::uint64_t seed = 5)
{
  detail::stopwatch clock;
  suite_report r;
  r.name = "dsum";
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  auto random_lambda = [&] {
    long q = static_cast<long>(pick(2, 60));
    long p = static_cast<long>(pick(1, static_cast<std::size_t>(q - 1)));
    return rational(p, q);
  };
  for (int i = 0; i < 20; ++i) {
    auto l = random_lambda();
    auto f = split_discount(l);
    ++r.instances;
    if (f.first * f.second * f.third != l)
      r.fail("factor product differs from " + to_string(l));
  }

  std::size_t checked = 0, eve = 0;
  for (std::size_t i = 0; checked < count && i < 50 * count; ++i) {
    gen_config c;
    c.states = pick(1, 4);
    c.letters = pick(1, 2);
    c.weights = pick(2, 3);
    c.max_out = 2;
    c.mode = i % 2 ? word_mode::finite : word_mode::infinite;
    c.value_fn = value_function::dsum(random_lambda());
    c.seed = detail::mix(seed, i);
    auto a = generate_random(c);
    auto g = build_g1_dsum(a);
    auto oracle = enumerate_multidiscount(g.game);
    if (!oracle) {
      ++r.skipped;
      continue;
    }
    bool got = solve(g.game).eve_wins[g.game.initial()];
    ++checked;
    ++r.instances;
    eve += got;
    if (got != *oracle)
      r.fail("seed " + std::to_string(c.seed) + ": solver " + (got ? "Eve" : "Adam")
             + ", enumeration " + (*oracle ? "Eve" : "Adam"));
  }
  if (checked < count)
    r.fail("only " + std::to_string(checked) + " instances within the enumeration budget");
  r.notes.insert(r.notes.begin(), "Eve wins " + std::to_string(eve) + " / " + std::to_string(checked)
                                      + ", skipped " + std::to_string(r.skipped) + " over budget");
  r.seconds = clock.seconds();
  return r;
}

/// Every collected resolver attains the automaton value on sampled lassos.
inline suite_report suite_resolver(const resolver_sink& instances, std::size_t samples = 200,
                                   std::uint64_t seed = 6)
{
  detail::stopwatch clock;
  suite_report r;
  r.name = "resolver";
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& a = instances[i];
    auto v = decide_hd(a);
    const auto& res = extract_resolver(v);
    auto rep = resolver_check_on_lassos(a, res, samples, detail::mix(seed, i));
    ++r.instances;
    if (!rep.ok())
      r.fail(a.value_fn().name() + " instance " + std::to_string(i) + ": "
             + std::to_string(rep.counterexamples) + " counterexamples, first "
             + format_lasso(*rep.first_counterexample, a.alphabet()));
  }
  r.seconds = clock.seconds();
  return r;
}

/// Collects resolvers from the figure, oracle and boolean suites and checks them.
inline suite_report suite_resolver_default()
{
  resolver_sink sink;
  suite_figures(&sink);
  suite_oracle(500, 1, &sink);
  suite_boolean(200, 2, &sink);
  return suite_resolver(sink);
}

/// Arena size bound for G1 Sup on finite words and two timing checks.
inline suite_report suite_size(std::uint64_t seed = 7)
{
  detail::stopwatch clock;
  suite_report r;
  r.name = "size";
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  for (std::size_t i = 0; i < 50; ++i) {
    gen_config c;
    c.states = pick(1, 6);
    c.letters = pick(1, 3);
    c.weights = pick(1, 4);
    c.max_out = pick(1, 3);
    c.seed = detail::mix(seed, i);
    auto a = generate_random(c);
    auto g = build_g1_sup_finite(a);
    std::size_t n = a.state_count(), k = a.weight_count(), s = a.letter_count();
    std::size_t bound = 3 * s * n * n * k;
    ++r.instances;
    if (g.size() > bound)
      r.fail("G1 Sup arena has " + std::to_string(g.size()) + " positions, bound "
             + std::to_string(bound));
  }

  auto timed = [&](const std::string& what, const gen_config& c, double limit) {
    auto a = generate_random(c);
    detail::stopwatch t;
    auto v = decide_hd(a);
    double s = t.seconds();
    ++r.instances;
    std::ostringstream note;
    note << what << ": " << (v.is_hd ? "HD" : "NOT-HD") << " via " << v.route << ", "
         << v.game_size() << " positions, " << s << " s";
    r.notes.push_back(note.str());
    if (s >= limit)
      r.fail(what + " took " + std::to_string(s) + " s, limit " + std::to_string(limit));
  };
  gen_config safety;
  safety.states = 100;
  safety.letters = 2;
  safety.max_out = 2;
  safety.value_fn = value_function::safety();
  safety.mode = word_mode::infinite;
  safety.seed = detail::mix(seed, 1000);
  timed("Safety n=100", safety, 1.0);
  gen_config limsup;
  limsup.states = 20;
  limsup.letters = 2;
  limsup.weights = 3;
  limsup.max_out = 2;
  limsup.value_fn = {value_kind::lim_sup, std::nullopt, boolean_class::none};
  limsup.mode = word_mode::infinite;
  limsup.seed = detail::mix(seed, 1001);
  timed("LimSup n=20 k=3", limsup, 10.0);
  r.seconds = clock.seconds();
  return r;
}

inline const std::vector<std::string>& suite_names()
{
  static const std::vector<std::string> names{"figures", "oracle", "boolean", "g2g3",
                                              "dsum",    "resolver", "size"};
  return names;
}

inline suite_report run_suite(const std::string& name)
{
  if (name == "figures")
    return suite_figures();
  if (name == "oracle")
    return suite_oracle();
  if (name == "boolean")
    return suite_boolean();
  if (name == "g2g3")
    return suite_g2g3();
  if (name == "dsum")
    return suite_dsum();
  if (name == "resolver")
    return suite_resolver_default();
  if (name == "size")
    return suite_size();
  throw validation_error("unknown suite '" + name + "'");
}

} // namespace hdq
