#include "hdq/evaluate.hpp"
#include "hdq/format.hpp"
#include "hdq/oracle.hpp"
#include "hdq/samples.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <random>

using namespace hdq;

namespace {

// Best value over all runs that are simple lassos of the product with the
// word (finite words: all runs), evaluated through evaluate_run only.
rational brute_force_value(const automaton& a, const lasso_word& w)
{
  std::optional<rational> best;
  auto offer = [&](const run& r) {
    auto v = evaluate_run(a, r);
    if (!best || v > *best)
      best = v;
  };
  if (w.is_finite()) {
    run r;
    std::function<void(state_id, std::size_t)> go = [&](state_id q, std::size_t i) {
      if (i == w.prefix.size()) {
        offer(r);
        return;
      }
      for (auto t : a.successors(q, w.at(i))) {
        r.prefix.push_back(t);
        go(a.at(t).target, i + 1);
        r.prefix.pop_back();
      }
    };
    go(a.initial(), 0);
    return *best;
  }
  const std::size_t len = w.length();
  std::map<std::pair<state_id, std::size_t>, std::size_t> on_path;
  std::vector<transition_id> path;
  std::function<void(state_id, std::size_t)> go = [&](state_id q, std::size_t i) {
    if (i >= w.prefix.size()) {
      auto it = on_path.find({q, i});
      if (it != on_path.end()) {
        run r;
        r.prefix.assign(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(it->second));
        r.cycle.assign(path.begin() + static_cast<std::ptrdiff_t>(it->second), path.end());
        offer(r);
        return;
      }
      on_path[{q, i}] = path.size();
    }
    std::size_t next = i + 1 == len ? w.prefix.size() : i + 1;
    for (auto t : a.successors(q, w.at(i))) {
      path.push_back(t);
      go(a.at(t).target, next);
      path.pop_back();
    }
    if (i >= w.prefix.size())
      on_path.erase({q, i});
  };
  go(a.initial(), 0);
  return *best;
}

const value_function plain(value_kind k)
{
  return {k, std::nullopt, boolean_class::none};
}

} // namespace

TEST(EvaluateSequence, Basics)
{
  std::vector<rational> u{3, 1}, v{2, 5};
  EXPECT_EQ(evaluate_sequence(plain(value_kind::sup), u, v), rational(5));
  EXPECT_EQ(evaluate_sequence(plain(value_kind::inf), u, v), rational(1));
  EXPECT_EQ(evaluate_sequence(plain(value_kind::lim_inf), u, v), rational(2));
  EXPECT_EQ(evaluate_sequence(plain(value_kind::lim_sup), u, v), rational(5));
  EXPECT_EQ(evaluate_sequence(plain(value_kind::sum), u, {}), rational(4));
  EXPECT_EQ(evaluate_sequence(plain(value_kind::avg), u, {}), rational(2));
  // 1 + 1/2 + 1/4 + ... = 2
  EXPECT_EQ(evaluate_sequence(value_function::dsum(rational(1, 2)), {}, {1}), rational(2));
  // 3 + (1/2)(1) + (1/4)(2 + 5/2)/(1 - 1/4)
  EXPECT_EQ(evaluate_sequence(value_function::dsum(rational(1, 2)), u, v),
            rational(3) + rational(1, 2) + rational(1, 4) * (rational(2) + rational(5, 2)) / rational(3, 4));
  EXPECT_THROW(evaluate_sequence(plain(value_kind::avg), {}, {}), validation_error);
  EXPECT_THROW(evaluate_sequence(plain(value_kind::lim_sup), u, {}), validation_error);
}

TEST(EvaluateRun, ChecksConnectivityAndClosure)
{
  auto a = parse_automaton(samples::fig_limsup);
  // s0 -a-> s2 -a-> s3 loop
  run good{{2, 6}, {8}};
  EXPECT_EQ(evaluate_run(a, good), rational(3));
  EXPECT_THROW(evaluate_run(a, run{{0, 6}, {8}}), validation_error);
  EXPECT_THROW(evaluate_run(a, run{{2}, {6}}), validation_error);
  EXPECT_THROW(evaluate_run(a, run{{2, 6}, {}}), validation_error);
}

TEST(AutomatonValue, FigureValues)
{
  auto limsup = parse_automaton(samples::fig_limsup);
  EXPECT_EQ(automaton_value(limsup, parse_lasso("(a)", limsup.alphabet())), rational(3));
  EXPECT_EQ(automaton_value(limsup, parse_lasso("(b)", limsup.alphabet())), rational(2));
  EXPECT_EQ(automaton_value(limsup, parse_lasso("a(b)", limsup.alphabet())), rational(2));
  auto sup = parse_automaton(samples::fig_sup);
  EXPECT_EQ(automaton_value(sup, parse_lasso("(a)", sup.alphabet())), rational(1));
  EXPECT_EQ(automaton_value(sup, parse_lasso("a(b)", sup.alphabet())), rational(3));
}

TEST(AutomatonValue, ModeGuards)
{
  auto limsup = parse_automaton(samples::fig_limsup);
  EXPECT_THROW(automaton_value(limsup, lasso_word{{0}, {}}), validation_error);
  auto fin = parse_automaton(samples::fig_reach_b_finite);
  EXPECT_THROW(automaton_value(fin, lasso_word{{0}, {1}}), validation_error);
  EXPECT_THROW(automaton_value(fin, lasso_word{{}, {}}), validation_error);
  EXPECT_THROW(automaton_value(fin, lasso_word{{5}, {}}), validation_error);
}

TEST(AutomatonValue, ReachabilityFiniteVersusInfinite)
{
  auto fin = parse_automaton(samples::fig_reach_b_finite);
  auto inf = parse_automaton(samples::fig_reach_b_infinite);
  EXPECT_EQ(automaton_value(fin, parse_lasso("ab", fin.alphabet())), rational(1));
  EXPECT_EQ(automaton_value(fin, parse_lasso("a", fin.alphabet())), rational(0));
  EXPECT_EQ(automaton_value(inf, parse_lasso("(a)", inf.alphabet())), rational(1));
}

TEST(AutomatonValue, AgreesWithRunEnumeration)
{
  std::mt19937_64 rng(11);
  const value_function kinds[] = {plain(value_kind::sup),     plain(value_kind::inf),
                                  plain(value_kind::lim_sup), plain(value_kind::lim_inf),
                                  value_function::dsum(rational(2, 3)), plain(value_kind::sum),
                                  plain(value_kind::avg)};
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 140; ++seed) {
    const auto& vf = kinds[seed % 7];
    gen_config c;
    c.states = 1 + seed % 3;
    c.letters = 2;
    c.weights = 4;
    c.max_out = 2;
    c.value_fn = vf;
    const bool infinite_ok = vf.kind != value_kind::sum && vf.kind != value_kind::avg;
    const bool finite_ok = vf.kind != value_kind::lim_sup && vf.kind != value_kind::lim_inf;
    c.mode = infinite_ok && (!finite_ok || seed % 2) ? word_mode::infinite : word_mode::finite;
    c.seed = seed;
    auto a = generate_random(c);
    for (int k = 0; k < 5; ++k) {
      auto w = random_lasso(rng, a.letter_count(), 3, a.mode());
      EXPECT_EQ(automaton_value(a, w), brute_force_value(a, w))
          << serialize(a) << format_lasso(w, a.alphabet());
      ++checked;
    }
  }
  EXPECT_EQ(checked, 700);
}

TEST(AutomatonValue, EmptyWordForSumAndDSum)
{
  auto a = parse_automaton("valuefn: Sum\nmode: finite\nalphabet: a\ninitial: s\ns a 2 s\n");
  EXPECT_EQ(automaton_value(a, lasso_word{}), rational(0));
  EXPECT_EQ(automaton_value(a, parse_lasso("aaa", a.alphabet())), rational(6));
}
