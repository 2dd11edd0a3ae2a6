#include "hdq/deciders.hpp"
#include "hdq/evaluate.hpp"
#include "hdq/format.hpp"
#include "hdq/oracle.hpp"
#include "hdq/samples.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <random>

using namespace hdq;

namespace {

value_function plain(value_kind k)
{
  return {k, std::nullopt, boolean_class::none};
}

automaton random_automaton(value_function vf, word_mode mode, std::uint64_t seed,
                           std::size_t states = 3, std::size_t weights = 3, std::size_t max_out = 2)
{
  gen_config c;
  c.value_fn = vf;
  c.mode = mode;
  c.states = states;
  c.weights = weights;
  c.letters = 2;
  c.max_out = max_out;
  c.seed = seed;
  return generate_random(c);
}

// q is almost accepting iff some positional choice (state, letter) -> transition
// admits no weight-0 cycle reachable from q through weight-0 transitions.
std::vector<bool> brute_force_aa(const automaton& a)
{
  const std::size_t n = a.state_count(), s = a.letter_count();
  std::vector<std::vector<transition_id>> slots;
  for (state_id q = 0; q < n; ++q)
    for (letter_id l = 0; l < s; ++l)
      slots.emplace_back(a.successors(q, l).begin(), a.successors(q, l).end());
  std::vector<bool> out(n, false);
  std::vector<std::size_t> pick(slots.size(), 0);
  while (true) {
    for (state_id start = 0; start < n; ++start) {
      if (out[start])
        continue;
      // colour 0 unseen, 1 on stack, 2 done
      std::vector<int> colour(n, 0);
      bool cycle = false;
      std::function<void(state_id)> dfs = [&](state_id q) {
        colour[q] = 1;
        for (letter_id l = 0; l < s && !cycle; ++l) {
          const auto& t = a.at(slots[q * s + l][pick[q * s + l]]);
          if (t.weight != 0)
            continue;
          if (colour[t.target] == 1)
            cycle = true;
          else if (colour[t.target] == 0)
            dfs(t.target);
        }
        colour[q] = 2;
      };
      dfs(start);
      if (!cycle)
        out[start] = true;
    }
    std::size_t i = 0;
    while (i < slots.size() && ++pick[i] == slots[i].size())
      pick[i++] = 0;
    if (i == slots.size())
      break;
  }
  return out;
}

int rank_of_value(const automaton& a, const rational& v)
{
  return a.rank_of(v);
}

} // namespace

TEST(AlmostAccepting, FigureBIsAllAlmostAccepting)
{
  for (const auto* text : {samples::fig_reach_b_infinite, samples::fig_reach_b_finite}) {
    auto aa = almost_accepting_states(parse_automaton(text));
    EXPECT_EQ(aa.states, (std::vector<bool>{true, true, true, true}));
    for (state_id q = 0; q < 4; ++q)
      for (auto t : aa.witness[q])
        EXPECT_GE(t, 0);
  }
}

TEST(AlmostAccepting, LoopAvoidingTargetIsNot)
{
  automaton a({"a", "b"}, {"s", "t"}, 0, {{0, 0, 0, 0}, {0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 1, 1}},
              value_function::reachability(), word_mode::infinite);
  auto aa = almost_accepting_states(a);
  EXPECT_EQ(aa.states, (std::vector<bool>{false, true}));
  EXPECT_EQ(aa.witness[0][0], -1);
  EXPECT_THROW(almost_accepting_states(a.with_value_fn(plain(value_kind::sup))), validation_error);
}

TEST(AlmostAccepting, MatchesPositionalEnumeration)
{
  int interesting = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    auto a = random_automaton(value_function::reachability(), word_mode::infinite, seed, 4, 2, 3);
    auto want = brute_force_aa(a);
    auto got = almost_accepting_states(a);
    EXPECT_EQ(got.states, want) << seed;
    interesting += std::count(want.begin(), want.end(), false) > 0;
    for (state_id q = 0; q < a.state_count(); ++q)
      for (letter_id l = 0; l < a.letter_count(); ++l) {
        auto w = got.witness[q][l];
        if (!got.states[q]) {
          EXPECT_EQ(w, -1);
          continue;
        }
        ASSERT_GE(w, 0);
        const auto& t = a.at(static_cast<transition_id>(w));
        EXPECT_EQ(t.source, q);
        EXPECT_EQ(t.letter, l);
        EXPECT_TRUE(t.weight == 1 || got.states[t.target]) << seed;
      }
  }
  EXPECT_GT(interesting, 30);
}

TEST(Polish, FigureBCollapsesToSinks)
{
  auto b = parse_automaton(samples::fig_reach_b_infinite);
  auto p = polish(b);
  for (const auto& t : p.transitions()) {
    EXPECT_EQ(t.source, t.target);
    EXPECT_EQ(t.weight, 1);
  }
  EXPECT_EQ(p.transitions().size(), b.transitions().size());
}

TEST(Polish, IdempotentAndValuePreserving)
{
  std::mt19937_64 rng(4);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto a = random_automaton(value_function::reachability(), word_mode::infinite, seed, 4, 2, 3);
    auto p = polish(a);
    EXPECT_EQ(polish(p), p) << seed;
    for (int i = 0; i < 10; ++i) {
      auto w = random_lasso(rng, a.letter_count(), 6, word_mode::infinite);
      EXPECT_EQ(automaton_value(a, w), automaton_value(p, w)) << seed;
    }
  }
}

TEST(Polish, NoAlmostAcceptingNonSinkLeavesAutomatonAlone)
{
  automaton a({"a", "b"}, {"s", "t"}, 0, {{0, 0, 0, 0}, {0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 1, 1}},
              value_function::reachability(), word_mode::infinite);
  EXPECT_EQ(polish(a), a);
}

TEST(Decompose, FigureComponents)
{
  auto a = parse_automaton(samples::fig_limsup);
  auto f = decompose(a);
  ASSERT_EQ(f.components.size(), 2u);
  std::vector<long> w2, w3;
  for (const auto& t : f.at(2).transitions())
    w2.push_back(static_cast<long>(numerator(t.weight)));
  for (const auto& t : f.at(3).transitions())
    w3.push_back(static_cast<long>(numerator(t.weight)));
  EXPECT_EQ(w2, (std::vector<long>{1, 1, 1, 1, 2, 2, 2, 1, 2, 2, 1, 1}));
  EXPECT_EQ(w3, (std::vector<long>{1, 1, 1, 1, 1, 1, 2, 1, 2, 2, 1, 1}));
  EXPECT_TRUE(decide_hd(f.at(2)).is_hd);
  EXPECT_TRUE(decide_hd(f.at(3)).is_hd);
  EXPECT_FALSE(decide_hd(a).is_hd);
}

TEST(Decompose, Errors)
{
  automaton one({"a"}, {"s"}, 0, {{0, 0, 4, 0}}, plain(value_kind::lim_sup), word_mode::infinite);
  EXPECT_THROW(decompose(one), validation_error);
  EXPECT_THROW(decompose(parse_automaton(samples::fig_sup)), validation_error);
}

TEST(Decompose, ThresholdProperty)
{
  std::mt19937_64 rng(11);
  for (auto k : {value_kind::lim_sup, value_kind::lim_inf})
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      auto a = random_automaton(plain(k), word_mode::infinite, seed, 3, 4);
      if (a.weight_count() < 2)
        continue;
      auto f = decompose(a);
      for (int i = 0; i < 15; ++i) {
        auto w = random_lasso(rng, a.letter_count(), 5, word_mode::infinite);
        int r = rank_of_value(a, automaton_value(a, w));
        for (int x = 2; x <= static_cast<int>(a.weight_count()); ++x)
          EXPECT_EQ(r >= x, automaton_value(f.at(x), w) == 2) << seed << " x=" << x;
      }
    }
}

TEST(SupToLimSup, SingleWeightGivesOneCopy)
{
  automaton a({"a"}, {"p", "q"}, 0, {{0, 0, 5, 1}, {1, 0, 5, 0}}, plain(value_kind::sup),
              word_mode::infinite);
  auto l = sup_to_limsup(a);
  EXPECT_EQ(l.state_count(), 2u);
  EXPECT_EQ(l.states(), (std::vector<std::string>{"p_1", "q_1"}));
  EXPECT_EQ(l.value_fn().kind, value_kind::lim_sup);
}

TEST(SupToLimSup, HigherRankMovesToItsCopy)
{
  automaton a({"a"}, {"p"}, 0, {{0, 0, 1, 0}, {0, 0, 7, 0}}, plain(value_kind::sup),
              word_mode::infinite);
  auto l = sup_to_limsup(a);
  ASSERT_EQ(l.state_count(), 2u);
  EXPECT_EQ(l.initial(), 0u);
  // copy 1: rank 1 stays at weight 1, rank 2 jumps to copy 2 with weight 2
  // copy 2: both ranks stay at weight 2
  std::vector<std::tuple<state_id, long, state_id>> got;
  for (const auto& t : l.transitions())
    got.emplace_back(t.source, static_cast<long>(numerator(t.weight)), t.target);
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, (std::vector<std::tuple<state_id, long, state_id>>{
                     {0, 1, 0}, {0, 2, 1}, {1, 2, 1}, {1, 2, 1}}));
  EXPECT_THROW(sup_to_limsup(a.with_mode(word_mode::finite)), validation_error);
}

TEST(SupToLimSup, ValuesAgreeThroughRanks)
{
  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto a = random_automaton(plain(value_kind::sup), word_mode::infinite, seed, 3, 3);
    auto l = sup_to_limsup(a);
    for (int i = 0; i < 20; ++i) {
      auto w = random_lasso(rng, a.letter_count(), 6, word_mode::infinite);
      EXPECT_EQ(rational(rank_of_value(a, automaton_value(a, w))), automaton_value(l, w)) << seed;
    }
  }
}

TEST(SupToLimSup, PreservesVerdict)
{
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    auto a = random_automaton(plain(value_kind::sup), word_mode::infinite, seed, 3, 3);
    EXPECT_EQ(decide_hd(a).is_hd, decide_hd(sup_to_limsup(a)).is_hd) << seed;
  }
}

TEST(DecideHd, FigureRoutes)
{
  auto v = decide_hd(parse_automaton(samples::fig_limsup));
  EXPECT_FALSE(v.is_hd);
  EXPECT_EQ(v.route, "G2-LimSup-parity");
  EXPECT_EQ(v.winner, player::adam);
  EXPECT_GT(v.game_size(), 0u);

  v = decide_hd(parse_automaton(samples::fig_sup));
  EXPECT_FALSE(v.is_hd);
  EXPECT_EQ(v.route, "G2-Sup-cobuchi");

  v = decide_hd(parse_automaton(samples::fig_reach_b_finite));
  EXPECT_FALSE(v.is_hd);
  EXPECT_EQ(v.route, "G1-Reachability-safety");

  v = decide_hd(parse_automaton(samples::fig_reach_b_infinite));
  EXPECT_TRUE(v.is_hd);
  EXPECT_EQ(v.route, "G1-Reachability-weak");
  EXPECT_TRUE(v.strategy.has_value());
}

TEST(DecideHd, DeterministicAutomataAreHd)
{
  std::uint64_t seed = 0;
  for (auto mode : {word_mode::finite, word_mode::infinite})
    for (auto vf : {plain(value_kind::sup), plain(value_kind::inf), value_function::reachability(),
                    value_function::safety(), value_function::dsum(rational(2, 3)),
                    plain(value_kind::lim_sup), plain(value_kind::lim_inf)}) {
      if (mode == word_mode::finite && (vf.kind == value_kind::lim_sup || vf.kind == value_kind::lim_inf))
        continue;
      for (int i = 0; i < 5; ++i) {
        auto a = random_automaton(vf, mode, seed++, 4, 3, 1);
        ASSERT_TRUE(a.is_deterministic());
        EXPECT_TRUE(decide_hd(a).is_hd) << vf.name() << ' ' << to_string(mode) << ' ' << i;
      }
    }
}

TEST(DecideHd, SumAndAvgAreOutOfScope)
{
  automaton a({"a"}, {"p"}, 0, {{0, 0, 1, 0}}, plain(value_kind::sum), word_mode::finite);
  EXPECT_THROW(decide_hd(a), out_of_scope_error);
  EXPECT_THROW(decide_hd(a.with_value_fn(plain(value_kind::avg))),
               out_of_scope_error);
}

TEST(DecideHd, SingleWeightLimitAutomata)
{
  automaton a({"a"}, {"p", "q"}, 0, {{0, 0, 1, 0}, {0, 0, 1, 1}, {1, 0, 1, 1}},
              plain(value_kind::lim_inf), word_mode::infinite);
  auto v = decide_hd(a);
  EXPECT_TRUE(v.is_hd);
  EXPECT_EQ(v.route, "trivial-single-weight");
  EXPECT_EQ(v.game_size(), 0u);
}

TEST(DecideHd, InvariantUnderRankPreservingReweighting)
{
  for (auto k : {value_kind::sup, value_kind::inf, value_kind::lim_sup, value_kind::lim_inf})
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      auto mode = k == value_kind::lim_sup || k == value_kind::lim_inf || seed % 2
                      ? word_mode::infinite
                      : word_mode::finite;
      auto a = random_automaton(plain(k), mode, seed, 3, 3);
      auto ts = a.transitions();
      for (auto& t : ts)
        t.weight = t.weight * t.weight * 5 - rational(1, 3);
      EXPECT_EQ(decide_hd(a).is_hd, decide_hd(a.with(a.value_fn(), ts)).is_hd) << seed;
    }
}

TEST(ExtractResolver, Errors)
{
  EXPECT_THROW(extract_resolver(decide_hd(parse_automaton(samples::fig_limsup))), validation_error);
  auto f = decompose(parse_automaton(samples::fig_limsup));
  auto v = decide_hd(f.at(2));
  ASSERT_TRUE(v.is_hd);
  EXPECT_THROW(extract_resolver(v), unsupported_error);
}

TEST(ExtractResolver, FigureBInfinite)
{
  auto a = parse_automaton(samples::fig_reach_b_infinite);
  auto v = decide_hd(a);
  const auto& r = extract_resolver(v);
  const auto& start = r.nodes.at(r.initial);
  EXPECT_EQ(start.state, a.initial());
  for (letter_id l = 0; l < 2; ++l) {
    auto t = a.at(static_cast<transition_id>(start.transition[l]));
    EXPECT_TRUE(t.target == 1 || t.target == 2);
  }
  auto rep = resolver_check_on_lassos(a, r, 300, 1);
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.samples, 300u);
}

TEST(ExtractResolver, ResolversAreSoundOnRandomHdInstances)
{
  int checked = 0;
  std::uint64_t seed = 0;
  for (auto mode : {word_mode::finite, word_mode::infinite})
    for (auto vf : {plain(value_kind::sup), plain(value_kind::inf), value_function::reachability(),
                    value_function::safety(), value_function::dsum(rational(1, 2))})
      for (int i = 0; i < 12; ++i) {
        auto a = random_automaton(vf, mode, 1000 + seed++, 3, 2);
        auto v = decide_hd(a);
        if (!v.is_hd || !v.strategy)
          continue;
        ++checked;
        auto rep = resolver_check_on_lassos(a, *v.strategy, 60, seed);
        EXPECT_TRUE(rep.ok()) << v.route << " seed " << seed;
        for (const auto& n : v.strategy->nodes)
          for (letter_id l = 0; l < a.letter_count(); ++l)
            if (n.transition[l] >= 0) {
              EXPECT_EQ(a.at(static_cast<transition_id>(n.transition[l])).source, n.state);
            }
      }
  EXPECT_GT(checked, 50);
}
