#include "hdq/automaton.hpp"
#include "hdq/format.hpp"
#include "hdq/samples.hpp"

#include <gtest/gtest.h>

using namespace hdq;

namespace {

automaton two_state(value_function vf, word_mode mode = word_mode::infinite)
{
  return automaton({"a", "b"}, {"p", "q"}, 0,
                   {{0, 0, 1, 0}, {0, 0, 2, 1}, {0, 1, 1, 0}, {1, 0, 3, 1}, {1, 1, 2, 1}}, vf, mode);
}

const value_function sup_fn{value_kind::sup, std::nullopt, boolean_class::none};
const value_function limsup_fn{value_kind::lim_sup, std::nullopt, boolean_class::none};

} // namespace

TEST(Rational, ParsesIntegersAndFractions)
{
  EXPECT_EQ(parse_rational("3"), rational(3));
  EXPECT_EQ(parse_rational("-2"), rational(-2));
  EXPECT_EQ(parse_rational("6/4"), rational(3, 2));
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("x"), std::invalid_argument);
  EXPECT_EQ(to_string(rational(-3, 6)), "-1/2");
  EXPECT_EQ(power(rational(1, 2), 3), rational(1, 8));
}

TEST(Automaton, SuccessorsKeepFileOrder)
{
  auto a = two_state(sup_fn);
  auto s = a.successors(0, 0);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0], 0u);
  EXPECT_EQ(s[1], 1u);
  EXPECT_FALSE(a.is_deterministic());
  EXPECT_EQ(a.find_state("q"), std::optional<state_id>(1));
  EXPECT_EQ(a.find_letter("c"), std::nullopt);
}

TEST(Automaton, RanksAreDense)
{
  auto a = two_state(sup_fn);
  ASSERT_EQ(a.weight_count(), 3u);
  EXPECT_EQ(a.rank(0), 1);
  EXPECT_EQ(a.rank(3), 3);
  auto n = normalize_weights(a);
  EXPECT_EQ(n.ranked.at(3).weight, rational(3));
  EXPECT_EQ(n.original(2), rational(2));
}

TEST(Automaton, NormalizingShiftsTheSupFigureToOneBased)
{
  auto a = parse_automaton(samples::fig_sup);
  auto n = normalize_weights(a);
  std::vector<rational> want{1, 2, 3, 4};
  EXPECT_EQ(n.ranked.weights(), want);
  std::vector<rational> orig{0, 1, 2, 3};
  EXPECT_EQ(n.weights, orig);
}

TEST(Automaton, RejectsNonTotal)
{
  EXPECT_THROW(automaton({"a", "b"}, {"p"}, 0, {{0, 0, 1, 0}}, sup_fn, word_mode::infinite),
               validation_error);
}

TEST(Automaton, ModeTable)
{
  EXPECT_THROW(two_state(limsup_fn, word_mode::finite), validation_error);
  EXPECT_THROW(two_state({value_kind::sum, std::nullopt, boolean_class::none}), validation_error);
  EXPECT_THROW(two_state(value_function::dsum(rational(3, 2))), validation_error);
  EXPECT_NO_THROW(two_state(value_function::dsum(rational(1, 2)), word_mode::finite));
}

TEST(Automaton, SinkShape)
{
  // weight-1 transition into a non-sink
  EXPECT_THROW(automaton({"a"}, {"p", "q"}, 0, {{0, 0, 1, 1}, {1, 0, 0, 0}},
                         value_function::reachability(), word_mode::infinite),
               validation_error);
  automaton ok({"a"}, {"p", "q"}, 0, {{0, 0, 0, 1}, {1, 0, 1, 1}}, value_function::reachability(),
               word_mode::infinite);
  EXPECT_EQ(ok.targets(), (std::vector<bool>{false, true}));
  EXPECT_THROW(automaton({"a"}, {"p", "q"}, 0, {{0, 0, 0, 1}, {1, 0, 1, 0}}, value_function::safety(),
                         word_mode::infinite),
               validation_error);
  EXPECT_THROW(automaton({"a"}, {"p"}, 0, {{0, 0, 2, 0}}, value_function::reachability(),
                         word_mode::infinite),
               validation_error);
}

TEST(Automaton, LimSupFigureShape)
{
  auto a = parse_automaton(samples::fig_limsup);
  EXPECT_EQ(a.state_count(), 5u);
  EXPECT_EQ(a.weights(), (std::vector<rational>{1, 2, 3}));
}

TEST(Lasso, Indexing)
{
  lasso_word w{{0}, {1, 0}};
  EXPECT_EQ(w.at(0), 0u);
  EXPECT_EQ(w.at(1), 1u);
  EXPECT_EQ(w.at(4), 0u);
  EXPECT_EQ(w.at(5), 1u);
  EXPECT_FALSE(w.is_finite());
}
