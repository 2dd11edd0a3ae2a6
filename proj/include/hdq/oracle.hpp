#pragma once

#include "hdq/automaton.hpp"
#include "hdq/deciders.hpp"
#include "hdq/error.hpp"
#include "hdq/evaluate.hpp"

#include <boost/functional/hash.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

namespace hdq {

// Brute-force letter game on finite words for Sup/Inf (and Reachability,
// Safety). Positions carry Eve's state and aggregate plus the subset-style
// frontier: the best aggregate of any run reaching each state. Does not use
// the arena or solver code.
namespace detail {

struct subset_game
{
  // position layout: [q_E, agg_E, letter (-1 at Adam turns), frontier[0..n)]
  std::vector<std::vector<int>> positions;
  std::vector<std::vector<std::uint32_t>> succ;
  std::vector<bool> unsafe;
};

struct vector_hash
{
  std::size_t operator()(const std::vector<int>& v) const
  {
    return boost::hash_range(v.begin(), v.end());
  }
};

} // namespace detail

inline constexpr std::size_t oracle_position_limit = 1'000'000;

inline bool finite_letter_game_oracle(const automaton& a)
{
  if (a.mode() != word_mode::finite)
    throw validation_error("the letter-game oracle handles finite words only");
  const auto kind = a.value_fn().kind;
  if (kind != value_kind::sup && kind != value_kind::inf)
    throw validation_error("the letter-game oracle handles Sup, Inf, Reachability and Safety");
  const bool is_sup = kind == value_kind::sup;
  const int k = static_cast<int>(a.weight_count());
  const int none = -1;     // state not reached
  const int empty = is_sup ? 0 : k + 1; // aggregate of the empty prefix
  auto combine = [&](int x, int r) { return is_sup ? std::max(x, r) : std::min(x, r); };

  const std::size_t n = a.state_count();
  detail::subset_game g;
  std::unordered_map<std::vector<int>, std::uint32_t, detail::vector_hash> index;
  std::vector<std::uint32_t> todo;
  auto intern = [&](std::vector<int> key) {
    auto [it, fresh] = index.emplace(key, static_cast<std::uint32_t>(g.positions.size()));
    if (fresh) {
      if (g.positions.size() >= oracle_position_limit)
        throw unsupported_error("letter-game oracle exceeded " + std::to_string(oracle_position_limit)
                                + " positions");
      g.positions.push_back(std::move(key));
      g.succ.emplace_back();
      todo.push_back(it->second);
    }
    return it->second;
  };

  std::vector<int> init(3 + n, none);
  init[0] = static_cast<int>(a.initial());
  init[1] = empty;
  init[3 + a.initial()] = empty;
  intern(init);

  while (!todo.empty()) {
    auto id = todo.back();
    todo.pop_back();
    auto p = g.positions[id];
    if (p[2] < 0) {
      // Adam picks a letter; the frontier advances now
      for (letter_id l = 0; l < a.letter_count(); ++l) {
        std::vector<int> next(3 + n, none);
        next[0] = p[0];
        next[1] = p[1];
        next[2] = static_cast<int>(l);
        for (state_id q = 0; q < n; ++q) {
          if (p[3 + q] == none)
            continue;
          for (auto t : a.successors(q, l)) {
            int v = combine(p[3 + q], a.rank(t));
            int& slot = next[3 + a.at(t).target];
            if (slot == none || v > slot)
              slot = v;
          }
        }
        auto to = intern(std::move(next));
        g.succ[id].push_back(to);
      }
    } else {
      auto l = static_cast<letter_id>(p[2]);
      for (auto t : a.successors(static_cast<state_id>(p[0]), l)) {
        std::vector<int> next = p;
        next[0] = static_cast<int>(a.at(t).target);
        next[1] = combine(p[1], a.rank(t));
        next[2] = -1;
        auto to = intern(std::move(next));
        g.succ[id].push_back(to);
      }
    }
  }

  // unsafe: an Adam turn (after at least one letter) where Eve's aggregate is
  // below the frontier's best
  g.unsafe.assign(g.positions.size(), false);
  for (std::size_t i = 0; i < g.positions.size(); ++i) {
    const auto& p = g.positions[i];
    if (p[2] >= 0 || p[1] == empty)
      continue;
    int best = none;
    for (std::size_t q = 0; q < n; ++q)
      if (p[3 + q] != none && (best == none || p[3 + q] > best))
        best = p[3 + q];
    g.unsafe[i] = p[1] < best;
  }

  // greatest fixpoint of Eve's safe region by repeated sweeps
  std::vector<bool> safe(g.positions.size());
  for (std::size_t i = 0; i < safe.size(); ++i)
    safe[i] = !g.unsafe[i];
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < safe.size(); ++i) {
      if (!safe[i])
        continue;
      const bool eve_turn = g.positions[i][2] >= 0;
      bool keep = eve_turn ? false : true;
      for (auto s : g.succ[i]) {
        if (eve_turn && safe[s])
          keep = true;
        if (!eve_turn && !safe[s])
          keep = false;
      }
      if (!keep) {
        safe[i] = false;
        changed = true;
      }
    }
  }
  return safe[0];
}

/// Random automaton parameters. Weights are the integers 0..weights-1
/// (Reachability/Safety fix them to {0,1} with the last state as the sink).
struct gen_config
{
  std::size_t states = 3;
  std::size_t letters = 2;
  std::size_t weights = 2;
  std::size_t min_out = 1;
  std::size_t max_out = 2;
  value_function value_fn = {value_kind::sup, std::nullopt, boolean_class::none};
  word_mode mode = word_mode::finite;
  std::uint64_t seed = 0;
};

inline automaton generate_random(const gen_config& c)
{
  if (c.states == 0 || c.letters == 0 || c.weights == 0)
    throw validation_error("generator bounds must be positive");
  if (c.min_out == 0 || c.max_out < c.min_out)
    throw validation_error("out-degree bounds must satisfy 1 <= min <= max");
  std::mt19937_64 rng(c.seed);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  const auto boolean = c.value_fn.boolean;
  const std::size_t n = c.states;
  const state_id sink = static_cast<state_id>(n - 1);

  std::vector<std::string> alphabet, names;
  for (std::size_t l = 0; l < c.letters; ++l)
    alphabet.push_back(c.letters <= 26 ? std::string(1, static_cast<char>('a' + l))
                                       : "l" + std::to_string(l));
  for (std::size_t q = 0; q < n; ++q)
    names.push_back("s" + std::to_string(q));

  std::vector<transition> ts;
  for (state_id q = 0; q < n; ++q)
    for (letter_id l = 0; l < c.letters; ++l) {
      if (boolean != boolean_class::none && q == sink) {
        ts.push_back({q, l, rational(boolean == boolean_class::reachability ? 1 : 0), q});
        continue;
      }
      std::size_t out = pick(c.min_out, c.max_out);
      std::vector<transition> here;
      for (std::size_t i = 0; i < out; ++i) {
        transition t{q, l, 0, static_cast<state_id>(pick(0, n - 1))};
        if (boolean == boolean_class::none) {
          t.weight = static_cast<long>(pick(0, c.weights - 1));
        } else {
          const bool into_sink = t.target == sink;
          const bool reach = boolean == boolean_class::reachability;
          if (into_sink)
            t.weight = static_cast<long>(pick(0, 1));
          else
            t.weight = reach ? 0 : 1;
        }
        if (std::find(here.begin(), here.end(), t) == here.end())
          here.push_back(t);
      }
      ts.insert(ts.end(), here.begin(), here.end());
    }
  return automaton(std::move(alphabet), std::move(names), 0, std::move(ts), c.value_fn, c.mode);
}

/// Random lasso (or finite word in finite mode) with part lengths <= max_len.
inline lasso_word random_lasso(std::mt19937_64& rng, std::size_t letters, std::size_t max_len,
                               word_mode mode)
{
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  lasso_word w;
  if (mode == word_mode::finite) {
    w.prefix.resize(pick(1, max_len));
  } else {
    w.prefix.resize(pick(0, max_len));
    w.cycle.resize(pick(1, max_len));
  }
  for (auto& x : w.prefix)
    x = static_cast<letter_id>(pick(0, letters - 1));
  for (auto& x : w.cycle)
    x = static_cast<letter_id>(pick(0, letters - 1));
  return w;
}

struct resolver_report
{
  std::size_t samples = 0;
  std::size_t counterexamples = 0;
  std::optional<lasso_word> first_counterexample;
  rational resolver_value = 0;
  rational automaton_value = 0;

  bool ok() const { return counterexamples == 0; }
};

/// Run the resolver builds on `w`. For lassos the run is driven until a
/// (memory node, word position) pair repeats, which closes the run's lasso.
inline run resolver_run(const automaton& a, const resolver& r, const lasso_word& w)
{
  auto step = [&](std::size_t node, letter_id l) {
    if (node >= r.nodes.size())
      throw internal_error("resolver points to a missing memory node");
    const auto& nd = r.nodes[node];
    if (l >= nd.transition.size() || nd.transition[l] < 0 || nd.next[l] < 0)
      throw internal_error("resolver undefined at memory node " + std::to_string(node)
                           + " on letter " + a.alphabet()[l]);
    return std::pair{static_cast<transition_id>(nd.transition[l]), static_cast<std::size_t>(nd.next[l])};
  };
  run out;
  std::size_t node = r.initial;
  if (w.is_finite()) {
    for (auto l : w.prefix) {
      auto [t, next] = step(node, l);
      out.prefix.push_back(t);
      node = next;
    }
    return out;
  }
  std::vector<transition_id> path;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen;
  std::size_t i = 0;
  while (true) {
    if (i >= w.prefix.size()) {
      auto [it, fresh] = seen.emplace(std::pair{node, i}, path.size());
      if (!fresh) {
        auto cut = static_cast<std::ptrdiff_t>(it->second);
        out.prefix.assign(path.begin(), path.begin() + cut);
        out.cycle.assign(path.begin() + cut, path.end());
        return out;
      }
    }
    auto [t, next] = step(node, w.at(i));
    path.push_back(t);
    node = next;
    ++i;
    if (i == w.length())
      i = w.prefix.size();
  }
}

/// Samples lassos (part lengths <= 2n) and compares the resolver's run value
/// with the automaton value. In finite mode every nonempty prefix is checked.
inline resolver_report resolver_check_on_lassos(const automaton& a, const resolver& r,
                                                std::size_t samples, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  resolver_report rep;
  const std::size_t max_len = std::max<std::size_t>(1, 2 * a.state_count());
  for (std::size_t s = 0; s < samples; ++s) {
    auto w = random_lasso(rng, a.letter_count(), max_len, a.mode());
    ++rep.samples;
    std::vector<lasso_word> words;
    if (w.is_finite())
      for (std::size_t len = 1; len <= w.prefix.size(); ++len)
        words.push_back({{w.prefix.begin(), w.prefix.begin() + static_cast<std::ptrdiff_t>(len)}, {}});
    else
      words.push_back(w);
    for (const auto& word : words) {
      auto got = evaluate_run(a, resolver_run(a, r, word));
      auto want = automaton_value(a, word);
      if (got != want) {
        if (!rep.first_counterexample) {
          rep.first_counterexample = word;
          rep.resolver_value = got;
          rep.automaton_value = want;
        }
        ++rep.counterexamples;
        break;
      }
    }
  }
  return rep;
}

} // namespace hdq
