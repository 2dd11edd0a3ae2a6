#pragma once

#include "hdq/arena.hpp"
#include "hdq/automaton.hpp"
#include "hdq/error.hpp"
#include "hdq/solve.hpp"
#include "hdq/token_games.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hdq {

/// Almost-accepting states of a Reachability automaton: those from which Eve,
/// resolving nondeterminism letter by letter, forces every infinite word's
/// run into a target sink. `witness[q][σ]` is a positional choice (lowest
/// transition index among those that make progress), -1 outside the set.
struct almost_accepting
{
  std::vector<bool> states;
  std::vector<std::vector<std::int64_t>> witness;
};

inline almost_accepting almost_accepting_states(const automaton& a)
{
  if (a.value_fn().boolean != boolean_class::reachability)
    throw validation_error("almost-accepting states need a Reachability automaton");
  const std::size_t n = a.state_count(), s = a.letter_count();

  // Product arena: state positions (Adam picks a letter), then (state, letter)
  // positions (Eve picks a transition).
  arena_builder b;
  for (std::size_t q = 0; q < n; ++q)
    b.add_position(player::adam);
  for (std::size_t i = 0; i < n * s; ++i)
    b.add_position(player::eve);
  for (state_id q = 0; q < n; ++q)
    for (letter_id l = 0; l < s; ++l) {
      auto mid = static_cast<position_id>(n + q * s + l);
      b.add_move(q, mid);
      for (auto t : a.successors(q, l))
        b.add_move(mid, a.at(t).target);
    }
  objective goal;
  goal.kind = objective_kind::reachability;
  goal.marked.assign(n + n * s, false);
  auto targets = a.targets();
  for (std::size_t q = 0; q < n; ++q)
    goal.marked[q] = targets[q];
  auto solved = solve_attractor(std::move(b).build(a.initial(), goal));

  almost_accepting r;
  r.states.assign(solved.eve_wins.begin(), solved.eve_wins.begin() + static_cast<std::ptrdiff_t>(n));

  // distance layers for a progress-making witness
  const std::int64_t inf = -1;
  std::vector<std::int64_t> rank(n, inf);
  for (std::size_t q = 0; q < n; ++q)
    if (targets[q])
      rank[q] = 0;
  for (std::int64_t level = 1;; ++level) {
    std::vector<state_id> added;
    for (state_id q = 0; q < n; ++q) {
      if (rank[q] != inf)
        continue;
      bool all_letters = true;
      for (letter_id l = 0; l < s && all_letters; ++l) {
        bool some = false;
        for (auto t : a.successors(q, l)) {
          auto r2 = rank[a.at(t).target];
          if (r2 != inf && r2 < level)
            some = true;
        }
        all_letters = some;
      }
      if (all_letters)
        added.push_back(q);
    }
    if (added.empty())
      break;
    for (auto q : added)
      rank[q] = level;
  }
  r.witness.assign(n, std::vector<std::int64_t>(s, -1));
  for (state_id q = 0; q < n; ++q) {
    if ((rank[q] != inf) != r.states[q])
      throw internal_error("almost-accepting layers disagree with the attractor");
    if (!r.states[q])
      continue;
    for (letter_id l = 0; l < s; ++l)
      for (auto t : a.successors(q, l)) {
        auto r2 = rank[a.at(t).target];
        if (r2 != inf && (r2 < rank[q] || rank[q] == 0)) {
          r.witness[q][l] = t;
          break;
        }
      }
  }
  return r;
}

/// Makes every almost-accepting state a target sink: its transitions become
/// weight-1 self-loops (indices kept) and every transition entering it gets
/// weight 1. Idempotent; keeps the sink shape.
inline automaton polish(const automaton& a)
{
  auto aa = almost_accepting_states(a);
  auto ts = a.transitions();
  for (auto& t : ts) {
    if (aa.states[t.source]) {
      t.target = t.source;
      t.weight = 1;
    } else if (aa.states[t.target]) {
      t.weight = 1;
    }
  }
  return a.with(a.value_fn(), std::move(ts));
}

/// Components A_2..A_k of a LimSup/LimInf automaton as {1,2}-weight automata
/// of the same kind: weight 2 (accepting) iff the rank is at least x.
struct component_family
{
  std::vector<automaton> components; // components[i] is A_{i+2}

  const automaton& at(int x) const { return components.at(static_cast<std::size_t>(x - 2)); }
};

inline component_family decompose(const automaton& a)
{
  auto k = a.value_fn().kind;
  if (k != value_kind::lim_sup && k != value_kind::lim_inf)
    throw validation_error("decompose needs a LimSup or LimInf automaton");
  const int weights = static_cast<int>(a.weight_count());
  if (weights < 2)
    throw validation_error("decompose needs at least two weights");
  component_family f;
  for (int x = 2; x <= weights; ++x) {
    auto ts = a.transitions();
    for (std::size_t i = 0; i < ts.size(); ++i)
      ts[i].weight = a.rank(static_cast<transition_id>(i)) >= x ? 2 : 1;
    value_function vf{k, std::nullopt, boolean_class::none};
    f.components.push_back(a.with(vf, std::move(ts)));
  }
  return f;
}

/// Sup automaton on infinite words to an equivalent LimSup automaton over
/// ranks: k copies, copy i keeps transitions of rank <= i at weight i and
/// sends rank x > i to copy x with weight x. State q_i has index q*k+(i-1).
inline automaton sup_to_limsup(const automaton& a)
{
  if (a.value_fn().kind != value_kind::sup || a.mode() != word_mode::infinite)
    throw validation_error("sup_to_limsup needs a Sup automaton on infinite words");
  const int k = static_cast<int>(a.weight_count());
  std::vector<std::string> names;
  for (const auto& q : a.states())
    for (int i = 1; i <= k; ++i)
      names.push_back(q + "_" + std::to_string(i));
  auto id = [&](state_id q, int i) { return static_cast<state_id>(q * k + (i - 1)); };
  std::vector<transition> ts;
  for (int i = 1; i <= k; ++i)
    for (std::size_t j = 0; j < a.transitions().size(); ++j) {
      const auto& t = a.transitions()[j];
      int x = a.rank(static_cast<transition_id>(j));
      if (x <= i)
        ts.push_back({id(t.source, i), t.letter, rational(i), id(t.target, i)});
      else
        ts.push_back({id(t.source, i), t.letter, rational(x), id(t.target, x)});
    }
  std::sort(ts.begin(), ts.end(), [](const transition& l, const transition& r) {
    return l.source < r.source;
  });
  return automaton(a.alphabet(), std::move(names), id(a.initial(), 1), std::move(ts),
                   value_function{value_kind::lim_sup, std::nullopt, boolean_class::none},
                   word_mode::infinite);
}

/// Finite-memory letter-game strategy: in memory node m with Eve's token in
/// nodes[m].state, on letter σ take transition[σ] and move to next[σ].
struct resolver
{
  struct node
  {
    state_id state = 0;
    std::vector<std::int64_t> transition;
    std::vector<std::int64_t> next;
  };
  std::vector<node> nodes;
  std::size_t initial = 0;

  std::size_t memory_size() const { return nodes.size(); }
};

struct verdict
{
  bool is_hd = false;
  std::string route;
  std::optional<token_game> game;
  std::optional<solve_result> solution;
  player winner = player::eve;
  std::optional<resolver> strategy;

  std::size_t game_size() const { return game ? game->size() : 0; }
};

namespace detail {

// Eve's G1 strategy played against an Adam who copies her transitions. Memory
// nodes are the letter positions met; `on_exit(state)` optionally replaces a
// successor node (used to divert to an almost-acceptance witness).
template <class Divert>
resolver copycat_resolver(const automaton& a, const token_game& g, const solve_result& sol,
                          Divert&& divert)
{
  const arena& ar = g.game;
  resolver r;
  std::map<position_id, std::size_t> node_of;
  std::vector<position_id> todo;

  auto node_for = [&](position_id p) -> std::size_t {
    auto it = node_of.find(p);
    if (it != node_of.end())
      return it->second;
    std::size_t id = r.nodes.size();
    node_of.emplace(p, id);
    resolver::node n;
    n.state = g.positions[p].eve;
    n.transition.assign(a.letter_count(), -1);
    n.next.assign(a.letter_count(), -1);
    r.nodes.push_back(std::move(n));
    todo.push_back(p);
    return id;
  };

  node_for(ar.initial());
  while (!todo.empty()) {
    position_id p = todo.back();
    todo.pop_back();
    std::size_t me = node_of.at(p);
    for (move_id lm : ar.out(p)) {
      if (g.move_letter[lm] < 0)
        continue;
      auto sigma = static_cast<std::size_t>(g.move_letter[lm]);
      position_id e = ar.to(lm);
      if (!sol.eve.defined(e))
        throw internal_error("Eve's G1 strategy undefined against copycat play");
      move_id em = sol.eve.at(e);
      auto t = g.move_transition[em];
      position_id ap = ar.to(em);
      std::int64_t copy = -1;
      for (move_id am : ar.out(ap))
        if (g.move_transition[am] == t) {
          copy = am;
          break;
        }
      if (copy < 0)
        throw internal_error("copycat move unavailable");
      position_id next = ar.to(static_cast<move_id>(copy));
      r.nodes[me].transition[sigma] = t;
      auto diverted = divert(a.at(static_cast<transition_id>(t)).target);
      r.nodes[me].next[sigma] = diverted >= 0 ? diverted : static_cast<std::int64_t>(node_for(next));
    }
  }
  return r;
}

inline bool g1_route(const std::string& route)
{
  return route.rfind("G1-", 0) == 0;
}

} // namespace detail

namespace detail {

// Resolver for Reachability on infinite words: Eve's G1 strategy on the
// polished automaton (finite words) until her state is almost accepting,
// then the positional almost-acceptance witness.
inline resolver reachability_infinite_resolver(const automaton& a)
{
  auto aa = almost_accepting_states(a);
  auto polished = polish(a).with_mode(word_mode::finite);
  auto g = build_g1_reach_safety(polished);
  auto sol = solve(g.game);
  if (!sol.eve_wins[g.game.initial()])
    throw internal_error("Eve loses G1 on the polished automaton although she wins G1");

  resolver r;
  std::vector<std::int64_t> witness_node(a.state_count(), -1);
  // witness nodes first, one per almost-accepting state
  for (state_id q = 0; q < a.state_count(); ++q)
    if (aa.states[q]) {
      witness_node[q] = static_cast<std::int64_t>(r.nodes.size());
      r.nodes.push_back({q, {}, {}});
    }
  for (state_id q = 0; q < a.state_count(); ++q) {
    if (!aa.states[q])
      continue;
    auto& n = r.nodes[static_cast<std::size_t>(witness_node[q])];
    n.transition = aa.witness[q];
    n.next.assign(a.letter_count(), -1);
    for (letter_id l = 0; l < a.letter_count(); ++l)
      n.next[l] = witness_node[a.at(static_cast<transition_id>(aa.witness[q][l])).target];
  }
  if (aa.states[a.initial()]) {
    r.initial = static_cast<std::size_t>(witness_node[a.initial()]);
    return r;
  }
  auto copy = copycat_resolver(a, g, sol, [&](state_id target) -> std::int64_t {
    return aa.states[target] ? witness_node[target] + 0 : -1;
  });
  // append copycat nodes after the witness nodes, shifting their links
  const auto shift = static_cast<std::int64_t>(r.nodes.size());
  for (auto& n : copy.nodes) {
    for (std::size_t l = 0; l < n.next.size(); ++l)
      if (n.next[l] >= 0 && !aa.states[a.at(static_cast<transition_id>(n.transition[l])).target])
        n.next[l] += shift;
    r.nodes.push_back(std::move(n));
  }
  r.initial = copy.initial + static_cast<std::size_t>(shift);
  return r;
}

} // namespace detail

/// Decides history-determinism by building and solving the token game that
/// characterises HDness for the automaton's class.
inline verdict decide_hd(const automaton& a)
{
  const auto& vf = a.value_fn();
  if (vf.kind == value_kind::sum || vf.kind == value_kind::avg)
    throw out_of_scope_error(vf.name()
                             + " automata: HDness is decided through determinisability by pruning,"
                               " which this library does not implement");
  const bool finite = a.mode() == word_mode::finite;

  verdict v;
  token_game g;
  if (vf.boolean != boolean_class::none) {
    g = build_g1_reach_safety(a);
  } else {
    switch (vf.kind) {
    case value_kind::sup: g = finite ? build_g1_sup_finite(a) : build_g2_sup(a); break;
    case value_kind::inf: g = build_g1_inf(a); break;
    case value_kind::dsum: g = build_g1_dsum(a); break;
    case value_kind::lim_sup:
    case value_kind::lim_inf:
      if (a.weight_count() == 1) {
        v.is_hd = true;
        v.route = "trivial-single-weight";
        v.winner = player::eve;
        return v;
      }
      g = vf.kind == value_kind::lim_sup ? build_g2_limsup(a) : build_g2_liminf(a);
      break;
    default: throw internal_error("unreachable value function");
    }
  }
  auto sol = solve(g.game);
  v.is_hd = sol.eve_wins[g.game.initial()];
  v.winner = v.is_hd ? player::eve : player::adam;
  v.route = g.builder;
  if (v.is_hd && detail::g1_route(v.route)) {
    if (vf.boolean == boolean_class::reachability && !finite)
      v.strategy = detail::reachability_infinite_resolver(a);
    else
      v.strategy = detail::copycat_resolver(a, g, sol, [](state_id) -> std::int64_t { return -1; });
  }
  v.game = std::move(g);
  v.solution = std::move(sol);
  return v;
}

/// The resolver attached to an HD verdict of a G1 route.
inline const resolver& extract_resolver(const verdict& v)
{
  if (!v.is_hd)
    throw validation_error("no resolver: the automaton is not HD");
  if (!v.strategy)
    throw unsupported_error("no resolver extraction for route " + v.route);
  return *v.strategy;
}

} // namespace hdq
