#pragma once

#include "hdq/arena.hpp"
#include "hdq/detail/scc.hpp"
#include "hdq/solve.hpp"

#include <random>
#include <string>
#include <vector>

namespace test {

using namespace hdq;

struct arena_shape
{
  std::size_t positions = 6;
  std::size_t max_out = 3;
  int max_priority = 4;
  objective_kind kind = objective_kind::parity;
};

inline arena random_arena(std::mt19937_64& rng, const arena_shape& s)
{
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const rational discounts[] = {rational(1, 2), rational(2, 3), rational(3, 4), rational(1, 3)};
  arena_builder b;
  for (std::size_t p = 0; p < s.positions; ++p)
    b.add_position(pick(0, 1) ? player::eve : player::adam);
  const int n = static_cast<int>(s.positions);
  for (int p = 0; p < n; ++p) {
    int out = pick(1, static_cast<int>(s.max_out));
    for (int i = 0; i < out; ++i) {
      auto to = static_cast<position_id>(pick(0, n - 1));
      switch (s.kind) {
      case objective_kind::parity: b.add_move(p, to, pick(0, s.max_priority)); break;
      case objective_kind::cobuchi: b.add_move(p, to, pick(0, 1)); break;
      case objective_kind::multi_discount:
        b.add_move(p, to, rational(pick(-3, 3)), discounts[pick(0, 3)]);
        break;
      default: b.add_move(p, to); break;
      }
    }
  }
  objective goal;
  goal.kind = s.kind;
  if (s.kind == objective_kind::safety || s.kind == objective_kind::reachability) {
    goal.marked.resize(s.positions);
    for (std::size_t p = 0; p < s.positions; ++p)
      goal.marked[p] = pick(0, 3) == 0;
  }
  return std::move(b).build(0, goal);
}

// Graph of the arena with `who`'s moves fixed by `choice` (other positions keep
// all moves). Edges carry their move ids.
struct restricted
{
  std::vector<std::vector<std::uint32_t>> adj;
  std::vector<std::vector<move_id>> via;
};

inline restricted restrict_to(const arena& ar, player who, const std::vector<std::int64_t>& choice)
{
  restricted g;
  g.adj.resize(ar.size());
  g.via.resize(ar.size());
  for (position_id p = 0; p < ar.size(); ++p)
    for (move_id m : ar.out(p)) {
      if (ar.owner(p) == who && choice[p] >= 0 && static_cast<move_id>(choice[p]) != m)
        continue;
      g.adj[p].push_back(ar.to(m));
      g.via[p].push_back(m);
    }
  return g;
}

inline std::vector<bool> reach_from(const restricted& g, position_id start,
                                    const std::vector<bool>* stop = nullptr)
{
  std::vector<bool> seen(g.adj.size(), false);
  std::vector<std::uint32_t> todo{start};
  seen[start] = true;
  while (!todo.empty()) {
    auto v = todo.back();
    todo.pop_back();
    if (stop && (*stop)[v])
      continue;
    for (auto u : g.adj[v])
      if (!seen[u]) {
        seen[u] = true;
        todo.push_back(u);
      }
  }
  return seen;
}

// Is there a cycle within `active` whose maximal priority has parity `parity`?
inline bool cycle_with_max_parity(const arena& ar, const restricted& g, const std::vector<bool>& active,
                                  int parity)
{
  for (int p = ar.max_priority(); p >= 0; --p) {
    if (p % 2 != parity)
      continue;
    std::vector<std::vector<std::uint32_t>> sub(g.adj.size());
    for (std::uint32_t v = 0; v < g.adj.size(); ++v)
      for (std::size_t k = 0; k < g.adj[v].size(); ++k)
        if (ar.priority(g.via[v][k]) <= p)
          sub[v].push_back(g.adj[v][k]);
    auto comp = hdq::detail::strongly_connected(sub, &active);
    for (std::uint32_t v = 0; v < g.adj.size(); ++v)
      for (std::size_t k = 0; k < g.adj[v].size(); ++k) {
        auto u = g.adj[v][k];
        if (active[v] && active[u] && comp[v] >= 0 && comp[v] == comp[u]
            && ar.priority(g.via[v][k]) == p)
          return true;
      }
  }
  return false;
}

// Naive parity solver: Eve wins from v iff some positional Eve strategy
// leaves no reachable cycle with an odd maximal priority.
inline std::vector<bool> naive_parity(const arena& ar)
{
  std::vector<position_id> choice_points;
  for (position_id p = 0; p < ar.size(); ++p)
    if (ar.owner(p) == player::eve)
      choice_points.push_back(p);
  std::vector<bool> eve(ar.size(), false);
  std::vector<std::size_t> digit(choice_points.size(), 0);
  std::vector<std::int64_t> choice(ar.size(), -1);
  for (;;) {
    for (std::size_t i = 0; i < choice_points.size(); ++i)
      choice[choice_points[i]] = ar.out(choice_points[i])[digit[i]];
    auto g = restrict_to(ar, player::eve, choice);
    for (position_id v = 0; v < ar.size(); ++v)
      if (!eve[v] && !cycle_with_max_parity(ar, g, reach_from(g, v), 1))
        eve[v] = true;
    std::size_t i = 0;
    for (; i < digit.size(); ++i) {
      if (++digit[i] < ar.out(choice_points[i]).size())
        break;
      digit[i] = 0;
    }
    if (i == digit.size())
      return eve;
  }
}

// Checks that each player's returned strategy wins from every position of
// their region, by inspecting all plays consistent with it. Returns an empty
// string or a description of the first problem.
inline std::string verify_strategies(const arena& ar, const solve_result& r)
{
  const auto kind = ar.goal().kind;
  if (kind == objective_kind::multi_discount)
    return "use verify_values for multi-discount arenas";
  for (int side = 0; side < 2; ++side) {
    const player who = side == 0 ? player::eve : player::adam;
    const auto& strat = side == 0 ? r.eve.move : r.adam.move;
    for (position_id p = 0; p < ar.size(); ++p) {
      if ((r.eve_wins[p]) != (who == player::eve))
        continue;
      if (ar.owner(p) == who) {
        if (strat[p] < 0)
          return "undefined strategy at " + std::to_string(p);
        if (ar.from(static_cast<move_id>(strat[p])) != p)
          return "strategy move does not leave " + std::to_string(p);
      }
    }
    auto g = restrict_to(ar, who, strat);
    const bool decided_on_marked =
        kind == objective_kind::safety || kind == objective_kind::reachability;
    for (position_id p = 0; p < ar.size(); ++p) {
      if ((r.eve_wins[p]) != (who == player::eve))
        continue;
      auto reach = reach_from(g, p, decided_on_marked ? &ar.goal().marked : nullptr);
      for (position_id q = 0; q < ar.size(); ++q)
        if (reach[q] && r.eve_wins[q] != r.eve_wins[p] && !(decided_on_marked && ar.goal().marked[q]))
          return "play leaves the region from " + std::to_string(p);
      bool eve_ok = true;
      switch (kind) {
      case objective_kind::safety:
        for (position_id q = 0; q < ar.size(); ++q)
          if (reach[q] && ar.goal().marked[q])
            eve_ok = false;
        break;
      case objective_kind::reachability: {
        std::vector<bool> avoid = reach;
        for (position_id q = 0; q < ar.size(); ++q)
          if (ar.goal().marked[q])
            avoid[q] = false;
        bool cycle = false;
        auto cyc = hdq::detail::on_cycle(g.adj, &avoid);
        for (position_id q = 0; q < ar.size(); ++q)
          cycle = cycle || cyc[q];
        eve_ok = !cycle;
        break;
      }
      case objective_kind::cobuchi:
      case objective_kind::parity:
        eve_ok = !cycle_with_max_parity(ar, g, reach, 1);
        break;
      default: break;
      }
      if (who == player::eve && !eve_ok)
        return "Eve's strategy loses from " + std::to_string(p);
      if (who == player::adam) {
        bool adam_ok = false;
        switch (kind) {
        case objective_kind::safety: {
          // Adam must reach a marked position on every play: no marked-free cycle
          std::vector<bool> avoid = reach;
          for (position_id q = 0; q < ar.size(); ++q)
            if (ar.goal().marked[q])
              avoid[q] = false;
          auto cyc = hdq::detail::on_cycle(g.adj, &avoid);
          adam_ok = true;
          for (position_id q = 0; q < ar.size(); ++q)
            if (cyc[q])
              adam_ok = false;
          break;
        }
        case objective_kind::reachability:
          adam_ok = true;
          for (position_id q = 0; q < ar.size(); ++q)
            if (reach[q] && ar.goal().marked[q])
              adam_ok = false;
          break;
        default: adam_ok = !cycle_with_max_parity(ar, g, reach, 0); break;
        }
        if (!adam_ok)
          return "Adam's strategy loses from " + std::to_string(p);
      }
    }
  }
  return {};
}

// Multi-discount certificate: the returned values satisfy the Bellman
// equations exactly and both strategies attain them.
inline std::string verify_values(const arena& ar, const solve_result& r)
{
  for (position_id p = 0; p < ar.size(); ++p) {
    std::optional<rational> best;
    for (move_id m : ar.out(p)) {
      rational v = ar.weight(m) + ar.discount(m) * r.values[ar.to(m)];
      if (!best || (ar.owner(p) == player::eve ? v > *best : v < *best))
        best = v;
    }
    if (*best != r.values[p])
      return "Bellman equation fails at " + std::to_string(p);
    if ((r.values[p] >= ar.goal().threshold) != static_cast<bool>(r.eve_wins[p]))
      return "region disagrees with value at " + std::to_string(p);
    const auto& strat = ar.owner(p) == player::eve ? r.eve.move : r.adam.move;
    bool mine = (ar.owner(p) == player::eve) == static_cast<bool>(r.eve_wins[p]);
    if (mine) {
      if (strat[p] < 0)
        return "missing strategy at " + std::to_string(p);
      auto m = static_cast<move_id>(strat[p]);
      if (ar.weight(m) + ar.discount(m) * r.values[ar.to(m)] != r.values[p])
        return "strategy not optimal at " + std::to_string(p);
    }
  }
  return {};
}

} // namespace test
