#pragma once

#include "hdq/arena.hpp"
#include "hdq/detail/discounted.hpp"
#include "hdq/error.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <vector>

namespace hdq {

namespace detail {

// Attractor of `target` for player `who`: positions from which `who` forces
// a visit to `target`. Fills `strategy` (move id) on `who`'s attracted
// positions outside the target.
inline std::vector<bool> attractor(const arena& ar, const std::vector<bool>& target, player who,
                                   std::vector<std::int64_t>& strategy)
{
  const std::size_t n = ar.size();
  std::vector<bool> in(target);
  std::vector<std::uint32_t> count(n);
  std::deque<position_id> todo;
  for (position_id p = 0; p < n; ++p) {
    count[p] = static_cast<std::uint32_t>(ar.out(p).size());
    if (in[p])
      todo.push_back(p);
  }
  while (!todo.empty()) {
    position_id u = todo.front();
    todo.pop_front();
    for (move_id m : ar.in(u)) {
      position_id v = ar.from(m);
      if (in[v])
        continue;
      if (ar.owner(v) == who) {
        in[v] = true;
        strategy[v] = m;
        todo.push_back(v);
      } else if (--count[v] == 0) {
        in[v] = true;
        todo.push_back(v);
      }
    }
  }
  return in;
}

inline void first_move_where(const arena& ar, position_id p, std::vector<std::int64_t>& strategy,
                             const std::vector<bool>& region, bool inside)
{
  for (move_id m : ar.out(p))
    if (region[ar.to(m)] == inside) {
      strategy[p] = m;
      return;
    }
  strategy[p] = ar.out(p)[0];
}

} // namespace detail

/// Safety (Eve avoids marked positions) or reachability (Eve reaches them).
inline solve_result solve_attractor(const arena& ar)
{
  const auto& goal = ar.goal();
  if (goal.kind != objective_kind::safety && goal.kind != objective_kind::reachability)
    throw validation_error("solve_attractor needs a safety or reachability objective");
  const std::size_t n = ar.size();
  const bool safety = goal.kind == objective_kind::safety;
  const player attracting = safety ? player::adam : player::eve;

  std::vector<std::int64_t> attr_strategy(n, -1);
  auto attr = detail::attractor(ar, goal.marked, attracting, attr_strategy);

  solve_result r;
  r.eve_wins.assign(n, false);
  r.eve.move.assign(n, -1);
  r.adam.move.assign(n, -1);
  for (position_id p = 0; p < n; ++p) {
    r.eve_wins[p] = safety ? !attr[p] : bool(attr[p]);
    const player o = ar.owner(p);
    auto& strat = o == player::eve ? r.eve.move : r.adam.move;
    const bool owner_wins = (o == player::eve) == r.eve_wins[p];
    if (!owner_wins)
      continue;
    if (o == attracting) {
      if (attr_strategy[p] >= 0)
        strat[p] = attr_strategy[p];
      else
        strat[p] = ar.out(p)[0]; // already in the marked set
    } else {
      detail::first_move_where(ar, p, strat, attr, false);
    }
  }
  return r;
}

namespace detail {

// Positions from which `who` can make priority-`bad` moves occur only
// finitely often (co-Büchi for `who`), with a positional witness.
// Y_{j+1} = νX. { p : `who` forces a move m with (prio(m) != bad ∧ to ∈ X) ∨ to ∈ Y_j }.
inline std::vector<bool> cobuchi_region(const arena& ar, player who, int bad,
                                        std::vector<std::int64_t>& strategy)
{
  const std::size_t n = ar.size();
  std::vector<bool> y(n, false);
  std::vector<std::int64_t> rank(n, -1);
  std::int64_t level = 0;
  for (;;) {
    ++level;
    // good(m) w.r.t. current X
    std::vector<bool> x(n, true);
    auto good = [&](move_id m) {
      position_id t = ar.to(m);
      return y[t] || (ar.priority(m) != bad && x[t]);
    };
    std::vector<std::uint32_t> count(n, 0);
    std::deque<position_id> removed;
    for (position_id p = 0; p < n; ++p)
      for (move_id m : ar.out(p))
        if (good(m))
          ++count[p];
    for (position_id p = 0; p < n; ++p) {
      bool ok = ar.owner(p) == who ? count[p] > 0 : count[p] == ar.out(p).size();
      if (!ok) {
        x[p] = false;
        removed.push_back(p);
      }
    }
    // Removing p from X can only invalidate moves into p that relied on x[p].
    while (!removed.empty()) {
      position_id u = removed.front();
      removed.pop_front();
      if (y[u])
        continue;
      for (move_id m : ar.in(u)) {
        if (ar.priority(m) == bad)
          continue;
        position_id v = ar.from(m);
        if (!x[v])
          continue;
        --count[v];
        bool ok = ar.owner(v) == who ? count[v] > 0 : count[v] == ar.out(v).size();
        if (!ok) {
          x[v] = false;
          removed.push_back(v);
        }
      }
    }
    bool grew = false;
    for (position_id p = 0; p < n; ++p)
      if (x[p] && !y[p]) {
        grew = true;
        rank[p] = level;
      }
    if (!grew)
      break;
    for (position_id p = 0; p < n; ++p)
      if (x[p])
        y[p] = true;
    // strategies for the new layer: prefer strictly lower layers
    for (position_id p = 0; p < n; ++p) {
      if (rank[p] != level || ar.owner(p) != who)
        continue;
      std::int64_t pick = -1;
      for (move_id m : ar.out(p)) {
        auto t = ar.to(m);
        if (rank[t] >= 0 && rank[t] < level) {
          pick = m;
          break;
        }
      }
      if (pick < 0)
        for (move_id m : ar.out(p))
          if (ar.priority(m) != bad && rank[ar.to(m)] == level) {
            pick = m;
            break;
          }
      if (pick < 0)
        throw internal_error("co-Buchi layer without witness move");
      strategy[p] = pick;
    }
  }
  return y;
}

// Positions from which `who` forces priority-`good` moves infinitely often.
// νZ. μW. { p : `who` forces a move m with (prio(m) == good ∧ to ∈ Z) ∨ to ∈ W }.
inline std::vector<bool> buchi_region(const arena& ar, player who, int good,
                                      std::vector<std::int64_t>& strategy)
{
  const std::size_t n = ar.size();
  std::vector<bool> z(n, true);
  for (;;) {
    // μW: attractor-like layering where a good move into Z counts as a hit.
    std::vector<bool> w(n, false);
    std::vector<std::uint32_t> count(n, 0);
    std::deque<position_id> todo;
    auto hit = [&](move_id m) { return ar.priority(m) == good && z[ar.to(m)]; };
    for (position_id p = 0; p < n; ++p) {
      if (!z[p])
        continue;
      std::uint32_t hits = 0;
      std::int64_t first_hit = -1;
      for (move_id m : ar.out(p))
        if (hit(m)) {
          ++hits;
          if (first_hit < 0)
            first_hit = m;
        }
      count[p] = static_cast<std::uint32_t>(ar.out(p).size()) - hits;
      bool in = ar.owner(p) == who ? hits > 0 : count[p] == 0;
      if (in) {
        w[p] = true;
        if (ar.owner(p) == who)
          strategy[p] = first_hit;
        todo.push_back(p);
      }
    }
    while (!todo.empty()) {
      position_id u = todo.front();
      todo.pop_front();
      for (move_id m : ar.in(u)) {
        position_id v = ar.from(m);
        if (!z[v] || w[v] || hit(m))
          continue;
        if (ar.owner(v) == who) {
          w[v] = true;
          strategy[v] = m;
          todo.push_back(v);
        } else if (--count[v] == 0) {
          w[v] = true;
          todo.push_back(v);
        }
      }
    }
    bool shrank = false;
    for (position_id p = 0; p < n; ++p)
      if (z[p] && !w[p]) {
        z[p] = false;
        shrank = true;
      }
    if (!shrank)
      return z;
  }
}

} // namespace detail

/// Co-Büchi game: Eve wins iff priority-1 moves occur finitely often. Eve's
/// and Adam's regions are computed by separate fixpoints and must partition.
inline solve_result solve_cobuchi(const arena& ar)
{
  if (ar.goal().kind != objective_kind::cobuchi)
    throw validation_error("solve_cobuchi needs a co-Buchi objective");
  const std::size_t n = ar.size();
  solve_result r;
  r.eve.move.assign(n, -1);
  r.adam.move.assign(n, -1);
  r.eve_wins = detail::cobuchi_region(ar, player::eve, 1, r.eve.move);
  auto adam_wins = detail::buchi_region(ar, player::adam, 1, r.adam.move);
  for (position_id p = 0; p < n; ++p) {
    if (r.eve_wins[p] == adam_wins[p])
      throw internal_error("co-Buchi regions do not partition the arena");
    if (r.eve_wins[p])
      r.adam.move[p] = -1;
    else
      r.eve.move[p] = -1;
  }
  return r;
}

namespace detail {

// Zielonka's algorithm on a node-priority game given in CSR form.
class zielonka
{
public:
  zielonka(std::vector<player> owner, std::vector<int> prio,
           std::vector<std::vector<std::uint32_t>> succ)
    : owner_(std::move(owner)), prio_(std::move(prio)), succ_(std::move(succ)),
      pred_(succ_.size()), strategy_(succ_.size(), -1)
  {
    for (std::uint32_t v = 0; v < succ_.size(); ++v)
      for (auto u : succ_[v])
        pred_[u].push_back(v);
  }

  // Returns true per node iff Eve (even) wins; strategy() gives a successor.
  std::vector<bool> solve()
  {
    std::vector<std::uint32_t> all(succ_.size());
    for (std::uint32_t v = 0; v < all.size(); ++v)
      all[v] = v;
    std::vector<char> in(succ_.size(), 1);
    std::vector<bool> eve(succ_.size(), false);
    auto won = run(all, in);
    for (auto v : won[0])
      eve[v] = true;
    return eve;
  }

  const std::vector<std::int64_t>& strategy() const { return strategy_; }

private:
  using node_set = std::vector<std::uint32_t>;

  // Attractor inside the subgame `in` (membership flags) for player `who`.
  node_set attract(const node_set& nodes, const std::vector<char>& in, const node_set& target,
                   player who, std::vector<char>& mark)
  {
    node_set result;
    std::vector<std::uint32_t>& count = scratch_count_;
    if (count.size() < succ_.size())
      count.assign(succ_.size(), 0);
    for (auto v : nodes) {
      std::uint32_t c = 0;
      for (auto u : succ_[v])
        if (in[u])
          ++c;
      count[v] = c;
    }
    std::deque<std::uint32_t> todo;
    for (auto v : target)
      if (!mark[v]) {
        mark[v] = 1;
        result.push_back(v);
        todo.push_back(v);
      }
    while (!todo.empty()) {
      auto u = todo.front();
      todo.pop_front();
      for (auto v : pred_[u]) {
        if (!in[v] || mark[v])
          continue;
        if (owner_[v] == who) {
          mark[v] = 1;
          strategy_[v] = u;
          result.push_back(v);
          todo.push_back(v);
        } else if (--count[v] == 0) {
          mark[v] = 1;
          result.push_back(v);
          todo.push_back(v);
        }
      }
    }
    return result;
  }

  // Returns {Eve's region, Adam's region} of the subgame.
  // `in` flags the subgame; restored on return.
  std::array<node_set, 2> run(node_set nodes, std::vector<char>& in)
  {
    std::array<node_set, 2> won;
    const node_set original = nodes;
    auto restore = [&] {
      for (auto v : original)
        in[v] = 1;
    };
    while (!nodes.empty()) {
      int d = -1;
      for (auto v : nodes)
        d = std::max(d, prio_[v]);
      const int i = d % 2; // 0: Eve
      const player pi = i == 0 ? player::eve : player::adam;
      node_set top;
      for (auto v : nodes)
        if (prio_[v] == d)
          top.push_back(v);
      std::vector<char> mark(succ_.size(), 0);
      auto a = attract(nodes, in, top, pi, mark);

      node_set rest;
      for (auto v : nodes)
        if (!mark[v])
          rest.push_back(v);
      for (auto v : a)
        in[v] = 0;
      auto sub = run(rest, in);
      for (auto v : a)
        in[v] = 1;

      if (sub[1 - i].empty()) {
        // player i wins the whole subgame
        for (auto v : top)
          if (owner_[v] == pi)
            for (auto u : succ_[v])
              if (in[u]) {
                strategy_[v] = u;
                break;
              }
        for (auto v : nodes)
          won[i].push_back(v);
        restore();
        return won;
      }
      std::vector<char> mark_b(succ_.size(), 0);
      auto b = attract(nodes, in, sub[1 - i], i == 0 ? player::adam : player::eve, mark_b);
      for (auto v : b) {
        won[1 - i].push_back(v);
        in[v] = 0;
      }
      node_set next;
      for (auto v : nodes)
        if (!mark_b[v])
          next.push_back(v);
      nodes.swap(next);
    }
    restore();
    return won;
  }

  std::vector<player> owner_;
  std::vector<int> prio_;
  std::vector<std::vector<std::uint32_t>> succ_, pred_;
  std::vector<std::int64_t> strategy_;
  std::vector<std::uint32_t> scratch_count_;
};

} // namespace detail

/// Parity game, max-even, priorities on moves. Moves with a positive priority
/// are split through a fresh node carrying it; original positions get 0.
inline solve_result solve_parity(const arena& ar)
{
  const auto kind = ar.goal().kind;
  if (kind != objective_kind::parity && kind != objective_kind::cobuchi)
    throw validation_error("solve_parity needs a parity objective");
  const std::size_t n = ar.size();
  std::vector<player> owner(ar.owners());
  std::vector<int> prio(n, 0);
  std::vector<std::vector<std::uint32_t>> succ(n);
  std::vector<std::int64_t> node_move; // split node -> move
  for (position_id p = 0; p < n; ++p)
    for (move_id m : ar.out(p)) {
      if (ar.priority(m) == 0) {
        succ[p].push_back(ar.to(m));
        continue;
      }
      auto mid = static_cast<std::uint32_t>(owner.size());
      owner.push_back(player::eve);
      prio.push_back(ar.priority(m));
      succ.push_back({ar.to(m)});
      node_move.push_back(m);
      succ[p].push_back(mid);
    }
  detail::zielonka z(std::move(owner), std::move(prio), std::move(succ));
  auto eve_node = z.solve();
  const auto& strat = z.strategy();

  solve_result r;
  r.eve_wins.assign(eve_node.begin(), eve_node.begin() + static_cast<std::ptrdiff_t>(n));
  r.eve.move.assign(n, -1);
  r.adam.move.assign(n, -1);
  for (position_id p = 0; p < n; ++p) {
    const bool owner_wins = (ar.owner(p) == player::eve) == r.eve_wins[p];
    if (!owner_wins)
      continue;
    std::int64_t target = strat[p];
    if (target < 0)
      throw internal_error("parity solver left a winning position without strategy");
    std::int64_t chosen = -1;
    if (static_cast<std::size_t>(target) >= n) {
      chosen = node_move[static_cast<std::size_t>(target) - n];
    } else {
      for (move_id m : ar.out(p))
        if (ar.priority(m) == 0 && ar.to(m) == static_cast<position_id>(target)) {
          chosen = m;
          break;
        }
    }
    if (chosen < 0)
      throw internal_error("parity strategy does not map to a move");
    (ar.owner(p) == player::eve ? r.eve.move : r.adam.move)[p] = chosen;
  }
  return r;
}

/// Discounted-sum threshold game with a discount per move: Eve wins from p
/// iff the optimal value at p is at least the threshold. Values are exact.
inline solve_result solve_multidiscount(const arena& ar)
{
  if (ar.goal().kind != objective_kind::multi_discount)
    throw validation_error("solve_multidiscount needs a multi-discount objective");
  const std::size_t n = ar.size();
  std::vector<char> maxi(n);
  for (position_id p = 0; p < n; ++p)
    maxi[p] = ar.owner(p) == player::eve ? 1 : 0;
  detail::discounted_graph g{maxi, ar.targets(), ar.weights(), ar.discounts(),
                             ar.out_offsets(), ar.out_moves()};
  auto sol = detail::solve_discounted(g);

  solve_result r;
  r.eve_wins.assign(n, false);
  r.eve.move.assign(n, -1);
  r.adam.move.assign(n, -1);
  for (position_id p = 0; p < n; ++p) {
    r.eve_wins[p] = sol.value[p] >= ar.goal().threshold;
    if (ar.owner(p) == player::eve && r.eve_wins[p])
      r.eve.move[p] = sol.choice[p];
    if (ar.owner(p) == player::adam && !r.eve_wins[p])
      r.adam.move[p] = sol.choice[p];
  }
  r.values = std::move(sol.value);
  return r;
}

inline solve_result solve(const arena& ar)
{
  switch (ar.goal().kind) {
  case objective_kind::safety:
  case objective_kind::reachability: return solve_attractor(ar);
  case objective_kind::cobuchi: return solve_cobuchi(ar);
  case objective_kind::parity: return solve_parity(ar);
  case objective_kind::multi_discount: return solve_multidiscount(ar);
  }
  throw internal_error("unknown objective");
}

} // namespace hdq
