#pragma once

#include "hdq/error.hpp"
#include "hdq/rational.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

// Exact discounted-sum games with a discount per move. Positions are owned
// by the maximiser or the minimiser; every position has a move. Values are
// computed by double-precision value iteration (warm start only), then exact
// strategy iteration over rationals: the maximiser improves, the minimiser
// best-responds, until no strict improvement is left.

namespace hdq::detail {

struct discounted_graph
{
  std::span<const char> maximizer; // per position
  std::span<const std::uint32_t> to; // per move
  std::span<const rational> weight; // per move
  std::span<const rational> discount; // per move
  std::span<const std::uint32_t> out_offset; // CSR, size positions+1
  std::span<const std::uint32_t> out_moves;

  std::size_t size() const { return maximizer.size(); }
};

struct discounted_solution
{
  std::vector<rational> value;
  std::vector<std::int64_t> choice; // move per position
};

// Exact value of every position when each position plays choice[p]: each
// walk ends on a cycle whose value is S / (1 - P).
inline std::vector<rational> evaluate_choice(const discounted_graph& g,
                                             const std::vector<std::int64_t>& choice)
{
  const std::size_t n = g.size();
  std::vector<rational> value(n);
  std::vector<std::uint8_t> state(n, 0);
  std::vector<std::int64_t> index(n, -1);
  std::vector<std::uint32_t> path;

  auto mv = [&](std::uint32_t p) { return static_cast<std::size_t>(choice[p]); };

  for (std::uint32_t s = 0; s < n; ++s) {
    if (state[s] != 0)
      continue;
    path.clear();
    std::uint32_t x = s;
    while (state[x] == 0) {
      state[x] = 1;
      index[x] = static_cast<std::int64_t>(path.size());
      path.push_back(x);
      x = g.to[mv(x)];
    }
    if (state[x] == 1) {
      auto start = static_cast<std::size_t>(index[x]);
      rational sum = 0, prod = 1;
      for (std::size_t j = start; j < path.size(); ++j) {
        auto m = mv(path[j]);
        sum += prod * g.weight[m];
        prod *= g.discount[m];
      }
      value[x] = sum / (1 - prod);
      state[x] = 2;
      for (std::size_t j = path.size(); j-- > start + 1;) {
        auto m = mv(path[j]);
        value[path[j]] = g.weight[m] + g.discount[m] * value[g.to[m]];
        state[path[j]] = 2;
      }
      path.resize(start);
    }
    for (std::size_t j = path.size(); j-- > 0;) {
      auto m = mv(path[j]);
      value[path[j]] = g.weight[m] + g.discount[m] * value[g.to[m]];
      state[path[j]] = 2;
    }
  }
  return value;
}

inline std::vector<double> approximate_values(const discounted_graph& g, std::size_t max_rounds = 4000)
{
  const std::size_t n = g.size();
  const std::size_t m = g.to.size();
  std::vector<double> w(m), l(m);
  for (std::size_t i = 0; i < m; ++i) {
    w[i] = to_double(g.weight[i]);
    l[i] = to_double(g.discount[i]);
  }
  std::vector<double> v(n, 0.0), next(n, 0.0);
  for (std::size_t round = 0; round < max_rounds; ++round) {
    double delta = 0;
    for (std::size_t p = 0; p < n; ++p) {
      bool first = true;
      double best = 0;
      for (auto k = g.out_offset[p]; k < g.out_offset[p + 1]; ++k) {
        auto mi = g.out_moves[k];
        double c = w[mi] + l[mi] * v[g.to[mi]];
        if (first || (g.maximizer[p] ? c > best : c < best))
          best = c;
        first = false;
      }
      next[p] = best;
      delta = std::max(delta, std::abs(best - v[p]));
    }
    v.swap(next);
    if (delta < 1e-13)
      break;
  }
  return v;
}

// One step of local improvement for `player_is_max` positions. Returns true if
// some position switched to a strictly better move.
inline bool improve(const discounted_graph& g, const std::vector<rational>& value,
                    std::vector<std::int64_t>& choice, bool player_is_max)
{
  bool changed = false;
  for (std::uint32_t p = 0; p < g.size(); ++p) {
    if ((g.maximizer[p] != 0) != player_is_max)
      continue;
    std::int64_t best_move = choice[p];
    rational best = value[p];
    for (auto k = g.out_offset[p]; k < g.out_offset[p + 1]; ++k) {
      auto mi = g.out_moves[k];
      rational c = g.weight[mi] + g.discount[mi] * value[g.to[mi]];
      if (player_is_max ? c > best : c < best) {
        best = c;
        best_move = mi;
      }
    }
    if (best_move != choice[p]) {
      choice[p] = best_move;
      changed = true;
    }
  }
  return changed;
}

inline discounted_solution solve_discounted(const discounted_graph& g,
                                            std::size_t evaluation_cap = 200000)
{
  const std::size_t n = g.size();
  auto approx = approximate_values(g);
  std::vector<std::int64_t> choice(n, -1);
  for (std::size_t p = 0; p < n; ++p) {
    double best = 0;
    for (auto k = g.out_offset[p]; k < g.out_offset[p + 1]; ++k) {
      auto mi = g.out_moves[k];
      double c = to_double(g.weight[mi]) + to_double(g.discount[mi]) * approx[g.to[mi]];
      if (choice[p] < 0 || (g.maximizer[p] ? c > best + 1e-12 : c < best - 1e-12)) {
        best = c;
        choice[p] = mi;
      }
    }
  }

  std::size_t evaluations = 0;
  std::vector<rational> value;
  auto eval = [&] {
    if (++evaluations > evaluation_cap)
      throw internal_error("discounted strategy iteration did not converge");
    value = evaluate_choice(g, choice);
  };

  for (;;) {
    // minimiser best response to the current maximiser choice
    for (;;) {
      eval();
      if (!improve(g, value, choice, false))
        break;
    }
    if (!improve(g, value, choice, true))
      break;
  }
  return {std::move(value), std::move(choice)};
}

} // namespace hdq::detail
