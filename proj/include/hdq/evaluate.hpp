#pragma once

#include "hdq/automaton.hpp"
#include "hdq/detail/discounted.hpp"
#include "hdq/detail/scc.hpp"
#include "hdq/error.hpp"
#include "hdq/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

namespace hdq {

/// Value of the weight sequence prefix·cycle^ω (or of the finite sequence
/// `prefix` when `cycle` is empty) under `vf`.
inline rational evaluate_sequence(const value_function& vf, const std::vector<rational>& prefix,
                                  const std::vector<rational>& cycle)
{
  const bool finite = cycle.empty();
  auto all = [&] {
    std::vector<rational> v = prefix;
    v.insert(v.end(), cycle.begin(), cycle.end());
    return v;
  };
  switch (vf.kind) {
  case value_kind::inf:
  case value_kind::sup: {
    auto v = all();
    if (v.empty())
      throw validation_error("Inf/Sup of an empty sequence");
    return vf.kind == value_kind::inf ? *std::min_element(v.begin(), v.end())
                                      : *std::max_element(v.begin(), v.end());
  }
  case value_kind::lim_inf:
  case value_kind::lim_sup:
    if (finite)
      throw validation_error("LimInf/LimSup need an infinite sequence");
    return vf.kind == value_kind::lim_inf ? *std::min_element(cycle.begin(), cycle.end())
                                          : *std::max_element(cycle.begin(), cycle.end());
  case value_kind::dsum: {
    const rational& l = *vf.discount;
    rational head = 0, scale = 1;
    for (const auto& x : prefix) {
      head += scale * x;
      scale *= l;
    }
    if (finite)
      return head;
    rational loop = 0, f = 1;
    for (const auto& x : cycle) {
      loop += f * x;
      f *= l;
    }
    return head + scale * loop / (1 - f);
  }
  case value_kind::sum:
  case value_kind::avg: {
    if (!finite)
      throw validation_error("Sum/Avg need a finite sequence");
    rational s = 0;
    for (const auto& x : prefix)
      s += x;
    if (vf.kind == value_kind::sum)
      return s;
    if (prefix.empty())
      throw validation_error("Avg of an empty sequence");
    return s / static_cast<long>(prefix.size());
  }
  }
  throw internal_error("unknown value function");
}

/// Value of a run (transition ids). Checks that it starts at the initial
/// state, is connected, and that a cycle part closes on itself.
inline rational evaluate_run(const automaton& a, const run& r)
{
  std::vector<rational> p, c;
  state_id cur = a.initial();
  auto step = [&](transition_id t, std::vector<rational>& out) {
    const auto& tr = a.at(t);
    if (tr.source != cur)
      throw validation_error("run is not connected");
    cur = tr.target;
    out.push_back(tr.weight);
  };
  for (auto t : r.prefix)
    step(t, p);
  state_id loop_start = cur;
  for (auto t : r.cycle)
    step(t, c);
  if (!r.cycle.empty() && cur != loop_start)
    throw validation_error("run cycle does not close");
  if (a.mode() == word_mode::infinite && r.cycle.empty())
    throw validation_error("infinite-mode run needs a cycle");
  if (a.mode() == word_mode::finite && !r.cycle.empty())
    throw validation_error("finite-mode run cannot have a cycle");
  return evaluate_sequence(a.value_fn(), p, c);
}

namespace detail {

// Product of an automaton with a lasso word: node (q, i) = q * layers + i.
// Finite words get an extra terminal layer L with no edges.
struct product
{
  std::size_t layers = 0;
  std::size_t length = 0;
  bool finite = false;
  std::vector<std::vector<std::uint32_t>> adj;
  std::vector<std::vector<transition_id>> via; // parallel to adj
  std::uint32_t start = 0;

  std::uint32_t node(state_id q, std::size_t i) const
  {
    return static_cast<std::uint32_t>(q * layers + i);
  }
  std::size_t layer(std::uint32_t v) const { return v % layers; }
};

inline product make_product(const automaton& a, const lasso_word& w)
{
  product g;
  g.finite = w.is_finite();
  g.length = w.length();
  g.layers = g.finite ? g.length + 1 : g.length;
  const std::size_t total = a.state_count() * g.layers;
  g.adj.assign(total, {});
  g.via.assign(total, {});
  for (state_id q = 0; q < a.state_count(); ++q)
    for (std::size_t i = 0; i < g.length; ++i) {
      std::size_t next = i + 1;
      if (!g.finite && next == g.length)
        next = w.prefix.size();
      for (auto t : a.successors(q, w.at(i))) {
        g.adj[g.node(q, i)].push_back(g.node(a.at(t).target, next));
        g.via[g.node(q, i)].push_back(t);
      }
    }
  g.start = g.node(a.initial(), 0);
  return g;
}

inline std::vector<bool> reachable(const std::vector<std::vector<std::uint32_t>>& adj,
                                   std::uint32_t start)
{
  std::vector<bool> seen(adj.size(), false);
  std::vector<std::uint32_t> todo{start};
  seen[start] = true;
  while (!todo.empty()) {
    auto v = todo.back();
    todo.pop_back();
    for (auto u : adj[v])
      if (!seen[u]) {
        seen[u] = true;
        todo.push_back(u);
      }
  }
  return seen;
}

} // namespace detail

/// The value A(w): supremum over runs of A on w, computed exactly on the
/// product of A with the lasso.
inline rational automaton_value(const automaton& a, const lasso_word& w)
{
  if (a.mode() == word_mode::infinite && w.is_finite())
    throw validation_error("infinite-mode automaton needs a word with a nonempty cycle");
  if (a.mode() == word_mode::finite && !w.is_finite())
    throw validation_error("finite-mode automaton needs a finite word");
  for (std::size_t i = 0; i < w.length(); ++i)
    if (w.at(i) >= a.letter_count())
      throw validation_error("word letter outside the alphabet");

  const auto& vf = a.value_fn();
  if (w.length() == 0 && vf.kind != value_kind::sum && vf.kind != value_kind::dsum)
    throw validation_error("value of the empty word is undefined for " + vf.name());

  auto g = detail::make_product(a, w);
  auto reach = detail::reachable(g.adj, g.start);

  auto weight_at = [&](std::uint32_t v, std::size_t k) -> const rational& {
    return a.at(g.via[v][k]).weight;
  };

  std::vector<rational> desc = a.weights();
  std::reverse(desc.begin(), desc.end());

  // Subgraph with edges of weight >= x.
  auto threshold_graph = [&](const rational& x) {
    std::vector<std::vector<std::uint32_t>> sub(g.adj.size());
    for (std::uint32_t v = 0; v < g.adj.size(); ++v)
      for (std::size_t k = 0; k < g.adj[v].size(); ++k)
        if (weight_at(v, k) >= x)
          sub[v].push_back(g.adj[v][k]);
    return sub;
  };

  switch (vf.kind) {
  case value_kind::sup: {
    bool any = false;
    rational best;
    for (std::uint32_t v = 0; v < g.adj.size(); ++v)
      if (reach[v])
        for (std::size_t k = 0; k < g.adj[v].size(); ++k)
          if (!any || weight_at(v, k) > best) {
            best = weight_at(v, k);
            any = true;
          }
    return best;
  }
  case value_kind::inf: {
    for (const auto& x : desc) {
      auto sub = threshold_graph(x);
      auto r = detail::reachable(sub, g.start);
      if (g.finite) {
        for (state_id q = 0; q < a.state_count(); ++q)
          if (r[g.node(q, g.length)])
            return x;
      } else {
        auto cyc = detail::on_cycle(sub, &r);
        for (std::uint32_t v = 0; v < sub.size(); ++v)
          if (cyc[v])
            return x;
      }
    }
    throw internal_error("Inf threshold search found no run");
  }
  case value_kind::lim_sup: {
    auto comp = detail::strongly_connected(g.adj, &reach);
    bool any = false;
    rational best;
    for (std::uint32_t v = 0; v < g.adj.size(); ++v)
      if (reach[v])
        for (std::size_t k = 0; k < g.adj[v].size(); ++k)
          if (comp[g.adj[v][k]] == comp[v] && (!any || weight_at(v, k) > best)) {
            best = weight_at(v, k);
            any = true;
          }
    if (!any)
      throw internal_error("LimSup found no reachable cycle");
    return best;
  }
  case value_kind::lim_inf: {
    for (const auto& x : desc) {
      auto sub = threshold_graph(x);
      auto cyc = detail::on_cycle(sub, &reach);
      for (std::uint32_t v = 0; v < sub.size(); ++v)
        if (cyc[v])
          return x;
    }
    throw internal_error("LimInf threshold search found no cycle");
  }
  case value_kind::dsum:
  case value_kind::sum:
  case value_kind::avg: {
    if (g.finite) {
      const rational l = vf.kind == value_kind::dsum ? *vf.discount : rational(1);
      std::vector<rational> next(a.state_count(), 0), cur(a.state_count());
      for (std::size_t i = g.length; i-- > 0;) {
        for (state_id q = 0; q < a.state_count(); ++q) {
          bool first = true;
          for (auto t : a.successors(q, w.at(i))) {
            rational c = a.at(t).weight + l * next[a.at(t).target];
            if (first || c > cur[q])
              cur[q] = c;
            first = false;
          }
        }
        next.swap(cur);
      }
      rational best = next[a.initial()];
      if (vf.kind == value_kind::avg)
        best /= static_cast<long>(g.length);
      return best;
    }
    // infinite DSum: one-player discounted game on the product
    std::vector<char> maxi(g.adj.size(), 1);
    std::vector<std::uint32_t> to, offset{0}, moves;
    std::vector<rational> wt, disc;
    for (std::uint32_t v = 0; v < g.adj.size(); ++v) {
      for (std::size_t k = 0; k < g.adj[v].size(); ++k) {
        moves.push_back(static_cast<std::uint32_t>(to.size()));
        to.push_back(g.adj[v][k]);
        wt.push_back(weight_at(v, k));
        disc.push_back(*vf.discount);
      }
      offset.push_back(static_cast<std::uint32_t>(to.size()));
    }
    detail::discounted_graph dg{maxi, to, wt, disc, offset, moves};
    auto sol = detail::solve_discounted(dg);

    // certify: the induced positional lasso run has exactly this value
    std::vector<std::size_t> move_slot(to.size());
    for (std::uint32_t v = 0; v < g.adj.size(); ++v)
      for (auto k = offset[v]; k < offset[v + 1]; ++k)
        move_slot[k] = k - offset[v];
    std::vector<std::int64_t> seen_at(g.adj.size(), -1);
    std::vector<transition_id> path;
    std::uint32_t v = g.start;
    while (seen_at[v] < 0) {
      seen_at[v] = static_cast<std::int64_t>(path.size());
      auto m = static_cast<std::size_t>(sol.choice[v]);
      path.push_back(g.via[v][move_slot[m]]);
      v = to[m];
    }
    run r;
    auto cut = static_cast<std::size_t>(seen_at[v]);
    r.prefix.assign(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(cut));
    r.cycle.assign(path.begin() + static_cast<std::ptrdiff_t>(cut), path.end());
    rational value = sol.value[g.start];
    if (evaluate_run(a, r) != value)
      throw internal_error("DSum certification failed");
    return value;
  }
  }
  throw internal_error("unknown value function");
}

} // namespace hdq
