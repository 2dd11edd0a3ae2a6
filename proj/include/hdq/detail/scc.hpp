#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace hdq::detail {

// Iterative Tarjan. Returns the component index of every node; nodes outside
// `active` (if given) get -1. Edges leaving or entering inactive nodes are
// ignored.
inline std::vector<std::int64_t> strongly_connected(
    const std::vector<std::vector<std::uint32_t>>& adj,
    const std::vector<bool>* active = nullptr)
{
  const std::size_t n = adj.size();
  std::vector<std::int64_t> comp(n, -1), low(n, 0), order(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  std::vector<std::pair<std::uint32_t, std::size_t>> call;
  std::int64_t counter = 0, components = 0;

  auto is_active = [&](std::uint32_t v) { return !active || (*active)[v]; };

  for (std::uint32_t root = 0; root < n; ++root) {
    if (order[root] >= 0 || !is_active(root))
      continue;
    call.emplace_back(root, 0);
    order[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, next] = call.back();
      if (next < adj[v].size()) {
        std::uint32_t w = adj[v][next++];
        if (!is_active(w))
          continue;
        if (order[w] < 0) {
          order[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], order[w]);
        }
        continue;
      }
      if (low[v] == order[v]) {
        for (;;) {
          std::uint32_t w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = components;
          if (w == v)
            break;
        }
        ++components;
      }
      std::uint32_t done = v;
      call.pop_back();
      if (!call.empty())
        low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  return comp;
}

// Nodes lying on some cycle of the (active) graph.
inline std::vector<bool> on_cycle(const std::vector<std::vector<std::uint32_t>>& adj,
                                  const std::vector<bool>* active = nullptr)
{
  auto comp = strongly_connected(adj, active);
  std::vector<std::size_t> size;
  for (auto c : comp)
    if (c >= 0) {
      if (static_cast<std::size_t>(c) >= size.size())
        size.resize(static_cast<std::size_t>(c) + 1, 0);
      ++size[static_cast<std::size_t>(c)];
    }
  std::vector<bool> result(adj.size(), false);
  for (std::uint32_t v = 0; v < adj.size(); ++v) {
    if (comp[v] < 0)
      continue;
    if (size[static_cast<std::size_t>(comp[v])] > 1) {
      result[v] = true;
      continue;
    }
    for (auto w : adj[v])
      if (w == v)
        result[v] = true;
  }
  return result;
}

} // namespace hdq::detail
