#pragma once

#include "hdq/arena.hpp"
#include "hdq/deciders.hpp"
#include "hdq/token_games.hpp"

#include "json.hpp"

#include <optional>
#include <sstream>
#include <string>

namespace hdq {

namespace detail {

inline std::string dot_escape(const std::string& s)
{
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\')
      out += '\\';
    out += c;
  }
  return out;
}

inline std::string move_label(const token_game& g, move_id m)
{
  const arena& ar = g.game;
  std::string s;
  if (g.move_letter[m] >= 0)
    s = g.alphabet.at(static_cast<std::size_t>(g.move_letter[m]));
  else if (g.move_transition[m] >= 0)
    s = "t" + std::to_string(g.move_transition[m]);
  if (ar.has_priorities())
    s += (s.empty() ? "" : " ") + std::string("p=") + std::to_string(ar.priority(m));
  if (ar.has_weights())
    s += (s.empty() ? "" : " ") + std::string("w=") + to_string(ar.weight(m)) + " d="
         + to_string(ar.discount(m));
  return s;
}

} // namespace detail

/// Graphviz rendering: Eve's positions are boxes, Adam's ellipses; winning
/// regions (when given) are filled.
inline std::string to_dot(const token_game& g, const solve_result* sol = nullptr)
{
  const arena& ar = g.game;
  std::ostringstream out;
  out << "digraph \"" << detail::dot_escape(g.builder) << "\" {\n";
  out << "  node [fontname=\"monospace\"];\n";
  for (position_id p = 0; p < ar.size(); ++p) {
    out << "  p" << p << " [label=\"" << detail::dot_escape(describe(g, p)) << "\", shape="
        << (ar.owner(p) == player::eve ? "box" : "ellipse");
    if (ar.goal().kind == objective_kind::safety || ar.goal().kind == objective_kind::reachability)
      if (ar.goal().marked[p])
        out << ", peripheries=2";
    if (sol)
      out << ", style=filled, fillcolor=" << (sol->eve_wins[p] ? "\"#cde8cd\"" : "\"#f2cccc\"");
    if (p == ar.initial())
      out << ", penwidth=2";
    out << "];\n";
  }
  for (move_id m = 0; m < ar.move_count(); ++m) {
    out << "  p" << ar.from(m) << " -> p" << ar.to(m);
    auto label = detail::move_label(g, m);
    if (!label.empty())
      out << " [label=\"" << detail::dot_escape(label) << "\"]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

inline nlohmann::ordered_json to_json(const token_game& g, const solve_result* sol = nullptr)
{
  const arena& ar = g.game;
  nlohmann::ordered_json positions = nlohmann::ordered_json::array();
  for (position_id p = 0; p < ar.size(); ++p) {
    nlohmann::ordered_json j{{"id", p},
                     {"owner", to_string(ar.owner(p))},
                     {"decoding", describe(g, p)}};
    if (ar.goal().kind == objective_kind::safety || ar.goal().kind == objective_kind::reachability)
      j["marked"] = static_cast<bool>(ar.goal().marked[p]);
    if (sol)
      j["winner"] = to_string(sol->winner(p));
    positions.push_back(std::move(j));
  }
  nlohmann::ordered_json moves = nlohmann::ordered_json::array();
  for (move_id m = 0; m < ar.move_count(); ++m) {
    nlohmann::ordered_json j{{"from", ar.from(m)}, {"to", ar.to(m)}};
    if (g.move_letter[m] >= 0)
      j["letter"] = g.alphabet.at(static_cast<std::size_t>(g.move_letter[m]));
    if (g.move_transition[m] >= 0)
      j["transition"] = g.move_transition[m];
    if (ar.has_priorities())
      j["priority"] = ar.priority(m);
    if (ar.has_weights()) {
      j["weight"] = to_string(ar.weight(m));
      j["discount"] = to_string(ar.discount(m));
    }
    moves.push_back(std::move(j));
  }
  nlohmann::ordered_json out{{"builder", g.builder},
                     {"objective", to_string(ar.goal().kind)},
                     {"initial", ar.initial()},
                     {"positions", std::move(positions)},
                     {"moves", std::move(moves)}};
  if (ar.goal().kind == objective_kind::multi_discount)
    out["threshold"] = to_string(ar.goal().threshold);
  return out;
}

inline nlohmann::ordered_json to_json(const automaton& a, const resolver& r)
{
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    const auto& n = r.nodes[i];
    nlohmann::ordered_json on = nlohmann::ordered_json::object();
    for (std::size_t l = 0; l < n.transition.size(); ++l) {
      if (n.transition[l] < 0)
        continue;
      const auto& t = a.at(static_cast<transition_id>(n.transition[l]));
      on[a.alphabet()[l]] = {{"transition", n.transition[l]},
                             {"target", a.states()[t.target]},
                             {"weight", to_string(t.weight)},
                             {"next", n.next[l]}};
    }
    nodes.push_back({{"memory", i}, {"state", a.states()[n.state]}, {"on", std::move(on)}});
  }
  return {{"initial", r.initial}, {"nodes", std::move(nodes)}};
}

inline nlohmann::ordered_json to_json(const automaton& a, const verdict& v)
{
  nlohmann::ordered_json j{{"is_hd", v.is_hd},
                   {"route", v.route},
                   {"game_size", v.game_size()},
                   {"winner", to_string(v.winner)}};
  if (v.strategy)
    j["resolver"] = to_json(a, *v.strategy);
  return j;
}

} // namespace hdq
