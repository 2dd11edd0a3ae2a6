#pragma once

#include "hdq/arena.hpp"
#include "hdq/automaton.hpp"
#include "hdq/error.hpp"
#include "hdq/rational.hpp"

#include <boost/functional/hash.hpp>

#include <array>
#include <cstdint>
#include <deque>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hdq {

enum class turn : std::uint8_t { letter, eve, adam };

/// Decoded token-game position. Letter -1 is ε. Aggregates are weight
/// ranks. `adam_index` is the Adam token about to move on A turns.
struct token_position
{
  turn t = turn::letter;
  int adam_index = 0;
  int letter = -1;
  state_id eve = 0;
  std::array<state_id, 3> adam{};
  int x_eve = 0;
  int x_adam = 0;
  int memory = 0; // LimInf: base-3 digits x_1..x_k, x_1 least significant
  std::int64_t transition = -1; // DSum: Eve's transition of this round
  bool sink = false;

  auto key() const
  {
    return std::array<std::int64_t, 12>{static_cast<std::int64_t>(t), adam_index, letter, eve,
                                        adam[0], adam[1], adam[2], x_eve, x_adam, memory,
                                        transition, sink ? 1 : 0};
  }
  bool operator==(const token_position& o) const { return key() == o.key(); }
};

struct token_position_hash
{
  std::size_t operator()(const token_position& p) const
  {
    auto k = p.key();
    return boost::hash_range(k.begin(), k.end());
  }
};

/// A built token game: the arena plus, per position, its decoding and, per
/// move, the automaton transition (or letter) it plays.
struct token_game
{
  std::string builder;
  arena game;
  std::vector<token_position> positions;
  std::vector<std::int64_t> move_transition; // -1 if not a transition move
  std::vector<std::int64_t> move_letter;     // -1 if not a letter move
  int adam_tokens = 1;
  std::vector<std::string> alphabet;
  std::vector<std::string> states;

  std::size_t size() const { return game.size(); }
};

inline std::string describe(const token_game& g, position_id p)
{
  const auto& d = g.positions.at(p);
  if (d.sink)
    return "sink";
  std::string s;
  switch (d.t) {
  case turn::letter: s = "L"; break;
  case turn::eve: s = "E"; break;
  case turn::adam: s = "A" + std::to_string(d.adam_index + 1); break;
  }
  s += "(" + (d.letter < 0 ? std::string("eps") : g.alphabet.at(static_cast<std::size_t>(d.letter)));
  s += "," + g.states.at(d.eve);
  for (int i = 0; i < g.adam_tokens; ++i)
    s += "," + g.states.at(d.adam[static_cast<std::size_t>(i)]);
  s += ")";
  if (d.x_eve || d.x_adam)
    s += " xE=" + std::to_string(d.x_eve) + " xA=" + std::to_string(d.x_adam);
  if (d.memory)
    s += " mem=" + std::to_string(d.memory);
  if (d.transition >= 0)
    s += " t=" + std::to_string(d.transition);
  return s;
}

namespace detail {

struct successor
{
  token_position to;
  int priority = 0;
  rational weight = 0;
  rational discount = 0;
  std::int64_t transition = -1;
  std::int64_t letter = -1;
};

enum class label_kind { none, priority, discounted };

inline player owner_of(const token_position& p)
{
  return (p.t == turn::eve && !p.sink) ? player::eve : player::adam;
}

// Breadth-first construction of the reachable part of a token game.
template <class Expand, class Marked>
token_game explore(std::string name, const automaton& a, int adam_tokens, token_position init,
                   objective_kind kind, label_kind labels, Expand&& expand, Marked&& marked,
                   std::size_t limit = 20'000'000)
{
  token_game g;
  g.builder = std::move(name);
  g.adam_tokens = adam_tokens;
  g.alphabet = a.alphabet();
  g.states = a.states();

  arena_builder b;
  std::unordered_map<token_position, position_id, token_position_hash> ids;
  std::deque<position_id> todo;
  std::vector<bool> mark;

  auto intern = [&](const token_position& p) {
    auto [it, fresh] = ids.try_emplace(p, static_cast<position_id>(g.positions.size()));
    if (fresh) {
      if (g.positions.size() >= limit)
        throw validation_error("token game exceeds position limit");
      b.add_position(owner_of(p));
      g.positions.push_back(p);
      mark.push_back(marked(p));
      todo.push_back(it->second);
    }
    return it->second;
  };

  intern(init);
  std::vector<successor> succ;
  while (!todo.empty()) {
    position_id id = todo.front();
    todo.pop_front();
    succ.clear();
    token_position here = g.positions[id];
    expand(here, succ);
    if (succ.empty())
      throw internal_error("token game position without moves");
    for (auto& s : succ) {
      position_id to = intern(s.to);
      switch (labels) {
      case label_kind::none: b.add_move(id, to); break;
      case label_kind::priority: b.add_move(id, to, s.priority); break;
      case label_kind::discounted: b.add_move(id, to, s.weight, s.discount); break;
      }
      g.move_transition.push_back(s.transition);
      g.move_letter.push_back(s.letter);
    }
  }
  objective goal;
  goal.kind = kind;
  if (kind == objective_kind::safety || kind == objective_kind::reachability)
    goal.marked = std::move(mark);
  goal.threshold = 0;
  g.game = std::move(b).build(0, goal);
  return g;
}

inline token_position initial_position(const automaton& a)
{
  token_position p;
  p.eve = a.initial();
  p.adam.fill(a.initial());
  return p;
}

inline void letter_moves(const automaton& a, const token_position& p, std::vector<successor>& out,
                         int priority = 0)
{
  for (letter_id s = 0; s < a.letter_count(); ++s) {
    successor n;
    n.to = p;
    n.to.t = turn::eve;
    n.to.letter = static_cast<int>(s);
    n.priority = priority;
    n.letter = s;
    out.push_back(std::move(n));
  }
}

inline void require(bool ok, const std::string& what)
{
  if (!ok)
    throw validation_error(what);
}

} // namespace detail

/// G1 for Reachability/Safety automata. Each token carries a bit with its
/// run's aggregate so far (max for Reachability, min for Safety). Eve is in
/// trouble when her bit is 0 and Adam's is 1. Finite words: safety game
/// checked after each round. Infinite words: co-Büchi (weak) game with
/// priority 1 on moves into trouble.
inline token_game build_g1_reach_safety(const automaton& a)
{
  const auto cls = a.value_fn().boolean;
  detail::require(cls != boolean_class::none, "G1 Reachability/Safety needs a Reachability or Safety automaton");
  const bool reach = cls == boolean_class::reachability;
  const bool finite = a.mode() == word_mode::finite;
  const int init_bit = reach ? 0 : 1;
  auto combine = [&](int bit, transition_id t) {
    int w = a.at(t).weight == 1 ? 1 : 0;
    return reach ? std::max(bit, w) : std::min(bit, w);
  };
  auto trouble = [](const token_position& p) { return p.x_eve == 0 && p.x_adam == 1; };

  auto init = detail::initial_position(a);
  init.x_eve = init.x_adam = init_bit;

  auto expand = [&](const token_position& p, std::vector<detail::successor>& out) {
    switch (p.t) {
    case turn::letter: detail::letter_moves(a, p, out); break;
    case turn::eve:
      for (auto t : a.successors(p.eve, static_cast<letter_id>(p.letter))) {
        detail::successor n;
        n.to = p;
        n.to.t = turn::adam;
        n.to.eve = a.at(t).target;
        n.to.x_eve = combine(p.x_eve, t);
        n.transition = t;
        out.push_back(std::move(n));
      }
      break;
    case turn::adam:
      for (auto t : a.successors(p.adam[0], static_cast<letter_id>(p.letter))) {
        detail::successor n;
        n.to = p;
        n.to.t = turn::letter;
        n.to.letter = -1;
        n.to.adam[0] = a.at(t).target;
        n.to.x_adam = combine(p.x_adam, t);
        n.transition = t;
        out.push_back(std::move(n));
      }
      break;
    }
    if (!finite)
      for (auto& n : out)
        n.priority = trouble(n.to) ? 1 : 0;
  };
  if (finite)
    return detail::explore("G1-" + a.value_fn().name() + "-safety", a, 1, init, objective_kind::safety,
                           detail::label_kind::none, expand, [&](const token_position& p) {
                             return p.t == turn::letter && trouble(p);
                           });
  return detail::explore("G1-" + a.value_fn().name() + "-weak", a, 1, init, objective_kind::cobuchi,
                         detail::label_kind::priority, expand,
                         [](const token_position&) { return false; });
}

/// G1 for Sup automata on finite words: x_E is the largest weight rank on
/// Eve's run so far (rank 1 before any move, which is neutral). An Adam
/// position is unsafe when Adam has a transition of rank above x_E.
inline token_game build_g1_sup_finite(const automaton& a)
{
  detail::require(a.value_fn().kind == value_kind::sup && a.mode() == word_mode::finite,
                  "G1 Sup (finite) needs a Sup automaton on finite words");
  auto init = detail::initial_position(a);
  init.x_eve = 1;
  auto expand = [&](const token_position& p, std::vector<detail::successor>& out) {
    switch (p.t) {
    case turn::letter: detail::letter_moves(a, p, out); break;
    case turn::eve:
      for (auto t : a.successors(p.eve, static_cast<letter_id>(p.letter))) {
        detail::successor n;
        n.to = p;
        n.to.t = turn::adam;
        n.to.eve = a.at(t).target;
        n.to.x_eve = std::max(p.x_eve, a.rank(t));
        n.transition = t;
        out.push_back(std::move(n));
      }
      break;
    case turn::adam:
      for (auto t : a.successors(p.adam[0], static_cast<letter_id>(p.letter))) {
        detail::successor n;
        n.to = p;
        n.to.t = turn::letter;
        n.to.letter = -1;
        n.to.adam[0] = a.at(t).target;
        n.transition = t;
        out.push_back(std::move(n));
      }
      break;
    }
  };
  auto unsafe = [&](const token_position& p) {
    if (p.t != turn::adam)
      return false;
    for (auto t : a.successors(p.adam[0], static_cast<letter_id>(p.letter)))
      if (a.rank(t) > p.x_eve)
        return true;
    return false;
  };
  return detail::explore("G1-Sup-safety", a, 1, init, objective_kind::safety,
                         detail::label_kind::none, expand, unsafe);
}

/// G1 for Sup automata on infinite words (co-Büchi: eventually x_E >= x_A).
/// G1 does not characterise HDness here; built for comparison with G2.
inline token_game build_g1_sup_infinite(const automaton& a)
{
  detail::require(a.value_fn().kind == value_kind::sup && a.mode() == word_mode::infinite,
                  "G1 Sup (infinite) needs a Sup automaton on infinite words");
  auto init = detail::initial_position(a);
  init.x_eve = init.x_adam = 1;
  auto expand = [&](const token_position& p, std::vector<detail::successor>& out) {
    switch (p.t) {
    case turn::letter: detail::letter_moves(a, p, out); break;
    case turn::eve:
      for (auto t : a.successors(p.eve, static_cast<letter_id>(p.letter))) {
        detail::successor n;
        n.to = p;
        n.to.t = turn::adam;
        n.to.eve = a.at(t).target;
        n.to.x_eve = std::max(p.x_eve, a.rank(t));
        n.transition = t;
        out.push_back(std::move(n));
      }
      break;
    case turn::adam:
      for (auto t : a.successors(p.adam[0], static_cast<letter_id>(p.letter))) {
        detail::successor n;
        n.to = p;
        n.to.t = turn::letter;
        n.to.letter = -1;
        n.to.adam[0] = a.at(t).target;
        n.to.x_adam = std::max(p.x_adam, a.rank(t));
        n.transition = t;
        out.push_back(std::move(n));
      }
      break;
    }
    for (auto& n : out)
      n.priority = n.to.x_eve < n.to.x_adam ? 1 : 0;
  };
  return detail::explore("G1-Sup-cobuchi", a, 1, init, objective_kind::cobuchi,
                         detail::label_kind::priority, expand,
                         [](const token_position&) { return false; });
}

/// G1 for Inf automata: m_E, m_A are the least weight ranks seen so far by
/// each token (rank k before any move). Finite words: unsafe after a round
/// with m_E < m_A. Infinite words: co-Büchi, priority 1 on moves into
/// m_E < m_A, i.e. Eve needs m_E >= m_A eventually forever.
inline token_game build_g1_inf(const automaton& a)
{
  detail::require(a.value_fn().kind == value_kind::inf, "G1 Inf needs an Inf automaton");
  const bool finite = a.mode() == word_mode::finite;
  const int k = static_cast<int>(a.weight_count());
  auto init = detail::initial_position(a);
  init.x_eve = init.x_adam = k;
  auto expand = [&](const token_position& p, std::vector<detail::successor>& out) {
    switch (p.t) {
    case turn::letter: detail::letter_moves(a, p, out); break;
    case turn::eve:
      for (auto t : a.successors(p.eve, static_cast<letter_id>(p.letter))) {
        detail::successor n;
        n.to = p;
        n.to.t = turn::adam;
        n.to.eve = a.at(t).target;
        n.to.x_eve = std::min(p.x_eve, a.rank(t));
        n.transition = t;
        out.push_back(std::move(n));
      }
      break;
    case turn::adam:
      for (auto t : a.successors(p.adam[0], static_cast<letter_id>(p.letter))) {
        detail::successor n;
        n.to = p;
        n.to.t = turn::letter;
        n.to.letter = -1;
        n.to.adam[0] = a.at(t).target;
        n.to.x_adam = std::min(p.x_adam, a.rank(t));
        n.transition = t;
        out.push_back(std::move(n));
      }
      break;
    }
    if (!finite)
      for (auto& n : out)
        n.priority = n.to.x_eve < n.to.x_adam ? 1 : 0;
  };
  if (finite)
    return detail::explore("G1-Inf-safety", a, 1, init, objective_kind::safety,
                           detail::label_kind::none, expand, [](const token_position& p) {
                             return p.t == turn::letter && p.x_eve < p.x_adam;
                           });
  return detail::explore("G1-Inf-weak", a, 1, init, objective_kind::cobuchi,
                         detail::label_kind::priority, expand,
                         [](const token_position&) { return false; });
}

struct dsum_factors
{
  rational first, second, third; // letter, Eve, Adam moves
};

/// λ = p/q split into three rational factors whose product is λ.
inline dsum_factors split_discount(const rational& lambda)
{
  if (lambda <= 0 || lambda >= 1)
    throw validation_error("discount factor outside (0,1)");
  big_int p = boost::multiprecision::numerator(lambda);
  big_int q = boost::multiprecision::denominator(lambda);
  return {rational(4 * p, 4 * p + 1), rational(4 * p + 1, 4 * p + 2), rational(2 * p + 1, 2 * q)};
}

/// G1 for DSum automata as a multi-discount threshold game: Adam's
/// transition moves carry γ(t) − γ(t′) (Eve's weight minus Adam's); the
/// other two moves of each round weigh 0. Finite words: Adam may leave to a
/// zero sink at each letter turn.
inline token_game build_g1_dsum(const automaton& a)
{
  detail::require(a.value_fn().kind == value_kind::dsum, "G1 DSum needs a DSum automaton");
  const auto f = split_discount(*a.value_fn().discount);
  const bool finite = a.mode() == word_mode::finite;
  auto init = detail::initial_position(a);
  auto expand = [&](const token_position& p, std::vector<detail::successor>& out) {
    if (p.sink) {
      detail::successor n;
      n.to = p;
      n.weight = 0;
      n.discount = f.first;
      out.push_back(std::move(n));
      return;
    }
    switch (p.t) {
    case turn::letter:
      detail::letter_moves(a, p, out);
      for (auto& n : out) {
        n.weight = 0;
        n.discount = f.first;
      }
      if (finite) {
        detail::successor n;
        n.to = token_position{};
        n.to.sink = true;
        n.weight = 0;
        n.discount = f.first;
        out.push_back(std::move(n));
      }
      break;
    case turn::eve:
      for (auto t : a.successors(p.eve, static_cast<letter_id>(p.letter))) {
        detail::successor n;
        n.to = p;
        n.to.t = turn::adam;
        n.to.eve = a.at(t).target;
        n.to.transition = t;
        n.weight = 0;
        n.discount = f.second;
        n.transition = t;
        out.push_back(std::move(n));
      }
      break;
    case turn::adam:
      for (auto t : a.successors(p.adam[0], static_cast<letter_id>(p.letter))) {
        detail::successor n;
        n.to = p;
        n.to.t = turn::letter;
        n.to.letter = -1;
        n.to.transition = -1;
        n.to.adam[0] = a.at(t).target;
        n.weight = a.at(static_cast<transition_id>(p.transition)).weight - a.at(t).weight;
        n.discount = f.third;
        n.transition = t;
        out.push_back(std::move(n));
      }
      break;
    }
  };
  return detail::explore("G1-DSum-multidiscount", a, 1, init, objective_kind::multi_discount,
                         detail::label_kind::discounted, expand,
                         [](const token_position&) { return false; });
}

/// G2 for Sup automata on infinite words, on dense ranks. Adam's two
/// transition moves are sequential (token 1, then token 2). x_A is the max
/// over both Adam runs. Priority 1 on moves into x_E < x_A.
inline token_game build_g2_sup(const automaton& original)
{
  detail::require(original.value_fn().kind == value_kind::sup
                      && original.mode() == word_mode::infinite,
                  "G2 Sup needs a Sup automaton on infinite words");
  const automaton a = normalize_weights(original).ranked;
  auto init = detail::initial_position(a);
  init.x_eve = init.x_adam = 1;
  auto expand = [&](const token_position& p, std::vector<detail::successor>& out) {
    switch (p.t) {
    case turn::letter: detail::letter_moves(a, p, out); break;
    case turn::eve:
      for (auto t : a.successors(p.eve, static_cast<letter_id>(p.letter))) {
        detail::successor n;
        n.to = p;
        n.to.t = turn::adam;
        n.to.adam_index = 0;
        n.to.eve = a.at(t).target;
        n.to.x_eve = std::max(p.x_eve, a.rank(t));
        n.transition = t;
        out.push_back(std::move(n));
      }
      break;
    case turn::adam: {
      auto j = static_cast<std::size_t>(p.adam_index);
      for (auto t : a.successors(p.adam[j], static_cast<letter_id>(p.letter))) {
        detail::successor n;
        n.to = p;
        n.to.adam[j] = a.at(t).target;
        n.to.x_adam = std::max(p.x_adam, a.rank(t));
        if (j == 0) {
          n.to.adam_index = 1;
        } else {
          n.to.t = turn::letter;
          n.to.letter = -1;
          n.to.adam_index = 0;
        }
        n.transition = t;
        out.push_back(std::move(n));
      }
      break;
    }
    }
    for (auto& n : out)
      n.priority = n.to.x_eve < n.to.x_adam ? 1 : 0;
  };
  return detail::explore("G2-Sup-cobuchi", a, 2, init, objective_kind::cobuchi,
                         detail::label_kind::priority, expand,
                         [](const token_position&) { return false; });
}

/// G_k for LimSup automata (k Adam tokens, 1..3), on dense ranks: letter
/// moves priority 0, Eve's transition of rank x priority 2x, Adam's 2x-1.
inline token_game build_gk_limsup(const automaton& original, int tokens)
{
  detail::require(original.value_fn().kind == value_kind::lim_sup, "Gk LimSup needs a LimSup automaton");
  detail::require(tokens >= 1 && tokens <= 3, "Gk LimSup supports 1 to 3 Adam tokens");
  const automaton a = normalize_weights(original).ranked;
  auto init = detail::initial_position(a);
  for (int j = tokens; j < 3; ++j)
    init.adam[static_cast<std::size_t>(j)] = 0;
  auto expand = [&](const token_position& p, std::vector<detail::successor>& out) {
    switch (p.t) {
    case turn::letter: detail::letter_moves(a, p, out, 0); break;
    case turn::eve:
      for (auto t : a.successors(p.eve, static_cast<letter_id>(p.letter))) {
        detail::successor n;
        n.to = p;
        n.to.t = turn::adam;
        n.to.adam_index = 0;
        n.to.eve = a.at(t).target;
        n.priority = 2 * a.rank(t);
        n.transition = t;
        out.push_back(std::move(n));
      }
      break;
    case turn::adam: {
      auto j = static_cast<std::size_t>(p.adam_index);
      for (auto t : a.successors(p.adam[j], static_cast<letter_id>(p.letter))) {
        detail::successor n;
        n.to = p;
        n.to.adam[j] = a.at(t).target;
        if (static_cast<int>(j) + 1 < tokens) {
          n.to.adam_index = static_cast<int>(j) + 1;
        } else {
          n.to.t = turn::letter;
          n.to.letter = -1;
          n.to.adam_index = 0;
        }
        n.priority = 2 * a.rank(t) - 1;
        n.transition = t;
        out.push_back(std::move(n));
      }
      break;
    }
    }
  };
  std::string name = tokens == 2 ? "G2-LimSup-parity" : "G" + std::to_string(tokens) + "-LimSup-parity";
  return detail::explore(name, a, tokens, init, objective_kind::parity,
                         detail::label_kind::priority, expand,
                         [](const token_position&) { return false; });
}

inline token_game build_g2_limsup(const automaton& a)
{
  return build_gk_limsup(a, 2);
}

struct liminf_update
{
  std::vector<int> memory; // x_1..x_k
  int priority = 1;
};

/// Memory update for Adam token `token` (1 or 2) taking a transition of rank
/// `w`: for each i >= w, x_i = 0 becomes `token`; x_i equal to the other
/// token resets to 0. Priority 2(k-i+1) for the least reset i, else 1.
inline liminf_update liminf_memory_step(std::vector<int> memory, int token, int w)
{
  const int k = static_cast<int>(memory.size());
  liminf_update r;
  int least_reset = 0;
  for (int i = 1; i <= k; ++i) {
    auto& x = memory[static_cast<std::size_t>(i - 1)];
    if (w > i)
      continue;
    if (x == 0) {
      x = token;
    } else if (x != token) {
      x = 0;
      if (least_reset == 0)
        least_reset = i;
    }
  }
  r.priority = least_reset ? 2 * (k - least_reset + 1) : 1;
  r.memory = std::move(memory);
  return r;
}

namespace detail {

inline std::vector<int> decode_memory(int code, int k)
{
  std::vector<int> m(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    m[static_cast<std::size_t>(i)] = code % 3;
    code /= 3;
  }
  return m;
}

inline int encode_memory(const std::vector<int>& m)
{
  int code = 0;
  for (std::size_t i = m.size(); i-- > 0;)
    code = code * 3 + m[i];
  return code;
}

} // namespace detail

/// G2 for LimInf automata, on dense ranks, with the {0,1,2}^k memory. Eve's
/// transition of rank i has priority 2(k-i+1)-1; letter moves priority 1;
/// Adam's moves carry the memory-update priority.
inline token_game build_g2_liminf(const automaton& original)
{
  detail::require(original.value_fn().kind == value_kind::lim_inf, "G2 LimInf needs a LimInf automaton");
  const automaton a = normalize_weights(original).ranked;
  const int k = static_cast<int>(a.weight_count());
  detail::require(k <= 12, "G2 LimInf supports at most 12 weights");
  auto init = detail::initial_position(a);
  auto expand = [&](const token_position& p, std::vector<detail::successor>& out) {
    switch (p.t) {
    case turn::letter: detail::letter_moves(a, p, out, 1); break;
    case turn::eve:
      for (auto t : a.successors(p.eve, static_cast<letter_id>(p.letter))) {
        detail::successor n;
        n.to = p;
        n.to.t = turn::adam;
        n.to.adam_index = 0;
        n.to.eve = a.at(t).target;
        n.priority = 2 * (k - a.rank(t) + 1) - 1;
        n.transition = t;
        out.push_back(std::move(n));
      }
      break;
    case turn::adam: {
      auto j = static_cast<std::size_t>(p.adam_index);
      auto mem = detail::decode_memory(p.memory, k);
      for (auto t : a.successors(p.adam[j], static_cast<letter_id>(p.letter))) {
        auto u = liminf_memory_step(mem, static_cast<int>(j) + 1, a.rank(t));
        detail::successor n;
        n.to = p;
        n.to.adam[j] = a.at(t).target;
        n.to.memory = detail::encode_memory(u.memory);
        if (j == 0) {
          n.to.adam_index = 1;
        } else {
          n.to.t = turn::letter;
          n.to.letter = -1;
          n.to.adam_index = 0;
        }
        n.priority = u.priority;
        n.transition = t;
        out.push_back(std::move(n));
      }
      break;
    }
    }
  };
  return detail::explore("G2-LimInf-parity", a, 2, init, objective_kind::parity,
                         detail::label_kind::priority, expand,
                         [](const token_position&) { return false; });
}

} // namespace hdq
