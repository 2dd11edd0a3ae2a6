#pragma once

#include "hdq/error.hpp"
#include "hdq/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hdq {

using state_id = std::uint32_t;
using letter_id = std::uint32_t;
using transition_id = std::uint32_t;

enum class value_kind { inf, sup, lim_inf, lim_sup, dsum, sum, avg };
enum class word_mode { finite, infinite };

// Reachability and Safety automata are Sup and Inf automata over {0,1}
// with the sink shape checked structurally.
enum class boolean_class { none, reachability, safety };

inline const char* to_string(value_kind k)
{
  switch (k) {
  case value_kind::inf: return "Inf";
  case value_kind::sup: return "Sup";
  case value_kind::lim_inf: return "LimInf";
  case value_kind::lim_sup: return "LimSup";
  case value_kind::dsum: return "DSum";
  case value_kind::sum: return "Sum";
  case value_kind::avg: return "Avg";
  }
  return "?";
}

inline const char* to_string(word_mode m)
{
  return m == word_mode::finite ? "finite" : "infinite";
}

struct value_function
{
  value_kind kind = value_kind::sup;
  std::optional<rational> discount; // DSum only, in (0,1)
  boolean_class boolean = boolean_class::none;

  static value_function reachability()
  {
    return {value_kind::sup, std::nullopt, boolean_class::reachability};
  }
  static value_function safety()
  {
    return {value_kind::inf, std::nullopt, boolean_class::safety};
  }
  static value_function dsum(rational lambda)
  {
    return {value_kind::dsum, std::move(lambda), boolean_class::none};
  }

  std::string name() const
  {
    if (boolean == boolean_class::reachability)
      return "Reachability";
    if (boolean == boolean_class::safety)
      return "Safety";
    if (kind == value_kind::dsum && discount)
      return std::string("DSum ") + hdq::to_string(*discount);
    return hdq::to_string(kind);
  }

  bool operator==(const value_function&) const = default;
};

struct transition
{
  state_id source = 0;
  letter_id letter = 0;
  rational weight = 0;
  state_id target = 0;

  bool operator==(const transition&) const = default;
};

/// A nondeterministic quantitative automaton (Σ, Q, ι, δ) with a value
/// function. Immutable; the constructor validates totality, ids, the
/// value-function/mode table and, for Reachability/Safety, the sink shape.
class automaton
{
public:
  automaton(std::vector<std::string> alphabet, std::vector<std::string> states,
            state_id initial, std::vector<transition> transitions,
            value_function value_fn, word_mode mode)
    : alphabet_(std::move(alphabet)), states_(std::move(states)),
      initial_(initial), transitions_(std::move(transitions)),
      value_fn_(std::move(value_fn)), mode_(mode)
  {
    validate_and_index();
  }

  const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
  const std::vector<std::string>& states() const noexcept { return states_; }
  std::size_t letter_count() const noexcept { return alphabet_.size(); }
  std::size_t state_count() const noexcept { return states_.size(); }
  state_id initial() const noexcept { return initial_; }
  const std::vector<transition>& transitions() const noexcept { return transitions_; }
  const transition& at(transition_id t) const { return transitions_.at(t); }
  const value_function& value_fn() const noexcept { return value_fn_; }
  word_mode mode() const noexcept { return mode_; }

  /// Transition ids leaving `q` on letter `a`, in file order.
  std::span<const transition_id> successors(state_id q, letter_id a) const
  {
    std::size_t slot = q * alphabet_.size() + a;
    return {out_.data() + out_offset_[slot], out_.data() + out_offset_[slot + 1]};
  }

  /// Distinct weights in increasing order.
  const std::vector<rational>& weights() const noexcept { return weights_; }
  std::size_t weight_count() const noexcept { return weights_.size(); }

  /// Dense 1-based rank of a transition's weight.
  int rank(transition_id t) const { return ranks_.at(t); }

  int rank_of(const rational& w) const
  {
    auto it = std::lower_bound(weights_.begin(), weights_.end(), w);
    if (it == weights_.end() || *it != w)
      throw validation_error("weight " + hdq::to_string(w) + " not in automaton");
    return static_cast<int>(it - weights_.begin()) + 1;
  }

  bool is_deterministic() const
  {
    for (std::size_t slot = 0; slot + 1 < out_offset_.size(); ++slot)
      if (out_offset_[slot + 1] - out_offset_[slot] != 1)
        return false;
    return true;
  }

  /// States whose every transition is a self-loop of weight `w`.
  std::vector<bool> sinks_with_weight(const rational& w) const
  {
    std::vector<bool> sink(states_.size(), true);
    for (const auto& t : transitions_)
      if (t.target != t.source || t.weight != w)
        sink[t.source] = false;
    return sink;
  }

  /// Reachability targets: sinks with weight-1 self-loops.
  std::vector<bool> targets() const { return sinks_with_weight(1); }

  std::optional<state_id> find_state(std::string_view name) const
  {
    for (std::size_t i = 0; i < states_.size(); ++i)
      if (states_[i] == name)
        return static_cast<state_id>(i);
    return std::nullopt;
  }

  std::optional<letter_id> find_letter(std::string_view name) const
  {
    for (std::size_t i = 0; i < alphabet_.size(); ++i)
      if (alphabet_[i] == name)
        return static_cast<letter_id>(i);
    return std::nullopt;
  }

  /// Same structure, different value function and/or weights.
  automaton with(value_function vf, std::vector<transition> ts) const
  {
    return automaton(alphabet_, states_, initial_, std::move(ts), std::move(vf), mode_);
  }

  automaton with_value_fn(value_function vf) const
  {
    return with(std::move(vf), transitions_);
  }

  automaton with_mode(word_mode m) const
  {
    return automaton(alphabet_, states_, initial_, transitions_, value_fn_, m);
  }

  bool operator==(const automaton& o) const
  {
    return alphabet_ == o.alphabet_ && states_ == o.states_
           && initial_ == o.initial_ && transitions_ == o.transitions_
           && value_fn_ == o.value_fn_ && mode_ == o.mode_;
  }

private:
  void validate_and_index()
  {
    if (alphabet_.empty())
      throw validation_error("empty alphabet");
    if (states_.empty())
      throw validation_error("no states");
    check_unique(alphabet_, "letter");
    check_unique(states_, "state");
    if (initial_ >= states_.size())
      throw validation_error("initial state out of range");

    const auto& vf = value_fn_;
    if (vf.kind == value_kind::dsum) {
      if (!vf.discount || *vf.discount <= 0 || *vf.discount >= 1)
        throw validation_error("bad discount: DSum needs 0 < lambda < 1");
    } else if (vf.discount) {
      throw validation_error("discount given for non-DSum value function");
    }
    if ((vf.kind == value_kind::sum || vf.kind == value_kind::avg)
        && mode_ != word_mode::finite)
      throw validation_error(std::string(hdq::to_string(vf.kind))
                             + " requires mode finite");
    if ((vf.kind == value_kind::lim_inf || vf.kind == value_kind::lim_sup)
        && mode_ != word_mode::infinite)
      throw validation_error(std::string(hdq::to_string(vf.kind))
                             + " requires mode infinite");
    if (vf.boolean == boolean_class::reachability && vf.kind != value_kind::sup)
      throw validation_error("Reachability must be a Sup automaton");
    if (vf.boolean == boolean_class::safety && vf.kind != value_kind::inf)
      throw validation_error("Safety must be an Inf automaton");

    const std::size_t slots = states_.size() * alphabet_.size();
    std::vector<std::uint32_t> count(slots, 0);
    for (const auto& t : transitions_) {
      if (t.source >= states_.size() || t.target >= states_.size())
        throw validation_error("transition refers to unknown state");
      if (t.letter >= alphabet_.size())
        throw validation_error("transition refers to unknown letter");
      ++count[t.source * alphabet_.size() + t.letter];
    }
    for (std::size_t q = 0; q < states_.size(); ++q)
      for (std::size_t a = 0; a < alphabet_.size(); ++a)
        if (count[q * alphabet_.size() + a] == 0)
          throw validation_error("non-total at (" + states_[q] + ","
                                 + alphabet_[a] + ")");

    out_offset_.assign(slots + 1, 0);
    for (std::size_t s = 0; s < slots; ++s)
      out_offset_[s + 1] = out_offset_[s] + count[s];
    out_.assign(transitions_.size(), 0);
    std::vector<std::uint32_t> fill(out_offset_.begin(), out_offset_.end() - 1);
    for (std::size_t i = 0; i < transitions_.size(); ++i) {
      const auto& t = transitions_[i];
      out_[fill[t.source * alphabet_.size() + t.letter]++] = static_cast<transition_id>(i);
    }

    weights_.clear();
    for (const auto& t : transitions_)
      weights_.push_back(t.weight);
    std::sort(weights_.begin(), weights_.end());
    weights_.erase(std::unique(weights_.begin(), weights_.end()), weights_.end());
    ranks_.resize(transitions_.size());
    for (std::size_t i = 0; i < transitions_.size(); ++i)
      ranks_[i] = rank_of(transitions_[i].weight);

    if (vf.boolean != boolean_class::none)
      validate_sink_shape();
  }

  void validate_sink_shape() const
  {
    for (const auto& t : transitions_)
      if (t.weight != 0 && t.weight != 1)
        throw validation_error("Reachability/Safety weights must be 0 or 1");
    // Reachability: weight-1 transitions enter a target sink.
    // Safety: weight-0 transitions enter a rejecting sink.
    const bool reach = value_fn_.boolean == boolean_class::reachability;
    const rational marked = reach ? 1 : 0;
    auto sink = sinks_with_weight(marked);
    for (const auto& t : transitions_)
      if (t.weight == marked && !sink[t.target])
        throw validation_error(std::string(reach ? "accepting" : "rejecting")
                               + " transition from " + states_[t.source]
                               + " does not lead to a "
                               + (reach ? "target" : "rejecting") + " sink");
  }

  static void check_unique(const std::vector<std::string>& names, const char* what)
  {
    std::vector<std::string> sorted = names;
    std::sort(sorted.begin(), sorted.end());
    auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end())
      throw validation_error(std::string("duplicate ") + what + " " + *dup);
    for (const auto& n : names)
      if (n.empty())
        throw validation_error(std::string("empty ") + what + " name");
  }

  std::vector<std::string> alphabet_;
  std::vector<std::string> states_;
  state_id initial_;
  std::vector<transition> transitions_;
  value_function value_fn_;
  word_mode mode_;

  std::vector<std::uint32_t> out_offset_;
  std::vector<transition_id> out_;
  std::vector<rational> weights_;
  std::vector<int> ranks_;
};

/// Ultimately periodic word u·v^ω; an empty cycle denotes the finite word u.
struct lasso_word
{
  std::vector<letter_id> prefix;
  std::vector<letter_id> cycle;

  bool is_finite() const noexcept { return cycle.empty(); }
  std::size_t length() const noexcept { return prefix.size() + cycle.size(); }
  letter_id at(std::size_t i) const
  {
    return i < prefix.size() ? prefix[i] : cycle[(i - prefix.size()) % cycle.size()];
  }
  bool operator==(const lasso_word&) const = default;
};

/// A run given as transition ids: finite (empty cycle) or prefix·cycle^ω.
struct run
{
  std::vector<transition_id> prefix;
  std::vector<transition_id> cycle;
  bool operator==(const run&) const = default;
};

/// Dense ranking of weights: `ranked` has weights 1..k in the original order;
/// `weights[r-1]` is the original weight of rank r.
struct ranked_automaton
{
  automaton ranked;
  std::vector<rational> weights;

  rational original(int rank) const { return weights.at(static_cast<std::size_t>(rank - 1)); }
};

/// Replaces weights by their dense ranks 1..k. The Reachability/Safety tag is
/// dropped since ranks leave {0,1}; only G2 builders consume the result.
inline ranked_automaton normalize_weights(const automaton& a)
{
  std::vector<transition> ts = a.transitions();
  for (std::size_t i = 0; i < ts.size(); ++i)
    ts[i].weight = a.rank(static_cast<transition_id>(i));
  value_function vf = a.value_fn();
  vf.boolean = boolean_class::none;
  return {a.with(std::move(vf), std::move(ts)), a.weights()};
}

} // namespace hdq
