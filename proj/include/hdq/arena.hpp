#pragma once

#include "hdq/error.hpp"
#include "hdq/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hdq {

enum class player : std::uint8_t { eve, adam };

inline player opponent(player p) noexcept
{
  return p == player::eve ? player::adam : player::eve;
}

inline const char* to_string(player p)
{
  return p == player::eve ? "Eve" : "Adam";
}

using position_id = std::uint32_t;
using move_id = std::uint32_t;

enum class objective_kind { safety, reachability, cobuchi, parity, multi_discount };

inline const char* to_string(objective_kind k)
{
  switch (k) {
  case objective_kind::safety: return "safety";
  case objective_kind::reachability: return "reachability";
  case objective_kind::cobuchi: return "cobuchi";
  case objective_kind::parity: return "parity";
  case objective_kind::multi_discount: return "multi-discount";
  }
  return "?";
}

/// Winning condition for Eve. Priorities (co-Büchi, parity) and weights with
/// discounts (multi-discount) label moves; `marked` flags unsafe positions
/// (safety) or target positions (reachability). Parity is max-even.
struct objective
{
  objective_kind kind = objective_kind::safety;
  std::vector<bool> marked;
  rational threshold = 0; // multi-discount: Eve wins iff discounted sum >= threshold
};

/// Finite turn-based arena. Positions are owned by Eve or Adam; every position
/// has at least one outgoing move. Built through arena_builder, immutable after.
class arena
{
public:
  std::size_t size() const noexcept { return owner_.size(); }
  std::size_t move_count() const noexcept { return from_.size(); }
  position_id initial() const noexcept { return initial_; }
  player owner(position_id p) const { return owner_[p]; }
  const std::vector<player>& owners() const noexcept { return owner_; }
  const objective& goal() const noexcept { return objective_; }

  position_id from(move_id m) const { return from_[m]; }
  position_id to(move_id m) const { return to_[m]; }
  const std::vector<position_id>& targets() const noexcept { return to_; }
  const std::vector<position_id>& sources() const noexcept { return from_; }

  bool has_priorities() const noexcept { return !priority_.empty(); }
  int priority(move_id m) const { return priority_.empty() ? 0 : priority_[m]; }
  const std::vector<int>& priorities() const noexcept { return priority_; }
  int max_priority() const
  {
    int d = 0;
    for (int p : priority_)
      d = p > d ? p : d;
    return d;
  }

  bool has_weights() const noexcept { return !weight_.empty(); }
  const rational& weight(move_id m) const { return weight_[m]; }
  const rational& discount(move_id m) const { return discount_[m]; }
  const std::vector<rational>& weights() const noexcept { return weight_; }
  const std::vector<rational>& discounts() const noexcept { return discount_; }

  std::span<const move_id> out(position_id p) const
  {
    return {out_.data() + out_offset_[p], out_.data() + out_offset_[p + 1]};
  }
  std::span<const move_id> in(position_id p) const
  {
    return {in_.data() + in_offset_[p], in_.data() + in_offset_[p + 1]};
  }
  const std::vector<std::uint32_t>& out_offsets() const noexcept { return out_offset_; }
  const std::vector<move_id>& out_moves() const noexcept { return out_; }

  /// Same graph and labels with the owners swapped (used for duality checks).
  arena with_owners_swapped(objective goal) const
  {
    arena a = *this;
    for (auto& o : a.owner_)
      o = opponent(o);
    a.objective_ = std::move(goal);
    a.check_objective();
    return a;
  }

  /// Same graph and owners, different objective.
  arena with_objective(objective goal) const
  {
    arena a = *this;
    a.objective_ = std::move(goal);
    a.check_objective();
    return a;
  }

  /// Same graph with new move labels (e.g. edited weights).
  arena with_labels(std::vector<int> priority, std::vector<rational> weight,
                    std::vector<rational> discount) const
  {
    arena a = *this;
    a.priority_ = std::move(priority);
    a.weight_ = std::move(weight);
    a.discount_ = std::move(discount);
    a.check_objective();
    return a;
  }

private:
  friend class arena_builder;

  void finalize()
  {
    const std::size_t n = owner_.size();
    if (n == 0)
      throw validation_error("arena has no positions");
    if (initial_ >= n)
      throw validation_error("arena initial position out of range");
    out_offset_.assign(n + 1, 0);
    in_offset_.assign(n + 1, 0);
    for (std::size_t m = 0; m < from_.size(); ++m) {
      if (from_[m] >= n || to_[m] >= n)
        throw validation_error("arena move refers to unknown position");
      ++out_offset_[from_[m] + 1];
      ++in_offset_[to_[m] + 1];
    }
    for (std::size_t p = 0; p < n; ++p) {
      if (out_offset_[p + 1] == 0)
        throw validation_error("arena position " + std::to_string(p) + " has no move");
      out_offset_[p + 1] += out_offset_[p];
      in_offset_[p + 1] += in_offset_[p];
    }
    out_.assign(from_.size(), 0);
    in_.assign(from_.size(), 0);
    std::vector<std::uint32_t> fo(out_offset_.begin(), out_offset_.end() - 1);
    std::vector<std::uint32_t> fi(in_offset_.begin(), in_offset_.end() - 1);
    for (std::size_t m = 0; m < from_.size(); ++m) {
      out_[fo[from_[m]]++] = static_cast<move_id>(m);
      in_[fi[to_[m]]++] = static_cast<move_id>(m);
    }
    check_objective();
  }

  void check_objective() const
  {
    const std::size_t n = owner_.size();
    switch (objective_.kind) {
    case objective_kind::safety:
    case objective_kind::reachability:
      if (objective_.marked.size() != n)
        throw validation_error("safety/reachability objective needs one flag per position");
      break;
    case objective_kind::cobuchi:
    case objective_kind::parity:
      if (priority_.size() != from_.size())
        throw validation_error("parity objective needs one priority per move");
      for (int p : priority_) {
        if (p < 0)
          throw validation_error("negative priority");
        if (objective_.kind == objective_kind::cobuchi && p > 1)
          throw validation_error("co-Buchi priorities must be 0 or 1");
      }
      break;
    case objective_kind::multi_discount:
      if (weight_.size() != from_.size() || discount_.size() != from_.size())
        throw validation_error("multi-discount objective needs weight and discount per move");
      for (const auto& d : discount_)
        if (d <= 0 || d >= 1)
          throw validation_error("discount factor outside (0,1)");
      break;
    }
  }

  std::vector<player> owner_;
  std::vector<position_id> from_;
  std::vector<position_id> to_;
  std::vector<int> priority_;
  std::vector<rational> weight_;
  std::vector<rational> discount_;
  position_id initial_ = 0;
  objective objective_;

  std::vector<std::uint32_t> out_offset_, in_offset_;
  std::vector<move_id> out_, in_;
};

class arena_builder
{
public:
  position_id add_position(player owner)
  {
    a_.owner_.push_back(owner);
    return static_cast<position_id>(a_.owner_.size() - 1);
  }

  void reserve(std::size_t positions, std::size_t moves)
  {
    a_.owner_.reserve(positions);
    a_.from_.reserve(moves);
    a_.to_.reserve(moves);
  }

  move_id add_move(position_id from, position_id to)
  {
    a_.from_.push_back(from);
    a_.to_.push_back(to);
    return static_cast<move_id>(a_.from_.size() - 1);
  }

  move_id add_move(position_id from, position_id to, int priority)
  {
    a_.priority_.resize(a_.from_.size(), 0);
    a_.priority_.push_back(priority);
    return add_move(from, to);
  }

  move_id add_move(position_id from, position_id to, rational weight, rational discount)
  {
    a_.weight_.resize(a_.from_.size(), 0);
    a_.discount_.resize(a_.from_.size(), rational(1, 2));
    a_.weight_.push_back(std::move(weight));
    a_.discount_.push_back(std::move(discount));
    return add_move(from, to);
  }

  std::size_t size() const noexcept { return a_.owner_.size(); }

  arena build(position_id initial, objective goal) &&
  {
    if (!a_.priority_.empty())
      a_.priority_.resize(a_.from_.size(), 0);
    if (!a_.weight_.empty()) {
      a_.weight_.resize(a_.from_.size(), 0);
      a_.discount_.resize(a_.from_.size(), rational(1, 2));
    }
    a_.initial_ = initial;
    a_.objective_ = std::move(goal);
    a_.finalize();
    return std::move(a_);
  }

private:
  arena a_;
};

/// Positional strategy: chosen move per position, -1 where undefined.
struct positional_strategy
{
  std::vector<std::int64_t> move;

  bool defined(position_id p) const { return p < move.size() && move[p] >= 0; }
  move_id at(position_id p) const { return static_cast<move_id>(move.at(p)); }
};

struct solve_result
{
  std::vector<bool> eve_wins;
  positional_strategy eve;  // defined on Eve's positions of her region
  positional_strategy adam; // defined on Adam's positions of his region
  std::vector<rational> values; // multi-discount only: exact game values

  player winner(position_id p) const { return eve_wins.at(p) ? player::eve : player::adam; }
};

} // namespace hdq
