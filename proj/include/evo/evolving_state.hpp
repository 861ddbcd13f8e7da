#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "evo/rng.hpp"

namespace evo {

using Item = std::int32_t;
using Position = std::int32_t;
using Rank = std::int32_t;

/// Raised when an operation is called with arguments outside its domain.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class InitPolicy { identity, reversed, uniform_random };

/// Outcome of comparing the elements at two positions of the maintained list.
enum class Ordering { a_first, b_first };

/// One random adjacent swap in the true order: ranks `rank` and `rank + 1`
/// were exchanged. `lowered` now holds `rank`, `raised` now holds `rank + 1`.
struct RandomSwap {
  Rank rank = 0;
  Item lowered = 0;
  Item raised = 0;
  int delta = 0;  // +1 or -1
};

struct StepLog {
  std::uint64_t step_index = 0;
  /// Absent for the short-circuit guard (`j == 0`), which still costs a step.
  std::optional<std::pair<Position, Position>> compare_positions;
  bool sort_swap_applied = false;
  std::int64_t sort_delta_I = 0;
  std::vector<RandomSwap> random_swaps;
  std::int64_t random_delta_I = 0;
};

/// Called after each random swap of a step, before the clock advances.
using SwapHook = std::function<void(const RandomSwap&)>;

/// Ground truth of the evolving-data model.
///
/// The maintained list is `maintained[pos] = item`; the hidden true order is a
/// rank per item. `sigma[pos]` is the rank of the item at `pos` and
/// `sigma_inv` its inverse. A random swap in the true order exchanges two
/// consecutive ranks, so every update is O(1) and the inversion count
/// `inversions()` is maintained incrementally.
///
/// A time step is opened by `compare` (or `compare_short_circuit`), may apply
/// sorter moves, and is closed by `finish_step`, which applies the alpha random
/// swaps and advances the clock. Comparisons always see the order before the
/// step's random swaps.
class EvolvingState {
 public:
  EvolvingState(int n, int alpha, InitPolicy policy, std::uint64_t seed);

  int n() const { return static_cast<int>(sigma_.size()); }
  int alpha() const { return alpha_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t clock() const { return clock_; }
  /// Bumped on every mutation; snapshots use it to detect staleness.
  std::uint64_t revision() const { return revision_; }
  std::int64_t inversions() const { return inversions_; }

  std::span<const Rank> sigma() const { return sigma_; }
  std::span<const Position> sigma_inv() const { return sigma_inv_; }
  std::span<const Item> maintained() const { return maintained_; }
  std::span<const Rank> true_rank() const { return true_rank_; }
  Rank rank_at(Position p) const { return sigma_[p]; }
  Item item_at(Position p) const { return maintained_[p]; }
  Position position_of(Item x) const { return sigma_inv_[true_rank_[x]]; }

  bool step_open() const { return step_open_; }
  const StepLog& last_step() const { return log_; }

  /// Opens a step and reports the true order of the two elements.
  Ordering compare(Position a, Position b);
  /// Opens a step for a guard that short-circuits without comparing.
  void compare_short_circuit();
  /// Exchanges positions j-1 and j, which must currently be inverted.
  void sorter_swap(Position j);
  /// Exchanges two arbitrary positions (quicksort data movement). O(|a-b|).
  /// Outside an open step the move is charged to the next step's log.
  void permute_swap(Position a, Position b);
  /// Applies alpha random adjacent swaps and advances the clock.
  const StepLog& finish_step(const SwapHook& hook = {});

  /// compare + finish_step.
  std::pair<Ordering, StepLog> compare_step(Position a, Position b);

  /// Applies one random adjacent swap outside the step protocol (test/replay).
  RandomSwap apply_rank_swap(Rank r);

  /// Same state with random swaps disabled; used to simulate frozen rounds.
  EvolvingState frozen_copy() const;

  std::string serialize() const;
  static EvolvingState deserialize(const std::string& text);

  friend bool operator==(const EvolvingState& a, const EvolvingState& b);

 private:
  EvolvingState() = default;
  void check_position(Position p, const char* what) const;
  void open_step();
  void exchange_positions(Position a, Position b);

  int alpha_ = 1;
  std::uint64_t seed_ = 0;
  std::uint64_t clock_ = 0;
  std::uint64_t revision_ = 0;
  std::int64_t inversions_ = 0;
  std::vector<Item> maintained_;
  std::vector<Rank> true_rank_;
  std::vector<Rank> sigma_;
  std::vector<Position> sigma_inv_;
  Rng rng_;
  bool step_open_ = false;
  StepLog log_;
  std::int64_t pending_delta_ = 0;
  bool pending_move_ = false;
};

std::int64_t brute_force_inversions(std::span<const Rank> sigma);
inline std::int64_t brute_force_inversions(const EvolvingState& s) {
  return brute_force_inversions(s.sigma());
}

/// Checks that sigma/sigma_inv/maintained/true_rank agree. Returns an
/// explanation on failure.
std::optional<std::string> consistency_error(const EvolvingState& s);

}  // namespace evo
