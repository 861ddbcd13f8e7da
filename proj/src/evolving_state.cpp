#include "evo/evolving_state.hpp"

#include <algorithm>
#include <numeric>

#include <json.hpp>

namespace evo {

EvolvingState::EvolvingState(int n, int alpha, InitPolicy policy, std::uint64_t seed)
    : alpha_(alpha), seed_(seed), rng_(seed) {
  if (n < 2) throw std::invalid_argument("EvolvingState: n must be at least 2");
  if (alpha < 0) throw std::invalid_argument("EvolvingState: alpha must be non-negative");

  maintained_.resize(n);
  std::iota(maintained_.begin(), maintained_.end(), 0);
  true_rank_.resize(n);
  switch (policy) {
    case InitPolicy::identity:
      std::iota(true_rank_.begin(), true_rank_.end(), 0);
      break;
    case InitPolicy::reversed:
      for (int x = 0; x < n; ++x) true_rank_[x] = n - 1 - x;
      break;
    case InitPolicy::uniform_random:
      std::iota(true_rank_.begin(), true_rank_.end(), 0);
      for (int k = n - 1; k > 0; --k) {
        auto r = static_cast<int>(rng_.uniform(static_cast<std::uint64_t>(k) + 1));
        std::swap(true_rank_[k], true_rank_[r]);
      }
      break;
  }
  sigma_ = true_rank_;  // maintained is the identity on items
  sigma_inv_.resize(n);
  for (int p = 0; p < n; ++p) sigma_inv_[sigma_[p]] = p;
  inversions_ = brute_force_inversions(sigma_);
}

void EvolvingState::check_position(Position p, const char* what) const {
  if (p < 0 || p >= n()) {
    throw ContractViolation(std::string(what) + ": position " + std::to_string(p) +
                            " out of range");
  }
}

void EvolvingState::open_step() {
  if (step_open_) throw ContractViolation("EvolvingState: previous step not finished");
  step_open_ = true;
  log_.step_index = clock_;
  log_.compare_positions.reset();
  log_.sort_swap_applied = pending_move_;
  log_.sort_delta_I = pending_delta_;
  pending_move_ = false;
  pending_delta_ = 0;
  log_.random_swaps.clear();
  log_.random_delta_I = 0;
}

Ordering EvolvingState::compare(Position a, Position b) {
  check_position(a, "compare");
  check_position(b, "compare");
  if (a == b) throw ContractViolation("compare: positions must differ");
  open_step();
  log_.compare_positions = std::make_pair(a, b);
  return sigma_[a] < sigma_[b] ? Ordering::a_first : Ordering::b_first;
}

void EvolvingState::compare_short_circuit() { open_step(); }

void EvolvingState::exchange_positions(Position a, Position b) {
  std::swap(maintained_[a], maintained_[b]);
  std::swap(sigma_[a], sigma_[b]);
  sigma_inv_[sigma_[a]] = a;
  sigma_inv_[sigma_[b]] = b;
  ++revision_;
}

void EvolvingState::sorter_swap(Position j) {
  if (j < 1 || j >= n()) throw ContractViolation("sorter_swap: j out of range");
  if (sigma_[j] > sigma_[j - 1]) {
    throw ContractViolation("sorter_swap: pair (j-1, j) is not inverted");
  }
  exchange_positions(j - 1, j);
  --inversions_;
  if (step_open_) {
    log_.sort_swap_applied = true;
    log_.sort_delta_I -= 1;
  } else {
    pending_move_ = true;
    pending_delta_ -= 1;
  }
}

void EvolvingState::permute_swap(Position a, Position b) {
  check_position(a, "permute_swap");
  check_position(b, "permute_swap");
  if (a == b) return;
  if (a > b) std::swap(a, b);
  const Rank u = sigma_[a];
  const Rank v = sigma_[b];
  std::int64_t delta = u < v ? 1 : -1;
  for (Position z = a + 1; z < b; ++z) {
    const Rank w = sigma_[z];
    delta += (v > w) + (w > u) - (u > w) - (w > v);
  }
  exchange_positions(a, b);
  inversions_ += delta;
  if (step_open_) {
    log_.sort_swap_applied = true;
    log_.sort_delta_I += delta;
  } else {
    pending_move_ = true;
    pending_delta_ += delta;
  }
}

RandomSwap EvolvingState::apply_rank_swap(Rank r) {
  if (r < 0 || r + 1 >= n()) throw ContractViolation("apply_rank_swap: rank out of range");
  const Position lo = sigma_inv_[r];
  const Position hi = sigma_inv_[r + 1];
  RandomSwap s;
  s.rank = r;
  s.delta = lo < hi ? 1 : -1;
  s.lowered = maintained_[hi];
  s.raised = maintained_[lo];
  sigma_[lo] = r + 1;
  sigma_[hi] = r;
  sigma_inv_[r] = hi;
  sigma_inv_[r + 1] = lo;
  true_rank_[s.lowered] = r;
  true_rank_[s.raised] = r + 1;
  inversions_ += s.delta;
  ++revision_;
  return s;
}

const StepLog& EvolvingState::finish_step(const SwapHook& hook) {
  if (!step_open_) throw ContractViolation("finish_step: no open step");
  const auto pairs = static_cast<std::uint64_t>(n() - 1);
  for (int k = 0; k < alpha_; ++k) {
    const RandomSwap s = apply_rank_swap(static_cast<Rank>(rng_.uniform(pairs)));
    log_.random_swaps.push_back(s);
    log_.random_delta_I += s.delta;
    if (hook) hook(s);
  }
  ++clock_;
  step_open_ = false;
  return log_;
}

std::pair<Ordering, StepLog> EvolvingState::compare_step(Position a, Position b) {
  const Ordering o = compare(a, b);
  return {o, finish_step()};
}

EvolvingState EvolvingState::frozen_copy() const {
  EvolvingState copy = *this;
  copy.alpha_ = 0;
  // A copy taken mid-step starts with the step already closed.
  copy.step_open_ = false;
  copy.pending_move_ = false;
  copy.pending_delta_ = 0;
  return copy;
}

std::string EvolvingState::serialize() const {
  nlohmann::ordered_json j;
  j["n"] = n();
  j["alpha"] = alpha_;
  j["seed"] = seed_;
  j["clock"] = clock_;
  j["revision"] = revision_;
  j["inversions"] = inversions_;
  j["maintained"] = maintained_;
  j["true_rank"] = true_rank_;
  j["rng"] = rng_.serialize();
  return j.dump();
}

EvolvingState EvolvingState::deserialize(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  EvolvingState s;
  s.alpha_ = j.at("alpha").get<int>();
  s.seed_ = j.at("seed").get<std::uint64_t>();
  s.clock_ = j.at("clock").get<std::uint64_t>();
  s.revision_ = j.at("revision").get<std::uint64_t>();
  s.maintained_ = j.at("maintained").get<std::vector<Item>>();
  s.true_rank_ = j.at("true_rank").get<std::vector<Rank>>();
  s.rng_ = Rng::deserialize(j.at("rng").get<std::string>());
  const int n = j.at("n").get<int>();
  if (n < 2 || static_cast<int>(s.maintained_.size()) != n ||
      static_cast<int>(s.true_rank_.size()) != n) {
    throw std::invalid_argument("EvolvingState::deserialize: size mismatch");
  }
  s.sigma_.assign(n, -1);
  s.sigma_inv_.assign(n, -1);
  for (Position p = 0; p < n; ++p) {
    const Item x = s.maintained_[p];
    if (x < 0 || x >= n) throw std::invalid_argument("EvolvingState::deserialize: bad item");
    const Rank r = s.true_rank_[x];
    if (r < 0 || r >= n || s.sigma_inv_[r] != -1) {
      throw std::invalid_argument("EvolvingState::deserialize: rank map is not a bijection");
    }
    s.sigma_[p] = r;
    s.sigma_inv_[r] = p;
  }
  s.inversions_ = brute_force_inversions(s.sigma_);
  if (s.inversions_ != j.at("inversions").get<std::int64_t>()) {
    throw std::invalid_argument("EvolvingState::deserialize: inversion count mismatch");
  }
  return s;
}

bool operator==(const EvolvingState& a, const EvolvingState& b) {
  return a.alpha_ == b.alpha_ && a.seed_ == b.seed_ && a.clock_ == b.clock_ &&
         a.inversions_ == b.inversions_ && a.maintained_ == b.maintained_ &&
         a.true_rank_ == b.true_rank_ && a.rng_ == b.rng_;
}

std::int64_t brute_force_inversions(std::span<const Rank> sigma) {
  std::int64_t count = 0;
  const auto n = sigma.size();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) count += sigma[x] > sigma[y];
  }
  return count;
}

std::optional<std::string> consistency_error(const EvolvingState& s) {
  const int n = s.n();
  std::vector<bool> seen(n, false);
  for (Position p = 0; p < n; ++p) {
    const Rank r = s.sigma()[p];
    if (r < 0 || r >= n || seen[r]) return "sigma is not a permutation";
    seen[r] = true;
    if (s.sigma_inv()[r] != p) return "sigma_inv is not the inverse of sigma";
    if (s.true_rank()[s.item_at(p)] != r) return "sigma disagrees with maintained/true_rank";
  }
  if (s.inversions() < 0 || s.inversions() > std::int64_t{n} * (n - 1) / 2) {
    return "inversion count out of range";
  }
  return std::nullopt;
}

}  // namespace evo
