// SPDX-License-Identifier: Apache-2.0
//
// Noiseless one-bit feedback: each receiver measures the energy it harvests in
// an interval and reports whether it went up (-1) or down (+1).

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "wetsim/channel.hpp"

namespace wetsim {

/// -1 if q_now >= q_prev, else +1.
int feedback_bit(double q_now, double q_prev);

class FeedbackOracle {
 public:
  explicit FeedbackOracle(const ChannelRealization& channel, double interval_duration = 1.0);

  /// Transmits `s` for one interval. Returns one bit per entry of
  /// `receivers`, comparing each receiver's energy with what it harvested in
  /// the previous interval (0 before the first interval, so the first bit is
  /// always -1).
  std::vector<int> transmit(const HermitianMatrix& s, std::span<const std::size_t> receivers);

  /// Transmits `s` for one interval; receiver `k` compares against the best
  /// energy it has recorded since its last reset_best. Returns -1 and records
  /// the new best on strict improvement, +1 otherwise.
  int transmit_vs_best(const HermitianMatrix& s, std::size_t k);
  void reset_best(std::size_t k);
  double best(std::size_t k) const { return best_.at(k); }

  /// Energy receiver k harvests from `s` in one interval (no efficiency factor).
  double energy(const HermitianMatrix& s, std::size_t k) const;

  const std::vector<HermitianMatrix>& history() const noexcept { return history_; }
  std::size_t intervals() const noexcept { return history_.size(); }
  std::size_t users() const noexcept { return channel_.users.size(); }
  std::size_t m_t() const noexcept { return channel_.m_t; }

 private:
  void record(const HermitianMatrix& s);

  const ChannelRealization& channel_;
  double duration_;
  std::vector<double> last_;
  std::vector<double> best_;
  std::vector<HermitianMatrix> history_;
};

/// Snapshot passed to learning observers after every learning interval.
struct IntervalView {
  std::size_t interval;                      // 1-based
  const HermitianMatrix& covariance;         // transmitted this interval
  std::span<const int> bits;                 // one per receiver, 0 if it sent none
  std::span<const HermitianMatrix> estimates;  // unit-norm per-receiver channel estimates
  std::span<const cplx> beam;                // current energy beam direction
};

using IntervalObserver = std::function<void(const IntervalView&)>;

}  // namespace wetsim
