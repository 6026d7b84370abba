// SPDX-License-Identifier: Apache-2.0

#include "wetsim/oracle.hpp"

#include <limits>

#include "wetsim/errors.hpp"

namespace wetsim {

int feedback_bit(double q_now, double q_prev) { return q_now >= q_prev ? -1 : 1; }

FeedbackOracle::FeedbackOracle(const ChannelRealization& channel, double interval_duration)
    : channel_(channel),
      duration_(interval_duration),
      last_(channel.users.size(), 0.0),
      best_(channel.users.size(), -std::numeric_limits<double>::infinity()) {
  if (!(interval_duration > 0.0)) {
    throw PreconditionError("interval duration must be positive");
  }
}

double FeedbackOracle::energy(const HermitianMatrix& s, std::size_t k) const {
  const auto& u = channel_.users.at(k);
  return duration_ * u.gamma * trace_product(u.g, s);
}

void FeedbackOracle::record(const HermitianMatrix& s) {
  if (s.dim() != channel_.m_t) {
    throw DimensionError("covariance dimension does not match the transmit array");
  }
  history_.push_back(s);
}

std::vector<int> FeedbackOracle::transmit(const HermitianMatrix& s, std::span<const std::size_t> receivers) {
  record(s);
  std::vector<double> now(last_.size());
  for (std::size_t k = 0; k < now.size(); ++k) {
    now[k] = energy(s, k);
  }
  std::vector<int> bits;
  bits.reserve(receivers.size());
  for (std::size_t k : receivers) {
    bits.push_back(feedback_bit(now.at(k), last_[k]));
  }
  last_ = std::move(now);
  return bits;
}

int FeedbackOracle::transmit_vs_best(const HermitianMatrix& s, std::size_t k) {
  record(s);
  for (std::size_t u = 0; u < last_.size(); ++u) {
    last_[u] = energy(s, u);
  }
  const double q = last_.at(k);
  if (q > best_[k]) {
    best_[k] = q;
    return -1;
  }
  return 1;
}

void FeedbackOracle::reset_best(std::size_t k) { best_.at(k) = -std::numeric_limits<double>::infinity(); }

}  // namespace wetsim
