#include "chromoseg/transition.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "chromoseg/numeric.hpp"

namespace chromoseg {

void TransitionParams::validate() const {
  if (initial.size() < 2 || initial.size() > kMaxStates)
    throw std::invalid_argument("transition: state count must be between 2 and " +
                                std::to_string(kMaxStates));
  double total = 0.0;
  for (double p : initial) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("transition: initial probability outside [0,1]");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("transition: initial probabilities must sum to 1");
  if (!(distance_scale > 0.0) || !std::isfinite(distance_scale))
    throw std::invalid_argument("transition: distance scale must be positive");
  if (!(theta_rate > 0.0) || !std::isfinite(theta_rate))
    throw std::invalid_argument("transition: theta rate must be positive");
}

std::vector<double> default_initial(std::size_t states, std::size_t normal_state,
                                    double normal_prob) {
  if (states < 2 || normal_state >= states)
    throw std::invalid_argument("default_initial: bad state layout");
  std::vector<double> pi(states, (1.0 - normal_prob) / static_cast<double>(states - 1));
  pi[normal_state] = normal_prob;
  return pi;
}

double theta(double gap_bp, double scale, double rate) {
  if (!(gap_bp >= 0.0)) throw std::invalid_argument("theta: negative distance");
  if (!(scale > 0.0)) throw std::invalid_argument("theta: scale must be positive");
  return -std::expm1(-rate * gap_bp / scale);
}

TransitionMatrix transition_matrix(double gap_bp, const TransitionParams& params) {
  params.validate();
  const double t = theta(gap_bp, params.distance_scale, params.theta_rate);
  const std::size_t k = params.states();
  TransitionMatrix m(k);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t l = 0; l < k; ++l) {
      m(j, l) = (j == l) ? 1.0 - t + params.initial[l] * t : params.initial[l] * t;
    }
  }
  return m;
}

LogTransitionModel::LogTransitionModel(const TransitionParams& params)
    : states_(params.states()),
      distance_scale_(params.distance_scale),
      theta_rate_(params.theta_rate) {
  params.validate();
  for (std::size_t k = 0; k < states_; ++k) {
    initial_[k] = params.initial[k];
    log_initial_[k] = params.initial[k] > 0.0 ? std::log(params.initial[k]) : kNegInf;
  }
}

LogTransitionStep LogTransitionModel::step(double gap_bp) const {
  LogTransitionStep s;
  s.theta = theta(gap_bp, distance_scale_, theta_rate_);
  const double log_theta = s.theta > 0.0 ? std::log(s.theta) : kNegInf;
  for (std::size_t k = 0; k < states_; ++k) {
    // 1 - theta + pi*theta = 1 - theta*(1 - pi)
    s.stay[k] = std::log1p(-s.theta * (1.0 - initial_[k]));
    s.enter[k] = log_initial_[k] + log_theta;
  }
  return s;
}

}  // namespace chromoseg
