#ifndef CHROMOSEG_TRANSITION_HPP
#define CHROMOSEG_TRANSITION_HPP

#include <array>
#include <cstddef>
#include <vector>

namespace chromoseg {

inline constexpr std::size_t kMaxStates = 4;

// Instability-selection transitions: with probability 1 - theta(d) the next
// SNP keeps the current state, otherwise its state is redrawn from `initial`.
struct TransitionParams {
  std::vector<double> initial;
  double distance_scale = 1e8;  // base pairs per distance unit
  double theta_rate = 2.0;

  std::size_t states() const { return initial.size(); }
  void validate() const;
};

// Puts `normal_prob` on the normal-like state and splits the rest evenly.
std::vector<double> default_initial(std::size_t states, std::size_t normal_state,
                                    double normal_prob = 0.97);

// theta(d) = 1 - exp(-rate * gap / scale).
double theta(double gap_bp, double scale, double rate = 2.0);

class TransitionMatrix {
 public:
  explicit TransitionMatrix(std::size_t states) : states_(states), p_(states * states, 0.0) {}
  std::size_t states() const { return states_; }
  double operator()(std::size_t from, std::size_t to) const { return p_[from * states_ + to]; }
  double& operator()(std::size_t from, std::size_t to) { return p_[from * states_ + to]; }

 private:
  std::size_t states_;
  std::vector<double> p_;
};

TransitionMatrix transition_matrix(double gap_bp, const TransitionParams& params);

// Log transition probabilities for one step. Because every off-diagonal entry
// of column k equals initial[k] * theta, the matrix is stored as K diagonal
// terms plus K off-diagonal column terms.
struct LogTransitionStep {
  std::array<double, kMaxStates> stay{};
  std::array<double, kMaxStates> enter{};
  double theta = 0.0;

  double operator()(std::size_t from, std::size_t to) const {
    return from == to ? stay[to] : enter[to];
  }
};

class LogTransitionModel {
 public:
  explicit LogTransitionModel(const TransitionParams& params);
  LogTransitionStep step(double gap_bp) const;
  double log_initial(std::size_t state) const { return log_initial_[state]; }
  std::size_t states() const { return states_; }

 private:
  std::size_t states_;
  std::array<double, kMaxStates> initial_{};
  std::array<double, kMaxStates> log_initial_{};
  double distance_scale_;
  double theta_rate_;
};

}  // namespace chromoseg

#endif
