#ifndef CHROMOSEG_HMM_HPP
#define CHROMOSEG_HMM_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "chromoseg/emissions.hpp"
#include "chromoseg/reference.hpp"
#include "chromoseg/snp_data.hpp"
#include "chromoseg/transition.hpp"

namespace chromoseg {

using StatePath = std::vector<std::uint8_t>;

struct HmmModel {
  StateSpace space = StateSpace::of(ModelKind::Joint);
  TransitionParams transition;
  GenotypeEmissionParams genotype;
  CopyNumberEmissionParams copy_number;
  std::shared_ptr<const ReferenceModel> reference;
  bool ice = false;
  double density_floor = kDefaultDensityFloor;

  // Default parameters for a state space: 0.97 on the normal-like state.
  static HmmModel make(ModelKind kind);

  EmissionModel emissions() const;
  void validate() const;
};

// Row-major n x K table of log emission probabilities.
class EmissionTable {
 public:
  EmissionTable(std::size_t snps, std::size_t states)
      : snps_(snps), states_(states), values_(snps * states, 0.0) {}
  std::size_t snps() const { return snps_; }
  std::size_t states() const { return states_; }
  double operator()(std::size_t snp, std::size_t state) const { return values_[snp * states_ + state]; }
  double& operator()(std::size_t snp, std::size_t state) { return values_[snp * states_ + state]; }
  std::span<const double> row(std::size_t snp) const {
    return {values_.data() + snp * states_, states_};
  }

 private:
  std::size_t snps_;
  std::size_t states_;
  std::vector<double> values_;
};

// Throws std::runtime_error naming the SNP index when an emission fails.
EmissionTable compute_emissions(const HmmModel& model, const SnpTrack& track);

struct DecodeResult {
  StatePath path;
  double path_loglik = 0.0;
  double total_loglik = 0.0;  // forward log likelihood
};

double forward_loglik(const HmmModel& model, const SnpTrack& track);

// Most probable state sequence; ties go to the lower state index.
DecodeResult viterbi(const HmmModel& model, const SnpTrack& track);

// Log joint probability of the observations and one fixed state path.
double path_loglik(const HmmModel& model, const SnpTrack& track, std::span<const std::uint8_t> path);

// Forward-backward smoothing probabilities, one row of K per SNP.
struct Posterior {
  std::size_t states = 0;
  std::vector<double> probs;
  double loglik = 0.0;

  std::span<const double> row(std::size_t snp) const { return {probs.data() + snp * states, states}; }
};

Posterior posterior_probs(const HmmModel& model, const SnpTrack& track);

struct EmLearnSet {
  bool initial = false;
  bool p_hom_loss = false;
  bool p_hom_ret = false;
  bool cn_sigma = false;
  bool cn_means = false;

  bool any() const { return initial || p_hom_loss || p_hom_ret || cn_sigma || cn_means; }
};

struct EmOptions {
  std::size_t max_iter = 50;
  double tol = 1e-4;
  EmLearnSet learn;
};

struct EmResult {
  HmmModel model;
  std::vector<double> trace;  // pooled log likelihood of each evaluated model
  bool stopped_at_constraint = false;
};

// Baum-Welch over independent tracks with pooled sufficient statistics.
EmResult em_fit(const HmmModel& model, std::span<const SnpTrack> tracks, const EmOptions& options);

}  // namespace chromoseg

#endif
