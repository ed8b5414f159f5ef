#ifndef CHROMOSEG_EMISSIONS_HPP
#define CHROMOSEG_EMISSIONS_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chromoseg/reference.hpp"
#include "chromoseg/snp_data.hpp"

namespace chromoseg {

enum class GenotypeRegime : unsigned char { Loss, Retention };

struct GenotypeEmissionParams {
  double p_hom_loss = 0.99;  // P(Hom call | loss of heterozygosity)
  double p_hom_ret = 0.7;    // P(Hom call | retention)
  void validate() const;
};

// Copy-number levels are 1, 2 and 3 copies; means are on the log2 scale.
struct CopyNumberEmissionParams {
  std::array<double, 3> means{0.0, 1.0, 1.5849625007211562};
  double sigma = 0.25;
  void validate() const;
  double mean(int level) const { return means[static_cast<std::size_t>(level - 1)]; }
};

enum class ModelKind : unsigned char { Genotype, CopyNumber, Joint };

std::string_view model_kind_name(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);  // "gt", "cn" or "joint"

struct StateInfo {
  std::string_view name;
  std::optional<GenotypeRegime> regime;  // absent in the copy-number space
  std::optional<int> cn_level;           // absent in the genotype space
};

// Genotype:    loss, retention
// CopyNumber:  deletion, normal, amplification
// Joint:       deletion (Loss,1), loh (Loss,2), normal (Ret,2), amplification (Ret,3)
class StateSpace {
 public:
  static StateSpace of(ModelKind kind);

  ModelKind kind() const { return kind_; }
  std::size_t size() const { return states_.size(); }
  const StateInfo& state(std::size_t i) const { return states_[i]; }
  std::string_view name(std::size_t i) const { return states_[i].name; }
  std::optional<std::size_t> find(std::string_view name) const;

  std::size_t normal_state() const { return normal_; }
  // Deletion state of the copy-number and joint spaces.
  std::optional<std::size_t> deletion_state() const;

  bool uses_genotype() const { return kind_ != ModelKind::CopyNumber; }
  bool uses_copy_number() const { return kind_ != ModelKind::Genotype; }

 private:
  StateSpace(ModelKind kind, std::vector<StateInfo> states, std::size_t normal)
      : kind_(kind), states_(std::move(states)), normal_(normal) {}
  ModelKind kind_;
  std::vector<StateInfo> states_;
  std::size_t normal_;
};

double genotype_loglik_vanilla(GenotypeCall call, GenotypeRegime regime,
                               const GenotypeEmissionParams& params,
                               double floor = kDefaultDensityFloor);

// Weights the call probability by the score density of the call under the
// regime; without a score or for a no-call this is the vanilla value.
double genotype_loglik_ice(GenotypeCall call, std::optional<double> score, GenotypeRegime regime,
                           const GenotypeEmissionParams& params, const ReferenceModel& reference,
                           double floor = kDefaultDensityFloor);

double cn_loglik_vanilla(double cn_log2, int level, const CopyNumberEmissionParams& params,
                         double floor = kDefaultDensityFloor);

// Normal with sd sigma * scale; an absent scale gives the vanilla value.
double cn_loglik_ice(double cn_log2, std::optional<double> scale, int level,
                     const CopyNumberEmissionParams& params, double floor = kDefaultDensityFloor);

struct EmissionModel {
  GenotypeEmissionParams genotype;
  CopyNumberEmissionParams copy_number;
  const ReferenceModel* reference = nullptr;
  bool ice = false;
  double density_floor = kDefaultDensityFloor;
};

// Channel terms; an absent observation contributes 0.
double genotype_term(const SnpObservation& obs, GenotypeRegime regime, const EmissionModel& model);
double copy_number_term(const SnpObservation& obs, int level, const EmissionModel& model);

// Log emission of one state of the joint space: copy-number term at the
// state's level plus genotype term at the state's regime.
double joint_loglik(const SnpObservation& obs, std::size_t joint_state, const EmissionModel& model);

// Log emission for any state space; only the channels the space models count.
double state_loglik(const SnpObservation& obs, const StateSpace& space, std::size_t state,
                    const EmissionModel& model);

// (q84 - q16) / 2 of the values; at least 10 finite values required.
double robust_sigma(std::span<const double> values);

}  // namespace chromoseg

#endif
