#include "chromoseg/emissions.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

#include "chromoseg/numeric.hpp"

namespace chromoseg {

namespace {

double floored_log(double p, double floor) { return std::log(std::max(p, floor)); }

double normal_logpdf(double x, double mean, double sd, double floor) {
  const double z = (x - mean) / sd;
  const double logpdf = -0.5 * z * z - std::log(sd) - 0.5 * std::log(2.0 * std::numbers::pi);
  return std::max(logpdf, std::log(floor));
}

Zygosity zygosity_of(GenotypeCall call) {
  return call == GenotypeCall::Hom ? Zygosity::Hom : Zygosity::Het;
}

}  // namespace

void GenotypeEmissionParams::validate() const {
  if (!(p_hom_loss > 0.0 && p_hom_loss < 1.0) || !(p_hom_ret > 0.0 && p_hom_ret < 1.0))
    throw std::invalid_argument("genotype emission probabilities must lie in (0,1)");
  if (!(p_hom_loss > p_hom_ret))
    throw std::invalid_argument("p_hom_loss must exceed p_hom_ret");
}

void CopyNumberEmissionParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("copy-number sigma must be positive");
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (!std::isfinite(means[i])) throw std::invalid_argument("copy-number means must be finite");
    if (i > 0 && !(means[i] > means[i - 1]))
      throw std::invalid_argument("copy-number means must be strictly increasing");
  }
}

std::string_view model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Genotype: return "gt";
    case ModelKind::CopyNumber: return "cn";
    case ModelKind::Joint: return "joint";
  }
  return "joint";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "gt") return ModelKind::Genotype;
  if (name == "cn") return ModelKind::CopyNumber;
  if (name == "joint") return ModelKind::Joint;
  throw std::invalid_argument("unknown model '" + std::string(name) + "' (expected gt, cn or joint)");
}

StateSpace StateSpace::of(ModelKind kind) {
  using R = GenotypeRegime;
  switch (kind) {
    case ModelKind::Genotype:
      return StateSpace(kind, {{"loss", R::Loss, std::nullopt}, {"retention", R::Retention, std::nullopt}}, 1);
    case ModelKind::CopyNumber:
      return StateSpace(kind,
                        {{"deletion", std::nullopt, 1}, {"normal", std::nullopt, 2},
                         {"amplification", std::nullopt, 3}},
                        1);
    case ModelKind::Joint:
      return StateSpace(kind,
                        {{"deletion", R::Loss, 1}, {"loh", R::Loss, 2}, {"normal", R::Retention, 2},
                         {"amplification", R::Retention, 3}},
                        2);
  }
  throw std::invalid_argument("unknown model kind");
}

std::optional<std::size_t> StateSpace::find(std::string_view name) const {
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (states_[i].name == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> StateSpace::deletion_state() const {
  if (kind_ == ModelKind::Genotype) return std::nullopt;
  return 0;
}

double genotype_loglik_vanilla(GenotypeCall call, GenotypeRegime regime,
                               const GenotypeEmissionParams& params, double floor) {
  if (call == GenotypeCall::NoCall) return 0.0;
  const double p_hom = regime == GenotypeRegime::Loss ? params.p_hom_loss : params.p_hom_ret;
  return floored_log(call == GenotypeCall::Hom ? p_hom : 1.0 - p_hom, floor);
}

double genotype_loglik_ice(GenotypeCall call, std::optional<double> score, GenotypeRegime regime,
                           const GenotypeEmissionParams& params, const ReferenceModel& reference,
                           double floor) {
  const double call_term = genotype_loglik_vanilla(call, regime, params, floor);
  if (call == GenotypeCall::NoCall || !score) return call_term;
  if (!(*score >= 0.0)) throw std::invalid_argument("genotype score must be nonnegative");
  const Zygosity called = zygosity_of(call);
  const double given_hom = reference.score_density(called, Zygosity::Hom, *score, floor);
  if (regime == GenotypeRegime::Loss) return call_term + floored_log(given_hom, floor);
  const double given_het = reference.score_density(called, Zygosity::Het, *score, floor);
  const double mix = given_hom * reference.prob_hom_given_called(called) +
                     given_het * reference.prob_het_given_called(called);
  return call_term + floored_log(mix, floor);
}

double cn_loglik_vanilla(double cn_log2, int level, const CopyNumberEmissionParams& params,
                         double floor) {
  if (level < 1 || level > 3) throw std::invalid_argument("copy-number level must be 1, 2 or 3");
  return normal_logpdf(cn_log2, params.mean(level), params.sigma, floor);
}

double cn_loglik_ice(double cn_log2, std::optional<double> scale, int level,
                     const CopyNumberEmissionParams& params, double floor) {
  if (!scale) return cn_loglik_vanilla(cn_log2, level, params, floor);
  if (!(*scale > 0.0)) throw std::invalid_argument("copy-number scale must be positive");
  if (level < 1 || level > 3) throw std::invalid_argument("copy-number level must be 1, 2 or 3");
  return normal_logpdf(cn_log2, params.mean(level), params.sigma * *scale, floor);
}

double genotype_term(const SnpObservation& obs, GenotypeRegime regime, const EmissionModel& model) {
  if (!obs.gt) return 0.0;
  if (model.ice && obs.gt_score) {
    if (!model.reference)
      throw std::invalid_argument("ICE genotype emissions need a reference model");
    return genotype_loglik_ice(*obs.gt, obs.gt_score, regime, model.genotype, *model.reference,
                               model.density_floor);
  }
  return genotype_loglik_vanilla(*obs.gt, regime, model.genotype, model.density_floor);
}

double copy_number_term(const SnpObservation& obs, int level, const EmissionModel& model) {
  if (!obs.cn_log2) return 0.0;
  if (model.ice && obs.cn_scale)
    return cn_loglik_ice(*obs.cn_log2, obs.cn_scale, level, model.copy_number, model.density_floor);
  return cn_loglik_vanilla(*obs.cn_log2, level, model.copy_number, model.density_floor);
}

double joint_loglik(const SnpObservation& obs, std::size_t joint_state, const EmissionModel& model) {
  static const StateSpace joint = StateSpace::of(ModelKind::Joint);
  if (joint_state >= joint.size()) throw std::invalid_argument("joint state out of range");
  const auto& info = joint.state(joint_state);
  return copy_number_term(obs, *info.cn_level, model) + genotype_term(obs, *info.regime, model);
}

double state_loglik(const SnpObservation& obs, const StateSpace& space, std::size_t state,
                    const EmissionModel& model) {
  const auto& info = space.state(state);
  double total = 0.0;
  if (info.cn_level) total += copy_number_term(obs, *info.cn_level, model);
  if (info.regime) total += genotype_term(obs, *info.regime, model);
  return total;
}

double robust_sigma(std::span<const double> values) {
  std::vector<double> sorted;
  sorted.reserve(values.size());
  for (double v : values)
    if (std::isfinite(v)) sorted.push_back(v);
  if (sorted.size() < 10)
    throw std::invalid_argument("robust_sigma: need at least 10 finite values");
  std::sort(sorted.begin(), sorted.end());
  const double sigma = 0.5 * (sorted_quantile(sorted, 0.84) - sorted_quantile(sorted, 0.16));
  if (!(sigma > 1e-6)) throw std::invalid_argument("robust_sigma: degenerate scale");
  return sigma;
}

}  // namespace chromoseg
