#include "chromoseg/hmm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "chromoseg/numeric.hpp"

namespace chromoseg {

namespace {

using StateArray = std::array<double, kMaxStates>;

double gap_at(const SnpTrack& track, std::size_t i) {
  return static_cast<double>(track[i].position - track[i - 1].position);
}

std::vector<LogTransitionStep> transition_steps(const LogTransitionModel& trans, const SnpTrack& track) {
  std::vector<LogTransitionStep> steps;
  steps.reserve(track.size() > 0 ? track.size() - 1 : 0);
  for (std::size_t i = 1; i < track.size(); ++i) steps.push_back(trans.step(gap_at(track, i)));
  return steps;
}

// Forward and backward log messages over one track.
struct Lattice {
  std::size_t states = 0;
  std::vector<double> alpha;
  std::vector<double> beta;
  double loglik = 0.0;
};

Lattice forward_backward(const LogTransitionModel& trans, const EmissionTable& emit,
                         std::span<const LogTransitionStep> steps) {
  const std::size_t n = emit.snps();
  const std::size_t k = emit.states();
  Lattice lat;
  lat.states = k;
  lat.alpha.assign(n * k, kNegInf);
  lat.beta.assign(n * k, 0.0);
  StateArray buf{};

  for (std::size_t s = 0; s < k; ++s) lat.alpha[s] = trans.log_initial(s) + emit(0, s);
  for (std::size_t i = 1; i < n; ++i) {
    const auto& step = steps[i - 1];
    const double* prev = &lat.alpha[(i - 1) * k];
    for (std::size_t to = 0; to < k; ++to) {
      for (std::size_t from = 0; from < k; ++from) buf[from] = prev[from] + step(from, to);
      lat.alpha[i * k + to] = log_sum_exp(std::span<const double>(buf.data(), k)) + emit(i, to);
    }
  }
  lat.loglik = log_sum_exp(std::span<const double>(&lat.alpha[(n - 1) * k], k));

  for (std::size_t i = n - 1; i-- > 0;) {
    const auto& step = steps[i];
    const double* next = &lat.beta[(i + 1) * k];
    for (std::size_t from = 0; from < k; ++from) {
      for (std::size_t to = 0; to < k; ++to) buf[to] = step(from, to) + emit(i + 1, to) + next[to];
      lat.beta[i * k + from] = log_sum_exp(std::span<const double>(buf.data(), k));
    }
  }
  return lat;
}

void check_finite(double loglik, const char* what) {
  if (!std::isfinite(loglik))
    throw std::runtime_error(std::string(what) + ": log likelihood is not finite");
}

}  // namespace

HmmModel HmmModel::make(ModelKind kind) {
  HmmModel m;
  m.space = StateSpace::of(kind);
  m.transition.initial = default_initial(m.space.size(), m.space.normal_state());
  return m;
}

EmissionModel HmmModel::emissions() const {
  EmissionModel e;
  e.genotype = genotype;
  e.copy_number = copy_number;
  e.reference = reference.get();
  e.ice = ice;
  e.density_floor = density_floor;
  return e;
}

void HmmModel::validate() const {
  transition.validate();
  if (transition.states() != space.size())
    throw std::invalid_argument("model: initial probabilities do not match the state count");
  if (space.uses_genotype()) genotype.validate();
  if (space.uses_copy_number()) copy_number.validate();
  if (!(density_floor > 0.0 && density_floor < 1.0))
    throw std::invalid_argument("model: density floor must lie in (0,1)");
}

EmissionTable compute_emissions(const HmmModel& model, const SnpTrack& track) {
  const std::size_t k = model.space.size();
  const EmissionModel em = model.emissions();
  EmissionTable table(track.size(), k);
  const bool use_gt = model.space.uses_genotype();
  const bool use_cn = model.space.uses_copy_number();

  for (std::size_t i = 0; i < track.size(); ++i) {
    const auto& obs = track[i];
    try {
      std::array<double, 2> gt{0.0, 0.0};
      std::array<double, 3> cn{0.0, 0.0, 0.0};
      if (use_gt) {
        gt[0] = genotype_term(obs, GenotypeRegime::Loss, em);
        gt[1] = genotype_term(obs, GenotypeRegime::Retention, em);
      }
      if (use_cn && obs.cn_log2) {
        for (int level = 1; level <= 3; ++level)
          cn[static_cast<std::size_t>(level - 1)] = copy_number_term(obs, level, em);
      }
      for (std::size_t s = 0; s < k; ++s) {
        const auto& info = model.space.state(s);
        double v = 0.0;
        if (info.regime) v += gt[static_cast<std::size_t>(*info.regime)];
        if (info.cn_level) v += cn[static_cast<std::size_t>(*info.cn_level - 1)];
        table(i, s) = v;
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("emission failed at SNP " + std::to_string(i) + " (" +
                               track.chromosome() + ":" + std::to_string(obs.position) + "): " + e.what());
    }
  }
  return table;
}

double forward_loglik(const HmmModel& model, const SnpTrack& track) {
  model.validate();
  const LogTransitionModel trans(model.transition);
  const EmissionTable emit = compute_emissions(model, track);
  const std::size_t k = emit.states();
  StateArray cur{}, next{}, buf{};
  for (std::size_t s = 0; s < k; ++s) cur[s] = trans.log_initial(s) + emit(0, s);
  for (std::size_t i = 1; i < track.size(); ++i) {
    const auto step = trans.step(gap_at(track, i));
    for (std::size_t to = 0; to < k; ++to) {
      for (std::size_t from = 0; from < k; ++from) buf[from] = cur[from] + step(from, to);
      next[to] = log_sum_exp(std::span<const double>(buf.data(), k)) + emit(i, to);
    }
    cur = next;
  }
  return log_sum_exp(std::span<const double>(cur.data(), k));
}

DecodeResult viterbi(const HmmModel& model, const SnpTrack& track) {
  model.validate();
  const LogTransitionModel trans(model.transition);
  const EmissionTable emit = compute_emissions(model, track);
  const std::size_t n = track.size();
  const std::size_t k = emit.states();

  std::vector<std::uint8_t> back(n * k, 0);
  StateArray delta{}, next{}, fwd{}, fwd_next{}, buf{};
  for (std::size_t s = 0; s < k; ++s) {
    delta[s] = trans.log_initial(s) + emit(0, s);
    fwd[s] = delta[s];
  }
  for (std::size_t i = 1; i < n; ++i) {
    const auto step = trans.step(gap_at(track, i));
    for (std::size_t to = 0; to < k; ++to) {
      std::size_t best = 0;
      double best_score = delta[0] + step(0, to);
      for (std::size_t from = 1; from < k; ++from) {
        const double score = delta[from] + step(from, to);
        if (score > best_score) {
          best_score = score;
          best = from;
        }
      }
      next[to] = best_score + emit(i, to);
      back[i * k + to] = static_cast<std::uint8_t>(best);
      for (std::size_t from = 0; from < k; ++from) buf[from] = fwd[from] + step(from, to);
      fwd_next[to] = log_sum_exp(std::span<const double>(buf.data(), k)) + emit(i, to);
    }
    delta = next;
    fwd = fwd_next;
  }

  DecodeResult result;
  std::size_t last = 0;
  for (std::size_t s = 1; s < k; ++s)
    if (delta[s] > delta[last]) last = s;
  result.path_loglik = delta[last];
  result.total_loglik = log_sum_exp(std::span<const double>(fwd.data(), k));
  result.path.resize(n);
  result.path[n - 1] = static_cast<std::uint8_t>(last);
  for (std::size_t i = n - 1; i > 0; --i) result.path[i - 1] = back[i * k + result.path[i]];
  check_finite(result.path_loglik, "viterbi");
  return result;
}

double path_loglik(const HmmModel& model, const SnpTrack& track, std::span<const std::uint8_t> path) {
  model.validate();
  if (path.size() != track.size())
    throw std::invalid_argument("path_loglik: path length " + std::to_string(path.size()) +
                                " does not match track length " + std::to_string(track.size()));
  const std::size_t k = model.space.size();
  for (auto s : path)
    if (s >= k) throw std::invalid_argument("path_loglik: state index out of range");
  const LogTransitionModel trans(model.transition);
  const EmissionModel em = model.emissions();
  double total = trans.log_initial(path[0]) + state_loglik(track[0], model.space, path[0], em);
  for (std::size_t i = 1; i < track.size(); ++i) {
    total += trans.step(gap_at(track, i))(path[i - 1], path[i]);
    total += state_loglik(track[i], model.space, path[i], em);
  }
  return total;
}

Posterior posterior_probs(const HmmModel& model, const SnpTrack& track) {
  model.validate();
  const LogTransitionModel trans(model.transition);
  const EmissionTable emit = compute_emissions(model, track);
  const auto steps = transition_steps(trans, track);
  const Lattice lat = forward_backward(trans, emit, steps);
  check_finite(lat.loglik, "posterior_probs");

  Posterior post;
  post.states = lat.states;
  post.loglik = lat.loglik;
  post.probs.resize(lat.alpha.size());
  const std::size_t k = lat.states;
  for (std::size_t i = 0; i < track.size(); ++i) {
    double total = 0.0;
    for (std::size_t s = 0; s < k; ++s) {
      const double p = std::exp(lat.alpha[i * k + s] + lat.beta[i * k + s] - lat.loglik);
      post.probs[i * k + s] = p;
      total += p;
    }
    for (std::size_t s = 0; s < k; ++s) post.probs[i * k + s] /= total;
  }
  return post;
}

namespace {

struct Stats {
  StateArray redraws{};                 // expected draws from the initial distribution
  std::array<double, 2> hom{};          // by regime
  std::array<double, 2> het{};
  std::array<double, 3> cn_weight{};    // sum gamma / scale^2, by level
  std::array<double, 3> cn_weighted_x{};
  double cn_count = 0.0;                // sum gamma over SNPs with copy number
};

// E step for one track; also accumulates the residual sums needed for sigma
// against the current means.
double accumulate(const HmmModel& model, const SnpTrack& track, Stats& stats,
                  std::vector<std::array<double, kMaxStates>>& gamma_out) {
  const LogTransitionModel trans(model.transition);
  const EmissionTable emit = compute_emissions(model, track);
  const auto steps = transition_steps(trans, track);
  const Lattice lat = forward_backward(trans, emit, steps);
  check_finite(lat.loglik, "em_fit");
  const std::size_t n = track.size();
  const std::size_t k = lat.states;

  gamma_out.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < k; ++s)
      gamma_out[i][s] = std::exp(lat.alpha[i * k + s] + lat.beta[i * k + s] - lat.loglik);
  }
  for (std::size_t s = 0; s < k; ++s) stats.redraws[s] += gamma_out[0][s];

  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto& step = steps[i];
    for (std::size_t from = 0; from < k; ++from) {
      const double a = lat.alpha[i * k + from];
      if (a == kNegInf) continue;
      for (std::size_t to = 0; to < k; ++to) {
        const double xi = std::exp(a + step(from, to) + emit(i + 1, to) + lat.beta[(i + 1) * k + to] - lat.loglik);
        if (from != to) {
          stats.redraws[to] += xi;
        } else if (xi > 0.0) {
          // share of self-transitions that came from a redraw
          const double redraw = model.transition.initial[to] * step.theta;
          const double stay = std::exp(step.stay[to]);
          stats.redraws[to] += xi * (stay > 0.0 ? redraw / stay : 0.0);
        }
      }
    }
  }
  return lat.loglik;
}

}  // namespace

EmResult em_fit(const HmmModel& model, std::span<const SnpTrack> tracks, const EmOptions& options) {
  if (tracks.empty()) throw std::invalid_argument("em_fit: need at least one track");
  model.validate();
  const EmLearnSet& learn = options.learn;
  const bool learn_gt = model.space.uses_genotype() && (learn.p_hom_loss || learn.p_hom_ret);
  const bool learn_cn = model.space.uses_copy_number() && (learn.cn_sigma || learn.cn_means);

  EmResult result{model, {}};
  const std::size_t k = model.space.size();
  std::vector<std::array<double, kMaxStates>> gamma;

  for (std::size_t iter = 0;; ++iter) {
    const HmmModel& current = result.model;
    Stats stats;
    double loglik = 0.0;
    // Per-track posteriors are consumed immediately so memory stays O(n K).
    std::array<double, 3> sq{};  // sum gamma (x - mu)^2 / scale^2 by level, current means
    for (const auto& track : tracks) {
      loglik += accumulate(current, track, stats, gamma);
      const bool use_scale = current.ice;
      for (std::size_t i = 0; i < track.size(); ++i) {
        const auto& obs = track[i];
        for (std::size_t s = 0; s < k; ++s) {
          const double g = gamma[i][s];
          const auto& info = current.space.state(s);
          if (info.regime && obs.has_called_genotype()) {
            auto r = static_cast<std::size_t>(*info.regime);
            (*obs.gt == GenotypeCall::Hom ? stats.hom : stats.het)[r] += g;
          }
          if (info.cn_level && obs.cn_log2) {
            const auto l = static_cast<std::size_t>(*info.cn_level - 1);
            const double scale = use_scale && obs.cn_scale ? *obs.cn_scale : 1.0;
            const double w = g / (scale * scale);
            stats.cn_weight[l] += w;
            stats.cn_weighted_x[l] += w * *obs.cn_log2;
            stats.cn_count += g;
            const double dev = *obs.cn_log2 - current.copy_number.means[l];
            sq[l] += w * dev * dev;
          }
        }
      }
    }
    check_finite(loglik, "em_fit");
    result.trace.push_back(loglik);

    if (!learn.any()) break;
    if (iter > 0 && loglik - result.trace[result.trace.size() - 2] < options.tol) break;
    if (iter >= options.max_iter) break;

    HmmModel updated = current;
    if (learn.initial) {
      double total = 0.0;
      for (std::size_t s = 0; s < k; ++s) total += stats.redraws[s];
      if (total > 0.0)
        for (std::size_t s = 0; s < k; ++s) updated.transition.initial[s] = stats.redraws[s] / total;
    }
    if (learn_gt) {
      auto rate = [](double hom, double het, double fallback) {
        const double n = hom + het;
        if (!(n > 0.0)) return fallback;
        return std::clamp(hom / n, 1e-6, 1.0 - 1e-6);
      };
      if (learn.p_hom_loss) updated.genotype.p_hom_loss = rate(stats.hom[0], stats.het[0], current.genotype.p_hom_loss);
      if (learn.p_hom_ret) updated.genotype.p_hom_ret = rate(stats.hom[1], stats.het[1], current.genotype.p_hom_ret);
    }
    if (learn_cn) {
      if (learn.cn_means) {
        for (std::size_t l = 0; l < 3; ++l) {
          if (stats.cn_weight[l] > 1e-12)
            updated.copy_number.means[l] = stats.cn_weighted_x[l] / stats.cn_weight[l];
        }
        // re-centre the squared deviations on the new means
        for (std::size_t l = 0; l < 3; ++l) {
          const double d = updated.copy_number.means[l] - current.copy_number.means[l];
          const double m1 = stats.cn_weighted_x[l] - current.copy_number.means[l] * stats.cn_weight[l];
          sq[l] += -2.0 * d * m1 + d * d * stats.cn_weight[l];
        }
      }
      if (learn.cn_sigma && stats.cn_count > 0.0) {
        const double ss = sq[0] + sq[1] + sq[2];
        updated.copy_number.sigma = std::sqrt(std::max(ss, 0.0) / stats.cn_count);
      }
    }
    // An update that breaks the parameter ordering (pHomLoss > pHomRet,
    // increasing means) ends the fit at the last valid model.
    try {
      updated.validate();
    } catch (const std::invalid_argument&) {
      result.stopped_at_constraint = true;
      break;
    }
    result.model = std::move(updated);
  }
  return result;
}

}  // namespace chromoseg
