#include "chromoseg/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

#include "chromoseg/numeric.hpp"

namespace chromoseg {

std::string_view region_name(Region region) {
  switch (region) {
    case Region::Background: return "background";
    case Region::A: return "A";
    case Region::B: return "B";
    case Region::C: return "C";
    case Region::D: return "D";
    case Region::E: return "E";
  }
  return "background";
}

void SimConfig::validate() const {
  if (n_snps < 500) throw std::invalid_argument("simulate: n_snps must be at least 500");
  if (!(chromosome_length >= 100e6)) throw std::invalid_argument("simulate: chromosome length must be at least 100 Mb");
  if (!(background_p_hom > 0.0 && background_p_hom < 1.0))
    throw std::invalid_argument("simulate: background pHom must lie in (0,1)");
  if (!(epsilon > 0.0)) throw std::invalid_argument("simulate: epsilon must be positive");
  if (!(high_conf_scale > 0.0) || !(low_conf_scale > 0.0))
    throw std::invalid_argument("simulate: confidence scales must be positive");
  if (!(se_shape > 0.0) || !(se_rate > 0.0) || !(se_shift > 0.0))
    throw std::invalid_argument("simulate: standard-error Gamma parameters must be positive");
}

namespace {

constexpr double kLog2Three = 1.5849625007211562;
constexpr double kExclusionMargin = 20e3;  // background SNPs keep this far from features
constexpr std::size_t kPatchSnps = 10;

enum class Call : unsigned char { Bernoulli, Hom, Het };
enum class Confidence : unsigned char { Typical, High, Low };

struct Planned {
  std::int64_t position = 0;
  Region region = Region::Background;
  std::uint8_t truth = joint::normal;
  Call call = Call::Bernoulli;
  // Score cell override; by default the correct-call cell of the drawn call.
  bool miscall_score = false;
  bool upper_tail_score = false;
  double cn_mean = 1.0;
  Confidence conf = Confidence::Typical;
};

class Layout {
 public:
  // Appends `count` SNPs starting at `start` spaced `step` bp apart; returns
  // the position of the last one.
  double run(double start, std::size_t count, double step, const Planned& proto) {
    for (std::size_t i = 0; i < count; ++i) {
      Planned p = proto;
      p.position = std::llround(start + step * static_cast<double>(i));
      snps.push_back(p);
    }
    return start + step * static_cast<double>(count - 1);
  }
  std::vector<Planned> snps;
};

Planned planned(Region region, std::uint8_t truth, Call call, double cn_mean,
                Confidence conf = Confidence::Typical) {
  Planned p;
  p.region = region;
  p.truth = truth;
  p.call = call;
  p.cn_mean = cn_mean;
  p.conf = conf;
  return p;
}

// Feature SNPs at fixed, seed-independent positions.
// Gaps between a feature's sub-segments follow the feature's own spacing.
std::vector<Planned> feature_layout(double len) {
  Layout lay;

  // Region A: 99 Hom, a Het pair 14 kb apart, 99 Hom; about 5 Mb in all,
  // with the Het pair at the 52.8 Mb mark of a 245 Mb chromosome.
  const double a_pair = len * (52.8 / 245.0);
  const double a_step = (5e6 - 14e3) / 198.0;
  const double a_start = a_pair - 99.0 * a_step;

  // Low-confidence copy-number patch left of region A.
  {
    Planned p = planned(Region::Background, joint::normal, Call::Bernoulli, 1.0, Confidence::Low);
    lay.run(a_start - 1.5e6, kPatchSnps, 25e3, p);
  }
  {
    double x = lay.run(a_start, 99, a_step, planned(Region::A, joint::loh, Call::Hom, 1.0));
    Planned het = planned(Region::A, joint::normal, Call::Het, 1.0);
    het.upper_tail_score = true;
    x = lay.run(x + a_step, 2, 14e3, het);
    lay.run(x + a_step, 99, a_step, planned(Region::A, joint::loh, Call::Hom, 1.0));
  }
  // Region B: two 49-SNP hemizygous deletions around a 360 bp diploid
  // segment whose two SNPs are miscalled Het; about 2 Mb in all.
  {
    const double step = (2e6 - 360.0) / 98.0;
    double x = lay.run(len * 0.40, 49, step, planned(Region::B, joint::deletion, Call::Hom, 0.0));
    Planned sep = planned(Region::B, joint::normal, Call::Het, 1.0, Confidence::High);
    sep.miscall_score = true;
    x = lay.run(x + step, 2, 360.0, sep);
    lay.run(x + step, 49, step, planned(Region::B, joint::deletion, Call::Hom, 0.0));
  }
  // Region C: 100 Hom SNPs in a hemizygous deletion spanning 1.8 Mb; two
  // of them read near two copies with low confidence.
  {
    const double step = 1.8e6 / 99.0;
    const std::size_t first = lay.snps.size();
    lay.run(len * 0.53, 100, step, planned(Region::C, joint::deletion, Call::Hom, 0.0));
    for (std::size_t k : {30u, 70u}) {
      lay.snps[first + k].cn_mean = 1.0;
      lay.snps[first + k].conf = Confidence::Low;
    }
  }
  // Region D: two 99-SNP copy-3 segments under 1 Mb each around a diploid
  // pair 9.8 kb apart with high-confidence copy number.
  {
    const double step = 0.95e6 / 98.0;
    const Planned amp = planned(Region::D, joint::amplification, Call::Bernoulli, kLog2Three);
    double x = lay.run(len * 0.65, 99, step, amp);
    x = lay.run(x + step, 2, 9.8e3,
                planned(Region::D, joint::normal, Call::Bernoulli, 1.0, Confidence::High));
    lay.run(x + step, 99, step, amp);
  }
  // Region E: 5-SNP deletion over 94 kb and 3-SNP amplification over 294 kb,
  // both with high-confidence copy number.
  lay.run(len * 0.78, 5, 94e3 / 4.0,
          planned(Region::E, joint::deletion, Call::Hom, 0.0, Confidence::High));
  lay.run(len * 0.82, 3, 294e3 / 2.0,
          planned(Region::E, joint::amplification, Call::Bernoulli, kLog2Three, Confidence::High));
  return lay.snps;
}

// Excluded intervals around each contiguous feature block.
std::vector<std::pair<double, double>> exclusions(const std::vector<Planned>& features) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto pos = static_cast<double>(features[i].position);
    const bool joins = !out.empty() && features[i].region == features[i - 1].region &&
                       pos - out.back().second <= 3e6;
    if (joins)
      out.back().second = pos + kExclusionMargin;
    else
      out.emplace_back(pos - kExclusionMargin, pos + kExclusionMargin);
  }
  return out;
}

double shifted_gamma(std::mt19937_64& rng, double shape, double rate, double shift) {
  std::gamma_distribution<double> g(shape, 1.0 / rate);
  return shift + g(rng);
}

double draw_score(std::mt19937_64& rng, const ReferenceModel& ref, Zygosity called, Zygosity truth,
                  bool upper_tail) {
  std::uniform_real_distribution<double> u(upper_tail ? 0.95 : 0.0, 1.0);
  return ref.cell(called, truth).quantile(u(rng));
}

}  // namespace

SimulatedChromosome simulate_chr1(const SimConfig& config) {
  config.validate();
  auto features = feature_layout(config.chromosome_length);
  if (config.n_snps < features.size() + 100)
    throw std::invalid_argument("simulate: n_snps = " + std::to_string(config.n_snps) +
                                " is too small to host all regions (" + std::to_string(features.size()) +
                                " feature SNPs plus background)");
  const std::size_t n_background = config.n_snps - features.size();

  std::mt19937_64 rng(config.seed);
  const auto excluded = exclusions(features);
  std::set<std::int64_t> taken;
  for (const auto& f : features) taken.insert(f.position);
  std::uniform_int_distribution<std::int64_t> pos_dist(1, static_cast<std::int64_t>(config.chromosome_length));
  std::vector<Planned> all = features;
  while (all.size() < features.size() + n_background) {
    const std::int64_t pos = pos_dist(rng);
    const auto p = static_cast<double>(pos);
    const bool blocked = std::any_of(excluded.begin(), excluded.end(),
                                     [p](const auto& iv) { return p >= iv.first && p <= iv.second; });
    if (blocked || !taken.insert(pos).second) continue;
    Planned b;
    b.position = pos;
    all.push_back(b);
  }
  std::sort(all.begin(), all.end(), [](const Planned& a, const Planned& b) { return a.position < b.position; });

  std::shared_ptr<const ReferenceModel> ref = config.reference;
  if (!ref) ref = std::make_shared<const ReferenceModel>(synthetic_reference(default_synthetic_spec()));

  std::bernoulli_distribution hom(config.background_p_hom);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<SnpObservation> obs;
  obs.reserve(all.size());
  StatePath truth_path;
  std::vector<Region> regions;
  truth_path.reserve(all.size());
  regions.reserve(all.size());
  for (const auto& p : all) {
    SnpObservation o;
    o.position = p.position;
    GenotypeCall call = GenotypeCall::Hom;
    if (p.call == Call::Bernoulli) call = hom(rng) ? GenotypeCall::Hom : GenotypeCall::Het;
    if (p.call == Call::Het) call = GenotypeCall::Het;
    o.gt = call;
    const Zygosity called = call == GenotypeCall::Hom ? Zygosity::Hom : Zygosity::Het;
    const Zygosity truth = p.miscall_score ? Zygosity::Hom : called;
    o.gt_score = draw_score(rng, *ref, called, truth, p.upper_tail_score);

    double sd = config.epsilon;
    switch (p.conf) {
      case Confidence::Typical:
        o.cn_scale = shifted_gamma(rng, config.se_shape, config.se_rate, config.se_shift);
        break;
      case Confidence::High:
        sd *= config.high_conf_scale;
        o.cn_scale = sd;
        break;
      case Confidence::Low:
        // Region C's outliers read near two copies with the typical spread;
        // only their reported error is inflated.
        o.cn_scale = sd * config.low_conf_scale;
        if (p.region == Region::Background) sd *= config.low_conf_scale;
        break;
    }
    o.cn_log2 = p.cn_mean + sd * z(rng);
    obs.push_back(o);
    truth_path.push_back(p.truth);
    regions.push_back(p.region);
  }
  return {SnpTrack("1", std::move(obs)), std::move(truth_path), std::move(regions)};
}

void write_truth_table(std::ostream& out, const SimulatedChromosome& sim) {
  const auto space = StateSpace::of(ModelKind::Joint);
  out << "chrom\tpos\ttrue_state\tregion\n";
  for (std::size_t i = 0; i < sim.track.size(); ++i) {
    out << sim.track.chromosome() << '\t' << sim.track[i].position << '\t' << space.name(sim.true_path[i])
        << '\t' << region_name(sim.regions[i]) << '\n';
  }
}

void SweepConfig::validate() const {
  if (sizes.empty()) throw std::invalid_argument("sweep: no deletion sizes");
  for (int s : sizes)
    if (s < 2 || s > 10) throw std::invalid_argument("sweep: deletion sizes must lie in [2, 10]");
  if (k_values.empty()) throw std::invalid_argument("sweep: no K values");
  for (double k : k_values)
    if (!(k > 0.0)) throw std::invalid_argument("sweep: K values must be positive");
  if (!(null_k > 0.0)) throw std::invalid_argument("sweep: null-arm K must be positive");
  if (n_snps < 100 || arm_snps < 100) throw std::invalid_argument("sweep: tracks need at least 100 SNPs");
  if (!(chromosome_length > 2.0 * static_cast<double>(n_snps)) || !(arm_length > 2.0 * static_cast<double>(arm_snps)))
    throw std::invalid_argument("sweep: track length too short for the SNP count");
  if (!(background_sd > 0.0)) throw std::invalid_argument("sweep: background sd must be positive");
  if (!(variability_shape > 0.0) || !(variability_rate > 0.0) || !(variability_shift >= 0.0))
    throw std::invalid_argument("sweep: invalid variability parameters");
}

namespace {

constexpr std::uint32_t kSweepStream = 0x5eed;
constexpr std::uint32_t kArmStream = 0xa53;

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint32_t stream, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream,
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
  return std::mt19937_64(seq);
}

std::vector<std::int64_t> random_positions(std::mt19937_64& rng, std::size_t n, double length) {
  std::uniform_int_distribution<std::int64_t> pos(1, static_cast<std::int64_t>(length));
  std::set<std::int64_t> chosen;
  while (chosen.size() < n) chosen.insert(pos(rng));
  return {chosen.begin(), chosen.end()};
}

// Per-SNP sd s_i and standardized noise z_i.
struct Background {
  std::vector<std::int64_t> positions;
  std::vector<double> sd;
  std::vector<double> z;
};

Background background(std::mt19937_64& rng, const SweepConfig& cfg, std::size_t n, double length) {
  Background bg;
  bg.positions = random_positions(rng, n, length);
  const double mean_w = cfg.variability_shift + cfg.variability_shape / cfg.variability_rate;
  std::normal_distribution<double> z(0.0, 1.0);
  bg.sd.resize(n);
  bg.z.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = shifted_gamma(rng, cfg.variability_shape, cfg.variability_rate, cfg.variability_shift) / mean_w;
    bg.sd[i] = cfg.background_sd * w;
    bg.z[i] = z(rng);
  }
  return bg;
}

}  // namespace

SweepDataset make_sweep_dataset(const SweepConfig& config, std::size_t k_index, int size, std::size_t replicate) {
  if (k_index >= config.k_values.size()) throw std::out_of_range("sweep: K index out of range");
  auto rng = stream_rng(config.seed, kSweepStream, static_cast<std::uint64_t>(size), replicate);
  const Background bg = background(rng, config, config.n_snps, config.chromosome_length);
  const auto n = config.n_snps;
  const auto width = static_cast<std::size_t>(size);
  std::uniform_int_distribution<std::size_t> start_dist(1, n - width - 1);
  const std::size_t start = start_dist(rng);
  const SnpWindow window{start, start + width};
  const auto inside = [&](std::size_t i) { return i >= window.begin && i < window.end; };

  std::vector<double> unit(n);
  for (std::size_t i = 0; i < n; ++i) unit[i] = (inside(i) ? 0.0 : 1.0) + bg.sd[i] * bg.z[i];
  const double sigma_hat = robust_sigma(unit);

  const double k = config.k_values[k_index];
  std::vector<SnpObservation> obs(n);
  for (std::size_t i = 0; i < n; ++i) {
    obs[i].position = bg.positions[i];
    const double m = inside(i) ? k : 1.0;
    obs[i].cn_log2 = (inside(i) ? 0.0 : 1.0) + m * bg.sd[i] * bg.z[i];
    obs[i].cn_scale = m * bg.sd[i] / sigma_hat;
  }
  return {size, k, replicate, SnpTrack("1", std::move(obs)), window, sigma_hat};
}

std::vector<SweepDataset> simulate_deletion_sweep(const SweepConfig& config) {
  config.validate();
  std::vector<SweepDataset> out;
  for (std::size_t k = 0; k < config.k_values.size(); ++k)
    for (int size : config.sizes)
      for (std::size_t r = 0; r < config.datasets_per_size; ++r) out.push_back(make_sweep_dataset(config, k, size, r));
  return out;
}

NullArm make_null_arm(const SweepConfig& config, std::size_t arm) {
  auto rng = stream_rng(config.seed, kArmStream, arm, 0);
  const Background bg = background(rng, config, config.arm_snps, config.arm_length);
  const auto n = config.arm_snps;
  std::vector<double> unit(n);
  for (std::size_t i = 0; i < n; ++i) unit[i] = 1.0 + bg.sd[i] * bg.z[i];
  const double sigma_hat = robust_sigma(unit);
  std::vector<SnpObservation> obs(n);
  for (std::size_t i = 0; i < n; ++i) {
    obs[i].position = bg.positions[i];
    obs[i].cn_log2 = 1.0 + config.null_k * bg.sd[i] * bg.z[i];
    obs[i].cn_scale = config.null_k * bg.sd[i] / sigma_hat;
  }
  return {SnpTrack("1q", std::move(obs)), sigma_hat};
}

std::vector<NullArm> simulate_null_arms(const SweepConfig& config) {
  config.validate();
  std::vector<NullArm> out;
  out.reserve(config.null_arms);
  for (std::size_t a = 0; a < config.null_arms; ++a) out.push_back(make_null_arm(config, a));
  return out;
}

HmmModel sweep_model(double sigma_hat, bool ice) {
  HmmModel m = HmmModel::make(ModelKind::CopyNumber);
  m.copy_number.sigma = sigma_hat;
  m.ice = ice;
  return m;
}

}  // namespace chromoseg
