#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "chromoseg/emissions.hpp"

using namespace chromoseg;

namespace {

KdeTable flat_table(double lo, double hi) {
  KdeTable t;
  const std::size_t n = 101;
  for (std::size_t i = 0; i < n; ++i) {
    t.grid.push_back(lo + (hi - lo) * static_cast<double>(i) / (n - 1));
    t.density.push_back(1.0 / (hi - lo));
  }
  t.bandwidth = 0.1;
  t.sample_count = 100;
  return t;
}

// HET-called cells: 0.05 when truly HOM, 2.0 when truly HET at s = 0.25.
ReferenceModel example_reference() {
  std::array<KdeTable, 4> cells;
  cells[ReferenceModel::index(Zygosity::Hom, Zygosity::Hom)] = flat_table(0.0, 10.0);
  cells[ReferenceModel::index(Zygosity::Hom, Zygosity::Het)] = flat_table(0.0, 10.0);
  cells[ReferenceModel::index(Zygosity::Het, Zygosity::Hom)] = flat_table(0.0, 20.0);
  cells[ReferenceModel::index(Zygosity::Het, Zygosity::Het)] = flat_table(0.0, 0.5);
  return ReferenceModel(cells, {0.95, 0.1});
}

ReferenceModel uninformative_reference() {
  std::array<KdeTable, 4> cells;
  for (auto& c : cells) c = flat_table(0.0, 8.0);
  return ReferenceModel(cells, {0.9, 0.2});
}

constexpr auto Loss = GenotypeRegime::Loss;
constexpr auto Ret = GenotypeRegime::Retention;

}  // namespace

TEST_CASE("vanilla genotype values") {
  const GenotypeEmissionParams p;
  CHECK(genotype_loglik_vanilla(GenotypeCall::Hom, Loss, p) == doctest::Approx(std::log(0.99)));
  CHECK(genotype_loglik_vanilla(GenotypeCall::Het, Ret, p) == doctest::Approx(std::log(0.3)));
  CHECK(genotype_loglik_vanilla(GenotypeCall::NoCall, Loss, p) == 0.0);
  CHECK(genotype_loglik_vanilla(GenotypeCall::NoCall, Ret, p) == 0.0);
  for (auto r : {Loss, Ret}) {
    const double sum = std::exp(genotype_loglik_vanilla(GenotypeCall::Hom, r, p)) +
                       std::exp(genotype_loglik_vanilla(GenotypeCall::Het, r, p));
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
}

TEST_CASE("vanilla genotype floor keeps certainty finite") {
  GenotypeEmissionParams p;
  p.p_hom_loss = 1.0;
  CHECK(genotype_loglik_vanilla(GenotypeCall::Het, Loss, p) == doctest::Approx(std::log(1e-10)));
}

TEST_CASE("ice genotype worked example") {
  const auto ref = example_reference();
  const GenotypeEmissionParams p;
  CHECK(genotype_loglik_ice(GenotypeCall::Het, 0.25, Loss, p, ref) ==
        doctest::Approx(std::log(5e-4)).epsilon(1e-12));
  CHECK(genotype_loglik_ice(GenotypeCall::Het, 0.25, Ret, p, ref) ==
        doctest::Approx(std::log(0.5415)).epsilon(1e-12));
}

TEST_CASE("ice genotype falls back without a score") {
  const auto ref = example_reference();
  const GenotypeEmissionParams p;
  for (auto r : {Loss, Ret}) {
    CHECK(genotype_loglik_ice(GenotypeCall::Hom, std::nullopt, r, p, ref) ==
          genotype_loglik_vanilla(GenotypeCall::Hom, r, p));
    CHECK(genotype_loglik_ice(GenotypeCall::NoCall, 3.0, r, p, ref) == 0.0);
  }
}

TEST_CASE("ice genotype outside support uses the floor") {
  const auto ref = example_reference();
  const GenotypeEmissionParams p;
  const double v = genotype_loglik_ice(GenotypeCall::Het, 50.0, Loss, p, ref);
  CHECK(std::isfinite(v));
  CHECK(v == doctest::Approx(std::log(0.01 * 1e-10)));
}

TEST_CASE("uninformative reference adds the same term to both regimes") {
  const auto ref = uninformative_reference();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 8.0), q(0.05, 0.95);
  for (int i = 0; i < 200; ++i) {
    GenotypeEmissionParams p;
    p.p_hom_loss = q(rng);
    p.p_hom_ret = q(rng);
    const double s = u(rng);
    const double log_f = std::log(1.0 / 8.0);
    for (auto call : {GenotypeCall::Hom, GenotypeCall::Het}) {
      const double il = genotype_loglik_ice(call, s, Loss, p, ref);
      const double ir = genotype_loglik_ice(call, s, Ret, p, ref);
      const double vl = genotype_loglik_vanilla(call, Loss, p);
      const double vr = genotype_loglik_vanilla(call, Ret, p);
      CHECK(il == doctest::Approx(vl + log_f).epsilon(1e-12));
      CHECK(ir == doctest::Approx(vr + log_f).epsilon(1e-12));
      CHECK((il > ir) == (vl > vr));
    }
  }
}

TEST_CASE("copy-number vanilla values") {
  const CopyNumberEmissionParams p;
  CHECK(cn_loglik_vanilla(0.0, 1, p) ==
        doctest::Approx(std::log(1.0 / (0.25 * std::sqrt(2.0 * std::numbers::pi)))));
  for (double x : {0.5, 0.9, 1.1, 1.5})
    CHECK(cn_loglik_vanilla(x, 2, p) < cn_loglik_vanilla(1.0, 2, p));
  CHECK(cn_loglik_vanilla(0.5, 1, p) == doctest::Approx(cn_loglik_vanilla(0.5, 2, p)));
  CHECK(p.mean(3) == doctest::Approx(std::log2(3.0)));
}

TEST_CASE("copy-number ice values") {
  const CopyNumberEmissionParams p;
  for (int level : {1, 2, 3}) {
    CHECK(cn_loglik_ice(0.7, 1.0, level, p) == cn_loglik_vanilla(0.7, level, p));
    CHECK(cn_loglik_ice(0.7, std::nullopt, level, p) == cn_loglik_vanilla(0.7, level, p));
    const double mu = p.mean(level);
    CHECK(cn_loglik_ice(mu, 1.0, level, p) - cn_loglik_ice(mu, 2.0, level, p) ==
          doctest::Approx(std::log(2.0)));
  }
  CHECK(std::abs(cn_loglik_ice(1.0, 1e6, 1, p) - cn_loglik_ice(1.0, 1e6, 3, p)) < 1e-6);
  CHECK_THROWS(cn_loglik_ice(1.0, 0.0, 2, p));
  CHECK_THROWS(cn_loglik_ice(1.0, -1.0, 2, p));
}

TEST_CASE("copy-number densities integrate to one") {
  const CopyNumberEmissionParams p;
  for (double scale : {0.5, 1.0, 3.0}) {
    for (int level : {1, 2, 3}) {
      // Simpson's rule over +/- 12 sd
      const double sd = p.sigma * scale;
      const double lo = p.mean(level) - 12 * sd, hi = p.mean(level) + 12 * sd;
      const int n = 20000;
      const double h = (hi - lo) / n;
      double sum = 0.0;
      for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
        sum += w * std::exp(cn_loglik_ice(lo + i * h, scale, level, p, 0.0));
      }
      CHECK(std::abs(sum * h / 3.0 - 1.0) < 1e-6);
    }
  }
}

TEST_CASE("state spaces") {
  const auto joint = StateSpace::of(ModelKind::Joint);
  REQUIRE(joint.size() == 4);
  CHECK(joint.name(0) == "deletion");
  CHECK(joint.name(1) == "loh");
  CHECK(joint.name(2) == "normal");
  CHECK(joint.name(3) == "amplification");
  CHECK(joint.normal_state() == 2);
  CHECK(joint.deletion_state() == 0u);
  const auto cn = StateSpace::of(ModelKind::CopyNumber);
  CHECK(cn.size() == 3);
  CHECK(cn.normal_state() == 1);
  const auto gt = StateSpace::of(ModelKind::Genotype);
  CHECK(gt.size() == 2);
  CHECK_FALSE(gt.deletion_state());
  CHECK(parse_model_kind("joint") == ModelKind::Joint);
  CHECK_THROWS(parse_model_kind("nope"));
}

TEST_CASE("joint emission is the sum of channel terms") {
  const auto ref = example_reference();
  for (bool ice : {false, true}) {
    EmissionModel m;
    m.reference = &ref;
    m.ice = ice;
    const SnpObservation obs{100, GenotypeCall::Het, 0.25, 0.8, 1.5};
    const auto space = StateSpace::of(ModelKind::Joint);
    for (std::size_t s = 0; s < 4; ++s) {
      const auto& info = space.state(s);
      CHECK(joint_loglik(obs, s, m) ==
            copy_number_term(obs, *info.cn_level, m) + genotype_term(obs, *info.regime, m));
      CHECK(state_loglik(obs, space, s, m) == joint_loglik(obs, s, m));
    }
    CHECK(joint_loglik(obs, 0, m) ==
          copy_number_term(obs, 1, m) + genotype_term(obs, Loss, m));
    // loh and normal share CN level 2
    CHECK(joint_loglik(obs, 1, m) - joint_loglik(obs, 2, m) ==
          doctest::Approx(genotype_term(obs, Loss, m) - genotype_term(obs, Ret, m)));
    const SnpObservation gt_only{100, GenotypeCall::Hom, {}, {}, {}};
    CHECK(joint_loglik(gt_only, 3, m) == genotype_term(gt_only, Ret, m));
  }
}

TEST_CASE("state emissions ignore unmodelled channels") {
  EmissionModel m;
  const SnpObservation obs{100, GenotypeCall::Het, {}, 0.8, {}};
  const auto cn = StateSpace::of(ModelKind::CopyNumber);
  CHECK(state_loglik(obs, cn, 0, m) == copy_number_term(obs, 1, m));
  const auto gt = StateSpace::of(ModelKind::Genotype);
  CHECK(state_loglik(obs, gt, 0, m) == genotype_term(obs, Loss, m));
}

TEST_CASE("robust sigma") {
  std::vector<double> v;
  // 101 evenly spaced points on [0.6, 1.4]: q16 = 0.728, q84 = 1.272
  for (int i = 0; i <= 100; ++i) v.push_back(0.6 + 0.008 * i);
  CHECK(robust_sigma(v) == doctest::Approx(0.272));
  // q16 = 0.8, q84 = 1.2 exactly
  std::vector<double> w;
  for (int i = 0; i <= 100; ++i) w.push_back(0.8 + 0.4 * (i - 16) / 68.0);
  CHECK(robust_sigma(w) == doctest::Approx(0.2).epsilon(1e-12));

  std::vector<double> shifted = v, scaled = v;
  for (auto& x : shifted) x += 7.5;
  for (auto& x : scaled) x *= 3.0;
  CHECK(robust_sigma(shifted) == doctest::Approx(robust_sigma(v)));
  CHECK(robust_sigma(scaled) == doctest::Approx(3.0 * robust_sigma(v)));

  std::mt19937_64 rng(99);
  std::normal_distribution<double> z;
  std::vector<double> normal(100000);
  for (auto& x : normal) x = z(rng);
  CHECK(std::abs(robust_sigma(normal) - 1.0) < 0.02);

  CHECK_THROWS(robust_sigma(std::vector<double>(9, 1.0)));
  CHECK_THROWS(robust_sigma(std::vector<double>(50, 1.0)));
}
