#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "chromoseg/segmentation.hpp"
#include "chromoseg/simulation.hpp"
#include "oracles.hpp"

using namespace chromoseg;

namespace {

SnpTrack calls_track(std::size_t n, std::int64_t spacing = 1000) {
  std::vector<SnpObservation> obs;
  for (std::size_t i = 0; i < n; ++i)
    obs.push_back({static_cast<std::int64_t>(i + 1) * spacing, GenotypeCall::Hom, {}, 1.0, {}});
  return SnpTrack("3", std::move(obs));
}

double log_tau(const HmmModel& m, const SnpTrack& t, std::size_t i, std::size_t from, std::size_t to) {
  return std::log(transition_matrix(static_cast<double>(t[i].position - t[i - 1].position), m.transition)(from, to));
}

}  // namespace

TEST_CASE("constant path is one segment") {
  const auto t = calls_track(100);
  const auto segs = path_to_segments(t, StatePath(100, 1));
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].n_snps == 100);
  CHECK(segs[0].start_bp == 1000);
  CHECK(segs[0].end_bp == 100000);
  CHECK(*segs[0].mean_cn_log2 == 1.0);
  CHECK(*segs[0].het_fraction == 0.0);
}

TEST_CASE("region-A truth path gives 99, 2, 99") {
  StatePath path(99, 0);
  path.push_back(1);
  path.push_back(1);
  path.insert(path.end(), 99, 0);
  const auto segs = path_to_segments(calls_track(200), path);
  REQUIRE(segs.size() == 3);
  CHECK(segs[0].n_snps == 99);
  CHECK(segs[1].n_snps == 2);
  CHECK(segs[2].n_snps == 99);
  CHECK(segs[0].state == 0);
  CHECK(segs[1].state == 1);
  CHECK(segs[2].state == 0);
  CHECK(segs[1].first_snp == 99);
}

TEST_CASE("alternating path gives one segment per SNP") {
  StatePath path(37);
  for (std::size_t i = 0; i < path.size(); ++i) path[i] = static_cast<std::uint8_t>(i % 2);
  CHECK(path_to_segments(calls_track(37), path).size() == 37);
}

TEST_CASE("segments partition the track and rebuild the path") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> state(0, 3), stay(0, 9);
  for (int rep = 0; rep < 50; ++rep) {
    StatePath path(300);
    path[0] = static_cast<std::uint8_t>(state(rng));
    for (std::size_t i = 1; i < path.size(); ++i)
      path[i] = stay(rng) ? path[i - 1] : static_cast<std::uint8_t>(state(rng));
    const auto segs = path_to_segments(calls_track(300), path);
    std::size_t total = 0;
    for (const auto& s : segs) total += s.n_snps;
    CHECK(total == 300);
    CHECK(segments_to_path(segs) == path);
  }
  CHECK_THROWS(path_to_segments(calls_track(5), StatePath(4, 0)));
}

TEST_CASE("het fraction ignores no-calls") {
  const SnpTrack t("1", {{1, GenotypeCall::Het, {}, {}, {}},
                         {2, GenotypeCall::NoCall, {}, {}, {}},
                         {3, GenotypeCall::Hom, {}, {}, {}},
                         {4, GenotypeCall::NoCall, {}, 2.0, {}}});
  const auto segs = path_to_segments(t, StatePath(4, 0));
  CHECK(*segs[0].het_fraction == 0.5);
  CHECK(*segs[0].mean_cn_log2 == 2.0);
  const SnpTrack nc("1", {{1, GenotypeCall::NoCall, {}, {}, {}}});
  const auto none = path_to_segments(nc, StatePath(1, 0));
  CHECK_FALSE(none[0].het_fraction);
  CHECK_FALSE(none[0].mean_cn_log2);
}

TEST_CASE("uninformative emissions leave only transition costs") {
  const auto m = HmmModel::make(ModelKind::CopyNumber);
  std::vector<SnpObservation> obs;
  std::int64_t pos = 1000;
  for (int i = 0; i < 40; ++i) obs.push_back({pos += 30000 * (i % 3 + 1), {}, {}, 0.7, 1e6});
  HmmModel ice = m;
  ice.ice = true;
  const SnpTrack t("1", obs);
  const SnpWindow w{10, 15};
  const std::size_t del = 0, norm = 1;
  auto state = [&](std::size_t i) { return i >= w.begin && i < w.end ? del : norm; };
  double expected = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i)
    expected += log_tau(m, t, i, state(i - 1), state(i)) - log_tau(m, t, i, norm, norm);
  const double delta = deletion_delta_loglik(ice, t, w);
  CHECK(std::abs(delta - expected) < 1e-6);
  CHECK(delta < 0.0);
}

TEST_CASE("whole-track window compares two constant paths") {
  std::mt19937_64 rng(9);
  auto [model, track] = oracle::random_instance(rng, 3, 30);
  const double delta = deletion_delta_loglik(model, track, {0, track.size()});
  CHECK(delta == doctest::Approx(path_loglik(model, track, StatePath(30, 0)) -
                                 path_loglik(model, track, StatePath(30, 1))));
}

TEST_CASE("delta is antisymmetric and matches the two path scores") {
  std::mt19937_64 rng(10);
  auto [model, track] = oracle::random_instance(rng, 4, 30);
  const SnpWindow w{5, 9};
  StatePath del(30, 2);
  for (std::size_t i = w.begin; i < w.end; ++i) del[i] = 0;
  const double a = path_loglik(model, track, del);
  const double b = path_loglik(model, track, StatePath(30, 2));
  CHECK(deletion_delta_loglik(model, track, w) == doctest::Approx(a - b).epsilon(1e-13));
  CHECK(-(a - b) == doctest::Approx(b - a));
}

TEST_CASE("windows and models are checked") {
  std::mt19937_64 rng(11);
  auto [cn, track] = oracle::random_instance(rng, 3, 10);
  CHECK_THROWS(deletion_delta_loglik(cn, track, {3, 3}));
  CHECK_THROWS(deletion_delta_loglik(cn, track, {5, 11}));
  CHECK_THROWS(deletion_delta_loglik(cn, track, {6, 4}));
  auto [gt, t2] = oracle::random_instance(rng, 2, 10);
  CHECK_THROWS(deletion_delta_loglik(gt, t2, {2, 4}));
}

TEST_CASE("planted small deletions at low noise favour the deletion under ice") {
  SweepConfig cfg;
  cfg.seed = 3;
  cfg.n_snps = 2000;
  cfg.chromosome_length = 60e6;
  std::vector<double> deltas;
  for (std::size_t r = 0; r < 11; ++r) {
    const auto d = make_sweep_dataset(cfg, 0, 2, r);
    REQUIRE(d.k == 0.4);
    deltas.push_back(deletion_delta_loglik(sweep_model(d.sigma_hat, true), d.track, d.window));
  }
  std::nth_element(deltas.begin(), deltas.begin() + 5, deltas.end());
  CHECK(deltas[5] > 0.0);
}

TEST_CASE("null tracks: all-normal beats a single-SNP deletion in the median") {
  SweepConfig cfg;
  cfg.seed = 4;
  cfg.arm_snps = 800;
  cfg.arm_length = 30e6;
  std::vector<double> deltas;
  for (std::size_t a = 0; a < 11; ++a) {
    const auto arm = make_null_arm(cfg, a);
    const auto m = sweep_model(arm.sigma_hat, false);
    deltas.push_back(deletion_delta_loglik(m, arm.track, {400, 401}));
  }
  std::nth_element(deltas.begin(), deltas.begin() + 5, deltas.end());
  CHECK(deltas[5] < 0.0);
}

TEST_CASE("segment and per-SNP tables") {
  const auto m = HmmModel::make(ModelKind::Joint);
  const SnpTrack t("chr1", {{10, GenotypeCall::Het, {}, 1.0, {}}, {20, GenotypeCall::Hom, {}, {}, {}}});
  const StatePath path{2, 0};
  std::ostringstream seg;
  write_segments_header(seg);
  write_segments(seg, m.space, path_to_segments(t, path));
  CHECK(seg.str() ==
        "chrom\tstart\tend\tstate\tn_snps\tmean_cn_log2\thet_fraction\n"
        "chr1\t10\t10\tnormal\t1\t1\t1\n"
        "chr1\t20\t20\tdeletion\t1\tNA\t0\n");
  std::ostringstream per;
  write_per_snp_header(per, m.space);
  write_per_snp(per, m.space, t, path, posterior_probs(m, t));
  std::istringstream lines(per.str());
  std::string header, row;
  std::getline(lines, header);
  CHECK(header == "chrom\tpos\tstate\tpost_deletion\tpost_loh\tpost_normal\tpost_amplification");
  std::getline(lines, row);
  CHECK(row.rfind("chr1\t10\tnormal\t", 0) == 0);
}
