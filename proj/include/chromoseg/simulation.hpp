#ifndef CHROMOSEG_SIMULATION_HPP
#define CHROMOSEG_SIMULATION_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <ostream>
#include <string_view>
#include <vector>

#include "chromoseg/hmm.hpp"
#include "chromoseg/reference.hpp"
#include "chromoseg/segmentation.hpp"
#include "chromoseg/snp_data.hpp"

namespace chromoseg {

enum class Region : unsigned char { Background, A, B, C, D, E };
std::string_view region_name(Region region);

// Joint-space state indices used for simulated truth.
namespace joint {
inline constexpr std::uint8_t deletion = 0;
inline constexpr std::uint8_t loh = 1;
inline constexpr std::uint8_t normal = 2;
inline constexpr std::uint8_t amplification = 3;
}  // namespace joint

struct SimConfig {
  std::uint64_t seed = 1;
  std::size_t n_snps = 9165;
  double chromosome_length = 245e6;
  double background_p_hom = 0.7;
  double epsilon = 0.25;            // log2 copy-number sd
  // Flagged SNPs are simulated with sd epsilon * scale and report that sd as
  // their standard error.
  double high_conf_scale = 0.5;
  double low_conf_scale = 2.0;
  double se_shape = 1.0;            // standard errors ~ Gamma(shape, rate) + shift
  double se_rate = 2.0;
  double se_shift = 0.3;
  std::shared_ptr<const ReferenceModel> reference;  // synthetic default when empty

  void validate() const;
};

struct SimulatedChromosome {
  SnpTrack track;
  StatePath true_path;  // joint space
  std::vector<Region> regions;
};

SimulatedChromosome simulate_chr1(const SimConfig& config);

// Truth sidecar: chrom, pos, true_state, region.
void write_truth_table(std::ostream& out, const SimulatedChromosome& sim);

struct SweepConfig {
  std::uint64_t seed = 1;
  std::vector<int> sizes{2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::size_t datasets_per_size = 50;
  std::vector<double> k_values{0.4, 0.7, 1.0, 1.3};
  std::size_t null_arms = 200;
  double null_k = 1.3;
  std::size_t n_snps = 9165;            // per sweep track
  double chromosome_length = 245e6;
  std::size_t arm_snps = 4500;          // per null arm
  double arm_length = 120e6;
  // s_i = background_sd * w_i with w_i ~ (Gamma(1,2) + 0.3) rescaled to mean 1.
  double background_sd = 0.38;
  double variability_shape = 1.0;
  double variability_rate = 2.0;
  double variability_shift = 0.3;

  void validate() const;
};

struct SweepDataset {
  int size = 0;
  double k = 1.0;
  std::size_t replicate = 0;
  SnpTrack track;
  SnpWindow window;
  double sigma_hat = 0.0;  // robust sd of the K=1 version of the data
};

// One sweep dataset. The background and the standardized noise depend only on
// (seed, size, replicate), so datasets that differ only in K are paired.
SweepDataset make_sweep_dataset(const SweepConfig& config, std::size_t k_index, int size,
                                std::size_t replicate);
// All datasets ordered by K, then size, then replicate.
std::vector<SweepDataset> simulate_deletion_sweep(const SweepConfig& config);

struct NullArm {
  SnpTrack track;
  double sigma_hat = 0.0;
};

NullArm make_null_arm(const SweepConfig& config, std::size_t arm);
std::vector<NullArm> simulate_null_arms(const SweepConfig& config);

// Copy-number model used for sweep and null-arm decoding: sigma fixed to the
// dataset's robust estimate.
HmmModel sweep_model(double sigma_hat, bool ice);

}  // namespace chromoseg

#endif
