#ifndef CHROMOSEG_SEGMENTATION_HPP
#define CHROMOSEG_SEGMENTATION_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "chromoseg/emissions.hpp"
#include "chromoseg/hmm.hpp"
#include "chromoseg/snp_data.hpp"

namespace chromoseg {

// A maximal run of one decoded state. Boundaries are the first and last SNP
// positions of the run.
struct Segment {
  std::string chromosome;
  std::int64_t start_bp = 0;
  std::int64_t end_bp = 0;
  std::size_t state = 0;
  std::size_t first_snp = 0;
  std::size_t n_snps = 0;
  std::optional<double> mean_cn_log2;
  std::optional<double> het_fraction;  // Het among called SNPs

  friend bool operator==(const Segment&, const Segment&) = default;
};

std::vector<Segment> path_to_segments(const SnpTrack& track, std::span<const std::uint8_t> path);
StatePath segments_to_path(std::span<const Segment> segments);

// Half-open SNP index range.
struct SnpWindow {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// path_loglik with the deletion state inside the window and the normal state
// elsewhere, minus path_loglik of the all-normal path.
double deletion_delta_loglik(const HmmModel& model, const SnpTrack& track, SnpWindow window);

// Segment TSV, NA for absent summaries.
void write_segments_header(std::ostream& out);
void write_segments(std::ostream& out, const StateSpace& space, std::span<const Segment> segments);

// Per-SNP TSV: chrom, pos, state and one smoothing-probability column per state.
void write_per_snp_header(std::ostream& out, const StateSpace& space);
void write_per_snp(std::ostream& out, const StateSpace& space, const SnpTrack& track,
                   std::span<const std::uint8_t> path, const Posterior& posterior);

}  // namespace chromoseg

#endif
