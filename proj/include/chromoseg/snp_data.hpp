#ifndef CHROMOSEG_SNP_DATA_HPP
#define CHROMOSEG_SNP_DATA_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chromoseg {

// Biallelic calls collapse to zygosity: AA/BB are Hom, AB is Het.
enum class GenotypeCall : unsigned char { Hom, Het, NoCall };

std::optional<GenotypeCall> parse_genotype_token(std::string_view token);
std::string_view genotype_token(GenotypeCall call);

struct SnpObservation {
  std::int64_t position = 0;
  std::optional<GenotypeCall> gt;
  std::optional<double> gt_score;  // genotype confidence score
  std::optional<double> cn_log2;   // log2 copy number, two copies at 1.0
  std::optional<double> cn_scale;  // per-SNP multiplier on the copy-number sd

  bool has_called_genotype() const { return gt && *gt != GenotypeCall::NoCall; }

  // Throws std::invalid_argument when the field combination is not allowed.
  void validate() const;

  friend bool operator==(const SnpObservation&, const SnpObservation&) = default;
};

// Observations of one chromosome ordered by strictly increasing position.
// Immutable once built.
class SnpTrack {
 public:
  SnpTrack(std::string chromosome, std::vector<SnpObservation> observations);

  const std::string& chromosome() const { return chromosome_; }
  std::span<const SnpObservation> observations() const { return observations_; }
  const SnpObservation& operator[](std::size_t i) const { return observations_[i]; }
  std::size_t size() const { return observations_.size(); }

  bool has_genotypes() const;
  bool has_genotype_scores() const;
  bool has_copy_number() const;
  bool has_copy_number_scales() const;

  friend bool operator==(const SnpTrack&, const SnpTrack&) = default;

 private:
  std::string chromosome_;
  std::vector<SnpObservation> observations_;
};

// Base-pair gaps between consecutive SNPs; empty for a single SNP.
std::vector<std::int64_t> adjacent_distances(const SnpTrack& track);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct ColumnMapping {
  std::string chrom = "chrom";
  std::string pos = "pos";
  std::string gt = "gt";
  std::string gt_conf = "gt_conf";
  std::string cn = "cn";        // linear copy number, converted to log2
  std::string cn_se = "cn_se";  // stored as cn_scale
};

// Tab-separated table with a header row. Leading '#' lines are comments.
// Returns one track per chromosome in order of first appearance.
std::vector<SnpTrack> parse_snp_table(std::istream& in, const ColumnMapping& columns = {});
std::vector<SnpTrack> read_snp_table(const std::string& path, const ColumnMapping& columns = {});

// Writes the full column set in the default header names, NA for absent cells.
void write_snp_table(std::ostream& out, std::span<const SnpTrack> tracks);

// Chromosomes named X, Y, M or MT (with or without a chr prefix) are not autosomal.
bool is_autosome(std::string_view chromosome);

}  // namespace chromoseg

#endif
