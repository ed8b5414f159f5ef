#ifndef CHROMOSEG_REFERENCE_HPP
#define CHROMOSEG_REFERENCE_HPP

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace chromoseg {

inline constexpr double kDefaultDensityFloor = 1e-10;
inline constexpr std::size_t kKdeGridPoints = 512;

enum class Zygosity : unsigned char { Hom, Het };

std::string_view zygosity_name(Zygosity z);  // "HOM" / "HET"
Zygosity parse_zygosity(std::string_view token);

// A density tabulated on a grid and read back by linear interpolation.
struct KdeTable {
  std::vector<double> grid;
  std::vector<double> density;
  double bandwidth = 0.0;
  std::size_t sample_count = 0;

  // Interpolated density; 0 outside the grid.
  double evaluate(double score) const;
  double integral() const;  // trapezoid rule over the grid
  // Inverse of the piecewise-linear density's CDF, u in [0, 1].
  double quantile(double u) const;
  void validate() const;

  friend bool operator==(const KdeTable&, const KdeTable&) = default;
};

double silverman_bandwidth(std::span<const double> samples);

// Gaussian-kernel density on `grid_points` points over [min - 3h, max + 3h],
// rescaled so the trapezoid integral is one.
KdeTable gaussian_kde(std::span<const double> samples, std::size_t grid_points = kKdeGridPoints);

// Score densities for the four (called, true) genotype cells plus the
// probability that the true genotype is HOM given the call in a region that
// retains heterozygosity.
class ReferenceModel {
 public:
  ReferenceModel(std::array<KdeTable, 4> cells, std::array<double, 2> prob_hom_given_called);

  const KdeTable& cell(Zygosity called, Zygosity truth) const {
    return cells_[index(called, truth)];
  }
  double prob_hom_given_called(Zygosity called) const {
    return prob_hom_[static_cast<std::size_t>(called)];
  }
  double prob_het_given_called(Zygosity called) const { return 1.0 - prob_hom_given_called(called); }

  // Density of a score in one cell, never below `floor`.
  double score_density(Zygosity called, Zygosity truth, double score,
                       double floor = kDefaultDensityFloor) const;

  friend bool operator==(const ReferenceModel&, const ReferenceModel&) = default;

  static std::size_t index(Zygosity called, Zygosity truth) {
    return static_cast<std::size_t>(called) * 2 + static_cast<std::size_t>(truth);
  }

 private:
  std::array<KdeTable, 4> cells_;
  std::array<double, 2> prob_hom_;
};

struct LabeledScore {
  Zygosity called;
  Zygosity truth;
  double score;
};

inline constexpr std::size_t kMinCellSamples = 30;

ReferenceModel train_reference(std::span<const LabeledScore> triples);

// Fraction of true HOM among the triples of each called class.
std::array<double, 2> prob_hom_given_called_counts(std::span<const LabeledScore> triples);

// Closed-form families for synthetic references.
struct ShiftedGamma {
  double shape;
  double rate;
  double shift;
};
struct TruncatedGaussian {  // truncated below at zero
  double mean;
  double sd;
};
using DensityFamily = std::variant<ShiftedGamma, TruncatedGaussian>;

double family_density(const DensityFamily& family, double x);

struct SyntheticReferenceSpec {
  std::array<DensityFamily, 4> cells;  // indexed by ReferenceModel::index
  std::array<double, 2> prob_hom_given_called;
};

// Correct calls score Gamma(2, 1) + 2, miscalls Gamma(1, 2) + 0.3.
SyntheticReferenceSpec default_synthetic_spec();
ReferenceModel synthetic_reference(const SyntheticReferenceSpec& spec);

void write_reference(std::ostream& out, const ReferenceModel& model);
ReferenceModel parse_reference(std::istream& in);
ReferenceModel read_reference(const std::string& path);

// Training table with header columns called, truth, score.
std::vector<LabeledScore> parse_training_table(std::istream& in);

}  // namespace chromoseg

#endif
