#include "chromoseg/reference.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "chromoseg/numeric.hpp"

namespace chromoseg {

namespace {

constexpr std::array<std::pair<Zygosity, Zygosity>, 4> kCells{{
    {Zygosity::Hom, Zygosity::Hom},
    {Zygosity::Hom, Zygosity::Het},
    {Zygosity::Het, Zygosity::Hom},
    {Zygosity::Het, Zygosity::Het},
}};

std::string cell_name(std::size_t i) {
  return "called=" + std::string(zygosity_name(kCells[i].first)) +
         " true=" + std::string(zygosity_name(kCells[i].second));
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double total = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) total += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
  return total;
}

void normalize(KdeTable& table) {
  const double mass = trapezoid(table.grid, table.density);
  if (!(mass > 0.0)) throw std::invalid_argument("density table has no mass");
  for (double& d : table.density) d /= mass;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + step * static_cast<double>(i);
  v.back() = hi;
  return v;
}

}  // namespace

std::string_view zygosity_name(Zygosity z) { return z == Zygosity::Hom ? "HOM" : "HET"; }

Zygosity parse_zygosity(std::string_view token) {
  if (token == "HOM" || token == "AA" || token == "BB") return Zygosity::Hom;
  if (token == "HET" || token == "AB") return Zygosity::Het;
  throw std::invalid_argument("unknown genotype class '" + std::string(token) + "'");
}

double KdeTable::evaluate(double score) const {
  if (grid.empty() || score < grid.front() || score > grid.back() || std::isnan(score)) return 0.0;
  auto it = std::upper_bound(grid.begin(), grid.end(), score);
  if (it == grid.end()) return density.back();
  const auto hi = static_cast<std::size_t>(it - grid.begin());
  const std::size_t lo = hi - 1;
  const double w = (score - grid[lo]) / (grid[hi] - grid[lo]);
  return density[lo] + w * (density[hi] - density[lo]);
}

double KdeTable::integral() const { return trapezoid(grid, density); }

double KdeTable::quantile(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  const double total = integral();
  double target = u * total;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double dx = grid[i] - grid[i - 1];
    const double f0 = density[i - 1];
    const double f1 = density[i];
    const double mass = 0.5 * (f0 + f1) * dx;
    if (target > mass && i + 1 < grid.size()) {
      target -= mass;
      continue;
    }
    target = std::min(target, mass);
    // Solve f0*t + slope*t^2/2 = target on this segment.
    const double slope = (f1 - f0) / dx;
    double t;
    if (std::abs(slope) * dx < 1e-12 * std::max(f0, 1e-300)) {
      t = f0 > 0.0 ? target / f0 : 0.0;
    } else {
      const double disc = std::max(0.0, f0 * f0 + 2.0 * slope * target);
      t = (std::sqrt(disc) - f0) / slope;
    }
    return grid[i - 1] + std::clamp(t, 0.0, dx);
  }
  return grid.back();
}

void KdeTable::validate() const {
  if (grid.size() < 64) throw std::invalid_argument("KdeTable: grid needs at least 64 points");
  if (density.size() != grid.size()) throw std::invalid_argument("KdeTable: size mismatch");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || !std::isfinite(density[i]) || density[i] < 0.0)
      throw std::invalid_argument("KdeTable: invalid grid or density value");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::invalid_argument("KdeTable: grid must be strictly increasing");
  }
  if (!(bandwidth > 0.0)) throw std::invalid_argument("KdeTable: bandwidth must be positive");
  const double mass = integral();
  if (mass < 0.999 || mass > 1.001)
    throw std::invalid_argument("KdeTable: density integrates to " + format_double(mass));
}

double silverman_bandwidth(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw std::invalid_argument("silverman_bandwidth: need at least two samples");
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) throw std::invalid_argument("silverman_bandwidth: zero variance");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

KdeTable gaussian_kde(std::span<const double> samples, std::size_t grid_points) {
  if (grid_points < 64) throw std::invalid_argument("gaussian_kde: grid too small");
  for (double s : samples)
    if (!std::isfinite(s)) throw std::invalid_argument("gaussian_kde: non-finite sample");
  const double h = silverman_bandwidth(samples);
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());

  KdeTable table;
  table.bandwidth = h;
  table.sample_count = sorted.size();
  table.grid = linspace(sorted.front() - 3.0 * h, sorted.back() + 3.0 * h, grid_points);
  table.density.assign(grid_points, 0.0);

  const double norm = 1.0 / (static_cast<double>(sorted.size()) * h * std::sqrt(2.0 * std::numbers::pi));
  const double reach = 8.0 * h;
  for (std::size_t g = 0; g < grid_points; ++g) {
    const double x = table.grid[g];
    auto lo = std::lower_bound(sorted.begin(), sorted.end(), x - reach);
    auto hi = std::upper_bound(lo, sorted.end(), x + reach);
    double sum = 0.0;
    for (auto it = lo; it != hi; ++it) {
      const double z = (x - *it) / h;
      sum += std::exp(-0.5 * z * z);
    }
    table.density[g] = sum * norm;
  }
  normalize(table);
  return table;
}

ReferenceModel::ReferenceModel(std::array<KdeTable, 4> cells,
                               std::array<double, 2> prob_hom_given_called)
    : cells_(std::move(cells)), prob_hom_(prob_hom_given_called) {
  for (const auto& c : cells_) c.validate();
  for (double p : prob_hom_)
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("ReferenceModel: probability outside [0,1]");
}

double ReferenceModel::score_density(Zygosity called, Zygosity truth, double score,
                                     double floor) const {
  return std::max(floor, cell(called, truth).evaluate(score));
}

ReferenceModel train_reference(std::span<const LabeledScore> triples) {
  std::array<std::vector<double>, 4> scores;
  for (const auto& t : triples) {
    if (!std::isfinite(t.score) || t.score < 0.0)
      throw std::invalid_argument("train_reference: scores must be finite and nonnegative");
    scores[ReferenceModel::index(t.called, t.truth)].push_back(t.score);
  }
  std::array<KdeTable, 4> cells;
  for (std::size_t i = 0; i < 4; ++i) {
    if (scores[i].size() < kMinCellSamples)
      throw std::invalid_argument("train_reference: cell " + cell_name(i) + " has " +
                                  std::to_string(scores[i].size()) + " triples, need " +
                                  std::to_string(kMinCellSamples));
    try {
      cells[i] = gaussian_kde(scores[i]);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("train_reference: cell " + cell_name(i) + ": " + e.what());
    }
  }
  return ReferenceModel(std::move(cells), prob_hom_given_called_counts(triples));
}

std::array<double, 2> prob_hom_given_called_counts(std::span<const LabeledScore> triples) {
  std::array<double, 4> counts{};
  for (const auto& t : triples) counts[ReferenceModel::index(t.called, t.truth)] += 1.0;
  std::array<double, 2> prob_hom{};
  for (auto called : {Zygosity::Hom, Zygosity::Het}) {
    const double hom = counts[ReferenceModel::index(called, Zygosity::Hom)];
    const double het = counts[ReferenceModel::index(called, Zygosity::Het)];
    if (hom + het == 0.0)
      throw std::invalid_argument("no triples called " + std::string(zygosity_name(called)));
    prob_hom[static_cast<std::size_t>(called)] = hom / (hom + het);
  }
  return prob_hom;
}

double family_density(const DensityFamily& family, double x) {
  if (const auto* g = std::get_if<ShiftedGamma>(&family)) {
    const double y = x - g->shift;
    if (y < 0.0) return 0.0;
    if (y == 0.0) return g->shape == 1.0 ? g->rate : 0.0;
    return std::exp(g->shape * std::log(g->rate) + (g->shape - 1.0) * std::log(y) - g->rate * y -
                    std::lgamma(g->shape));
  }
  const auto& t = std::get<TruncatedGaussian>(family);
  if (x < 0.0) return 0.0;
  const double z = (x - t.mean) / t.sd;
  const double mass = 0.5 * std::erfc(-t.mean / (t.sd * std::numbers::sqrt2));
  return std::exp(-0.5 * z * z) / (t.sd * std::sqrt(2.0 * std::numbers::pi) * mass);
}

SyntheticReferenceSpec default_synthetic_spec() {
  const ShiftedGamma correct{2.0, 1.0, 2.0};
  const ShiftedGamma miscall{1.0, 2.0, 0.3};
  SyntheticReferenceSpec spec{};
  spec.cells[ReferenceModel::index(Zygosity::Hom, Zygosity::Hom)] = correct;
  spec.cells[ReferenceModel::index(Zygosity::Hom, Zygosity::Het)] = miscall;
  spec.cells[ReferenceModel::index(Zygosity::Het, Zygosity::Hom)] = miscall;
  spec.cells[ReferenceModel::index(Zygosity::Het, Zygosity::Het)] = correct;
  spec.prob_hom_given_called = {0.99, 0.01};
  return spec;
}

ReferenceModel synthetic_reference(const SyntheticReferenceSpec& spec) {
  std::array<KdeTable, 4> cells;
  for (std::size_t i = 0; i < 4; ++i) {
    double lo = 0.0;
    double hi = 0.0;
    if (const auto* g = std::get_if<ShiftedGamma>(&spec.cells[i])) {
      if (!(g->shape >= 1.0) || !(g->rate > 0.0) || !(g->shift >= 0.0) || !std::isfinite(g->shape) ||
          !std::isfinite(g->rate) || !std::isfinite(g->shift))
        throw std::invalid_argument("synthetic_reference: gamma needs shape >= 1, rate > 0, shift >= 0");
      lo = g->shift;
      hi = g->shift + (g->shape + 10.0 * std::sqrt(g->shape) + 10.0) / g->rate;
    } else {
      const auto& t = std::get<TruncatedGaussian>(spec.cells[i]);
      if (!(t.sd > 0.0) || !std::isfinite(t.mean) || !std::isfinite(t.sd) || t.mean + 8.0 * t.sd <= 0.0)
        throw std::invalid_argument("synthetic_reference: truncated gaussian needs sd > 0 and mass above 0");
      lo = std::max(0.0, t.mean - 8.0 * t.sd);
      hi = t.mean + 8.0 * t.sd;
    }
    KdeTable table;
    table.grid = linspace(lo, hi, kKdeGridPoints);
    table.density.resize(kKdeGridPoints);
    for (std::size_t g = 0; g < kKdeGridPoints; ++g)
      table.density[g] = family_density(spec.cells[i], table.grid[g]);
    table.bandwidth = table.grid[1] - table.grid[0];
    table.sample_count = 0;
    normalize(table);
    cells[i] = std::move(table);
  }
  return ReferenceModel(std::move(cells), spec.prob_hom_given_called);
}

void write_reference(std::ostream& out, const ReferenceModel& model) {
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& c = model.cell(kCells[i].first, kCells[i].second);
    out << "#cell " << cell_name(i) << " bandwidth=" << format_double(c.bandwidth)
        << " n=" << c.sample_count << '\n';
    for (std::size_t g = 0; g < c.grid.size(); ++g)
      out << format_double(c.grid[g]) << '\t' << format_double(c.density[g]) << '\n';
  }
  out << "#probs\n";
  for (auto called : {Zygosity::Hom, Zygosity::Het})
    out << "probHomGivenCalled\t" << zygosity_name(called) << '\t'
        << format_double(model.prob_hom_given_called(called)) << '\n';
}

ReferenceModel parse_reference(std::istream& in) {
  std::array<KdeTable, 4> cells;
  std::array<bool, 4> seen{};
  std::array<double, 2> probs{};
  std::array<bool, 2> seen_prob{};
  enum class Section { None, Cell, Probs } section = Section::None;
  std::size_t current = 0;
  std::string line;
  std::size_t line_no = 0;

  auto fail = [&](const std::string& msg) {
    throw std::runtime_error("reference file line " + std::to_string(line_no) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("#cell", 0) == 0) {
      std::istringstream fields(line.substr(5));
      std::string tok;
      std::optional<Zygosity> called, truth;
      std::optional<double> bandwidth;
      std::optional<long long> n;
      while (fields >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) fail("malformed cell header field '" + tok + "'");
        const std::string key = tok.substr(0, eq);
        const std::string value = tok.substr(eq + 1);
        try {
          if (key == "called") called = parse_zygosity(value);
          else if (key == "true") truth = parse_zygosity(value);
          else if (key == "bandwidth") bandwidth = parse_double(value);
          else if (key == "n") n = parse_integer(value);
          else fail("unknown cell header field '" + key + "'");
        } catch (const std::invalid_argument& e) {
          fail(e.what());
        }
      }
      if (!called || !truth || !bandwidth || !n || *n < 0) fail("incomplete cell header");
      current = ReferenceModel::index(*called, *truth);
      if (seen[current]) fail("duplicate cell " + cell_name(current));
      seen[current] = true;
      cells[current].bandwidth = *bandwidth;
      cells[current].sample_count = static_cast<std::size_t>(*n);
      section = Section::Cell;
      continue;
    }
    if (line.rfind("#probs", 0) == 0) {
      section = Section::Probs;
      continue;
    }
    if (line.front() == '#') continue;

    std::vector<std::string> parts;
    std::istringstream split(line);
    for (std::string p; std::getline(split, p, '\t');) parts.push_back(p);
    if (section == Section::Cell) {
      if (parts.size() != 2) fail("expected grid and density");
      auto g = parse_double(parts[0]);
      auto d = parse_double(parts[1]);
      if (!g || !d) fail("unparseable number");
      cells[current].grid.push_back(*g);
      cells[current].density.push_back(*d);
    } else if (section == Section::Probs) {
      if (parts.size() != 3 || parts[0] != "probHomGivenCalled") fail("malformed probability line");
      Zygosity called;
      try {
        called = parse_zygosity(parts[1]);
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
      auto p = parse_double(parts[2]);
      if (!p) fail("unparseable probability");
      probs[static_cast<std::size_t>(called)] = *p;
      seen_prob[static_cast<std::size_t>(called)] = true;
    } else {
      fail("data before any section header");
    }
  }
  for (std::size_t i = 0; i < 4; ++i)
    if (!seen[i]) throw std::runtime_error("reference file: missing cell " + cell_name(i));
  if (!seen_prob[0] || !seen_prob[1])
    throw std::runtime_error("reference file: missing probHomGivenCalled entries");
  try {
    return ReferenceModel(std::move(cells), probs);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("reference file: ") + e.what());
  }
}

ReferenceModel read_reference(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_reference(in);
}

std::vector<LabeledScore> parse_training_table(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::istringstream split(line);
    for (std::string p; std::getline(split, p, '\t');) header.push_back(p);
    break;
  }
  auto col = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw std::runtime_error("training table: missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t called_col = col("called");
  const std::size_t truth_col = col("truth");
  const std::size_t score_col = col("score");

  std::vector<LabeledScore> triples;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> parts;
    std::istringstream split(line);
    for (std::string p; std::getline(split, p, '\t');) parts.push_back(p);
    if (parts.size() != header.size())
      throw std::runtime_error("training table line " + std::to_string(line_no) + ": wrong column count");
    auto score = parse_double(parts[score_col]);
    if (!score)
      throw std::runtime_error("training table line " + std::to_string(line_no) + ": unparseable score");
    try {
      triples.push_back({parse_zygosity(parts[called_col]), parse_zygosity(parts[truth_col]), *score});
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("training table line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return triples;
}

}  // namespace chromoseg
