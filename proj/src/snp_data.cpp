#include "chromoseg/snp_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>

#include "chromoseg/numeric.hpp"

namespace chromoseg {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

bool is_missing(std::string_view cell) { return cell.empty() || cell == "NA"; }

std::optional<double> parse_real_cell(std::string_view cell, std::size_t line,
                                      const std::string& column) {
  if (is_missing(cell)) return std::nullopt;
  auto value = parse_double(cell);
  if (!value || !std::isfinite(*value)) {
    throw ParseError(line, "unparseable number '" + std::string(cell) + "' in column " + column);
  }
  return value;
}

}  // namespace

std::optional<GenotypeCall> parse_genotype_token(std::string_view token) {
  if (token == "AA" || token == "BB") return GenotypeCall::Hom;
  if (token == "AB") return GenotypeCall::Het;
  if (token == "NC") return GenotypeCall::NoCall;
  return std::nullopt;
}

std::string_view genotype_token(GenotypeCall call) {
  switch (call) {
    case GenotypeCall::Hom: return "AA";
    case GenotypeCall::Het: return "AB";
    case GenotypeCall::NoCall: return "NC";
  }
  return "NC";
}

void SnpObservation::validate() const {
  if (position < 0) throw std::invalid_argument("negative SNP position");
  if (!gt && !cn_log2) throw std::invalid_argument("SNP has neither genotype nor copy number");
  if (cn_scale && !cn_log2) throw std::invalid_argument("copy-number scale without copy number");
  if (cn_scale && !(*cn_scale > 0.0 && std::isfinite(*cn_scale)))
    throw std::invalid_argument("copy-number scale must be positive");
  if (cn_log2 && !std::isfinite(*cn_log2)) throw std::invalid_argument("non-finite copy number");
  if (gt_score) {
    if (!has_called_genotype())
      throw std::invalid_argument("genotype score requires a Hom or Het call");
    if (!(*gt_score >= 0.0) || !std::isfinite(*gt_score))
      throw std::invalid_argument("genotype score must be nonnegative");
  }
}

SnpTrack::SnpTrack(std::string chromosome, std::vector<SnpObservation> observations)
    : chromosome_(std::move(chromosome)), observations_(std::move(observations)) {
  if (observations_.empty()) throw std::invalid_argument("SnpTrack: empty track");
  for (std::size_t i = 0; i < observations_.size(); ++i) {
    observations_[i].validate();
    if (i > 0 && observations_[i].position <= observations_[i - 1].position)
      throw std::invalid_argument("SnpTrack: positions must be strictly increasing on " +
                                  chromosome_);
  }
}

bool SnpTrack::has_genotypes() const {
  return std::any_of(observations_.begin(), observations_.end(),
                     [](const SnpObservation& o) { return o.gt.has_value(); });
}

bool SnpTrack::has_genotype_scores() const {
  return std::any_of(observations_.begin(), observations_.end(),
                     [](const SnpObservation& o) { return o.gt_score.has_value(); });
}

bool SnpTrack::has_copy_number() const {
  return std::any_of(observations_.begin(), observations_.end(),
                     [](const SnpObservation& o) { return o.cn_log2.has_value(); });
}

bool SnpTrack::has_copy_number_scales() const {
  return std::any_of(observations_.begin(), observations_.end(),
                     [](const SnpObservation& o) { return o.cn_scale.has_value(); });
}

std::vector<std::int64_t> adjacent_distances(const SnpTrack& track) {
  std::vector<std::int64_t> gaps;
  if (track.size() < 2) return gaps;
  gaps.reserve(track.size() - 1);
  for (std::size_t i = 1; i < track.size(); ++i)
    gaps.push_back(track[i].position - track[i - 1].position);
  return gaps;
}

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

std::vector<SnpTrack> parse_snp_table(std::istream& in, const ColumnMapping& columns) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    have_header = true;
    break;
  }
  if (!have_header) throw ParseError(line_no, "missing header row");

  const auto header = split_tabs(line);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!index.emplace(std::string(header[i]), i).second)
      throw ParseError(line_no, "duplicate column '" + std::string(header[i]) + "'");
  }
  auto find = [&](const std::string& name) -> std::optional<std::size_t> {
    auto it = index.find(name);
    if (it == index.end()) return std::nullopt;
    return it->second;
  };
  const auto chrom_col = find(columns.chrom);
  const auto pos_col = find(columns.pos);
  if (!chrom_col || !pos_col)
    throw ParseError(line_no, "header must contain columns " + columns.chrom + " and " + columns.pos);
  const auto gt_col = find(columns.gt);
  const auto conf_col = find(columns.gt_conf);
  const auto cn_col = find(columns.cn);
  const auto se_col = find(columns.cn_se);

  std::vector<std::string> order;
  std::map<std::string, std::vector<std::pair<SnpObservation, std::size_t>>> by_chrom;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto cells = split_tabs(line);
    if (cells.size() != header.size())
      throw ParseError(line_no, "expected " + std::to_string(header.size()) + " columns, found " +
                                    std::to_string(cells.size()));

    SnpObservation obs;
    const std::string chrom(cells[*chrom_col]);
    if (chrom.empty()) throw ParseError(line_no, "empty chromosome");
    const auto pos = parse_integer(cells[*pos_col]);
    if (!pos || *pos < 0)
      throw ParseError(line_no, "invalid position '" + std::string(cells[*pos_col]) + "'");
    obs.position = *pos;

    if (gt_col && !is_missing(cells[*gt_col])) {
      obs.gt = parse_genotype_token(cells[*gt_col]);
      if (!obs.gt)
        throw ParseError(line_no, "genotype token '" + std::string(cells[*gt_col]) +
                                      "' is not one of AA, AB, BB, NC");
    }
    if (conf_col) obs.gt_score = parse_real_cell(cells[*conf_col], line_no, columns.gt_conf);
    if (cn_col) {
      if (auto cn = parse_real_cell(cells[*cn_col], line_no, columns.cn)) {
        if (*cn <= 0.0) throw ParseError(line_no, "copy number must be positive");
        obs.cn_log2 = std::log2(*cn);
      }
    }
    if (se_col) obs.cn_scale = parse_real_cell(cells[*se_col], line_no, columns.cn_se);

    try {
      obs.validate();
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }

    auto [it, inserted] = by_chrom.try_emplace(chrom);
    if (inserted) order.push_back(chrom);
    it->second.emplace_back(obs, line_no);
  }

  std::vector<SnpTrack> tracks;
  tracks.reserve(order.size());
  for (const auto& chrom : order) {
    auto& rows = by_chrom[chrom];
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      return a.first.position < b.first.position;
    });
    std::vector<SnpObservation> obs;
    obs.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i > 0 && rows[i].first.position == rows[i - 1].first.position)
        throw ParseError(rows[i].second, "duplicate position " +
                                             std::to_string(rows[i].first.position) + " on " +
                                             chrom);
      obs.push_back(rows[i].first);
    }
    tracks.emplace_back(chrom, std::move(obs));
  }
  return tracks;
}

std::vector<SnpTrack> read_snp_table(const std::string& path, const ColumnMapping& columns) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_snp_table(in, columns);
}

void write_snp_table(std::ostream& out, std::span<const SnpTrack> tracks) {
  out << "chrom\tpos\tgt\tgt_conf\tcn\tcn_se\n";
  auto real = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("NA");
  };
  for (const auto& track : tracks) {
    for (const auto& o : track.observations()) {
      out << track.chromosome() << '\t' << o.position << '\t'
          << (o.gt ? std::string(genotype_token(*o.gt)) : std::string("NA")) << '\t'
          << real(o.gt_score) << '\t'
          << (o.cn_log2 ? format_double(std::exp2(*o.cn_log2)) : std::string("NA")) << '\t'
          << real(o.cn_scale) << '\n';
    }
  }
}

bool is_autosome(std::string_view chromosome) {
  if (chromosome.size() > 3 && chromosome.substr(0, 3) == "chr") chromosome.remove_prefix(3);
  return !(chromosome == "X" || chromosome == "Y" || chromosome == "M" || chromosome == "MT");
}

}  // namespace chromoseg
