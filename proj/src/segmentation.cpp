#include "chromoseg/segmentation.hpp"

#include <stdexcept>
#include <string>

#include "chromoseg/numeric.hpp"

namespace chromoseg {

namespace {

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

Segment summarize(const SnpTrack& track, std::size_t first, std::size_t last, std::size_t state) {
  Segment seg;
  seg.chromosome = track.chromosome();
  seg.start_bp = track[first].position;
  seg.end_bp = track[last].position;
  seg.state = state;
  seg.first_snp = first;
  seg.n_snps = last - first + 1;
  double cn_sum = 0.0;
  std::size_t cn_n = 0, called = 0, het = 0;
  for (std::size_t i = first; i <= last; ++i) {
    const auto& obs = track[i];
    if (obs.cn_log2) {
      cn_sum += *obs.cn_log2;
      ++cn_n;
    }
    if (obs.has_called_genotype()) {
      ++called;
      if (*obs.gt == GenotypeCall::Het) ++het;
    }
  }
  if (cn_n > 0) seg.mean_cn_log2 = cn_sum / static_cast<double>(cn_n);
  if (called > 0) seg.het_fraction = static_cast<double>(het) / static_cast<double>(called);
  return seg;
}

}  // namespace

std::vector<Segment> path_to_segments(const SnpTrack& track, std::span<const std::uint8_t> path) {
  if (path.size() != track.size())
    throw std::invalid_argument("path_to_segments: path length " + std::to_string(path.size()) +
                                " does not match track length " + std::to_string(track.size()));
  std::vector<Segment> out;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= path.size(); ++i) {
    if (i == path.size() || path[i] != path[start]) {
      out.push_back(summarize(track, start, i - 1, path[start]));
      start = i;
    }
  }
  return out;
}

StatePath segments_to_path(std::span<const Segment> segments) {
  StatePath path;
  for (const auto& seg : segments) path.insert(path.end(), seg.n_snps, static_cast<std::uint8_t>(seg.state));
  return path;
}

double deletion_delta_loglik(const HmmModel& model, const SnpTrack& track, SnpWindow window) {
  const auto deletion = model.space.deletion_state();
  if (!deletion) throw std::invalid_argument("deletion_delta_loglik: state space has no deletion state");
  if (window.begin >= window.end || window.end > track.size())
    throw std::invalid_argument("deletion_delta_loglik: window [" + std::to_string(window.begin) + ", " +
                                std::to_string(window.end) + ") is not inside a track of " +
                                std::to_string(track.size()) + " SNPs");
  StatePath null_path(track.size(), static_cast<std::uint8_t>(model.space.normal_state()));
  StatePath alt = null_path;
  for (std::size_t i = window.begin; i < window.end; ++i) alt[i] = static_cast<std::uint8_t>(*deletion);
  return path_loglik(model, track, alt) - path_loglik(model, track, null_path);
}

void write_segments_header(std::ostream& out) {
  out << "chrom\tstart\tend\tstate\tn_snps\tmean_cn_log2\thet_fraction\n";
}

void write_segments(std::ostream& out, const StateSpace& space, std::span<const Segment> segments) {
  for (const auto& s : segments) {
    out << s.chromosome << '\t' << s.start_bp << '\t' << s.end_bp << '\t' << space.name(s.state) << '\t'
        << s.n_snps << '\t' << cell(s.mean_cn_log2) << '\t' << cell(s.het_fraction) << '\n';
  }
}

void write_per_snp_header(std::ostream& out, const StateSpace& space) {
  out << "chrom\tpos\tstate";
  for (std::size_t s = 0; s < space.size(); ++s) out << "\tpost_" << space.name(s);
  out << '\n';
}

void write_per_snp(std::ostream& out, const StateSpace& space, const SnpTrack& track,
                   std::span<const std::uint8_t> path, const Posterior& posterior) {
  if (path.size() != track.size() || posterior.probs.size() != track.size() * space.size())
    throw std::invalid_argument("write_per_snp: path or posterior does not match the track");
  for (std::size_t i = 0; i < track.size(); ++i) {
    out << track.chromosome() << '\t' << track[i].position << '\t' << space.name(path[i]);
    for (double p : posterior.row(i)) out << '\t' << format_double(p);
    out << '\n';
  }
}

}  // namespace chromoseg
