#ifndef CHROMOSEG_CLI_HPP
#define CHROMOSEG_CLI_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chromoseg/emissions.hpp"
#include "chromoseg/hmm.hpp"
#include "chromoseg/reference.hpp"
#include "chromoseg/simulation.hpp"
#include "chromoseg/snp_data.hpp"

namespace chromoseg {

inline constexpr std::string_view kVersion = "0.1.0";

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command : unsigned char { Segment, Simulate, Bench, TrainRef };

struct RunConfig {
  Command command = Command::Segment;
  std::string out;
  std::uint64_t seed = 1;

  // segment
  ModelKind model = ModelKind::Joint;
  bool ice = false;
  std::string input;
  std::string reference_path;
  std::optional<double> cn_sigma;  // absent: robust estimate from the input
  GenotypeEmissionParams genotype;
  double density_floor = kDefaultDensityFloor;
  double distance_scale = 1e8;
  double theta_rate = 2.0;
  std::optional<std::vector<double>> initial_probs;
  EmOptions em;

  // simulate, bench, train-ref
  SimConfig sim;
  SweepConfig sweep;
  bool synthetic = false;

  // Loaded during validation.
  std::vector<SnpTrack> tracks;
  std::vector<LabeledScore> training;
  std::shared_ptr<const ReferenceModel> reference;

  // Effective settings recorded in output headers (paths of outputs excluded).
  std::map<std::string, std::string> resolved;
};

// args[0] is the subcommand. Flags are `--key value` (bare `--ice` and
// `--synthetic` mean true); `--config file` reads flat `key = value` lines
// first and flags override them. Throws ConfigError.
RunConfig parse_config(std::span<const std::string> args);

// Parses one config file's text into key/value pairs.
std::map<std::string, std::string> parse_config_text(std::string_view text);

// Runs the subcommand; outputs appear only if every file was written.
void dispatch(const RunConfig& config, std::ostream& log);

// Entry point: returns the process exit status, printing one diagnostic line
// to `err` on failure.
int run_cli(std::span<const std::string> args, std::ostream& log, std::ostream& err);

std::string header_line(const RunConfig& config);

}  // namespace chromoseg

#endif
