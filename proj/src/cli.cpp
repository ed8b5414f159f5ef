#include "chromoseg/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "chromoseg/bench.hpp"
#include "chromoseg/numeric.hpp"
#include "chromoseg/segmentation.hpp"

namespace chromoseg {

namespace fs = std::filesystem;

namespace {

const std::set<std::string> kCommonKeys{"config", "out", "seed"};
const std::map<Command, std::set<std::string>> kCommandKeys{
    {Command::Segment,
     {"model", "ice", "input", "ref", "cn_sigma", "p_hom_loss", "p_hom_ret", "density_floor",
      "distance_scale_bp", "theta_rate", "initial_probs", "em_learn", "em_max_iter", "em_tol"}},
    {Command::Simulate, {"n_snps", "epsilon", "p_hom", "ref"}},
    {Command::Bench,
     {"datasets_per_size", "sizes", "k_values", "null_arms", "null_k", "background_sd"}},
    {Command::TrainRef, {"input", "synthetic"}},
};
const std::set<std::string> kBoolKeys{"ice", "synthetic"};

Command parse_command(std::string_view name) {
  if (name == "segment") return Command::Segment;
  if (name == "simulate") return Command::Simulate;
  if (name == "bench") return Command::Bench;
  if (name == "train-ref") return Command::TrainRef;
  throw ConfigError("unknown subcommand '" + std::string(name) + "' (expected segment, simulate, bench or train-ref)");
}

std::string_view command_name(Command c) {
  switch (c) {
    case Command::Segment: return "segment";
    case Command::Simulate: return "simulate";
    case Command::Bench: return "bench";
    case Command::TrainRef: return "train-ref";
  }
  return "segment";
}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double number(const std::string& key, const std::string& value) {
  const auto v = parse_double(value);
  if (!v || !std::isfinite(*v)) throw ConfigError(key + ": '" + value + "' is not a number");
  return *v;
}

long long integer(const std::string& key, const std::string& value, long long min) {
  const auto v = parse_integer(value);
  if (!v) throw ConfigError(key + ": '" + value + "' is not an integer");
  if (*v < min) throw ConfigError(key + ": must be at least " + std::to_string(min));
  return *v;
}

bool boolean(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(key + ": '" + value + "' is not a boolean");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> number_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& item : split_list(value)) out.push_back(number(key, item));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

void apply_segment(RunConfig& rc, const std::map<std::string, std::string>& kv) {
  auto get = [&](const std::string& k) -> const std::string* {
    auto it = kv.find(k);
    return it == kv.end() ? nullptr : &it->second;
  };
  if (auto v = get("model")) {
    try {
      rc.model = parse_model_kind(*v);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("model: ") + e.what());
    }
  }
  if (auto v = get("ice")) rc.ice = boolean("ice", *v);
  if (auto v = get("input")) rc.input = *v;
  if (auto v = get("ref")) rc.reference_path = *v;
  if (auto v = get("cn_sigma"); v && *v != "robust") rc.cn_sigma = number("cn_sigma", *v);
  if (auto v = get("p_hom_loss")) rc.genotype.p_hom_loss = number("p_hom_loss", *v);
  if (auto v = get("p_hom_ret")) rc.genotype.p_hom_ret = number("p_hom_ret", *v);
  if (auto v = get("density_floor")) rc.density_floor = number("density_floor", *v);
  if (auto v = get("distance_scale_bp")) rc.distance_scale = number("distance_scale_bp", *v);
  if (auto v = get("theta_rate")) rc.theta_rate = number("theta_rate", *v);
  if (auto v = get("initial_probs")) rc.initial_probs = number_list("initial_probs", *v);
  if (auto v = get("em_max_iter")) rc.em.max_iter = static_cast<std::size_t>(integer("em_max_iter", *v, 0));
  if (auto v = get("em_tol")) rc.em.tol = number("em_tol", *v);
  if (auto v = get("em_learn")) {
    for (const auto& item : split_list(*v)) {
      if (item == "initial") rc.em.learn.initial = true;
      else if (item == "p_hom_loss") rc.em.learn.p_hom_loss = true;
      else if (item == "p_hom_ret") rc.em.learn.p_hom_ret = true;
      else if (item == "cn_sigma") rc.em.learn.cn_sigma = true;
      else if (item == "cn_means") rc.em.learn.cn_means = true;
      else throw ConfigError("em_learn: unknown parameter '" + item + "'");
    }
  }

  if (rc.input.empty()) throw ConfigError("segment: --input is required");
  try {
    rc.tracks = read_snp_table(rc.input);
  } catch (const ParseError& e) {
    throw ConfigError(rc.input + ": " + e.what());
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (rc.tracks.empty()) throw ConfigError(rc.input + ": no SNPs");

  const auto space = StateSpace::of(rc.model);
  const bool any_gt = std::any_of(rc.tracks.begin(), rc.tracks.end(), [](const SnpTrack& t) { return t.has_genotypes(); });
  const bool any_cn = std::any_of(rc.tracks.begin(), rc.tracks.end(), [](const SnpTrack& t) { return t.has_copy_number(); });
  const bool any_scores = std::any_of(rc.tracks.begin(), rc.tracks.end(), [](const SnpTrack& t) { return t.has_genotype_scores(); });
  if (space.uses_genotype() && !any_gt)
    throw ConfigError("model " + std::string(model_kind_name(rc.model)) + " needs genotype calls but the input has none");
  if (space.uses_copy_number() && !any_cn)
    throw ConfigError("model " + std::string(model_kind_name(rc.model)) + " needs copy numbers but the input has none");
  if (rc.ice && space.uses_genotype() && any_scores && rc.reference_path.empty())
    throw ConfigError("--ice with genotype confidence scores in the input needs --ref");
  if (!rc.reference_path.empty()) {
    try {
      rc.reference = std::make_shared<const ReferenceModel>(read_reference(rc.reference_path));
    } catch (const std::exception& e) {
      throw ConfigError(rc.reference_path + ": " + e.what());
    }
  }
  if (rc.initial_probs && rc.initial_probs->size() != space.size())
    throw ConfigError("initial_probs: expected " + std::to_string(space.size()) + " values for model " +
                      std::string(model_kind_name(rc.model)));

  rc.resolved["model"] = model_kind_name(rc.model);
  rc.resolved["ice"] = rc.ice ? "true" : "false";
  rc.resolved["input"] = rc.input;
  rc.resolved["ref"] = rc.reference_path.empty() ? "none" : rc.reference_path;
  rc.resolved["cn_sigma"] = rc.cn_sigma ? format_double(*rc.cn_sigma) : "robust";
  rc.resolved["p_hom_loss"] = format_double(rc.genotype.p_hom_loss);
  rc.resolved["p_hom_ret"] = format_double(rc.genotype.p_hom_ret);
  rc.resolved["density_floor"] = format_double(rc.density_floor);
  rc.resolved["distance_scale_bp"] = format_double(rc.distance_scale);
  rc.resolved["theta_rate"] = format_double(rc.theta_rate);
  rc.resolved["initial_probs"] = rc.initial_probs ? join(*rc.initial_probs) : "default";
  std::string learn;
  for (auto [flag, name] : {std::pair{rc.em.learn.initial, "initial"}, {rc.em.learn.p_hom_loss, "p_hom_loss"},
                            {rc.em.learn.p_hom_ret, "p_hom_ret"}, {rc.em.learn.cn_sigma, "cn_sigma"},
                            {rc.em.learn.cn_means, "cn_means"}})
    if (flag) learn += (learn.empty() ? "" : ",") + std::string(name);
  rc.resolved["em_learn"] = learn.empty() ? "none" : learn;
  rc.resolved["em_max_iter"] = std::to_string(rc.em.max_iter);
  rc.resolved["em_tol"] = format_double(rc.em.tol);
}

void apply_simulate(RunConfig& rc, const std::map<std::string, std::string>& kv) {
  rc.sim.seed = rc.seed;
  if (auto it = kv.find("n_snps"); it != kv.end()) rc.sim.n_snps = static_cast<std::size_t>(integer("n_snps", it->second, 1));
  if (auto it = kv.find("epsilon"); it != kv.end()) rc.sim.epsilon = number("epsilon", it->second);
  if (auto it = kv.find("p_hom"); it != kv.end()) rc.sim.background_p_hom = number("p_hom", it->second);
  if (auto it = kv.find("ref"); it != kv.end()) {
    rc.reference_path = it->second;
    try {
      rc.reference = std::make_shared<const ReferenceModel>(read_reference(rc.reference_path));
    } catch (const std::exception& e) {
      throw ConfigError(rc.reference_path + ": " + e.what());
    }
    rc.sim.reference = rc.reference;
  }
  try {
    rc.sim.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  rc.resolved["n_snps"] = std::to_string(rc.sim.n_snps);
  rc.resolved["epsilon"] = format_double(rc.sim.epsilon);
  rc.resolved["p_hom"] = format_double(rc.sim.background_p_hom);
  rc.resolved["ref"] = rc.reference_path.empty() ? "synthetic" : rc.reference_path;
}

void apply_bench(RunConfig& rc, const std::map<std::string, std::string>& kv) {
  auto& s = rc.sweep;
  s.seed = rc.seed;
  if (auto it = kv.find("datasets_per_size"); it != kv.end())
    s.datasets_per_size = static_cast<std::size_t>(integer("datasets_per_size", it->second, 1));
  if (auto it = kv.find("sizes"); it != kv.end()) {
    s.sizes.clear();
    for (const auto& item : split_list(it->second)) s.sizes.push_back(static_cast<int>(integer("sizes", item, 0)));
    if (s.sizes.empty()) throw ConfigError("sizes: empty list");
  }
  if (auto it = kv.find("k_values"); it != kv.end()) s.k_values = number_list("k_values", it->second);
  if (auto it = kv.find("null_arms"); it != kv.end()) s.null_arms = static_cast<std::size_t>(integer("null_arms", it->second, 0));
  if (auto it = kv.find("null_k"); it != kv.end()) s.null_k = number("null_k", it->second);
  if (auto it = kv.find("background_sd"); it != kv.end()) s.background_sd = number("background_sd", it->second);
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::string sizes;
  for (std::size_t i = 0; i < s.sizes.size(); ++i) sizes += (i ? "," : "") + std::to_string(s.sizes[i]);
  rc.resolved["datasets_per_size"] = std::to_string(s.datasets_per_size);
  rc.resolved["sizes"] = sizes;
  rc.resolved["k_values"] = join(s.k_values);
  rc.resolved["null_arms"] = std::to_string(s.null_arms);
  rc.resolved["null_k"] = format_double(s.null_k);
  rc.resolved["background_sd"] = format_double(s.background_sd);
}

void apply_train(RunConfig& rc, const std::map<std::string, std::string>& kv) {
  if (auto it = kv.find("synthetic"); it != kv.end()) rc.synthetic = boolean("synthetic", it->second);
  if (auto it = kv.find("input"); it != kv.end()) rc.input = it->second;
  if (rc.synthetic == !rc.input.empty())
    throw ConfigError("train-ref: give exactly one of --input and --synthetic");
  if (!rc.input.empty()) {
    std::ifstream in(rc.input);
    if (!in) throw ConfigError("cannot read '" + rc.input + "'");
    try {
      rc.training = parse_training_table(in);
    } catch (const std::exception& e) {
      throw ConfigError(rc.input + ": " + e.what());
    }
  }
  rc.resolved["input"] = rc.input.empty() ? "none" : rc.input;
  rc.resolved["synthetic"] = rc.synthetic ? "true" : "false";
}

// Output files are written under temporary names and renamed together once
// all of them are complete; anything left over is removed.
class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;
  ~OutputSet() {
    std::error_code ec;
    for (const auto& f : files_) fs::remove(temp(f), ec);
    if (!committed_)
      for (const auto& f : renamed_) fs::remove(dir_ / f, ec);
  }

  std::ofstream open(const std::string& name) {
    files_.push_back(name);
    std::ofstream out(temp(name), std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + temp(name).string() + "'");
    return out;
  }

  static void close(std::ofstream& out, const std::string& name) {
    out.close();
    if (!out) throw std::runtime_error("failed writing '" + name + "'");
  }

  void commit() {
    for (const auto& f : files_) {
      fs::rename(temp(f), dir_ / f);
      renamed_.push_back(f);
    }
    committed_ = true;
  }

 private:
  fs::path temp(const std::string& name) const { return dir_ / ("." + name + ".partial"); }
  fs::path dir_;
  std::vector<std::string> files_;
  std::vector<std::string> renamed_;
  bool committed_ = false;
};

HmmModel segment_model(const RunConfig& rc, double sigma) {
  HmmModel m = HmmModel::make(rc.model);
  if (rc.initial_probs) m.transition.initial = *rc.initial_probs;
  m.transition.distance_scale = rc.distance_scale;
  m.transition.theta_rate = rc.theta_rate;
  m.genotype = rc.genotype;
  m.copy_number.sigma = sigma;
  m.reference = rc.reference;
  m.ice = rc.ice;
  m.density_floor = rc.density_floor;
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return m;
}

void run_segment(const RunConfig& rc, std::ostream& log) {
  double sigma = 0.25;
  const auto space = StateSpace::of(rc.model);
  if (space.uses_copy_number()) {
    if (rc.cn_sigma) {
      sigma = *rc.cn_sigma;
    } else {
      std::vector<double> values;
      for (const auto& t : rc.tracks) {
        if (!is_autosome(t.chromosome())) continue;
        for (const auto& o : t.observations())
          if (o.cn_log2) values.push_back(*o.cn_log2);
      }
      if (values.size() < 10)
        for (const auto& t : rc.tracks)
          for (const auto& o : t.observations())
            if (o.cn_log2) values.push_back(*o.cn_log2);
      sigma = robust_sigma(values);
    }
  }
  HmmModel model = segment_model(rc, sigma);
  std::vector<double> trace;
  bool em_constrained = false;
  if (rc.em.learn.any()) {
    log << "chromoseg: segment: fitting EM over " << rc.tracks.size() << " track(s)\n";
    auto fit = em_fit(model, rc.tracks, rc.em);
    model = fit.model;
    trace = fit.trace;
    em_constrained = fit.stopped_at_constraint;
  }

  log << "chromoseg: segment: decoding " << rc.tracks.size() << " track(s)\n";
  OutputSet outputs(rc.out);
  auto seg_out = outputs.open("segments.tsv");
  auto snp_out = outputs.open("per_snp.tsv");
  const std::string header = header_line(rc);
  seg_out << header << '\n';
  snp_out << header << '\n';
  write_segments_header(seg_out);
  write_per_snp_header(snp_out, model.space);

  std::vector<std::pair<std::string, DecodeResult>> decoded;
  for (const auto& track : rc.tracks) {
    auto result = viterbi(model, track);
    const auto post = posterior_probs(model, track);
    write_segments(seg_out, model.space, path_to_segments(track, result.path));
    write_per_snp(snp_out, model.space, track, result.path, post);
    decoded.emplace_back(track.chromosome(), std::move(result));
  }
  OutputSet::close(seg_out, "segments.tsv");
  OutputSet::close(snp_out, "per_snp.tsv");

  auto summary = outputs.open("run_summary.tsv");
  summary << header << '\n' << "key\tvalue\n";
  summary << "model\t" << model_kind_name(rc.model) << '\n' << "ice\t" << (rc.ice ? "true" : "false") << '\n';
  if (space.uses_copy_number()) {
    summary << "cn_sigma\t" << format_double(model.copy_number.sigma) << '\n';
    for (std::size_t l = 0; l < 3; ++l)
      summary << "cn_mean_" << (l + 1) << "\t" << format_double(model.copy_number.means[l]) << '\n';
  }
  if (space.uses_genotype()) {
    summary << "p_hom_loss\t" << format_double(model.genotype.p_hom_loss) << '\n';
    summary << "p_hom_ret\t" << format_double(model.genotype.p_hom_ret) << '\n';
  }
  summary << "initial_probs\t" << join(model.transition.initial) << '\n';
  summary << "em_iterations\t" << (trace.empty() ? 0 : trace.size() - 1) << '\n';
  if (!trace.empty()) {
    summary << "em_final_loglik\t" << format_double(trace.back()) << '\n';
    summary << "em_stopped_at_constraint\t" << (em_constrained ? "true" : "false") << '\n';
  }
  double total = 0.0;
  for (const auto& [chrom, r] : decoded) {
    summary << "loglik_" << chrom << '\t' << format_double(r.total_loglik) << '\n';
    summary << "viterbi_loglik_" << chrom << '\t' << format_double(r.path_loglik) << '\n';
    total += r.total_loglik;
  }
  summary << "loglik_total\t" << format_double(total) << '\n';
  OutputSet::close(summary, "run_summary.tsv");
  outputs.commit();
}

void run_simulate(const RunConfig& rc, std::ostream& log) {
  log << "chromoseg: simulate: seed " << rc.sim.seed << ", " << rc.sim.n_snps << " SNPs\n";
  const auto sim = simulate_chr1(rc.sim);
  OutputSet outputs(rc.out);
  const std::string header = header_line(rc);
  auto data = outputs.open("simulated.tsv");
  data << header << '\n';
  write_snp_table(data, std::span<const SnpTrack>(&sim.track, 1));
  OutputSet::close(data, "simulated.tsv");
  auto truth = outputs.open("truth.tsv");
  truth << header << '\n';
  write_truth_table(truth, sim);
  OutputSet::close(truth, "truth.tsv");
  outputs.commit();
}

void run_bench_command(const RunConfig& rc, std::ostream& log) {
  const std::size_t threads = worker_count();
  log << "chromoseg: bench: " << rc.sweep.k_values.size() * rc.sweep.sizes.size() * rc.sweep.datasets_per_size
      << " sweep datasets, " << rc.sweep.null_arms << " null arms, " << threads << " thread(s)\n";
  const auto result = run_bench(rc.sweep, threads);
  OutputSet outputs(rc.out);
  const std::string header = header_line(rc);
  auto deltas = outputs.open("delta_loglik.csv");
  deltas << header << '\n';
  write_delta_csv(deltas, result);
  OutputSet::close(deltas, "delta_loglik.csv");
  auto fp = outputs.open("fp_counts.csv");
  fp << header << '\n';
  write_false_positive_csv(fp, result);
  OutputSet::close(fp, "fp_counts.csv");
  outputs.commit();
}

void run_train(const RunConfig& rc, std::ostream& log) {
  const ReferenceModel model =
      rc.synthetic ? synthetic_reference(default_synthetic_spec()) : train_reference(rc.training);
  log << "chromoseg: train-ref: " << (rc.synthetic ? "synthetic reference" : std::to_string(rc.training.size()) + " labelled scores") << '\n';
  OutputSet outputs(rc.out);
  auto out = outputs.open("reference.tsv");
  out << header_line(rc) << '\n';
  write_reference(out, model);
  OutputSet::close(out, "reference.tsv");
  outputs.commit();
}

}  // namespace

std::map<std::string, std::string> parse_config_text(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    const std::string line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = normalize_key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
    if (end == text.size()) break;
  }
  return kv;
}

RunConfig parse_config(std::span<const std::string> args) {
  if (args.empty()) throw ConfigError("missing subcommand (segment, simulate, bench or train-ref)");
  RunConfig rc;
  rc.command = parse_command(args[0]);

  std::map<std::string, std::string> flags;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.size() < 3 || a.rfind("--", 0) != 0) throw ConfigError("unexpected argument '" + a + "'");
    const std::string key = normalize_key(a.substr(2));
    const bool has_value = i + 1 < args.size() && args[i + 1].rfind("--", 0) != 0;
    if (kBoolKeys.count(key) && !has_value) {
      flags[key] = "true";
    } else {
      if (!has_value) throw ConfigError("--" + a.substr(2) + " needs a value");
      flags[key] = args[++i];
    }
  }

  std::map<std::string, std::string> kv;
  if (auto it = flags.find("config"); it != flags.end()) kv = parse_config_text(read_file(it->second));
  for (const auto& [k, v] : flags) kv[k] = v;

  const auto& allowed = kCommandKeys.at(rc.command);
  for (const auto& [k, v] : kv)
    if (!kCommonKeys.count(k) && !allowed.count(k))
      throw ConfigError("unknown key '" + k + "' for " + std::string(command_name(rc.command)));

  if (auto it = kv.find("out"); it != kv.end()) rc.out = it->second;
  if (rc.out.empty()) throw ConfigError("--out is required");
  if (auto it = kv.find("seed"); it != kv.end())
    rc.seed = static_cast<std::uint64_t>(integer("seed", it->second, 0));
  rc.resolved["seed"] = std::to_string(rc.seed);

  switch (rc.command) {
    case Command::Segment: apply_segment(rc, kv); break;
    case Command::Simulate: apply_simulate(rc, kv); break;
    case Command::Bench: apply_bench(rc, kv); break;
    case Command::TrainRef: apply_train(rc, kv); break;
  }
  return rc;
}

std::string header_line(const RunConfig& config) {
  std::string line = "# chromoseg " + std::string(kVersion) + " " + std::string(command_name(config.command));
  line += " seed=" + std::to_string(config.seed);
  for (const auto& [k, v] : config.resolved)
    if (k != "seed") line += " " + k + "=" + v;
  return line;
}

void dispatch(const RunConfig& config, std::ostream& log) {
  std::error_code ec;
  fs::create_directories(config.out, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + config.out + "': " + ec.message());
  switch (config.command) {
    case Command::Segment: run_segment(config, log); break;
    case Command::Simulate: run_simulate(config, log); break;
    case Command::Bench: run_bench_command(config, log); break;
    case Command::TrainRef: run_train(config, log); break;
  }
}

int run_cli(std::span<const std::string> args, std::ostream& log, std::ostream& err) {
  try {
    dispatch(parse_config(args), log);
    return 0;
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "chromoseg: error: " << msg << '\n';
    return 1;
  }
}

}  // namespace chromoseg
