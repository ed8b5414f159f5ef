#include "chromoseg/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "chromoseg/numeric.hpp"

namespace chromoseg {

std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CHROMOSEG_THREADS")) {
    const auto cap = parse_integer(env);
    if (cap && *cap >= 1) n = std::min(n, static_cast<std::size_t>(*cap));
  }
  return n;
}

namespace {

// Job i must write only its own output slot. The first exception is rethrown.
template <class Job>
void parallel_for(std::size_t tasks, std::size_t threads, Job job) {
  threads = std::max<std::size_t>(1, std::min(threads, tasks));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks; i = next++) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = tasks;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

BenchResult run_bench(const SweepConfig& config, std::size_t threads) {
  config.validate();
  BenchResult result;
  const std::size_t per_k = config.sizes.size() * config.datasets_per_size;
  const std::size_t datasets = config.k_values.size() * per_k;
  result.deltas.resize(2 * datasets);
  parallel_for(datasets, threads, [&](std::size_t i) {
    const std::size_t k = i / per_k;
    const std::size_t size_index = (i % per_k) / config.datasets_per_size;
    const std::size_t rep = i % config.datasets_per_size;
    const auto d = make_sweep_dataset(config, k, config.sizes[size_index], rep);
    for (int ice = 0; ice < 2; ++ice) {
      const double delta = deletion_delta_loglik(sweep_model(d.sigma_hat, ice != 0), d.track, d.window);
      result.deltas[2 * i + static_cast<std::size_t>(ice)] = {ice != 0, d.k, d.size, rep, delta};
    }
  });

  result.false_positives.resize(2 * config.null_arms);
  parallel_for(config.null_arms, threads, [&](std::size_t a) {
    const auto arm = make_null_arm(config, a);
    for (int ice = 0; ice < 2; ++ice) {
      const HmmModel model = sweep_model(arm.sigma_hat, ice != 0);
      const auto decoded = viterbi(model, arm.track);
      FalsePositiveRow row{ice != 0, a, 0, 0};
      for (const auto& seg : path_to_segments(arm.track, decoded.path)) {
        if (seg.state == model.space.normal_state()) continue;
        ++row.spurious_segments;
        row.spurious_snps += seg.n_snps;
      }
      result.false_positives[2 * a + static_cast<std::size_t>(ice)] = row;
    }
  });
  return result;
}

std::string_view method_name(bool ice) { return ice ? "ice" : "vanilla"; }

void write_delta_csv(std::ostream& out, const BenchResult& result) {
  out << "method,K,size,replicate,delta\n";
  for (const auto& r : result.deltas)
    out << method_name(r.ice) << ',' << format_double(r.k) << ',' << r.size << ',' << r.replicate << ','
        << format_double(r.delta) << '\n';
}

void write_false_positive_csv(std::ostream& out, const BenchResult& result) {
  out << "method,arm,spurious_segments,spurious_snps\n";
  for (const auto& r : result.false_positives)
    out << method_name(r.ice) << ',' << r.arm << ',' << r.spurious_segments << ',' << r.spurious_snps << '\n';
}

}  // namespace chromoseg
