#ifndef CHROMOSEG_BENCH_HPP
#define CHROMOSEG_BENCH_HPP

#include <cstddef>
#include <ostream>
#include <string_view>
#include <vector>

#include "chromoseg/simulation.hpp"

namespace chromoseg {

struct DeltaRow {
  bool ice = false;
  double k = 0.0;
  int size = 0;
  std::size_t replicate = 0;
  double delta = 0.0;
};

struct FalsePositiveRow {
  bool ice = false;
  std::size_t arm = 0;
  std::size_t spurious_segments = 0;  // non-normal segments on an all-normal arm
  std::size_t spurious_snps = 0;
};

struct BenchResult {
  std::vector<DeltaRow> deltas;            // K, size, replicate; vanilla before ice
  std::vector<FalsePositiveRow> false_positives;  // arm; vanilla before ice
};

// Worker count: hardware concurrency, capped by CHROMOSEG_THREADS when set.
std::size_t worker_count();

// Datasets run in parallel; rows are stored by dataset index, so output order
// does not depend on scheduling.
BenchResult run_bench(const SweepConfig& config, std::size_t threads = worker_count());

std::string_view method_name(bool ice);
void write_delta_csv(std::ostream& out, const BenchResult& result);
void write_false_positive_csv(std::ostream& out, const BenchResult& result);

}  // namespace chromoseg

#endif
