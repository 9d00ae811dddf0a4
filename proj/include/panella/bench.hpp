#pragma once

// Size sweeps with a correctness gate, median timing and CSV output.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace panella::bench {

struct SweepRecord {
  std::string routine;
  std::string impl;  // hp, rf or naive
  int m = 0;
  int n = 0;
  int k = 0;
  int reps = 0;
  double seconds = 0.0;  // median time of one call
  double gflops = 0.0;
};

struct SweepOptions {
  std::string routine;
  std::string impl = "hp";
  std::vector<int> sizes;
  int reps = 10;
  int warmup = 2;
  std::uint64_t seed = 1;
  std::string dump_dir;  // empty: no fixture dump
  /// Calls are batched so that one timed sample lasts at least this long.
  double min_sample_seconds = 20e-6;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The output of the routine under test disagreed with the oracle.
class CorrectnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Floating-point operation count used for Gflops.  Unknown routine: 0.
///   gemm 2mnk, syrk m(m+1)k, trsm/trmm mn times the triangle order,
///   potrf m^3/3, getrf 2m^3/3, gelqf 2m^2n - 2m^3/3,
///   riccati (m = nx, n = nu, k = N): per stage the trmm and the fused
///   syrk + potrf on the (nu + nx) stacked factor.
double flop_count(std::string_view routine, int m, int n, int k);

std::vector<std::string> routines();
/// Implementations available for a routine (empty if unknown).
std::vector<std::string> impls(std::string_view routine);
/// min, min + step, ... <= max.  Throws UsageError on a bad grid.
std::vector<int> size_grid(int min, int max, int step);

/// One record per size.  Throws UsageError for an unsupported routine/impl
/// pair and CorrectnessError when the gate fails.
std::vector<SweepRecord> run_sweep(const SweepOptions& options);

/// Header plus one row per record, ordered by (routine, impl, m).
void emit_csv(std::vector<SweepRecord> records, std::ostream& out);
std::vector<SweepRecord> parse_csv(std::istream& in);

}  // namespace panella::bench
