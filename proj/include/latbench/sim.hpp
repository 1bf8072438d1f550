#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "latbench/fading.hpp"
#include "latbench/lattice.hpp"

namespace latbench::sim {

struct Constellation {
  enum class Kind { infinite, pam };
  Kind kind = Kind::infinite;
  int pam_m = 0;  // points per dimension when kind == pam; any M >= 2

  static Constellation infinite() { return {Kind::infinite, 0}; }
  static Constellation pam(int m) { return {Kind::pam, m}; }
};

/// Where the rotation matrix comes from.  haar_fresh redraws it every frame
/// (the random-rotation ensemble); haar_fixed draws one matrix from the given
/// seed and keeps it.
struct RotationSpec {
  enum class Kind { builtin, file, identity, haar_fresh, haar_fixed };
  Kind kind = Kind::builtin;
  std::string name_or_path = "cyclo2";
  std::uint64_t haar_seed = 0;

  /// Accepts "cyclo2" | "krus4" | "cyclo8" | "identity" | "haar" |
  /// "haar-fixed:SEED" | "file:PATH".
  static RotationSpec parse(const std::string& text);
  std::string to_string() const;
};

struct StoppingRule {
  std::int64_t min_frame_errors = 100;
  std::int64_t max_frames = 100000000;
};

struct SimConfig {
  fading::NakagamiParams params;
  int frame_symbols = 1;  // L
  std::vector<double> rho_db;
  Constellation constellation;
  RotationSpec rotation;
  std::uint64_t seed = 1;
  StoppingRule stopping;
  int n_workers = 0;  // 0 = LATBENCH_THREADS env or hardware concurrency

  void validate() const;
};

struct FerPoint {
  double rho_db = 0.0;
  double fer = 0.0;
  double std_err = 0.0;
  std::int64_t n_frames = 0;
  std::int64_t n_frame_errors = 0;
  std::int64_t n_erasures = 0;  // frames skipped for ill-conditioned generators
  double mean_nodes = 0.0;      // decoder candidate evaluations per decoded symbol
  double seconds = 0.0;
};

/// Frame-error-rate estimate per SNR grid point.  The stream for frame f of
/// grid point i is derived from (seed, i, f); counters are bit-identical for
/// any worker count.  Each grid point stops once min_frame_errors is reached
/// (checked at chunk granularity) or max_frames is exhausted.
std::vector<FerPoint> simulate_fer(const SimConfig& config);

/// Same harness with a fresh Haar rotation per frame; requires
/// rotation.kind == haar_fresh.
std::vector<FerPoint> simulate_haar_ensemble(const SimConfig& config);

/// Reporting shift from the lattice-normalized SNR axis to Eb/N0 for an
/// M-PAM carving: 10 log10((M^2 - 1) / (24 log2 M)) dB.
double ebn0_shift_db(int pam_m);

int default_worker_count();

}  // namespace latbench::sim
