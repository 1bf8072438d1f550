#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "latbench/lattice.hpp"

namespace latbench::decoder {

struct DecodeResult {
  std::vector<int> u;              // lattice coordinates of the closest point
  double dist_sq = 0.0;            // ||y - M' u||^2
  std::uint64_t nodes_visited = 0; // candidate evaluations during the search
};

/// Exact ML closest-point search (Schnorr-Euchner enumeration with radius
/// shrinking).  A Decoder holds the QR factorization of one faded generator,
/// reused for every symbol of a frame, plus per-call scratch; use one
/// instance per worker thread.
class Decoder {
 public:
  Decoder() = default;

  /// Factors diag(h)*M.  Throws ill_conditioned_error when the diagonal-R
  /// condition estimate exceeds 1e12.
  void set_generator(const lattice::FadedGenerator& gen);

  int dim() const noexcept { return n_; }
  double condition_estimate() const noexcept { return cond_; }

  /// argmin over Z^N; deterministic lexicographic tie-break.
  void closest_point(std::span<const double> y, DecodeResult& out);

  /// argmin over [lo, hi]^N; equals closest_point whenever that optimum
  /// already lies inside the box.
  void closest_point_boxed(std::span<const double> y, int lo, int hi,
                           DecodeResult& out);

  /// Babai successive nearest-plane point (the search's first leaf).
  void babai_point(std::span<const double> y, DecodeResult& out);

 private:
  void search(std::span<const double> y, bool boxed, int lo, int hi,
              DecodeResult& out);

  int n_ = 0;
  double cond_ = 0.0;
  std::vector<double> r_;    // row-major upper triangular, positive diagonal
  std::vector<double> qt_;   // row-major Q^T
  // scratch
  std::vector<double> qty_, dist_, ycache_;
  std::vector<int> u_, step_;
  std::vector<unsigned char> lo_done_, hi_done_;
};

DecodeResult closest_point(const lattice::FadedGenerator& gen,
                           std::span<const double> y);
DecodeResult closest_point_boxed(const lattice::FadedGenerator& gen,
                                 std::span<const double> y, int lo, int hi);

}  // namespace latbench::decoder
