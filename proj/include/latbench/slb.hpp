#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "latbench/fading.hpp"
#include "latbench/rng.hpp"

namespace latbench::slb {

struct SlbConfig {
  fading::NakagamiParams params;
  int frame_symbols = 1;        // L, symbols per frame
  std::vector<double> rho_db;   // strictly increasing SNR grid, dB

  void validate() const;
};

/// One point of a probability-vs-SNR curve.  std_err is 0 exactly when the
/// value came from deterministic quadrature.
struct CurvePoint {
  double rho_db = 0.0;
  double value = 0.0;
  double std_err = 0.0;
  std::int64_t n_frames = 0;
  std::int64_t n_errors = 0;
};

/// R(h)^2 = Gamma(N/2+1)^(2/N) (prod gamma_n)^(1/N) / pi  (sphere of the same
/// volume as the faded Voronoi region, unit-volume lattice).
double sphere_radius_sq(std::span<const double> gamma);

/// Probability that white noise of variance 1/rho leaves the sphere:
/// Q(N/2, r_sq * rho / 2).
double conditional_escape_prob(double r_sq, double rho, int n);

/// Sphere lower bound on the frame error probability, evaluated by trapezoid
/// quadrature over the tabulated zeta density.  Every point passes a
/// half-resolution self-check (|delta| < 1e-7) or the call throws.
std::vector<CurvePoint> slb_curve(const SlbConfig& config,
                                  const fading::ZetaDensity& density);

/// Monte Carlo estimate of the same expectation, sharing one set of fading
/// draws across the whole SNR grid.  Bit-identical for a fixed rng state
/// regardless of worker count.
std::vector<CurvePoint> slb_monte_carlo(const SlbConfig& config,
                                        std::int64_t n_samples, Rng& rng,
                                        int n_workers = 0);

struct SlopeWindow {
  double p_low = 1e-6;
  double p_high = 1e-4;
};

/// Least-squares slope of -log10(value) against log10(rho) over the points
/// whose value lies inside the window; the diversity estimate.
double diversity_slope(std::span<const CurvePoint> points,
                       const SlopeWindow& window);

}  // namespace latbench::slb
