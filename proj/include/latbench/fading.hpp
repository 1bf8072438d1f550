#pragma once

#include <complex>
#include <span>
#include <vector>

#include "latbench/rng.hpp"

namespace latbench::fading {

struct NakagamiParams {
  double m = 1.0;  // shape; m = 1 is Rayleigh, 0 < m < 0.5 allowed
  int n = 1;       // independent fading blocks per symbol

  void validate() const;  // throws config_error
  bool operator==(const NakagamiParams&) const = default;
};

/// One channel realization: power gains and their amplitudes.
struct FadingDraw {
  std::vector<double> gamma;  // gamma[i] = h[i]^2, strictly positive
  std::vector<double> h;
};

/// Gamma(shape, rate) variate via Marsaglia-Tsang squeeze/rejection, valid
/// for every shape > 0 (shape < 1 goes through Gamma(shape+1) and a uniform
/// power).
double gamma_variate(Rng& rng, double shape, double rate);

/// Draws n iid unit-mean power gains with pdf m^m x^(m-1) e^(-mx) / Gamma(m).
FadingDraw sample_gains(const NakagamiParams& params, Rng& rng);

double gain_pdf(double x, double m);
double gain_cdf(double x, double m);

/// Characteristic function G_zeta(f) = E[exp(-j 2 pi f zeta)] of
/// zeta = sum_n log gamma_n.  Per factor: m^(j2pif) Gamma(m - j2pif) / Gamma(m).
std::complex<double> zeta_cf(double f, const NakagamiParams& params);

struct ZetaGrid {
  double z_min = 0.0;
  double z_max = 0.0;
  int num_points = 0;  // power of two, >= 1024

  void validate() const;
};

/// Numerically tabulated pdf of zeta on a uniform grid.  Immutable; the
/// constructor enforces nonnegativity and unit trapezoidal mass.
class ZetaDensity {
 public:
  ZetaDensity(NakagamiParams params, double z_min, double dz,
              std::vector<double> values);

  const NakagamiParams& params() const noexcept { return params_; }
  double z_min() const noexcept { return z_min_; }
  double dz() const noexcept { return dz_; }
  int size() const noexcept { return static_cast<int>(values_.size()); }
  double z_at(int k) const noexcept { return z_min_ + k * dz_; }
  std::span<const double> values() const noexcept { return values_; }

  double trapezoid_mass() const;
  double mean() const;

 private:
  NakagamiParams params_;
  double z_min_;
  double dz_;
  std::vector<double> values_;
};

/// Automatic grid: centered at n(psi(m) - ln m) with half-width
/// max(12 sqrt(n psi'(m)), 20), 2^16 points.
ZetaGrid default_grid(const NakagamiParams& params, int num_points = 65536);

/// Tabulates p_zeta by inverting the characteristic function with an FFT.
/// The frequency band is chosen so |G_zeta| < 1e-14 at the cutoff; throws
/// numerical_error (with the captured mass) if the grid cannot hold it or
/// the renormalization drifts beyond 1e-6.
ZetaDensity zeta_density(const NakagamiParams& params, const ZetaGrid& grid);
ZetaDensity zeta_density(const NakagamiParams& params);

}  // namespace latbench::fading
