#include "latbench/fading.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>

#include "latbench/errors.hpp"
#include "latbench/specfun.hpp"

namespace latbench::fading {

namespace {

constexpr double kTwoPi = 6.28318530717958647692528676655900577;

bool is_pow2(int x) { return x > 0 && (x & (x - 1)) == 0; }

double trapezoid(std::span<const double> v, double dz) {
  if (v.size() < 2) return 0.0;
  double s = 0.5 * (v.front() + v.back());
  for (std::size_t k = 1; k + 1 < v.size(); ++k) s += v[k];
  return s * dz;
}

}  // namespace

void NakagamiParams::validate() const {
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw config_error("NakagamiParams: m must be positive and finite");
  }
  if (n < 1) {
    throw config_error("NakagamiParams: n must be >= 1");
  }
}

void ZetaGrid::validate() const {
  if (!(z_max > z_min) || !std::isfinite(z_min) || !std::isfinite(z_max)) {
    throw config_error("ZetaGrid: need z_max > z_min");
  }
  if (!is_pow2(num_points) || num_points < 1024) {
    throw config_error("ZetaGrid: num_points must be a power of two >= 1024");
  }
}

double gamma_variate(Rng& rng, double shape, double rate) {
  if (shape < 1.0) {
    // Gamma(shape) = Gamma(shape+1) * U^(1/shape)
    for (;;) {
      double boost = std::pow(rng.uniform01(), 1.0 / shape);
      double g = gamma_variate(rng, shape + 1.0, rate) * boost;
      if (g > 0.0) return g;  // redraw on underflow for extreme shapes
    }
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / (3.0 * std::sqrt(d));
  for (;;) {
    double x = rng.normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    double u = rng.uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

FadingDraw sample_gains(const NakagamiParams& params, Rng& rng) {
  params.validate();
  FadingDraw draw;
  draw.gamma.resize(params.n);
  draw.h.resize(params.n);
  for (int i = 0; i < params.n; ++i) {
    double g = gamma_variate(rng, params.m, params.m);
    draw.gamma[i] = g;
    draw.h[i] = std::sqrt(g);
  }
  return draw;
}

double gain_pdf(double x, double m) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("gain_pdf: x must be positive");
  }
  if (!(m > 0.0)) throw std::domain_error("gain_pdf: m must be positive");
  return std::exp(m * std::log(m) + (m - 1.0) * std::log(x) - m * x -
                  specfun::log_gamma(m));
}

double gain_cdf(double x, double m) {
  if (x < 0.0 || !std::isfinite(x)) {
    throw std::domain_error("gain_cdf: x must be nonnegative");
  }
  if (!(m > 0.0)) throw std::domain_error("gain_cdf: m must be positive");
  return 1.0 - specfun::reg_upper_gamma(m, m * x);
}

std::complex<double> zeta_cf(double f, const NakagamiParams& params) {
  params.validate();
  const double t = kTwoPi * f;
  // per factor: exp(j t ln m + lnGamma(m - j t) - lnGamma(m)); N-th power in
  // the exponent keeps large n away from under/overflow
  std::complex<double> log_factor =
      std::complex<double>(0.0, t * std::log(params.m)) +
      specfun::log_gamma(std::complex<double>(params.m, -t)) -
      specfun::log_gamma(params.m);
  return std::exp(static_cast<double>(params.n) * log_factor);
}

ZetaGrid default_grid(const NakagamiParams& params, int num_points) {
  params.validate();
  const double center =
      params.n * (specfun::digamma(params.m) - std::log(params.m));
  const double half =
      std::max(12.0 * std::sqrt(params.n * specfun::trigamma(params.m)), 20.0);
  return ZetaGrid{center - half, center + half, num_points};
}

ZetaDensity::ZetaDensity(NakagamiParams params, double z_min, double dz,
                         std::vector<double> values)
    : params_(params), z_min_(z_min), dz_(dz), values_(std::move(values)) {
  params_.validate();
  if (!(dz_ > 0.0) || values_.size() < 2) {
    throw config_error("ZetaDensity: need positive dz and at least 2 samples");
  }
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw numerical_error("ZetaDensity: negative or non-finite pdf sample");
    }
  }
  double mass = trapezoid_mass();
  if (std::fabs(mass - 1.0) > 1e-6) {
    std::ostringstream os;
    os << "ZetaDensity: trapezoidal mass " << mass << " outside 1 +- 1e-6";
    throw numerical_error(os.str());
  }
}

double ZetaDensity::trapezoid_mass() const { return trapezoid(values_, dz_); }

double ZetaDensity::mean() const {
  double s = 0.0;
  for (int k = 0; k < size(); ++k) {
    double w = (k == 0 || k == size() - 1) ? 0.5 : 1.0;
    s += w * z_at(k) * values_[static_cast<std::size_t>(k)];
  }
  return s * dz_;
}

ZetaDensity zeta_density(const NakagamiParams& params, const ZetaGrid& grid) {
  params.validate();
  grid.validate();

  const int K = grid.num_points;
  const double width = grid.z_max - grid.z_min;
  const double dz = width / K;
  const double df = 1.0 / width;

  // frequency cutoff: |G_zeta| decays super-exponentially, double until tiny
  double f_cut = 1.0;
  while (std::abs(zeta_cf(f_cut, params)) >= 1e-14) {
    f_cut *= 2.0;
    if (f_cut > 1e9) throw numerical_error("zeta_density: CF cutoff search failed");
  }
  const double f_max = 0.5 * K * df;
  if (f_max < f_cut) {
    std::ostringstream os;
    os << "zeta_density: grid too coarse; FFT band +-" << f_max
       << " does not reach the CF cutoff " << f_cut
       << " (increase num_points or shrink the z-range)";
    throw numerical_error(os.str());
  }

  // H[j] = G(f_j) exp(j 2 pi f_j z_min), f_j on the standard FFT layout; the
  // unnormalized backward transform then gives p(z_k) / df.
  std::vector<std::complex<double>> h(static_cast<std::size_t>(K));
  for (int j = 0; j < K; ++j) {
    double f = (j <= K / 2 ? j : j - K) * df;
    std::complex<double> g =
        std::abs(f) <= f_cut ? zeta_cf(f, params) : std::complex<double>(0.0);
    h[static_cast<std::size_t>(j)] =
        g * std::polar(1.0, kTwoPi * f * grid.z_min);
  }

  std::vector<std::complex<double>> out(static_cast<std::size_t>(K));
  {
    // FFTW planning is not thread-safe; execution is.
    static std::mutex plan_mutex;
    std::unique_lock lock(plan_mutex);
    fftw_plan plan = fftw_plan_dft_1d(
        K, reinterpret_cast<fftw_complex*>(h.data()),
        reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD, FFTW_ESTIMATE);
    lock.unlock();
    fftw_execute(plan);
    lock.lock();
    fftw_destroy_plan(plan);
  }

  std::vector<double> values(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    values[static_cast<std::size_t>(k)] =
        std::max(out[static_cast<std::size_t>(k)].real() * df, 0.0);
  }

  double mass = trapezoid(values, dz);
  if (std::fabs(mass - 1.0) > 1e-6) {
    std::ostringstream os;
    os << "zeta_density: captured mass " << mass
       << " deviates from 1 by more than 1e-6; widen the z-range";
    throw numerical_error(os.str());
  }
  for (double& v : values) v /= mass;

  return ZetaDensity(params, grid.z_min, dz, std::move(values));
}

ZetaDensity zeta_density(const NakagamiParams& params) {
  return zeta_density(params, default_grid(params));
}

}  // namespace latbench::fading
