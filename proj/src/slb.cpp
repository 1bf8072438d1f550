#include "latbench/slb.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "latbench/errors.hpp"
#include "latbench/specfun.hpp"

namespace latbench::slb {

namespace {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// 1 - (1 - p)^L, full relative precision at both ends
double frame_escape(double p, int l) {
  if (p >= 1.0) return 1.0;
  return -std::expm1(l * std::log1p(-p));
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

}  // namespace

void SlbConfig::validate() const {
  params.validate();
  if (frame_symbols < 1) throw config_error("SlbConfig: L must be >= 1");
  if (rho_db.empty()) throw config_error("SlbConfig: empty SNR grid");
  for (std::size_t i = 1; i < rho_db.size(); ++i) {
    if (!(rho_db[i] > rho_db[i - 1])) {
      throw config_error("SlbConfig: SNR grid must be strictly increasing");
    }
  }
}

double sphere_radius_sq(std::span<const double> gamma) {
  if (gamma.empty()) throw std::domain_error("sphere_radius_sq: empty gamma");
  const int n = static_cast<int>(gamma.size());
  double log_prod = 0.0;
  for (double g : gamma) {
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw std::domain_error("sphere_radius_sq: gains must be positive");
    }
    log_prod += std::log(g);
  }
  const double log_c = specfun::log_gamma(0.5 * n + 1.0) * (2.0 / n) -
                       std::log(3.14159265358979323846264338327950288);
  return std::exp(log_c + log_prod / n);
}

double conditional_escape_prob(double r_sq, double rho, int n) {
  if (!(r_sq > 0.0) || !(rho > 0.0)) {
    throw std::domain_error("conditional_escape_prob: r_sq and rho must be positive");
  }
  if (n < 1) throw std::domain_error("conditional_escape_prob: n must be >= 1");
  return specfun::reg_upper_gamma(0.5 * n, 0.5 * r_sq * rho);
}

std::vector<CurvePoint> slb_curve(const SlbConfig& config,
                                  const fading::ZetaDensity& density) {
  config.validate();
  if (!(density.params() == config.params)) {
    throw config_error("slb_curve: density was built for different parameters");
  }

  const int n = config.params.n;
  const int l = config.frame_symbols;
  const int k_total = density.size();
  const double half_a = 0.5 * n;
  // Eq. argument: (c/2) e^(z/N) rho with c = Gamma(N/2+1)^(2/N) / pi
  const double c_half =
      0.5 * std::exp(specfun::log_gamma(half_a + 1.0) * (2.0 / n) -
                     std::log(3.14159265358979323846264338327950288));

  std::span<const double> pdf = density.values();

  std::vector<CurvePoint> out;
  out.reserve(config.rho_db.size());
  std::vector<double> q(static_cast<std::size_t>(k_total));

  for (double rho_db : config.rho_db) {
    const double rho = db_to_linear(rho_db);

    double num_full = 0.0, den_full = 0.0;
    double num_half = 0.0, den_half = 0.0;
    for (int k = 0; k < k_total; ++k) {
      const double w_edge = (k == 0 || k == k_total - 1) ? 0.5 : 1.0;
      const double pk = pdf[static_cast<std::size_t>(k)];
      double qk = 0.0;
      if (pk > 0.0) {
        double scale = c_half * std::exp(density.z_at(k) / n) * rho;
        double esc = specfun::reg_upper_gamma(half_a, scale);
        qk = frame_escape(esc, l);
      }
      q[static_cast<std::size_t>(k)] = qk;
      num_full += w_edge * pk * qk;
      den_full += w_edge * pk;
      if (k % 2 == 0) {
        const double w2 = (k == 0 || k + 2 >= k_total) ? 0.5 : 1.0;
        num_half += w2 * pk * qk;
        den_half += w2 * pk;
      }
    }

    const double value = std::clamp(num_full / den_full, 0.0, 1.0);
    const double value_half = std::clamp(num_half / den_half, 0.0, 1.0);
    if (std::fabs(value - value_half) >= 1e-7) {
      std::ostringstream os;
      os << "slb_curve: quadrature self-check failed at rho_db=" << rho_db
         << " (full " << value << " vs coarse " << value_half
         << "); density grid too coarse";
      throw numerical_error(os.str());
    }

    // guard against values dominated by what the density grid cannot see:
    // probability mass beyond the left edge (~ pdf(z_min)/m for the e^{mz}
    // tail) plus the FFT roundoff floor of the tabulated pdf
    const double off_grid_mass = 2.0 * pdf[0] / config.params.m;
    if (value < 20.0 * off_grid_mass + 2e-12) {
      std::ostringstream os;
      os << "slb_curve: bound " << value << " at rho_db=" << rho_db
         << " is below the resolution of this density grid; widen the z-range";
      throw numerical_error(os.str());
    }

    out.push_back(CurvePoint{rho_db, value, 0.0, 0, 0});
  }
  return out;
}

std::vector<CurvePoint> slb_monte_carlo(const SlbConfig& config,
                                        std::int64_t n_samples, Rng& rng,
                                        int n_workers) {
  config.validate();
  if (n_samples < 10000) {
    throw config_error("slb_monte_carlo: need at least 1e4 samples");
  }

  const int n = config.params.n;
  const int l = config.frame_symbols;
  const std::size_t n_rho = config.rho_db.size();
  const double half_a = 0.5 * n;
  const double c_half =
      0.5 * std::exp(specfun::log_gamma(half_a + 1.0) * (2.0 / n) -
                     std::log(3.14159265358979323846264338327950288));

  std::vector<double> rho_lin(n_rho);
  for (std::size_t i = 0; i < n_rho; ++i) rho_lin[i] = db_to_linear(config.rho_db[i]);

  struct Chunk {
    std::vector<double> sum_q, sum_q2;
  };

  constexpr std::int64_t kChunk = 4096;
  const std::int64_t n_chunks = (n_samples + kChunk - 1) / kChunk;
  const std::uint64_t master = rng.next_u64();

  auto run_chunk = [&](std::int64_t ci) {
    Chunk chunk{std::vector<double>(n_rho, 0.0), std::vector<double>(n_rho, 0.0)};
    Rng stream = Rng::substream(master, static_cast<std::uint64_t>(ci));
    const std::int64_t begin = ci * kChunk;
    const std::int64_t end = std::min(begin + kChunk, n_samples);
    for (std::int64_t s = begin; s < end; ++s) {
      // one fading draw shared across the whole SNR grid (common random numbers)
      double log_prod = 0.0;
      for (int i = 0; i < n; ++i) {
        log_prod += std::log(fading::gamma_variate(stream, config.params.m, config.params.m));
      }
      const double geo = std::exp(log_prod / n);
      for (std::size_t i = 0; i < n_rho; ++i) {
        double esc = specfun::reg_upper_gamma(half_a, c_half * geo * rho_lin[i]);
        double qi = frame_escape(esc, l);
        chunk.sum_q[i] += qi;
        chunk.sum_q2[i] += qi * qi;
      }
    }
    return chunk;
  };

  // workers fill a chunk map; merging happens in chunk order so the floating
  // sums are identical for any worker count
  std::map<std::int64_t, Chunk> done;
  std::mutex mu;
  std::atomic<std::int64_t> next{0};
  const int workers = std::min<std::int64_t>(resolve_workers(n_workers), n_chunks);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::int64_t ci = next.fetch_add(1);
        if (ci >= n_chunks) return;
        Chunk chunk = run_chunk(ci);
        std::lock_guard lock(mu);
        done.emplace(ci, std::move(chunk));
      }
    });
  }
  for (auto& t : pool) t.join();

  std::vector<double> sum_q(n_rho, 0.0), sum_q2(n_rho, 0.0);
  for (std::int64_t ci = 0; ci < n_chunks; ++ci) {
    const Chunk& chunk = done.at(ci);
    for (std::size_t i = 0; i < n_rho; ++i) {
      sum_q[i] += chunk.sum_q[i];
      sum_q2[i] += chunk.sum_q2[i];
    }
  }

  std::vector<CurvePoint> out(n_rho);
  const double ns = static_cast<double>(n_samples);
  for (std::size_t i = 0; i < n_rho; ++i) {
    const double mean = sum_q[i] / ns;
    const double var = std::max(sum_q2[i] / ns - mean * mean, 0.0);
    out[i] = CurvePoint{config.rho_db[i], std::clamp(mean, 0.0, 1.0),
                        std::sqrt(var / (ns - 1.0)), n_samples, 0};
  }
  return out;
}

double diversity_slope(std::span<const CurvePoint> points,
                       const SlopeWindow& window) {
  if (!(window.p_low > 0.0) || !(window.p_high > window.p_low)) {
    throw config_error("diversity_slope: need 0 < p_low < p_high");
  }
  std::vector<double> xs, ys;
  for (const CurvePoint& p : points) {
    if (p.value >= window.p_low && p.value <= window.p_high) {
      xs.push_back(p.rho_db / 10.0);  // log10(rho)
      ys.push_back(-std::log10(p.value));
    }
  }
  if (xs.size() < 3) {
    throw numerical_error("diversity_slope: fewer than 3 points inside the window");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw numerical_error("diversity_slope: degenerate SNR spread");
  return sxy / sxx;
}

}  // namespace latbench::slb
