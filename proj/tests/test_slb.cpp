#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "latbench/errors.hpp"
#include "latbench/slb.hpp"

using namespace latbench;
using fading::NakagamiParams;
using slb::CurvePoint;
using slb::SlbConfig;
using slb::SlopeWindow;

namespace {

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> g;
  for (double v = lo; v <= hi + 1e-9; v += step) g.push_back(v);
  return g;
}

}  // namespace

TEST_CASE("sphere_radius_sq closed forms") {
  std::vector<double> ones2{1.0, 1.0};
  CHECK(slb::sphere_radius_sq(ones2) ==
        doctest::Approx(0.31830988618379067154).epsilon(1e-13));
  std::vector<double> ones4{1.0, 1.0, 1.0, 1.0};
  CHECK(slb::sphere_radius_sq(ones4) ==
        doctest::Approx(0.45015815807855303478).epsilon(1e-13));
  std::vector<double> g41{4.0, 1.0};
  CHECK(slb::sphere_radius_sq(g41) ==
        doctest::Approx(0.63661977236758134308).epsilon(1e-13));
  // homogeneity: scales as (prod gamma)^(1/N)
  std::vector<double> gs{0.3, 2.7};
  double base = slb::sphere_radius_sq(ones2);
  CHECK(slb::sphere_radius_sq(gs) ==
        doctest::Approx(base * std::sqrt(0.3 * 2.7)).epsilon(1e-12));

  std::vector<double> bad{1.0, 0.0};
  CHECK_THROWS_AS(slb::sphere_radius_sq(bad), std::domain_error);
  std::vector<double> neg{1.0, -2.0};
  CHECK_THROWS_AS(slb::sphere_radius_sq(neg), std::domain_error);
}

TEST_CASE("conditional_escape_prob closed forms") {
  // N = 2: exp(-x)
  CHECK(slb::conditional_escape_prob(2.0, 1.0, 2) ==
        doctest::Approx(0.3678794411714423216).epsilon(1e-13));
  // rho -> 0 limit
  CHECK(slb::conditional_escape_prob(1.0, 1e-12, 2) ==
        doctest::Approx(1.0).epsilon(1e-9));
  // N = 4: (1 + x) exp(-x) at x = 2.25
  CHECK(slb::conditional_escape_prob(0.45, 10.0, 4) ==
        doctest::Approx(0.34254747982605909455).epsilon(1e-12));
  // decreasing in both arguments
  double prev = 1.0;
  for (double rho = 0.5; rho < 60.0; rho *= 1.7) {
    double v = slb::conditional_escape_prob(0.45, rho, 4);
    CHECK(v < prev);
    prev = v;
  }
  prev = 1.0;
  for (double r = 0.05; r < 10.0; r *= 1.9) {
    double v = slb::conditional_escape_prob(r, 3.0, 4);
    CHECK(v < prev);
    prev = v;
  }
  CHECK_THROWS_AS(slb::conditional_escape_prob(-1.0, 1.0, 2), std::domain_error);
  CHECK_THROWS_AS(slb::conditional_escape_prob(1.0, 0.0, 2), std::domain_error);
}

TEST_CASE("slb_curve approaches 1 at vanishing SNR") {
  for (auto [n, m, l] : std::vector<std::tuple<int, double, int>>{
           {2, 1.0, 1}, {4, 1.0, 100}, {2, 0.5, 1}}) {
    NakagamiParams params{m, n};
    fading::ZetaDensity density = fading::zeta_density(params);
    SlbConfig config{params, l, {-100.0}};
    auto curve = slb::slb_curve(config, density);
    CHECK(curve.front().value >= 1.0 - 1e-6);
    CHECK(curve.front().std_err == 0.0);
  }
}

TEST_CASE("slb_curve monotone in rho, L, and the union bound") {
  NakagamiParams params{1.0, 4};
  fading::ZetaDensity density = fading::zeta_density(params);
  auto rho = grid(0.0, 40.0, 2.0);

  auto c1 = slb::slb_curve(SlbConfig{params, 1, rho}, density);
  auto c10 = slb::slb_curve(SlbConfig{params, 10, rho}, density);
  auto c100 = slb::slb_curve(SlbConfig{params, 100, rho}, density);

  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (i > 0) CHECK(c1[i].value <= c1[i - 1].value);  // non-increasing in rho
    CHECK(c10[i].value >= c1[i].value);                // non-decreasing in L
    CHECK(c100[i].value >= c10[i].value);
    CHECK(c10[i].value <= 10.0 * c1[i].value + 1e-15);  // union bound
    CHECK(c100[i].value <= 100.0 * c1[i].value + 1e-15);
    CHECK(c1[i].value >= 0.0);
    CHECK(c1[i].value <= 1.0);
  }

  // spot check the L ordering at 20 dB per the figure family
  auto at20 = [&](int l) {
    return slb::slb_curve(SlbConfig{params, l, {20.0}}, density).front().value;
  };
  CHECK(at20(100) > at20(10));
  CHECK(at20(10) > at20(1));
}

TEST_CASE("slb_curve agrees with its Monte Carlo oracle") {
  // grids keep the bound above ~1e-4 so the 1e6-sample error bar is a sound
  // yardstick (plain sampling cannot certify rarer events)
  struct Case {
    int n;
    double m;
    int l;
    std::vector<double> rho_db;
  };
  for (const Case& c : {Case{2, 1.0, 1, {10.0, 20.0, 30.0}},
                        Case{2, 2.0, 1, {5.0, 12.0, 18.0}},
                        Case{4, 1.0, 100, {15.0, 22.0, 30.0}}}) {
    NakagamiParams params{c.m, c.n};
    fading::ZetaDensity density = fading::zeta_density(params);
    SlbConfig config{params, c.l, c.rho_db};
    auto quad = slb::slb_curve(config, density);
    Rng rng(777);
    auto mc = slb::slb_monte_carlo(config, 1000000, rng, 2);
    for (std::size_t i = 0; i < quad.size(); ++i) {
      CHECK(mc[i].std_err > 0.0);
      CHECK(std::fabs(quad[i].value - mc[i].value) <= 3.0 * mc[i].std_err);
    }
  }
}

TEST_CASE("slb_monte_carlo basics") {
  NakagamiParams params{0.5, 2};
  SlbConfig config{params, 1, {5.0, 15.0}};
  // sub-Rayleigh regime runs fine
  Rng rng(5);
  auto pts = slb::slb_monte_carlo(config, 40000, rng, 1);
  CHECK(pts.size() == 2);
  for (const auto& p : pts) {
    CHECK(p.value > 0.0);
    CHECK(p.value < 1.0);
    CHECK(p.n_frames == 40000);
  }

  // CLT scaling: 100x samples shrink the error bar about 10x
  Rng r1(6), r2(6);
  auto small = slb::slb_monte_carlo(config, 10000, r1, 1);
  auto large = slb::slb_monte_carlo(config, 1000000, r2, 1);
  double ratio = small[0].std_err / large[0].std_err;
  CHECK(ratio > 7.0);
  CHECK(ratio < 14.0);

  // deterministic for a fixed stream state regardless of workers
  Rng ra(42), rb(42);
  auto wa = slb::slb_monte_carlo(config, 50000, ra, 1);
  auto wb = slb::slb_monte_carlo(config, 50000, rb, 4);
  for (std::size_t i = 0; i < wa.size(); ++i) {
    CHECK(wa[i].value == wb[i].value);
    CHECK(wa[i].std_err == wb[i].std_err);
  }

  CHECK_THROWS_AS(slb::slb_monte_carlo(config, 5000, rng, 1), config_error);
}

TEST_CASE("diversity_slope exact on synthetic power law") {
  std::vector<CurvePoint> pts;
  for (double db = 10.0; db <= 60.0; db += 5.0) {
    double rho = std::pow(10.0, db / 10.0);
    pts.push_back(CurvePoint{db, std::pow(rho, -2.0), 0.0, 0, 0});
  }
  CHECK(slb::diversity_slope(pts, SlopeWindow{1e-13, 1e-1}) ==
        doctest::Approx(2.0).epsilon(1e-12));

  // window filters correctly and complains when starved
  CHECK_THROWS_AS(slb::diversity_slope(pts, SlopeWindow{1e-30, 1e-28}),
                  numerical_error);
  std::vector<CurvePoint> two(pts.begin(), pts.begin() + 2);
  CHECK_THROWS_AS(slb::diversity_slope(two, SlopeWindow{1e-13, 1e-1}),
                  numerical_error);
  CHECK_THROWS_AS(slb::diversity_slope(pts, SlopeWindow{1e-3, 1e-6}), config_error);
}

TEST_CASE("SLB diversity slopes reach mN") {
  {
    NakagamiParams params{1.0, 2};
    fading::ZetaDensity density = fading::zeta_density(params);
    auto curve =
        slb::slb_curve(SlbConfig{params, 1, grid(0.0, 48.0, 1.0)}, density);
    double slope = slb::diversity_slope(curve, SlopeWindow{1e-6, 1e-4});
    CHECK(slope >= 1.7);
    CHECK(slope <= 2.1);
  }
  {
    NakagamiParams params{2.0, 2};
    fading::ZetaDensity density = fading::zeta_density(params);
    auto curve =
        slb::slb_curve(SlbConfig{params, 1, grid(0.0, 33.0, 1.0)}, density);
    double slope = slb::diversity_slope(curve, SlopeWindow{1e-6, 1e-4});
    CHECK(slope >= 3.3);
    CHECK(slope <= 4.2);
  }
}

TEST_CASE("slb_curve refuses SNRs beyond the density grid's resolution") {
  NakagamiParams params{1.0, 2};
  fading::ZetaDensity density = fading::zeta_density(params);
  // by 80 dB the bound's mass sits left of the default grid
  CHECK_THROWS_AS(slb::slb_curve(SlbConfig{params, 1, {80.0}}, density),
                  numerical_error);
}

TEST_CASE("config validation") {
  NakagamiParams params{1.0, 2};
  fading::ZetaDensity density = fading::zeta_density(params);
  CHECK_THROWS_AS(
      slb::slb_curve(SlbConfig{params, 0, {10.0}}, density), config_error);
  CHECK_THROWS_AS(
      slb::slb_curve(SlbConfig{params, 1, {10.0, 5.0}}, density), config_error);
  CHECK_THROWS_AS(slb::slb_curve(SlbConfig{params, 1, {}}, density), config_error);
  // density built for different parameters
  CHECK_THROWS_AS(
      slb::slb_curve(SlbConfig{NakagamiParams{2.0, 2}, 1, {10.0}}, density),
      config_error);
}
