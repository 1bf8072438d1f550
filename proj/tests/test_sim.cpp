#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "latbench/errors.hpp"
#include "latbench/sim.hpp"
#include "latbench/slb.hpp"

using namespace latbench;
using sim::Constellation;
using sim::RotationSpec;
using sim::SimConfig;

namespace {

SimConfig base_config() {
  SimConfig config;
  config.params = fading::NakagamiParams{1.0, 2};
  config.frame_symbols = 1;
  config.rho_db = {10.0};
  config.constellation = Constellation::infinite();
  config.rotation = RotationSpec::parse("cyclo2");
  config.seed = 1;
  config.stopping = sim::StoppingRule{50, 20000};
  config.n_workers = 1;
  return config;
}

}  // namespace

TEST_CASE("ebn0_shift_db reproduces the closed form") {
  CHECK(sim::ebn0_shift_db(2) ==
        doctest::Approx(-9.0308998699194358564).epsilon(1e-14));
  CHECK(sim::ebn0_shift_db(4) ==
        doctest::Approx(-5.0514997831990597607).epsilon(1e-14));
  CHECK(sim::ebn0_shift_db(8) ==
        doctest::Approx(-0.57991946977686754929).epsilon(1e-12));
  CHECK(sim::ebn0_shift_db(16) ==
        doctest::Approx(4.2426894739438675726).epsilon(1e-14));
  CHECK(sim::ebn0_shift_db(32) ==
        doctest::Approx(9.3069438766453532999).epsilon(1e-14));
  CHECK_THROWS_AS(sim::ebn0_shift_db(1), config_error);
  CHECK_THROWS_AS(sim::ebn0_shift_db(0), config_error);
}

TEST_CASE("rotation spec parsing") {
  CHECK(RotationSpec::parse("cyclo2").kind == RotationSpec::Kind::builtin);
  CHECK(RotationSpec::parse("krus4").name_or_path == "krus4");
  CHECK(RotationSpec::parse("identity").kind == RotationSpec::Kind::identity);
  CHECK(RotationSpec::parse("haar").kind == RotationSpec::Kind::haar_fresh);
  auto hf = RotationSpec::parse("haar-fixed:42");
  CHECK(hf.kind == RotationSpec::Kind::haar_fixed);
  CHECK(hf.haar_seed == 42);
  auto file = RotationSpec::parse("file:/tmp/foo.rot");
  CHECK(file.kind == RotationSpec::Kind::file);
  CHECK(file.name_or_path == "/tmp/foo.rot");
  CHECK(file.to_string() == "file:/tmp/foo.rot");
  CHECK_THROWS_AS(RotationSpec::parse("cyclo3"), config_error);
  CHECK_THROWS_AS(RotationSpec::parse("haar-fixed:abc"), config_error);
  CHECK_THROWS_AS(RotationSpec::parse("file:"), config_error);
}

TEST_CASE("no-fading sanity: fixed channel matches the Gaussian closed form") {
  // m = 1e8 pins the gains at 1 +- 1e-4; the 1-d integer lattice then errs
  // per symbol with probability 2 Q(sqrt(rho)/2) = erfc(sqrt(rho/8))
  SimConfig config;
  config.params = fading::NakagamiParams{1e8, 1};
  config.frame_symbols = 1;
  config.rho_db = {10.0 * std::log10(16.0)};
  config.constellation = Constellation::infinite();
  config.rotation = RotationSpec::parse("identity");
  config.seed = 424242;
  config.stopping = sim::StoppingRule{1000000, 40000};  // run all 40000 frames
  config.n_workers = 1;
  auto pts = sim::simulate_fer(config);
  REQUIRE(pts.size() == 1);
  const double expect = 0.045500263896358414401;  // erfc(sqrt(2))
  CHECK(pts[0].n_frames == 40000);
  CHECK(std::fabs(pts[0].fer - expect) <= 3.0 * pts[0].std_err);
  CHECK(pts[0].n_erasures == 0);
  CHECK(pts[0].mean_nodes > 0.0);
}

TEST_CASE("counters are bit-identical across worker counts") {
  SimConfig config = base_config();
  config.rho_db = {8.0, 16.0};
  config.stopping = sim::StoppingRule{100, 6000};
  config.n_workers = 1;
  auto a = sim::simulate_fer(config);
  config.n_workers = 2;
  auto b = sim::simulate_fer(config);
  config.n_workers = 5;
  auto c = sim::simulate_fer(config);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].n_frames == b[i].n_frames);
    CHECK(a[i].n_frame_errors == b[i].n_frame_errors);
    CHECK(a[i].n_erasures == b[i].n_erasures);
    CHECK(a[i].fer == b[i].fer);
    CHECK(a[i].mean_nodes == b[i].mean_nodes);
    CHECK(a[i].n_frames == c[i].n_frames);
    CHECK(a[i].n_frame_errors == c[i].n_frame_errors);
    CHECK(a[i].fer == c[i].fer);
  }
  // different seed gives different counters
  config.n_workers = 1;
  config.seed = 2;
  auto d = sim::simulate_fer(config);
  CHECK(d[0].n_frame_errors != a[0].n_frame_errors);
}

TEST_CASE("simulated FER dominates the sphere lower bound") {
  SimConfig config = base_config();
  config.rho_db = {6.0, 12.0, 18.0};
  config.stopping = sim::StoppingRule{150, 1000000};
  auto fer = sim::simulate_fer(config);

  fading::ZetaDensity density = fading::zeta_density(config.params);
  auto bound = slb::slb_curve(
      slb::SlbConfig{config.params, config.frame_symbols, config.rho_db}, density);
  for (std::size_t i = 0; i < fer.size(); ++i) {
    CHECK(fer[i].fer >= bound[i].value - 3.0 * fer[i].std_err);
  }
}

TEST_CASE("frame error rate grows with the frame length") {
  SimConfig config = base_config();
  config.rho_db = {12.0};
  config.stopping = sim::StoppingRule{200, 1000000};
  auto l1 = sim::simulate_fer(config);
  config.frame_symbols = 10;
  auto l10 = sim::simulate_fer(config);
  CHECK(l10[0].fer >=
        l1[0].fer - 3.0 * (l1[0].std_err + l10[0].std_err));
  CHECK(l10[0].fer > l1[0].fer);  // 10x the exposure at FER ~ 1e-1 scale
}

TEST_CASE("PAM carving runs and approaches the infinite lattice") {
  SimConfig config = base_config();
  config.rho_db = {14.0};
  config.constellation = Constellation::pam(4);
  config.stopping = sim::StoppingRule{200, 200000};
  auto pam = sim::simulate_fer(config);
  CHECK(pam[0].fer > 0.0);
  CHECK(pam[0].fer < 1.0);
  CHECK(pam[0].n_erasures == 0);

  // boundary effects help: the carving errs no more than the infinite lattice
  config.constellation = Constellation::infinite();
  auto inf = sim::simulate_fer(config);
  CHECK(pam[0].fer <= inf[0].fer + 3.0 * (pam[0].std_err + inf[0].std_err));
}

TEST_CASE("haar ensemble harness") {
  SimConfig config = base_config();
  config.rotation = RotationSpec::parse("haar");
  config.rho_db = {10.0, 20.0};
  config.stopping = sim::StoppingRule{80, 100000};
  auto pts = sim::simulate_haar_ensemble(config);
  CHECK(pts.size() == 2);
  for (const auto& p : pts) {
    CHECK(p.fer > 0.0);
    CHECK(p.fer < 1.0);
  }
  CHECK(pts[1].fer < pts[0].fer);

  // a fixed Haar draw behaves like any fixed rotation and is reproducible
  config.rotation = RotationSpec::parse("haar-fixed:7");
  auto fixed1 = sim::simulate_fer(config);
  auto fixed2 = sim::simulate_fer(config);
  CHECK(fixed1[0].n_frame_errors == fixed2[0].n_frame_errors);

  config.rotation = RotationSpec::parse("cyclo2");
  CHECK_THROWS_AS(sim::simulate_haar_ensemble(config), config_error);
}

TEST_CASE("deep sub-Rayleigh fading produces erasures that are reported") {
  // boxed PAM decoding keeps the per-frame cost bounded by M^N, so extreme
  // fading exercises erasure accounting without open-ended searches (an
  // infinite-lattice decode just below the condition threshold costs on the
  // order of the condition number)
  SimConfig config;
  config.params = fading::NakagamiParams{0.05, 2};
  config.frame_symbols = 1;
  config.rho_db = {10.0};
  config.constellation = Constellation::pam(4);
  config.rotation = RotationSpec::parse("cyclo2");
  config.seed = 9;
  config.stopping = sim::StoppingRule{1000000, 3000};
  config.n_workers = 2;
  auto pts = sim::simulate_fer(config);
  CHECK(pts[0].n_erasures > 0);
  CHECK(pts[0].n_frames == 3000);
  CHECK(pts[0].fer >= 0.0);
  CHECK(pts[0].fer <= 1.0);
  // fer denominator excludes erased frames
  CHECK(pts[0].fer ==
        doctest::Approx(static_cast<double>(pts[0].n_frame_errors) /
                        (pts[0].n_frames - pts[0].n_erasures)));
}

TEST_CASE("a numerically singular generator erases every frame and errors") {
  auto path = std::filesystem::temp_directory_path() / "latbench_singular.rot";
  std::ofstream out(path);
  out << "N 2\nlayout columns\nassert_orthonormal 0\n"
      << "1 1\n1 1.0000000000001\n";
  out.close();

  SimConfig config = base_config();
  config.rotation = RotationSpec::parse("file:" + path.string());
  config.stopping = sim::StoppingRule{10, 500};
  CHECK_THROWS_AS(sim::simulate_fer(config), numerical_error);
  std::filesystem::remove(path);
}

TEST_CASE("config validation") {
  SimConfig config = base_config();
  config.params.n = 4;  // cyclo2 is 2x2
  CHECK_THROWS_AS(sim::simulate_fer(config), config_error);

  config = base_config();
  config.rho_db = {10.0, 10.0};
  CHECK_THROWS_AS(sim::simulate_fer(config), config_error);

  config = base_config();
  config.constellation = Constellation::pam(1);
  CHECK_THROWS_AS(sim::simulate_fer(config), config_error);

  config = base_config();
  config.stopping.min_frame_errors = 0;
  CHECK_THROWS_AS(sim::simulate_fer(config), config_error);

  config = base_config();
  config.frame_symbols = 0;
  CHECK_THROWS_AS(sim::simulate_fer(config), config_error);
}
