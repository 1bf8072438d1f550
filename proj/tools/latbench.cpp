// latbench command-line front end: SNR sweeps for the sphere lower bound,
// ML simulation of rotated lattice constellations, density tabulation and
// rotation diagnostics.  Every run emits a JSON-lines manifest sufficient to
// reproduce its outputs bit-exactly via `latbench rerun`.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "latbench/decoder.hpp"
#include "latbench/errors.hpp"
#include "latbench/fading.hpp"
#include "latbench/io.hpp"
#include "latbench/lattice.hpp"
#include "latbench/sim.hpp"
#include "latbench/slb.hpp"
#include "latbench/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace latbench;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

double now_seconds(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> expand_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) {
    throw config_error("SNR grid: need min <= max and step > 0");
  }
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    double v = lo + i * step;
    if (v > hi + 1e-9) break;
    grid.push_back(v);
  }
  return grid;
}

fs::path sibling_with_extension(const fs::path& p, const std::string& ext) {
  fs::path q = p;
  q.replace_extension(ext);
  return q;
}

fs::path with_l_suffix(const fs::path& p, int l) {
  fs::path q = p;
  std::string stem = q.stem().string();
  std::string ext = q.extension().string();
  q.replace_filename(stem + ".L" + std::to_string(l) + ext);
  return q;
}

void write_manifest(const fs::path& out, const std::string& command,
                    const json& config, const std::vector<fs::path>& outputs,
                    const json& timing_lines) {
  json header;
  header["artifact_version"] = kArtifactVersion;
  header["command"] = command;
  header["config"] = config;
  json outs = json::array();
  for (const auto& o : outputs) outs.push_back(o.string());
  header["outputs"] = outs;
  std::ostringstream os;
  os << header.dump() << '\n';
  for (const auto& line : timing_lines) os << line.dump() << '\n';
  io::write_text_file(fs::path(out.string() + ".manifest.json"), os.str());
}

// ---------------------------------------------------------------------------
// zeta-pdf

struct ZetaCmd {
  double m = 1.0;
  int n = 1;
  int points = 65536;
  std::optional<double> z_min, z_max;
  std::string out;
};

void to_json(json& j, const ZetaCmd& c) {
  j = json{{"m", c.m}, {"n", c.n}, {"points", c.points}, {"out", c.out}};
  if (c.z_min) j["z_min"] = *c.z_min;
  if (c.z_max) j["z_max"] = *c.z_max;
}

void from_json(const json& j, ZetaCmd& c) {
  j.at("m").get_to(c.m);
  j.at("n").get_to(c.n);
  j.at("points").get_to(c.points);
  j.at("out").get_to(c.out);
  if (j.contains("z_min")) c.z_min = j.at("z_min").get<double>();
  if (j.contains("z_max")) c.z_max = j.at("z_max").get<double>();
}

void run_zeta(const ZetaCmd& cmd) {
  const auto t0 = std::chrono::steady_clock::now();
  fading::NakagamiParams params{cmd.m, cmd.n};
  fading::ZetaGrid grid = fading::default_grid(params, cmd.points);
  if (cmd.z_min) grid.z_min = *cmd.z_min;
  if (cmd.z_max) grid.z_max = *cmd.z_max;
  fading::ZetaDensity density = fading::zeta_density(params, grid);

  const fs::path out{cmd.out};
  io::write_text_file(out, io::zeta_csv(density));
  std::ostringstream title;
  title << "zeta density, m=" << cmd.m << ", n=" << cmd.n;
  io::write_text_file(sibling_with_extension(out, ".gp"),
                      io::gnuplot_density_script(out.filename().string(), title.str()));

  json timing = json::array();
  timing.push_back(json{{"seconds", now_seconds(t0)}});
  write_manifest(out, "zeta-pdf", json(cmd), {out}, timing);
  std::cout << "wrote " << out.string() << " (" << density.size() << " points)\n";
}

// ---------------------------------------------------------------------------
// slb

struct SlbCmd {
  double m = 1.0;
  int n = 2;
  std::vector<int> l{1};
  std::vector<double> rho_db;  // resolved grid
  std::int64_t mc_check = 0;   // Monte Carlo cross-check sample count (0 = off)
  std::uint64_t mc_seed = 1;
  int points = 65536;
  std::optional<double> z_min, z_max;  // density grid overrides for deep tails
  int workers = 0;
  std::string out;
};

void to_json(json& j, const SlbCmd& c) {
  j = json{{"m", c.m},
           {"n", c.n},
           {"l", c.l},
           {"rho_db", c.rho_db},
           {"mc_check", c.mc_check},
           {"mc_seed", c.mc_seed},
           {"points", c.points},
           {"workers", c.workers},
           {"out", c.out}};
  if (c.z_min) j["z_min"] = *c.z_min;
  if (c.z_max) j["z_max"] = *c.z_max;
}

void from_json(const json& j, SlbCmd& c) {
  j.at("m").get_to(c.m);
  j.at("n").get_to(c.n);
  j.at("l").get_to(c.l);
  j.at("rho_db").get_to(c.rho_db);
  j.at("mc_check").get_to(c.mc_check);
  j.at("mc_seed").get_to(c.mc_seed);
  j.at("points").get_to(c.points);
  j.at("workers").get_to(c.workers);
  j.at("out").get_to(c.out);
  if (j.contains("z_min")) c.z_min = j.at("z_min").get<double>();
  if (j.contains("z_max")) c.z_max = j.at("z_max").get<double>();
}

void run_slb(const SlbCmd& cmd) {
  fading::NakagamiParams params{cmd.m, cmd.n};
  fading::ZetaGrid dgrid = fading::default_grid(params, cmd.points);
  if (cmd.z_min) dgrid.z_min = *cmd.z_min;
  if (cmd.z_max) dgrid.z_max = *cmd.z_max;
  fading::ZetaDensity density = fading::zeta_density(params, dgrid);
  if (cmd.l.empty()) throw config_error("slb: need at least one L");

  std::vector<fs::path> outputs;
  json timing = json::array();
  const fs::path base{cmd.out};

  for (int l : cmd.l) {
    slb::SlbConfig config{params, l, cmd.rho_db};
    std::vector<slb::CurvePoint> curve;
    curve.reserve(cmd.rho_db.size());
    for (double rho : cmd.rho_db) {
      const auto t0 = std::chrono::steady_clock::now();
      slb::SlbConfig one{params, l, {rho}};
      curve.push_back(slb::slb_curve(one, density).front());
      timing.push_back(json{{"l", l}, {"rho_db", rho}, {"seconds", now_seconds(t0)}});
    }

    const fs::path out = cmd.l.size() > 1 ? with_l_suffix(base, l) : base;
    if (cmd.mc_check > 0) {
      Rng rng(cmd.mc_seed);
      std::vector<slb::CurvePoint> mc =
          slb::slb_monte_carlo(config, cmd.mc_check, rng, cmd.workers);
      io::write_text_file(out, io::slb_csv_with_mc(curve, mc));
      for (std::size_t i = 0; i < curve.size(); ++i) {
        // the CLT error bar is only trustworthy when the rarer side of the
        // estimate still collects ~100 effective hits
        double rare = std::min(curve[i].value, 1.0 - curve[i].value);
        if (rare * static_cast<double>(cmd.mc_check) < 100.0) continue;
        double gap = std::fabs(curve[i].value - mc[i].value);
        if (gap > 3.0 * mc[i].std_err) {
          std::ostringstream os;
          os << "slb: Monte Carlo cross-check failed at rho_db=" << curve[i].rho_db
             << " (quadrature " << curve[i].value << ", mc " << mc[i].value
             << " +- " << mc[i].std_err << ")";
          throw numerical_error(os.str());
        }
      }
    } else {
      io::write_text_file(out, io::slb_csv(curve));
    }
    std::ostringstream title;
    title << "sphere lower bound, n=" << cmd.n << ", m=" << cmd.m << ", L=" << l;
    io::write_text_file(
        sibling_with_extension(out, ".gp"),
        io::gnuplot_probability_script(out.filename().string(), title.str(), "P_slb"));
    outputs.push_back(out);
    std::cout << "wrote " << out.string() << "\n";
  }

  write_manifest(base, "slb", json(cmd), outputs, timing);
}

// ---------------------------------------------------------------------------
// sim

struct SimCmd {
  double m = 1.0;
  int n = 2;
  int l = 1;
  std::string rotation = "cyclo2";
  std::string constellation = "infinite";  // "infinite" | "pam:M"
  std::uint64_t seed = 1;
  std::int64_t min_errors = 100;
  std::int64_t max_frames = 100000000;
  std::vector<double> rho_db;
  int workers = 0;
  std::string out;
};

void to_json(json& j, const SimCmd& c) {
  j = json{{"m", c.m},
           {"n", c.n},
           {"l", c.l},
           {"rotation", c.rotation},
           {"constellation", c.constellation},
           {"seed", c.seed},
           {"min_errors", c.min_errors},
           {"max_frames", c.max_frames},
           {"rho_db", c.rho_db},
           {"workers", c.workers},
           {"out", c.out}};
}

void from_json(const json& j, SimCmd& c) {
  j.at("m").get_to(c.m);
  j.at("n").get_to(c.n);
  j.at("l").get_to(c.l);
  j.at("rotation").get_to(c.rotation);
  j.at("constellation").get_to(c.constellation);
  j.at("seed").get_to(c.seed);
  j.at("min_errors").get_to(c.min_errors);
  j.at("max_frames").get_to(c.max_frames);
  j.at("rho_db").get_to(c.rho_db);
  j.at("workers").get_to(c.workers);
  j.at("out").get_to(c.out);
}

sim::SimConfig build_sim_config(const SimCmd& cmd) {
  sim::SimConfig config;
  config.params = fading::NakagamiParams{cmd.m, cmd.n};
  config.frame_symbols = cmd.l;
  config.rho_db = cmd.rho_db;
  if (cmd.constellation == "infinite") {
    config.constellation = sim::Constellation::infinite();
  } else if (cmd.constellation.rfind("pam:", 0) == 0) {
    config.constellation = sim::Constellation::pam(std::stoi(cmd.constellation.substr(4)));
  } else {
    throw config_error("sim: constellation must be 'infinite' or 'pam:M'");
  }
  config.rotation = sim::RotationSpec::parse(cmd.rotation);
  config.seed = cmd.seed;
  config.stopping = sim::StoppingRule{cmd.min_errors, cmd.max_frames};
  config.n_workers = cmd.workers;
  return config;
}

void run_sim(const SimCmd& cmd) {
  sim::SimConfig config = build_sim_config(cmd);
  std::vector<sim::FerPoint> curve = config.rotation.kind ==
                                             sim::RotationSpec::Kind::haar_fresh
                                         ? sim::simulate_haar_ensemble(config)
                                         : sim::simulate_fer(config);

  const fs::path out{cmd.out};
  io::write_text_file(out, io::fer_csv(curve));
  std::ostringstream title;
  title << "FER, " << cmd.rotation << ", " << cmd.constellation << ", n=" << cmd.n
        << ", m=" << cmd.m << ", L=" << cmd.l;
  io::write_text_file(
      sibling_with_extension(out, ".gp"),
      io::gnuplot_probability_script(out.filename().string(), title.str(), "FER"));

  json timing = json::array();
  for (const auto& p : curve) {
    timing.push_back(json{{"rho_db", p.rho_db},
                          {"seconds", p.seconds},
                          {"n_frames", p.n_frames},
                          {"n_frame_errors", p.n_frame_errors},
                          {"n_erasures", p.n_erasures}});
  }
  write_manifest(out, "sim", json(cmd), {out}, timing);
  std::cout << "wrote " << out.string() << "\n";
}

// ---------------------------------------------------------------------------
// minprod / validate-rotation

struct RotationCmd {
  std::string rotation = "cyclo2";
  int n = 2;    // dimension for identity / haar sources
  int box = 8;
  int workers = 0;
  std::string out;  // optional report file
};

void to_json(json& j, const RotationCmd& c) {
  j = json{{"rotation", c.rotation},
           {"n", c.n},
           {"box", c.box},
           {"workers", c.workers},
           {"out", c.out}};
}

void from_json(const json& j, RotationCmd& c) {
  j.at("rotation").get_to(c.rotation);
  j.at("n").get_to(c.n);
  j.at("box").get_to(c.box);
  j.at("workers").get_to(c.workers);
  j.at("out").get_to(c.out);
}

lattice::RotationMatrix resolve_rotation_arg(const std::string& text, int n) {
  sim::RotationSpec spec = sim::RotationSpec::parse(text);
  switch (spec.kind) {
    case sim::RotationSpec::Kind::builtin:
      return lattice::builtin_rotation(spec.name_or_path);
    case sim::RotationSpec::Kind::file:
      return lattice::load_rotation(spec.name_or_path);
    case sim::RotationSpec::Kind::identity:
      return lattice::RotationMatrix::identity(n);
    case sim::RotationSpec::Kind::haar_fixed: {
      Rng rng(spec.haar_seed);
      return lattice::haar_rotation(n, rng);
    }
    case sim::RotationSpec::Kind::haar_fresh:
      throw config_error("'haar' redraws per frame; use haar-fixed:SEED here");
  }
  throw config_error("unknown rotation kind");
}

void run_minprod(const RotationCmd& cmd) {
  const auto t0 = std::chrono::steady_clock::now();
  lattice::RotationMatrix rot = resolve_rotation_arg(cmd.rotation, cmd.n);
  lattice::MinProductResult res =
      lattice::min_product_distance(rot, cmd.box, cmd.workers);

  std::ostringstream report;
  report << "rotation: " << cmd.rotation << "\n"
         << "dimension: " << rot.dim() << "\n"
         << "box: " << cmd.box << "\n"
         << "min_product_distance: " << io::format_g17(res.value) << "\n"
         << "argmin:";
  for (int v : res.argmin) report << ' ' << v;
  report << "\n";
  std::cout << report.str();

  if (!cmd.out.empty()) {
    const fs::path out{cmd.out};
    io::write_text_file(out, report.str());
    json timing = json::array();
    timing.push_back(json{{"seconds", now_seconds(t0)}});
    write_manifest(out, "minprod", json(cmd), {out}, timing);
  }
}

void run_validate(const RotationCmd& cmd) {
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream report;
  bool pass = true;
  std::string violation;
  try {
    lattice::RotationMatrix rot = resolve_rotation_arg(cmd.rotation, cmd.n);
    report << "rotation: " << cmd.rotation << "\n"
           << "dimension: " << rot.dim() << "\n"
           << "orthonormality_error: " << io::format_g17(rot.orthonormality_error())
           << "\n"
           << "determinant: " << io::format_g17(rot.determinant()) << "\n";
    lattice::MinProductResult res =
        lattice::min_product_distance(rot, cmd.box, cmd.workers);
    report << "min_product_distance(box=" << cmd.box
           << "): " << io::format_g17(res.value) << "\n";
    if (rot.orthonormal_asserted() && rot.orthonormality_error() > 1e-6) {
      pass = false;
      violation = "orthonormality";
    } else if (!(res.value > 0.0)) {
      pass = false;
      violation = "zero minimum product distance (not full diversity)";
    }
  } catch (const numerical_error& e) {
    pass = false;
    violation = e.what();
    report << "validation error: " << e.what() << "\n";
  }
  report << "result: " << (pass ? "PASS" : std::string("FAIL (") + violation + ")")
         << "\n";
  std::cout << report.str();

  if (!cmd.out.empty()) {
    const fs::path out{cmd.out};
    io::write_text_file(out, report.str());
    json timing = json::array();
    timing.push_back(json{{"seconds", now_seconds(t0)}});
    write_manifest(out, "validate-rotation", json(cmd), {out}, timing);
  }
  if (!pass) throw numerical_error("rotation validation failed: " + violation);
}

// ---------------------------------------------------------------------------
// rerun

void run_rerun(const std::string& manifest_path, const std::string& out_dir) {
  std::istringstream in(io::read_text_file(manifest_path));
  std::string first;
  if (!std::getline(in, first)) throw config_error("rerun: empty manifest");
  json header = json::parse(first);
  const std::string command = header.at("command").get<std::string>();
  json config = header.at("config");

  auto redirect = [&](std::string& out) {
    if (!out_dir.empty() && !out.empty()) {
      out = (fs::path(out_dir) / fs::path(out).filename()).string();
    }
  };

  if (command == "zeta-pdf") {
    ZetaCmd cmd = config.get<ZetaCmd>();
    redirect(cmd.out);
    run_zeta(cmd);
  } else if (command == "slb") {
    SlbCmd cmd = config.get<SlbCmd>();
    redirect(cmd.out);
    run_slb(cmd);
  } else if (command == "sim") {
    SimCmd cmd = config.get<SimCmd>();
    redirect(cmd.out);
    run_sim(cmd);
  } else if (command == "minprod") {
    RotationCmd cmd = config.get<RotationCmd>();
    redirect(cmd.out);
    run_minprod(cmd);
  } else if (command == "validate-rotation") {
    RotationCmd cmd = config.get<RotationCmd>();
    redirect(cmd.out);
    run_validate(cmd);
  } else {
    throw config_error("rerun: unknown command '" + command + "' in manifest");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "latbench: sphere lower bounds and exact ML simulation of rotated "
      "lattice constellations over Nakagami-m block-fading channels"};
  app.require_subcommand(1);

  // zeta-pdf ------------------------------------------------------------
  ZetaCmd zeta;
  double zeta_zmin = 0, zeta_zmax = 0;
  auto* zeta_cmd = app.add_subcommand("zeta-pdf", "tabulate the log-gain-sum density");
  zeta_cmd->add_option("--m", zeta.m, "Nakagami shape m")->required();
  zeta_cmd->add_option("--n", zeta.n, "fading blocks per symbol")->required();
  zeta_cmd->add_option("--points", zeta.points, "grid size (power of two)")
      ->default_val(65536);
  auto* zmin_opt = zeta_cmd->add_option("--z-min", zeta_zmin, "grid lower edge");
  auto* zmax_opt = zeta_cmd->add_option("--z-max", zeta_zmax, "grid upper edge");
  zeta_cmd->add_option("--out", zeta.out, "output CSV path")->required();
  zeta_cmd->callback([&] {
    if (*zmin_opt) zeta.z_min = zeta_zmin;
    if (*zmax_opt) zeta.z_max = zeta_zmax;
    run_zeta(zeta);
  });

  // slb -------------------------------------------------------------------
  SlbCmd slbc;
  double slb_min = 0, slb_max = 30, slb_step = 1;
  double slb_zmin = 0, slb_zmax = 0;
  auto* slb_cmd = app.add_subcommand("slb", "sphere lower bound curve(s)");
  slb_cmd->add_option("--m", slbc.m, "Nakagami shape m")->required();
  slb_cmd->add_option("--n", slbc.n, "fading blocks per symbol")->required();
  slb_cmd->add_option("--l", slbc.l, "symbols per frame (repeatable or comma list)")
      ->delimiter(',')
      ->default_val(std::vector<int>{1});
  slb_cmd->add_option("--rho-db-min", slb_min, "SNR grid start [dB]")->required();
  slb_cmd->add_option("--rho-db-max", slb_max, "SNR grid end [dB]")->required();
  slb_cmd->add_option("--rho-db-step", slb_step, "SNR grid step [dB]")
      ->default_val(1.0);
  slb_cmd->add_option("--mc-check", slbc.mc_check,
                      "Monte Carlo cross-check with this many samples");
  slb_cmd->add_option("--mc-seed", slbc.mc_seed, "cross-check seed")->default_val(1);
  slb_cmd->add_option("--points", slbc.points, "density grid size (power of two)")
      ->default_val(65536);
  auto* slb_zmin_opt =
      slb_cmd->add_option("--z-min", slb_zmin, "density grid lower edge (deep tails)");
  auto* slb_zmax_opt =
      slb_cmd->add_option("--z-max", slb_zmax, "density grid upper edge");
  slb_cmd->add_option("--threads", slbc.workers,
                      "worker threads (default: LATBENCH_THREADS or all cores)");
  slb_cmd->add_option("--out", slbc.out, "output CSV path")->required();
  slb_cmd->callback([&] {
    if (*slb_zmin_opt) slbc.z_min = slb_zmin;
    if (*slb_zmax_opt) slbc.z_max = slb_zmax;
    slbc.rho_db = expand_grid(slb_min, slb_max, slb_step);
    run_slb(slbc);
  });

  // sim -------------------------------------------------------------------
  SimCmd simc;
  std::vector<double> sim_rho_list;
  double sim_min = 0, sim_max = 30, sim_step = 2;
  int sim_pam = 0;
  bool sim_infinite = false;
  auto* sim_cmd = app.add_subcommand("sim", "simulate ML frame error rate");
  sim_cmd->add_option("--rotation", simc.rotation,
                      "cyclo2|krus4|cyclo8|identity|haar|haar-fixed:SEED|file:PATH")
      ->required();
  sim_cmd->add_option("--m", simc.m, "Nakagami shape m")->required();
  sim_cmd->add_option("--n", simc.n, "fading blocks per symbol")->required();
  sim_cmd->add_option("--l", simc.l, "symbols per frame")->default_val(1);
  sim_cmd->add_flag("--infinite", sim_infinite, "infinite lattice constellation");
  sim_cmd->add_option("--pam", sim_pam, "M-PAM carving with M points per dimension");
  sim_cmd->add_option("--seed", simc.seed, "random seed")->default_val(1);
  sim_cmd->add_option("--min-errors", simc.min_errors,
                      "frame errors to collect per grid point")
      ->default_val(100);
  sim_cmd->add_option("--max-frames", simc.max_frames, "frame cap per grid point")
      ->default_val(100000000);
  auto* rho_list_opt =
      sim_cmd->add_option("--rho-db", sim_rho_list, "explicit SNR grid [dB]")
          ->delimiter(',');
  sim_cmd->add_option("--rho-db-min", sim_min, "SNR grid start [dB]");
  sim_cmd->add_option("--rho-db-max", sim_max, "SNR grid end [dB]");
  sim_cmd->add_option("--rho-db-step", sim_step, "SNR grid step [dB]");
  sim_cmd->add_option("--threads", simc.workers,
                      "worker threads (default: LATBENCH_THREADS or all cores)");
  sim_cmd->add_option("--out", simc.out, "output CSV path")->required();
  sim_cmd->callback([&] {
    if (sim_pam > 0 && sim_infinite) {
      throw config_error("sim: choose either --infinite or --pam M");
    }
    simc.constellation = sim_pam > 0 ? "pam:" + std::to_string(sim_pam) : "infinite";
    simc.rho_db = *rho_list_opt ? sim_rho_list : expand_grid(sim_min, sim_max, sim_step);
    run_sim(simc);
  });

  // minprod -----------------------------------------------------------------
  RotationCmd mp;
  auto* mp_cmd = app.add_subcommand("minprod", "minimum product distance search");
  mp_cmd->add_option("--rotation", mp.rotation, "rotation spec")->required();
  mp_cmd->add_option("--n", mp.n, "dimension for identity/haar sources")
      ->default_val(2);
  mp_cmd->add_option("--box", mp.box, "search box [-box, box]^N")->default_val(8);
  mp_cmd->add_option("--threads", mp.workers, "worker threads");
  mp_cmd->add_option("--out", mp.out, "optional report file");
  mp_cmd->callback([&] { run_minprod(mp); });

  // validate-rotation ---------------------------------------------------------
  RotationCmd val;
  auto* val_cmd =
      app.add_subcommand("validate-rotation", "orthonormality / diversity checks");
  val_cmd->add_option("--rotation", val.rotation, "rotation spec")->required();
  val_cmd->add_option("--n", val.n, "dimension for identity/haar sources")
      ->default_val(2);
  val_cmd->add_option("--box", val.box, "product distance search box")->default_val(8);
  val_cmd->add_option("--threads", val.workers, "worker threads");
  val_cmd->add_option("--out", val.out, "optional report file");
  val_cmd->callback([&] { run_validate(val); });

  // rerun ---------------------------------------------------------------------
  std::string rerun_manifest, rerun_dir;
  auto* rerun_cmd = app.add_subcommand("rerun", "reproduce a run from its manifest");
  rerun_cmd->add_option("manifest", rerun_manifest, "path to a .manifest.json")
      ->required();
  rerun_cmd->add_option("--out-dir", rerun_dir, "redirect outputs to a directory");
  rerun_cmd->callback([&] { run_rerun(rerun_manifest, rerun_dir); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const numerical_error& e) {
    std::cerr << "numerical validation error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
