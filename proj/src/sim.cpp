#include "latbench/sim.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <thread>

#include "latbench/decoder.hpp"
#include "latbench/errors.hpp"

namespace latbench::sim {

namespace {

constexpr std::int64_t kChunkFrames = 256;

struct ChunkStats {
  std::int64_t frames = 0;
  std::int64_t errors = 0;
  std::int64_t erasures = 0;
  std::int64_t symbols = 0;
  std::uint64_t nodes = 0;
};

}  // namespace

int default_worker_count() {
  if (const char* env = std::getenv("LATBENCH_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

RotationSpec RotationSpec::parse(const std::string& text) {
  RotationSpec spec;
  if (text == "cyclo2" || text == "krus4" || text == "cyclo8") {
    spec.kind = Kind::builtin;
    spec.name_or_path = text;
  } else if (text == "identity") {
    spec.kind = Kind::identity;
    spec.name_or_path = text;
  } else if (text == "haar") {
    spec.kind = Kind::haar_fresh;
    spec.name_or_path = text;
  } else if (text.rfind("haar-fixed:", 0) == 0) {
    spec.kind = Kind::haar_fixed;
    spec.name_or_path = text;
    try {
      spec.haar_seed = std::stoull(text.substr(11));
    } catch (const std::exception&) {
      throw config_error("rotation spec: bad seed in '" + text + "'");
    }
  } else if (text.rfind("file:", 0) == 0) {
    spec.kind = Kind::file;
    spec.name_or_path = text.substr(5);
    if (spec.name_or_path.empty()) {
      throw config_error("rotation spec: empty path in '" + text + "'");
    }
  } else {
    throw config_error(
        "rotation spec '" + text +
        "': expected cyclo2|krus4|cyclo8|identity|haar|haar-fixed:SEED|file:PATH");
  }
  return spec;
}

std::string RotationSpec::to_string() const {
  switch (kind) {
    case Kind::file:
      return "file:" + name_or_path;
    default:
      return name_or_path;
  }
}

void SimConfig::validate() const {
  params.validate();
  if (frame_symbols < 1) throw config_error("SimConfig: L must be >= 1");
  if (rho_db.empty()) throw config_error("SimConfig: empty SNR grid");
  for (std::size_t i = 1; i < rho_db.size(); ++i) {
    if (!(rho_db[i] > rho_db[i - 1])) {
      throw config_error("SimConfig: SNR grid must be strictly increasing");
    }
  }
  if (constellation.kind == Constellation::Kind::pam && constellation.pam_m < 2) {
    throw config_error("SimConfig: PAM order must be >= 2");
  }
  if (stopping.min_frame_errors < 1) {
    throw config_error("SimConfig: min_frame_errors must be >= 1");
  }
  if (stopping.max_frames < 1) {
    throw config_error("SimConfig: max_frames must be >= 1");
  }
}

double ebn0_shift_db(int pam_m) {
  if (pam_m < 2) throw config_error("ebn0_shift_db: M must be >= 2");
  const double m = pam_m;
  return 10.0 * std::log10((m * m - 1.0) / (24.0 * std::log2(m)));
}

namespace {

// resolves every rotation source except haar_fresh
std::optional<lattice::RotationMatrix> resolve_rotation(const SimConfig& config) {
  const RotationSpec& spec = config.rotation;
  switch (spec.kind) {
    case RotationSpec::Kind::builtin:
      return lattice::builtin_rotation(spec.name_or_path);
    case RotationSpec::Kind::file:
      return lattice::load_rotation(spec.name_or_path);
    case RotationSpec::Kind::identity:
      return lattice::RotationMatrix::identity(config.params.n);
    case RotationSpec::Kind::haar_fixed: {
      Rng rng(spec.haar_seed);
      return lattice::haar_rotation(config.params.n, rng);
    }
    case RotationSpec::Kind::haar_fresh:
      return std::nullopt;
  }
  throw config_error("rotation spec: unknown kind");
}

// Per-frame work: draw channel (and rotation, for the ensemble), transmit L
// symbols with early exit at the first symbol error.
struct FrameWorker {
  const SimConfig* config = nullptr;
  const lattice::RotationMatrix* fixed_rotation = nullptr;  // null => fresh Haar
  double sigma = 0.0;
  std::size_t point_index = 0;

  decoder::Decoder dec;
  decoder::DecodeResult res;
  std::vector<double> y;
  std::vector<int> tx;

  ChunkStats run_chunk(std::int64_t chunk_index) {
    const int n = config->params.n;
    const int l = config->frame_symbols;
    const bool pam = config->constellation.kind == Constellation::Kind::pam;
    const int pam_m = config->constellation.pam_m;
    y.resize(static_cast<std::size_t>(n));
    tx.resize(static_cast<std::size_t>(n));

    ChunkStats stats;
    const std::int64_t begin = chunk_index * kChunkFrames;
    const std::int64_t end =
        std::min(begin + kChunkFrames, config->stopping.max_frames);
    for (std::int64_t f = begin; f < end; ++f) {
      Rng rng = Rng::substream(config->seed, point_index, static_cast<std::uint64_t>(f));
      ++stats.frames;

      // draw order per frame: rotation (ensemble only), gains, then per
      // symbol labels and noise
      std::optional<lattice::RotationMatrix> fresh;
      const lattice::RotationMatrix* rot = fixed_rotation;
      if (rot == nullptr) {
        fresh = lattice::haar_rotation(n, rng);
        rot = &*fresh;
      }
      fading::FadingDraw draw = fading::sample_gains(config->params, rng);
      lattice::FadedGenerator gen = lattice::faded_generator(*rot, draw.h);
      try {
        dec.set_generator(gen);
      } catch (const ill_conditioned_error&) {
        ++stats.erasures;
        continue;
      }

      bool frame_error = false;
      for (int sym = 0; sym < l && !frame_error; ++sym) {
        if (pam) {
          for (int i = 0; i < n; ++i) {
            tx[static_cast<std::size_t>(i)] =
                static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(pam_m)));
          }
          // offsets cancel in the decoding metric, so the boxed search runs
          // directly on M' u0 + noise in label space
          for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) {
              s += gen.entries(i, j) * tx[static_cast<std::size_t>(j)];
            }
            y[static_cast<std::size_t>(i)] = s + sigma * rng.normal();
          }
          dec.closest_point_boxed(y, 0, pam_m - 1, res);
          frame_error = res.u != tx;
        } else {
          // all-zero point of the infinite lattice
          for (int i = 0; i < n; ++i) {
            y[static_cast<std::size_t>(i)] = sigma * rng.normal();
          }
          dec.closest_point(y, res);
          for (int v : res.u) {
            if (v != 0) {
              frame_error = true;
              break;
            }
          }
        }
        stats.nodes += res.nodes_visited;
        ++stats.symbols;
      }
      if (frame_error) ++stats.errors;
    }
    return stats;
  }
};

FerPoint simulate_point(const SimConfig& config,
                        const lattice::RotationMatrix* fixed_rotation,
                        std::size_t point_index, int workers) {
  const auto t0 = std::chrono::steady_clock::now();
  const double rho = std::pow(10.0, config.rho_db[point_index] / 10.0);
  const double sigma = std::sqrt(1.0 / rho);

  const std::int64_t max_chunks =
      (config.stopping.max_frames + kChunkFrames - 1) / kChunkFrames;

  // Workers compute chunk statistics; merging happens strictly in chunk
  // order, so the stopping decision (and every counter) is independent of
  // the worker count.
  std::mutex mu;
  std::map<std::int64_t, ChunkStats> pending;
  ChunkStats total;
  std::int64_t next_merge = 0;
  std::atomic<std::int64_t> next_chunk{0};
  std::atomic<std::int64_t> stop_chunk{-1};  // -1 = not decided yet

  auto merge_ready = [&] {
    // caller holds mu
    for (auto it = pending.find(next_merge);
         it != pending.end() && stop_chunk.load() < 0;
         it = pending.find(next_merge)) {
      const ChunkStats& c = it->second;
      total.frames += c.frames;
      total.errors += c.errors;
      total.erasures += c.erasures;
      total.symbols += c.symbols;
      total.nodes += c.nodes;
      pending.erase(it);
      ++next_merge;
      if (total.errors >= config.stopping.min_frame_errors ||
          total.frames >= config.stopping.max_frames) {
        stop_chunk.store(next_merge - 1);
      }
    }
  };

  std::exception_ptr failure;

  auto worker_fn = [&](int) {
    try {
      FrameWorker fw;
      fw.config = &config;
      fw.fixed_rotation = fixed_rotation;
      fw.sigma = sigma;
      fw.point_index = point_index;
      for (;;) {
        std::int64_t sc = stop_chunk.load();
        std::int64_t ci = next_chunk.fetch_add(1);
        if (ci >= max_chunks || (sc >= 0 && ci > sc)) return;
        ChunkStats stats = fw.run_chunk(ci);
        std::lock_guard lock(mu);
        pending.emplace(ci, stats);
        merge_ready();
      }
    } catch (...) {
      std::lock_guard lock(mu);
      if (!failure) failure = std::current_exception();
      stop_chunk.store(0);  // unblock the pool
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker_fn, w);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  {
    std::lock_guard lock(mu);
    merge_ready();
  }

  if (total.frames == 0 || total.frames == total.erasures) {
    throw numerical_error("simulate_fer: every frame erased (pathological fading)");
  }

  FerPoint point;
  point.rho_db = config.rho_db[point_index];
  point.n_frames = total.frames;
  point.n_frame_errors = total.errors;
  point.n_erasures = total.erasures;
  const double denom = static_cast<double>(total.frames - total.erasures);
  point.fer = static_cast<double>(total.errors) / denom;
  point.std_err = std::sqrt(std::max(point.fer * (1.0 - point.fer), 0.0) / denom);
  point.mean_nodes =
      total.symbols > 0 ? static_cast<double>(total.nodes) / total.symbols : 0.0;
  point.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return point;
}

}  // namespace

std::vector<FerPoint> simulate_fer(const SimConfig& config) {
  config.validate();
  std::optional<lattice::RotationMatrix> fixed = resolve_rotation(config);
  if (fixed && fixed->dim() != config.params.n) {
    throw config_error("simulate_fer: rotation dimension " +
                       std::to_string(fixed->dim()) + " does not match n = " +
                       std::to_string(config.params.n));
  }
  const int workers =
      config.n_workers > 0 ? config.n_workers : default_worker_count();

  std::vector<FerPoint> out;
  out.reserve(config.rho_db.size());
  for (std::size_t i = 0; i < config.rho_db.size(); ++i) {
    out.push_back(simulate_point(config, fixed ? &*fixed : nullptr, i, workers));
  }
  return out;
}

std::vector<FerPoint> simulate_haar_ensemble(const SimConfig& config) {
  if (config.rotation.kind != RotationSpec::Kind::haar_fresh) {
    throw config_error("simulate_haar_ensemble: rotation source must be 'haar'");
  }
  return simulate_fer(config);
}

}  // namespace latbench::sim
