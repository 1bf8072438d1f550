#include "latbench/lattice.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "latbench/errors.hpp"

#include "builtin_assets.inc"

namespace latbench::lattice {

namespace {

constexpr int kMaxDim = 16;

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

std::string format17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

RotationMatrix::RotationMatrix(Eigen::MatrixXd entries, std::string name,
                               RotationSource source, bool assert_orthonormal,
                               double tolerance)
    : entries_(std::move(entries)),
      name_(std::move(name)),
      source_(source),
      asserted_(assert_orthonormal) {
  if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
    throw config_error("RotationMatrix: entries must be square and nonempty");
  }
  if (entries_.rows() > kMaxDim) {
    throw config_error("RotationMatrix: dimension above supported maximum");
  }
  if (!entries_.allFinite()) {
    throw config_error("RotationMatrix '" + name_ + "': non-finite entries");
  }
  if (asserted_) {
    double err = orthonormality_error();
    if (!(err <= tolerance)) {
      std::ostringstream os;
      os << "RotationMatrix '" << name_ << "': orthonormality violation, max|M^T M - I| = "
         << err << " > " << tolerance;
      throw numerical_error(os.str());
    }
    double d = determinant();
    if (!(std::fabs(d - 1.0) <= std::max(tolerance, 1e-9))) {
      std::ostringstream os;
      os << "RotationMatrix '" << name_ << "': determinant violation, det = " << d
         << " (expected +1; reflections must use assert_orthonormal 0)";
      throw numerical_error(os.str());
    }
  }
}

RotationMatrix RotationMatrix::identity(int n) {
  return RotationMatrix(Eigen::MatrixXd::Identity(n, n), "identity",
                        RotationSource::builtin, true);
}

std::vector<double> RotationMatrix::row_major() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(dim()) * dim());
  for (int i = 0; i < dim(); ++i) {
    for (int j = 0; j < dim(); ++j) out.push_back(entries_(i, j));
  }
  return out;
}

double RotationMatrix::orthonormality_error() const {
  Eigen::MatrixXd e = entries_.transpose() * entries_ -
                      Eigen::MatrixXd::Identity(dim(), dim());
  return e.cwiseAbs().maxCoeff();
}

double RotationMatrix::determinant() const { return entries_.determinant(); }

RotationMatrix parse_rotation(std::string_view text, const std::string& name,
                              RotationSource source) {
  std::istringstream in{std::string(text)};
  std::string key;
  int n = 0;
  if (!(in >> key >> n) || key != "N" || n < 1 || n > kMaxDim) {
    throw config_error("rotation '" + name + "': bad or missing 'N <dim>' header");
  }
  std::string layout;
  if (!(in >> key >> layout) || key != "layout" ||
      (layout != "columns" && layout != "rows")) {
    throw config_error("rotation '" + name + "': bad or missing 'layout' header");
  }
  int assert_flag = -1;
  if (!(in >> key >> assert_flag) || key != "assert_orthonormal" ||
      (assert_flag != 0 && assert_flag != 1)) {
    throw config_error("rotation '" + name +
                       "': bad or missing 'assert_orthonormal' header");
  }
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!(in >> m(i, j))) {
        throw config_error("rotation '" + name + "': expected " +
                           std::to_string(n * n) + " matrix entries");
      }
    }
  }
  double extra;
  if (in >> extra) {
    throw config_error("rotation '" + name + "': trailing data after matrix");
  }
  if (layout == "rows") m.transposeInPlace();
  return RotationMatrix(std::move(m), name, source, assert_flag == 1, 1e-6);
}

RotationMatrix load_rotation(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open rotation file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_rotation(buf.str(), path.filename().string(), RotationSource::file);
}

void save_rotation(const std::filesystem::path& path, const RotationMatrix& rot,
                   FileLayout layout) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write rotation file: " + path.string());
  const int n = rot.dim();
  out << "N " << n << "\n";
  out << "layout " << (layout == FileLayout::columns ? "columns" : "rows") << "\n";
  out << "assert_orthonormal " << (rot.orthonormal_asserted() ? 1 : 0) << "\n";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double v = layout == FileLayout::columns ? rot.entry(i, j) : rot.entry(j, i);
      out << format17(v) << (j + 1 < n ? " " : "\n");
    }
  }
  if (!out) throw config_error("write failed: " + path.string());
}

RotationMatrix builtin_rotation(BuiltinRotation which) {
  switch (which) {
    case BuiltinRotation::cyclo2:
      return parse_rotation(kCyclo2Asset, "cyclo2", RotationSource::builtin);
    case BuiltinRotation::krus4:
      return parse_rotation(kKrus4Asset, "krus4", RotationSource::builtin);
    case BuiltinRotation::cyclo8:
      return parse_rotation(kCyclo8Asset, "cyclo8", RotationSource::builtin);
  }
  throw config_error("builtin_rotation: unknown enumerator");
}

RotationMatrix builtin_rotation(std::string_view name) {
  if (name == "cyclo2") return builtin_rotation(BuiltinRotation::cyclo2);
  if (name == "krus4") return builtin_rotation(BuiltinRotation::krus4);
  if (name == "cyclo8") return builtin_rotation(BuiltinRotation::cyclo8);
  throw config_error("builtin_rotation: unknown name '" + std::string(name) +
                     "' (expected cyclo2, krus4 or cyclo8)");
}

std::vector<std::string> builtin_rotation_names() {
  return {"cyclo2", "krus4", "cyclo8"};
}

RotationMatrix haar_rotation(int n, Rng& rng) {
  if (n < 1 || n > kMaxDim) throw config_error("haar_rotation: bad dimension");
  for (;;) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    double dmin = r.diagonal().cwiseAbs().minCoeff();
    double dmax = r.diagonal().cwiseAbs().maxCoeff();
    if (!(dmin > 1e-12 * dmax)) continue;  // numerically rank deficient, redraw
    for (int j = 0; j < n; ++j) {
      if (r(j, j) < 0) q.col(j) = -q.col(j);
    }
    if (q.determinant() < 0) q.col(n - 1) = -q.col(n - 1);
    return RotationMatrix(std::move(q), "haar", RotationSource::haar, true, 1e-9);
  }
}

FadedGenerator faded_generator(const RotationMatrix& rot, std::span<const double> h) {
  const int n = rot.dim();
  if (static_cast<int>(h.size()) != n) {
    throw config_error("faded_generator: amplitude vector size does not match dimension");
  }
  double hmin = h[0], hmax = h[0];
  for (double v : h) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::domain_error("faded_generator: amplitudes must be positive");
    }
    hmin = std::min(hmin, v);
    hmax = std::max(hmax, v);
  }
  FadedGenerator gen;
  gen.entries = rot.matrix();
  for (int i = 0; i < n; ++i) gen.entries.row(i) *= h[static_cast<std::size_t>(i)];
  gen.cond_estimate = hmax / hmin;
  return gen;
}

namespace {

// Depth-first product-distance search over one canonical prefix.
struct ProductSearch {
  int n = 0;
  int box = 0;
  const double* cols = nullptr;   // column-major: cols[j*n + i]
  const double* tails = nullptr;  // tails[k*n + i] = box * sum_{j>k} |M(i,j)|
  std::atomic<double>* global_best = nullptr;

  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_u;
  std::vector<int> u;
  // xbuf row k holds the partial sums after levels 0..k-1
  std::vector<double> xbuf;

  void run(int level, bool all_zero) {
    double* x_prev = xbuf.data() + static_cast<std::size_t>(level) * n;
    double* x = xbuf.data() + static_cast<std::size_t>(level + 1) * n;
    const double* col = cols + static_cast<std::size_t>(level) * n;
    const int lo = all_zero ? 0 : -box;
    for (int i = 0; i < n; ++i) x[i] = x_prev[i] + lo * col[i];
    for (int v = lo; v <= box; ++v) {
      u[static_cast<std::size_t>(level)] = v;
      const bool zero_path = all_zero && v == 0;
      if (level == n - 1) {
        if (!zero_path) {
          double prod = 1.0;
          for (int i = 0; i < n; ++i) prod *= std::fabs(x[i]);
          if (prod < best) {
            best = prod;
            best_u = u;
            double cur = global_best->load(std::memory_order_relaxed);
            while (prod < cur && !global_best->compare_exchange_weak(
                                     cur, prod, std::memory_order_relaxed)) {
            }
          }
        }
      } else {
        double bound = 1.0;
        const double* tail = tails + static_cast<std::size_t>(level) * n;
        for (int i = 0; i < n && bound > 0.0; ++i) {
          bound *= std::max(0.0, std::fabs(x[i]) - tail[i]);
        }
        if (!(bound > global_best->load(std::memory_order_relaxed))) {
          run(level + 1, zero_path);
        }
      }
      for (int i = 0; i < n; ++i) x[i] += col[i];
    }
  }
};

}  // namespace

MinProductResult min_product_distance(const RotationMatrix& rot, int box,
                                      int n_workers) {
  if (box < 1) throw config_error("min_product_distance: box must be >= 1");
  const int n = rot.dim();

  std::vector<double> cols(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      cols[static_cast<std::size_t>(j) * n + i] = rot.entry(i, j);
    }
  }
  std::vector<double> tails(static_cast<std::size_t>(n) * n, 0.0);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = k + 1; j < n; ++j) s += std::fabs(rot.entry(i, j));
      tails[static_cast<std::size_t>(k) * n + i] = box * s;
    }
  }

  // seed the shared bound with the unit vectors
  std::atomic<double> global_best{std::numeric_limits<double>::infinity()};
  for (int j = 0; j < n; ++j) {
    double prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= std::fabs(rot.entry(i, j));
    double cur = global_best.load();
    while (prod < cur && !global_best.compare_exchange_weak(cur, prod)) {
    }
  }

  // canonical prefixes (first nonzero coordinate positive); two levels for
  // n >= 4 to balance the thread pool
  struct Task {
    std::vector<int> prefix;
    bool all_zero;
  };
  std::vector<Task> tasks;
  const int prefix_len = n >= 4 ? 2 : (n >= 2 ? 1 : 0);
  if (prefix_len == 0) {
    tasks.push_back({{}, true});
  } else if (prefix_len == 1) {
    for (int v = 0; v <= box; ++v) tasks.push_back({{v}, v == 0});
  } else {
    for (int v0 = 0; v0 <= box; ++v0) {
      const int lo1 = v0 == 0 ? 0 : -box;
      for (int v1 = lo1; v1 <= box; ++v1) {
        tasks.push_back({{v0, v1}, v0 == 0 && v1 == 0});
      }
    }
  }

  std::vector<MinProductResult> per_task(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    ProductSearch search;
    search.n = n;
    search.box = box;
    search.cols = cols.data();
    search.tails = tails.data();
    search.global_best = &global_best;
    search.u.assign(static_cast<std::size_t>(n), 0);
    search.xbuf.assign(static_cast<std::size_t>(n + 1) * n, 0.0);
    for (;;) {
      std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      const Task& task = tasks[t];
      search.best = std::numeric_limits<double>::infinity();
      search.best_u.clear();
      std::fill(search.xbuf.begin(), search.xbuf.end(), 0.0);
      for (std::size_t k = 0; k < task.prefix.size(); ++k) {
        const int v = task.prefix[k];
        search.u[k] = v;
        const double* col = cols.data() + k * n;
        double* x_prev = search.xbuf.data() + k * static_cast<std::size_t>(n);
        double* x = search.xbuf.data() + (k + 1) * static_cast<std::size_t>(n);
        for (int i = 0; i < n; ++i) x[i] = x_prev[i] + v * col[i];
      }
      const int start = static_cast<int>(task.prefix.size());
      if (start == n) {
        if (!task.all_zero) {
          const double* x = search.xbuf.data() + static_cast<std::size_t>(n) * n;
          double prod = 1.0;
          for (int i = 0; i < n; ++i) prod *= std::fabs(x[i]);
          search.best = prod;
          search.best_u.assign(search.u.begin(), search.u.end());
        }
      } else {
        search.run(start, task.all_zero);
      }
      per_task[t] = MinProductResult{search.best, search.best_u};
    }
  };

  const int workers =
      std::min<std::size_t>(resolve_workers(n_workers), tasks.size());
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  MinProductResult result;
  result.value = std::numeric_limits<double>::infinity();
  for (const MinProductResult& r : per_task) {
    if (!r.argmin.empty() && r.value < result.value) result = r;
  }
  if (result.argmin.empty()) {
    throw numerical_error("min_product_distance: search produced no candidate");
  }
  return result;
}

}  // namespace latbench::lattice
