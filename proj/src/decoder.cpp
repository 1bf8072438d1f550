#include "latbench/decoder.hpp"

#include <cmath>
#include <limits>

#include "latbench/errors.hpp"

namespace latbench::decoder {

namespace {

inline int round_half_up(double c) {
  return static_cast<int>(std::floor(c + 0.5));
}

// lexicographic comparison of candidate coordinate vectors
inline bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

}  // namespace

void Decoder::set_generator(const lattice::FadedGenerator& gen) {
  const int n = gen.dim();
  if (n < 1) throw config_error("Decoder: empty generator");
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gen.entries);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0) {
      r.row(j) = -r.row(j);
      q.col(j) = -q.col(j);
    }
  }
  const double dmax = r.diagonal().maxCoeff();
  const double dmin = r.diagonal().minCoeff();
  cond_ = dmin > 0.0 ? dmax / dmin : std::numeric_limits<double>::infinity();
  if (!(cond_ <= 1e12)) throw ill_conditioned_error(cond_);

  n_ = n;
  r_.assign(static_cast<std::size_t>(n) * n, 0.0);
  qt_.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      r_[static_cast<std::size_t>(i) * n + j] = r(i, j);
      qt_[static_cast<std::size_t>(i) * n + j] = q(j, i);
    }
  }
  qty_.resize(static_cast<std::size_t>(n));
  dist_.resize(static_cast<std::size_t>(n));
  ycache_.resize(static_cast<std::size_t>(n) * n);
  u_.resize(static_cast<std::size_t>(n));
  step_.resize(static_cast<std::size_t>(n));
  lo_done_.resize(static_cast<std::size_t>(n));
  hi_done_.resize(static_cast<std::size_t>(n));
}

void Decoder::closest_point(std::span<const double> y, DecodeResult& out) {
  search(y, false, 0, 0, out);
}

void Decoder::closest_point_boxed(std::span<const double> y, int lo, int hi,
                                  DecodeResult& out) {
  if (lo > hi) throw config_error("closest_point_boxed: lo > hi");
  search(y, true, lo, hi, out);
}

void Decoder::babai_point(std::span<const double> y, DecodeResult& out) {
  if (n_ == 0) throw config_error("Decoder: set_generator first");
  const int n = n_;
  if (static_cast<int>(y.size()) != n) throw config_error("Decoder: bad y size");
  out.u.assign(static_cast<std::size_t>(n), 0);
  out.nodes_visited = 0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += qt_[static_cast<std::size_t>(i) * n + j] * y[static_cast<std::size_t>(j)];
    qty_[static_cast<std::size_t>(i)] = s;
  }
  double dist = 0.0;
  for (int k = n - 1; k >= 0; --k) {
    double t = qty_[static_cast<std::size_t>(k)];
    for (int j = k + 1; j < n; ++j) {
      t -= r_[static_cast<std::size_t>(k) * n + j] * out.u[static_cast<std::size_t>(j)];
    }
    const double c = t / r_[static_cast<std::size_t>(k) * n + k];
    out.u[static_cast<std::size_t>(k)] = round_half_up(c);
    const double w = t - r_[static_cast<std::size_t>(k) * n + k] *
                             out.u[static_cast<std::size_t>(k)];
    dist += w * w;
    ++out.nodes_visited;
  }
  out.dist_sq = dist;
}

void Decoder::search(std::span<const double> y, bool boxed, int lo, int hi,
                     DecodeResult& out) {
  if (n_ == 0) throw config_error("Decoder: set_generator first");
  const int n = n_;
  if (static_cast<int>(y.size()) != n) throw config_error("Decoder: bad y size");

  const double* r = r_.data();
  double* ycache = ycache_.data();
  int* u = u_.data();
  int* step = step_.data();

  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += qt_[static_cast<std::size_t>(i) * n + j] * y[static_cast<std::size_t>(j)];
    ycache[static_cast<std::size_t>(n - 1) * n + i] = s;
  }

  double best = std::numeric_limits<double>::infinity();
  bool have = false;
  std::vector<int>& best_u = out.u;
  best_u.assign(static_cast<std::size_t>(n), 0);
  std::vector<int> cand(static_cast<std::size_t>(n));
  std::uint64_t nodes = 0;

  auto enter = [&](int k) {
    const double c = ycache[static_cast<std::size_t>(k) * n + k] /
                     r[static_cast<std::size_t>(k) * n + k];
    int first = round_half_up(c);
    if (boxed) {
      first = std::min(std::max(first, lo), hi);
      lo_done_[static_cast<std::size_t>(k)] = 0;
      hi_done_[static_cast<std::size_t>(k)] = 0;
    }
    u[k] = first;
    step[k] = (c - first >= 0.0) ? 1 : -1;
  };

  // next zig-zag candidate; false when a boxed level is exhausted
  auto advance = [&](int k) -> bool {
    if (!boxed) {
      u[k] += step[k];
      step[k] = -step[k] - (step[k] > 0 ? 1 : -1);
      return true;
    }
    for (;;) {
      u[k] += step[k];
      step[k] = -step[k] - (step[k] > 0 ? 1 : -1);
      if (u[k] >= lo && u[k] <= hi) return true;
      if (u[k] < lo) {
        lo_done_[static_cast<std::size_t>(k)] = 1;
      } else {
        hi_done_[static_cast<std::size_t>(k)] = 1;
      }
      if (lo_done_[static_cast<std::size_t>(k)] && hi_done_[static_cast<std::size_t>(k)]) {
        return false;
      }
    }
  };

  int k = n - 1;
  dist_[static_cast<std::size_t>(k)] = 0.0;
  enter(k);

  for (;;) {
    const double w = ycache[static_cast<std::size_t>(k) * n + k] -
                     r[static_cast<std::size_t>(k) * n + k] * u[k];
    const double nd = dist_[static_cast<std::size_t>(k)] + w * w;
    ++nodes;

    if (nd > best) {
      // zig-zag distances are non-decreasing: level k is exhausted
      ++k;
    } else if (k == 0) {
      cand.assign(u, u + n);
      if (!have || nd < best || (nd == best && lex_less(cand, best_u))) {
        best = nd;
        best_u = cand;
        have = true;
      }
      if (advance(0)) continue;
      k = 1;
    } else {
      for (int i = 0; i < k; ++i) {
        ycache[static_cast<std::size_t>(k - 1) * n + i] =
            ycache[static_cast<std::size_t>(k) * n + i] -
            r_[static_cast<std::size_t>(i) * n + k] * u[k];
      }
      dist_[static_cast<std::size_t>(k - 1)] = nd;
      --k;
      enter(k);
      continue;
    }

    // climb until a level still has candidates
    for (;;) {
      if (k >= n) goto done;
      if (advance(k)) break;
      ++k;
    }
  }

done:
  if (!have) {
    // only reachable for a boxed search with an empty box, which the lo/hi
    // check rules out
    throw numerical_error("closest point search found no candidate");
  }
  out.dist_sq = best;
  out.nodes_visited = nodes;
}

DecodeResult closest_point(const lattice::FadedGenerator& gen,
                           std::span<const double> y) {
  Decoder dec;
  dec.set_generator(gen);
  DecodeResult out;
  dec.closest_point(y, out);
  return out;
}

DecodeResult closest_point_boxed(const lattice::FadedGenerator& gen,
                                 std::span<const double> y, int lo, int hi) {
  Decoder dec;
  dec.set_generator(gen);
  DecodeResult out;
  dec.closest_point_boxed(y, lo, hi, out);
  return out;
}

}  // namespace latbench::decoder
