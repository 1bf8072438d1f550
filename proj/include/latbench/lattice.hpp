#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "latbench/rng.hpp"

namespace latbench::lattice {

enum class RotationSource { builtin, file, haar };
enum class FileLayout { columns, rows };

/// N x N real generator in the column convention (x = M u).  When
/// orthonormality is asserted the constructor enforces max|M^T M - I| within
/// tolerance and det = +1.
class RotationMatrix {
 public:
  RotationMatrix(Eigen::MatrixXd entries, std::string name, RotationSource source,
                 bool assert_orthonormal, double tolerance = 1e-9);

  static RotationMatrix identity(int n);

  int dim() const noexcept { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return entries_; }
  double entry(int row, int col) const { return entries_(row, col); }
  std::vector<double> row_major() const;

  const std::string& name() const noexcept { return name_; }
  RotationSource source() const noexcept { return source_; }
  bool orthonormal_asserted() const noexcept { return asserted_; }

  double orthonormality_error() const;  // max |M^T M - I|
  double determinant() const;

 private:
  Eigen::MatrixXd entries_;
  std::string name_;
  RotationSource source_;
  bool asserted_;
};

/// Parses the plain-text rotation format:
///   N <n>
///   layout <columns|rows>
///   assert_orthonormal <0|1>
///   n lines of n reals
/// Rows-layout matrices (the web-table convention) are transposed into the
/// column convention on load.
RotationMatrix load_rotation(const std::filesystem::path& path);
RotationMatrix parse_rotation(std::string_view text, const std::string& name,
                              RotationSource source = RotationSource::file);

void save_rotation(const std::filesystem::path& path, const RotationMatrix& rot,
                   FileLayout layout = FileLayout::columns);

enum class BuiltinRotation { cyclo2, krus4, cyclo8 };

/// Bundled algebraic rotation assets (validated plain-text data).
RotationMatrix builtin_rotation(BuiltinRotation which);
RotationMatrix builtin_rotation(std::string_view name);  // "cyclo2" | "krus4" | "cyclo8"
std::vector<std::string> builtin_rotation_names();

/// Haar-distributed random rotation: QR of a Gaussian matrix, columns scaled
/// by the sign of the corresponding R diagonal (plain QR is not Haar), then
/// det forced to +1 by negating the last column if needed.
RotationMatrix haar_rotation(int n, Rng& rng);

/// diag(h) * M, the lattice generator seen by the receiver.
struct FadedGenerator {
  Eigen::MatrixXd entries;
  double cond_estimate = 1.0;

  int dim() const noexcept { return static_cast<int>(entries.rows()); }
};

FadedGenerator faded_generator(const RotationMatrix& rot, std::span<const double> h);

struct MinProductResult {
  double value = 0.0;
  std::vector<int> argmin;
};

/// min over u in [-box, box]^N \ {0} of prod_n |(M u)_n|; depth-first with a
/// partial-product bound, parallel over the leading coordinates.
MinProductResult min_product_distance(const RotationMatrix& rot, int box,
                                      int n_workers = 0);

}  // namespace latbench::lattice
