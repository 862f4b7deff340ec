#pragma once

// Dense complex linear algebra used throughout qmult: Schatten norms,
// Hermitian eigensystems, Kronecker products and block views.

#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qmult {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Raised for malformed or out-of-domain arguments.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exponent of a Schatten norm. Either a finite real >= 1 or infinity
/// (operator norm).
class SchattenExponent {
 public:
  explicit SchattenExponent(double value);

  static SchattenExponent infinity() {
    return SchattenExponent(std::numeric_limits<double>::infinity());
  }

  [[nodiscard]] double value() const { return value_; }
  [[nodiscard]] bool is_infinite() const { return value_ == std::numeric_limits<double>::infinity(); }

  /// Hölder conjugate q with 1/p + 1/q = 1.
  [[nodiscard]] SchattenExponent conjugate() const;

  /// "inf" for the operator norm, otherwise shortest round-trip decimal.
  [[nodiscard]] std::string to_string() const;
  static SchattenExponent parse(const std::string& text);

  friend bool operator==(const SchattenExponent&, const SchattenExponent&) = default;

 private:
  double value_;
};

// --- validation -----------------------------------------------------------

void require_finite(const Matrix& a, const char* what = "matrix");
void require_square(const Matrix& a, const char* what = "matrix");
[[nodiscard]] bool is_hermitian(const Matrix& a, double tol);
/// Hermiticity tolerance used by the eigensolver: 1e-9 * max(1, ||A||_inf).
[[nodiscard]] double hermitian_tolerance(const Matrix& a);

// --- spectra and norms -----------------------------------------------------

struct Eigensystem {
  RealVector values;  // descending
  Matrix vectors;     // columns, phase-fixed
};

/// Eigen-decomposition of a Hermitian matrix. Eigenvalues are sorted in
/// descending order; each eigenvector has its first non-negligible component
/// made real and positive so results are reproducible.
Eigensystem hermitian_eigensystem(const Matrix& a);

/// Singular values in descending order.
RealVector singular_values(const Matrix& a);

/// (sum_i s_i^p)^(1/p) over the singular values of A; max s_i for p = inf.
double schatten_norm(const Matrix& a, SchattenExponent p);

/// Same, computed from a precomputed singular value list.
double schatten_norm_from_singular_values(const RealVector& s, SchattenExponent p);

/// |A| = (A* A)^(1/2).
Matrix abs_matrix(const Matrix& a);

/// Spectral function of a PSD matrix: V diag(f(lambda)) V*. Eigenvalues below
/// `cutoff` are treated as zero (useful for pseudo-inverse roots).
Matrix psd_power(const Matrix& a, double exponent, double cutoff = 0.0);

// --- structure -------------------------------------------------------------

Matrix kron(const Matrix& a, const Matrix& b);

/// Matrix unit |i><j| of size rows x cols.
Matrix matrix_unit(Eigen::Index rows, Eigen::Index cols, Eigen::Index i, Eigen::Index j);

/// n x n grid of m x m blocks of an nm x nm matrix; grid[i][j] = A_ij.
using BlockGrid = std::vector<std::vector<Matrix>>;
BlockGrid blocks(const Matrix& a, int n, int m);
Matrix assemble_blocks(const BlockGrid& grid);

/// Column-stacking vectorization and its inverse.
Vector vec(const Matrix& a);
Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols);

// --- random instances -----------------------------------------------------

/// Deterministic generator for a (seed, stream) pair. Independent streams are
/// used for restarts and suite cases so prefixes are stable.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0);

Matrix random_ginibre(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);
Matrix random_unitary(Eigen::Index d, std::mt19937_64& rng);
Vector random_unit_vector(Eigen::Index d, std::mt19937_64& rng);
/// Wishart-type PSD matrix G G* with G of size d x rank.
Matrix random_psd(Eigen::Index d, Eigen::Index rank, std::mt19937_64& rng);
RealMatrix random_rotation(std::mt19937_64& rng);

}  // namespace qmult
