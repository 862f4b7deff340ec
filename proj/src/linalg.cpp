#include "qmult/linalg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

namespace qmult {

SchattenExponent::SchattenExponent(double value) : value_(value) {
  if (std::isnan(value) || value < 1.0) {
    throw InputError("Schatten exponent must be >= 1, got " + std::to_string(value));
  }
}

SchattenExponent SchattenExponent::conjugate() const {
  if (is_infinite()) return SchattenExponent(1.0);
  if (value_ == 1.0) return infinity();
  return SchattenExponent(value_ / (value_ - 1.0));
}

std::string SchattenExponent::to_string() const {
  if (is_infinite()) return "inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value_);
  (void)ec;
  return std::string(buf, end);
}

SchattenExponent SchattenExponent::parse(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return infinity();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InputError("cannot parse Schatten exponent '" + text + "'");
  }
  return SchattenExponent(v);
}

void require_finite(const Matrix& a, const char* what) {
  if (a.size() == 0) throw InputError(std::string(what) + " is empty");
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const cplx z = a.data()[k];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw InputError(std::string(what) + " has non-finite entries");
    }
  }
}

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw InputError(std::string(what) + " must be square, got " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()));
  }
}

bool is_hermitian(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double hermitian_tolerance(const Matrix& a) {
  const double opnorm = a.size() == 0 ? 0.0 : singular_values(a)(0);
  return 1e-9 * std::max(1.0, opnorm);
}

namespace {

void fix_phase(Eigen::Ref<Vector> v) {
  const double scale = v.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::abs(v(k)) > 1e-10 * scale) {
      v *= std::conj(v(k)) / std::abs(v(k));
      v(k) = std::abs(v(k));
      return;
    }
  }
}

// Eigenvalues of a matrix known to be Hermitian up to rounding.
RealVector hermitian_eigenvalues_unchecked(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

}  // namespace

Eigensystem hermitian_eigensystem(const Matrix& a) {
  require_square(a, "hermitian_eigensystem input");
  require_finite(a, "hermitian_eigensystem input");
  if (!is_hermitian(a, hermitian_tolerance(a))) {
    throw InputError("hermitian_eigensystem: input is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (a + a.adjoint()));
  const Eigen::Index d = a.rows();
  Eigensystem out{RealVector(d), Matrix(d, d)};
  // Eigen returns ascending order.
  for (Eigen::Index k = 0; k < d; ++k) {
    out.values(k) = solver.eigenvalues()(d - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(d - 1 - k);
    fix_phase(out.vectors.col(k));
  }
  return out;
}

RealVector singular_values(const Matrix& a) {
  RealVector s;
  const double scale = a.cwiseAbs().maxCoeff();
  if (a.rows() == a.cols() && (a - a.adjoint()).cwiseAbs().maxCoeff() <= 1e-14 * std::max(scale, 1e-300)) {
    s = hermitian_eigenvalues_unchecked(a).cwiseAbs();
  } else {
    // Singular values from the spectrum of A*A, clamped at zero.
    const Matrix gram = a.rows() >= a.cols() ? Matrix(a.adjoint() * a) : Matrix(a * a.adjoint());
    s = hermitian_eigenvalues_unchecked(gram).cwiseMax(0.0).cwiseSqrt();
  }
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

double schatten_norm_from_singular_values(const RealVector& s, SchattenExponent p) {
  if (s.size() == 0) return 0.0;
  const double top = s.maxCoeff();
  if (p.is_infinite() || top == 0.0) return top;
  const double e = p.value();
  if (e == 1.0) return s.sum();
  if (e == 2.0) return s.norm();
  // Scale by the largest value to avoid overflow at large exponents.
  double acc = 0.0;
  for (double x : s) acc += std::pow(x / top, e);
  return top * std::pow(acc, 1.0 / e);
}

double schatten_norm(const Matrix& a, SchattenExponent p) {
  require_finite(a, "schatten_norm input");
  return schatten_norm_from_singular_values(singular_values(a), p);
}

Matrix abs_matrix(const Matrix& a) {
  require_finite(a, "abs_matrix input");
  return psd_power(a.adjoint() * a, 0.5);
}

Matrix psd_power(const Matrix& a, double exponent, double cutoff) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (a + a.adjoint()));
  RealVector lam = solver.eigenvalues();
  for (double& x : lam) {
    x = x <= cutoff ? 0.0 : std::pow(x, exponent);
  }
  return solver.eigenvectors() * lam.cast<cplx>().asDiagonal() * solver.eigenvectors().adjoint();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  constexpr auto kMax = static_cast<Eigen::Index>(1) << 24;
  if (a.rows() > 0 && b.rows() > kMax / a.rows()) throw InputError("kron: dimension overflow");
  if (a.cols() > 0 && b.cols() > kMax / a.cols()) throw InputError("kron: dimension overflow");
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix matrix_unit(Eigen::Index rows, Eigen::Index cols, Eigen::Index i, Eigen::Index j) {
  Matrix e = Matrix::Zero(rows, cols);
  e(i, j) = 1.0;
  return e;
}

BlockGrid blocks(const Matrix& a, int n, int m) {
  if (n < 1 || m < 1 || a.rows() != static_cast<Eigen::Index>(n) * m || a.cols() != a.rows()) {
    throw InputError("blocks: expected a " + std::to_string(n * m) + "x" + std::to_string(n * m) +
                     " matrix, got " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  BlockGrid grid(n, std::vector<Matrix>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) grid[i][j] = a.block(i * m, j * m, m, m);
  }
  return grid;
}

Matrix assemble_blocks(const BlockGrid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  if (n == 0) throw InputError("assemble_blocks: empty grid");
  const Eigen::Index m = grid[0][0].rows();
  Matrix out(n * m, n * m);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(grid[i].size()) != n) throw InputError("assemble_blocks: ragged grid");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (grid[i][j].rows() != m || grid[i][j].cols() != m) throw InputError("assemble_blocks: block size mismatch");
      out.block(i * m, j * m, m, m) = grid[i][j];
    }
  }
  return out;
}

Vector vec(const Matrix& a) { return Eigen::Map<const Vector>(a.data(), a.size()); }

Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) throw InputError("unvec: size mismatch");
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

Matrix random_ginibre(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = cplx(re, im);
    }
  }
  return g;
}

Matrix random_unitary(Eigen::Index d, std::mt19937_64& rng) {
  const Matrix g = random_ginibre(d, d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Haar measure needs the phases of diag(R) divided out.
  for (Eigen::Index k = 0; k < d; ++k) {
    const cplx rk = r(k, k);
    if (std::abs(rk) > 0) q.col(k) *= rk / std::abs(rk);
  }
  return q;
}

Vector random_unit_vector(Eigen::Index d, std::mt19937_64& rng) {
  Vector v = random_ginibre(d, 1, rng).col(0);
  return v / v.norm();
}

Matrix random_psd(Eigen::Index d, Eigen::Index rank, std::mt19937_64& rng) {
  const Matrix g = random_ginibre(d, rank, rng);
  return g * g.adjoint();
}

RealMatrix random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RealMatrix g(3, 3);
  for (Eigen::Index k = 0; k < g.size(); ++k) g.data()[k] = normal(rng);
  Eigen::HouseholderQR<RealMatrix> qr(g);
  RealMatrix q = qr.householderQ() * RealMatrix::Identity(3, 3);
  const RealMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < 3; ++k) {
    if (r(k, k) < 0) q.col(k) *= -1.0;
  }
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

}  // namespace qmult
