#include "qmult/norms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qmult {

void OptimizerConfig::validate() const {
  if (restarts < 1) throw InputError("optimizer restarts must be >= 1");
  if (max_iters < 1) throw InputError("optimizer max_iters must be >= 1");
  if (!(step_tolerance > 0.0)) throw InputError("optimizer step_tolerance must be positive");
  if (!(value_tolerance > 0.0)) throw InputError("optimizer value_tolerance must be positive");
}

namespace {

constexpr double kAgreement = 1e-6;

struct Svd {
  Matrix u;
  RealVector s;
  Matrix v;
};

// X = U diag(s) V*, s descending. Hermitian inputs go through the eigensolver.
Svd svd(const Matrix& x) {
  const double scale = x.cwiseAbs().maxCoeff();
  if (x.rows() == x.cols() && (x - x.adjoint()).cwiseAbs().maxCoeff() <= 1e-13 * std::max(scale, 1e-300)) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (x + x.adjoint()));
    const Eigen::Index d = x.rows();
    std::vector<Eigen::Index> order(d);
    for (Eigen::Index k = 0; k < d; ++k) order[k] = k;
    const RealVector& lam = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return std::abs(lam(a)) > std::abs(lam(b)); });
    Svd out{Matrix(d, d), RealVector(d), Matrix(d, d)};
    for (Eigen::Index k = 0; k < d; ++k) {
      const Eigen::Index src = order[k];
      out.s(k) = std::abs(lam(src));
      out.u.col(k) = solver.eigenvectors().col(src);
      out.v.col(k) = lam(src) < 0 ? Vector(-solver.eigenvectors().col(src)) : Vector(solver.eigenvectors().col(src));
    }
    return out;
  }
  Eigen::JacobiSVD<Matrix> solver(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

// Element D of the dual unit ball with Re Tr[D* X] = ||X||_q.
Matrix dual_element(const Svd& f, SchattenExponent q, double norm) {
  const Eigen::Index r = f.s.size();
  RealVector w = RealVector::Zero(r);
  if (q.is_infinite()) {
    w(0) = 1.0;
  } else if (q.value() == 1.0) {
    const double cut = 1e-12 * f.s(0);
    for (Eigen::Index k = 0; k < r; ++k) w(k) = f.s(k) > cut ? 1.0 : 0.0;
  } else {
    for (Eigen::Index k = 0; k < r; ++k) w(k) = std::pow(f.s(k) / norm, q.value() - 1.0);
  }
  return f.u * w.cast<cplx>().asDiagonal() * f.v.adjoint();
}

// argmax of Re Tr[G* A] over ||A||_p <= 1.
Matrix linear_maximizer(const Svd& g, SchattenExponent p) {
  const Eigen::Index r = g.s.size();
  RealVector w = RealVector::Zero(r);
  if (p.is_infinite()) {
    w.setOnes();
  } else if (p.value() == 1.0) {
    w(0) = 1.0;
  } else {
    const double pc = p.conjugate().value();
    for (Eigen::Index k = 0; k < r; ++k) w(k) = g.s(0) > 0 ? std::pow(g.s(k) / g.s(0), pc - 1.0) : 0.0;
    const double nrm = schatten_norm_from_singular_values(w, p);
    if (nrm > 0) w /= nrm;
  }
  return g.u * w.cast<cplx>().asDiagonal() * g.v.adjoint();
}

Matrix adjoint_apply(const ChannelMap& k, const Matrix& y) {
  const Vector out = k.transfer().adjoint() * vec(y);
  return unvec(out, k.in_dim(), k.in_dim());
}

Matrix normalize_p(const Matrix& a, SchattenExponent p) {
  const double nrm = schatten_norm(a, p);
  if (nrm == 0.0) throw InputError("cannot normalize a zero matrix");
  return a / nrm;
}

struct RunResult {
  double value = 0.0;
  Matrix point;
  bool converged = false;
};

RunResult ascend_p2q(const ChannelMap& k, SchattenExponent p, SchattenExponent q, Matrix a,
                     const OptimizerConfig& cfg) {
  a = normalize_p(a, p);
  RunResult run{0.0, a, false};
  for (int it = 0; it < cfg.max_iters; ++it) {
    const Matrix x = k.apply(a);
    const Svd fx = svd(x);
    const double val = schatten_norm_from_singular_values(fx.s, q);
    if (val > run.value || it == 0) run = {val, a, false};
    if (val == 0.0) {
      run.converged = true;
      break;
    }
    const Matrix g = adjoint_apply(k, dual_element(fx, q, val));
    const Svd fg = svd(g);
    const Matrix next = linear_maximizer(fg, p);
    const double lin_next = (g.adjoint() * next).trace().real();
    const double lin_here = (g.adjoint() * a).trace().real();
    if (lin_next - lin_here <= cfg.step_tolerance * val) {
      run.converged = true;
      break;
    }
    a = next;
  }
  return run;
}

RunResult ascend_nu(const ChannelMap& k, SchattenExponent t, Vector psi, const OptimizerConfig& cfg) {
  psi.normalize();
  RunResult run{0.0, psi, false};
  for (int it = 0; it < cfg.max_iters; ++it) {
    const Matrix x = k.apply(psi * psi.adjoint());
    const Svd fx = svd(x);
    const double val = schatten_norm_from_singular_values(fx.s, t);
    if (val > run.value || it == 0) run = {val, psi, false};
    if (val == 0.0) {
      run.converged = true;
      break;
    }
    const Matrix g = adjoint_apply(k, dual_element(fx, t, val));
    const Matrix h = 0.5 * (g + g.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    const Eigen::Index top = h.rows() - 1;
    const double gap = solver.eigenvalues()(top) - (psi.adjoint() * h * psi)(0, 0).real();
    if (gap <= cfg.step_tolerance * val) {
      run.converged = true;
      break;
    }
    psi = solver.eigenvectors().col(top);
  }
  return run;
}

template <class Run>
void aggregate(NormResult& out, const std::vector<Run>& runs) {
  out.best_restart = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].value > runs[out.best_restart].value) out.best_restart = static_cast<int>(r);
  }
  const auto& best = runs[out.best_restart];
  out.value = best.value;
  out.maximizer = best.point;
  out.converged = best.converged;
  out.restarts_agreeing = 0;
  for (const auto& r : runs) {
    if (r.value >= best.value - kAgreement * std::max(best.value, 1e-300)) ++out.restarts_agreeing;
  }
}

}  // namespace

double p2q_objective(const ChannelMap& k, const Matrix& a, SchattenExponent p, SchattenExponent q) {
  const double denom = schatten_norm(a, p);
  if (denom == 0.0) throw InputError("p2q_objective: input must be nonzero");
  return schatten_norm(k.apply(a), q) / denom;
}

double nu_objective(const ChannelMap& k, const Vector& psi, SchattenExponent t) {
  if (psi.size() != k.in_dim()) throw InputError("nu_objective: state has wrong dimension");
  const double nrm2 = psi.squaredNorm();
  if (nrm2 == 0.0) throw InputError("nu_objective: state must be nonzero");
  return schatten_norm(k.apply(psi * psi.adjoint()), t) / nrm2;
}

NormResult p2q_norm_optimized(const ChannelMap& k, SchattenExponent p, SchattenExponent q,
                              const OptimizerConfig& cfg, std::span<const Matrix> seeds) {
  cfg.validate();
  const int n = k.in_dim();
  std::vector<RunResult> runs;
  for (int r = 0; r < cfg.restarts; ++r) {
    auto rng = make_rng(cfg.seed, static_cast<std::uint64_t>(r));
    runs.push_back(ascend_p2q(k, p, q, random_ginibre(n, n, rng), cfg));
  }
  for (const auto& s : seeds) {
    if (s.rows() != n || s.cols() != n) throw InputError("p2q_norm: seed matrix has wrong shape");
    runs.push_back(ascend_p2q(k, p, q, s, cfg));
  }
  NormResult out;
  aggregate(out, runs);
  const double check = p2q_objective(k, out.maximizer, p, q);
  if (std::abs(check - out.value) > cfg.value_tolerance * std::max(1.0, out.value)) {
    out.warnings.emplace_back("re-evaluation at maximizer differs from reported value");
  }
  return out;
}

NormResult p2q_norm(const ChannelMap& k, SchattenExponent p, SchattenExponent q, const OptimizerConfig& cfg,
                    std::span<const Matrix> seeds) {
  NormResult opt = p2q_norm_optimized(k, p, q, cfg, seeds);
  if (!(p.value() == 2.0 && q.value() == 2.0)) return opt;

  Eigen::JacobiSVD<Matrix> solver(k.transfer(), Eigen::ComputeThinV);
  NormResult out;
  out.exact = true;
  out.converged = true;
  out.value = solver.singularValues()(0);
  out.maximizer = unvec(solver.matrixV().col(0), k.in_dim(), k.in_dim());
  out.best_restart = -1;
  out.restarts_agreeing = opt.restarts_agreeing;
  if (std::abs(opt.value - out.value) > kAgreement * std::max(out.value, 1e-300)) {
    out.restarts_agreeing = 0;
    out.warnings.emplace_back("optimizer disagrees with exact 2->2 value: " + std::to_string(opt.value));
  }
  return out;
}

NormResult nu(const ChannelMap& k, SchattenExponent t, const OptimizerConfig& cfg, std::span<const Vector> seeds) {
  cfg.validate();
  const int n = k.in_dim();
  std::vector<RunResult> runs;
  for (int r = 0; r < cfg.restarts; ++r) {
    auto rng = make_rng(cfg.seed, static_cast<std::uint64_t>(r));
    runs.push_back(ascend_nu(k, t, random_unit_vector(n, rng), cfg));
  }
  for (const auto& s : seeds) {
    if (s.size() != n || s.norm() == 0.0) throw InputError("nu: seed state has wrong shape or is zero");
    runs.push_back(ascend_nu(k, t, s, cfg));
  }
  NormResult out;
  aggregate(out, runs);
  const Vector psi = out.maximizer.col(0);
  const double check = nu_objective(k, psi, t);
  if (std::abs(check - out.value) > cfg.value_tolerance * std::max(1.0, out.value)) {
    out.warnings.emplace_back("re-evaluation at maximizer differs from reported value");
  }
  const Matrix img = k.apply(psi * psi.adjoint());
  if (!is_hermitian(img, hermitian_tolerance(img)) || hermitian_eigensystem(img).values.minCoeff() < -1e-9) {
    out.warnings.emplace_back("map output is not positive at the maximizer");
  }
  return out;
}

Matrix tensor_apply_by_blocks(const ChannelMap& k, const ChannelMap& l, const Matrix& a) {
  const int n = k.in_dim(), m = l.in_dim();
  const BlockGrid grid = blocks(a, n, m);
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(k.out_dim()) * l.out_dim(),
                            static_cast<Eigen::Index>(k.out_dim()) * l.out_dim());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out += kron(k.apply(matrix_unit(n, n, i, j)), l.apply(grid[i][j]));
  }
  return out;
}

BlockNormMatrix block_norm_matrix(const Matrix& a, int n, int m, SchattenExponent p) {
  const BlockGrid grid = blocks(a, n, m);
  BlockNormMatrix out{RealMatrix(n, n)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out.entries(i, j) = schatten_norm(grid[i][j], p);
  }
  return out;
}

InequalityCheck bhatia_kittaneh_check(const Matrix& a, int n, int m, SchattenExponent p) {
  if (p.is_infinite() || p.value() > 2.0) {
    throw InputError("bhatia_kittaneh_check: requires 1 <= p <= 2, got " + p.to_string());
  }
  const BlockNormMatrix alpha = block_norm_matrix(a, n, m, p);
  InequalityCheck out;
  out.lhs = alpha.entries.squaredNorm();
  const double whole = schatten_norm(a, p);
  out.rhs = whole * whole;
  out.holds = out.lhs <= out.rhs + 1e-9 * out.rhs;
  return out;
}

InequalityCheck holder_trace_check(std::span<const Matrix> factors, double rel_slack) {
  if (factors.empty()) throw InputError("holder_trace_check: need at least one factor");
  const SchattenExponent e(static_cast<double>(factors.size()));
  Matrix prod = factors[0];
  double rhs = schatten_norm(factors[0], e);
  for (std::size_t k = 1; k < factors.size(); ++k) {
    if (factors[k].rows() != prod.cols()) throw InputError("holder_trace_check: shape mismatch");
    prod = prod * factors[k];
    rhs *= schatten_norm(factors[k], e);
  }
  require_square(prod, "product");
  InequalityCheck out;
  out.lhs = std::abs(prod.trace());
  out.rhs = rhs;
  out.holds = out.lhs <= out.rhs * (1.0 + rel_slack);
  return out;
}

ContractionDecomposition contraction_decomposition(const Matrix& a, int n, int m, int i, int j) {
  require_finite(a, "contraction_decomposition input");
  if (i == j) throw InputError("contraction_decomposition: requires i != j");
  if (i < 0 || j < 0 || i >= n || j >= n) throw InputError("contraction_decomposition: block index out of range");
  const BlockGrid grid = blocks(a, n, m);
  const double scale = std::max(1.0, singular_values(a)(0));
  if (!is_hermitian(a, 1e-9 * scale) || hermitian_eigensystem(a).values.minCoeff() < -1e-9 * scale) {
    throw InputError("contraction_decomposition: input is not positive semidefinite");
  }
  const double cutoff = 1e-12 * scale;
  const Matrix& aii = grid[i][i];
  const Matrix& ajj = grid[j][j];
  ContractionDecomposition out;
  out.r = psd_power(aii, -0.5, cutoff) * grid[i][j] * psd_power(ajj, -0.5, cutoff);
  out.infnorm = schatten_norm(out.r, SchattenExponent::infinity());
  out.reconstruction_error = (psd_power(aii, 0.5) * out.r * psd_power(ajj, 0.5) - grid[i][j]).norm();
  return out;
}

}  // namespace qmult
