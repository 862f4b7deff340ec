#pragma once

// Independent reference computations used by the unit and acceptance tests.

#include <cmath>
#include <numbers>

#include "qmult/channel.hpp"
#include "qmult/qubit.hpp"

namespace qmult::oracle {

/// Brute-force nu_t of a qubit-input map: maximum of ||K(rho)||_t over a
/// Fibonacci grid of pure states on the Bloch sphere.
inline double bloch_grid_nu(const ChannelMap& k, SchattenExponent t, int points = 10000) {
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  double best = 0.0;
  for (int i = 0; i < points; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / points;
    const double r = std::sqrt(1.0 - z * z);
    const double phi = golden * i;
    const double x = r * std::cos(phi);
    const double y = r * std::sin(phi);
    Matrix rho(2, 2);
    rho << 1.0 + z, cplx(x, -y), cplx(x, y), 1.0 - z;
    rho *= 0.5;
    best = std::max(best, schatten_norm(k.apply(rho), t));
  }
  return best;
}

/// Closed form nu_t of depolarizing(d, lam) for lam in [0, 1].
inline double depolarizing_nu(int d, double lam, double t) {
  const double big = lam + (1.0 - lam) / d;
  const double small = (1.0 - lam) / d;
  return std::pow(std::pow(big, t) + (d - 1) * std::pow(small, t), 1.0 / t);
}

/// The 4 x 4 Choi matrix of the qubit diagonal representation, written out
/// entry by entry.
inline Matrix displayed_qubit_choi(const QubitDiagonalParams& p) {
  const auto& l = p.lambda;
  const auto& t = p.t;
  const cplx i(0.0, 1.0);
  Matrix c(4, 4);
  c << 1 + l[2] + t[2], t[0] - i * t[1], 0, l[0] + l[1],
      t[0] + i * t[1], 1 - l[2] - t[2], l[0] - l[1], 0,
      0, l[0] - l[1], 1 - l[2] + t[2], t[0] - i * t[1],
      l[0] + l[1], 0, t[0] + i * t[1], 1 + l[2] - t[2];
  return 0.5 * c;
}

}  // namespace qmult::oracle
