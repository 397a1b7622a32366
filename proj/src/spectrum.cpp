// SPDX-License-Identifier: Apache-2.0
#include "fiedler/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace fiedler {

namespace {

double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (i != j) sum += a(i, j) * a(i, j);
  return std::sqrt(sum);
}

// Zeroes a(p, q) with a two-sided rotation; accumulates into v.
void rotate(Eigen::MatrixXd& a, Eigen::MatrixXd& v, Eigen::Index p, Eigen::Index q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const double tau = s / (1.0 + c);

  const double app = a(p, p);
  const double aqq = a(q, q);
  a(p, p) = app - t * apq;
  a(q, q) = aqq + t * apq;
  a(p, q) = a(q, p) = 0.0;

  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    if (k == p || k == q) continue;
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = a(p, k) = akp - s * (akq + tau * akp);
    a(k, q) = a(q, k) = akq + s * (akp - tau * akq);
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = vkp - s * (vkq + tau * vkp);
    v(k, q) = vkq + s * (vkp - tau * vkq);
  }
}

}  // namespace

SymmetricEigensystem jacobi_eigensystem(const Eigen::MatrixXd& m, const JacobiOptions& opts) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigensolver input is not square");
  const Eigen::Index n = m.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(m(i, j) - m(j, i)) > opts.symmetry_tolerance)
        throw std::invalid_argument("eigensolver input is not symmetric");

  Eigen::MatrixXd a = m;
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double threshold = opts.tolerance * std::max(1.0, m.norm());

  int sweeps = 0;
  while (off_diagonal_norm(a) > threshold) {
    if (sweeps == opts.max_sweeps) {
      throw ConvergenceError("Jacobi eigensolver did not converge in " +
                             std::to_string(opts.max_sweeps) + " sweeps");
    }
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) rotate(a, v, p, q);
    ++sweeps;
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x) < a(y, y); });

  SymmetricEigensystem out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.values(k) = a(src, src);
    out.vectors.col(k) = v.col(src);
  }
  out.sweeps = sweeps;
  return out;
}

std::vector<double> eigenvalues_symmetric(const Eigen::MatrixXd& m) {
  const auto sys = jacobi_eigensystem(m);
  return {sys.values.data(), sys.values.data() + sys.values.size()};
}

LaplacianSpectrum laplacian_spectrum(const Graph& g) {
  return {eigenvalues_symmetric(laplacian(g))};
}

double algebraic_connectivity(const Graph& g) { return laplacian_spectrum(g).lambda2(); }

}  // namespace fiedler
