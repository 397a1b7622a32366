// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "fiedler/graph.hpp"

namespace fiedler {

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct JacobiOptions {
  /// Stop once the off-diagonal Frobenius norm drops below
  /// tolerance * max(1, ||M||_F).
  double tolerance = 1e-12;
  int max_sweeps = 100;
  /// Symmetry check applied to the input, absolute.
  double symmetry_tolerance = 1e-12;
};

/// Eigenpairs sorted by ascending eigenvalue; column k of `vectors` is the
/// unit eigenvector for `values[k]`.
struct SymmetricEigensystem {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  int sweeps = 0;
};

/// Cyclic Jacobi rotations on a dense symmetric matrix.
///
/// Throws std::invalid_argument for non-square or non-symmetric input and
/// ConvergenceError when max_sweeps is exhausted.
SymmetricEigensystem jacobi_eigensystem(const Eigen::MatrixXd& m, const JacobiOptions& opts = {});

/// All eigenvalues of a symmetric matrix, ascending.
std::vector<double> eigenvalues_symmetric(const Eigen::MatrixXd& m);

struct LaplacianSpectrum {
  std::vector<double> eigenvalues;  // ascending

  double lambda2() const { return eigenvalues.at(1); }
};

LaplacianSpectrum laplacian_spectrum(const Graph& g);

/// Second-smallest Laplacian eigenvalue (Fiedler value).
double algebraic_connectivity(const Graph& g);

}  // namespace fiedler
