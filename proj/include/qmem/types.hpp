#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qmem {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using DensityMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Kronecker product A (x) B for dense complex matrices.
Operator kron(const Operator& a, const Operator& b);

/// max_ij |M - M^dagger| entrywise.
double hermiticity_error(const Operator& m);

/// Diagnostics for a candidate density matrix.
struct DensityCheck {
    double hermiticity_error;
    double trace_error;   // |tr(rho) - 1|
    double min_eigenvalue;
};

DensityCheck density_check(const DensityMatrix& rho);

/// Tolerances: Hermitian within 1e-10, trace 1 within 1e-10, eigenvalues >= -1e-9.
bool is_valid_density(const DensityMatrix& rho, double herm_tol = 1e-10,
                      double trace_tol = 1e-10, double eig_floor = -1e-9);

/// tr(rho^2), real part; equals 1 for pure states.
double purity(const DensityMatrix& rho);

}  // namespace qmem
