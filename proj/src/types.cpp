#include "qmem/types.hpp"

#include "qmem/errors.hpp"

namespace qmem {

Operator kron(const Operator& a, const Operator& b) {
    Operator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

double hermiticity_error(const Operator& m) {
    return (m - m.adjoint().eval()).cwiseAbs().maxCoeff();
}

DensityCheck density_check(const DensityMatrix& rho) {
    DensityCheck c;
    c.hermiticity_error = hermiticity_error(rho);
    c.trace_error = std::abs(rho.trace() - Complex{1.0, 0.0});
    const DensityMatrix sym = 0.5 * (rho + rho.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<DensityMatrix> es(sym, Eigen::EigenvaluesOnly);
    c.min_eigenvalue = es.eigenvalues().minCoeff();
    return c;
}

bool is_valid_density(const DensityMatrix& rho, double herm_tol, double trace_tol,
                      double eig_floor) {
    const DensityCheck c = density_check(rho);
    return c.hermiticity_error <= herm_tol && c.trace_error <= trace_tol &&
           c.min_eigenvalue >= eig_floor;
}

double purity(const DensityMatrix& rho) { return (rho * rho).trace().real(); }

}  // namespace qmem
