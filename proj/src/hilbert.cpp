#include "qmem/hilbert.hpp"

#include <cmath>

namespace qmem {

HilbertSpace::HilbertSpace(int fock_cutoff) : fock_cutoff_(fock_cutoff) {
    if (fock_cutoff < 2)
        throw DimensionMismatch("fock_cutoff must be >= 2 to hold |0> and |1>");
}

PhysicalParams PhysicalParams::make(double kappa, double G, double delta, double nbar,
                                    double Omega) {
    if (kappa < 0.0) throw ConfigError("physical.kappa must be >= 0");
    if (!(G > 0.0)) throw ConfigError("physical.g must be > 0");
    if (nbar < 0.0) throw ConfigError("physical.nbar must be >= 0");
    PhysicalParams p;
    p.kappa = kappa;
    p.G = G;
    p.delta = delta;
    p.nbar = nbar;
    p.Omega = Omega > 0.0 ? Omega : 2.0 * G;
    return p;
}

double PhysicalParams::omega_dispersive() const {
    if (delta == 0.0) throw ZeroDetuning("delta must be nonzero for dispersive coupling");
    return G * G / delta;
}

Operator annihilation(const HilbertSpace& space) {
    const int d = space.fock_cutoff();
    Operator a = Operator::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Operator creation(const HilbertSpace& space) { return annihilation(space).adjoint(); }

Operator number_operator(const HilbertSpace& space) {
    const int d = space.fock_cutoff();
    Operator n = Operator::Zero(d, d);
    for (int k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

Operator sigma_z() {
    Operator s = Operator::Zero(2, 2);
    s(0, 0) = 1.0;
    s(1, 1) = -1.0;
    return s;
}

Operator sigma_plus() {
    Operator s = Operator::Zero(2, 2);
    s(0, 1) = 1.0;  // |e><g|
    return s;
}

Operator sigma_minus() {
    Operator s = Operator::Zero(2, 2);
    s(1, 0) = 1.0;  // |g><e|
    return s;
}

Operator joint_annihilation(const HilbertSpace& space) {
    return kron(Operator::Identity(2, 2), annihilation(space));
}

Operator jaynes_cummings_hamiltonian(const PhysicalParams& p, const HilbertSpace& space) {
    const Operator a = annihilation(space);
    Operator h = p.G * (kron(sigma_plus(), a) + kron(sigma_minus(), a.adjoint()));
    return h;
}

Operator dispersive_hamiltonian(const PhysicalParams& p, const HilbertSpace& space) {
    const double omega = p.omega_dispersive();
    const int d = space.fock_cutoff();
    const Operator n = number_operator(space);
    Operator proj_e = Operator::Zero(2, 2);
    proj_e(0, 0) = 1.0;
    Operator proj_g = Operator::Zero(2, 2);
    proj_g(1, 1) = 1.0;
    return omega * (kron(proj_e, n + Operator::Identity(d, d)) - kron(proj_g, n));
}

Operator kick_unitary(const HilbertSpace& space) {
    const int d = space.fock_cutoff();
    return kron(sigma_z(), Operator::Identity(d, d));
}

DensityMatrix embed_field_state(const DensityMatrix& field, AtomLevel atom,
                                const HilbertSpace& space) {
    if (field.rows() != space.fock_cutoff() || field.cols() != space.fock_cutoff())
        throw DimensionMismatch("field state does not match the Fock cutoff");
    Operator proj = Operator::Zero(2, 2);
    proj(static_cast<int>(atom), static_cast<int>(atom)) = 1.0;
    return kron(proj, field);
}

DensityMatrix partial_trace_atom(const DensityMatrix& joint, const HilbertSpace& space) {
    const int d = space.fock_cutoff();
    if (joint.rows() != space.joint_dim() || joint.cols() != space.joint_dim())
        throw DimensionMismatch("joint state does not match 2 x fock_cutoff");
    DensityMatrix field = DensityMatrix::Zero(d, d);
    for (int s = 0; s < HilbertSpace::atom_dim; ++s)
        field += joint.block(s * d, s * d, d, d);
    return field;
}

double state_fidelity(const StateVector& psi, const DensityMatrix& rho) {
    if (psi.size() != rho.rows() || rho.rows() != rho.cols())
        throw DimensionMismatch("state vector and density matrix dimensions differ");
    double f = (psi.adjoint() * rho * psi).value().real();
    if (f < 0.0 && f > -1e-12) f = 0.0;
    if (f > 1.0 && f < 1.0 + 1e-12) f = 1.0;
    return std::min(1.0, std::max(0.0, f));
}

}  // namespace qmem
