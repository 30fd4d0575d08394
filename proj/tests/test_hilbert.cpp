#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "qmem/hilbert.hpp"

using namespace qmem;

namespace {

constexpr double kPi = std::numbers::pi;

// oracle: exp(-i H t) for Hermitian H by diagonalization, independent of the
// time steppers under test
Operator unitary_of(const Operator& h, double t) {
    Eigen::SelfAdjointEigenSolver<Operator> es(h);
    StateVector phases(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < phases.size(); ++i)
        phases(i) = std::exp(Complex(0.0, -1.0) * es.eigenvalues()(i) * t);
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

DensityMatrix random_density(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Operator m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
    DensityMatrix rho = m * m.adjoint();
    rho /= rho.trace().real();
    return rho;
}

}  // namespace

TEST_CASE("hilbert space validates the cutoff and fixes the basis order") {
    CHECK_THROWS_AS(HilbertSpace(1), DimensionMismatch);
    const HilbertSpace space(3);
    CHECK(space.joint_dim() == 6);
    CHECK(space.joint_index(0, 2) == 2);  // |e,2>
    CHECK(space.joint_index(1, 0) == 3);  // |g,0>
}

TEST_CASE("annihilation ladder entries") {
    const HilbertSpace two(2);
    const Operator a2 = annihilation(two);
    StateVector one = StateVector::Zero(2);
    one(1) = 1.0;
    const StateVector lowered = a2 * one;
    CHECK(std::abs(lowered(0) - 1.0) < 1e-15);  // a|1> = |0>
    StateVector vac = StateVector::Zero(2);
    vac(0) = 1.0;
    CHECK((a2 * vac).norm() < 1e-15);  // a|0> = 0

    const Operator a3 = annihilation(HilbertSpace(3));
    CHECK(std::abs(a3(1, 2) - std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("truncated commutator [a, a+] is the identity below the top level") {
    const HilbertSpace space(5);
    const Operator a = annihilation(space);
    const Operator comm = a * a.adjoint() - a.adjoint() * a;
    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n)
            CHECK(std::abs(comm(m, n) - (m == n ? 1.0 : 0.0)) < 1e-14);
}

TEST_CASE("physical params defaults and validation") {
    const PhysicalParams p = PhysicalParams::make(2.0, 10.0, 30.0);
    CHECK(p.Omega == doctest::Approx(20.0));
    CHECK(p.omega_dispersive() == doctest::Approx(100.0 / 30.0).epsilon(1e-15));
    CHECK_THROWS_AS(PhysicalParams::make(-1.0, 10.0), ConfigError);
    CHECK_THROWS_AS(PhysicalParams::make(1.0, 0.0), ConfigError);
    const PhysicalParams res = PhysicalParams::make(0.0, 5.0);
    CHECK_THROWS_AS(res.omega_dispersive(), ZeroDetuning);
}

TEST_CASE("resonant coupling matrix elements and hermiticity") {
    const HilbertSpace space(3);
    const PhysicalParams p = PhysicalParams::make(0.0, 7.5, 3.0 * 7.5);
    const Operator h = jaynes_cummings_hamiltonian(p, space);
    CHECK(hermiticity_error(h) <= 1e-12);
    CHECK(std::abs(h(space.joint_index(0, 0), space.joint_index(1, 1)) - 7.5) < 1e-14);
    CHECK(std::abs(h(space.joint_index(1, 0), space.joint_index(1, 0))) < 1e-15);
    // |g,n+1> <-> |e,n> carries G sqrt(n+1)
    CHECK(std::abs(h(space.joint_index(0, 1), space.joint_index(1, 2)) -
                   7.5 * std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("a pi pulse fully swaps |g,1> into |e,0>") {
    const HilbertSpace space(3);
    const double g = 11.0;
    const PhysicalParams p = PhysicalParams::make(0.0, g);
    const Operator h = jaynes_cummings_hamiltonian(p, space);
    const Operator u = unitary_of(h, kPi / (2.0 * g));
    StateVector g1 = StateVector::Zero(6);
    g1(space.joint_index(1, 1)) = 1.0;
    const StateVector out = u * g1;
    CHECK(std::abs(std::norm(out(space.joint_index(0, 0))) - 1.0) < 1e-10);
    CHECK(std::abs(out(space.joint_index(1, 1))) < 1e-10);
}

TEST_CASE("dispersive coupling is diagonal with the stated shifts") {
    const HilbertSpace space(3);
    const PhysicalParams p = PhysicalParams::make(0.0, 6.0, 18.0);
    const double omega = p.omega_dispersive();
    const Operator h = dispersive_hamiltonian(p, space);
    CHECK(hermiticity_error(h) <= 1e-12);
    CHECK((h - Operator(h.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(std::abs(h(space.joint_index(1, 1), space.joint_index(1, 1)) + omega) < 1e-13);
    CHECK(std::abs(h(space.joint_index(0, 0), space.joint_index(0, 0)) - omega) < 1e-13);

    const PhysicalParams zero_det = PhysicalParams::make(0.0, 6.0, 0.0);
    CHECK_THROWS_AS(dispersive_hamiltonian(zero_det, space), ZeroDetuning);
}

TEST_CASE("|g,1> accumulates phase -1 over tau = pi/omega relative to |g,0>") {
    const HilbertSpace space(3);
    const PhysicalParams p = PhysicalParams::make(0.0, 6.0, 18.0);
    const double tau = kPi / p.omega_dispersive();
    const Operator u = unitary_of(dispersive_hamiltonian(p, space), tau);
    const Complex phase_g1 = u(space.joint_index(1, 1), space.joint_index(1, 1));
    const Complex phase_g0 = u(space.joint_index(1, 0), space.joint_index(1, 0));
    CHECK(std::abs(phase_g1 / phase_g0 - Complex(-1.0, 0.0)) < 1e-12);
}

TEST_CASE("kick unitary flips only ground-state amplitudes") {
    const HilbertSpace space(4);
    const Operator u = kick_unitary(space);
    for (int n = 0; n < 4; ++n) {
        CHECK(std::abs(u(space.joint_index(0, n), space.joint_index(0, n)) - 1.0) < 1e-15);
        CHECK(std::abs(u(space.joint_index(1, n), space.joint_index(1, n)) + 1.0) < 1e-15);
    }
    CHECK((u * u - Operator::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-15);
    const Operator field_op = kron(Operator::Identity(2, 2), annihilation(space));
    CHECK((u * field_op - field_op * u).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("embedding and partial trace round trip") {
    const HilbertSpace space(3);
    DensityMatrix vac = DensityMatrix::Zero(3, 3);
    vac(0, 0) = 1.0;
    const DensityMatrix joint = embed_field_state(vac, AtomLevel::Ground, space);
    CHECK(std::abs(joint(space.joint_index(1, 0), space.joint_index(1, 0)) - 1.0) < 1e-15);
    CHECK(std::abs(joint.trace() - Complex(1.0)) < 1e-15);

    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        const DensityMatrix field = random_density(3, rng);
        for (const AtomLevel level : {AtomLevel::Ground, AtomLevel::Excited}) {
            const DensityMatrix back =
                partial_trace_atom(embed_field_state(field, level, space), space);
            CHECK((back - field).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
    CHECK_THROWS_AS(embed_field_state(DensityMatrix::Zero(2, 2), AtomLevel::Ground, space),
                    DimensionMismatch);
}

TEST_CASE("embedding preserves the eigenvalue spectrum") {
    const HilbertSpace space(3);
    std::mt19937_64 rng(13);
    const DensityMatrix field = random_density(3, rng);
    const DensityMatrix joint = embed_field_state(field, AtomLevel::Excited, space);
    Eigen::SelfAdjointEigenSolver<DensityMatrix> ef(field), ej(joint);
    // the joint spectrum is the field spectrum padded with zeros
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(ej.eigenvalues()(3 + i) - ef.eigenvalues()(i)) < 1e-12);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(ej.eigenvalues()(i)) < 1e-12);
}

TEST_CASE("partial trace of an entangled state kills field coherence") {
    const HilbertSpace space(2);
    StateVector bell = StateVector::Zero(4);
    bell(space.joint_index(1, 1)) = 1.0 / std::sqrt(2.0);  // |g,1>
    bell(space.joint_index(0, 0)) = 1.0 / std::sqrt(2.0);  // |e,0>
    const DensityMatrix joint = bell * bell.adjoint();
    const DensityMatrix field = partial_trace_atom(joint, space);
    CHECK(field(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(field(1, 1).real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(field(1, 0)) < 1e-15);
    CHECK(std::abs(field.trace() - joint.trace()) < 1e-14);
    CHECK_THROWS_AS(partial_trace_atom(field, space), DimensionMismatch);
}

TEST_CASE("state fidelity endpoints") {
    StateVector psi = StateVector::Zero(3);
    psi(0) = 1.0 / std::sqrt(2.0);
    psi(1) = 1.0 / std::sqrt(2.0);
    const DensityMatrix pure = psi * psi.adjoint();
    CHECK(state_fidelity(psi, pure) == doctest::Approx(1.0).epsilon(1e-13));

    StateVector orth = StateVector::Zero(3);
    orth(0) = 1.0 / std::sqrt(2.0);
    orth(1) = -1.0 / std::sqrt(2.0);
    CHECK(state_fidelity(orth, pure) == doctest::Approx(0.0).epsilon(1e-13));

    CHECK_THROWS_AS(state_fidelity(StateVector::Zero(2), pure), DimensionMismatch);
}

TEST_CASE("fidelity against the damped-channel state is 1 at t = 0") {
    // the t = 0 damped state is the projector onto (|0> + |1>)/sqrt(2)
    StateVector psi = StateVector::Zero(3);
    psi(0) = 1.0 / std::sqrt(2.0);
    psi(1) = 1.0 / std::sqrt(2.0);
    DensityMatrix rho2 = DensityMatrix::Zero(3, 3);
    rho2(1, 1) = 0.5;
    rho2(0, 0) = 0.5;
    rho2(1, 0) = 0.5;
    rho2(0, 1) = 0.5;
    CHECK(state_fidelity(psi, rho2) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("density diagnostics flag invalid matrices") {
    DensityMatrix good = DensityMatrix::Zero(2, 2);
    good(0, 0) = 0.25;
    good(1, 1) = 0.75;
    CHECK(is_valid_density(good));
    DensityMatrix bad = good;
    bad(0, 1) = 0.9;  // breaks positivity and hermiticity
    CHECK_FALSE(is_valid_density(bad));
    const DensityCheck c = density_check(0.5 * (bad + bad.adjoint().eval()));
    CHECK(c.min_eigenvalue < 0.0);
}
