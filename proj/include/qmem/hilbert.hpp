#pragma once

#include "qmem/errors.hpp"
#include "qmem/types.hpp"

namespace qmem {

// Two-level atom tensored with a truncated Fock mode.
//
// Joint basis ordering is fixed: atom index {e=0, g=1} outer, field index
// {0..fock_cutoff-1} inner, so the joint index is atom*fock_cutoff + n.
struct HilbertSpace {
    static constexpr int atom_dim = 2;

    explicit HilbertSpace(int fock_cutoff);

    int fock_cutoff() const { return fock_cutoff_; }
    int joint_dim() const { return atom_dim * fock_cutoff_; }
    int joint_index(int atom, int n) const { return atom * fock_cutoff_ + n; }

  private:
    int fock_cutoff_;
};

enum class AtomLevel { Excited = 0, Ground = 1 };

// All rates in rad/s, hbar = 1. The interaction picture is used throughout:
// segment Hamiltonians carry only the coupling terms, never the free
// optical-frequency part.
struct PhysicalParams {
    double kappa = 0.0;  // cavity loss rate as it appears in the master
                         // equation; photon population decays at 2*kappa
    double nbar = 0.0;   // mean thermal photon number
    double G = 0.0;      // vacuum coupling constant (half the vacuum Rabi rate)
    double delta = 0.0;  // atom-cavity detuning, used by dispersive segments
    double Omega = 0.0;  // effective Rabi frequency; pi-pulse duration is pi/Omega

    // Omega <= 0 requests the default Omega = 2G.
    static PhysicalParams make(double kappa, double G, double delta = 0.0,
                               double nbar = 0.0, double Omega = 0.0);

    // G^2/delta; throws ZeroDetuning when delta == 0.
    double omega_dispersive() const;
};

// Field-space ladder operators, dim = fock_cutoff.
Operator annihilation(const HilbertSpace& space);
Operator creation(const HilbertSpace& space);
Operator number_operator(const HilbertSpace& space);

// Atom-space (2x2) operators.
Operator sigma_z();
Operator sigma_plus();   // |e><g|
Operator sigma_minus();  // |g><e|

/// Annihilation acting on the field factor of the joint space: I_atom (x) a.
Operator joint_annihilation(const HilbertSpace& space);

/// Resonant interaction-picture coupling G(a sigma+ + a^dag sigma-) on the
/// joint space; couples |g,n+1> <-> |e,n> with matrix element G*sqrt(n+1).
Operator jaynes_cummings_hamiltonian(const PhysicalParams& p, const HilbertSpace& space);

/// Dispersive interaction-picture Hamiltonian
///   omega [ (a^dag a + 1)|e><e| - a^dag a |g><g| ],  omega = G^2/delta.
/// Diagonal in the joint basis. Throws ZeroDetuning when delta == 0.
Operator dispersive_hamiltonian(const PhysicalParams& p, const HilbertSpace& space);

/// sigma_z on the atom, identity on the field. Unitary, Hermitian, involutive.
Operator kick_unitary(const HilbertSpace& space);

/// |atom><atom| (x) rho_field. Throws DimensionMismatch if the field state
/// does not match the cutoff.
DensityMatrix embed_field_state(const DensityMatrix& field, AtomLevel atom,
                                const HilbertSpace& space);

/// Trace over the atom factor; preserves the trace.
DensityMatrix partial_trace_atom(const DensityMatrix& joint, const HilbertSpace& space);

/// F = <psi|rho|psi>, clipped to [0,1] after a 1e-12 tolerance.
/// psi must be normalized; dimensions must agree.
double state_fidelity(const StateVector& psi, const DensityMatrix& rho);

}  // namespace qmem
