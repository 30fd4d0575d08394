#pragma once

#include "qmem/errors.hpp"
#include "qmem/types.hpp"

namespace qmem {

enum class LindbladVariant {
    CavityLoss,          // kappa(1+nbar){[a rho,a+]+[a,rho a+]} + kappa nbar{[a+ rho,a]+[a+,rho a]}
    AmplitudePlusPhase,  // beta{[a rho,a+]+[a,rho a+]} + eps{[n rho,n]+[n,rho n]}, n = a+a
};

// Piecewise-constant generator: -i[H,rho] plus the variant's dissipators.
// The loss operator must act on the field factor of whatever space rho
// lives in (pass joint_annihilation() for joint states, annihilation()
// for field-only states). H may be zero.
struct LindbladModel {
    Operator hamiltonian;
    LindbladVariant variant = LindbladVariant::CavityLoss;
    double kappa = 0.0;
    double nbar = 0.0;
    double beta = 0.0;
    double epsilon = 0.0;

    static LindbladModel cavity_loss(Operator hamiltonian, const Operator& a,
                                     double kappa, double nbar = 0.0);
    static LindbladModel amplitude_plus_phase(Operator hamiltonian, const Operator& a,
                                              double beta, double epsilon);

    int dim() const { return static_cast<int>(a_.rows()); }

    // Sum of the rates entering the step-size stability guard.
    double rate_scale() const;

    // cached operator products, set by the factories
    const Operator& a() const { return a_; }
    const Operator& a_dagger() const { return ad_; }
    const Operator& number() const { return n_; }
    const Operator& a_a_dagger() const { return aad_; }
    const Operator& number_squared() const { return n2_; }

  private:
    Operator a_, ad_, n_, aad_, n2_;
    double h_norm_ = 0.0;
};

// Fixed-step classical Runge-Kutta (4th order, global error O(dt^4)).
struct IntegratorConfig {
    double dt_max = 1e-3;             // seconds
    bool renormalize_trace = false;   // off by default so drift is observable
};

/// d(rho)/dt for the model. The result is traceless (within roundoff) and
/// Hermiticity-preserving.
Operator lindblad_rhs(const DensityMatrix& rho, const LindbladModel& model);

/// Integrate rho0 forward by `duration` with steps ceil(duration/dt_max).
/// rho is re-symmetrized after every step; the trace is renormalized only
/// when cfg.renormalize_trace is set. Throws UnstableStep when the actual
/// step h satisfies h * (|H| + rates) > 0.1.
DensityMatrix evolve(const DensityMatrix& rho0, const LindbladModel& model,
                     double duration, const IntegratorConfig& cfg);

/// rho -> U rho U^dagger. Throws NotUnitary when |U U^dagger - I| > 1e-10.
DensityMatrix evolve_unitary(const DensityMatrix& rho0, const Operator& u);

}  // namespace qmem
