#include "qmem/lindblad.hpp"

#include <cmath>

namespace qmem {

namespace {

void check_dims(const DensityMatrix& rho, const LindbladModel& model) {
    if (rho.rows() != model.dim() || rho.cols() != model.dim())
        throw DimensionMismatch("density matrix does not match the model dimension");
}

// Scratch space so the RK4 loop never allocates.
struct Workspace {
    Operator c, t1, t2, t3;
    explicit Workspace(int d)
        : c(Operator::Zero(d, d)),
          t1(Operator::Zero(d, d)),
          t2(Operator::Zero(d, d)),
          t3(Operator::Zero(d, d)) {}
};

void rhs_into(Operator& out, const DensityMatrix& rho, const LindbladModel& m,
              Workspace& w, bool has_hamiltonian) {
    out.setZero();
    if (has_hamiltonian) {
        w.c.noalias() = m.hamiltonian * rho;
        out = -kI * (w.c - w.c.adjoint());
    }
    if (m.variant == LindbladVariant::CavityLoss) {
        const double down = m.kappa * (1.0 + m.nbar);
        if (down != 0.0) {
            w.t1.noalias() = m.a() * rho;
            w.t2.noalias() = w.t1 * m.a_dagger();
            w.t3.noalias() = m.number() * rho;
            out += down * (2.0 * w.t2 - w.t3 - w.t3.adjoint());
        }
        const double up = m.kappa * m.nbar;
        if (up != 0.0) {
            w.t1.noalias() = m.a_dagger() * rho;
            w.t2.noalias() = w.t1 * m.a();
            w.t3.noalias() = m.a_a_dagger() * rho;
            out += up * (2.0 * w.t2 - w.t3 - w.t3.adjoint());
        }
    } else {
        if (m.beta != 0.0) {
            w.t1.noalias() = m.a() * rho;
            w.t2.noalias() = w.t1 * m.a_dagger();
            w.t3.noalias() = m.number() * rho;
            out += m.beta * (2.0 * w.t2 - w.t3 - w.t3.adjoint());
        }
        if (m.epsilon != 0.0) {
            w.t1.noalias() = m.number() * rho;
            w.t2.noalias() = w.t1 * m.number();
            w.t3.noalias() = m.number_squared() * rho;
            out += m.epsilon * (2.0 * w.t2 - w.t3 - w.t3.adjoint());
        }
    }
}

}  // namespace

LindbladModel LindbladModel::cavity_loss(Operator hamiltonian, const Operator& a,
                                         double kappa, double nbar) {
    if (kappa < 0.0 || nbar < 0.0)
        throw ConfigError("kappa and nbar must be >= 0");
    LindbladModel m;
    m.variant = LindbladVariant::CavityLoss;
    m.kappa = kappa;
    m.nbar = nbar;
    m.a_ = a;
    m.ad_ = a.adjoint();
    m.n_ = m.ad_ * a;
    m.aad_ = a * m.ad_;
    m.n2_ = m.n_ * m.n_;
    if (hamiltonian.size() == 0) hamiltonian = Operator::Zero(a.rows(), a.cols());
    if (hamiltonian.rows() != a.rows() || hamiltonian.cols() != a.cols())
        throw DimensionMismatch("Hamiltonian and loss operator dimensions differ");
    m.hamiltonian = std::move(hamiltonian);
    m.h_norm_ = m.hamiltonian.norm();
    return m;
}

LindbladModel LindbladModel::amplitude_plus_phase(Operator hamiltonian, const Operator& a,
                                                  double beta, double epsilon) {
    if (beta < 0.0 || epsilon < 0.0)
        throw ConfigError("beta and epsilon must be >= 0");
    LindbladModel m = cavity_loss(std::move(hamiltonian), a, 0.0, 0.0);
    m.variant = LindbladVariant::AmplitudePlusPhase;
    m.beta = beta;
    m.epsilon = epsilon;
    return m;
}

double LindbladModel::rate_scale() const {
    return h_norm_ + 2.0 * kappa * (nbar + 1.0) + 2.0 * beta + 2.0 * epsilon;
}

Operator lindblad_rhs(const DensityMatrix& rho, const LindbladModel& model) {
    check_dims(rho, model);
    Workspace w(model.dim());
    Operator out(model.dim(), model.dim());
    rhs_into(out, rho, model, w, model.hamiltonian.norm() != 0.0);
    return out;
}

DensityMatrix evolve(const DensityMatrix& rho0, const LindbladModel& model,
                     double duration, const IntegratorConfig& cfg) {
    check_dims(rho0, model);
    if (duration < 0.0) throw ConfigError("duration must be >= 0");
    if (duration == 0.0) return rho0;
    if (!(cfg.dt_max > 0.0)) throw ConfigError("dt_max must be > 0");

    const long steps = std::max(1L, static_cast<long>(std::ceil(duration / cfg.dt_max)));
    const double h = duration / static_cast<double>(steps);
    if (h * model.rate_scale() > 0.1)
        throw UnstableStep("step size violates dt * (|H| + rates) <= 0.1");

    const int d = model.dim();
    const bool has_h = model.hamiltonian.norm() != 0.0;
    Workspace w(d);
    Operator k1(d, d), k2(d, d), k3(d, d), k4(d, d), tmp(d, d);
    DensityMatrix rho = rho0;

    for (long s = 0; s < steps; ++s) {
        rhs_into(k1, rho, model, w, has_h);
        tmp = rho + (0.5 * h) * k1;
        rhs_into(k2, tmp, model, w, has_h);
        tmp = rho + (0.5 * h) * k2;
        rhs_into(k3, tmp, model, w, has_h);
        tmp = rho + h * k3;
        rhs_into(k4, tmp, model, w, has_h);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        // keep rho exactly Hermitian step by step
        tmp = rho.adjoint();
        rho += tmp;
        rho *= 0.5;
        if (cfg.renormalize_trace) rho /= rho.trace().real();
    }
    return rho;
}

DensityMatrix evolve_unitary(const DensityMatrix& rho0, const Operator& u) {
    if (u.rows() != u.cols() || u.rows() != rho0.rows())
        throw DimensionMismatch("unitary and state dimensions differ");
    const Operator gram = u * u.adjoint();
    const double dev = (gram - Operator::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
    if (dev > 1e-10) throw NotUnitary("operator is not unitary within 1e-10");
    return u * rho0 * u.adjoint();
}

}  // namespace qmem
