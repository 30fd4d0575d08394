#include "qmem/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "qmem/beam.hpp"
#include "qmem/closed_form.hpp"
#include "qmem/hilbert.hpp"
#include "qmem/lindblad.hpp"
#include "qmem/scenario.hpp"

namespace qmem {

namespace {

constexpr double kPi = std::numbers::pi;

class Timer {
  public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

DensityMatrix superposition_qubit(int cutoff, Complex c0, Complex c1) {
    StateVector psi = StateVector::Zero(cutoff);
    psi(0) = c0;
    psi(1) = c1;
    return psi * psi.adjoint();
}

std::string read_bytes(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string brief(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

class Suite {
  public:
    Suite(const FlatConfig& user, const std::filesystem::path& scratch)
        : user_(user), scratch_(scratch) {
        FlatConfig kick_cfg = user_;
        kick_cfg.set("protocol.kind", "kick");
        kick_ = resolve_params(kick_cfg);
        FlatConfig disp_cfg = user_;
        disp_cfg.set("protocol.kind", "dispersive");
        disp_ = resolve_params(disp_cfg);
    }

    ValidationReport run() {
        Timer total;
        ValidationReport rep;
        rep.seed = kick_.beam.seed;
        rep.dt_max = kick_.integrator.dt_max;
        rep.fock_cutoff = kick_.fock_cutoff;
        // a criterion that throws is a red row, not a dead report
        const auto guarded = [&](const char* name, auto&& fn) {
            try {
                rep.checks.push_back(fn());
            } catch (const std::exception& e) {
                CheckResult c;
                c.name = name;
                c.measured = std::numeric_limits<double>::quiet_NaN();
                c.status = CheckStatus::Fail;
                c.note = std::string("exception: ") + e.what();
                rep.checks.push_back(c);
            }
        };
        guarded("acc01_bare_cavity_closed_form", [&] { return acc01(); });
        guarded("acc02_lossless_round_trip", [&] { return acc02(); });
        guarded("acc03_eta_convergence", [&] { return acc03(); });
        guarded("acc04_gain_doubling", [&] { return acc04(); });
        guarded("acc05_gain_700_percent", [&] { return acc05(); });
        guarded("acc06_reduction_identities", [&] { return acc06(); });
        guarded("acc07_monte_carlo_consistency", [&] { return acc07(); });
        guarded("acc08_fidelity_surface", [&] { return acc08(); });
        guarded("acc09_inequality_scaling", [&] { return acc09(); });
        guarded("acc10_solver_hygiene", [&] { return acc10(); });
        reported_rows(rep.checks);
        rep.runtime_seconds = total.seconds();
        return rep;
    }

  private:
    FlatConfig user_;
    std::filesystem::path scratch_;
    ResolvedParams kick_;
    ResolvedParams disp_;

    // artifacts shared between checks
    double order_measured_ = 0.0;
    double bare_drift_rate_ = 0.0;
    double bare_min_eig_ = 1.0;
    RunResult protection_run_;
    double protection_elapsed_ = 0.0;

    CheckResult acc01() {
        CheckResult c;
        c.name = "acc01_bare_cavity_closed_form";
        c.predicted = 0.0;
        c.tolerance = 1e-6;
        Timer timer;

        const HilbertSpace space(kick_.fock_cutoff);
        const double kappa = kick_.physical.kappa;
        const double amp = 1.0 / std::sqrt(2.0);
        const DensityMatrix rho0 = superposition_qubit(kick_.fock_cutoff, amp, amp);
        const auto model =
            LindbladModel::cavity_loss(Operator(), annihilation(space), kappa, 0.0);

        DensityMatrix rho = rho0;
        double max_rel = 0.0, t = 0.0;
        for (int k = 0; k < 20; ++k) {
            rho = evolve(rho, model, 0.025, kick_.integrator);
            t += 0.025;
            const double pop = 0.5 * std::exp(-2.0 * kappa * t);
            const double coh = 0.5 * std::exp(-kappa * t);
            max_rel = std::max(max_rel, std::abs(rho(1, 1).real() - pop) / pop);
            max_rel = std::max(max_rel, std::abs(std::abs(rho(1, 0)) - coh) / coh);
            const DensityCheck dc = density_check(rho);
            bare_drift_rate_ = std::max(bare_drift_rate_, dc.trace_error / t);
            bare_min_eig_ = std::min(bare_min_eig_, dc.min_eigenvalue);
        }

        // fixed probe steps for the convergence-order measurement, chosen
        // well above the roundoff floor
        const auto terminal_rel_err = [&](double dt) {
            IntegratorConfig ic;
            ic.dt_max = dt;
            const DensityMatrix r = evolve(rho0, model, 0.5, ic);
            const double expv = 0.5 * std::exp(-2.0 * kappa * 0.5);
            return std::abs(r(1, 1).real() - expv) / expv;
        };
        const double e1 = terminal_rel_err(4e-3);
        const double e2 = terminal_rel_err(2e-3);
        order_measured_ = e2 > 0.0 ? std::log2(e1 / e2)
                                   : std::numeric_limits<double>::infinity();

        c.runtime_seconds = timer.seconds();
        c.measured = max_rel;
        c.status = (max_rel <= c.tolerance && c.runtime_seconds < 1.0) ? CheckStatus::Pass
                                                                       : CheckStatus::Fail;
        c.note = "max relative deviation of rho11 and |rho10| from the free-decay "
                 "exponentials over t <= 0.5 s; runtime " +
                 brief(c.runtime_seconds) + " s (must stay < 1 s)";
        return c;
    }

    CheckResult acc02() {
        CheckResult c;
        c.name = "acc02_lossless_round_trip";
        c.predicted = 0.0;
        c.tolerance = 1.0;  // worst error scaled by its per-part tolerance
        Timer timer;

        const PhysicalParams lossless =
            PhysicalParams::make(0.0, kick_.physical.G, kick_.physical.delta, 0.0,
                                 kick_.physical.Omega);
        const DensityMatrix rho0 = superposition_qubit(
            kick_.fock_cutoff, 0.6, 0.8 * std::exp(kI * 0.7));
        AtomInstance atom;
        atom.present = true;
        atom.velocity = kick_.beam.v0;

        double err_single = 0.0, err_hundred = 0.0;
        for (const ProtocolKind kind : {ProtocolKind::PhaseKick, ProtocolKind::Dispersive}) {
            const ProtocolSchedule sched = build_schedule(atom, lossless, kind);
            DensityMatrix r = apply_atom_numeric(rho0, sched, lossless, kick_.integrator);
            err_single = std::max(err_single, (r - rho0).cwiseAbs().maxCoeff());
            for (int i = 1; i < 100; ++i)
                r = apply_atom_numeric(r, sched, lossless, kick_.integrator);
            err_hundred = std::max(err_hundred, (r - rho0).cwiseAbs().maxCoeff());
        }
        c.measured = std::max(err_single / 1e-6, err_hundred / 1e-4);
        c.status = c.measured <= c.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
        c.runtime_seconds = timer.seconds();
        c.note = "single atom entrywise error " + brief(err_single) +
                 " (tol 1e-6), after 100 atoms " + brief(err_hundred) +
                 " (tol 1e-4), both protocols at kappa = 0";
        return c;
    }

    CheckResult acc03() {
        CheckResult c;
        c.name = "acc03_eta_convergence";
        c.predicted = 0.0;
        c.tolerance = 1.0;
        Timer timer;

        const double omega = 2.0 * kPi * 1e4;
        const double t_res = 2.0 * kPi / omega;
        IntegratorConfig fine;
        fine.dt_max = (kPi / omega) / 1024.0;
        const double amp = 1.0 / std::sqrt(2.0);
        const DensityMatrix rho0 = superposition_qubit(kick_.fock_cutoff, amp, amp);

        const auto deviation = [&](double x) {
            const PhysicalParams p = PhysicalParams::make(x * omega, omega / 2.0);
            AtomInstance atom;
            atom.present = true;
            const ProtocolSchedule sched = build_schedule(atom, p, ProtocolKind::PhaseKick);
            const DensityMatrix out = apply_atom_numeric(rho0, sched, p, fine);
            const double ratio = std::abs(out(1, 0)) / std::abs(rho0(1, 0));
            return std::abs(ratio -
                            per_atom_factor_kick<double>(x * omega, omega, t_res, 0.0));
        };
        const double d2 = deviation(1e-2);
        const double d3 = deviation(1e-3);
        const double d4 = deviation(1e-4);
        const double r23 = d3 > 0.0 ? d2 / d3 : std::numeric_limits<double>::infinity();
        const double r34 = d4 > 0.0 ? d3 / d4 : std::numeric_limits<double>::infinity();

        c.measured = std::max({d2 / (10.0 * 1e-4), d3 / (10.0 * 1e-6), d4 / (10.0 * 1e-8),
                               50.0 / r23, 50.0 / r34});
        c.status = c.measured <= c.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
        c.runtime_seconds = timer.seconds();
        c.note = "deviations " + brief(d2) + ", " + brief(d3) + ", " + brief(d4) +
                 " at kappa/Omega = 1e-2, 1e-3, 1e-4 (bounds 10 (kappa/Omega)^2); decade "
                 "ratios " +
                 brief(r23) + ", " + brief(r34) + " (must be >= 50)";
        return c;
    }

    CheckResult acc04() {
        CheckResult c;
        c.name = "acc04_gain_doubling";
        c.predicted = 1.0;
        c.tolerance = 0.01;
        KickParams p = kick_.kick_params();
        p.lambda = 1.0;
        p.dv = 0.0;
        c.measured = gain_kick(p);
        c.status = std::abs(c.measured - c.predicted) <= c.tolerance ? CheckStatus::Pass
                                                                     : CheckStatus::Fail;
        c.note = "phase-kick gain at lambda = 1 on the realistic preset";
        return c;
    }

    CheckResult acc05() {
        CheckResult c;
        c.name = "acc05_gain_700_percent";
        c.predicted = 7.0;
        c.tolerance = 0.14;
        DispersiveParams p = disp_.dispersive_params();
        p.lambda = 1.0;
        p.dv = 0.0;
        p.tau = 3.0 * p.T;  // tau = 6 pi / Omega
        p.f_model = zero_f_model();
        c.measured = gain_dispersive(p);
        c.status = std::abs(c.measured - c.predicted) <= c.tolerance ? CheckStatus::Pass
                                                                     : CheckStatus::Fail;
        c.note = "dispersive gain at lambda = 1, tau = 6 pi / Omega, f = 0";
        return c;
    }

    CheckResult acc06() {
        CheckResult c;
        c.name = "acc06_reduction_identities";
        c.predicted = 0.0;
        c.tolerance = 1e-12;
        double max_rel = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double lambda = static_cast<double>(i) / 99.0;
            {
                KickParams p = kick_.kick_params();
                p.lambda = lambda;
                p.dv = 0.0;
                const DwellReport plain = dwell_times_kick(p);
                const DwellReport full = dwell_times_kick_dispersion(p);
                max_rel = std::max(
                    max_rel, std::abs(full.population_dwell / plain.population_dwell - 1.0));
                max_rel = std::max(
                    max_rel, std::abs(full.coherence_dwell / plain.coherence_dwell - 1.0));
            }
            {
                DispersiveParams p = disp_.dispersive_params();
                p.lambda = lambda;
                p.dv = 0.0;
                const DwellReport plain = dwell_times_dispersive(p);
                const DwellReport full = dwell_times_dispersive_dispersion(p);
                max_rel = std::max(
                    max_rel, std::abs(full.population_dwell / plain.population_dwell - 1.0));
                max_rel = std::max(
                    max_rel, std::abs(full.coherence_dwell / plain.coherence_dwell - 1.0));
            }
        }
        c.measured = max_rel;
        c.status = c.measured <= c.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
        c.note = "dispersion-corrected dwell times against the dv = 0 algebra on a "
                 "100-point lambda grid, both protocols";
        return c;
    }

    CheckResult acc07() {
        CheckResult c;
        c.name = "acc07_monte_carlo_consistency";
        c.predicted = 0.0;
        c.tolerance = 0.05;
        Timer timer;

        const double t_res = 1e-4;
        const double omega = 2.0 * kPi / t_res;
        const double kappa = 1e3;  // kappa * T = 0.1
        const PhysicalParams phys = PhysicalParams::make(kappa, omega / 2.0);
        const double amp = 1.0 / std::sqrt(2.0);
        const DensityMatrix field0 = superposition_qubit(kick_.fock_cutoff, amp, amp);

        const double lambdas[] = {0.0, 0.5, 1.0};
        const int slots[] = {40, 60, 40};
        double worst = 0.0;
        std::string detail;
        for (int i = 0; i < 3; ++i) {
            const BeamSpec spec = BeamSpec::make(
                slots[i], lambdas[i], kick_.beam.v0, 0.0, VelocityDist::Uniform, 0.0,
                splitmix64(kick_.beam.seed + 1000 + static_cast<std::uint64_t>(i)));
            const EnsembleResult ens =
                monte_carlo_ensemble(field0, spec, kick_.geometry, phys,
                                     ProtocolKind::PhaseKick, 400, kick_.integrator);
            KickParams kp;
            kp.kappa = kappa;
            kp.Omega = omega;
            kp.T = t_res;
            kp.lambda = lambdas[i];
            const double predicted = 1.0 / (2.0 * dwell_times_kick(kp).population_dwell);
            const double rel = std::abs(ens.coherence_fit.rate / predicted - 1.0);
            worst = std::max(worst, rel);
            detail += (detail.empty() ? "" : ", ") + std::string("lambda=") +
                      brief(lambdas[i]) + ": fit " + brief(ens.coherence_fit.rate) +
                      " vs " + brief(predicted);
        }
        c.runtime_seconds = timer.seconds();
        c.measured = worst;
        c.status = (worst <= c.tolerance && c.runtime_seconds < 60.0) ? CheckStatus::Pass
                                                                      : CheckStatus::Fail;
        c.note = "400-realization coherence rates vs 1/(2 T_r^p) = 1/T_r^c (" + detail +
                 "); runtime " + brief(c.runtime_seconds) + " s (must stay < 60 s)";
        return c;
    }

    CheckResult acc08() {
        CheckResult c;
        c.name = "acc08_fidelity_surface";
        c.predicted = 0.0;
        c.tolerance = 0.0;
        Timer timer;

        double violation = 0.0;
        violation = std::max(violation, std::abs(channel_fidelity(0.3, 0.2, 0.0) - 1.0));
        violation = std::max(violation, std::abs(channel_fidelity(0.3, 0.2, 1e300) - 0.5));

        bool bitwise = true;
        for (const std::string name : {"fig8", "fig9"}) {
            const auto dir_a = scratch_ / ("regen_a_" + name);
            const auto dir_b = scratch_ / ("regen_b_" + name);
            run_scenario(name, user_, dir_a);
            run_scenario(name, user_, dir_b);
            const std::string a = read_bytes(dir_a / (name + ".csv"));
            const std::string b = read_bytes(dir_b / (name + ".csv"));
            if (a.empty() || a != b) bitwise = false;
        }
        if (!bitwise) violation = std::max(violation, 1.0);

        const double amp = 1.0 / std::sqrt(2.0);
        const DensityMatrix field0 = superposition_qubit(kick_.fock_cutoff, amp, amp);
        BeamSpec spec = kick_.beam;
        spec.n_atoms = 3000;
        spec.density = 1.0;
        spec.dv = 0.0;
        protection_run_ = run_beam(field0, spec, kick_.geometry, kick_.physical,
                                   ProtocolKind::PhaseKick, EngineKind::Numeric,
                                   kick_.integrator);
        protection_elapsed_ = protection_run_.samples.back().t;
        const double f_protocol = protection_run_.samples.back().fidelity;
        const double f_free =
            0.5 * (1.0 + std::exp(-kick_.physical.kappa * protection_elapsed_));
        violation = std::max(violation, f_free - f_protocol);

        c.runtime_seconds = timer.seconds();
        c.measured = violation;
        c.status = c.measured <= c.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
        c.note = "fidelity endpoints exact, fig8/fig9 CSV regeneration bitwise, and "
                 "3000-atom protection fidelity " +
                 brief(f_protocol) + " >= free decay " + brief(f_free);
        return c;
    }

    CheckResult acc09() {
        CheckResult c;
        c.name = "acc09_inequality_scaling";
        c.predicted = 0.0;
        c.tolerance = 1e-12;
        BeamRng rng(splitmix64(kick_.beam.seed + 9009));
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const double kappa = rng.uniform(0.5, 20.0);
            const double omega = rng.uniform(1e3, 1e6);
            const double a = rng.uniform(0.0, 0.2);
            const double v0 = rng.uniform(50.0, 1000.0);
            const double lambda = rng.uniform(0.1, 1.0);
            const double dv = rng.uniform(1e-3, 5.0);
            {
                KickParams p;
                p.kappa = kappa;
                p.Omega = omega;
                p.T = 2.0 * kPi / omega;
                p.lambda = lambda;
                p.a = a;
                p.v0 = v0;
                p.dv = dv;
                const double base = inequality_kick(p).lhs;
                KickParams p2 = p;
                p2.dv = 2.0 * dv;
                KickParams ph = p;
                ph.lambda = lambda / 2.0;
                worst = std::max(worst, std::abs(inequality_kick(p2).lhs / (4.0 * base) - 1.0));
                worst = std::max(worst, std::abs(inequality_kick(ph).lhs / (2.0 * base) - 1.0));
            }
            {
                DispersiveParams p;
                p.kappa = kappa;
                p.Omega = omega;
                p.T = 2.0 * kPi / omega;
                p.tau = 3.0 * p.T;
                p.lambda = lambda;
                p.a = a;
                p.v0 = v0;
                p.dv = dv;
                const double base = inequality_dispersive(p).lhs;
                DispersiveParams p2 = p;
                p2.dv = 2.0 * dv;
                DispersiveParams ph = p;
                ph.lambda = lambda / 2.0;
                worst = std::max(worst,
                                 std::abs(inequality_dispersive(p2).lhs / (4.0 * base) - 1.0));
                worst = std::max(worst,
                                 std::abs(inequality_dispersive(ph).lhs / (2.0 * base) - 1.0));
            }
        }
        c.measured = worst;
        c.status = c.measured <= c.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
        c.note = "quadratic scaling in dv/v0 and linear scaling in 1/lambda on 50 random "
                 "parameter draws, both protocols; reduced thresholds are reported rows";
        return c;
    }

    CheckResult acc10() {
        CheckResult c;
        c.name = "acc10_solver_hygiene";
        c.predicted = 0.0;
        c.tolerance = 1.0;
        const double protection_drift =
            protection_elapsed_ > 0.0
                ? protection_run_.max_trace_error / protection_elapsed_
                : 0.0;
        const double drift = std::max(bare_drift_rate_, protection_drift);
        const double min_eig = std::min(bare_min_eig_, protection_run_.min_eigenvalue);
        c.measured = std::max({drift / 1e-9, min_eig < 0.0 ? -min_eig / 1e-8 : 0.0,
                               3.8 / order_measured_});
        c.status = c.measured <= c.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
        c.note = "trace drift " + brief(drift) + "/s (tol 1e-9/s), min eigenvalue " +
                 brief(min_eig) + " (floor -1e-8), step-halving order " +
                 brief(order_measured_) + " (must be >= 3.8)";
        return c;
    }

    void reported_rows(std::vector<CheckResult>& checks) {
        {
            KickParams p = kick_.kick_params();
            p.lambda = 1.0;
            const InequalityReport r = inequality_kick(p);
            CheckResult c;
            c.name = "reported_kick_reduced_threshold_geometry";
            c.predicted = r.reduced_threshold;
            c.measured = r.a_for_reduced_threshold;
            c.status = CheckStatus::Reported;
            c.note = "geometry length a [m] required to reach the reference reduced "
                     "threshold 1e-3 at lambda = 1; a is a free apparatus length here";
            checks.push_back(c);
        }
        {
            DispersiveParams p = disp_.dispersive_params();
            p.lambda = 1.0;
            const InequalityReport r = inequality_dispersive(p);
            CheckResult c;
            c.name = "reported_dispersive_reduced_threshold_geometry";
            c.predicted = r.reduced_threshold;
            c.measured = r.a_for_reduced_threshold;
            c.status = CheckStatus::Reported;
            c.note = "geometry length a [m] required to reach the reference reduced "
                     "threshold 1e-1 at lambda = 1";
            checks.push_back(c);
        }
        {
            const KickParams p = kick_.kick_params();
            const double w =
                dispersion_coherence_coeff_kick(p.kappa, p.Omega, p.a, p.w0, p.v0);
            CheckResult c;
            c.name = "reported_phase_rate_coeff_kick";
            c.predicted = 1e-1;
            c.measured = p.kappa * w / (2.0 * p.T);
            c.status = CheckStatus::Reported;
            c.note = "coefficient of (dv/v0)^2 in the induced phase-damping rate; the "
                     "reference magnitude is 1e-1 with positive sign, while W as defined "
                     "is negative for positive geometry";
            checks.push_back(c);
        }
        {
            const DispersiveParams p = disp_.dispersive_params();
            const double xi = dispersion_coherence_coeff_dispersive(p.kappa, p.Omega, p.tau,
                                                                    p.a, p.w0, p.v0, 0.0);
            CheckResult c;
            c.name = "reported_phase_rate_coeff_dispersive";
            c.predicted = 1e-4;
            c.measured = p.kappa * xi / (2.0 * (p.T + p.tau));
            c.status = CheckStatus::Reported;
            c.note = "coefficient of (dv/v0)^2 in the dispersive phase-damping rate "
                     "against the reference magnitude 1e-4";
            checks.push_back(c);
        }
        {
            // empirical correction f extracted from one numeric dispersive passage
            const double omega = 2.0 * kPi * 1e4;
            const double x = 1e-3;
            const double g = omega / 2.0;
            const PhysicalParams phys = PhysicalParams::make(x * omega, g, 3.0 * g);
            const double t_res = 2.0 * kPi / omega;
            IntegratorConfig fine;
            fine.dt_max = (kPi / omega) / 1024.0;
            const double amp = 1.0 / std::sqrt(2.0);
            const DensityMatrix rho0 = superposition_qubit(kick_.fock_cutoff, amp, amp);
            AtomInstance atom;
            atom.present = true;
            const ProtocolSchedule sched =
                build_schedule(atom, phys, ProtocolKind::Dispersive);
            const DensityMatrix out = apply_atom_numeric(rho0, sched, phys, fine);
            const double ratio = std::abs(out(1, 0)) / std::abs(rho0(1, 0));
            const double f_emp =
                (ratio / std::exp(-phys.kappa * t_res / 2.0) - 1.0) * omega / phys.kappa;
            CheckResult c;
            c.name = "reported_dispersive_empirical_f";
            c.predicted = 0.0;
            c.measured = f_emp;
            c.status = CheckStatus::Reported;
            c.note = "f fitted from one numeric dispersive passage at kappa/Omega = 1e-3, "
                     "tau = 6 pi/Omega; the default model uses f = 0";
            checks.push_back(c);
        }
    }
};

}  // namespace

bool ValidationReport::all_passed() const { return failures() == 0; }

int ValidationReport::failures() const {
    int n = 0;
    for (const CheckResult& c : checks)
        if (c.status == CheckStatus::Fail) ++n;
    return n;
}

ValidationReport run_acceptance_suite(const FlatConfig& cfg,
                                      const std::filesystem::path& scratch_dir) {
    std::filesystem::create_directories(scratch_dir);
    Suite suite(cfg, scratch_dir);
    return suite.run();
}

void print_report(std::ostream& os, const ValidationReport& report) {
    int passed = 0, failed = 0, reported = 0;
    for (const CheckResult& c : report.checks) {
        const char* label = c.status == CheckStatus::Pass     ? "[PASS]    "
                            : c.status == CheckStatus::Fail   ? "[FAIL]    "
                                                              : "[REPORTED]";
        os << label << " " << c.name << "  measured=" << brief(c.measured);
        if (c.status == CheckStatus::Reported)
            os << " reference=" << brief(c.predicted);
        else
            os << " predicted=" << brief(c.predicted) << " tolerance=" << brief(c.tolerance);
        os << "\n            " << c.note << "\n";
        if (c.status == CheckStatus::Pass) ++passed;
        else if (c.status == CheckStatus::Fail) ++failed;
        else ++reported;
    }
    os << "acceptance: " << passed << " passed, " << failed << " failed, " << reported
       << " reported (seed=" << report.seed << ", dt_max=" << brief(report.dt_max)
       << ", fock_cutoff=" << report.fock_cutoff << ", total "
       << brief(report.runtime_seconds) << " s)\n";
}

void write_validation_json(const std::filesystem::path& file,
                           const ValidationReport& report) {
    nlohmann::json j;
    j["environment"] = {{"seed", report.seed},
                        {"dt_max", report.dt_max},
                        {"fock_cutoff", report.fock_cutoff}};
    j["runtime_seconds"] = report.runtime_seconds;
    j["all_passed"] = report.all_passed();
    nlohmann::json rows = nlohmann::json::array();
    for (const CheckResult& c : report.checks) {
        rows.push_back({{"check_name", c.name},
                        {"predicted", c.predicted},
                        {"measured", c.measured},
                        {"tolerance", c.tolerance},
                        {"status", c.status == CheckStatus::Pass     ? "pass"
                                   : c.status == CheckStatus::Fail   ? "fail"
                                                                     : "reported"},
                        {"note", c.note},
                        {"runtime_seconds", c.runtime_seconds}});
    }
    j["checks"] = rows;
    std::ofstream f(file, std::ios::binary);
    if (!f) throw ConfigError("cannot write validation report: " + file.string());
    f << j.dump(2) << "\n";
}

}  // namespace qmem
