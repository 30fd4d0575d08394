#include "qmem/beam.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "qmem/closed_form.hpp"

namespace qmem {

namespace {

constexpr double kPi = std::numbers::pi;

// Fraction of the stability bound dt*(|H| + rates) <= 0.1 actually used per
// segment. Decay-only segments get a tighter cap: their error budget is
// relative to slowly decaying amplitudes rather than to a rotating phase.
constexpr double kCoherentSafety = 0.08;
constexpr double kDissipativeSafety = 0.02;

IntegratorConfig segment_config(const LindbladModel& model, const IntegratorConfig& cfg,
                                bool coherent) {
    IntegratorConfig seg = cfg;
    const double rate = model.rate_scale();
    if (rate > 0.0) {
        const double safety = coherent ? kCoherentSafety : kDissipativeSafety;
        seg.dt_max = std::min(cfg.dt_max, safety / rate);
    }
    return seg;
}

StateVector dominant_eigenvector(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho);
    return es.eigenvectors().col(rho.rows() - 1);
}

RateFit fit_log_linear(const std::vector<double>& t, const std::vector<double>& y) {
    std::vector<double> ts, logs;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (y[k] > 0.0) {
            ts.push_back(t[k]);
            logs.push_back(std::log(y[k]));
        }
    }
    const int n = static_cast<int>(ts.size());
    if (n < 2) throw FitDegenerate("fewer than two positive samples to fit");
    double mt = 0.0, ml = 0.0;
    for (int k = 0; k < n; ++k) {
        mt += ts[k];
        ml += logs[k];
    }
    mt /= n;
    ml /= n;
    double stt = 0.0, stl = 0.0;
    for (int k = 0; k < n; ++k) {
        stt += (ts[k] - mt) * (ts[k] - mt);
        stl += (ts[k] - mt) * (logs[k] - ml);
    }
    if (stt == 0.0) throw FitDegenerate("all samples share one time point");
    RateFit fit;
    const double slope = stl / stt;
    fit.rate = -slope;
    fit.intercept = ml - slope * mt;
    double ss = 0.0;
    for (int k = 0; k < n; ++k) {
        const double r = logs[k] - (fit.intercept + slope * ts[k]);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / n);
    fit.points_used = n;
    return fit;
}

}  // namespace

double Geometry::effective_length() const { return std::sqrt(kPi) * w0; }

BeamSpec BeamSpec::make(int n_atoms, double density, double v0, double dv,
                        VelocityDist dist, double free_window, std::uint64_t seed) {
    if (n_atoms < 0) throw ConfigError("beam.n_atoms must be >= 0");
    if (density < 0.0 || density > 1.0) throw ConfigError("beam.lambda must be in [0,1]");
    if (!(v0 > 0.0)) throw ConfigError("beam.v0 must be > 0");
    if (dv < 0.0) throw ConfigError("beam.dv must be >= 0");
    if (free_window < 0.0) throw ConfigError("beam.free_window must be >= 0");
    BeamSpec s;
    s.n_atoms = n_atoms;
    s.density = density;
    s.v0 = v0;
    s.dv = dv;
    s.velocity_dist = dist;
    s.free_window = free_window;
    s.seed = seed;
    return s;
}

double BeamSpec::velocity_rms() const {
    switch (velocity_dist) {
        case VelocityDist::Uniform: return dv / std::sqrt(3.0);
        case VelocityDist::Gaussian: return dv;
        case VelocityDist::Fixed: return dv;
    }
    return dv;
}

std::vector<std::string> BeamSpec::warnings() const {
    std::vector<std::string> w;
    if (v0 > 0.0 && dv / v0 > 0.05)
        w.push_back("beam.dv exceeds 5% of beam.v0; the dispersion expansions assume dv << v0");
    return w;
}

double ProtocolSchedule::wall_clock() const {
    double t = 0.0;
    for (const Segment& s : segments) t += s.duration;
    return t;
}

double BeamRng::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double BeamRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

double BeamRng::gaussian() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * kPi * u2);
}

bool BeamRng::bernoulli(double p) { return uniform01() < p; }

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

AtomInstance sample_atom(const BeamSpec& spec, const Geometry& geom, ProtocolKind kind,
                         BeamRng& rng) {
    AtomInstance at;
    at.present = rng.bernoulli(spec.density);
    double dvi = 0.0;
    switch (spec.velocity_dist) {
        case VelocityDist::Fixed: dvi = spec.dv; break;
        case VelocityDist::Uniform: dvi = rng.uniform(-spec.dv, spec.dv); break;
        case VelocityDist::Gaussian: dvi = spec.dv * rng.gaussian(); break;
    }
    at.velocity = spec.v0 + dvi;
    const double second_zone = kind == ProtocolKind::PhaseKick ? geom.c : geom.d;
    at.dt_pi1 = (geom.a / spec.v0) * (dvi / spec.v0);
    at.dt_pi2 = (second_zone / spec.v0) * (dvi / spec.v0);
    return at;
}

ProtocolSchedule build_schedule(const AtomInstance& atom, const PhysicalParams& params,
                                ProtocolKind kind) {
    const double half_pulse = kPi / params.Omega;
    const double tau =
        kind == ProtocolKind::Dispersive ? kPi / params.omega_dispersive() : 0.0;

    ProtocolSchedule sched;
    sched.kind = kind;
    if (!atom.present) {
        sched.segments.push_back({SegmentKind::Free, 2.0 * half_pulse + tau});
        return sched;
    }
    double first = half_pulse + atom.dt_pi1;
    double second = half_pulse - atom.dt_pi2;
    if (first < 0.0) {
        first = 0.0;
        sched.clamped = true;
    }
    if (second < 0.0) {
        second = 0.0;
        sched.clamped = true;
    }
    sched.segments.push_back({SegmentKind::Resonant, first});
    if (kind == ProtocolKind::PhaseKick)
        sched.segments.push_back({SegmentKind::Kick, 0.0});
    else
        sched.segments.push_back({SegmentKind::Dispersive, tau});
    sched.segments.push_back({SegmentKind::Resonant, second});
    return sched;
}

DensityMatrix apply_atom_numeric(const DensityMatrix& field, const ProtocolSchedule& sched,
                                 const PhysicalParams& params, const IntegratorConfig& cfg) {
    const HilbertSpace space(static_cast<int>(field.rows()));
    const Operator a_joint = joint_annihilation(space);
    DensityMatrix joint = embed_field_state(field, AtomLevel::Ground, space);

    for (const Segment& seg : sched.segments) {
        switch (seg.kind) {
            case SegmentKind::Resonant: {
                const auto model = LindbladModel::cavity_loss(
                    jaynes_cummings_hamiltonian(params, space), a_joint, params.kappa,
                    params.nbar);
                joint = evolve(joint, model, seg.duration, segment_config(model, cfg, true));
                break;
            }
            case SegmentKind::Dispersive: {
                const auto model = LindbladModel::cavity_loss(
                    dispersive_hamiltonian(params, space), a_joint, params.kappa,
                    params.nbar);
                joint = evolve(joint, model, seg.duration, segment_config(model, cfg, true));
                break;
            }
            case SegmentKind::Kick:
                joint = evolve_unitary(joint, kick_unitary(space));
                break;
            case SegmentKind::Free: {
                const auto model =
                    LindbladModel::cavity_loss(Operator(), a_joint, params.kappa, params.nbar);
                joint = evolve(joint, model, seg.duration, segment_config(model, cfg, false));
                break;
            }
        }
    }
    return partial_trace_atom(joint, space);
}

DensityMatrix apply_atom_analytic(const DensityMatrix& field, double factor) {
    if (!(factor > 0.0) || factor > 1.0 + 1e-6)
        throw FactorOutOfRange("per-atom factor must lie in (0, 1 + 1e-6]");
    if (field.rows() < 2 || field.rows() != field.cols())
        throw DimensionMismatch("field state must hold at least the 0/1 Fock levels");
    DensityMatrix out = field;
    out(1, 1) = factor * factor * field(1, 1);
    out(0, 0) = field(0, 0) + (1.0 - factor * factor) * field(1, 1);
    out(1, 0) = factor * field(1, 0);
    out(0, 1) = factor * field(0, 1);
    return out;
}

double leakage_above_single_photon(const DensityMatrix& field) {
    double p = 0.0;
    for (Eigen::Index n = 2; n < field.rows(); ++n) p += field(n, n).real();
    return p;
}

RunResult run_beam(const DensityMatrix& field0, const BeamSpec& spec, const Geometry& geom,
                   const PhysicalParams& params, ProtocolKind kind, EngineKind engine,
                   const IntegratorConfig& cfg) {
    const HilbertSpace space(static_cast<int>(field0.rows()));
    const double resonant_total = 2.0 * kPi / params.Omega;
    const double tau =
        kind == ProtocolKind::Dispersive ? kPi / params.omega_dispersive() : 0.0;
    const double nominal_wall = resonant_total + tau;

    RunResult out;
    out.velocity_rms = spec.velocity_rms();
    out.warnings = spec.warnings();

    const StateVector psi_ref = dominant_eigenvector(field0);
    DensityMatrix field = field0;

    const auto record = [&](double t) {
        RunSample s;
        s.t = t;
        s.rho11 = field(1, 1).real();
        s.coherence = std::abs(field(1, 0));
        s.fidelity = state_fidelity(psi_ref, field);
        out.samples.push_back(s);
        out.max_leakage = std::max(out.max_leakage, leakage_above_single_photon(field));
        const DensityCheck c = density_check(field);
        out.max_trace_error = std::max(out.max_trace_error, c.trace_error);
        out.min_eigenvalue = std::min(out.min_eigenvalue, c.min_eigenvalue);
    };

    double t = 0.0;
    record(t);

    BeamRng rng(spec.seed);
    const auto free_model =
        LindbladModel::cavity_loss(Operator(), annihilation(space), params.kappa, params.nbar);
    const IntegratorConfig free_cfg = segment_config(free_model, cfg, false);

    for (int i = 0; i < spec.n_atoms; ++i) {
        const AtomInstance atom = sample_atom(spec, geom, kind, rng);
        double slot_wall = 0.0;
        if (engine == EngineKind::Numeric) {
            const ProtocolSchedule sched = build_schedule(atom, params, kind);
            if (sched.clamped) ++out.clamped_slots;
            if (atom.present)
                field = apply_atom_numeric(field, sched, params, cfg);
            else
                field = evolve(field, free_model, sched.wall_clock(), free_cfg);
            if (spec.free_window > 0.0)
                field = evolve(field, free_model, spec.free_window, free_cfg);
            slot_wall = sched.wall_clock() + spec.free_window;
        } else {
            double factor;
            if (atom.present) {
                factor = kind == ProtocolKind::PhaseKick
                             ? per_atom_factor_kick<double>(params.kappa, params.Omega,
                                                            resonant_total, spec.free_window)
                             : per_atom_factor_dispersive<double>(params.kappa, params.Omega,
                                                                  resonant_total,
                                                                  spec.free_window, 0.0);
            } else {
                factor = std::exp(-params.kappa * (nominal_wall + spec.free_window));
            }
            field = apply_atom_analytic(field, factor);
            slot_wall = nominal_wall + spec.free_window;
        }
        t += slot_wall;
        record(t);
    }
    out.final_field = field;
    return out;
}

EnsembleResult monte_carlo_ensemble(const DensityMatrix& field0, const BeamSpec& spec,
                                    const Geometry& geom, const PhysicalParams& params,
                                    ProtocolKind kind, int n_realizations,
                                    const IntegratorConfig& cfg, EngineKind engine,
                                    int n_threads) {
    if (n_realizations < 1) throw ConfigError("n_realizations must be >= 1");

    std::vector<RunResult> results(n_realizations);
    const auto worker = [&](int begin, int step) {
        for (int r = begin; r < n_realizations; r += step) {
            BeamSpec s = spec;
            s.seed = splitmix64(spec.seed + static_cast<std::uint64_t>(r));
            results[r] = run_beam(field0, s, geom, params, kind, engine, cfg);
        }
    };

    int threads = n_threads > 0 ? n_threads
                                : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, n_realizations);
    if (threads == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int w = 0; w < threads; ++w) pool.emplace_back(worker, w, threads);
        for (auto& th : pool) th.join();
    }

    const std::size_t n_samples = results.front().samples.size();
    EnsembleResult out;
    out.realizations = n_realizations;
    auto init = [&](SeriesStats& s) {
        s.t.assign(n_samples, 0.0);
        s.mean.assign(n_samples, 0.0);
        s.std_error.assign(n_samples, 0.0);
    };
    init(out.rho11);
    init(out.coherence);
    init(out.fidelity);

    // reduce strictly in realization order so thread count cannot change bits
    for (int r = 0; r < n_realizations; ++r) {
        const RunResult& rr = results[r];
        out.max_leakage = std::max(out.max_leakage, rr.max_leakage);
        for (std::size_t k = 0; k < n_samples; ++k) {
            out.rho11.t[k] += rr.samples[k].t;
            out.rho11.mean[k] += rr.samples[k].rho11;
            out.coherence.mean[k] += rr.samples[k].coherence;
            out.fidelity.mean[k] += rr.samples[k].fidelity;
        }
    }
    for (std::size_t k = 0; k < n_samples; ++k) {
        out.rho11.t[k] /= n_realizations;
        out.coherence.t[k] = out.rho11.t[k];
        out.fidelity.t[k] = out.rho11.t[k];
        out.rho11.mean[k] /= n_realizations;
        out.coherence.mean[k] /= n_realizations;
        out.fidelity.mean[k] /= n_realizations;
    }
    if (n_realizations > 1) {
        for (int r = 0; r < n_realizations; ++r) {
            const RunResult& rr = results[r];
            for (std::size_t k = 0; k < n_samples; ++k) {
                const double d1 = rr.samples[k].rho11 - out.rho11.mean[k];
                const double d2 = rr.samples[k].coherence - out.coherence.mean[k];
                const double d3 = rr.samples[k].fidelity - out.fidelity.mean[k];
                out.rho11.std_error[k] += d1 * d1;
                out.coherence.std_error[k] += d2 * d2;
                out.fidelity.std_error[k] += d3 * d3;
            }
        }
        const double norm = 1.0 / (static_cast<double>(n_realizations) *
                                   (n_realizations - 1));
        for (std::size_t k = 0; k < n_samples; ++k) {
            out.rho11.std_error[k] = std::sqrt(out.rho11.std_error[k] * norm);
            out.coherence.std_error[k] = std::sqrt(out.coherence.std_error[k] * norm);
            out.fidelity.std_error[k] = std::sqrt(out.fidelity.std_error[k] * norm);
        }
    }

    out.population_fit = fit_log_linear(out.rho11.t, out.rho11.mean);
    out.coherence_fit = fit_log_linear(out.coherence.t, out.coherence.mean);
    return out;
}

}  // namespace qmem
