#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qmem/hilbert.hpp"
#include "qmem/lindblad.hpp"

namespace qmem {

enum class ProtocolKind { PhaseKick, Dispersive };
enum class VelocityDist { Uniform, Gaussian, Fixed };
enum class EngineKind { Numeric, Analytic };

// Beamline lengths in meters, measured from the exit of the selection box.
struct Geometry {
    double a = 0.0;   // to the start of the first resonant zone
    double b = 0.0;   // to the kick point / start of the dispersive zone
    double c = 0.0;   // to the end of the second resonant zone (phase kick)
    double d = 0.0;   // to the end of the second resonant zone (dispersive)
    double w0 = 0.0;  // transverse mode waist

    double effective_length() const;  // sqrt(pi) * w0
};

struct BeamSpec {
    int n_atoms = 0;
    double density = 1.0;      // lambda: probability that a slot holds an atom
    double v0 = 1.0;           // selected velocity [m/s]
    double dv = 0.0;           // dispersion scale [m/s]
    VelocityDist velocity_dist = VelocityDist::Uniform;
    double free_window = 0.0;  // idle seconds appended to every slot
    std::uint64_t seed = 0;

    static BeamSpec make(int n_atoms, double density, double v0, double dv,
                         VelocityDist dist = VelocityDist::Uniform,
                         double free_window = 0.0, std::uint64_t seed = 0);

    /// rms of the sampled velocity deviation: dv/sqrt(3) for uniform,
    /// dv for gaussian and fixed. Feed this, not dv, into the closed-form
    /// dispersion expressions.
    double velocity_rms() const;

    std::vector<std::string> warnings() const;
};

struct AtomInstance {
    bool present = false;
    double velocity = 0.0;
    double dt_pi1 = 0.0;  // (a/v0)(dv_i/v0), added to the first pulse
    double dt_pi2 = 0.0;  // ((c or d)/v0)(dv_i/v0), removed from the second
};

enum class SegmentKind { Resonant, Dispersive, Kick, Free };

struct Segment {
    SegmentKind kind;
    double duration;  // seconds; zero for Kick
};

struct ProtocolSchedule {
    ProtocolKind kind = ProtocolKind::PhaseKick;
    std::vector<Segment> segments;
    bool clamped = false;  // some perturbed duration went negative and was clamped

    double wall_clock() const;
};

// Deterministic sampler: every distribution is built from the raw mt19937_64
// stream, so identical seeds reproduce identical beams on any platform.
class BeamRng {
  public:
    explicit BeamRng(std::uint64_t seed) : engine_(seed) {}

    double uniform01();
    double uniform(double lo, double hi);
    double gaussian();  // standard normal, consumes exactly two draws
    bool bernoulli(double p);

  private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

AtomInstance sample_atom(const BeamSpec& spec, const Geometry& geom, ProtocolKind kind,
                         BeamRng& rng);

/// Nominal schedule: Resonant(pi/Omega) [Kick | Dispersive(pi/omega)]
/// Resonant(pi/Omega), with the first pulse lengthened by dt_pi1 and the
/// second shortened by dt_pi2. An absent atom yields one Free segment of the
/// nominal wall-clock duration.
ProtocolSchedule build_schedule(const AtomInstance& atom, const PhysicalParams& params,
                                ProtocolKind kind);

/// March one atom through the cavity: embed a fresh ground-state atom,
/// evolve every segment under the matching generator, trace the atom out.
DensityMatrix apply_atom_numeric(const DensityMatrix& field, const ProtocolSchedule& sched,
                                 const PhysicalParams& params, const IntegratorConfig& cfg);

/// Qubit update rho11 *= factor^2, rho10 *= factor, with the lost population
/// moved to rho00. Throws FactorOutOfRange unless 0 < factor <= 1 + 1e-6.
DensityMatrix apply_atom_analytic(const DensityMatrix& field, double factor);

/// Total population above the single-photon level.
double leakage_above_single_photon(const DensityMatrix& field);

struct RunSample {
    double t = 0.0;
    double rho11 = 0.0;
    double coherence = 0.0;  // |rho10|
    double fidelity = 0.0;   // against the dominant eigenvector of the initial field
};

struct RunResult {
    std::vector<RunSample> samples;  // t = 0 plus one sample per slot
    DensityMatrix final_field;
    double max_leakage = 0.0;
    double max_trace_error = 0.0;
    double min_eigenvalue = 1.0;
    int clamped_slots = 0;
    double velocity_rms = 0.0;
    std::vector<std::string> warnings;
};

/// Deterministic given spec.seed. The analytic engine applies the nominal
/// per-atom factors (velocity perturbations do not enter it); the numeric
/// engine integrates the sampled, perturbed schedules.
RunResult run_beam(const DensityMatrix& field0, const BeamSpec& spec, const Geometry& geom,
                   const PhysicalParams& params, ProtocolKind kind, EngineKind engine,
                   const IntegratorConfig& cfg);

struct RateFit {
    double rate = 0.0;       // decay rate, -slope of ln(y) vs t
    double intercept = 0.0;  // ln(y) at t = 0
    double residual_rms = 0.0;
    int points_used = 0;
};

struct SeriesStats {
    std::vector<double> t;
    std::vector<double> mean;
    std::vector<double> std_error;
};

struct EnsembleResult {
    SeriesStats rho11;
    SeriesStats coherence;
    SeriesStats fidelity;
    RateFit population_fit;  // rate plays the role of 2*kappa_bar
    RateFit coherence_fit;   // rate plays the role of kappa_bar + F_bar
    int realizations = 0;
    double max_leakage = 0.0;
};

/// Average n_realizations independent beams (realization r reseeds the beam
/// with splitmix64(seed, r)) and fit log-linear decay rates to the mean
/// population and coherence series. Realizations run in parallel but are
/// reduced in index order, so the result is independent of thread count.
/// Throws FitDegenerate when a series has fewer than two usable points.
EnsembleResult monte_carlo_ensemble(const DensityMatrix& field0, const BeamSpec& spec,
                                    const Geometry& geom, const PhysicalParams& params,
                                    ProtocolKind kind, int n_realizations,
                                    const IntegratorConfig& cfg,
                                    EngineKind engine = EngineKind::Numeric,
                                    int n_threads = 0);

}  // namespace qmem
