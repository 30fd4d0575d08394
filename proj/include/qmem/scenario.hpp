#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qmem/beam.hpp"
#include "qmem/closed_form.hpp"
#include "qmem/config.hpp"
#include "qmem/hilbert.hpp"

namespace qmem {

/// Baseline operating point of a high-finesse microwave cavity memory:
/// 130 ms photon damping, 19.6 us total resonant interaction per atom,
/// 6 mm waist, 510 m/s (phase kick) or 127.5 m/s (dispersive) beams.
FlatConfig default_config(ProtocolKind kind);

/// Scenario names understood by run_scenario.
const std::vector<std::string>& scenario_names();

/// Per-scenario defaults (protocol kind and beam velocity differ).
FlatConfig scenario_defaults(const std::string& scenario);

struct ResolvedParams {
    PhysicalParams physical;
    Geometry geometry;
    BeamSpec beam;
    ProtocolKind protocol = ProtocolKind::PhaseKick;
    EngineKind engine = EngineKind::Numeric;
    IntegratorConfig integrator;
    int fock_cutoff = 3;
    int mc_realizations = 1;
    double initial_excited_population = 0.5;
    double initial_phase = 0.0;

    double resonant_time() const;    // 2 pi / Omega
    double dispersive_time() const;  // pi / omega_dispersive
    double slot_wall_clock() const;  // resonant (+ dispersive) + free window

    /// Closed-form parameter packs; dv carries the sampler's rms deviation.
    KickParams kick_params() const;
    DispersiveParams dispersive_params() const;

    DensityMatrix initial_field() const;
};

/// Validates and assembles the typed parameter set; throws ConfigError with
/// the offending key in the message.
ResolvedParams resolve_params(const FlatConfig& cfg);

struct ScenarioOutput {
    std::vector<std::string> files;  // names relative to the output directory
    std::uint64_t manifest_hash = 0;
};

/// Hash binding a config to a scenario name; embedded in every CSV and
/// manifest this run writes.
std::uint64_t scenario_hash(const std::string& scenario, const FlatConfig& cfg);

/// 17-significant-digit CSV with a manifest-hash comment line and a header.
void write_csv(const std::filesystem::path& file, std::uint64_t manifest_hash,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

/// manifest.json: scenario, seed, full config, environment fingerprint and
/// the list of files this run produced.
void write_run_manifest(const std::filesystem::path& out_dir, const std::string& scenario,
                        const FlatConfig& cfg, const std::vector<std::string>& files,
                        std::uint64_t hash);

/// Figure-style data products (fig3/fig5/fig6/fig7/fig8/fig9/custom) plus a
/// manifest.json; returns the files written.
ScenarioOutput run_scenario(const std::string& scenario, const FlatConfig& cfg,
                            const std::filesystem::path& out_dir);

/// Generic grid sweep over two numeric config keys; emits gain, dwell times
/// and fidelity of the configured protocol at every grid point.
ScenarioOutput run_sweep(const FlatConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace qmem
