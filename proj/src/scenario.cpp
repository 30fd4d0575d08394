#include "qmem/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include <json.hpp>

namespace qmem {

namespace {

constexpr double kPi = std::numbers::pi;

ProtocolKind parse_kind(const std::string& v) {
    if (v == "kick") return ProtocolKind::PhaseKick;
    if (v == "dispersive") return ProtocolKind::Dispersive;
    throw ConfigError("protocol.kind must be kick or dispersive, got: " + v);
}

VelocityDist parse_dist(const std::string& v) {
    if (v == "uniform") return VelocityDist::Uniform;
    if (v == "gaussian") return VelocityDist::Gaussian;
    if (v == "fixed") return VelocityDist::Fixed;
    throw ConfigError("beam.velocity_dist must be uniform, gaussian or fixed, got: " + v);
}

EngineKind parse_engine(const std::string& v) {
    if (v == "numeric") return EngineKind::Numeric;
    if (v == "analytic") return EngineKind::Analytic;
    throw ConfigError("run.engine must be numeric or analytic, got: " + v);
}

std::vector<double> linspace(double from, double to, int points) {
    std::vector<double> out;
    out.reserve(std::max(points, 0));
    for (int i = 0; i < points; ++i) {
        out.push_back(points == 1 ? from
                                  : from + (to - from) * static_cast<double>(i) /
                                        static_cast<double>(points - 1));
    }
    return out;
}

void write_manifest(const std::filesystem::path& out_dir, const std::string& scenario,
                    const FlatConfig& cfg, const std::vector<std::string>& files,
                    std::uint64_t hash, const nlohmann::json& results) {
    nlohmann::json m;
    m["scenario"] = scenario;
    m["manifest_hash"] = hash_hex(hash);
    m["seed"] = cfg.get_u64("beam.seed", 0);
    nlohmann::json config = nlohmann::json::object();
    for (const auto& [k, v] : cfg.entries()) config[k] = v;
    m["config"] = config;
    m["environment"] = {{"seed", cfg.get_u64("beam.seed", 0)},
                        {"dt_max", cfg.get_double("engine.dt_max", 1e-3)},
                        {"fock_cutoff", cfg.get_int("engine.fock_cutoff", 3)}};
    m["outputs"] = files;
    if (!results.is_null()) m["results"] = results;
    std::ofstream f(out_dir / "manifest.json", std::ios::binary);
    if (!f) throw ConfigError("cannot write manifest.json in " + out_dir.string());
    f << m.dump(2) << "\n";
}

}  // namespace

FlatConfig default_config(ProtocolKind kind) {
    FlatConfig cfg;
    const double t_resonant = 1.96e-5;        // two pi-pulses back to back [s]
    const double g = kPi / t_resonant;        // makes 2*pi/(2G) equal t_resonant
    const double w0 = 6e-3;
    const double len = std::sqrt(kPi) * w0;   // effective interaction length
    cfg.set_double("physical.kappa", 1.0 / (2.0 * 0.130));
    cfg.set_double("physical.g", g);
    cfg.set_double("physical.delta", 3.0 * g);
    cfg.set_double("physical.nbar", 0.0);
    cfg.set("protocol.kind", kind == ProtocolKind::PhaseKick ? "kick" : "dispersive");
    cfg.set_double("beam.v0", kind == ProtocolKind::PhaseKick ? 510.0 : 127.5);
    cfg.set_double("beam.dv", 0.0);
    cfg.set("beam.velocity_dist", "uniform");
    cfg.set_double("beam.lambda", 1.0);
    cfg.set("beam.n_atoms", "0");
    cfg.set_double("beam.free_window", 0.0);
    cfg.set("beam.seed", "1");
    cfg.set_double("geometry.w0", w0);
    cfg.set_double("geometry.a", 0.01);
    cfg.set_double("geometry.b", 0.01 + 0.5 * len);
    cfg.set_double("geometry.c", 0.01 + len);
    cfg.set_double("geometry.d", 0.01 + len);
    cfg.set("engine.fock_cutoff", "3");
    cfg.set_double("engine.dt_max", 1e-3);
    cfg.set("engine.renormalize_trace", "false");
    cfg.set("run.engine", "numeric");
    cfg.set("mc.realizations", "1");
    cfg.set_double("initial.excited_population", 0.5);
    cfg.set_double("initial.phase", 0.0);
    return cfg;
}

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {"fig3", "fig5", "fig6",     "fig7",
                                                   "fig8", "fig9", "validate", "custom"};
    return names;
}

FlatConfig scenario_defaults(const std::string& scenario) {
    const bool dispersive = scenario == "fig5" || scenario == "fig7" || scenario == "fig9";
    return default_config(dispersive ? ProtocolKind::Dispersive : ProtocolKind::PhaseKick);
}

double ResolvedParams::resonant_time() const { return 2.0 * kPi / physical.Omega; }

double ResolvedParams::dispersive_time() const { return kPi / physical.omega_dispersive(); }

double ResolvedParams::slot_wall_clock() const {
    double t = resonant_time() + beam.free_window;
    if (protocol == ProtocolKind::Dispersive) t += dispersive_time();
    return t;
}

KickParams ResolvedParams::kick_params() const {
    KickParams p;
    p.kappa = physical.kappa;
    p.Omega = physical.Omega;
    p.T = resonant_time();
    p.lambda = beam.density;
    p.a = geometry.a;
    p.c = geometry.c;
    p.w0 = geometry.w0;
    p.v0 = beam.v0;
    p.dv = beam.velocity_rms();
    return p;
}

DispersiveParams ResolvedParams::dispersive_params() const {
    DispersiveParams p;
    p.kappa = physical.kappa;
    p.Omega = physical.Omega;
    p.T = resonant_time();
    p.tau = dispersive_time();
    p.lambda = beam.density;
    p.a = geometry.a;
    p.d = geometry.d;
    p.w0 = geometry.w0;
    p.v0 = beam.v0;
    p.dv = beam.velocity_rms();
    p.f_model = zero_f_model();
    return p;
}

DensityMatrix ResolvedParams::initial_field() const {
    const double p = initial_excited_population;
    StateVector psi = StateVector::Zero(fock_cutoff);
    psi(0) = std::sqrt(1.0 - p);
    psi(1) = std::exp(kI * initial_phase) * std::sqrt(p);
    return psi * psi.adjoint();
}

ResolvedParams resolve_params(const FlatConfig& user) {
    const std::string kind_str = user.get_string("protocol.kind", "kick");
    FlatConfig cfg = default_config(parse_kind(kind_str));
    cfg.merge(user);

    ResolvedParams rp;
    rp.protocol = parse_kind(cfg.get_string("protocol.kind"));
    rp.engine = parse_engine(cfg.get_string("run.engine"));

    const double omega = cfg.get_double("physical.omega", 0.0);
    rp.physical = PhysicalParams::make(cfg.get_double("physical.kappa"),
                                       cfg.get_double("physical.g"),
                                       cfg.get_double("physical.delta"),
                                       cfg.get_double("physical.nbar"), omega);
    if (rp.protocol == ProtocolKind::Dispersive && rp.physical.delta == 0.0)
        throw ConfigError("physical.delta must be nonzero for the dispersive protocol");

    rp.geometry.a = cfg.get_double("geometry.a");
    rp.geometry.b = cfg.get_double("geometry.b");
    rp.geometry.c = cfg.get_double("geometry.c");
    rp.geometry.d = cfg.get_double("geometry.d");
    rp.geometry.w0 = cfg.get_double("geometry.w0");
    if (rp.geometry.a < 0 || rp.geometry.b < 0 || rp.geometry.c < 0 || rp.geometry.d < 0 ||
        rp.geometry.w0 < 0)
        throw ConfigError("geometry lengths must be >= 0");

    rp.beam = BeamSpec::make(static_cast<int>(cfg.get_int("beam.n_atoms")),
                             cfg.get_double("beam.lambda"), cfg.get_double("beam.v0"),
                             cfg.get_double("beam.dv"),
                             parse_dist(cfg.get_string("beam.velocity_dist")),
                             cfg.get_double("beam.free_window"),
                             cfg.get_u64("beam.seed", 1));

    rp.fock_cutoff = static_cast<int>(cfg.get_int("engine.fock_cutoff"));
    if (rp.fock_cutoff < 2) throw ConfigError("engine.fock_cutoff must be >= 2");
    if (rp.fock_cutoff > 32) throw ConfigError("engine.fock_cutoff must be <= 32");
    rp.integrator.dt_max = cfg.get_double("engine.dt_max");
    if (!(rp.integrator.dt_max > 0.0)) throw ConfigError("engine.dt_max must be > 0");
    rp.integrator.renormalize_trace = cfg.get_bool("engine.renormalize_trace", false);

    rp.mc_realizations = static_cast<int>(cfg.get_int("mc.realizations"));
    if (rp.mc_realizations < 1) throw ConfigError("mc.realizations must be >= 1");

    rp.initial_excited_population = cfg.get_double("initial.excited_population");
    if (rp.initial_excited_population < 0.0 || rp.initial_excited_population > 1.0)
        throw ConfigError("initial.excited_population must be in [0,1]");
    rp.initial_phase = cfg.get_double("initial.phase");
    return rp;
}

std::uint64_t scenario_hash(const std::string& scenario, const FlatConfig& cfg) {
    FlatConfig tagged = cfg;
    tagged.set("scenario", scenario);
    return tagged.hash();
}

void write_run_manifest(const std::filesystem::path& out_dir, const std::string& scenario,
                        const FlatConfig& cfg, const std::vector<std::string>& files,
                        std::uint64_t hash) {
    write_manifest(out_dir, scenario, cfg, files, hash, nlohmann::json());
}

void write_csv(const std::filesystem::path& file, std::uint64_t manifest_hash,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream f(file, std::ios::binary);
    if (!f) throw ConfigError("cannot write CSV file: " + file.string());
    f << "# manifest_hash=" << hash_hex(manifest_hash) << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        f << columns[i] << (i + 1 < columns.size() ? "," : "");
    f << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            f << format_double(row[i]) << (i + 1 < row.size() ? "," : "");
        f << "\n";
    }
}

ScenarioOutput run_scenario(const std::string& scenario, const FlatConfig& user,
                            const std::filesystem::path& out_dir) {
    FlatConfig cfg = scenario_defaults(scenario);
    cfg.merge(user);
    const ResolvedParams rp = resolve_params(cfg);
    std::filesystem::create_directories(out_dir);

    const std::uint64_t hash = scenario_hash(scenario, cfg);
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    nlohmann::json results;

    if (scenario == "fig3" || scenario == "fig5") {
        columns = {"lambda", "gain"};
        for (int i = 0; i <= 100; ++i) {
            const double lambda = static_cast<double>(i) / 100.0;
            double gain;
            if (scenario == "fig3") {
                KickParams p = rp.kick_params();
                p.lambda = lambda;
                gain = gain_kick(p);
            } else {
                DispersiveParams p = rp.dispersive_params();
                p.lambda = lambda;
                gain = gain_dispersive(p);
            }
            rows.push_back({lambda, gain});
        }
    } else if (scenario == "fig6" || scenario == "fig7") {
        columns = {"lambda", "dv", "gain"};
        const auto lambdas =
            linspace(0.0, 1.0, static_cast<int>(cfg.get_int("grid.lambda_points", 41)));
        const auto dvs = linspace(0.0, cfg.get_double("grid.dv_max", 2.0),
                                  static_cast<int>(cfg.get_int("grid.dv_points", 41)));
        for (const double lambda : lambdas) {
            for (const double dv : dvs) {
                double gain;
                if (scenario == "fig6") {
                    KickParams p = rp.kick_params();
                    p.lambda = lambda;
                    p.dv = dv;  // the grid axis is the velocity standard deviation
                    gain = dwell_times_kick_dispersion(p).gain;
                } else {
                    DispersiveParams p = rp.dispersive_params();
                    p.lambda = lambda;
                    p.dv = dv;
                    gain = dwell_times_dispersive_dispersion(p).gain;
                }
                rows.push_back({lambda, dv, gain});
            }
        }
    } else if (scenario == "fig8" || scenario == "fig9") {
        columns = {"dv", "n_atoms", "fidelity"};
        const auto dvs = linspace(0.0, cfg.get_double("grid.dv_max", 2.0),
                                  static_cast<int>(cfg.get_int("grid.dv_points", 41)));
        const int n_points = static_cast<int>(cfg.get_int("grid.n_points", 31));
        const double n_max = cfg.get_double("grid.n_max", 3000.0);
        for (const double dv : dvs) {
            for (int j = 0; j < n_points; ++j) {
                const double n_atoms =
                    n_points == 1 ? 0.0
                                  : std::round(n_max * static_cast<double>(j) /
                                               static_cast<double>(n_points - 1));
                double fid;
                if (scenario == "fig8") {
                    KickParams p = rp.kick_params();
                    p.dv = dv;
                    const EffectiveRates rates = effective_rates_kick(p);
                    fid = channel_fidelity(rates.kappa_bar, rates.F_bar,
                                           n_atoms * rp.resonant_time());
                } else {
                    DispersiveParams p = rp.dispersive_params();
                    p.dv = dv;
                    const EffectiveRates rates = effective_rates_dispersive(p);
                    fid = channel_fidelity(rates.kappa_bar, rates.F_bar,
                                           n_atoms * (rp.resonant_time() + rp.dispersive_time()));
                }
                rows.push_back({dv, n_atoms, fid});
            }
        }
    } else if (scenario == "custom") {
        const DensityMatrix field0 = rp.initial_field();
        if (rp.mc_realizations > 1) {
            columns = {"t",         "rho11",        "rho11_stderr", "coherence",
                       "coherence_stderr", "fidelity", "fidelity_stderr"};
            const EnsembleResult ens =
                monte_carlo_ensemble(field0, rp.beam, rp.geometry, rp.physical, rp.protocol,
                                     rp.mc_realizations, rp.integrator, rp.engine);
            for (std::size_t k = 0; k < ens.rho11.t.size(); ++k)
                rows.push_back({ens.rho11.t[k], ens.rho11.mean[k], ens.rho11.std_error[k],
                                ens.coherence.mean[k], ens.coherence.std_error[k],
                                ens.fidelity.mean[k], ens.fidelity.std_error[k]});
            results["population_rate_fit"] = ens.population_fit.rate;
            results["coherence_rate_fit"] = ens.coherence_fit.rate;
            results["population_fit_residual_rms"] = ens.population_fit.residual_rms;
            results["coherence_fit_residual_rms"] = ens.coherence_fit.residual_rms;
            results["max_leakage"] = ens.max_leakage;
        } else {
            columns = {"t", "rho11", "coherence", "fidelity"};
            const RunResult rr = run_beam(field0, rp.beam, rp.geometry, rp.physical,
                                          rp.protocol, rp.engine, rp.integrator);
            for (const RunSample& s : rr.samples)
                rows.push_back({s.t, s.rho11, s.coherence, s.fidelity});
            results["max_leakage"] = rr.max_leakage;
            results["clamped_slots"] = rr.clamped_slots;
            results["velocity_rms"] = rr.velocity_rms;
            if (!rr.warnings.empty()) results["warnings"] = rr.warnings;
        }
    } else {
        throw ConfigError("unknown scenario: " + scenario);
    }

    const std::string csv_name = scenario + ".csv";
    write_csv(out_dir / csv_name, hash, columns, rows);
    ScenarioOutput out;
    out.files = {csv_name, "manifest.json"};
    out.manifest_hash = hash;
    write_manifest(out_dir, scenario, cfg, out.files, hash, results);
    return out;
}

ScenarioOutput run_sweep(const FlatConfig& user, const std::filesystem::path& out_dir) {
    FlatConfig cfg = default_config(parse_kind(user.get_string("protocol.kind", "kick")));
    cfg.merge(user);
    std::filesystem::create_directories(out_dir);

    const std::string x_key = cfg.get_string("sweep.x.key", "beam.lambda");
    const std::string y_key = cfg.get_string("sweep.y.key", "beam.dv");
    for (const std::string& key : {x_key, y_key})
        if (!cfg.has(key))
            throw ConfigError("sweep key is not a known config parameter: " + key);
    const auto xs = linspace(cfg.get_double("sweep.x.from", 0.0),
                             cfg.get_double("sweep.x.to", 1.0),
                             static_cast<int>(cfg.get_int("sweep.x.points", 11)));
    const auto ys = linspace(cfg.get_double("sweep.y.from", 0.0),
                             cfg.get_double("sweep.y.to", 0.0),
                             static_cast<int>(cfg.get_int("sweep.y.points", 1)));

    const std::uint64_t hash = scenario_hash("sweep", cfg);
    const std::vector<std::string> columns = {x_key,  y_key,           "gain",
                                              "population_dwell", "coherence_dwell", "fidelity"};
    std::vector<std::vector<double>> rows;
    for (const double x : xs) {
        for (const double y : ys) {
            FlatConfig point = cfg;
            point.set_double(x_key, x);
            point.set_double(y_key, y);
            const ResolvedParams rp = resolve_params(point);
            DwellReport rep;
            EffectiveRates rates;
            if (rp.protocol == ProtocolKind::PhaseKick) {
                rep = dwell_times_kick_dispersion(rp.kick_params());
                rates = effective_rates_kick(rp.kick_params());
            } else {
                rep = dwell_times_dispersive_dispersion(rp.dispersive_params());
                rates = effective_rates_dispersive(rp.dispersive_params());
            }
            const double t_total = rp.beam.n_atoms * rp.slot_wall_clock();
            const double fid = channel_fidelity(rates.kappa_bar, rates.F_bar, t_total);
            rows.push_back({x, y, rep.gain, rep.population_dwell, rep.coherence_dwell, fid});
        }
    }

    write_csv(out_dir / "sweep.csv", hash, columns, rows);
    ScenarioOutput out;
    out.files = {"sweep.csv", "manifest.json"};
    out.manifest_hash = hash;
    write_manifest(out_dir, "sweep", cfg, out.files, hash, nlohmann::json());
    return out;
}

}  // namespace qmem
