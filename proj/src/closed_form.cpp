#include "qmem/closed_form.hpp"

#include <numbers>

namespace qmem {

namespace {

using R = long double;
constexpr R kPi = std::numbers::pi_v<long double>;

R effective_length(double w0) { return std::sqrt(kPi) * static_cast<R>(w0); }

struct KickPieces {
    R base;      // dv-independent part of the dwell denominator, = 2T(1 - lambda alpha)
    R d_coeff;   // D
    R w_coeff;   // W
    R r2;        // (dv/v0)^2
};

KickPieces kick_pieces(const KickParams& p) {
    if (!(p.kappa > 0.0)) throw DivergentGain("kappa must be > 0 for dwell times");
    if (!(p.v0 > 0.0)) throw ConfigError("v0 must be > 0");
    const R k = p.kappa, W = p.Omega, T = p.T, lam = p.lambda;
    const R l = std::log1p(R(2) * k * k / (W * W));
    KickPieces out;
    out.base = T - (R(2) / k) * l + (R(1) - lam) * (T + (R(2) / k) * l);
    out.d_coeff = dispersion_population_coeff_kick(p.kappa, p.Omega, p.a, p.w0, p.v0);
    out.w_coeff = dispersion_coherence_coeff_kick(p.kappa, p.Omega, p.a, p.w0, p.v0);
    out.r2 = (static_cast<R>(p.dv) / p.v0) * (static_cast<R>(p.dv) / p.v0);
    return out;
}

struct DispersivePieces {
    R base;      // = 2(T+tau)(1 - lambda varsigma)
    R lam_coeff; // Lambda
    R xi_coeff;  // xi
    R r2;
    R f_value;
};

DispersivePieces dispersive_pieces(const DispersiveParams& p) {
    if (!(p.kappa > 0.0)) throw DivergentGain("kappa must be > 0 for dwell times");
    if (!(p.v0 > 0.0)) throw ConfigError("v0 must be > 0");
    const R k = p.kappa, W = p.Omega, T = p.T, tau = p.tau, lam = p.lambda;
    const R f = p.f_model ? p.f_model(p.kappa, p.Omega, p.tau) : 0.0;
    const R l = std::log1p((k / W) * f);
    DispersivePieces out;
    out.base = T - (R(2) / k) * l +
               (R(1) - lam) * (T + R(2) * tau + (R(2) / k) * l);
    out.lam_coeff = dispersion_population_coeff_dispersive(p.kappa, p.Omega, p.tau, p.a,
                                                           p.w0, p.v0, static_cast<double>(f));
    out.xi_coeff = dispersion_coherence_coeff_dispersive(p.kappa, p.Omega, p.tau, p.a,
                                                         p.w0, p.v0, static_cast<double>(f));
    out.r2 = (static_cast<R>(p.dv) / p.v0) * (static_cast<R>(p.dv) / p.v0);
    out.f_value = f;
    return out;
}

}  // namespace

double dispersion_population_coeff_kick(double kappa, double Omega, double a, double w0,
                                        double v0) {
    const R len = effective_length(w0);
    const R span = R(a) + (R(a) + len);  // a + (a + sqrt(pi) w0)
    const R v2 = R(v0) * v0;
    return static_cast<double>((R(3) / 4) * kappa * span * span / v2 +
                               (R(1) / 4) * (R(Omega) * Omega / kappa) * span * span / v2);
}

double dispersion_coherence_coeff_kick(double kappa, double Omega, double a, double w0,
                                       double v0) {
    (void)Omega;
    const R len = effective_length(w0);
    const R a2 = R(a) * a;
    const R b2 = (R(a) + len) * (R(a) + len);
    const R v2 = R(v0) * v0;
    return static_cast<double>(-(R(1) / 4) * kappa * (a2 + b2) / v2 -
                               (R(3) / 2) * kappa * R(a) * (R(a) + len) / v2);
}

double dispersion_population_coeff_dispersive(double kappa, double Omega, double tau,
                                              double a, double w0, double v0,
                                              double f_value) {
    const R len = effective_length(w0);
    const R k = kappa, W = Omega, f = f_value;
    const R v2 = R(v0) * v0;
    const R sum_sq = (R(a) * a + (R(a) + len) * (R(a) + len)) / v2;
    const R cross = R(a) * (R(a) + len) / v2;
    const R lw = len / R(v0);
    const R term1 = (f / W) * ((W * W / 4) * sum_sq + (W * W * W * W / (2 * k * k)) * cross);
    const R term2 = (W * W / (4 * k)) * lw * lw;
    const R term3 = (W / 2) * f * (sum_sq / 2 - cross * std::exp(-k * R(tau)));
    const R term4 = -(k / 4) * lw * lw * std::exp(-2 * k * R(tau));
    return static_cast<double>(term1 + term2 + term3 + term4);
}

double dispersion_coherence_coeff_dispersive(double kappa, double Omega, double tau,
                                             double a, double w0, double v0,
                                             double f_value) {
    const R len = effective_length(w0);
    const R k = kappa, W = Omega, f = f_value;
    const R v2 = R(v0) * v0;
    const R sum_sq = (R(a) * a + (R(a) + len) * (R(a) + len)) / v2;
    const R cross = R(a) * (R(a) + len) / v2;
    const R lw = len / R(v0);
    return static_cast<double>(-(W / 2) * f * (sum_sq / 2 - cross * std::exp(-k * R(tau))) +
                               (k / 4) * lw * lw * std::exp(-2 * k * R(tau)));
}

double gain_kick(const KickParams& p) {
    if (p.lambda < 0.0 || p.lambda > 1.0) throw ConfigError("lambda must be in [0,1]");
    const R x = R(p.lambda) * protection_fraction_kick<R>(p.kappa, p.Omega, p.T);
    if (x >= R(1)) throw DivergentGain("lambda * alpha >= 1");
    return static_cast<double>(x / (R(1) - x));
}

double gain_dispersive(const DispersiveParams& p) {
    if (p.lambda < 0.0 || p.lambda > 1.0) throw ConfigError("lambda must be in [0,1]");
    const R f = p.f_model ? p.f_model(p.kappa, p.Omega, p.tau) : 0.0;
    const R x = R(p.lambda) *
                protection_fraction_dispersive<R>(p.kappa, p.Omega, p.tau, p.T, f);
    if (x >= R(1)) throw DivergentGain("lambda * varsigma >= 1");
    return static_cast<double>(x / (R(1) - x));
}

DwellReport dwell_times_kick(const KickParams& p) {
    if (!(p.kappa > 0.0)) throw DivergentGain("kappa must be > 0 for dwell times");
    const R x = R(p.lambda) * protection_fraction_kick<R>(p.kappa, p.Omega, p.T);
    if (x >= R(1)) throw DivergentGain("lambda * alpha >= 1");
    DwellReport rep;
    rep.population_dwell = static_cast<double>(R(1) / (2 * R(p.kappa) * (R(1) - x)));
    rep.coherence_dwell = 2.0 * rep.population_dwell;
    rep.gain = static_cast<double>(x / (R(1) - x));
    return rep;
}

DwellReport dwell_times_dispersive(const DispersiveParams& p) {
    if (!(p.kappa > 0.0)) throw DivergentGain("kappa must be > 0 for dwell times");
    const R f = p.f_model ? p.f_model(p.kappa, p.Omega, p.tau) : 0.0;
    const R x = R(p.lambda) *
                protection_fraction_dispersive<R>(p.kappa, p.Omega, p.tau, p.T, f);
    if (x >= R(1)) throw DivergentGain("lambda * varsigma >= 1");
    DwellReport rep;
    rep.population_dwell = static_cast<double>(R(1) / (2 * R(p.kappa) * (R(1) - x)));
    rep.coherence_dwell = 2.0 * rep.population_dwell;
    rep.gain = static_cast<double>(x / (R(1) - x));
    return rep;
}

DwellReport dwell_times_kick_dispersion(const KickParams& p) {
    const KickPieces k = kick_pieces(p);
    if (k.base <= R(0)) throw DivergentGain("density term makes the dwell denominator <= 0");
    const R denom_p = k.base + k.d_coeff * k.r2;
    const R denom_c = k.base + (k.d_coeff + k.w_coeff) * k.r2;
    if (denom_p <= R(0) || denom_c <= R(0))
        throw NegativeDenominator("dispersion term makes the dwell denominator <= 0");
    DwellReport rep;
    rep.population_dwell =
        static_cast<double>((R(1) / (2 * R(p.kappa))) * (2 * R(p.T)) / denom_p);
    rep.coherence_dwell =
        static_cast<double>((R(1) / R(p.kappa)) * (2 * R(p.T)) / denom_c);
    rep.gain = static_cast<double>(R(p.kappa) * rep.coherence_dwell - R(1));
    const InequalityReport ineq = inequality_kick(p);
    rep.inequality_lhs = ineq.lhs;
    rep.inequality_satisfied = ineq.satisfied;
    return rep;
}

DwellReport dwell_times_dispersive_dispersion(const DispersiveParams& p) {
    const DispersivePieces d = dispersive_pieces(p);
    if (d.base <= R(0)) throw DivergentGain("density term makes the dwell denominator <= 0");
    const R denom_p = d.base + d.lam_coeff * d.r2;
    const R denom_c = d.base + (d.lam_coeff + d.xi_coeff) * d.r2;
    if (denom_p <= R(0) || denom_c <= R(0))
        throw NegativeDenominator("dispersion term makes the dwell denominator <= 0");
    const R span = 2 * (R(p.T) + R(p.tau));
    DwellReport rep;
    rep.population_dwell = static_cast<double>((R(1) / (2 * R(p.kappa))) * span / denom_p);
    rep.coherence_dwell = static_cast<double>((R(1) / R(p.kappa)) * span / denom_c);
    rep.gain = static_cast<double>(R(p.kappa) * rep.coherence_dwell - R(1));
    const InequalityReport ineq = inequality_dispersive(p);
    rep.inequality_lhs = ineq.lhs;
    rep.inequality_satisfied = ineq.satisfied;
    return rep;
}

InequalityReport inequality_kick(const KickParams& p) {
    InequalityReport rep;
    const R r2 = (R(p.dv) / p.v0) * (R(p.dv) / p.v0);
    rep.reduced_threshold = 1e-3;
    rep.reduced_value = static_cast<double>((R(p.Omega) / p.kappa) * r2);
    rep.reduced_satisfied = rep.reduced_value < rep.reduced_threshold;
    if (r2 == R(0)) {
        rep.lhs = 0.0;
        rep.satisfied = true;
    } else if (p.lambda <= 0.0) {
        rep.lhs = std::numeric_limits<double>::infinity();
        rep.satisfied = false;
    } else {
        const R pref = (kPi / (2 * R(p.lambda))) *
                       (R(1) + 2 * R(p.Omega) * p.a / (kPi * R(p.v0)));
        rep.lhs = static_cast<double>(pref * (R(p.Omega) / p.kappa) * r2);
        rep.satisfied = rep.lhs < 1.0;
    }
    // a that makes (pi/2 lambda)(1 + 2 Omega a/(pi v0)) equal 1/threshold
    const R lam = p.lambda > 0.0 ? R(p.lambda) : R(1);
    rep.a_for_reduced_threshold = static_cast<double>(
        (2 * lam / (kPi * R(rep.reduced_threshold)) - R(1)) * kPi * R(p.v0) /
        (2 * R(p.Omega)));
    return rep;
}

InequalityReport inequality_dispersive(const DispersiveParams& p) {
    InequalityReport rep;
    const R r2 = (R(p.dv) / p.v0) * (R(p.dv) / p.v0);
    rep.reduced_threshold = 1e-1;
    rep.reduced_value = static_cast<double>((R(p.Omega) / p.kappa) * r2);
    rep.reduced_satisfied = rep.reduced_value < rep.reduced_threshold;
    if (r2 == R(0)) {
        rep.lhs = 0.0;
        rep.satisfied = true;
    } else if (p.lambda <= 0.0) {
        rep.lhs = std::numeric_limits<double>::infinity();
        rep.satisfied = false;
    } else {
        const R pref = (8 * kPi / (7 * R(p.lambda))) *
                       (R(1) + (3 * R(p.kappa) / 2) * (R(p.a) / p.v0));
        rep.lhs = static_cast<double>(pref * (R(p.Omega) / p.kappa) * r2);
        rep.satisfied = rep.lhs < 1.0;
    }
    const R lam = p.lambda > 0.0 ? R(p.lambda) : R(1);
    rep.a_for_reduced_threshold = static_cast<double>(
        (7 * lam / (8 * kPi * R(rep.reduced_threshold)) - R(1)) * 2 * R(p.v0) /
        (3 * R(p.kappa)));
    return rep;
}

EffectiveRates effective_rates_kick(const KickParams& p) {
    const DwellReport rep = dwell_times_kick_dispersion(p);
    EffectiveRates rates;
    rates.kappa_bar = 1.0 / (2.0 * rep.population_dwell);
    const R r2 = (R(p.dv) / p.v0) * (R(p.dv) / p.v0);
    const R w = dispersion_coherence_coeff_kick(p.kappa, p.Omega, p.a, p.w0, p.v0);
    rates.F_bar = static_cast<double>(R(p.kappa) * w * r2 / (2 * R(p.T)));
    return rates;
}

EffectiveRates effective_rates_dispersive(const DispersiveParams& p) {
    const DwellReport rep = dwell_times_dispersive_dispersion(p);
    EffectiveRates rates;
    rates.kappa_bar = 1.0 / (2.0 * rep.population_dwell);
    const R r2 = (R(p.dv) / p.v0) * (R(p.dv) / p.v0);
    const R f = p.f_model ? p.f_model(p.kappa, p.Omega, p.tau) : 0.0;
    const R xi = dispersion_coherence_coeff_dispersive(p.kappa, p.Omega, p.tau, p.a, p.w0,
                                                       p.v0, static_cast<double>(f));
    rates.F_bar = static_cast<double>(R(p.kappa) * xi * r2 / (2 * (R(p.T) + R(p.tau))));
    return rates;
}

}  // namespace qmem
