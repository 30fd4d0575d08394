#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qmem/closed_form.hpp"

using namespace qmem;

namespace {

constexpr double kPi = std::numbers::pi;

// realistic operating point used across these tests
constexpr double kKappa = 3.8461538461538463;   // 1/(2 * 130 ms)
constexpr double kT = 1.96e-5;                  // total resonant time per atom
const double kOmega = 2.0 * kPi / kT;

KickParams preset_kick(double lambda, double dv = 0.0) {
    KickParams p;
    p.kappa = kKappa;
    p.Omega = kOmega;
    p.T = kT;
    p.lambda = lambda;
    p.a = 0.01;
    p.c = 0.01 + std::sqrt(kPi) * 6e-3;
    p.w0 = 6e-3;
    p.v0 = 510.0;
    p.dv = dv;
    return p;
}

DispersiveParams preset_dispersive(double lambda, double dv = 0.0) {
    DispersiveParams p;
    p.kappa = kKappa;
    p.Omega = kOmega;
    p.T = kT;
    p.tau = 3.0 * kT;  // tau = 6 pi / Omega
    p.lambda = lambda;
    p.a = 0.01;
    p.d = 0.01 + std::sqrt(kPi) * 6e-3;
    p.w0 = 6e-3;
    p.v0 = 127.5;
    p.dv = dv;
    return p;
}

}  // namespace

TEST_CASE("per-atom kick factor against high-precision arithmetic") {
    CHECK(per_atom_factor_kick<double>(0.0, 100.0, 0.1, 0.0) == 1.0);
    // frozen: (1 + 2e-4) exp(-0.05)
    CHECK(per_atom_factor_kick<double>(1.0, 100.0, 0.1, 0.0) ==
          doctest::Approx(0.95141967038561415).epsilon(1e-14));
    // algebraic identity: t enters as T + 2t
    const double lhs = per_atom_factor_kick<double>(0.8, 40.0, 0.3, 0.2);
    const double rhs = per_atom_factor_kick<double>(0.8, 40.0, 0.3 + 0.4, 0.0);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-15));
}

TEST_CASE("per-atom dispersive factor") {
    CHECK(per_atom_factor_dispersive<double>(0.0, 100.0, 0.1, 0.0, 5.0) == 1.0);
    // f = 0 collapses to the plain exponential
    CHECK(per_atom_factor_dispersive<double>(1.0, 100.0, 0.1, 0.0, 0.0) ==
          doctest::Approx(std::exp(-0.05)).epsilon(1e-15));
    // frozen: (1 + 0.02) exp(-0.05)
    CHECK(per_atom_factor_dispersive<double>(1.0, 100.0, 0.1, 0.0, 2.0) ==
          doctest::Approx(0.97025401299072829).epsilon(1e-14));
}

TEST_CASE("protection fraction, kick flavor") {
    // frozen: (0.1 + 2 ln(1.0002)) / 0.2
    CHECK(protection_fraction_kick<double>(1.0, 100.0, 0.1) ==
          doctest::Approx(0.50199980002666267).epsilon(1e-14));
    CHECK(protection_fraction_kick<double>(0.0, 100.0, 0.1) == 0.5);
    // continuous at the kappa -> 0 limit
    CHECK(protection_fraction_kick<double>(1e-9, 100.0, 0.1) ==
          doctest::Approx(0.5).epsilon(1e-9));
    // monotone increasing in kappa on (0, Omega/10]
    double prev = 0.5;
    for (int i = 1; i <= 40; ++i) {
        const double kappa = 10.0 * i / 40.0;  // up to Omega/10 with Omega = 100
        const double a = protection_fraction_kick<double>(kappa, 100.0, 0.1);
        CHECK(a > prev);
        prev = a;
    }
}

TEST_CASE("protection fraction, dispersive flavor") {
    const double T = 0.125, tau = 0.375;  // tau = 3T, binary exact
    CHECK(protection_fraction_dispersive<double>(1.0, 100.0, tau, T, 0.0) == 0.875);
    // tau -> 0 at f = 0 recovers the lossless kick limit
    CHECK(protection_fraction_dispersive<double>(1.0, 100.0, 0.0, T, 0.0) == 0.5);
    // kappa -> 0 limit of the log term is f/Omega
    const double limit = protection_fraction_dispersive<double>(0.0, 100.0, tau, T, 2.0);
    CHECK(limit == doctest::Approx((tau + T / 2 + 2.0 / 100.0) / (T + tau)).epsilon(1e-15));
}

TEST_CASE("gain functions and their limits") {
    KickParams p = preset_kick(0.0);
    CHECK(gain_kick(p) == 0.0);
    p.lambda = 1.0;
    CHECK(gain_kick(p) == doctest::Approx(1.0000152762335969).epsilon(1e-12));

    // frozen: lambda = 1, kappa = 1, Omega = 100, T = 0.1
    KickParams q;
    q.kappa = 1.0;
    q.Omega = 100.0;
    q.T = 0.1;
    q.lambda = 1.0;
    CHECK(gain_kick(q) == doctest::Approx(1.0080313221832832).epsilon(1e-12));

    DispersiveParams d = preset_dispersive(0.0);
    CHECK(gain_dispersive(d) == 0.0);
    d.lambda = 1.0;
    CHECK(gain_dispersive(d) == doctest::Approx(7.0).epsilon(1e-12));
    d.lambda = 0.5;  // varsigma = 7/8 -> 1/(1 - 7/16) - 1
    CHECK(gain_dispersive(d) == doctest::Approx(0.77777777777777778).epsilon(1e-12));

    // monotone increasing in lambda
    double prev_g = -1.0, prev_gd = -1.0;
    for (int i = 0; i <= 20; ++i) {
        KickParams pk = preset_kick(i / 20.0);
        DispersiveParams pd = preset_dispersive(i / 20.0);
        const double g = gain_kick(pk), gd = gain_dispersive(pd);
        CHECK(g > prev_g);
        CHECK(gd > prev_gd);
        prev_g = g;
        prev_gd = gd;
    }
}

TEST_CASE("divergent gain is refused") {
    KickParams p;
    p.kappa = 1000.0;
    p.Omega = 1000.0;  // alpha > 1 here
    p.T = 1e-3;
    p.lambda = 1.0;
    CHECK(protection_fraction_kick<double>(p.kappa, p.Omega, p.T) > 1.0);
    CHECK_THROWS_AS(gain_kick(p), DivergentGain);
    CHECK_THROWS_AS(dwell_times_kick(p), DivergentGain);
    KickParams zk = preset_kick(0.5);
    zk.kappa = 0.0;
    CHECK_THROWS_AS(dwell_times_kick(zk), DivergentGain);
}

TEST_CASE("dwell times at dv = 0") {
    KickParams p = preset_kick(0.0);
    DwellReport r = dwell_times_kick(p);
    CHECK(r.coherence_dwell == doctest::Approx(1.0 / kKappa).epsilon(1e-14));
    CHECK(r.population_dwell == doctest::Approx(0.5 / kKappa).epsilon(1e-14));
    CHECK(r.coherence_dwell == 2.0 * r.population_dwell);

    KickParams q;
    q.kappa = 1.0;
    q.Omega = 100.0;
    q.T = 0.1;
    q.lambda = 1.0;
    CHECK(dwell_times_kick(q).coherence_dwell ==
          doctest::Approx(2.0080313221832832).epsilon(1e-12));

    DispersiveParams d = preset_dispersive(1.0);
    d.T = 0.125;
    d.tau = 0.375;
    CHECK(dwell_times_dispersive(d).coherence_dwell ==
          doctest::Approx(8.0 / kKappa).epsilon(1e-13));
    CHECK(dwell_times_dispersive(d).coherence_dwell ==
          2.0 * dwell_times_dispersive(d).population_dwell);
}

TEST_CASE("dispersion coefficients against frozen arithmetic") {
    // a = 0, sqrt(pi) w0 = 1, v0 = 1, kappa = 1, Omega = 2
    const double w0 = 1.0 / std::sqrt(kPi);
    CHECK(dispersion_population_coeff_kick(1.0, 2.0, 0.0, w0, 1.0) ==
          doctest::Approx(1.75).epsilon(1e-12));
    CHECK(dispersion_coherence_coeff_kick(1.0, 2.0, 0.0, w0, 1.0) ==
          doctest::Approx(-0.25).epsilon(1e-12));
    // tau = 0, f = 0: Lambda = Omega^2/(4 kappa) - kappa/4, xi = kappa/4
    CHECK(dispersion_population_coeff_dispersive(1.0, 2.0, 0.0, 0.0, w0, 1.0, 0.0) ==
          doctest::Approx(0.75).epsilon(1e-12));
    CHECK(dispersion_coherence_coeff_dispersive(1.0, 2.0, 0.0, 0.0, w0, 1.0, 0.0) ==
          doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("dispersion coefficients at a generic point, frozen arithmetic") {
    // kappa = 1.3, Omega = 7.1, tau = 0.4, a = 0.02, w0 = 6 mm, v0 = 510, f = 0.37
    CHECK(dispersion_population_coeff_dispersive(1.3, 7.1, 0.4, 0.02, 0.006, 510.0, 0.37) ==
          doctest::Approx(1.0137706543358158e-7).epsilon(1e-13));
    CHECK(dispersion_coherence_coeff_dispersive(1.3, 7.1, 0.4, 0.02, 0.006, 510.0, 0.37) ==
          doctest::Approx(-1.4902124667276582e-9).epsilon(1e-13));
    // kappa = 2.7, Omega = 300, a = 0.015, w0 = 6 mm, v0 = 340
    CHECK(dispersion_population_coeff_kick(2.7, 300.0, 0.015, 0.006, 340.0) ==
          doctest::Approx(1.1905867638196577e-4).epsilon(1e-13));
    CHECK(dispersion_coherence_coeff_kick(2.7, 300.0, 0.015, 0.006, 340.0) ==
          doctest::Approx(-1.8622433157632463e-8).epsilon(1e-13));
}

TEST_CASE("dispersion-corrected dwell times at a generic point, frozen arithmetic") {
    KickParams p;
    p.kappa = 2.7;
    p.Omega = 300.0;
    p.T = 2.0 * kPi / 300.0;
    p.lambda = 0.6;
    p.a = 0.015;
    p.w0 = 0.006;
    p.v0 = 340.0;
    p.dv = 1.2;
    const DwellReport r = dwell_times_kick_dispersion(p);
    CHECK(r.population_dwell == doctest::Approx(0.26520140931432298).epsilon(1e-13));
    CHECK(r.coherence_dwell == doctest::Approx(0.53040281863285253).epsilon(1e-13));
}

TEST_CASE("dispersion-corrected dwell times reduce to the dv = 0 algebra") {
    for (int i = 0; i < 100; ++i) {
        const double lambda = i / 99.0;
        const DwellReport a = dwell_times_kick(preset_kick(lambda));
        const DwellReport b = dwell_times_kick_dispersion(preset_kick(lambda));
        CHECK(std::abs(b.population_dwell / a.population_dwell - 1.0) <= 1e-12);
        CHECK(std::abs(b.coherence_dwell / a.coherence_dwell - 1.0) <= 1e-12);

        const DwellReport c = dwell_times_dispersive(preset_dispersive(lambda));
        const DwellReport d = dwell_times_dispersive_dispersion(preset_dispersive(lambda));
        CHECK(std::abs(d.population_dwell / c.population_dwell - 1.0) <= 1e-12);
        CHECK(std::abs(d.coherence_dwell / c.coherence_dwell - 1.0) <= 1e-12);
    }
}

TEST_CASE("velocity dispersion shortens the dwell time monotonically") {
    double prev = 1e300;
    for (int i = 0; i <= 10; ++i) {
        const DwellReport r = dwell_times_kick_dispersion(preset_kick(1.0, 0.2 * i));
        CHECK(r.coherence_dwell < prev + 1e-18);
        prev = r.coherence_dwell;
    }
    // gain definition holds in the dispersion variants
    const DwellReport r = dwell_times_kick_dispersion(preset_kick(0.7, 1.0));
    CHECK(r.gain == doctest::Approx(kKappa * r.coherence_dwell - 1.0).epsilon(1e-12));
}

TEST_CASE("coherence dwell at least matches the population dwell on the grid") {
    // W < 0 lets the kick coherence dwell exceed twice the population dwell
    // by the (tiny) dispersion correction; it must never drop below it
    for (int i = 0; i <= 10; ++i) {
        for (int j = 0; j <= 10; ++j) {
            const DwellReport r =
                dwell_times_kick_dispersion(preset_kick(i / 10.0, 0.2 * j));
            CHECK(r.coherence_dwell >= r.population_dwell);
            CHECK(r.coherence_dwell <= 2.0 * r.population_dwell * (1.0 + 1e-6));
            const DwellReport s =
                dwell_times_dispersive_dispersion(preset_dispersive(i / 10.0, 0.2 * j));
            CHECK(s.coherence_dwell >= s.population_dwell);
            CHECK(s.coherence_dwell <= 2.0 * s.population_dwell * (1.0 + 1e-6));
        }
    }
}

TEST_CASE("Lambda + xi stays positive on the default grid") {
    const DispersiveParams d = preset_dispersive(1.0);
    for (int i = 0; i <= 20; ++i) {
        const double tau = d.tau * (0.25 + i * 0.25);
        const double lam = dispersion_population_coeff_dispersive(
            d.kappa, d.Omega, tau, d.a, d.w0, d.v0, 0.0);
        const double xi = dispersion_coherence_coeff_dispersive(d.kappa, d.Omega, tau, d.a,
                                                                d.w0, d.v0, 0.0);
        CHECK(lam + xi > 0.0);
    }
}

TEST_CASE("inequality evaluators, kick") {
    KickParams p = preset_kick(1.0, 0.0);
    InequalityReport r = inequality_kick(p);
    CHECK(r.lhs == 0.0);
    CHECK(r.satisfied);

    // frozen: lambda = 1, a = 0, Omega/kappa = 10, dv/v0 = 0.1
    KickParams q;
    q.kappa = 1.0;
    q.Omega = 10.0;
    q.T = 0.1;
    q.lambda = 1.0;
    q.a = 0.0;
    q.v0 = 1.0;
    q.dv = 0.1;
    r = inequality_kick(q);
    CHECK(r.lhs == doctest::Approx(0.15707963267948966).epsilon(1e-14));
    CHECK(r.satisfied);
    // quadratic scaling
    KickParams q10 = q;
    q10.dv = 1.0;
    CHECK(inequality_kick(q10).lhs == doctest::Approx(100.0 * r.lhs).epsilon(1e-13));
    CHECK_FALSE(inequality_kick(q10).satisfied);
}

TEST_CASE("inequality evaluators, dispersive") {
    DispersiveParams q = preset_dispersive(1.0);
    q.kappa = 1.0;
    q.Omega = 10.0;
    q.a = 0.0;
    q.v0 = 1.0;
    q.dv = 0.1;
    const InequalityReport r = inequality_dispersive(q);
    CHECK(r.lhs == doctest::Approx(0.35903916041026208).epsilon(1e-14));
    // halving lambda doubles the lhs
    DispersiveParams h = q;
    h.lambda = 0.5;
    CHECK(inequality_dispersive(h).lhs == doctest::Approx(2.0 * r.lhs).epsilon(1e-13));
    CHECK(r.reduced_threshold == 0.1);
    CHECK(r.reduced_value == doctest::Approx(10.0 * 0.01).epsilon(1e-14));
}

TEST_CASE("effective channel rates") {
    KickParams p = preset_kick(0.0, 0.0);
    EffectiveRates r = effective_rates_kick(p);
    CHECK(r.F_bar == 0.0);
    CHECK(r.kappa_bar == doctest::Approx(kKappa).epsilon(1e-12));  // bare 1/(2 * 1/(2k))

    p = preset_kick(1.0, 1.0);
    r = effective_rates_kick(p);
    const double w = dispersion_coherence_coeff_kick(p.kappa, p.Omega, p.a, p.w0, p.v0);
    CHECK(r.F_bar ==
          doctest::Approx(p.kappa * w * (p.dv / p.v0) * (p.dv / p.v0) / (2.0 * p.T))
              .epsilon(1e-12));
    CHECK(r.F_bar < 0.0);  // W is negative for positive geometry, as printed

    DispersiveParams d = preset_dispersive(0.0, 0.0);
    CHECK(effective_rates_dispersive(d).kappa_bar == doctest::Approx(kKappa).epsilon(1e-12));
    CHECK(effective_rates_dispersive(d).F_bar == 0.0);
    d = preset_dispersive(1.0, 1.0);
    CHECK(effective_rates_dispersive(d).F_bar > 0.0);  // xi is positive at f = 0
}

TEST_CASE("channel fidelity endpoints, frozen value and monotonicity") {
    CHECK(channel_fidelity(0.5, 0.5, 0.0) == 1.0);
    CHECK(channel_fidelity(0.5, 0.5, 1e300) == 0.5);
    CHECK(channel_fidelity(0.5, 0.5, 1.0) ==
          doctest::Approx(0.68393972058572116).epsilon(1e-14));
    double prev = 1.0;
    for (int i = 1; i <= 10; ++i) {
        const double f = channel_fidelity(0.4, 0.1, 0.3 * i);
        CHECK(f < prev);
        CHECK(f >= 0.5);
        prev = f;
    }
    CHECK(channel_fidelity(0.4, 0.2, 1.0) < channel_fidelity(0.4, 0.1, 1.0));
    CHECK(channel_fidelity(0.5, 0.1, 1.0) < channel_fidelity(0.4, 0.1, 1.0));
}
