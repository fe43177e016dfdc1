#include <doctest.h>

#include "oracles.hpp"
#include "statmech/asymptotics.hpp"
#include "statmech/error.hpp"
#include "statmech/numerics.hpp"
#include "statmech/random.hpp"
#include "statmech/rem.hpp"

#include <cmath>

using namespace statmech;
using namespace statmech::rem;
using numerics::kLn2;

TEST_CASE("quenched REM free energy")
{
    CHECK(rem_phi(0.0, 1.0).value == doctest::Approx(kLn2));
    double bc = rem_critical_beta(1.0);
    CHECK(bc == doctest::Approx(2.0 * std::sqrt(kLn2)));
    auto curve = rem_phi_curve(1.0);
    CHECK(curve.segments[0].value(bc) == doctest::Approx(2.0 * kLn2).epsilon(1e-14));
    CHECK(curve.segments[1].value(bc) == doctest::Approx(2.0 * kLn2).epsilon(1e-14));
    CHECK(curve.segments[0].slope(bc) == doctest::Approx(curve.segments[1].slope(bc)).epsilon(1e-14));
    CHECK(curve.segments[0].quadratic != curve.segments[1].quadratic);
    auto cold = rem_phi(3.0, 1.0);
    CHECK(cold.value == doctest::Approx(3.0 * std::sqrt(kLn2)).epsilon(1e-15));
    CHECK(cold.phase == Phase::Glassy);
    CHECK(rem_phi(0.5, 1.0).phase == Phase::Paramagnetic);
    CHECK_NOTHROW(curve.validate());
    CHECK(curve.continuity_residual() < 1e-12);
}

TEST_CASE("REM entropy")
{
    CHECK(*rem_entropy(0.0, 1.0) == doctest::Approx(kLn2));
    CHECK(*rem_entropy(std::sqrt(kLn2), 1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(*rem_entropy(-std::sqrt(kLn2), 1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_FALSE(rem_entropy(1.1 * std::sqrt(kLn2), 1.0).has_value());
    CHECK_FALSE(rem_entropy(-2.0, 1.0).has_value());
}

TEST_CASE("annealed versus quenched")
{
    double bc = rem_critical_beta(1.0);
    CHECK(rem_annealed_phi(0.0, 1.0) == doctest::Approx(kLn2));
    CHECK(rem_annealed_phi(bc, 1.0) == doctest::Approx(rem_phi(bc, 1.0).value).epsilon(1e-14));
    double b = 2.0 * bc;
    double gap = rem_annealed_phi(b, 1.0) - rem_phi(b, 1.0).value;
    CHECK(gap == doctest::Approx(std::pow(b / 2.0 - std::sqrt(kLn2), 2)).epsilon(1e-12));
    CHECK(gap > 0.0);
    for (double J : {0.5, 1.0, 2.0}) {
        for (double beta : numerics::linspace(0.0, 10.0, 501)) {
            CHECK(rem_annealed_phi(beta, J) - rem_phi(beta, J).value >= -1e-12);
        }
    }
}

TEST_CASE("Legendre transform of the REM entropy reproduces phi")
{
    const double J = 1.0;
    double edge = J * std::sqrt(kLn2);
    // support [-edge, edge] sampled exactly, plus unattainable samples on either side
    auto grid = numerics::linspace(-edge, edge, 20001);
    for (int k = 1; k <= 50; ++k) {
        grid.push_back(edge * (1.0 + 0.004 * k));
        grid.insert(grid.begin(), -edge * (1.0 + 0.004 * k));
    }
    auto entropy = asymptotics::SampledFunction::tabulate(grid, [&](double e) { return rem_entropy(e, J); });
    auto betas = numerics::linspace(0.0, 3.0 * rem_critical_beta(J), 301);
    auto pair = asymptotics::legendre_transform(entropy, asymptotics::LegendreDirection::EntropyToFreeEnergy, betas);
    for (std::size_t i = 0; i < betas.size(); ++i) {
        CHECK(std::abs(*pair.transform.values[i] - rem_phi(betas[i], J).value) < 1e-4);
    }
}

TEST_CASE("REM Monte Carlo")
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        CHECK(std::abs(rem_monte_carlo(20, 1.0, 1.0, seed) - (kLn2 + 0.25)) < 0.05);
        // At n = 20 the largest of 2^n Gaussians still sits about 1.2 standard deviations short of
        // its asymptotic position, which biases the glassy rate low by roughly 0.17.
        double glassy = rem_monte_carlo(20, 1.0, 3.0, seed);
        CHECK(glassy < 3.0 * std::sqrt(kLn2));
        CHECK(3.0 * std::sqrt(kLn2) - glassy < 0.35);
        CHECK(rem_monte_carlo(12, 1.0, 0.0, seed) == kLn2);
    }
    CHECK(rem_monte_carlo(16, 1.0, 1.0, 42) == rem_monte_carlo(16, 1.0, 1.0, 42));
    CHECK_THROWS_AS(rem_monte_carlo(25, 1.0, 1.0, 1), SizeError);
}

TEST_CASE("REM in a magnetic field")
{
    for (double beta : {0.3, 1.0, 1.6, 2.5, 4.0}) {
        auto s = rem_field_phi(beta, 0.0, 1.0);
        CHECK(s.phi == doctest::Approx(rem_phi(beta, 1.0).value).epsilon(1e-13));
        CHECK(s.magnetization == 0.0);
    }
    CHECK(rem_field_critical_beta(0.0, 1.0) == doctest::Approx(rem_critical_beta(1.0)).epsilon(1e-13));
    CHECK(std::abs(rem_field_phi(0.5, 1e-9, 1.0).magnetization) < 1e-8);
    CHECK(std::abs(rem_field_phi(4.0, 1e-9, 1.0).magnetization) < 1e-8);

    // The transition temperature 1 / beta_c(B) grows with |B|.
    double previous = 0.0;
    for (double B : {0.0, 0.5, 1.0, 2.0}) {
        double tc = 1.0 / rem_field_critical_beta(B, 1.0);
        CHECK(tc > previous);
        CHECK(tc == doctest::Approx(1.0 / rem_field_critical_beta(-B, 1.0)));
        previous = tc;
    }

    // phases and phi against a brute-force maximization over m
    for (double B : {0.2, 0.7, 1.5}) {
        for (double beta : {0.4, 1.2, 2.0, 3.5}) {
            auto s = rem_field_phi(beta, B, 1.0);
            auto objective = [&](double m) { return rem_field_psi(beta, m, 1.0) + beta * m * B; };
            double best = oracles::grid_max(objective, -1.0, 1.0, 400001);
            CHECK(s.phi == doctest::Approx(best).epsilon(1e-8));
            double arg = oracles::grid_argmax(objective, -1.0, 1.0, 400001);
            CHECK(std::abs(s.magnetization - arg) < 1e-3);
            if (s.phase == Phase::Paramagnetic) {
                CHECK(std::abs(s.magnetization - std::tanh(beta * B)) < 1e-10);
            } else {
                CHECK(std::abs(s.magnetization - std::tanh(B * s.criticalBeta)) < 1e-8);
            }
        }
    }
}

TEST_CASE("REM susceptibility")
{
    double tc = 1.0 / rem_critical_beta(1.0);
    CHECK(rem_susceptibility(2.0 * tc, 1.0) == doctest::Approx(1.0 / (2.0 * tc)));
    CHECK(rem_susceptibility(0.5 * tc, 1.0) == doctest::Approx(1.0 / tc));
    CHECK(rem_susceptibility(tc * (1 + 1e-12), 1.0) == doctest::Approx(1.0 / tc));
    CHECK(rem_susceptibility(tc * (1 - 1e-12), 1.0) == doctest::Approx(1.0 / tc));
    // dm/dB at B -> 0 from the field solution
    for (double T : {0.5 * tc, 3.0 * tc}) {
        const double dB = 1e-7;
        double slope = rem_field_phi(1.0 / T, dB, 1.0).magnetization / dB;
        CHECK(slope == doctest::Approx(rem_susceptibility(T, 1.0)).epsilon(1e-6));
    }
}

TEST_CASE("two-level GREM")
{
    GremParams boundary{1.0, 0.5 * kLn2, 0.5};
    CHECK_FALSE(boundary.two_transitions());
    for (double beta : numerics::linspace(0.0, 5.0, 51)) {
        CHECK(grem_phi(beta, boundary).value == doctest::Approx(rem_phi(beta, 1.0).value).epsilon(1e-15));
    }

    GremParams split{1.0, 0.2, 0.5};
    CHECK(split.two_transitions());
    auto curve = grem_phi_curve(split);
    REQUIRE(curve.segments.size() == 3);
    auto t = curve.transitions();
    CHECK(t[0] < t[1]);
    CHECK(t[0] == doctest::Approx(2.0 * std::sqrt(0.2 / 0.5)));
    CHECK(t[1] == doctest::Approx(2.0 * std::sqrt((kLn2 - 0.2) / 0.5)));
    CHECK(curve.continuity_residual() < 1e-12);
    CHECK(grem_phi(0.5 * (t[0] + t[1]), split).phase == Phase::PartiallyFrozen);
    double slope = curve.segments.back().linear;
    CHECK(slope == doctest::Approx(std::sqrt(0.5 * 0.2) + std::sqrt(0.5 * (kLn2 - 0.2))).epsilon(1e-15));
    CHECK(slope < std::sqrt(kLn2));

    Rng rng(17);
    for (int i = 0; i < 1000; ++i) {
        GremParams p{1.0, kLn2 * (0.001 + 0.998 * rng.uniform()), 0.001 + 0.998 * rng.uniform()};
        CHECK((p.firstRate / p.firstShare < kLn2) == p.two_transitions());
        auto c = grem_phi_curve(p);
        CHECK(c.continuity_residual() < 1e-12);
        double tail = c.segments.back().linear;
        CHECK(tail <= std::sqrt(kLn2) + 1e-15);
    }
    CHECK_THROWS_AS(grem_phi(1.0, GremParams{1.0, 0.8, 0.5}), DomainError);
    CHECK_THROWS_AS(grem_phi(1.0, GremParams{1.0, 0.2, 1.0}), DomainError);
}

TEST_CASE("free-energy curves are convex with non-negative entropy")
{
    auto betas = numerics::linspace(0.0, 8.0, 1601);
    const double h = betas[1] - betas[0];
    std::vector<std::function<double(double)>> curves{
        [](double b) { return rem_phi(b, 1.0).value; },
        [](double b) { return rem_phi(b, 2.5).value; },
        [](double b) { return rem_field_phi(b, 0.5, 1.0).phi; },
        [](double b) { return rem_field_phi(b, 1.5, 0.7).phi; },
        [](double b) { return grem_phi(b, GremParams{1.0, 0.2, 0.5}).value; },
        [](double b) { return grem_phi(b, GremParams{1.3, 0.5, 0.3}).value; },
    };
    for (const auto& phi : curves) {
        for (std::size_t i = 1; i + 1 < betas.size(); ++i) {
            double second = phi(betas[i + 1]) - 2.0 * phi(betas[i]) + phi(betas[i - 1]);
            CHECK(second >= -1e-9);
        }
    }
    for (const auto& curve : {rem_phi_curve(1.0), grem_phi_curve(GremParams{1.0, 0.2, 0.5})}) {
        for (double b : betas) {
            const auto& seg = curve.segment_at(b);
            double entropy = seg.value(b) - b * seg.slope(b);
            CHECK(entropy >= -1e-9);
            if (seg.phase == Phase::Glassy) {
                CHECK(std::abs(entropy) < 1e-12);
            }
        }
    }
    (void)h;
}

TEST_CASE("SK metastable-state capacity")
{
    auto negative = sk_capacity(-10.0, 1.0);
    CHECK(std::abs(negative.capacity - kLn2) < 1e-3);
    auto positive = sk_capacity(6.0, 1.0);
    CHECK(positive.capacity < 1e-3);
    auto zero = sk_capacity(0.0, 1.0);
    CHECK(zero.residual < 1e-12);
    auto exponent = [](double t) {
        return std::log(2.0 * (1.0 - numerics::gaussian_tail(t))) - 0.5 * t * t;
    };
    double lo = zero.tStar - 0.05;
    double hi = zero.tStar + 0.05;
    double best = oracles::grid_max(exponent, lo, hi, 2000001);
    CHECK(std::abs(zero.capacity - best) < 1e-8);
    CHECK(std::abs(oracles::grid_argmax(exponent, lo, hi, 2000001) - zero.tStar) < 1e-6);
    // scale invariance in K / J
    CHECK(sk_capacity(2.0, 4.0).capacity == doctest::Approx(sk_capacity(0.5, 1.0).capacity).epsilon(1e-14));
    for (double ratio : {-10.0, -3.0, 0.0, 1.0, 3.0, 6.0}) {
        CHECK(sk_capacity(ratio, 1.0).residual < 1e-12);
    }
    CHECK_THROWS_AS(sk_capacity(0.0, -1.0), DomainError);
}
