#include <doctest.h>

#include "oracles.hpp"
#include "statmech/error.hpp"
#include "statmech/random.hpp"
#include "statmech/spin_models.hpp"

#include <cmath>

using namespace statmech;
using namespace statmech::spin;

TEST_CASE("1-D Ising free energy")
{
    for (double B : {-0.7, 0.0, 0.3, 2.0}) {
        IsingParams p{1.3, B, 0.0};
        CHECK(ising1d_phi(p) == doctest::Approx(std::log(2.0 * std::cosh(1.3 * B))).epsilon(1e-14));
    }
    IsingParams zeroField{1.0, 0.0, 1.0};
    CHECK(ising1d_phi(zeroField) == doctest::Approx(std::log(2.0 * std::cosh(1.0))).epsilon(1e-14));
    // K = 300 must not overflow
    IsingParams stiff{300.0, 0.0, 1.0};
    CHECK(ising1d_phi(stiff) == doctest::Approx(300.0).epsilon(1e-14));
    IsingParams p10{0.8, 0.4, 0.6};
    auto lambdaPower = ising1d_transfer_log_z(10, p10);
    CHECK(std::abs(lambdaPower - oracles::ising_ring_brute_force(10, 0.8 * 0.4, 0.8 * 0.6)) < 1e-10);
}

TEST_CASE("1-D Ising magnetization")
{
    CHECK(ising1d_magnetization({2.0, 0.0, 1.0}) == 0.0);
    CHECK(ising1d_magnetization({0.7, 0.9, 0.0}) == doctest::Approx(std::tanh(0.7 * 0.9)).epsilon(1e-14));
    CHECK(std::abs(ising1d_magnetization({50.0, 0.01, 1.0}) - 1.0) < 1e-6);
    CHECK(std::abs(ising1d_magnetization({50.0, -0.01, 1.0}) + 1.0) < 1e-6);

    Rng rng(21);
    for (int i = 0; i < 20; ++i) {
        double beta = 0.1 + 2.0 * rng.uniform();
        double B = 2.0 * rng.uniform() - 1.0;
        double J = 2.0 * rng.uniform() - 0.5;
        const double step = 1e-5;
        // d phi / d h with h = beta B
        double up = ising1d_phi({beta, B + step / beta, J});
        double down = ising1d_phi({beta, B - step / beta, J});
        CHECK(std::abs(ising1d_magnetization({beta, B, J}) - (up - down) / (2.0 * step)) < 1e-6);
    }
}

TEST_CASE("enumeration matches the transfer matrix")
{
    CHECK(ising1d_exact(2, {1.0, 0.0, 0.0}) == doctest::Approx(std::log(4.0)));
    IsingParams p{1.0, 0.3, 0.7};
    CHECK(std::abs(ising1d_exact(8, p) - ising1d_transfer_log_z(8, p)) < 1e-12);
    IsingParams cold{1.0, 0.0, 40.0};
    CHECK(ising1d_exact(3, cold) == doctest::Approx(std::log(2.0) + 3.0 * 40.0).epsilon(1e-12));
    CHECK_THROWS_AS(ising1d_exact(21, p), SizeError);
    CHECK_THROWS_AS(ising1d_exact(1, p), SizeError);

    Rng rng(8);
    for (int pair = 0; pair < 20; ++pair) {
        double h = 2.0 * rng.uniform() - 1.0;
        double K = 3.0 * rng.uniform() - 1.0;
        IsingParams q{1.0, h, K};
        for (int n = 2; n <= 12; ++n) {
            double exact = ising1d_exact(n, q);
            CHECK(std::abs(exact - ising1d_transfer_log_z(n, q)) <= 1e-10 * std::abs(exact));
            CHECK(std::abs(exact - oracles::ising_ring_brute_force(n, h, K)) <= 1e-10 * std::abs(exact));
        }
    }
}

TEST_CASE("Curie-Weiss fixed points")
{
    auto para = curie_weiss_solve({0.5, 0.0, 1.0});
    REQUIRE(para.fixedPoints.size() == 1);
    CHECK(para.fixedPoints[0] == doctest::Approx(0.0));
    CHECK(para.magnetization == doctest::Approx(0.0));
    CHECK(para.phase == CwPhase::Paramagnetic);
    CHECK(para.phi == doctest::Approx(std::log(2.0)));

    auto ordered = curie_weiss_solve({2.0, 0.0, 1.0});
    REQUIRE(ordered.fixedPoints.size() == 3);
    double m0 = ordered.fixedPoints[2];
    CHECK(ordered.fixedPoints[0] == doctest::Approx(-m0).epsilon(1e-12));
    CHECK(std::abs(ordered.fixedPoints[1]) < 1e-12);
    CHECK(ordered.kinds[1] == StationaryKind::Minimum);
    CHECK(ordered.kinds[0] == StationaryKind::Maximum);
    CHECK(ordered.kinds[2] == StationaryKind::Maximum);
    CHECK(ordered.maximizers.size() == 2);
    CHECK(ordered.phase == CwPhase::Ordered);
    CHECK(std::abs(m0 - std::tanh(2.0 * m0)) < 1e-12);

    auto biased = curie_weiss_solve({2.0, 0.1 / 2.0, 1.0});
    CHECK(biased.magnetization > 0.0);
    auto negative = curie_weiss_solve({2.0, -0.05, 1.0});
    CHECK(negative.magnetization < 0.0);

    Rng rng(4);
    for (int i = 0; i < 50; ++i) {
        IsingParams p{0.2 + 3.0 * rng.uniform(), rng.uniform() - 0.5, rng.uniform() * 2.0};
        auto s = curie_weiss_solve(p);
        for (double m : s.fixedPoints) {
            CHECK(std::abs(m - std::tanh(p.reduced_field() + p.reduced_coupling() * m)) < 1e-10);
        }
        // the chosen maximizer beats a dense grid of psi values
        double gridBest = oracles::grid_max([&](double m) { return curie_weiss_psi(p, m); }, -1.0 + 1e-12, 1.0 - 1e-12, 20001);
        CHECK(s.phi >= gridBest - 1e-12);
    }
}

TEST_CASE("Curie-Weiss critical coupling")
{
    for (double K : {0.5, 0.9, 0.99, 1.01, 1.1, 2.0, 5.0}) {
        auto s = curie_weiss_solve({K, 0.0, 1.0});
        bool nonzero = false;
        for (double m : s.fixedPoints) {
            nonzero = nonzero || std::abs(m) > 1e-9;
        }
        CHECK(nonzero == (K > 1.0));
        CHECK((s.phase == CwPhase::Ordered) == (K > 1.0));
    }
    auto tiny = curie_weiss_solve({1.5, 1e-6, 1.0});
    auto spontaneous = curie_weiss_solve({1.5, 0.0, 1.0});
    CHECK(tiny.magnetization == doctest::Approx(spontaneous.fixedPoints.back()).epsilon(1e-4));
    CHECK(tiny.magnetization > 0.5);

    // d phi / d beta = J m*^2 / 2 <= 1/2, so no grid step may move phi by more than half its width.
    double previous = curie_weiss_solve({0.9, 0.0, 1.0}).phi;
    const double step = 0.2 / 2000.0;
    for (int i = 1; i <= 2000; ++i) {
        double phi = curie_weiss_solve({0.9 + step * i, 0.0, 1.0}).phi;
        CHECK(std::abs(phi - previous) <= 0.5 * step + 1e-12);
        previous = phi;
    }
    double below = curie_weiss_solve({1.0 - 1e-7, 0.0, 1.0}).phi;
    double above = curie_weiss_solve({1.0 + 1e-7, 0.0, 1.0}).phi;
    CHECK(std::abs(above - below) < 1e-6);
}

TEST_CASE("Landau form agrees with the mean-field maximization")
{
    for (auto p : {IsingParams{2.0, 0.0, 1.0}, IsingParams{0.5, 0.0, 1.0}, IsingParams{1.5, 0.2 / 1.5, 1.0}}) {
        auto check = curie_weiss_landau_check(p);
        CHECK(std::abs(check.meanFieldValue - check.landauValue) < 1e-8);
        CHECK(std::abs(check.zStar - p.reduced_coupling() * check.magnetization) < 1e-8);
    }
    auto para = curie_weiss_landau_check({0.5, 0.0, 1.0});
    CHECK(para.landauValue == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(std::abs(para.zStar) < 1e-12);
}
