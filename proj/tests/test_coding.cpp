#include <doctest.h>

#include "oracles.hpp"
#include "statmech/asymptotics.hpp"
#include "statmech/coding.hpp"
#include "statmech/error.hpp"
#include "statmech/numerics.hpp"

#include <array>
#include <cmath>

using namespace statmech;
using namespace statmech::coding;
using asymptotics::binary_divergence;
using asymptotics::binary_entropy;
using asymptotics::gv_distance;
using numerics::kLn2;

TEST_CASE("binary symmetric channel")
{
    Bsc bsc{0.1};
    CHECK(bsc.coupling() == doctest::Approx(std::log(9.0)));
    CHECK(bsc.capacity() == doctest::Approx(kLn2 - binary_entropy(0.1)));
    CHECK_THROWS_AS(Bsc{0.5}.validate(), DomainError);
    CHECK_THROWS_AS(Bsc{0.7}.validate(), DomainError);
    CHECK_THROWS_AS(Bsc{0.0}.validate(), DomainError);
}

TEST_CASE("attracting distortion level")
{
    CHECK(p_beta(0.1, 1.0) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(p_beta(0.1, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p_beta(0.1, 200.0) < 1e-9);
    double previous = 0.5;
    for (double beta = 0.1; beta < 20.0; beta += 0.1) {
        double value = p_beta(0.2, beta);
        CHECK(value < previous);
        previous = value;
    }
}

TEST_CASE("incorrect-codeword exponent")
{
    const double p = 0.1;
    for (double rate : {0.1, 0.3, 0.5}) {
        double bc = ze_critical_beta(rate, p);
        CHECK(p_beta(p, bc) == doctest::Approx(gv_distance(rate)).epsilon(1e-10));
        CHECK(ze_phi(bc * (1.0 - 1e-12), rate, p).value ==
              doctest::Approx(ze_phi(bc * (1.0 + 1e-12), rate, p).value).epsilon(1e-10));
        CHECK(ze_phi(0.5 * bc, rate, p).phase == DecoderPhase::Paramagnetic);
        CHECK(ze_phi(2.0 * bc, rate, p).phase == DecoderPhase::Glassy);
    }
    // above capacity beta = 1 lies in the paramagnetic phase
    CHECK(ze_phi(1.0, 0.5, p).value == doctest::Approx(0.5 - kLn2).epsilon(1e-14));

    // direct maximization over the distortion levels that carry exponentially many codewords
    const double rate = 0.3;
    const double beta = 2.0;
    double J = std::log((1.0 - p) / p);
    double delta = gv_distance(rate);
    double inner = oracles::grid_max([&](double d) { return binary_entropy(d) - beta * J * d; }, delta, 1.0 - delta,
                                     1000001);
    double expected = rate - kLn2 + beta * std::log(1.0 - p) + inner;
    auto branch = ze_phi(beta, rate, p);
    CHECK(branch.value == doctest::Approx(expected).epsilon(1e-9));
    CHECK(branch.phase == (beta < ze_critical_beta(rate, p) ? DecoderPhase::Paramagnetic : DecoderPhase::Glassy));
}

TEST_CASE("decoder phase diagram")
{
    const double p = 0.1;
    const double C = Bsc{p}.capacity();
    CHECK(decoder_phase(50.0, 0.5 * C, p).phase == DecoderPhase::Ferromagnetic);
    CHECK(decoder_phase(50.0, C + 0.05, p).phase == DecoderPhase::Glassy);
    CHECK(decoder_phase(1.0, C + 0.05, p).phase != DecoderPhase::Ferromagnetic);
    CHECK(decoder_phase(0.2, C + 0.05, p).phase == DecoderPhase::Paramagnetic);

    // triple point
    auto triple = decoder_phase(1.0, C, p);
    auto para = ze_phi(1.0 * (1.0 - 1e-13), C, p).value;
    auto glassy = ze_phi(1.0 * (1.0 + 1e-13), C, p).value;
    CHECK(std::abs(triple.ferromagneticExponent - para) < 1e-9);
    CHECK(std::abs(triple.ferromagneticExponent - glassy) < 1e-9);
    CHECK(ze_critical_beta(C, p) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ferromagnetic_exponent(1.0, p) == doctest::Approx(-binary_entropy(p)).epsilon(1e-14));

    for (double rate : {0.05, 0.15, 0.3, 0.36}) {
        auto b = decoder_boundaries(rate, p);
        REQUIRE(b.ferromagneticBeta.has_value());
        double gap = ferromagnetic_exponent(*b.ferromagneticBeta, p) - ze_phi(*b.ferromagneticBeta, rate, p).value;
        CHECK(std::abs(gap) < 1e-9);
        CHECK(decoder_phase(*b.ferromagneticBeta * 1.01, rate, p).phase == DecoderPhase::Ferromagnetic);
        CHECK(decoder_phase(*b.ferromagneticBeta * 0.99, rate, p).phase != DecoderPhase::Ferromagnetic);
    }
    for (double rate : {0.4, 0.6}) {
        auto b = decoder_boundaries(rate, p);
        CHECK_FALSE(b.ferromagneticBeta.has_value());
        CHECK(p_beta(p, b.paraGlassyBeta) == doctest::Approx(gv_distance(rate)).epsilon(1e-10));
    }
    // away from boundaries one phase strictly dominates
    for (double beta : {0.3, 0.7, 1.5, 4.0}) {
        for (double rate : {0.1, 0.25, 0.45, 0.6}) {
            auto point = decoder_phase(beta, rate, p);
            CHECK(point.dominantExponent == std::max(point.ferromagneticExponent, point.randomExponent));
        }
    }
}

TEST_CASE("correct-decoding exponent above capacity")
{
    const double p = 0.1;
    const double C = Bsc{p}.capacity();
    CHECK(pc_exponent(C, p) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(pc_exponent(0.3, p) == 0.0);
    CHECK(pc_exponent(0.0, p) == 0.0);
    for (double rate : {0.3, 0.5, 0.6}) {
        double delta = gv_distance(rate);
        double chain = -(kLn2 - rate + delta * std::log(p) + (1.0 - delta) * std::log(1.0 - p));
        CHECK(binary_divergence(delta, p) == doctest::Approx(chain).epsilon(1e-12));
    }
    double delta = gv_distance(0.5);
    CHECK(pc_exponent(0.5, p) == doctest::Approx(binary_divergence(delta, p)).epsilon(1e-14));
    CHECK(pc_exponent(0.5, p) > 0.0);
    CHECK_THROWS_AS((void)pc_exponent(-0.1, p), DomainError);
}

TEST_CASE("erasure exponents reproduce the published table")
{
    ErasureSettings settings;
    constexpr std::array<double, 7> jensen{0.1390, 0.1290, 0.1190, 0.1090, 0.0990, 0.0890, 0.0790};
    constexpr std::array<double, 7> direct{0.2211, 0.2027, 0.1838, 0.1642, 0.1441, 0.1231, 0.1015};
    double lastJ = 1.0, lastD = 1.0;
    for (int i = 0; i < 7; ++i) {
        double rate = 0.01 * i;
        auto ej = erasure_exponent_jensen(rate, settings);
        auto ed = erasure_exponent_direct(rate, settings);

        CHECK(std::abs(ej.value - jensen[i]) <= 0.0005);
        CHECK(std::abs(ed.value - direct[i]) <= 0.0005);
        CHECK(ed.value >= ej.value);
        CHECK(ej.value <= lastJ);
        CHECK(ed.value <= lastD);
        lastJ = ej.value;
        lastD = ed.value;
        REQUIRE(ej.s.has_value());
        REQUIRE(ej.rho.has_value());
        CHECK(*ej.s <= *ej.rho + 1e-12);
    }
    auto atZero = erasure_exponent_direct(0.0, settings);
    REQUIRE(atZero.s.has_value());
    CHECK(std::abs(*atZero.s - 2.0) <= 0.0051);

    ErasureSettings refined = settings;
    refined.refine = true;
    CHECK(erasure_exponent_direct(0.03, refined).value >= erasure_exponent_direct(0.03, settings).value - 1e-12);
}

TEST_CASE("hierarchical code exponents")
{
    const double rate = 0.3;
    double knee = hierarchical_knee(rate);
    double delta = gv_distance(rate);
    CHECK(knee == doctest::Approx(std::log((1.0 - delta) / delta)));
    CHECK(hierarchical_u(0.0, rate) == 0.0);
    double left = knee * delta;
    double right = kLn2 - rate + knee - std::log1p(std::exp(knee));
    CHECK(std::abs(left - right) < 1e-12);
    CHECK(std::abs(hierarchical_u(knee, rate) - hierarchical_u(knee * (1.0 + 1e-14), rate)) < 1e-12);
    const double h = 1e-6;
    CHECK((hierarchical_u(h, rate) - hierarchical_u(0.0, rate)) / h == doctest::Approx(delta).epsilon(1e-9));

    // u(s, R) = ln 2 - R - max_{d <= delta_GV} [h2(d) - s d]
    for (double s : {0.5, 2.0, 5.0}) {
        double inner = oracles::grid_max([&](double d) { return binary_entropy(d) - s * d; }, 0.0, delta, 200001);
        CHECK(hierarchical_u(s, rate) == doctest::Approx(kLn2 - rate - inner).epsilon(1e-8));
    }

    for (double s : {0.2, 1.0, 3.0}) {
        auto same = hierarchical_two_stage(s, rate, rate, 0.4);
        CHECK(same.value == doctest::Approx(hierarchical_u(s, rate)).epsilon(1e-14));
        CHECK(same.valid);
        CHECK_FALSE(same.validUpTo.has_value());
    }
    // decoupled stages: lambda u(R1) + (1 - lambda) u(R2) against u at the average rate
    for (double s = 0.05; s <= 1.0; s += 0.05) {
        auto split = hierarchical_two_stage(s, 0.2, 0.4, 0.5);
        CHECK(split.rate == doctest::Approx(0.3));
        CHECK(split.value >= hierarchical_u(s, 0.3) - 1e-14);
    }
    auto nearlyFirst = hierarchical_two_stage(1.0, 0.2, 0.4, 1.0 - 1e-9);
    CHECK(nearlyFirst.value == doctest::Approx(hierarchical_u(1.0, 0.2)).epsilon(1e-7));
    auto reversed = hierarchical_two_stage(1.0, 0.4, 0.2, 0.5);
    REQUIRE(reversed.validUpTo.has_value());
    CHECK(reversed.value == doctest::Approx(hierarchical_u(1.0, 0.3)));
    CHECK(reversed.valid == (1.0 <= *reversed.validUpTo));
    CHECK_FALSE(hierarchical_two_stage(50.0, 0.4, 0.2, 0.5).valid);
    CHECK_THROWS_AS((void)hierarchical_two_stage(1.0, 0.2, 0.4, 1.5), DomainError);
}

TEST_CASE("joint source-channel boundaries")
{
    auto symmetric = jscc_boundaries(0.1, 0.5, 1.0);
    CHECK(symmetric.field == 0.0);

    // theta C = ln 2 exactly
    double p = 0.1;
    double matched = kLn2 / Bsc{p}.capacity();
    auto edge = jscc_boundaries(p, 0.3, matched);
    CHECK(edge.qStar == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(std::abs(edge.fieldBoundary) < 1e-7);
    CHECK_THROWS_AS((void)jscc_boundaries(p, 0.3, 1.01 * matched), DomainError);

    auto b = jscc_boundaries(0.1, 0.75, 1.0);
    CHECK(b.field == doctest::Approx(0.5 * std::log(3.0)));
    CHECK(std::abs(binary_entropy(b.qStar) - Bsc{0.1}.capacity()) < 1e-10);
    CHECK(b.qStar <= 0.5);
    CHECK(b.fieldBoundary == doctest::Approx(0.5 * std::log(b.qStar / (1.0 - b.qStar))));
    double residual = kLn2 - binary_entropy(p_beta(0.1, b.criticalBeta)) -
                      binary_entropy(0.5 * (1.0 + std::tanh(b.criticalBeta * b.field)));
    CHECK(std::abs(residual) < 1e-10);
}

TEST_CASE("joint source-channel free energy")
{
    const double p = 0.1, theta = 1.0;
    const double field = 0.5 * std::log(3.0);
    double bc = jscc_critical_beta(field, theta, p);
    REQUIRE(std::isfinite(bc));

    auto hot = jscc_phi(0.3 * bc, field, theta, p);
    CHECK(hot.phase == DecoderPhase::Paramagnetic);
    CHECK(hot.magnetization == doctest::Approx(std::tanh(0.3 * bc * field)).epsilon(1e-3));

    double frozen = std::tanh(field * bc);
    auto cold1 = jscc_phi(1.5 * bc, field, theta, p);
    auto cold2 = jscc_phi(3.0 * bc, field, theta, p);
    CHECK(cold1.phase == DecoderPhase::Glassy);
    CHECK(cold2.phase == DecoderPhase::Glassy);
    CHECK(std::abs(cold1.magnetization - frozen) < 1e-3);
    CHECK(std::abs(cold2.magnetization - frozen) < 1e-3);

    auto zero = jscc_phi(0.7, 0.0, theta, p);
    CHECK(std::abs(zero.magnetization) < 1e-3);
    CHECK(zero.phi == doctest::Approx(theta * jscc_psi(0.7, 0.0, theta, p)).epsilon(1e-9));

    // the grid maximum agrees with a fine scan
    double fine = oracles::grid_max([&](double m) { return theta * jscc_psi(1.2, m, theta, p) + 1.2 * m * field; },
                                    -1.0 + 1e-9, 1.0 - 1e-9, 400001);
    CHECK(jscc_phi(1.2, field, theta, p).phi == doctest::Approx(fine).epsilon(1e-7));
}
