#include <doctest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "statmech/error.hpp"
#include "statmech/estimation.hpp"
#include "statmech/numerics.hpp"
#include "statmech/random.hpp"

#include <cmath>

using namespace statmech;
using namespace statmech::estimation;
using generators::random_binary_hmm;

TEST_CASE("gridded densities")
{
    auto g = gaussian_density(0.0, 2.0);
    CHECK_NOTHROW(g.validate());
    CHECK(g.mass() == doctest::Approx(1.0).epsilon(1e-14));
    auto shifted = g;
    shifted.values[2000] *= 1.01;
    CHECK_THROWS_AS(shifted.validate(), NormalizationError);
    auto clipped = GriddedDensity::tabulate([](double) { return 1.0; }, -1.0, 1.0, 101);
    CHECK_THROWS_AS(clipped.validate(), DomainError);
    CHECK_THROWS_AS(GriddedDensity::from_samples({0.0, 1.0, 3.0}, {0.0, 1.0, 0.0}), DomainError);
    auto round = GriddedDensity::from_samples({-1.0, 0.0, 1.0}, {0.0, 1.0, 0.0});
    CHECK(round.step == 1.0);
    CHECK(round.mass() == 1.0);
}

TEST_CASE("Fisher information")
{
    CHECK(std::abs(fisher_information(gaussian_density(0.0, 2.0)) - 0.5) < 1e-4);
    CHECK(std::abs(fisher_information(gaussian_density(0.0, 1.0)) - 1.0) < 1e-4);
    CHECK(std::abs(fisher_information(laplace_density(1.0)) - 1.0) < 1e-3);
    CHECK(fisher_information(gaussian_density(3.0, 0.3)) > 0.0);
    // translation invariance
    CHECK(fisher_information(gaussian_density(4.0, 2.0)) ==
          doctest::Approx(fisher_information(gaussian_density(0.0, 2.0))).epsilon(1e-12));
}

TEST_CASE("differential entropy")
{
    for (double var : {0.5, 1.0, 3.0}) {
        double exact = 0.5 * std::log(2.0 * numerics::kPi * std::exp(1.0) * var);
        CHECK(differential_entropy(gaussian_density(0.0, var)) == doctest::Approx(exact).epsilon(1e-10));
    }
}

TEST_CASE("perturbation laws")
{
    CHECK_NOTHROW(Perturbation::gaussian().validate());
    CHECK_NOTHROW(Perturbation::uniform().validate());
    CHECK_NOTHROW(Perturbation::triangular().validate());
    Perturbation wide{[](double z) { return std::abs(z) <= 2.0 ? 0.25 : 0.0; }, numerics::linspace(-2.0, 2.0, 5)};
    CHECK_THROWS_AS(wide.validate(), DomainError);
}

TEST_CASE("entropy derivative under small additive noise")
{
    const double variance = 1.5;
    auto q = gaussian_density(0.0, variance);
    auto gauss = de_bruijn_check(q, Perturbation::gaussian(), {0.0, 1e-2, 5e-3, 2.5e-3});
    CHECK(gauss.entropies[0] == gauss.baseEntropy);
    CHECK(gauss.halfFisher == doctest::Approx(0.5 / variance).epsilon(1e-4));
    CHECK(std::abs(gauss.slope - gauss.halfFisher) < 1e-3);
    // exact entropies of the Gaussian sum
    for (std::size_t i = 1; i < gauss.deltas.size(); ++i) {
        double exact = 0.5 * std::log(2.0 * numerics::kPi * std::exp(1.0) * (variance + gauss.deltas[i]));
        CHECK(gauss.entropies[i] == doctest::Approx(exact).epsilon(1e-9));
        CHECK(gauss.entropies[i] >= gauss.baseEntropy);
    }
    auto uni = de_bruijn_check(q, Perturbation::uniform());
    auto tri = de_bruijn_check(q, Perturbation::triangular());
    CHECK(std::abs(uni.slope - uni.halfFisher) < 1e-3);
    CHECK(std::abs(tri.slope - tri.halfFisher) < 1e-3);
    CHECK(std::abs(uni.slope - tri.slope) < 2e-3);
    CHECK(std::abs(uni.slope - gauss.slope) < 2e-3);

    // a non-Gaussian density: mixture of two Gaussians
    auto mix = GriddedDensity::tabulate(
        [](double x) { return std::exp(-0.5 * (x - 1.0) * (x - 1.0) / 0.6) + 0.7 * std::exp(-0.5 * (x + 1.5) * (x + 1.5)); },
        -12.0, 12.0, 6001);
    auto mg = de_bruijn_check(mix, Perturbation::gaussian());
    auto mu = de_bruijn_check(mix, Perturbation::uniform());
    CHECK(std::abs(mg.slope - mg.halfFisher) < 1e-3);
    CHECK(std::abs(mu.slope - mu.halfFisher) < 1e-3);
    for (double h : mu.entropies) {
        CHECK(h >= mu.baseEntropy);
    }

    auto product = de_bruijn_check_product({q, gaussian_density(0.0, 0.5)}, Perturbation::gaussian());
    CHECK(std::abs(product.slope - product.halfFisher) < 2e-3);
    CHECK(product.halfFisher == doctest::Approx(0.5 / variance + 1.0).epsilon(1e-4));

    CHECK_THROWS_AS(de_bruijn_check(q, Perturbation::gaussian(), {400.0}), SizeError);
    CHECK_THROWS_AS(de_bruijn_check(q, Perturbation::gaussian(), {0.0}), DomainError);
}

TEST_CASE("Fisher temperature")
{
    // Boltzmann density of alpha x^2 / 2 at temperature T has variance T / alpha
    const double alpha = 3.0, temperature = 0.8;
    CHECK(std::abs(generalized_temperature(gaussian_density(0.0, temperature / alpha), alpha) - temperature) < 1e-3);
    CHECK(std::abs(generalized_temperature(laplace_density(1.0), 2.0) - 2.0) < 2e-3);
    CHECK(generalized_temperature(gaussian_density(5.0, 0.4), 1.0) ==
          doctest::Approx(generalized_temperature(gaussian_density(0.0, 0.4), 1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(generalized_temperature(gaussian_density(0.0, 1.0), 0.0), DomainError);
}

TEST_CASE("hidden Markov entropy bound")
{
    auto bsc = HmmSpec::binary_symmetric(0.1, 0.2);
    auto pair = pair_law(bsc);
    double total = 0.0;
    for (double p : pair) {
        total += p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
    auto bound = hmm_entropy_upper_bound(bsc);
    auto mc = oracles::hmm_entropy_rate_mc(bsc.transition, bsc.emission, bsc.stationary, 2, 1000000, 77);
    CHECK(bound.bound >= mc.mean - 3.0 * mc.standardError);
    // the optimizer does at least as well as a grid over the two free conditionals
    double gridBest = -1e300;
    for (double a : numerics::linspace(1e-6, 1.0 - 1e-6, 401)) {
        for (double b : numerics::linspace(1e-6, 1.0 - 1e-6, 401)) {
            gridBest = std::max(gridBest, expected_delta(bsc, {a, 1.0 - a, b, 1.0 - b}));
        }
    }
    CHECK(bound.bound <= -gridBest + 1e-12);
    CHECK(bound.bound == doctest::Approx(-gridBest).epsilon(1e-4));
    CHECK(bound.converged);
    double mass = 0.0;
    for (double p : bound.joint) {
        mass += p;
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));

    // observable chain: the bound is the chain's own entropy rate
    auto observed = HmmSpec::make(3, 3, {0.5, 0.3, 0.2, 0.1, 0.6, 0.3, 0.4, 0.4, 0.2},
                                  {1, 0, 0, 0, 1, 0, 0, 0, 1});
    auto ob = hmm_entropy_upper_bound(observed);
    CHECK(std::isfinite(ob.bound));
    CHECK(ob.bound >= markov_entropy_rate(observed) - 1e-12);
    std::vector<double> identity{1, 0, 0, 0, 1, 0, 0, 0, 1};
    CHECK(-expected_delta(observed, identity) == doctest::Approx(markov_entropy_rate(observed)).epsilon(1e-12));

    // memoryless states: single-letter entropy
    auto iid = HmmSpec::make(2, 3, {0.3, 0.7, 0.3, 0.7}, {0.6, 0.3, 0.1, 0.2, 0.2, 0.6});
    auto ib = hmm_entropy_upper_bound(iid);
    std::vector<double> py(3, 0.0);
    for (std::size_t x = 0; x < 2; ++x) {
        for (std::size_t y = 0; y < 3; ++y) {
            py[y] += iid.stationary[x] * iid.w(x, y);
        }
    }
    double single = 0.0;
    for (double p : py) {
        single -= p * std::log(p);
    }
    CHECK(ib.bound - single >= -1e-9);
    CHECK(ib.bound - single <= 1e-9);

    Rng rng(2024);
    for (int trial = 0; trial < 4; ++trial) {
        auto hmm = random_binary_hmm(rng);
        auto b = hmm_entropy_upper_bound(hmm);
        auto est = oracles::hmm_entropy_rate_mc(hmm.transition, hmm.emission, hmm.stationary, 2, 200000, 10 + trial);
        CHECK(b.bound >= est.mean - 3.0 * est.standardError);
        // any conditional gives a valid bound, so the optimum beats the posterior start
        std::vector<double> posterior(4);
        for (std::size_t y = 0; y < 2; ++y) {
            double z = hmm.stationary[0] * hmm.w(0, y) + hmm.stationary[1] * hmm.w(1, y);
            for (std::size_t x = 0; x < 2; ++x) {
                posterior[y * 2 + x] = hmm.stationary[x] * hmm.w(x, y) / z;
            }
        }
        CHECK(b.bound <= -expected_delta(hmm, posterior) + 1e-12);
    }
    HmmSpec broken = bsc;
    broken.stationary = {0.9, 0.1};
    CHECK_THROWS_AS(broken.validate(), DomainError);
}
