#pragma once

// Fisher information of densities sampled on a uniform grid, the small-noise
// entropy derivative, a Fisher-information temperature, and an upper bound on
// the entropy rate of a hidden Markov process.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace statmech::estimation {

//! Density values on start, start + step, ..., start + (n-1) step.
struct GriddedDensity
{
    double start = 0.0;
    double step = 1.0;
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const { return values.size(); }
    [[nodiscard]] double x(std::size_t i) const { return start + step * static_cast<double>(i); }
    [[nodiscard]] double last() const { return x(values.size() - 1); }
    //! Trapezoid integral of the values.
    [[nodiscard]] double mass() const;
    //! Throws NormalizationError when the mass is off by more than 1e-8 and DomainError for
    //! negative values or non-negligible boundary values.
    void validate() const;

    //! Samples f on [lo, hi] and rescales to unit trapezoid mass.
    static GriddedDensity tabulate(const std::function<double(double)>& f, double lo, double hi, std::size_t points);
    //! Accepts explicit abscissae, which must be uniformly spaced.
    static GriddedDensity from_samples(const std::vector<double>& grid, const std::vector<double>& values);
};

GriddedDensity gaussian_density(double mean, double variance, std::size_t points = 4001, double widthSigmas = 10.0);
GriddedDensity laplace_density(double scale, std::size_t points = 30001, double halfWidth = 30.0);

//! J = integral Q'^2 / Q with central differences; points with Q < 1e-12 are skipped.
double fisher_information(const GriddedDensity& density);

//! Differential entropy -integral q ln q by the trapezoid rule.
double differential_entropy(const GriddedDensity& density);

//! A zero-mean, unit-variance perturbation law with compact or effectively compact support.
struct Perturbation
{
    std::function<double(double)> density;
    //! Integration breakpoints covering the support, increasing.
    std::vector<double> breakpoints;

    //! Throws DomainError unless the law integrates to 1, is centred and has unit variance (1e-6).
    void validate() const;

    static Perturbation gaussian();
    static Perturbation uniform();
    static Perturbation triangular();
};

struct DeBruijnResult
{
    //! Extrapolated d h(X + sqrt(delta) Z) / d delta at 0.
    double slope = 0.0;
    //! J(Q) / 2.
    double halfFisher = 0.0;
    double baseEntropy = 0.0;
    std::vector<double> deltas;
    std::vector<double> entropies;
};

//! Entropies of X + sqrt(delta) Z for each delta (0 allowed, giving h(X)), with the
//! difference quotients extrapolated to delta = 0 by polynomial (Richardson) elimination.
DeBruijnResult de_bruijn_check(const GriddedDensity& density, const Perturbation& perturbation,
                               const std::vector<double>& deltas = {1e-2, 5e-3, 2.5e-3});

//! Coordinate-wise sum for a product density: slopes and J/2 add over coordinates.
DeBruijnResult de_bruijn_check_product(const std::vector<GriddedDensity>& factors, const Perturbation& perturbation,
                                       const std::vector<double>& deltas = {1e-2, 5e-3, 2.5e-3});

//! alpha / J(Q) with k = 1, for the quadratic energy alpha x^2 / 2.
double generalized_temperature(const GriddedDensity& density, double alpha);

//! Hidden Markov source: state chain Q(x'|x), emissions W(y|x), stationary law pi.
struct HmmSpec
{
    //! Row-major |X| x |X|, row x holds Q(. | x).
    std::vector<double> transition;
    //! Row-major |X| x |Y|, row x holds W(. | x).
    std::vector<double> emission;
    std::vector<double> stationary;
    std::size_t states = 0;
    std::size_t symbols = 0;

    [[nodiscard]] double q(std::size_t from, std::size_t to) const { return transition[from * states + to]; }
    [[nodiscard]] double w(std::size_t x, std::size_t y) const { return emission[x * symbols + y]; }
    void validate() const;

    //! Fills in the stationary law of the state chain.
    static HmmSpec make(std::size_t states, std::size_t symbols, std::vector<double> transition,
                        std::vector<double> emission);
    //! Binary states and symbols: the state flips with probability flip, the channel with noise.
    static HmmSpec binary_symmetric(double flip, double noise);
};

//! P(y0, y1) of two consecutive outputs, row-major |Y| x |Y|.
std::vector<double> pair_law(const HmmSpec& hmm);

//! E Delta(Y0, Y1; P0) for the conditional c(x|y) = P0(x|y), row-major |Y| x |X|.
double expected_delta(const HmmSpec& hmm, const std::vector<double>& conditional);

struct HmmBoundSettings
{
    std::size_t randomStarts = 5;
    std::size_t maxIterations = 3000;
    double tolerance = 1e-13;
    std::uint64_t seed = 1729;
};

struct HmmBound
{
    //! Upper bound on the entropy rate, nats per symbol.
    double bound = 0.0;
    //! Optimizing joint law P0(x, y), row-major |X| x |Y|.
    std::vector<double> joint;
    //! False when the best start stopped at the iteration cap.
    bool converged = true;
    std::size_t iterations = 0;
};

//! -max over P0 of E Delta(Y0, Y1; P0), by multi-start coordinate ascent.
HmmBound hmm_entropy_upper_bound(const HmmSpec& hmm, const HmmBoundSettings& settings = {});

//! Entropy rate of the state chain itself: -sum pi(x) Q(x'|x) ln Q(x'|x).
double markov_entropy_rate(const HmmSpec& hmm);

} // namespace statmech::estimation
