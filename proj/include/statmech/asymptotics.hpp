#pragma once

// Binary-entropy utilities, the Gilbert-Varshamov root, Laplace and
// saddle-point estimates of exponential integrals, and a sampled
// Legendre-transform engine. All quantities are in nats with k = 1.

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace statmech::asymptotics {

//! h2(x) = -x ln x - (1-x) ln(1-x), with 0 ln 0 = 0. Throws DomainError outside [0, 1].
double binary_entropy(double x);

//! Binary divergence D(a||b) in nats.
double binary_divergence(double a, double b);

//! The root delta in [0, 1/2] of h2(delta) = ln 2 - rate (Gilbert-Varshamov distance).
double gv_distance(double rate);

//! ln C(N, n) via log-gamma.
double log_binomial(double N, double n);

struct Interval
{
    double lower;
    double upper;
};

//! Integrand of the form g(x) exp(n h(x)). Derivatives of h are optional;
//! when absent they are taken by central differences with step 1e-5.
struct ExponentialIntegrand
{
    std::function<double(double)> h;
    std::function<double(double)> g = [](double) { return 1.0; };
    std::function<double(double)> dh;
    std::function<double(double)> d2h;
};

//! Leading-order asymptotics of an exponential integral.
struct LaplaceEstimate
{
    //! h(x0), nats per unit of n.
    double exponentRate = 0.0;
    //! Sub-exponential factor multiplying exp(n h(x0)).
    double prefactor = 0.0;
    //! Location x0 of the dominant point.
    double maximizer = 0.0;
    //! Set when the maximum sits on a domain edge with non-zero slope.
    bool boundaryCase = false;
    //! n h(x0) + ln(prefactor).
    double logIntegral = 0.0;
};

//! Laplace estimate of the real integral of g(x) exp(n h(x)) over \p domain.
//! Interior maxima use the Gaussian factor g(x0) sqrt(2 pi / (n |h''(x0)|));
//! a maximum on an edge with h'(edge) != 0 uses g(x0) / (n |h'(x0)|).
//! Infinite bounds are allowed. \p guess seeds the search on unbounded domains.
LaplaceEstimate laplace_integral(const ExponentialIntegrand& integrand,
                                 Interval domain,
                                 double n,
                                 std::optional<double> guess = std::nullopt);

//! Saddle-point estimate of (1 / 2 pi j) times the integral of g(z) exp(n h(z))
//! along the vertical line through the real saddle z0, where h restricted to
//! the real axis has a minimum at z0. Returns exp(n h(z0)) g(z0) / sqrt(2 pi n h''(z0)).
LaplaceEstimate saddle_point_integral(const ExponentialIntegrand& integrand,
                                      Interval searchDomain,
                                      double n,
                                      std::optional<double> guess = std::nullopt);

struct TypeClassSize
{
    //! Saddle-point estimate including the second-order factor; empty for n in {0, N}.
    std::optional<double> estimate;
    //! ln C(N, n).
    double exact = 0.0;
};

//! Log-size of the set of binary N-vectors with exactly n ones.
TypeClassSize type_class_size_estimate(long N, long n);

enum class DomainKind
{
    ClosedInterval,
    HalfLine,
    FullLine
};

//! A tabulated function. An empty optional marks an unattainable sample
//! (an entropy of -infinity outside the support).
struct SampledFunction
{
    std::vector<double> grid;
    std::vector<std::optional<double>> values;
    DomainKind domain = DomainKind::ClosedInterval;

    //! Throws ShapeError unless the grid is strictly increasing, the sizes
    //! agree, there are at least three samples and every value is finite.
    void validate() const;

    static SampledFunction tabulate(std::vector<double> grid,
                                    const std::function<std::optional<double>(double)>& f,
                                    DomainKind domain = DomainKind::ClosedInterval);
};

enum class LegendreDirection
{
    //! out(y) = max_x [f(x) - x y] for concave f (entropy to log-partition rate).
    EntropyToFreeEnergy,
    //! out(y) = min_x [f(x) + x y] for convex f (log-partition rate to entropy).
    FreeEnergyToEntropy,
    //! out(y) = sup_x [x y - f(x)] for convex f.
    ConvexConjugate
};

struct LegendrePair
{
    SampledFunction source;
    SampledFunction transform;
    //! The abscissa achieving the extremum for each output sample.
    std::vector<double> achievers;
    LegendreDirection direction = LegendreDirection::EntropyToFreeEnergy;
};

//! Numerical Legendre transform onto \p outputGrid. Each output is the grid
//! extremum refined by a three-point parabola; unattainable input samples
//! never win. Throws ShapeError if the required concavity or convexity fails
//! by more than \p shapeTolerance on discrete second differences.
LegendrePair legendre_transform(const SampledFunction& f,
                                LegendreDirection direction,
                                std::span<const double> outputGrid,
                                double shapeTolerance = 1e-8);

} // namespace statmech::asymptotics
