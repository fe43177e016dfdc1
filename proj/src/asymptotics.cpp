#include "statmech/asymptotics.hpp"

#include "statmech/error.hpp"
#include "statmech/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace statmech::asymptotics {

using numerics::kInf;
using numerics::kLn2;
using numerics::kPi;

double binary_entropy(double x)
{
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError("binary_entropy: argument " + std::to_string(x) + " outside [0, 1]");
    }
    return -numerics::xlogx(x) - numerics::xlogx(1.0 - x);
}

double binary_divergence(double a, double b)
{
    if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0)) {
        throw DomainError("binary_divergence: arguments outside [0, 1]");
    }
    auto term = [](double p, double q) {
        if (p == 0.0) {
            return 0.0;
        }
        if (q == 0.0) {
            return kInf;
        }
        return p * std::log(p / q);
    };
    return term(a, b) + term(1.0 - a, 1.0 - b);
}

double gv_distance(double rate)
{
    if (!(rate >= 0.0 && rate <= kLn2 + 1e-15)) {
        throw DomainError("gv_distance: rate " + std::to_string(rate) + " outside [0, ln 2]");
    }
    if (rate >= kLn2) {
        return 0.0;
    }
    if (rate == 0.0) {
        return 0.5;
    }
    double target = kLn2 - rate;
    return numerics::bisect([&](double d) { return binary_entropy(d) - target; }, 0.0, 0.5, 1e-16);
}

double log_binomial(double N, double n)
{
    if (n < 0.0 || n > N) {
        throw DomainError("log_binomial: weight outside [0, N]");
    }
    return std::lgamma(N + 1.0) - std::lgamma(n + 1.0) - std::lgamma(N - n + 1.0);
}

namespace {

constexpr double kDiffStep = 1e-5;
constexpr int kScanPoints = 1001;

double first_derivative(const ExponentialIntegrand& f, double x, Interval domain)
{
    if (f.dh) {
        return f.dh(x);
    }
    double lo = std::max(domain.lower, x - kDiffStep);
    double hi = std::min(domain.upper, x + kDiffStep);
    return (f.h(hi) - f.h(lo)) / (hi - lo);
}

double second_derivative(const ExponentialIntegrand& f, double x, Interval domain)
{
    if (f.d2h) {
        return f.d2h(x);
    }
    double center = std::clamp(x, domain.lower + kDiffStep, domain.upper - kDiffStep);
    return (f.h(center + kDiffStep) - 2.0 * f.h(center) + f.h(center - kDiffStep)) /
           (kDiffStep * kDiffStep);
}

double finite_or(double v, double fallback)
{
    return std::isfinite(v) ? v : fallback;
}

// Finds the global maximum of h on the domain: expand a window until h has
// turned down on both unbounded sides, scan it, then refine by golden section.
numerics::Extremum locate_maximum(const std::function<double(double)>& h, Interval domain,
                                  std::optional<double> guess)
{
    if (!(domain.lower < domain.upper)) {
        throw DomainError("laplace: empty integration domain");
    }
    bool lowerOpen = !std::isfinite(domain.lower);
    bool upperOpen = !std::isfinite(domain.upper);
    double start = 0.0;
    if (guess) {
        start = *guess;
    } else if (!lowerOpen && !upperOpen) {
        start = 0.5 * (domain.lower + domain.upper);
    } else if (!lowerOpen) {
        start = domain.lower + 1.0;
    } else if (!upperOpen) {
        start = domain.upper - 1.0;
    }
    auto safe = [&](double x) { return finite_or(h(x), -kInf); };

    double lo = lowerOpen ? start - 1.0 : domain.lower;
    double hi = upperOpen ? start + 1.0 : domain.upper;
    if (!lowerOpen && !upperOpen) {
        // nothing to expand
    } else {
        bool settled = false;
        for (int k = 0; k < 200 && !settled; ++k) {
            auto grid = numerics::linspace(lo, hi, 65);
            std::size_t best = 0;
            double bestValue = -kInf;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                double v = safe(grid[i]);
                if (v > bestValue) {
                    bestValue = v;
                    best = i;
                }
            }
            settled = true;
            double width = hi - lo;
            if (lowerOpen && best == 0) {
                lo -= width;
                settled = false;
            }
            if (upperOpen && best + 1 == grid.size()) {
                hi += width;
                settled = false;
            }
            if (!std::isfinite(lo) || !std::isfinite(hi)) {
                break;
            }
        }
        if (!settled) {
            throw ConvergenceError("laplace: maximum not bracketed on an unbounded domain");
        }
    }

    auto grid = numerics::linspace(lo, hi, kScanPoints);
    std::size_t best = 0;
    double bestValue = -kInf;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double v = safe(grid[i]);
        if (v > bestValue) {
            bestValue = v;
            best = i;
        }
    }
    if (bestValue == -kInf) {
        throw ConvergenceError("laplace: integrand exponent is not finite anywhere on the scan");
    }
    double a = grid[best == 0 ? 0 : best - 1];
    double b = grid[std::min(best + 1, grid.size() - 1)];
    auto refined = numerics::golden_section_max(safe, a, b, 1e-12 * std::max(1.0, std::abs(grid[best])));
    if (refined.value < bestValue) {
        return {grid[best], bestValue};
    }
    return refined;
}

LaplaceEstimate finish(double rate, double prefactor, double x0, bool boundary, double n)
{
    LaplaceEstimate out;
    out.exponentRate = rate;
    out.prefactor = prefactor;
    out.maximizer = x0;
    out.boundaryCase = boundary;
    out.logIntegral = n * rate + std::log(prefactor);
    return out;
}

} // namespace

LaplaceEstimate laplace_integral(const ExponentialIntegrand& integrand, Interval domain, double n,
                                 std::optional<double> guess)
{
    if (!(n >= 1.0)) {
        throw DomainError("laplace_integral: n must be at least 1");
    }
    auto peak = locate_maximum(integrand.h, domain, guess);
    double x0 = peak.x;
    double edgeTolerance = 1e-9 * std::max(1.0, std::abs(x0));
    bool atEdge = std::abs(x0 - domain.lower) <= edgeTolerance || std::abs(x0 - domain.upper) <= edgeTolerance;
    if (atEdge) {
        double slope = first_derivative(integrand, x0, domain);
        if (std::abs(slope) > 1e-6) {
            return finish(peak.value, integrand.g(x0) / (n * std::abs(slope)), x0, true, n);
        }
    }
    double curvature = second_derivative(integrand, x0, domain);
    if (!(curvature < 0.0)) {
        throw ConvergenceError("laplace_integral: second derivative at the maximizer is not negative");
    }
    double prefactor = integrand.g(x0) * std::sqrt(2.0 * kPi / (n * -curvature));
    if (atEdge) {
        prefactor *= 0.5;
    }
    return finish(peak.value, prefactor, x0, false, n);
}

LaplaceEstimate saddle_point_integral(const ExponentialIntegrand& integrand, Interval searchDomain,
                                      double n, std::optional<double> guess)
{
    if (!(n >= 1.0)) {
        throw DomainError("saddle_point_integral: n must be at least 1");
    }
    auto negated = [&](double z) { return -integrand.h(z); };
    auto peak = locate_maximum(negated, searchDomain, guess);
    double z0 = peak.x;
    double edgeTolerance = 1e-9 * std::max(1.0, std::abs(z0));
    if (std::abs(z0 - searchDomain.lower) <= edgeTolerance ||
        std::abs(z0 - searchDomain.upper) <= edgeTolerance) {
        throw ConvergenceError("saddle_point_integral: no interior real saddle point");
    }
    double curvature = second_derivative(integrand, z0, searchDomain);
    if (!(curvature > 0.0)) {
        throw ConvergenceError("saddle_point_integral: h'' at the saddle point is not positive");
    }
    double prefactor = integrand.g(z0) / std::sqrt(2.0 * kPi * n * curvature);
    return finish(-peak.value, prefactor, z0, false, n);
}

TypeClassSize type_class_size_estimate(long N, long n)
{
    if (N < 1 || n < 0 || n > N) {
        throw DomainError("type_class_size_estimate: need N >= 1 and 0 <= n <= N");
    }
    TypeClassSize out;
    out.exact = log_binomial(static_cast<double>(N), static_cast<double>(n));
    if (n == 0 || n == N) {
        return out;
    }
    double alpha = static_cast<double>(n) / static_cast<double>(N);
    // Count = (1/2 pi j) contour integral of exp(N [z alpha + ln(1 + e^{-z})]) dz
    // along a vertical line; the real saddle is z0 = ln((1 - alpha) / alpha).
    ExponentialIntegrand integrand;
    integrand.h = [alpha](double z) { return z * alpha + std::log1p(std::exp(-z)); };
    integrand.dh = [alpha](double z) { return alpha - 1.0 / (1.0 + std::exp(z)); };
    integrand.d2h = [](double z) {
        double e = std::exp(-std::abs(z));
        return e / ((1.0 + e) * (1.0 + e));
    };
    double z0 = std::log((1.0 - alpha) / alpha);
    auto est = saddle_point_integral(integrand, {z0 - 50.0, z0 + 50.0}, static_cast<double>(N), z0);
    out.estimate = est.logIntegral;
    return out;
}

void SampledFunction::validate() const
{
    if (grid.size() != values.size()) {
        throw ShapeError("SampledFunction: grid and values differ in length");
    }
    if (grid.size() < 3) {
        throw ShapeError("SampledFunction: at least three samples are required");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i])) {
            throw ShapeError("SampledFunction: non-finite abscissa");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw ShapeError("SampledFunction: grid is not strictly increasing");
        }
        if (values[i] && !std::isfinite(*values[i])) {
            throw ShapeError("SampledFunction: non-finite value (mark it unattainable instead)");
        }
    }
}

SampledFunction SampledFunction::tabulate(std::vector<double> grid,
                                          const std::function<std::optional<double>(double)>& f,
                                          DomainKind domain)
{
    SampledFunction out;
    out.values.reserve(grid.size());
    for (double x : grid) {
        out.values.push_back(f(x));
    }
    out.grid = std::move(grid);
    out.domain = domain;
    out.validate();
    return out;
}

namespace {

// Every direction reduces to out(y) = sign * max_x [ valueSign f(x) + slopeSign x y ].
struct Kernel
{
    double valueSign;
    double slopeSign;
    double outSign;
};

Kernel kernel_for(LegendreDirection direction)
{
    switch (direction) {
    case LegendreDirection::EntropyToFreeEnergy:
        return {1.0, -1.0, 1.0};
    case LegendreDirection::FreeEnergyToEntropy:
        return {-1.0, -1.0, -1.0};
    case LegendreDirection::ConvexConjugate:
        return {-1.0, 1.0, 1.0};
    }
    return {1.0, -1.0, 1.0};
}

void check_concave(const SampledFunction& f, double sign, double tolerance)
{
    for (std::size_t i = 1; i + 1 < f.grid.size(); ++i) {
        if (!f.values[i - 1] || !f.values[i] || !f.values[i + 1]) {
            continue;
        }
        double x0 = f.grid[i - 1], x1 = f.grid[i], x2 = f.grid[i + 1];
        double y0 = sign * *f.values[i - 1], y1 = sign * *f.values[i], y2 = sign * *f.values[i + 1];
        double leftSlope = (y1 - y0) / (x1 - x0);
        double rightSlope = (y2 - y1) / (x2 - x1);
        double scale = std::max({1.0, std::abs(leftSlope), std::abs(rightSlope)});
        if (rightSlope - leftSlope > tolerance * scale) {
            throw ShapeError("legendre_transform: input is not " +
                             std::string(sign > 0 ? "concave" : "convex") + " near x = " +
                             std::to_string(x1));
        }
    }
}

} // namespace

LegendrePair legendre_transform(const SampledFunction& f, LegendreDirection direction,
                                std::span<const double> outputGrid, double shapeTolerance)
{
    f.validate();
    Kernel k = kernel_for(direction);
    check_concave(f, k.valueSign, shapeTolerance);

    LegendrePair pair;
    pair.source = f;
    pair.direction = direction;
    pair.transform.grid.assign(outputGrid.begin(), outputGrid.end());
    pair.transform.domain = DomainKind::ClosedInterval;
    pair.transform.values.reserve(outputGrid.size());
    pair.achievers.reserve(outputGrid.size());

    const std::size_t m = f.grid.size();
    for (double y : outputGrid) {
        auto objective = [&](std::size_t i) -> std::optional<double> {
            if (!f.values[i]) {
                return std::nullopt;
            }
            return k.valueSign * *f.values[i] + k.slopeSign * f.grid[i] * y;
        };
        std::optional<std::size_t> best;
        double bestValue = -kInf;
        for (std::size_t i = 0; i < m; ++i) {
            auto v = objective(i);
            if (v && *v > bestValue) {
                bestValue = *v;
                best = i;
            }
        }
        if (!best) {
            pair.transform.values.push_back(std::nullopt);
            pair.achievers.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        std::size_t i = *best;
        numerics::Extremum ext{f.grid[i], bestValue};
        if (i > 0 && i + 1 < m) {
            auto left = objective(i - 1);
            auto right = objective(i + 1);
            if (left && right) {
                auto vertex = numerics::parabolic_vertex(f.grid[i - 1], *left, f.grid[i], bestValue,
                                                         f.grid[i + 1], *right);
                if (vertex.value >= bestValue) {
                    ext = vertex;
                }
            }
        }
        pair.transform.values.push_back(k.outSign * ext.value);
        pair.achievers.push_back(ext.x);
    }
    return pair;
}

} // namespace statmech::asymptotics
