#include "statmech/estimation.hpp"

#include "statmech/dynamics.hpp"
#include "statmech/error.hpp"
#include "statmech/numerics.hpp"
#include "statmech/random.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace statmech::estimation {

using numerics::kInf;

namespace {

constexpr double kNegligible = 1e-12;

template<typename F>
double integrate_panels(F&& f, const std::vector<double>& breakpoints)
{
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        total += boost::math::quadrature::gauss<double, 20>::integrate(f, breakpoints[i], breakpoints[i + 1]);
    }
    return total;
}

// Value at delta = 0 of the polynomial through (x_i, y_i), by Neville's scheme.
double extrapolate_to_zero(std::vector<double> x, std::vector<double> y)
{
    const std::size_t n = x.size();
    for (std::size_t level = 1; level < n; ++level) {
        for (std::size_t i = 0; i + level < n; ++i) {
            y[i] = (x[i + level] * y[i] - x[i] * y[i + 1]) / (x[i + level] - x[i]);
        }
    }
    return y[0];
}

void check_rows(const std::vector<double>& matrix, std::size_t rows, std::size_t cols, const char* what)
{
    if (matrix.size() != rows * cols) {
        throw ShapeError(std::string(what) + ": expected " + std::to_string(rows) + " x " + std::to_string(cols) +
                         " entries");
    }
    for (std::size_t r = 0; r < rows; ++r) {
        double total = 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
            double v = matrix[r * cols + c];
            if (!(v >= 0.0) || !std::isfinite(v)) {
                throw NormalizationError(std::string(what) + ": entries must be probabilities");
            }
            total += v;
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw NormalizationError(std::string(what) + ": row " + std::to_string(r) + " sums to " +
                                     std::to_string(total));
        }
    }
}

} // namespace

double GriddedDensity::mass() const
{
    if (values.size() < 2) {
        return 0.0;
    }
    double total = 0.0;
    for (double v : values) {
        total += v;
    }
    total -= 0.5 * (values.front() + values.back());
    return total * step;
}

void GriddedDensity::validate() const
{
    if (values.size() < 3) {
        throw SizeError("GriddedDensity: at least three grid points are required");
    }
    if (!(step > 0.0) || !std::isfinite(start)) {
        throw DomainError("GriddedDensity: the grid must be increasing and finite");
    }
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw DomainError("GriddedDensity: density values must be finite and non-negative");
        }
    }
    if (values.front() >= kNegligible || values.back() >= kNegligible) {
        throw DomainError("GriddedDensity: the support must lie strictly inside the grid");
    }
    double m = mass();
    if (std::abs(m - 1.0) > 1e-8) {
        throw NormalizationError("GriddedDensity: trapezoid mass is " + std::to_string(m));
    }
}

GriddedDensity GriddedDensity::tabulate(const std::function<double(double)>& f, double lo, double hi,
                                        std::size_t points)
{
    if (points < 3 || !(hi > lo)) {
        throw DomainError("GriddedDensity::tabulate: need lo < hi and at least three points");
    }
    GriddedDensity d;
    d.start = lo;
    d.step = (hi - lo) / static_cast<double>(points - 1);
    d.values.resize(points);
    for (std::size_t i = 0; i < points; ++i) {
        d.values[i] = f(d.x(i));
    }
    double m = d.mass();
    if (!(m > 0.0)) {
        throw NormalizationError("GriddedDensity::tabulate: the function has no mass on the grid");
    }
    for (auto& v : d.values) {
        v /= m;
    }
    return d;
}

GriddedDensity GriddedDensity::from_samples(const std::vector<double>& grid, const std::vector<double>& values)
{
    if (grid.size() != values.size() || grid.size() < 3) {
        throw ShapeError("GriddedDensity: grid and values must match and hold at least three points");
    }
    GriddedDensity d;
    d.start = grid.front();
    d.step = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::abs(grid[i] - d.x(i)) > 1e-9 * std::max(1.0, std::abs(d.step) * static_cast<double>(grid.size()))) {
            throw DomainError("GriddedDensity: abscissae are not uniformly spaced");
        }
    }
    d.values = values;
    return d;
}

GriddedDensity gaussian_density(double mean, double variance, std::size_t points, double widthSigmas)
{
    if (!(variance > 0.0)) {
        throw DomainError("gaussian_density: variance must be positive");
    }
    double sigma = std::sqrt(variance);
    return GriddedDensity::tabulate(
        [&](double x) { return std::exp(-0.5 * (x - mean) * (x - mean) / variance); }, mean - widthSigmas * sigma,
        mean + widthSigmas * sigma, points);
}

GriddedDensity laplace_density(double scale, std::size_t points, double halfWidth)
{
    if (!(scale > 0.0)) {
        throw DomainError("laplace_density: scale must be positive");
    }
    return GriddedDensity::tabulate([&](double x) { return std::exp(-std::abs(x) / scale); }, -halfWidth, halfWidth,
                                    points);
}

double fisher_information(const GriddedDensity& density)
{
    density.validate();
    const auto& v = density.values;
    double total = 0.0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (v[i] < kNegligible) {
            continue;
        }
        double slope = (v[i + 1] - v[i - 1]) / (2.0 * density.step);
        total += slope * slope / v[i];
    }
    return total * density.step;
}

double differential_entropy(const GriddedDensity& density)
{
    const auto& v = density.values;
    double total = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        double weight = (i == 0 || i + 1 == v.size()) ? 0.5 : 1.0;
        total -= weight * numerics::xlogx(v[i]);
    }
    return total * density.step;
}

void Perturbation::validate() const
{
    if (!density || breakpoints.size() < 2) {
        throw DomainError("Perturbation: density and support breakpoints are required");
    }
    double mass = integrate_panels([&](double z) { return density(z); }, breakpoints);
    double mean = integrate_panels([&](double z) { return z * density(z); }, breakpoints);
    double second = integrate_panels([&](double z) { return z * z * density(z); }, breakpoints);
    if (std::abs(mass - 1.0) > 1e-6 || std::abs(mean) > 1e-6 || std::abs(second - 1.0) > 1e-6) {
        throw DomainError("Perturbation: the law must have unit mass, zero mean and unit variance (mass " +
                          std::to_string(mass) + ", mean " + std::to_string(mean) + ", variance " +
                          std::to_string(second) + ")");
    }
}

Perturbation Perturbation::gaussian()
{
    return {[](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * numerics::kPi); },
            numerics::linspace(-9.0, 9.0, 13)};
}

Perturbation Perturbation::uniform()
{
    const double a = std::sqrt(3.0);
    return {[a](double z) { return std::abs(z) <= a ? 0.5 / a : 0.0; }, numerics::linspace(-a, a, 9)};
}

Perturbation Perturbation::triangular()
{
    const double a = std::sqrt(6.0);
    return {[a](double z) { return std::abs(z) <= a ? (a - std::abs(z)) / (a * a) : 0.0; },
            numerics::linspace(-a, a, 9)};
}

DeBruijnResult de_bruijn_check(const GriddedDensity& density, const Perturbation& perturbation,
                               const std::vector<double>& deltas)
{
    density.validate();
    perturbation.validate();
    DeBruijnResult out;
    out.halfFisher = 0.5 * fisher_information(density);
    out.baseEntropy = differential_entropy(density);
    out.deltas = deltas;

    const auto& v = density.values;
    boost::math::interpolators::cardinal_cubic_b_spline<double> spline(v.data(), v.size(), density.start,
                                                                        density.step);
    const double lo = density.start;
    const double hi = density.last();
    auto q = [&](double u) { return (u < lo || u > hi) ? 0.0 : std::max(0.0, spline(u)); };
    double reach = std::max(std::abs(perturbation.breakpoints.front()), std::abs(perturbation.breakpoints.back()));

    std::vector<double> xs;
    std::vector<double> quotients;
    for (double delta : deltas) {
        if (!(delta >= 0.0)) {
            throw DomainError("de_bruijn_check: deltas must be non-negative");
        }
        if (delta == 0.0) {
            out.entropies.push_back(out.baseEntropy);
            continue;
        }
        const double scale = std::sqrt(delta);
        if (scale * reach > 0.25 * (hi - lo)) {
            throw SizeError("de_bruijn_check: the scaled perturbation overflows the convolution grid");
        }
        GriddedDensity smoothed{density.start, density.step, std::vector<double>(v.size())};
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double x = density.x(i);
            smoothed.values[i] =
                integrate_panels([&](double z) { return q(x - scale * z) * perturbation.density(z); },
                                 perturbation.breakpoints);
        }
        if (smoothed.values.front() >= kNegligible || smoothed.values.back() >= kNegligible ||
            std::abs(smoothed.mass() - 1.0) > 1e-8) {
            throw SizeError("de_bruijn_check: smoothed density reaches the edge of the convolution grid");
        }
        double h = differential_entropy(smoothed);
        out.entropies.push_back(h);
        xs.push_back(delta);
        quotients.push_back((h - out.baseEntropy) / delta);
    }
    if (xs.empty()) {
        throw DomainError("de_bruijn_check: at least one positive delta is required");
    }
    out.slope = extrapolate_to_zero(xs, quotients);
    return out;
}

DeBruijnResult de_bruijn_check_product(const std::vector<GriddedDensity>& factors, const Perturbation& perturbation,
                                       const std::vector<double>& deltas)
{
    if (factors.empty()) {
        throw ShapeError("de_bruijn_check_product: no factors");
    }
    DeBruijnResult total;
    total.deltas = deltas;
    total.entropies.assign(deltas.size(), 0.0);
    for (const auto& factor : factors) {
        auto part = de_bruijn_check(factor, perturbation, deltas);
        total.slope += part.slope;
        total.halfFisher += part.halfFisher;
        total.baseEntropy += part.baseEntropy;
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            total.entropies[i] += part.entropies[i];
        }
    }
    return total;
}

double generalized_temperature(const GriddedDensity& density, double alpha)
{
    if (!(alpha > 0.0)) {
        throw DomainError("generalized_temperature: alpha must be positive");
    }
    return alpha / fisher_information(density);
}

void HmmSpec::validate() const
{
    if (states == 0 || symbols == 0) {
        throw ShapeError("HmmSpec: empty state or symbol alphabet");
    }
    check_rows(transition, states, states, "HmmSpec transition");
    check_rows(emission, states, symbols, "HmmSpec emission");
    if (stationary.size() != states) {
        throw ShapeError("HmmSpec: stationary law has the wrong size");
    }
    double total = 0.0;
    for (double p : stationary) {
        if (!(p >= 0.0)) {
            throw NormalizationError("HmmSpec: stationary law must be non-negative");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-10) {
        throw NormalizationError("HmmSpec: stationary law sums to " + std::to_string(total));
    }
    for (std::size_t to = 0; to < states; ++to) {
        double flow = 0.0;
        for (std::size_t from = 0; from < states; ++from) {
            flow += stationary[from] * q(from, to);
        }
        if (std::abs(flow - stationary[to]) > 1e-10) {
            throw DomainError("HmmSpec: stationary law is not invariant under the transition matrix");
        }
    }
}

HmmSpec HmmSpec::make(std::size_t states, std::size_t symbols, std::vector<double> transition,
                      std::vector<double> emission)
{
    HmmSpec hmm;
    hmm.states = states;
    hmm.symbols = symbols;
    hmm.transition = std::move(transition);
    hmm.emission = std::move(emission);
    check_rows(hmm.transition, states, states, "HmmSpec transition");
    Eigen::MatrixXd matrix(static_cast<Eigen::Index>(states), static_cast<Eigen::Index>(states));
    for (std::size_t r = 0; r < states; ++r) {
        for (std::size_t s = 0; s < states; ++s) {
            matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) = hmm.q(r, s);
        }
    }
    hmm.stationary =
        dynamics::stationary_distribution(dynamics::ChainSpec::from_matrix(dynamics::ChainMode::Discrete, matrix));
    hmm.validate();
    return hmm;
}

HmmSpec HmmSpec::binary_symmetric(double flip, double noise)
{
    return make(2, 2, {1.0 - flip, flip, flip, 1.0 - flip}, {1.0 - noise, noise, noise, 1.0 - noise});
}

std::vector<double> pair_law(const HmmSpec& hmm)
{
    const std::size_t nx = hmm.states;
    const std::size_t ny = hmm.symbols;
    std::vector<double> law(ny * ny, 0.0);
    for (std::size_t x0 = 0; x0 < nx; ++x0) {
        for (std::size_t x1 = 0; x1 < nx; ++x1) {
            double pxx = hmm.stationary[x0] * hmm.q(x0, x1);
            if (pxx == 0.0) {
                continue;
            }
            for (std::size_t y0 = 0; y0 < ny; ++y0) {
                for (std::size_t y1 = 0; y1 < ny; ++y1) {
                    law[y0 * ny + y1] += pxx * hmm.w(x0, y0) * hmm.w(x1, y1);
                }
            }
        }
    }
    return law;
}

namespace {

// Expected Delta split into pieces that coordinate updates can reuse.
class DeltaObjective
{
public:
    explicit DeltaObjective(const HmmSpec& hmm) : m_Hmm(hmm), m_Pair(pair_law(hmm)), m_Marginal(hmm.symbols, 0.0)
    {
        const std::size_t ny = hmm.symbols;
        for (std::size_t y0 = 0; y0 < ny; ++y0) {
            for (std::size_t y1 = 0; y1 < ny; ++y1) {
                m_Marginal[y1] += m_Pair[y0 * ny + y1];
            }
        }
    }

    [[nodiscard]] std::size_t nx() const { return m_Hmm.states; }
    [[nodiscard]] std::size_t ny() const { return m_Hmm.symbols; }
    [[nodiscard]] const std::vector<double>& marginal() const { return m_Marginal; }

    // ln Q(x1|x0) + ln W(y1|x1)
    [[nodiscard]] double link(std::size_t x0, std::size_t x1, std::size_t y1) const
    {
        double qv = m_Hmm.q(x0, x1);
        double wv = m_Hmm.w(x1, y1);
        return (qv > 0.0 && wv > 0.0) ? std::log(qv) + std::log(wv) : -kInf;
    }

    [[nodiscard]] double value(const std::vector<double>& c) const
    {
        const std::size_t X = nx();
        const std::size_t Y = ny();
        double total = 0.0;
        for (std::size_t y0 = 0; y0 < Y; ++y0) {
            for (std::size_t y1 = 0; y1 < Y; ++y1) {
                double weight = m_Pair[y0 * Y + y1];
                if (weight == 0.0) {
                    continue;
                }
                for (std::size_t x0 = 0; x0 < X; ++x0) {
                    double a = c[y0 * X + x0];
                    if (a == 0.0) {
                        continue;
                    }
                    for (std::size_t x1 = 0; x1 < X; ++x1) {
                        double b = c[y1 * X + x1];
                        if (b == 0.0) {
                            continue;
                        }
                        total += weight * a * b * (link(x0, x1, y1) - std::log(b));
                    }
                }
            }
        }
        return std::isnan(total) ? -kInf : total;
    }

    // Gradient of the bilinear part with respect to c(. | y).
    [[nodiscard]] std::vector<double> gradient(const std::vector<double>& c, std::size_t y) const
    {
        const std::size_t X = nx();
        const std::size_t Y = ny();
        std::vector<double> g(X, 0.0);
        for (std::size_t x = 0; x < X; ++x) {
            for (std::size_t other = 0; other < Y; ++other) {
                double forward = m_Pair[y * Y + other];
                double backward = m_Pair[other * Y + y];
                for (std::size_t z = 0; z < X; ++z) {
                    double cz = c[other * X + z];
                    if (cz == 0.0) {
                        continue;
                    }
                    if (forward > 0.0) {
                        g[x] += forward * cz * link(x, z, other);
                    }
                    if (backward > 0.0) {
                        g[x] += backward * cz * link(z, x, y);
                    }
                }
            }
        }
        return g;
    }

private:
    const HmmSpec& m_Hmm;
    std::vector<double> m_Pair;
    std::vector<double> m_Marginal;
};

struct AscentResult
{
    std::vector<double> conditional;
    double value = -kInf;
    bool converged = false;
    std::size_t iterations = 0;
};

AscentResult coordinate_ascent(const DeltaObjective& objective, std::vector<double> c,
                               const HmmBoundSettings& settings)
{
    const std::size_t X = objective.nx();
    const std::size_t Y = objective.ny();
    AscentResult out;
    double current = objective.value(c);
    for (std::size_t sweep = 1; sweep <= settings.maxIterations; ++sweep) {
        const double before = current;
        for (std::size_t y = 0; y < Y; ++y) {
            double weight = objective.marginal()[y];
            if (weight == 0.0) {
                continue;
            }
            auto g = objective.gradient(c, y);
            // maximizer of <g, c_y> + weight H(c_y) over the simplex
            std::vector<double> logits(X);
            for (std::size_t x = 0; x < X; ++x) {
                logits[x] = g[x] / weight;
            }
            double lse = numerics::log_sum_exp(logits);
            std::vector<double> target(X);
            for (std::size_t x = 0; x < X; ++x) {
                target[x] = std::exp(logits[x] - lse);
            }
            std::vector<double> trial = c;
            for (double t = 1.0; t > 1e-9; t *= 0.5) {
                for (std::size_t x = 0; x < X; ++x) {
                    trial[y * X + x] = (1.0 - t) * c[y * X + x] + t * target[x];
                }
                double value = objective.value(trial);
                if (value > current || (std::isinf(current) && t == 1.0)) {
                    c = trial;
                    current = value;
                    break;
                }
            }
        }
        out.iterations = sweep;
        if (std::isfinite(before) && std::abs(current - before) <= settings.tolerance * std::max(1.0, std::abs(current))) {
            out.converged = true;
            break;
        }
    }
    out.conditional = std::move(c);
    out.value = current;
    return out;
}

} // namespace

double expected_delta(const HmmSpec& hmm, const std::vector<double>& conditional)
{
    hmm.validate();
    if (conditional.size() != hmm.states * hmm.symbols) {
        throw ShapeError("expected_delta: conditional must be |Y| x |X|");
    }
    return DeltaObjective(hmm).value(conditional);
}

HmmBound hmm_entropy_upper_bound(const HmmSpec& hmm, const HmmBoundSettings& settings)
{
    hmm.validate();
    const std::size_t X = hmm.states;
    const std::size_t Y = hmm.symbols;
    DeltaObjective objective(hmm);

    std::vector<std::vector<double>> starts;
    std::vector<double> posterior(Y * X, 0.0);
    for (std::size_t y = 0; y < Y; ++y) {
        double total = 0.0;
        for (std::size_t x = 0; x < X; ++x) {
            total += hmm.stationary[x] * hmm.w(x, y);
        }
        for (std::size_t x = 0; x < X; ++x) {
            posterior[y * X + x] = total > 0.0 ? hmm.stationary[x] * hmm.w(x, y) / total : 1.0 / static_cast<double>(X);
        }
    }
    starts.push_back(posterior);
    Rng rng(settings.seed);
    for (std::size_t k = 0; k < settings.randomStarts; ++k) {
        std::vector<double> c(Y * X);
        for (std::size_t y = 0; y < Y; ++y) {
            double total = 0.0;
            for (std::size_t x = 0; x < X; ++x) {
                c[y * X + x] = -std::log(1.0 - rng.uniform());
                total += c[y * X + x];
            }
            for (std::size_t x = 0; x < X; ++x) {
                c[y * X + x] /= total;
            }
        }
        starts.push_back(std::move(c));
    }

    AscentResult best;
    for (auto& start : starts) {
        auto result = coordinate_ascent(objective, std::move(start), settings);
        if (result.value > best.value || best.conditional.empty()) {
            best = std::move(result);
        }
    }
    HmmBound out;
    out.bound = -best.value;
    out.converged = best.converged;
    out.iterations = best.iterations;
    out.joint.assign(X * Y, 0.0);
    for (std::size_t x = 0; x < X; ++x) {
        for (std::size_t y = 0; y < Y; ++y) {
            out.joint[x * Y + y] = best.conditional[y * X + x] * objective.marginal()[y];
        }
    }
    return out;
}

double markov_entropy_rate(const HmmSpec& hmm)
{
    hmm.validate();
    double rate = 0.0;
    for (std::size_t x = 0; x < hmm.states; ++x) {
        for (std::size_t z = 0; z < hmm.states; ++z) {
            rate -= hmm.stationary[x] * numerics::xlogx(hmm.q(x, z));
        }
    }
    return rate;
}

} // namespace statmech::estimation
