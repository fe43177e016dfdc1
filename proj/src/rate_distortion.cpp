#include "statmech/rate_distortion.hpp"

#include "statmech/error.hpp"
#include "statmech/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace statmech::coding {

using numerics::kInf;
using numerics::kLn2;

namespace {

void check_distribution(std::span<const double> p, const char* what)
{
    if (p.empty()) {
        throw ShapeError(std::string(what) + ": empty distribution");
    }
    double total = 0.0;
    for (double x : p) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw NormalizationError(std::string(what) + ": probabilities must be finite and non-negative");
        }
        total += x;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw NormalizationError(std::string(what) + ": probabilities sum to " + std::to_string(total));
    }
}

} // namespace

void RdProblem::validate() const
{
    check_distribution(source, "RdProblem source");
    check_distribution(coding, "RdProblem coding");
    if (distortion.size() != source.size() * coding.size()) {
        throw ShapeError("RdProblem: distortion matrix must be |coding| x |source|");
    }
    for (double d : distortion) {
        if (!(d >= 0.0) || !std::isfinite(d)) {
            throw DomainError("RdProblem: distortions must be finite and non-negative");
        }
    }
}

RdProblem RdProblem::binary_hamming()
{
    return {{0.5, 0.5}, {0.5, 0.5}, {0.0, 1.0, 1.0, 0.0}};
}

DenseDistortionModel::DenseDistortionModel(RdProblem problem) : m_Problem(std::move(problem))
{
    m_Problem.validate();
    const std::size_t ny = m_Problem.source.size();
    m_ColumnMin.assign(ny, kInf);
    for (std::size_t x = 0; x < m_Problem.coding.size(); ++x) {
        if (m_Problem.coding[x] == 0.0) {
            continue;
        }
        for (std::size_t y = 0; y < ny; ++y) {
            m_ColumnMin[y] = std::min(m_ColumnMin[y], m_Problem.d(x, y));
        }
    }
}

TiltedMoments DenseDistortionModel::moments(double beta) const
{
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw DomainError("moments: beta must be finite and non-negative");
    }
    const auto& pr = m_Problem;
    const std::size_t nx = pr.coding.size();
    TiltedMoments out;
    std::vector<double> logw(nx);
    for (std::size_t y = 0; y < pr.source.size(); ++y) {
        if (pr.source[y] == 0.0) {
            continue;
        }
        double dmin = m_ColumnMin[y];
        for (std::size_t x = 0; x < nx; ++x) {
            logw[x] = pr.coding[x] > 0.0 ? std::log(pr.coding[x]) - beta * (pr.d(x, y) - dmin) : -kInf;
        }
        double lse = numerics::log_sum_exp(logw);
        double mean = 0.0;
        for (std::size_t x = 0; x < nx; ++x) {
            mean += std::exp(logw[x] - lse) * pr.d(x, y);
        }
        double var = 0.0;
        for (std::size_t x = 0; x < nx; ++x) {
            double dev = pr.d(x, y) - mean;
            var += std::exp(logw[x] - lse) * dev * dev;
        }
        double q = pr.source[y];
        out.logPartition += q * (lse - beta * dmin);
        out.distortion += q * mean;
        out.mmse += q * var;
    }
    return out;
}

double DenseDistortionModel::min_distortion() const
{
    double total = 0.0;
    for (std::size_t y = 0; y < m_Problem.source.size(); ++y) {
        total += m_Problem.source[y] * m_ColumnMin[y];
    }
    return total;
}

double DenseDistortionModel::mean_distortion() const
{
    double total = 0.0;
    for (std::size_t x = 0; x < m_Problem.coding.size(); ++x) {
        for (std::size_t y = 0; y < m_Problem.source.size(); ++y) {
            total += m_Problem.coding[x] * m_Problem.source[y] * m_Problem.d(x, y);
        }
    }
    return total;
}

double DenseDistortionModel::max_rate() const
{
    double rate = 0.0;
    for (std::size_t y = 0; y < m_Problem.source.size(); ++y) {
        if (m_Problem.source[y] == 0.0) {
            continue;
        }
        double mass = 0.0;
        for (std::size_t x = 0; x < m_Problem.coding.size(); ++x) {
            if (m_Problem.d(x, y) <= m_ColumnMin[y] + 1e-12) {
                mass += m_Problem.coding[x];
            }
        }
        rate -= m_Problem.source[y] * std::log(mass);
    }
    return rate;
}

UniformGridPowerModel::UniformGridPowerModel(std::size_t points, double halfWidth, double theta)
    : m_Points(points), m_Step(0.0), m_Theta(theta)
{
    if (points < 2) {
        throw SizeError("UniformGridPowerModel: at least two grid points are required");
    }
    if (!(halfWidth > 0.0) || !(theta > 0.0)) {
        throw DomainError("UniformGridPowerModel: half width and theta must be positive");
    }
    m_Step = 2.0 * halfWidth / static_cast<double>(points - 1);
    m_OffsetDistortion.resize(points);
    for (std::size_t k = 0; k < points; ++k) {
        m_OffsetDistortion[k] = std::pow(static_cast<double>(k) * m_Step, theta);
    }
    // Each unordered offset k > 0 occurs 2 (n - k) times among the n^2 pairs.
    double total = 0.0;
    for (std::size_t k = 1; k < points; ++k) {
        total += 2.0 * static_cast<double>(points - k) * m_OffsetDistortion[k];
    }
    m_Mean = total / (static_cast<double>(points) * static_cast<double>(points));
}

TiltedMoments UniformGridPowerModel::moments(double beta) const
{
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw DomainError("moments: beta must be finite and non-negative");
    }
    const std::size_t n = m_Points;
    // Prefix sums over offsets of w, w d and w d^2 with w = e^{-beta d}.
    std::vector<double> s0(n), s1(n), s2(n);
    double a0 = 0.0, a1 = 0.0, a2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double d = m_OffsetDistortion[k];
        double w = std::exp(-beta * d);
        a0 += w;
        a1 += w * d;
        a2 += w * d * d;
        s0[k] = a0;
        s1[k] = a1;
        s2[k] = a2;
    }
    TiltedMoments out;
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        // offsets 0..j to the left and 1..n-1-j to the right
        double z = s0[j] + s0[n - 1 - j] - 1.0;
        double m1 = s1[j] + s1[n - 1 - j];
        double m2 = s2[j] + s2[n - 1 - j];
        double mean = m1 / z;
        out.logPartition += inv * std::log(z * inv);
        out.distortion += inv * mean;
        out.mmse += inv * std::max(0.0, m2 / z - mean * mean);
    }
    return out;
}

double UniformGridPowerModel::max_rate() const
{
    return std::log(static_cast<double>(m_Points));
}

RdProblem UniformGridPowerModel::dense() const
{
    const std::size_t n = m_Points;
    RdProblem p;
    p.source.assign(n, 1.0 / static_cast<double>(n));
    p.coding = p.source;
    p.distortion.resize(n * n);
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            p.distortion[x * n + y] = m_OffsetDistortion[x > y ? x - y : y - x];
        }
    }
    return p;
}

RdPoint rd_at_beta(const DistortionModel& model, double beta)
{
    auto m = model.moments(beta);
    return {m.distortion, std::max(0.0, -(beta * m.distortion + m.logPartition)), beta};
}

RdPoint rd_parametric(const DistortionModel& model, double distortion)
{
    const double dmin = model.min_distortion();
    const double d0 = model.mean_distortion();
    const double slack = 1e-12 * std::max(1.0, d0);
    if (!(distortion >= dmin - slack && distortion <= d0 + slack)) {
        throw DomainError("rd_parametric: distortion " + std::to_string(distortion) + " outside [" +
                          std::to_string(dmin) + ", " + std::to_string(d0) + "]");
    }
    if (distortion >= d0) {
        return {distortion, 0.0, 0.0};
    }
    if (distortion <= dmin) {
        return {distortion, model.max_rate(), kInf};
    }
    // D_beta decreases from D_0 to D_min; find D_beta = distortion.
    auto excess = [&](double beta) { return model.moments(beta).distortion - distortion; };
    double lo = 0.0;
    double hi = 1.0;
    while (excess(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) {
            return {distortion, model.max_rate(), kInf};
        }
    }
    double beta = numerics::bisect(excess, lo, hi, 1e-15 * hi);
    auto m = model.moments(beta);
    return {distortion, std::max(0.0, -(beta * distortion + m.logPartition)), beta};
}

RdPoint rd_parametric(const RdProblem& problem, double distortion)
{
    return rd_parametric(DenseDistortionModel(problem), distortion);
}

RdPoint distortion_rate(const DistortionModel& model, double rate)
{
    if (!(rate >= 0.0)) {
        throw DomainError("distortion_rate: rate must be non-negative");
    }
    const double top = model.max_rate();
    if (rate >= top) {
        return {model.min_distortion(), rate, kInf};
    }
    if (rate == 0.0) {
        return {model.mean_distortion(), 0.0, 0.0};
    }
    auto shortfall = [&](double beta) {
        auto m = model.moments(beta);
        return -(beta * m.distortion + m.logPartition) - rate;
    };
    double lo = 0.0;
    double hi = 1.0;
    while (shortfall(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) {
            return {model.min_distortion(), rate, kInf};
        }
    }
    double beta = numerics::bisect(shortfall, lo, hi, 1e-15 * hi);
    return {model.moments(beta).distortion, rate, beta};
}

MmseRepresentation rd_mmse_representation(const DistortionModel& model, double beta)
{
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw DomainError("rd_mmse_representation: beta must be finite and non-negative");
    }
    MmseRepresentation out;
    out.beta = beta;
    auto m = model.moments(beta);
    out.distortion = m.distortion;
    out.rateDirect = -(beta * m.distortion + m.logPartition);
    if (beta == 0.0) {
        out.distortionIntegral = model.mean_distortion();
        return out;
    }
    out.rateIntegral = numerics::integrate([&](double b) { return b * model.moments(b).mmse; }, 0.0, beta, 1e-11);
    out.distortionIntegral =
        model.mean_distortion() - numerics::integrate([&](double b) { return model.moments(b).mmse; }, 0.0, beta, 1e-11);
    return out;
}

MmseRepresentation rd_mmse_representation(const RdProblem& problem, double beta)
{
    return rd_mmse_representation(DenseDistortionModel(problem), beta);
}

CapacityResult capacity_parametric(std::span<const double> input, std::span<const double> channel,
                                   std::size_t outputs)
{
    check_distribution(input, "capacity_parametric input");
    const std::size_t nx = input.size();
    if (outputs == 0 || channel.size() != nx * outputs) {
        throw ShapeError("capacity_parametric: channel matrix must be |inputs| x outputs");
    }
    for (std::size_t x = 0; x < nx; ++x) {
        check_distribution(channel.subspan(x * outputs, outputs), "capacity_parametric channel row");
    }
    auto W = [&](std::size_t x, std::size_t y) { return channel[x * outputs + y]; };
    std::vector<double> q(outputs, 0.0);
    double conditionalEntropy = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t y = 0; y < outputs; ++y) {
            q[y] += input[x] * W(x, y);
            conditionalEntropy -= input[x] * numerics::xlogx(W(x, y));
        }
    }
    // f(beta) = beta H(Y|X) + sum_y q(y) ln sum_x p(x) W^beta, and its derivative.
    auto evaluate = [&](double beta, bool derivative) {
        double value = beta * conditionalEntropy;
        double slope = conditionalEntropy;
        std::vector<double> terms;
        for (std::size_t y = 0; y < outputs; ++y) {
            if (q[y] == 0.0) {
                continue;
            }
            terms.clear();
            for (std::size_t x = 0; x < nx; ++x) {
                terms.push_back(input[x] > 0.0 && W(x, y) > 0.0 ? std::log(input[x]) + beta * std::log(W(x, y)) : -kInf);
            }
            double lse = numerics::log_sum_exp(terms);
            value += q[y] * lse;
            for (std::size_t x = 0; x < nx; ++x) {
                if (terms[x] > -kInf) {
                    slope += q[y] * std::exp(terms[x] - lse) * std::log(W(x, y));
                }
            }
        }
        return derivative ? slope : value;
    };
    auto slope = [&](double beta) { return evaluate(beta, true); };
    CapacityResult out;
    if (slope(0.0) >= 0.0) {
        out.beta = 0.0;
    } else {
        double hi = 1.0;
        while (slope(hi) < 0.0) {
            hi *= 2.0;
            if (hi > 1e12) {
                throw ConvergenceError("capacity_parametric: minimizing beta not bracketed");
            }
        }
        out.beta = numerics::bisect(slope, 0.0, hi, 1e-15);
    }
    out.capacity = -evaluate(out.beta, false);
    return out;
}

CapacityResult capacity_parametric(double crossover)
{
    if (!(crossover > 0.0 && crossover < 0.5)) {
        throw DomainError("capacity_parametric: crossover must lie in (0, 1/2)");
    }
    std::vector<double> input{0.5, 0.5};
    std::vector<double> channel{1.0 - crossover, crossover, crossover, 1.0 - crossover};
    return capacity_parametric(input, channel, 2);
}

HighResFit highres_check(double theta, std::span<const double> rates, std::size_t points, double halfWidth)
{
    if (points < 2001) {
        throw SizeError("highres_check: at least 2001 grid points are needed to resolve the high-rate regime");
    }
    if (rates.size() < 2) {
        throw SizeError("highres_check: at least two rates are needed for a fit");
    }
    UniformGridPowerModel model(points, halfWidth, theta);
    HighResFit fit;
    fit.theta = theta;
    for (double r : rates) {
        if (!(r > 0.0 && r < model.max_rate())) {
            throw DomainError("highres_check: rate " + std::to_string(r) + " outside (0, ln(points))");
        }
        fit.rates.push_back(r);
        fit.distortions.push_back(distortion_rate(model, r).distortion);
    }
    double n = static_cast<double>(rates.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < fit.rates.size(); ++i) {
        double x = fit.rates[i];
        double y = std::log(fit.distortions[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

void check_symmetric(const RdProblem& problem)
{
    problem.validate();
    auto profile = [&](std::size_t y) {
        std::vector<std::pair<double, double>> pairs;
        for (std::size_t x = 0; x < problem.coding.size(); ++x) {
            if (problem.coding[x] > 0.0) {
                pairs.emplace_back(problem.d(x, y), problem.coding[x]);
            }
        }
        std::sort(pairs.begin(), pairs.end());
        std::vector<std::pair<double, double>> merged;
        for (const auto& pr : pairs) {
            if (!merged.empty() && std::abs(merged.back().first - pr.first) <= 1e-12) {
                merged.back().second += pr.second;
            } else {
                merged.push_back(pr);
            }
        }
        return merged;
    };
    auto reference = profile(0);
    for (std::size_t y = 1; y < problem.source.size(); ++y) {
        auto other = profile(y);
        bool same = other.size() == reference.size();
        for (std::size_t i = 0; same && i < other.size(); ++i) {
            same = std::abs(other[i].first - reference[i].first) <= 1e-12 &&
                   std::abs(other[i].second - reference[i].second) <= 1e-12;
        }
        if (!same) {
            throw DomainError("dprm_distortion: source letter " + std::to_string(y) +
                              " sees a different distortion distribution than letter 0");
        }
    }
}

RdPoint dprm_distortion(const RdProblem& problem, double rate)
{
    check_symmetric(problem);
    if (!(rate >= 0.0)) {
        throw DomainError("dprm_distortion: rate must be non-negative");
    }
    // Every column is equivalent, so the first one carries the whole computation.
    RdProblem column{{1.0}, problem.coding, {}};
    for (std::size_t x = 0; x < problem.coding.size(); ++x) {
        column.distortion.push_back(problem.d(x, 0));
    }
    DenseDistortionModel model(std::move(column));
    if (rate >= model.max_rate()) {
        return {model.min_distortion(), rate, kInf};
    }
    // -(Lambda(beta) + R) / beta is unimodal in beta, hence in u = ln beta.
    auto objective = [&](double u) {
        double beta = std::exp(u);
        return -(model.moments(beta).logPartition + rate) / beta;
    };
    auto best = numerics::golden_section_max(objective, -40.0, 60.0, 1e-13);
    return {best.value, rate, std::exp(best.x)};
}

} // namespace statmech::coding
