#include "statmech/coding.hpp"

#include "statmech/asymptotics.hpp"
#include "statmech/error.hpp"
#include "statmech/numerics.hpp"

#include <cmath>
#include <vector>

namespace statmech::coding {

using asymptotics::binary_entropy;
using asymptotics::gv_distance;
using numerics::kInf;
using numerics::kLn2;

void Bsc::validate() const
{
    if (!(crossover > 0.0 && crossover < 0.5)) {
        throw DomainError("crossover probability must lie in (0, 1/2), got " + std::to_string(crossover));
    }
}

double Bsc::coupling() const
{
    validate();
    return std::log((1.0 - crossover) / crossover);
}

double Bsc::capacity() const
{
    validate();
    return kLn2 - binary_entropy(crossover);
}

std::string to_string(DecoderPhase phase)
{
    switch (phase) {
    case DecoderPhase::Ferromagnetic:
        return "ferromagnetic";
    case DecoderPhase::Paramagnetic:
        return "paramagnetic";
    case DecoderPhase::Glassy:
        return "glassy";
    }
    return "unknown";
}

namespace {

void check_beta(double beta)
{
    if (!(beta >= 0.0) || std::isnan(beta)) {
        throw DomainError("beta must be non-negative");
    }
}

void check_open_rate(double rate)
{
    if (!(rate > 0.0 && rate < kLn2)) {
        throw DomainError("rate must lie in (0, ln 2), got " + std::to_string(rate));
    }
}

} // namespace

double p_beta(double p, double beta)
{
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("p_beta: p must lie in (0, 1)");
    }
    check_beta(beta);
    double x = beta * std::log((1.0 - p) / p);
    // 1 / (1 + e^{x}) without overflow
    return x > 0.0 ? std::exp(-x) / (1.0 + std::exp(-x)) : 1.0 / (1.0 + std::exp(x));
}

double ze_critical_beta(double rate, double p)
{
    check_open_rate(rate);
    Bsc channel{p};
    double delta = gv_distance(rate);
    return std::log((1.0 - delta) / delta) / channel.coupling();
}

BranchValue ze_phi(double beta, double rate, double p)
{
    check_beta(beta);
    double bc = ze_critical_beta(rate, p);
    double J = Bsc{p}.coupling();
    if (beta <= bc) {
        // ln(p^beta + (1-p)^beta) = beta ln(1-p) + ln(1 + e^{-beta J})
        return {rate - kLn2 + beta * std::log1p(-p) + std::log1p(std::exp(-beta * J)), DecoderPhase::Paramagnetic};
    }
    double delta = gv_distance(rate);
    return {beta * (delta * std::log(p) + (1.0 - delta) * std::log1p(-p)), DecoderPhase::Glassy};
}

double ferromagnetic_exponent(double beta, double p)
{
    check_beta(beta);
    Bsc channel{p};
    return beta * (std::log1p(-p) - channel.coupling() * p);
}

PhasePoint decoder_phase(double beta, double rate, double p)
{
    PhasePoint point;
    point.beta = beta;
    point.rate = rate;
    auto random = ze_phi(beta, rate, p);
    point.ferromagneticExponent = ferromagnetic_exponent(beta, p);
    point.randomExponent = random.value;
    if (point.ferromagneticExponent > random.value) {
        point.phase = DecoderPhase::Ferromagnetic;
        point.dominantExponent = point.ferromagneticExponent;
    } else {
        point.phase = random.phase;
        point.dominantExponent = random.value;
    }
    return point;
}

DecoderBoundaries decoder_boundaries(double rate, double p)
{
    DecoderBoundaries out;
    out.paraGlassyBeta = ze_critical_beta(rate, p);
    if (rate < Bsc{p}.capacity()) {
        auto gap = [&](double beta) { return ferromagnetic_exponent(beta, p) - ze_phi(beta, rate, p).value; };
        out.ferromagneticBeta = numerics::bisect(gap, 0.0, 1.0, 1e-15);
    }
    return out;
}

double pc_exponent(double rate, double p)
{
    Bsc{p}.validate();
    if (!(rate >= 0.0 && rate < kLn2)) {
        throw DomainError("pc_exponent: rate must lie in [0, ln 2)");
    }
    double delta = gv_distance(rate);
    if (delta > p) {
        return 0.0;
    }
    return asymptotics::binary_divergence(delta, p);
}

namespace {

void check_settings(const ErasureSettings& s)
{
    Bsc{s.crossover}.validate();
    if (!(s.gridStep > 0.0 && s.gridStep <= 1.0)) {
        throw DomainError("erasure exponent: grid step must lie in (0, 1]");
    }
    if (!(s.beta > 0.0) || !(s.sMax > 0.0)) {
        throw DomainError("erasure exponent: beta and sMax must be positive");
    }
}

// (1 + beta s) ln[p^{1/(1+beta s)} + (1-p)^{1/(1+beta s)}]
double channel_term(double s, const ErasureSettings& settings)
{
    double a = 1.0 + settings.beta * s;
    double p = settings.crossover;
    return a * std::log(std::pow(p, 1.0 / a) + std::pow(1.0 - p, 1.0 / a));
}

double positive_part(double x)
{
    return x > 0.0 ? x : 0.0;
}

double direct_objective(double s, double rate, const ErasureSettings& settings)
{
    double b = settings.beta;
    double spread = (kLn2 - rate) * (1.0 - positive_part(1.0 - b * s));
    double linear = s * (b * (kLn2 - rate) - rate * positive_part(1.0 - b));
    return std::min(spread, linear) - channel_term(s, settings) - s * settings.threshold;
}

} // namespace

ExponentResult erasure_exponent_jensen(double rate, const ErasureSettings& settings)
{
    check_settings(settings);
    const int steps = static_cast<int>(std::lround(1.0 / settings.gridStep));
    const double b = settings.beta;
    std::vector<double> channel(steps + 1);
    for (int i = 0; i <= steps; ++i) {
        channel[i] = channel_term(i * settings.gridStep, settings);
    }
    ExponentResult best;
    best.value = -kInf;
    for (int j = 0; j <= steps; ++j) {
        double rho = j * settings.gridStep;
        for (int i = 0; i <= j; ++i) {
            double s = i * settings.gridStep;
            double v = (rho - positive_part(rho - b * s)) * kLn2 - channel[i] - rho * rate - s * settings.threshold;
            if (v > best.value) {
                best.value = v;
                best.s = s;
                best.rho = rho;
            }
        }
    }
    return best;
}

ExponentResult erasure_exponent_direct(double rate, const ErasureSettings& settings)
{
    check_settings(settings);
    const int steps = static_cast<int>(std::lround(settings.sMax / settings.gridStep));
    ExponentResult best;
    best.value = -kInf;
    int bestIndex = 0;
    for (int i = 0; i <= steps; ++i) {
        double s = i * settings.gridStep;
        double v = direct_objective(s, rate, settings);
        if (v > best.value) {
            best.value = v;
            best.s = s;
            bestIndex = i;
        }
    }
    if (settings.refine) {
        double lo = std::max(0, bestIndex - 1) * settings.gridStep;
        double hi = std::min(steps, bestIndex + 1) * settings.gridStep;
        auto polished = numerics::golden_section_max(
            [&](double s) { return direct_objective(s, rate, settings); }, lo, hi, 1e-12);
        if (polished.value > best.value) {
            best.value = polished.value;
            best.s = polished.x;
        }
    }
    return best;
}

double hierarchical_knee(double rate)
{
    double delta = gv_distance(rate);
    if (delta == 0.0) {
        return kInf;
    }
    return std::log((1.0 - delta) / delta);
}

double hierarchical_u(double s, double rate)
{
    if (!(s >= 0.0)) {
        throw DomainError("hierarchical_u: s must be non-negative");
    }
    double delta = gv_distance(rate);
    if (s <= hierarchical_knee(rate)) {
        return s * delta;
    }
    return kLn2 - rate - std::log1p(std::exp(-s));
}

TwoStageExponent hierarchical_two_stage(double s, double firstRate, double secondRate, double lambda)
{
    if (!(lambda > 0.0 && lambda < 1.0)) {
        throw DomainError("hierarchical_two_stage: lambda must lie in (0, 1)");
    }
    for (double r : {firstRate, secondRate}) {
        if (!(r >= 0.0 && r <= kLn2)) {
            throw DomainError("hierarchical_two_stage: stage rates must lie in [0, ln 2]");
        }
    }
    TwoStageExponent out;
    out.rate = lambda * firstRate + (1.0 - lambda) * secondRate;
    check_open_rate(out.rate);
    if (firstRate < secondRate) {
        out.value = lambda * hierarchical_u(s, firstRate) + (1.0 - lambda) * hierarchical_u(s, secondRate);
        return out;
    }
    out.value = hierarchical_u(s, out.rate);
    if (firstRate > secondRate) {
        out.validUpTo = hierarchical_knee(out.rate);
        out.valid = s <= *out.validUpTo;
    }
    return out;
}

double jscc_critical_beta(double field, double theta, double p)
{
    Bsc{p}.validate();
    if (!(theta > 0.0)) {
        throw DomainError("jscc: theta must be positive");
    }
    auto excess = [&](double beta) {
        return kLn2 - binary_entropy(p_beta(p, beta)) -
               binary_entropy(0.5 * (1.0 + std::tanh(beta * field))) / theta;
    };
    double lo = 0.0;
    for (double hi = 1.0; hi < 1e12; hi *= 2.0) {
        if (excess(hi) > 0.0) {
            return numerics::bisect(excess, lo, hi, 1e-15 * hi);
        }
        lo = hi;
    }
    return kInf;
}

JsccBoundaries jscc_boundaries(double p, double q, double theta)
{
    Bsc channel{p};
    channel.validate();
    if (!(q > 0.0 && q < 1.0)) {
        throw DomainError("jscc_boundaries: source probability must lie in (0, 1)");
    }
    if (!(theta > 0.0)) {
        throw DomainError("jscc_boundaries: theta must be positive");
    }
    double budget = theta * channel.capacity();
    if (budget > kLn2 + 1e-15) {
        throw DomainError("jscc_boundaries: theta C exceeds ln 2, so h2(q) = theta C has no solution");
    }
    JsccBoundaries out;
    out.field = 0.5 * std::log(q / (1.0 - q));
    out.qStar = gv_distance(std::max(0.0, kLn2 - budget));
    out.fieldBoundary = 0.5 * std::log(out.qStar / (1.0 - out.qStar));
    out.criticalBeta = jscc_critical_beta(out.field, theta, p);
    return out;
}

namespace {

double jscc_delta(double magnetization, double theta)
{
    double rate = binary_entropy(0.5 * (1.0 + magnetization)) / theta;
    return rate >= kLn2 ? 0.0 : gv_distance(rate);
}

} // namespace

double jscc_psi(double beta, double magnetization, double theta, double p)
{
    check_beta(beta);
    if (!(theta > 0.0)) {
        throw DomainError("jscc: theta must be positive");
    }
    double J = Bsc{p}.coupling();
    double entropy = binary_entropy(0.5 * (1.0 + magnetization));
    double delta = jscc_delta(magnetization, theta);
    double pb = p_beta(p, beta);
    if (pb >= delta) {
        return entropy / theta + binary_entropy(pb) - kLn2 - beta * J * pb;
    }
    return -beta * J * delta;
}

JsccState jscc_phi(double beta, double field, double theta, double p)
{
    check_beta(beta);
    const double edge = 1.0 - 1e-9;
    auto grid = numerics::linspace(-edge, edge, 10001);
    auto objective = [&](double m) { return theta * jscc_psi(beta, m, theta, p) + beta * m * field; };
    std::vector<double> values(grid.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        values[i] = objective(grid[i]);
        if (values[i] > values[best]) {
            best = i;
        }
    }
    numerics::Extremum ext{grid[best], values[best]};
    if (best > 0 && best + 1 < grid.size()) {
        auto vertex = numerics::parabolic_vertex(grid[best - 1], values[best - 1], grid[best], values[best],
                                                 grid[best + 1], values[best + 1]);
        if (vertex.value >= ext.value) {
            ext = vertex;
        }
    }
    JsccState out;
    out.magnetization = ext.x;
    out.phi = ext.value;
    bool paramagnetic = p_beta(p, beta) >= jscc_delta(out.magnetization, theta);
    out.phase = paramagnetic ? DecoderPhase::Paramagnetic : DecoderPhase::Glassy;
    return out;
}

} // namespace statmech::coding
