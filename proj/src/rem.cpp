#include "statmech/rem.hpp"

#include "statmech/asymptotics.hpp"
#include "statmech/error.hpp"
#include "statmech/numerics.hpp"
#include "statmech/random.hpp"

#include <cmath>

namespace statmech::rem {

using numerics::kInf;
using numerics::kLn2;
using numerics::kPi;

std::string to_string(Phase phase)
{
    switch (phase) {
    case Phase::Paramagnetic:
        return "paramagnetic";
    case Phase::PartiallyFrozen:
        return "partially-frozen";
    case Phase::Glassy:
        return "glassy";
    }
    return "unknown";
}

std::vector<double> PiecewisePhi::transitions() const
{
    std::vector<double> out;
    for (std::size_t i = 1; i < segments.size(); ++i) {
        out.push_back(segments[i].betaLow);
    }
    return out;
}

const PhiSegment& PiecewisePhi::segment_at(double beta) const
{
    if (segments.empty()) {
        throw ShapeError("PiecewisePhi: no segments");
    }
    if (!(beta >= 0.0)) {
        throw DomainError("PiecewisePhi: beta must be non-negative");
    }
    for (const auto& s : segments) {
        if (beta <= s.betaHigh) {
            return s;
        }
    }
    return segments.back();
}

double PiecewisePhi::continuity_residual() const
{
    double worst = 0.0;
    for (std::size_t i = 1; i < segments.size(); ++i) {
        double b = segments[i].betaLow;
        worst = std::max(worst, std::abs(segments[i - 1].value(b) - segments[i].value(b)));
    }
    return worst;
}

void PiecewisePhi::validate() const
{
    if (segments.empty() || segments.front().betaLow != 0.0 || segments.back().betaHigh != kInf) {
        throw ShapeError("PiecewisePhi: segments must cover [0, inf)");
    }
    for (std::size_t i = 1; i < segments.size(); ++i) {
        if (segments[i].betaLow != segments[i - 1].betaHigh || !(segments[i].betaLow < segments[i].betaHigh)) {
            throw ShapeError("PiecewisePhi: segments are not contiguous");
        }
    }
}

namespace {

void check_coupling(double coupling)
{
    if (!(coupling > 0.0) || !std::isfinite(coupling)) {
        throw DomainError("coupling J must be positive");
    }
}

void check_beta(double beta)
{
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw DomainError("beta must be finite and non-negative");
    }
}

} // namespace

double rem_critical_beta(double coupling)
{
    check_coupling(coupling);
    return 2.0 / coupling * std::sqrt(kLn2);
}

PiecewisePhi rem_phi_curve(double coupling)
{
    double bc = rem_critical_beta(coupling);
    PiecewisePhi curve;
    curve.segments.push_back({0.0, bc, kLn2, 0.0, 0.25 * coupling * coupling, Phase::Paramagnetic});
    curve.segments.push_back({bc, kInf, 0.0, coupling * std::sqrt(kLn2), 0.0, Phase::Glassy});
    return curve;
}

PhaseValue rem_phi(double beta, double coupling)
{
    check_beta(beta);
    auto curve = rem_phi_curve(coupling);
    return {curve.value(beta), curve.phase(beta)};
}

std::optional<double> rem_entropy(double energy, double coupling)
{
    check_coupling(coupling);
    double edge = coupling * std::sqrt(kLn2);
    if (std::abs(energy) > edge) {
        return std::nullopt;
    }
    double r = energy / coupling;
    return std::max(0.0, kLn2 - r * r);
}

double rem_annealed_phi(double beta, double coupling)
{
    check_beta(beta);
    check_coupling(coupling);
    return kLn2 + 0.25 * beta * beta * coupling * coupling;
}

double rem_monte_carlo(int n, double coupling, double beta, std::uint64_t seed)
{
    check_beta(beta);
    check_coupling(coupling);
    if (n < 1 || n > 24) {
        throw SizeError("rem_monte_carlo: n must be in [1, 24]");
    }
    if (beta == 0.0) {
        return kLn2;
    }
    Rng rng(seed);
    const double scale = coupling * std::sqrt(0.5 * n);
    const std::uint64_t states = std::uint64_t{1} << n;
    numerics::LogSumExp acc;
    for (std::uint64_t i = 0; i < states; ++i) {
        acc.add(-beta * scale * rng.normal());
    }
    return acc.value() / n;
}

double rem_field_critical_beta(double field, double coupling)
{
    check_coupling(coupling);
    auto excess = [&](double beta) {
        return 0.25 * beta * beta * coupling * coupling -
               asymptotics::binary_entropy(0.5 * (1.0 + std::tanh(beta * field)));
    };
    double hi = 1.001 * rem_critical_beta(coupling) + 10.0 * std::abs(field);
    return numerics::bisect(excess, 0.0, hi, 1e-15);
}

double rem_field_psi(double beta, double magnetization, double coupling)
{
    double entropy = asymptotics::binary_entropy(0.5 * (1.0 + magnetization));
    double frozenAt = 2.0 / coupling * std::sqrt(entropy);
    if (beta <= frozenAt) {
        return entropy + 0.25 * beta * beta * coupling * coupling;
    }
    return beta * coupling * std::sqrt(entropy);
}

RemFieldState rem_field_phi(double beta, double field, double coupling)
{
    check_beta(beta);
    check_coupling(coupling);
    RemFieldState s;
    s.beta = beta;
    s.field = field;
    s.coupling = coupling;
    s.criticalBeta = rem_field_critical_beta(field, coupling);
    if (beta <= s.criticalBeta) {
        s.phase = Phase::Paramagnetic;
        s.magnetization = std::tanh(beta * field);
        double x = std::abs(beta * field);
        // ln(2 cosh x) = x + ln(1 + e^{-2x})
        s.phi = x + std::log1p(std::exp(-2.0 * x)) + 0.25 * beta * beta * coupling * coupling;
    } else {
        s.phase = Phase::Glassy;
        s.magnetization = std::tanh(field * s.criticalBeta);
        double entropy = asymptotics::binary_entropy(0.5 * (1.0 + s.magnetization));
        s.phi = beta * coupling * std::sqrt(entropy) + beta * s.magnetization * field;
    }
    return s;
}

double rem_susceptibility(double temperature, double coupling)
{
    if (!(temperature > 0.0)) {
        throw DomainError("rem_susceptibility: temperature must be positive");
    }
    double tc = 1.0 / rem_critical_beta(coupling);
    return temperature >= tc ? 1.0 / temperature : 1.0 / tc;
}

void GremParams::validate() const
{
    check_coupling(coupling);
    if (!(firstRate > 0.0 && firstRate < kLn2)) {
        throw DomainError("GREM: first-level rate must lie in (0, ln 2)");
    }
    if (!(firstShare > 0.0 && firstShare < 1.0)) {
        throw DomainError("GREM: first-level variance share must lie in (0, 1)");
    }
}

bool GremParams::two_transitions() const
{
    return firstRate / firstShare < (kLn2 - firstRate) / (1.0 - firstShare);
}

PiecewisePhi grem_phi_curve(const GremParams& params)
{
    params.validate();
    if (!params.two_transitions()) {
        return rem_phi_curve(params.coupling);
    }
    const double J = params.coupling;
    const double r1 = params.firstRate;
    const double a1 = params.firstShare;
    const double r2 = kLn2 - r1;
    const double a2 = 1.0 - a1;
    double b1 = 2.0 / J * std::sqrt(r1 / a1);
    double b2 = 2.0 / J * std::sqrt(r2 / a2);
    PiecewisePhi curve;
    curve.segments.push_back({0.0, b1, kLn2, 0.0, 0.25 * J * J, Phase::Paramagnetic});
    curve.segments.push_back({b1, b2, r2, J * std::sqrt(a1 * r1), 0.25 * a2 * J * J, Phase::PartiallyFrozen});
    curve.segments.push_back({b2, kInf, 0.0, J * (std::sqrt(a1 * r1) + std::sqrt(a2 * r2)), 0.0, Phase::Glassy});
    return curve;
}

PhaseValue grem_phi(double beta, const GremParams& params)
{
    check_beta(beta);
    auto curve = grem_phi_curve(params);
    return {curve.value(beta), curve.phase(beta)};
}

SkCapacity sk_capacity(double threshold, double coupling)
{
    check_coupling(coupling);
    const double shift = threshold / coupling;
    if (!std::isfinite(shift)) {
        throw DomainError("sk_capacity: threshold must be finite");
    }
    // pdf(t) / Phi(t) - t - shift, strictly decreasing in t.
    auto stationarity = [&](double t) {
        double hazard = std::exp(-0.5 * t * t - 0.5 * std::log(2.0 * kPi) - numerics::log_normal_cdf(t));
        return hazard - t - shift;
    };
    double lo = -1.0;
    double hi = 1.0;
    for (int k = 0; k < 200 && stationarity(lo) <= 0.0; ++k) {
        lo = 2.0 * lo - 1.0;
    }
    for (int k = 0; k < 200 && stationarity(hi) >= 0.0; ++k) {
        hi = 2.0 * hi + 1.0;
    }
    if (!(stationarity(lo) > 0.0 && stationarity(hi) < 0.0)) {
        throw ConvergenceError("sk_capacity: could not bracket the stationary point (bracket [" + std::to_string(lo) +
                               ", " + std::to_string(hi) + "])");
    }
    SkCapacity out;
    out.tStar = numerics::bisect(stationarity, lo, hi, 1e-15);
    out.residual = std::abs(stationarity(out.tStar));
    double u = out.tStar + shift;
    out.capacity = kLn2 + numerics::log_normal_cdf(out.tStar) - 0.5 * u * u;
    return out;
}

} // namespace statmech::rem
