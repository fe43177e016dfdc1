#include "statmech/spin_models.hpp"

#include "statmech/asymptotics.hpp"
#include "statmech/error.hpp"
#include "statmech/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>

namespace statmech::spin {

namespace {

void check(const IsingParams& p)
{
    if (!(p.beta >= 0.0) || !std::isfinite(p.beta) || !std::isfinite(p.field) || !std::isfinite(p.coupling)) {
        throw DomainError("IsingParams: beta must be finite and non-negative, field and coupling finite");
    }
}

// ln of the dominant eigenvalue and the ratio lambda_2 / lambda_1.
struct Spectrum
{
    double logLeading;
    double ratio;
};

Spectrum spectrum(const IsingParams& p)
{
    double h = p.reduced_field();
    double K = p.reduced_coupling();
    double sh = std::sinh(h);
    if (K >= 0.0) {
        double a = std::cosh(h) + std::sqrt(sh * sh + std::exp(-4.0 * K));
        return {K + std::log(a), -std::expm1(-4.0 * K) / (a * a)};
    }
    double e4 = std::exp(4.0 * K);
    double a = std::exp(2.0 * K) * std::cosh(h) + std::sqrt(e4 * sh * sh + 1.0);
    return {-K + std::log(a), std::expm1(4.0 * K) / (a * a)};
}

} // namespace

double ising1d_phi(const IsingParams& params)
{
    check(params);
    return spectrum(params).logLeading;
}

double ising1d_magnetization(const IsingParams& params)
{
    check(params);
    double sh = std::sinh(params.reduced_field());
    if (sh == 0.0) {
        return 0.0;
    }
    double rest = std::exp(-4.0 * params.reduced_coupling()) / (sh * sh);
    return std::copysign(1.0 / std::sqrt(1.0 + rest), sh);
}

double ising1d_transfer_log_z(int n, const IsingParams& params)
{
    check(params);
    if (n < 1) {
        throw SizeError("ising1d_transfer_log_z: ring length must be positive");
    }
    auto s = spectrum(params);
    return n * s.logLeading + std::log1p(std::pow(s.ratio, n));
}

double ising1d_exact(int n, const IsingParams& params)
{
    check(params);
    if (n < 2 || n > 20) {
        throw SizeError("ising1d_exact: ring length must be in [2, 20]");
    }
    double h = params.reduced_field();
    double K = params.reduced_coupling();
    numerics::LogSumExp acc;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        int magnet = 0;
        int bonds = 0;
        for (int i = 0; i < n; ++i) {
            int s = (mask >> i) & 1u ? 1 : -1;
            int t = (mask >> ((i + 1) % n)) & 1u ? 1 : -1;
            magnet += s;
            bonds += s * t;
        }
        acc.add(h * magnet + K * bonds);
    }
    return acc.value();
}

double curie_weiss_psi(const IsingParams& params, double m)
{
    return asymptotics::binary_entropy(0.5 * (1.0 + m)) + params.reduced_field() * m +
           0.5 * params.reduced_coupling() * m * m;
}

namespace {

// Roots of f on [lo, hi]: exact zeros on a uniform scan plus bisection of every sign change.
std::vector<double> scan_roots(const std::function<double(double)>& f, double lo, double hi, int points)
{
    std::vector<double> roots;
    auto grid = numerics::linspace(lo, hi, static_cast<std::size_t>(points));
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        values[i] = f(grid[i]);
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (values[i] == 0.0) {
            roots.push_back(grid[i]);
            continue;
        }
        if (i + 1 < grid.size() && values[i + 1] != 0.0 && std::signbit(values[i]) != std::signbit(values[i + 1])) {
            roots.push_back(numerics::bisect(f, grid[i], grid[i + 1], 1e-15));
        }
    }
    return roots;
}

} // namespace

CwSolution curie_weiss_solve(const IsingParams& params)
{
    check(params);
    if (params.coupling < 0.0) {
        throw DomainError("curie_weiss_solve: coupling must be non-negative");
    }
    const double h = params.reduced_field();
    const double K = params.reduced_coupling();
    const double edge = 1.0 - 1e-12;
    auto gap = [&](double m) { return std::tanh(h + K * m) - m; };

    CwSolution out;
    out.fixedPoints = scan_roots(gap, -edge, edge, 10001);
    if (out.fixedPoints.empty()) {
        throw ConvergenceError("curie_weiss_solve: no fixed point found");
    }
    double best = -numerics::kInf;
    for (double m : out.fixedPoints) {
        double curvature = K - 1.0 / (1.0 - m * m);
        out.kinds.push_back(curvature < 0.0 ? StationaryKind::Maximum
                                            : (curvature > 0.0 ? StationaryKind::Minimum : StationaryKind::Flat));
        best = std::max(best, curie_weiss_psi(params, m));
    }
    for (double m : out.fixedPoints) {
        if (curie_weiss_psi(params, m) >= best - 1e-12) {
            out.maximizers.push_back(m);
        }
    }
    out.magnetization = out.maximizers.back();
    out.phi = curie_weiss_psi(params, out.magnetization);
    bool ordered = params.field == 0.0 ? std::abs(out.magnetization) > 1e-6 : K > 1.0;
    out.phase = ordered ? CwPhase::Ordered : CwPhase::Paramagnetic;
    return out;
}

LandauCheck curie_weiss_landau_check(const IsingParams& params)
{
    check(params);
    const double h = params.reduced_field();
    const double K = params.reduced_coupling();
    if (!(K > 0.0)) {
        throw DomainError("curie_weiss_landau_check: beta J must be positive");
    }
    auto landau = [&](double z) {
        double x = std::abs(h + z);
        // ln cosh x = x + ln(1 + e^{-2x}) - ln 2
        return x + std::log1p(std::exp(-2.0 * x)) - numerics::kLn2 - z * z / (2.0 * K);
    };
    auto slope = [&](double z) { return std::tanh(h + z) - z / K; };
    double reach = K + 1.0;
    auto roots = scan_roots(slope, -reach, reach, 20001);

    LandauCheck out;
    out.landauValue = -numerics::kInf;
    for (double z : roots) {
        double v = landau(z);
        if (v >= out.landauValue - 1e-12) {
            out.landauValue = std::max(out.landauValue, v);
            out.zStar = z;
        }
    }
    out.landauValue += numerics::kLn2;
    auto cw = curie_weiss_solve(params);
    out.meanFieldValue = cw.phi;
    out.magnetization = cw.magnetization;
    return out;
}

} // namespace statmech::spin
