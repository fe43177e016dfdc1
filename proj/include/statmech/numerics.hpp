#pragma once

// Small numerical kernels shared by every module: stable log-sum-exp,
// bracketing root finders, one-dimensional extremum search and quadrature.

#include "statmech/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace statmech::numerics {

inline constexpr double kLn2 = 0.69314718055994530942;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

//! ln(sum_i exp(x_i)); returns -inf for an empty span or all -inf terms.
double log_sum_exp(std::span<const double> terms);

//! Streaming log-sum-exp with O(1) memory.
class LogSumExp
{
public:
    void add(double term);
    [[nodiscard]] double value() const;
    [[nodiscard]] std::size_t count() const { return m_Count; }

private:
    double m_Max = -kInf;
    double m_Sum = 0.0;
    std::size_t m_Count = 0;
};

//! x ln x with the convention 0 ln 0 = 0.
inline double xlogx(double x)
{
    return x > 0.0 ? x * std::log(x) : 0.0;
}

std::vector<double> linspace(double first, double last, std::size_t count);

//! Bisection for a root of \p f on [lo, hi]; f(lo) and f(hi) must differ in sign.
template<typename F>
double bisect(F&& f, double lo, double hi, double xtol = 1e-14, int maxIterations = 400)
{
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) {
        return lo;
    }
    if (fhi == 0.0) {
        return hi;
    }
    if (std::signbit(flo) == std::signbit(fhi)) {
        throw ConvergenceError("bisect: root not bracketed on [" + std::to_string(lo) + ", " +
                               std::to_string(hi) + "], f = (" + std::to_string(flo) + ", " +
                               std::to_string(fhi) + ")");
    }
    for (int i = 0; i < maxIterations; ++i) {
        double mid = 0.5 * (lo + hi);
        if (hi - lo <= xtol || mid == lo || mid == hi) {
            return mid;
        }
        double fmid = f(mid);
        if (fmid == 0.0) {
            return mid;
        }
        if (std::signbit(fmid) == std::signbit(flo)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct Extremum
{
    double x;
    double value;
};

//! Golden-section search for the maximum of a unimodal \p f on [lo, hi].
template<typename F>
Extremum golden_section_max(F&& f, double lo, double hi, double xtol = 1e-10, int maxIterations = 500)
{
    const double invPhi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo;
    double b = hi;
    double c = b - invPhi * (b - a);
    double d = a + invPhi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int i = 0; i < maxIterations && (b - a) > xtol; ++i) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invPhi * (b - a);
            fd = f(d);
        }
    }
    Extremum best{c, fc};
    if (fd > best.value) {
        best = {d, fd};
    }
    for (double edge : {lo, hi}) {
        double fe = f(edge);
        if (fe > best.value) {
            best = {edge, fe};
        }
    }
    return best;
}

template<typename F>
Extremum golden_section_min(F&& f, double lo, double hi, double xtol = 1e-10, int maxIterations = 500)
{
    Extremum e = golden_section_max([&](double x) { return -f(x); }, lo, hi, xtol, maxIterations);
    return {e.x, -e.value};
}

//! Vertex of the parabola through three points with x0 < x1 < x2.
//! Falls back to the middle point when the parabola is degenerate.
Extremum parabolic_vertex(double x0, double f0, double x1, double f1, double x2, double f2);

//! Adaptive Gauss-Kronrod quadrature on [a, b]; throws ConvergenceError when
//! the error estimate exceeds \p relTol relative to the result.
double integrate(const std::function<double(double)>& f, double a, double b, double relTol = 1e-10);

//! Tanh-sinh quadrature, for integrands with endpoint cusps or singular derivatives.
double integrate_endpoint_singular(const std::function<double(double)>& f, double a, double b,
                                   double relTol = 1e-10);

//! Gaussian upper tail Q(t) = P(N(0,1) > t).
inline double gaussian_tail(double t)
{
    return 0.5 * std::erfc(t / std::sqrt(2.0));
}

//! ln Phi(t) where Phi is the standard normal CDF; accurate far into the left tail.
double log_normal_cdf(double t);

} // namespace statmech::numerics
