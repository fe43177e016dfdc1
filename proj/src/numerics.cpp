#include "statmech/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>

namespace statmech::numerics {

double log_sum_exp(std::span<const double> terms)
{
    LogSumExp acc;
    for (double t : terms) {
        acc.add(t);
    }
    return acc.value();
}

void LogSumExp::add(double term)
{
    ++m_Count;
    if (term == -kInf) {
        return;
    }
    if (std::isnan(term)) {
        m_Max = term;
        return;
    }
    if (term <= m_Max) {
        m_Sum += std::exp(term - m_Max);
    } else {
        m_Sum = m_Sum * std::exp(m_Max - term) + 1.0;
        m_Max = term;
    }
}

double LogSumExp::value() const
{
    if (m_Max == -kInf || std::isnan(m_Max)) {
        return m_Max;
    }
    return m_Max + std::log(m_Sum);
}

std::vector<double> linspace(double first, double last, std::size_t count)
{
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = first;
        return out;
    }
    double step = (last - first) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = first + step * static_cast<double>(i);
    }
    out.back() = last;
    return out;
}

Extremum parabolic_vertex(double x0, double f0, double x1, double f1, double x2, double f2)
{
    double d1 = (f1 - f0) / (x1 - x0);
    double d2 = (f2 - f1) / (x2 - x1);
    double curvature = (d2 - d1) / (x2 - x0);
    if (curvature == 0.0 || !std::isfinite(curvature)) {
        return {x1, f1};
    }
    // f(x) = f1 + b (x - x1) + c (x - x1)^2
    double b = d1 + curvature * (x1 - x0);
    double offset = -b / (2.0 * curvature);
    double x = x1 + offset;
    if (x < x0 || x > x2) {
        return {x1, f1};
    }
    return {x, f1 + b * offset + curvature * offset * offset};
}

double integrate(const std::function<double(double)>& f, double a, double b, double relTol)
{
    double error = 0.0;
    double l1 = 0.0;
    double result = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, a, b, 25, relTol, &error, &l1);
    if (!std::isfinite(result) || error > std::max(relTol * 100.0 * l1, 1e-300)) {
        throw ConvergenceError("integrate: quadrature did not converge (error estimate " +
                               std::to_string(error) + ")");
    }
    return result;
}

double integrate_endpoint_singular(const std::function<double(double)>& f, double a, double b,
                                   double relTol)
{
    thread_local boost::math::quadrature::tanh_sinh<double> integrator(12);
    double error = 0.0;
    double l1 = 0.0;
    auto g = [&f](double x) { return f(x); };
    double result = integrator.integrate(g, a, b, relTol, &error, &l1);
    if (!std::isfinite(result) || error > std::max(relTol * 100.0 * l1, 1e-300)) {
        throw ConvergenceError("integrate_endpoint_singular: quadrature did not converge (error estimate " +
                               std::to_string(error) + ")");
    }
    return result;
}

double log_normal_cdf(double t)
{
    if (t > -5.0) {
        return std::log(0.5 * std::erfc(-t / std::sqrt(2.0)));
    }
    // erfc(x) = exp(-x^2) erfcx(x); use a continued fraction for the scaled tail.
    double x = -t;
    double cf = 0.0;
    for (int k = 60; k >= 1; --k) {
        cf = k / (x + cf);
    }
    double millsRatio = 1.0 / (x + cf);
    return -0.5 * x * x - 0.5 * std::log(2.0 * kPi) + std::log(millsRatio);
}

} // namespace statmech::numerics
