#include "statmech/ensembles.hpp"

#include "statmech/error.hpp"
#include "statmech/numerics.hpp"

#include <cmath>
#include <numeric>

namespace statmech::ensembles {

using numerics::kInf;
using numerics::kPi;

void DiscreteSystem::validate() const
{
    if (energies.empty()) {
        throw ShapeError("DiscreteSystem: no energy levels");
    }
    if (!degeneracies.empty() && degeneracies.size() != energies.size()) {
        throw ShapeError("DiscreteSystem: energies and degeneracies differ in length");
    }
    for (double e : energies) {
        if (!std::isfinite(e)) {
            throw DomainError("DiscreteSystem: non-finite energy");
        }
    }
    for (double g : degeneracies) {
        if (!(g >= 1.0) || !std::isfinite(g)) {
            throw DomainError("DiscreteSystem: degeneracies must be at least 1");
        }
    }
}

double DiscreteSystem::state_count() const
{
    if (degeneracies.empty()) {
        return static_cast<double>(energies.size());
    }
    return std::accumulate(degeneracies.begin(), degeneracies.end(), 0.0);
}

DiscreteSystem DiscreteSystem::two_level(double gap)
{
    return {{0.0, gap}, {}, "two-level"};
}

DiscreteSystem DiscreteSystem::spin_in_field(double field)
{
    return {{-field, field}, {}, "spin in field"};
}

namespace {

void check_beta(double beta)
{
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw DomainError("inverse temperature must be finite and non-negative");
    }
}

std::vector<double> log_weights(const DiscreteSystem& system, double beta)
{
    std::vector<double> w(system.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = std::log(system.degeneracy(i)) - beta * system.energies[i];
    }
    return w;
}

} // namespace

double log_partition(const DiscreteSystem& system, double beta)
{
    system.validate();
    check_beta(beta);
    return numerics::log_sum_exp(log_weights(system, beta));
}

std::vector<double> canonical_distribution(const DiscreteSystem& system, double beta)
{
    system.validate();
    check_beta(beta);
    auto w = log_weights(system, beta);
    double logZ = numerics::log_sum_exp(w);
    for (double& x : w) {
        x = std::exp(x - logZ);
    }
    return w;
}

ThermoState thermo_state(const DiscreteSystem& system, double beta)
{
    auto p = canonical_distribution(system, beta);
    ThermoState s;
    s.beta = beta;
    s.logZ = log_partition(system, beta);
    for (std::size_t i = 0; i < p.size(); ++i) {
        s.meanEnergy += p[i] * system.energies[i];
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        double d = system.energies[i] - s.meanEnergy;
        s.varEnergy += p[i] * d * d;
        if (p[i] > 0.0) {
            s.entropy -= p[i] * std::log(p[i] / system.degeneracy(i));
        }
    }
    s.freeEnergy = beta > 0.0 ? -s.logZ / beta : -kInf;
    return s;
}

double kl_divergence(std::span<const double> p, std::span<const double> q)
{
    if (p.size() != q.size()) {
        throw ShapeError("kl_divergence: distributions differ in length");
    }
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) {
            continue;
        }
        if (q[i] == 0.0) {
            return kInf;
        }
        d += p[i] * std::log(p[i] / q[i]);
    }
    return d;
}

GibbsBound gibbs_bound(const DiscreteSystem& reference, const DiscreteSystem& target, double beta)
{
    reference.validate();
    target.validate();
    if (reference.size() != target.size()) {
        throw ShapeError("gibbs_bound: systems have different state lists");
    }
    for (std::size_t i = 0; i < reference.size(); ++i) {
        if (reference.degeneracy(i) != target.degeneracy(i)) {
            throw ShapeError("gibbs_bound: systems have different degeneracies");
        }
    }
    if (!(beta > 0.0)) {
        throw DomainError("gibbs_bound: beta must be positive");
    }
    auto p0 = canonical_distribution(reference, beta);
    double shift = 0.0;
    for (std::size_t i = 0; i < p0.size(); ++i) {
        shift += p0[i] * (reference.energies[i] - target.energies[i]);
    }
    GibbsBound out;
    out.lowerBound = log_partition(reference, beta) + beta * shift;
    out.logZ1 = log_partition(target, beta);
    out.gap = out.logZ1 - out.lowerBound;
    return out;
}

FreeEnergyGap free_energy_divergence(std::span<const double> trial, double beta, const DiscreteSystem& system)
{
    system.validate();
    if (trial.size() != system.size()) {
        throw ShapeError("free_energy_divergence: distribution length differs from the state list");
    }
    if (!(beta > 0.0)) {
        throw DomainError("free_energy_divergence: beta must be positive");
    }
    double total = 0.0;
    for (double q : trial) {
        if (!(q >= 0.0)) {
            throw NormalizationError("free_energy_divergence: negative probability");
        }
        total += q;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw NormalizationError("free_energy_divergence: distribution sums to " + std::to_string(total));
    }
    double meanEnergy = 0.0;
    double entropy = 0.0;
    for (std::size_t i = 0; i < trial.size(); ++i) {
        meanEnergy += trial[i] * system.energies[i];
        if (trial[i] > 0.0) {
            entropy -= trial[i] * std::log(trial[i] / system.degeneracy(i));
        }
    }
    FreeEnergyGap out;
    out.trialFreeEnergy = meanEnergy - entropy / beta;
    out.equilibriumFreeEnergy = -log_partition(system, beta) / beta;
    out.difference = out.trialFreeEnergy - out.equilibriumFreeEnergy;
    out.divergenceOverBeta = kl_divergence(trial, canonical_distribution(system, beta)) / beta;
    return out;
}

EquipartitionResult equipartition(double theta, double alpha, double beta)
{
    if (!(theta > 0.0 && alpha > 0.0 && beta > 0.0)) {
        throw DomainError("equipartition: theta, alpha and beta must be positive");
    }
    // Beyond xMax the Boltzmann factor is below e^{-700}.
    double xMax = std::pow(700.0 / (beta * alpha), 1.0 / theta);
    auto weight = [=](double x) { return std::exp(-beta * alpha * std::pow(x, theta)); };
    double norm = numerics::integrate_endpoint_singular(weight, 0.0, xMax, 1e-12);
    double energy = numerics::integrate_endpoint_singular(
        [&](double x) { return alpha * std::pow(x, theta) * weight(x); }, 0.0, xMax, 1e-12);
    // x E'(x) = alpha theta x^theta for x > 0
    double virial = numerics::integrate_endpoint_singular(
        [&](double x) { return x * alpha * theta * std::pow(x, theta - 1.0) * weight(x); }, 0.0, xMax, 1e-12);
    EquipartitionResult out;
    out.meanEnergy = energy / norm;
    out.target = 1.0 / (beta * theta);
    out.meanVirial = virial / norm;
    out.virialTarget = 1.0 / beta;
    return out;
}

GrandPartition grand_partition(std::span<const double> levels, double beta, double fugacity,
                               Statistics statistics)
{
    if (!(fugacity > 0.0) || !(beta >= 0.0)) {
        throw DomainError("grand_partition: fugacity must be positive and beta non-negative");
    }
    GrandPartition out;
    out.occupancies.reserve(levels.size());
    for (double level : levels) {
        double x = fugacity * std::exp(-beta * level);
        if (statistics == Statistics::Boson) {
            if (!(x < 1.0)) {
                throw ConvergenceError("grand_partition: bosonic geometric series diverges (z e^{-beta eps} >= 1)");
            }
            out.logXi -= std::log1p(-x);
            out.occupancies.push_back(x / (1.0 - x));
        } else {
            out.logXi += std::log1p(x);
            out.occupancies.push_back(x / (1.0 + x));
        }
        out.meanNumber += out.occupancies.back();
    }
    return out;
}

void OscillatorProblem::validate() const
{
    if (!(amplitude > 0.0 && mass > 0.0 && kT > 0.0 && planck > 0.0)) {
        throw DomainError("OscillatorProblem: all parameters must be positive");
    }
}

double oscillator_trial_bound(const OscillatorProblem& problem, OscillatorTrial trial, double parameter)
{
    problem.validate();
    if (!(parameter > 0.0)) {
        throw DomainError("oscillator_trial_bound: parameter must be positive");
    }
    const double A = problem.amplitude;
    const double m = problem.mass;
    const double kT = problem.kT;
    switch (trial) {
    case OscillatorTrial::SquareWell: {
        // Uniform position on [-L/2, L/2]: <A z^4> = A L^4 / 80.
        double L = parameter;
        return std::log(L * std::sqrt(2.0 * kPi * m * kT) / problem.planck) - A * std::pow(L, 4) / (80.0 * kT);
    }
    case OscillatorTrial::Harmonic: {
        // Gaussian position with variance kT / (m w^2): <A z^4 - m w^2 z^2 / 2> = 3A (kT/(m w^2))^2 - kT/2.
        double w = parameter;
        double hbar = problem.planck / (2.0 * kPi);
        double variance = kT / (m * w * w);
        return std::log(kT / (hbar * w)) - (3.0 * A * variance * variance - 0.5 * kT) / kT;
    }
    }
    throw DomainError("oscillator_trial_bound: unknown trial");
}

double oscillator_log_partition(const OscillatorProblem& problem)
{
    problem.validate();
    double scale = std::pow(problem.kT / problem.amplitude, 0.25);
    // Substitute z = scale u so the integrand is exp(-u^4) on |u| <= 700^{1/4}.
    double uMax = std::pow(700.0, 0.25);
    double integral = 2.0 * scale *
                      numerics::integrate([](double u) { return std::exp(-std::pow(u, 4)); }, 0.0, uMax, 1e-13);
    return std::log(std::sqrt(2.0 * kPi * problem.mass * problem.kT) / problem.planck) + std::log(integral);
}

OscillatorBound variational_bound_oscillator(const OscillatorProblem& problem, OscillatorTrial trial)
{
    problem.validate();
    OscillatorBound out;
    if (trial == OscillatorTrial::SquareWell) {
        out.optimalParameter = std::pow(20.0 * problem.kT / problem.amplitude, 0.25);
    } else {
        out.optimalParameter = std::pow(12.0 * problem.amplitude * problem.kT, 0.25) / std::sqrt(problem.mass);
    }
    out.lowerBound = oscillator_trial_bound(problem, trial, out.optimalParameter);
    out.exact = oscillator_log_partition(problem);
    out.ratio = std::exp(out.lowerBound - out.exact);
    return out;
}

} // namespace statmech::ensembles
