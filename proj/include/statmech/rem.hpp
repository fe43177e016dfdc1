#pragma once

// Random Energy Model: quenched and annealed free energies, finite-size
// Monte Carlo, the model in a magnetic field, the two-level generalized
// model, and the capacity of metastable states of the SK model.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace statmech::rem {

enum class Phase
{
    Paramagnetic,
    //! Only the first level of a two-level tree is frozen.
    PartiallyFrozen,
    Glassy
};

std::string to_string(Phase phase);

//! One analytic piece c0 + c1 beta + c2 beta^2 valid on [betaLow, betaHigh].
struct PhiSegment
{
    double betaLow = 0.0;
    double betaHigh = 0.0;
    double constant = 0.0;
    double linear = 0.0;
    double quadratic = 0.0;
    Phase phase = Phase::Paramagnetic;

    [[nodiscard]] double value(double beta) const { return constant + beta * (linear + beta * quadratic); }
    [[nodiscard]] double slope(double beta) const { return linear + 2.0 * quadratic * beta; }
};

//! Free-energy rate as a function of beta, made of contiguous pieces covering [0, inf).
struct PiecewisePhi
{
    std::vector<PhiSegment> segments;

    //! Interior breakpoints, ascending.
    [[nodiscard]] std::vector<double> transitions() const;
    [[nodiscard]] const PhiSegment& segment_at(double beta) const;
    [[nodiscard]] double value(double beta) const { return segment_at(beta).value(beta); }
    [[nodiscard]] Phase phase(double beta) const { return segment_at(beta).phase; }
    //! Largest |left - right| mismatch of value across breakpoints.
    [[nodiscard]] double continuity_residual() const;
    //! Throws ShapeError unless the segments are contiguous from 0 to infinity.
    void validate() const;
};

struct PhaseValue
{
    double value = 0.0;
    Phase phase = Phase::Paramagnetic;
};

//! beta_c = (2 / J) sqrt(ln 2).
double rem_critical_beta(double coupling);

PiecewisePhi rem_phi_curve(double coupling);
PhaseValue rem_phi(double beta, double coupling);

//! ln 2 - (eps / J)^2 inside |eps| <= J sqrt(ln 2); empty outside.
std::optional<double> rem_entropy(double energy, double coupling);

//! ln 2 + beta^2 J^2 / 4.
double rem_annealed_phi(double beta, double coupling);

//! (ln Z) / n for one draw of 2^n i.i.d. N(0, n J^2 / 2) energies.
double rem_monte_carlo(int n, double coupling, double beta, std::uint64_t seed);

struct RemFieldState
{
    double beta = 0.0;
    double field = 0.0;
    double coupling = 0.0;
    double magnetization = 0.0;
    Phase phase = Phase::Paramagnetic;
    double phi = 0.0;
    double criticalBeta = 0.0;
};

//! Root of beta^2 J^2 / 4 = h2((1 + tanh(beta B)) / 2).
double rem_field_critical_beta(double field, double coupling);

//! Exponent of the field-coupled model at magnetization m before maximization over m.
double rem_field_psi(double beta, double magnetization, double coupling);

RemFieldState rem_field_phi(double beta, double field, double coupling);

//! Magnetic susceptibility at temperature T.
double rem_susceptibility(double temperature, double coupling);

struct GremParams
{
    double coupling = 1.0;
    //! Rate of the first tree level; the second gets ln 2 - firstRate.
    double firstRate = 0.0;
    //! Energy-variance share of the first level; the second gets 1 - firstShare.
    double firstShare = 0.5;

    void validate() const;
    [[nodiscard]] bool two_transitions() const;
};

PiecewisePhi grem_phi_curve(const GremParams& params);
PhaseValue grem_phi(double beta, const GremParams& params);

struct SkCapacity
{
    double capacity = 0.0;
    double tStar = 0.0;
    //! |pdf(t)/Phi(t) - t - K/J| at the returned root.
    double residual = 0.0;
};

//! Exponential growth rate of the number of metastable states with local
//! stability threshold K; solves pdf(t)/Phi(t) = t + K/J.
SkCapacity sk_capacity(double threshold, double coupling);

} // namespace statmech::rem
