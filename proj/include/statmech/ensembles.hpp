#pragma once

// Canonical-ensemble computations on finite systems and on one-dimensional
// continuous Hamiltonians. Units: nats, k = 1, energies in arbitrary units.

#include <span>
#include <string>
#include <vector>

namespace statmech::ensembles {

//! A finite list of energy levels with degeneracies.
struct DiscreteSystem
{
    std::vector<double> energies;
    //! Number of microstates sharing each energy; empty means all ones.
    std::vector<double> degeneracies;
    std::string label;

    //! Throws ShapeError on mismatched or empty lists and DomainError on a degeneracy below 1.
    void validate() const;
    [[nodiscard]] std::size_t size() const { return energies.size(); }
    [[nodiscard]] double degeneracy(std::size_t i) const
    {
        return degeneracies.empty() ? 1.0 : degeneracies[i];
    }
    //! Total number of microstates.
    [[nodiscard]] double state_count() const;

    //! Two levels {0, gap}.
    static DiscreteSystem two_level(double gap);
    //! A spin in a field: energies {-field, +field}.
    static DiscreteSystem spin_in_field(double field);
};

struct ThermoState
{
    double beta = 0.0;
    double logZ = 0.0;
    double meanEnergy = 0.0;
    double varEnergy = 0.0;
    double entropy = 0.0;
    //! -logZ / beta; -infinity at beta = 0.
    double freeEnergy = 0.0;
};

//! ln Z(beta) = ln sum_i g_i exp(-beta E_i), stable for large beta.
double log_partition(const DiscreteSystem& system, double beta);

//! Canonical probabilities of each listed level (degeneracy included).
std::vector<double> canonical_distribution(const DiscreteSystem& system, double beta);

//! Exact thermodynamic state by reweighted sums.
ThermoState thermo_state(const DiscreteSystem& system, double beta);

struct GibbsBound
{
    //! ln Z0 + beta <E0 - E1>_0.
    double lowerBound = 0.0;
    double logZ1 = 0.0;
    //! logZ1 - lowerBound, which equals D(P0 || P1).
    double gap = 0.0;
};

//! Gibbs-inequality lower bound on ln Z1 using the ensemble of \p reference.
GibbsBound gibbs_bound(const DiscreteSystem& reference, const DiscreteSystem& target, double beta);

struct FreeEnergyGap
{
    double trialFreeEnergy = 0.0;
    double equilibriumFreeEnergy = 0.0;
    //! trialFreeEnergy - equilibriumFreeEnergy.
    double difference = 0.0;
    //! D(Q || P_beta) / beta computed directly.
    double divergenceOverBeta = 0.0;
};

//! Free energy of an arbitrary distribution \p trial over the listed levels,
//! F_Q = <E>_Q - H(Q) / beta, compared with the equilibrium free energy.
FreeEnergyGap free_energy_divergence(std::span<const double> trial, double beta,
                                     const DiscreteSystem& system);

double kl_divergence(std::span<const double> p, std::span<const double> q);

struct EquipartitionResult
{
    //! <alpha |X|^theta> under the density proportional to exp(-beta alpha |x|^theta).
    double meanEnergy = 0.0;
    //! 1 / (beta theta).
    double target = 0.0;
    //! <X E'(X)>.
    double meanVirial = 0.0;
    //! 1 / beta.
    double virialTarget = 0.0;
};

//! Mean of a power-law energy term by quadrature.
EquipartitionResult equipartition(double theta, double alpha, double beta);

enum class Statistics
{
    Boson,
    Fermion
};

struct GrandPartition
{
    double logXi = 0.0;
    double meanNumber = 0.0;
    std::vector<double> occupancies;
};

//! Product-form grand partition function over single-particle \p levels.
GrandPartition grand_partition(std::span<const double> levels, double beta, double fugacity,
                               Statistics statistics);

//! Anharmonic oscillator E(p, z) = p^2 / 2m + A z^4 at temperature kT.
struct OscillatorProblem
{
    double amplitude = 1.0;
    double mass = 1.0;
    double kT = 1.0;
    double planck = 1.0;

    void validate() const;
};

enum class OscillatorTrial
{
    SquareWell,
    Harmonic
};

struct OscillatorBound
{
    double lowerBound = 0.0;
    double exact = 0.0;
    //! exp(lowerBound - exact).
    double ratio = 0.0;
    //! Well width L for the square well, angular frequency for the harmonic trial.
    double optimalParameter = 0.0;
};

//! Variational lower bound on ln Z with a given trial-ensemble parameter.
double oscillator_trial_bound(const OscillatorProblem& problem, OscillatorTrial trial, double parameter);

//! ln Z of the anharmonic oscillator by quadrature.
double oscillator_log_partition(const OscillatorProblem& problem);

//! Best trial bound at the closed-form optimal parameter, and the exact value.
OscillatorBound variational_bound_oscillator(const OscillatorProblem& problem, OscillatorTrial trial);

} // namespace statmech::ensembles
