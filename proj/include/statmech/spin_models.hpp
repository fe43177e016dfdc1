#pragma once

// Exactly solvable spin models: the one-dimensional Ising ring via its
// transfer matrix and the Curie-Weiss (infinite-range) model.

#include <vector>

namespace statmech::spin {

//! Energy E(s) = -field sum_i s_i - coupling sum_i s_i s_{i+1}.
struct IsingParams
{
    double beta = 1.0;
    double field = 0.0;
    double coupling = 1.0;

    [[nodiscard]] double reduced_field() const { return beta * field; }
    [[nodiscard]] double reduced_coupling() const { return beta * coupling; }
};

//! Free-energy rate ln(lambda_max) of the 1-D Ising ring, stable for large coupling.
double ising1d_phi(const IsingParams& params);

//! Magnetization per spin in the thermodynamic limit.
double ising1d_magnetization(const IsingParams& params);

//! ln(lambda_1^n + lambda_2^n) for a ring of n spins.
double ising1d_transfer_log_z(int n, const IsingParams& params);

//! ln Z of a periodic ring of 2 <= n <= 20 spins by enumeration.
double ising1d_exact(int n, const IsingParams& params);

enum class CwPhase
{
    Paramagnetic,
    Ordered
};

enum class StationaryKind
{
    Maximum,
    Minimum,
    Flat
};

//! Stationary structure of psi(m) = h2((1+m)/2) + beta B m + beta J m^2 / 2.
struct CwSolution
{
    //! Solutions of m = tanh(beta B + beta J m), ascending.
    std::vector<double> fixedPoints;
    std::vector<StationaryKind> kinds;
    //! All fixed points attaining the global maximum of psi.
    std::vector<double> maximizers;
    //! The global maximizer; ties resolve to the largest m.
    double magnetization = 0.0;
    double phi = 0.0;
    CwPhase phase = CwPhase::Paramagnetic;
};

//! psi(m) for the Curie-Weiss model.
double curie_weiss_psi(const IsingParams& params, double m);

CwSolution curie_weiss_solve(const IsingParams& params);

struct LandauCheck
{
    //! max_m psi(m).
    double meanFieldValue = 0.0;
    //! ln 2 + max_z [ln cosh(beta B + z) - z^2 / (2 beta J)].
    double landauValue = 0.0;
    double zStar = 0.0;
    double magnetization = 0.0;
};

//! Evaluates the free energy through the Gaussian-auxiliary-field form as an independent check.
LandauCheck curie_weiss_landau_check(const IsingParams& params);

} // namespace statmech::spin
