#pragma once

// Finite Markov chains: master-equation evolution, stationary distributions,
// balance checks and functionals that are monotone along the dynamics.

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace statmech::dynamics {

enum class ChainMode
{
    //! matrix holds a stochastic matrix W with rows summing to one.
    Discrete,
    //! matrix holds transition rates W_rs for r != s; the diagonal is ignored.
    Continuous
};

std::string to_string(ChainMode mode);
ChainMode chain_mode_from_string(const std::string& text);

struct ChainSpec
{
    ChainMode mode = ChainMode::Continuous;
    std::vector<std::string> states;
    Eigen::MatrixXd matrix;
    std::optional<std::vector<double>> stationary;

    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(matrix.rows()); }
    //! Throws ShapeError, DomainError or NormalizationError.
    void validate() const;
    //! Off-diagonal transition weight r -> s (a probability or a rate).
    [[nodiscard]] double weight(std::size_t r, std::size_t s) const
    {
        return matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s));
    }
    //! Q with dP/dt = P Q (continuous) or W - I (discrete).
    [[nodiscard]] Eigen::MatrixXd generator() const;
    //! Transition probabilities over a time span (integer steps in discrete mode).
    [[nodiscard]] Eigen::MatrixXd propagator(double time) const;

    //! States labelled 0..n-1.
    static ChainSpec from_matrix(ChainMode mode, Eigen::MatrixXd matrix);
};

//! M/M/1 queue truncated to `states` levels with a reflecting top: rate lambda up, mu down.
ChainSpec mm1_chain(double arrival, double service, std::size_t states);

//! Geometric law (1 - rho) rho^r renormalized to the truncated support.
std::vector<double> mm1_geometric(double arrival, double service, std::size_t states);

struct Trajectory
{
    std::vector<double> times;
    std::vector<std::vector<double>> distributions;
};

//! Solves the master equation (continuous) or iterates P W (discrete) and records
//! the distribution at each requested time. Times must be non-decreasing and
//! non-negative; discrete mode requires integer times.
Trajectory evolve(const ChainSpec& chain, const std::vector<double>& initial, const std::vector<double>& times);

//! Solves P Q = 0 with sum P = 1.
std::vector<double> stationary_distribution(const ChainSpec& chain);

//! max_r |sum_s (P_s W_sr - P_r W_rs)|.
double global_balance_residual(const ChainSpec& chain, const std::vector<double>& distribution);

struct BalanceCheck
{
    bool holds = false;
    double maxViolation = 0.0;
};

//! max over pairs of |P_s W_sr - P_r W_rs|; holds when below 1e-10.
BalanceCheck detailed_balance_check(const ChainSpec& chain, const std::vector<double>& distribution);

struct CycleCheck
{
    bool holds = true;
    //! The cycle with the largest |ln forward - ln backward|, as a state sequence.
    std::vector<std::size_t> worstCycle;
    double worstLogRatio = 0.0;
    std::size_t cyclesChecked = 0;
};

//! Kolmogorov criterion over every simple cycle of length 3..maxLength, plus
//! the requirement that W_rs > 0 exactly when W_sr > 0. At most 12 states.
CycleCheck kolmogorov_cycle_check(const ChainSpec& chain, std::size_t maxLength);

enum class FunctionalKind
{
    //! H(P(t)); non-decreasing when the stationary law is uniform.
    Entropy,
    //! D(P(t) || P); non-increasing.
    Divergence,
    //! D(P || P(t)); non-increasing.
    ReverseDivergence,
    //! sum_r P_r (P_r(t) / P_r)^s for 0 < s < 1; non-decreasing.
    SMoment,
    //! sum_r P_r V(P_r(t) / P_r) for a concave V; non-decreasing.
    Custom
};

struct Functional
{
    FunctionalKind kind = FunctionalKind::Divergence;
    double s = 0.5;
    std::function<double(double)> concave;

    [[nodiscard]] bool decreasing() const
    {
        return kind == FunctionalKind::Divergence || kind == FunctionalKind::ReverseDivergence;
    }
};

struct MonitorResult
{
    std::vector<double> times;
    std::vector<double> values;
    //! True when the values never move against the expected direction by more than the slack.
    bool monotone = true;
    double worstViolation = 0.0;
};

constexpr double kMonotoneSlack = 1e-9;

//! Evaluates the functional along a trajectory. Every kind except Entropy needs the
//! stationary distribution; Entropy rejects a non-uniform one.
MonitorResult monotone_monitor(const Trajectory& trajectory, const Functional& functional,
                               const std::optional<std::vector<double>>& stationary);

//! D(P(t) || P'(t)) for two initial laws driven by the same chain; non-increasing.
MonitorResult divergence_pair_monitor(const ChainSpec& chain, const std::vector<double>& first,
                                      const std::vector<double>& second, const std::vector<double>& times);

//! J(t) = sum P(x0, xt) V(P(x0) P(xt) / P(x0, xt)) from the exact joint law; non-decreasing.
MonitorResult ziv_zakai_monitor(const ChainSpec& chain, const std::vector<double>& initial,
                                const std::function<double(double)>& concave, const std::vector<double>& times);

double shannon_entropy(const std::vector<double>& p);
double relative_entropy(const std::vector<double>& p, const std::vector<double>& q);

} // namespace statmech::dynamics
