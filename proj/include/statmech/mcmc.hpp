#pragma once

// Metropolis and heat-bath samplers for Boltzmann-Gibbs distributions on
// small configuration spaces, with exact kernels for verification.

#include "statmech/ensembles.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace statmech::mcmc {

enum class Kernel
{
    Metropolis,
    HeatBath
};

std::string to_string(Kernel kernel);
Kernel kernel_from_string(const std::string& text);

struct SamplerConfig
{
    double beta = 1.0;
    std::uint64_t steps = 1'000'000;
    std::uint64_t seed = 1729;
    Kernel kernel = Kernel::Metropolis;
    //! Fraction of the initial steps left out of every statistic.
    double burnInFraction = 0.1;
    //! Keep every k-th state in SampleRun::records; 0 keeps none.
    std::uint64_t recordEvery = 0;

    void validate() const;
};

using Configuration = std::vector<int>;

//! Energy on a product space {0, ..., alphabet-1}^sites.
struct ProductTarget
{
    std::size_t sites = 0;
    int alphabet = 2;
    std::function<double(const Configuration&)> energy;
    //! Optional observable reported as magnetization; defaults to the mean of 2c - 1 for binary sites.
    std::function<double(const Configuration&)> magnetization;

    void validate() const;
    //! alphabet^sites.
    [[nodiscard]] std::size_t state_count() const;
    //! Little-endian base-alphabet index of a configuration.
    [[nodiscard]] std::size_t index(const Configuration& c) const;
    [[nodiscard]] Configuration configuration(std::size_t index) const;
    [[nodiscard]] double magnetization_of(const Configuration& c) const;
    //! Every configuration as a level of a discrete system (enumerable spaces only).
    [[nodiscard]] ensembles::DiscreteSystem enumerate() const;
};

//! Ring of n binary spins: -coupling sum s_i s_{i+1} - field sum s_i with s = 2c - 1.
ProductTarget ising_ring_target(std::size_t sites, double coupling, double field);

//! Mean-field model: -(coupling / 2n) (sum s_i)^2 - field sum s_i.
ProductTarget curie_weiss_target(std::size_t sites, double coupling, double field);

struct SampleRecord
{
    std::uint64_t step = 0;
    std::size_t state = 0;
    double energy = 0.0;
    double magnetization = 0.0;
};

//! Mean with a batch-means standard error.
struct Estimate
{
    double mean = 0.0;
    double standardError = 0.0;
};

struct SampleRun
{
    //! Visit frequencies after burn-in, indexed by state.
    std::vector<double> empirical;
    double acceptanceRate = 0.0;
    Estimate energy;
    Estimate magnetization;
    std::vector<SampleRecord> records;
};

//! Uniform single-site proposal to a different letter, accepted with min(1, e^{-beta dE}).
SampleRun metropolis_run(const SamplerConfig& config, const ProductTarget& target);

//! Levels of a discrete system with a uniform proposal among the other levels;
//! degeneracies enter the acceptance ratio.
SampleRun metropolis_run(const SamplerConfig& config, const ensembles::DiscreteSystem& system);

//! Uniform site choice followed by exact resampling from its conditional law.
SampleRun heat_bath_run(const SamplerConfig& config, const ProductTarget& target);

//! Dispatches on config.kernel.
SampleRun sample(const SamplerConfig& config, const ProductTarget& target);

//! min(1, e^{-beta dE}).
double metropolis_acceptance(double energyChange, double beta);
//! (1 - tanh(beta dE / 2)) / 2 = e^{-beta dE} / (1 + e^{-beta dE}).
double heat_bath_acceptance(double energyChange, double beta);

//! Exact one-step transition matrix (row-major) of a kernel on an enumerable product space.
std::vector<double> transition_matrix(Kernel kernel, const ProductTarget& target, double beta);

//! max over connected pairs of |ln(W_rs / W_sr) + beta (E_s - E_r)|.
double log_ratio_residual(Kernel kernel, const ProductTarget& target, double beta);

double total_variation(const std::vector<double>& p, const std::vector<double>& q);

} // namespace statmech::mcmc
