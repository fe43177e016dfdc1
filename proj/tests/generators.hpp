#pragma once

// Seeded random instances shared by the unit tests and the acceptance suite.

#include "statmech/dynamics.hpp"
#include "statmech/estimation.hpp"
#include "statmech/random.hpp"

#include <utility>
#include <vector>

namespace generators {

inline std::vector<double> random_distribution(statmech::Rng& rng, std::size_t n)
{
    std::vector<double> p(n);
    double total = 0.0;
    for (auto& x : p) {
        x = 0.05 + rng.uniform();
        total += x;
    }
    for (auto& x : p) {
        x /= total;
    }
    return p;
}

inline statmech::dynamics::ChainSpec random_rate_chain(statmech::Rng& rng, std::size_t n)
{
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
        for (Eigen::Index s = 0; s < w.cols(); ++s) {
            if (r != s) {
                w(r, s) = 0.1 + rng.uniform();
            }
        }
    }
    return statmech::dynamics::ChainSpec::from_matrix(statmech::dynamics::ChainMode::Continuous, w);
}

// Rates W_rs = pi_s S_rs with S symmetric are reversible with respect to pi.
inline statmech::dynamics::ChainSpec reversible_chain(statmech::Rng& rng, std::size_t n, std::vector<double>& pi)
{
    pi = random_distribution(rng, n);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = r + 1; s < n; ++s) {
            double sym = 0.2 + rng.uniform();
            w(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) = pi[s] * sym;
            w(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(r)) = pi[r] * sym;
        }
    }
    return statmech::dynamics::ChainSpec::from_matrix(statmech::dynamics::ChainMode::Continuous, w);
}

// Convex combination of permutation matrices.
inline statmech::dynamics::ChainSpec doubly_stochastic_chain(statmech::Rng& rng, std::size_t n)
{
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::vector<std::size_t> perm(n);
    double total = 0.0;
    for (int k = 0; k < 4; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            perm[i] = i;
        }
        for (std::size_t i = n; i-- > 1;) {
            std::swap(perm[i], perm[rng.below(i + 1)]);
        }
        double weight = 0.1 + rng.uniform();
        total += weight;
        for (std::size_t i = 0; i < n; ++i) {
            w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(perm[i])) += weight;
        }
    }
    w /= total;
    return statmech::dynamics::ChainSpec::from_matrix(statmech::dynamics::ChainMode::Discrete, w);
}

inline statmech::estimation::HmmSpec random_binary_hmm(statmech::Rng& rng)
{
    double a = 0.05 + 0.4 * rng.uniform();
    double b = 0.05 + 0.4 * rng.uniform();
    double e0 = 0.02 + 0.4 * rng.uniform();
    double e1 = 0.02 + 0.4 * rng.uniform();
    return statmech::estimation::HmmSpec::make(2, 2, {1.0 - a, a, b, 1.0 - b}, {1.0 - e0, e0, e1, 1.0 - e1});
}

} // namespace generators
