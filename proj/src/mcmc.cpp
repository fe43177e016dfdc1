#include "statmech/mcmc.hpp"

#include "statmech/error.hpp"
#include "statmech/numerics.hpp"
#include "statmech/random.hpp"

#include <algorithm>
#include <cmath>

namespace statmech::mcmc {

namespace {

constexpr std::size_t kMaxEnumerable = std::size_t{1} << 20;
constexpr std::size_t kBatches = 100;

// Collects the post-burn-in statistics shared by every sampler.
class RunStatistics
{
public:
    RunStatistics(const SamplerConfig& config, std::size_t states)
        : m_Config(config),
          m_Burn(static_cast<std::uint64_t>(std::floor(config.burnInFraction * static_cast<double>(config.steps)))),
          m_Counts(states <= kMaxEnumerable ? states : 0, 0.0)
    {
        std::uint64_t kept = config.steps - m_Burn;
        m_BatchSize = std::max<std::uint64_t>(1, kept / kBatches);
    }

    void observe(std::uint64_t step, std::size_t state, double energy, double magnetization, bool moved)
    {
        if (moved) {
            ++m_Moves;
        }
        if (m_Config.recordEvery > 0 && step % m_Config.recordEvery == 0) {
            m_Run.records.push_back({step, state, energy, magnetization});
        }
        if (step <= m_Burn) {
            return;
        }
        if (!m_Counts.empty()) {
            m_Counts[state] += 1.0;
        }
        m_EnergySum += energy;
        m_MagSum += magnetization;
        if (++m_InBatch == m_BatchSize) {
            m_EnergyBatches.push_back(m_EnergySum / static_cast<double>(m_BatchSize));
            m_MagBatches.push_back(m_MagSum / static_cast<double>(m_BatchSize));
            m_EnergySum = m_MagSum = 0.0;
            m_InBatch = 0;
        }
    }

    SampleRun finish()
    {
        double kept = 0.0;
        for (double c : m_Counts) {
            kept += c;
        }
        for (double& c : m_Counts) {
            c /= kept;
        }
        m_Run.empirical = std::move(m_Counts);
        m_Run.acceptanceRate = static_cast<double>(m_Moves) / static_cast<double>(m_Config.steps);
        m_Run.energy = batch_estimate(m_EnergyBatches);
        m_Run.magnetization = batch_estimate(m_MagBatches);
        return std::move(m_Run);
    }

private:
    static Estimate batch_estimate(const std::vector<double>& batches)
    {
        Estimate e;
        if (batches.empty()) {
            return e;
        }
        const auto b = static_cast<double>(batches.size());
        for (double x : batches) {
            e.mean += x / b;
        }
        if (batches.size() > 1) {
            double ss = 0.0;
            for (double x : batches) {
                ss += (x - e.mean) * (x - e.mean);
            }
            e.standardError = std::sqrt(ss / (b - 1.0) / b);
        }
        return e;
    }

    const SamplerConfig& m_Config;
    std::uint64_t m_Burn;
    std::uint64_t m_BatchSize = 1;
    std::uint64_t m_InBatch = 0;
    std::uint64_t m_Moves = 0;
    std::vector<double> m_Counts;
    double m_EnergySum = 0.0;
    double m_MagSum = 0.0;
    std::vector<double> m_EnergyBatches;
    std::vector<double> m_MagBatches;
    SampleRun m_Run;
};

Configuration random_configuration(const ProductTarget& target, Rng& rng)
{
    Configuration c(target.sites);
    for (auto& x : c) {
        x = static_cast<int>(rng.below(static_cast<std::uint64_t>(target.alphabet)));
    }
    return c;
}

// Conditional law of one site given the rest, as probabilities over the alphabet.
std::vector<double> site_conditional(const ProductTarget& target, Configuration& c, std::size_t site, double beta,
                                     std::vector<double>& energies)
{
    const int keep = c[site];
    energies.resize(static_cast<std::size_t>(target.alphabet));
    std::vector<double> logw(energies.size());
    for (int a = 0; a < target.alphabet; ++a) {
        c[site] = a;
        energies[static_cast<std::size_t>(a)] = target.energy(c);
        logw[static_cast<std::size_t>(a)] = -beta * energies[static_cast<std::size_t>(a)];
    }
    c[site] = keep;
    double lse = numerics::log_sum_exp(logw);
    for (auto& w : logw) {
        w = std::exp(w - lse);
    }
    return logw;
}

std::size_t state_count_checked(const ProductTarget& target)
{
    const std::size_t count = target.state_count();
    if (count > 4096) {
        throw SizeError("transition_matrix: dense kernels are limited to 4096 configurations");
    }
    return count;
}

} // namespace

std::string to_string(Kernel kernel)
{
    return kernel == Kernel::Metropolis ? "metropolis" : "heat-bath";
}

Kernel kernel_from_string(const std::string& text)
{
    if (text == "metropolis") {
        return Kernel::Metropolis;
    }
    if (text == "heat-bath" || text == "heatbath") {
        return Kernel::HeatBath;
    }
    throw DomainError("unknown kernel '" + text + "' (expected metropolis or heat-bath)");
}

void SamplerConfig::validate() const
{
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw DomainError("SamplerConfig: beta must be finite and non-negative");
    }
    if (steps < 1) {
        throw DomainError("SamplerConfig: at least one step is required");
    }
    if (!(burnInFraction >= 0.0 && burnInFraction < 1.0)) {
        throw DomainError("SamplerConfig: burn-in fraction must lie in [0, 1)");
    }
}

void ProductTarget::validate() const
{
    if (sites == 0 || alphabet < 2) {
        throw ShapeError("ProductTarget: need at least one site and two letters");
    }
    if (!energy) {
        throw DomainError("ProductTarget: energy function missing");
    }
}

std::size_t ProductTarget::state_count() const
{
    std::size_t count = 1;
    for (std::size_t i = 0; i < sites; ++i) {
        if (count > kMaxEnumerable) {
            return kMaxEnumerable + 1;
        }
        count *= static_cast<std::size_t>(alphabet);
    }
    return count;
}

std::size_t ProductTarget::index(const Configuration& c) const
{
    std::size_t idx = 0;
    for (std::size_t i = sites; i-- > 0;) {
        idx = idx * static_cast<std::size_t>(alphabet) + static_cast<std::size_t>(c[i]);
    }
    return idx;
}

Configuration ProductTarget::configuration(std::size_t idx) const
{
    Configuration c(sites);
    for (std::size_t i = 0; i < sites; ++i) {
        c[i] = static_cast<int>(idx % static_cast<std::size_t>(alphabet));
        idx /= static_cast<std::size_t>(alphabet);
    }
    return c;
}

double ProductTarget::magnetization_of(const Configuration& c) const
{
    if (magnetization) {
        return magnetization(c);
    }
    if (alphabet != 2) {
        return 0.0;
    }
    double m = 0.0;
    for (int x : c) {
        m += 2.0 * x - 1.0;
    }
    return m / static_cast<double>(c.size());
}

ensembles::DiscreteSystem ProductTarget::enumerate() const
{
    validate();
    const std::size_t count = state_count();
    if (count > kMaxEnumerable) {
        throw SizeError("ProductTarget::enumerate: more than 2^20 configurations");
    }
    ensembles::DiscreteSystem system;
    system.energies.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        system.energies.push_back(energy(configuration(i)));
    }
    system.label = "enumerated product space";
    return system;
}

ProductTarget ising_ring_target(std::size_t sites, double coupling, double field)
{
    ProductTarget t;
    t.sites = sites;
    t.energy = [sites, coupling, field](const Configuration& c) {
        double e = 0.0;
        for (std::size_t i = 0; i < sites; ++i) {
            double s = 2.0 * c[i] - 1.0;
            double next = 2.0 * c[(i + 1) % sites] - 1.0;
            e -= field * s;
            if (sites > 2 || i == 0) {
                e -= coupling * s * next;
            }
        }
        return e;
    };
    return t;
}

ProductTarget curie_weiss_target(std::size_t sites, double coupling, double field)
{
    ProductTarget t;
    t.sites = sites;
    t.energy = [sites, coupling, field](const Configuration& c) {
        double total = 0.0;
        for (int x : c) {
            total += 2.0 * x - 1.0;
        }
        return -coupling / (2.0 * static_cast<double>(sites)) * total * total - field * total;
    };
    return t;
}

double metropolis_acceptance(double energyChange, double beta)
{
    return energyChange <= 0.0 ? 1.0 : std::exp(-beta * energyChange);
}

double heat_bath_acceptance(double energyChange, double beta)
{
    return 0.5 * (1.0 - std::tanh(0.5 * beta * energyChange));
}

SampleRun metropolis_run(const SamplerConfig& config, const ProductTarget& target)
{
    config.validate();
    target.validate();
    Rng rng(config.seed);
    RunStatistics stats(config, target.state_count());
    Configuration c = random_configuration(target, rng);
    double energy = target.energy(c);
    const auto others = static_cast<std::uint64_t>(target.alphabet - 1);
    for (std::uint64_t step = 1; step <= config.steps; ++step) {
        auto site = static_cast<std::size_t>(rng.below(target.sites));
        const int old = c[site];
        int proposal = static_cast<int>(rng.below(others));
        if (proposal >= old) {
            ++proposal;
        }
        c[site] = proposal;
        double candidate = target.energy(c);
        double delta = candidate - energy;
        bool accept = delta <= 0.0 || rng.uniform() < std::exp(-config.beta * delta);
        if (accept) {
            energy = candidate;
        } else {
            c[site] = old;
        }
        stats.observe(step, target.index(c), energy, target.magnetization_of(c), accept);
    }
    return stats.finish();
}

SampleRun metropolis_run(const SamplerConfig& config, const ensembles::DiscreteSystem& system)
{
    config.validate();
    system.validate();
    const std::size_t n = system.size();
    if (n < 2) {
        throw SizeError("metropolis_run: a single level leaves nothing to sample");
    }
    Rng rng(config.seed);
    RunStatistics stats(config, n);
    auto state = static_cast<std::size_t>(rng.below(n));
    for (std::uint64_t step = 1; step <= config.steps; ++step) {
        auto proposal = static_cast<std::size_t>(rng.below(n - 1));
        if (proposal >= state) {
            ++proposal;
        }
        double logRatio = std::log(system.degeneracy(proposal) / system.degeneracy(state)) -
                          config.beta * (system.energies[proposal] - system.energies[state]);
        bool accept = logRatio >= 0.0 || rng.uniform() < std::exp(logRatio);
        if (accept) {
            state = proposal;
        }
        stats.observe(step, state, system.energies[state], 0.0, accept);
    }
    return stats.finish();
}

SampleRun heat_bath_run(const SamplerConfig& config, const ProductTarget& target)
{
    config.validate();
    target.validate();
    Rng rng(config.seed);
    RunStatistics stats(config, target.state_count());
    Configuration c = random_configuration(target, rng);
    std::vector<double> energies;
    double energy = target.energy(c);
    for (std::uint64_t step = 1; step <= config.steps; ++step) {
        auto site = static_cast<std::size_t>(rng.below(target.sites));
        auto probs = site_conditional(target, c, site, config.beta, energies);
        double u = rng.uniform();
        std::size_t letter = 0;
        for (double acc = probs[0]; letter + 1 < probs.size() && u >= acc; acc += probs[++letter]) {
        }
        bool moved = static_cast<int>(letter) != c[site];
        c[site] = static_cast<int>(letter);
        energy = energies[letter];
        stats.observe(step, target.index(c), energy, target.magnetization_of(c), moved);
    }
    return stats.finish();
}

SampleRun sample(const SamplerConfig& config, const ProductTarget& target)
{
    return config.kernel == Kernel::Metropolis ? metropolis_run(config, target) : heat_bath_run(config, target);
}

std::vector<double> transition_matrix(Kernel kernel, const ProductTarget& target, double beta)
{
    target.validate();
    const std::size_t count = state_count_checked(target);
    std::vector<double> w(count * count, 0.0);
    const double siteWeight = 1.0 / static_cast<double>(target.sites);
    std::vector<double> energies;
    for (std::size_t r = 0; r < count; ++r) {
        Configuration c = target.configuration(r);
        for (std::size_t site = 0; site < target.sites; ++site) {
            auto probs = site_conditional(target, c, site, beta, energies);
            const int current = c[site];
            for (int a = 0; a < target.alphabet; ++a) {
                if (a == current) {
                    continue;
                }
                Configuration next = c;
                next[site] = a;
                std::size_t s = target.index(next);
                double move = kernel == Kernel::Metropolis
                                  ? metropolis_acceptance(energies[static_cast<std::size_t>(a)] -
                                                              energies[static_cast<std::size_t>(current)],
                                                          beta) /
                                        static_cast<double>(target.alphabet - 1)
                                  : probs[static_cast<std::size_t>(a)];
                w[r * count + s] += siteWeight * move;
            }
        }
        double out = 0.0;
        for (std::size_t s = 0; s < count; ++s) {
            if (s != r) {
                out += w[r * count + s];
            }
        }
        w[r * count + r] = 1.0 - out;
    }
    return w;
}

double log_ratio_residual(Kernel kernel, const ProductTarget& target, double beta)
{
    auto w = transition_matrix(kernel, target, beta);
    auto system = target.enumerate();
    const std::size_t count = system.size();
    double worst = 0.0;
    for (std::size_t r = 0; r < count; ++r) {
        for (std::size_t s = r + 1; s < count; ++s) {
            double forward = w[r * count + s];
            double backward = w[s * count + r];
            if (forward == 0.0 && backward == 0.0) {
                continue;
            }
            if (forward == 0.0 || backward == 0.0) {
                return numerics::kInf;
            }
            double gap = std::log(forward) - std::log(backward) + beta * (system.energies[s] - system.energies[r]);
            worst = std::max(worst, std::abs(gap));
        }
    }
    return worst;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q)
{
    if (p.size() != q.size()) {
        throw ShapeError("total_variation: distributions differ in size");
    }
    double tv = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        tv += std::abs(p[i] - q[i]);
    }
    return 0.5 * tv;
}

} // namespace statmech::mcmc
