// dynamics, sample, estimate.

#include "cli/cli.hpp"

#include "statmech/dynamics.hpp"
#include "statmech/error.hpp"
#include "statmech/ensembles.hpp"
#include "statmech/estimation.hpp"
#include "statmech/mcmc.hpp"

#include <cmath>
#include <fstream>

namespace statmech::cli {

namespace {

std::string yes_no(bool v)
{
    return v ? "true" : "false";
}

struct DynamicsOptions
{
    std::string quantity = "trajectory";
    std::string chain;
    std::string model = "mm1";
    double arrival = 1.0;
    double service = 2.0;
    std::size_t states = 10;
    std::string initial;
    std::string times = "0:5:0.5";
};

void add_dynamics(CLI::App& root, Registry& registry)
{
    auto o = std::make_shared<DynamicsOptions>();
    auto* cmd = root.add_subcommand(
        "dynamics", "Markov chains and master equations: time evolution with second-law monitors, stationary "
                    "laws, detailed balance and the Kolmogorov cycle criterion.");
    cmd->add_option("--quantity", o->quantity, "trajectory | stationary | balance");
    cmd->add_option("--chain", o->chain, "JSON file {mode, states, matrix, stationary?}; overrides --model");
    cmd->add_option("--model", o->model, "mm1 (truncated M/M/1 queue)");
    cmd->add_option("--arrival", o->arrival, "M/M/1 arrival rate");
    cmd->add_option("--service", o->service, "M/M/1 service rate");
    cmd->add_option("--states", o->states, "M/M/1 truncation (number of states)")->check(CLI::Range(2, 100000));
    cmd->add_option("--initial", o->initial, "Comma-separated initial law (default: all mass on the first state)");
    cmd->add_option("--t", o->times, "Time sweep (integers in discrete mode)");
    registry.bind(cmd, [o](const RunContext&) {
        const auto q = choose(o->quantity, {"trajectory", "stationary", "balance"}, "--quantity");
        dynamics::ChainSpec chain;
        if (!o->chain.empty()) {
            chain = io::chain_from_json(io::read_json_file(o->chain));
        } else {
            choose(o->model, {"mm1"}, "--model");
            chain = dynamics::mm1_chain(o->arrival, o->service, o->states);
        }
        const auto stationary = chain.stationary ? *chain.stationary : dynamics::stationary_distribution(chain);
        Report r;
        r.extra["chain"] = io::to_json(chain);
        if (q == "stationary") {
            r.columns = {"state", "probability"};
            for (std::size_t i = 0; i < stationary.size(); ++i) {
                r.rows.push_back({chain.states[i], stationary[i]});
            }
            return r;
        }
        if (q == "balance") {
            auto balance = dynamics::detailed_balance_check(chain, stationary);
            r.columns = {"global_residual", "detailed_balance", "max_violation", "kolmogorov", "cycles_checked",
                         "worst_log_ratio"};
            std::vector<Cell> row{dynamics::global_balance_residual(chain, stationary), yes_no(balance.holds),
                                  balance.maxViolation};
            if (chain.size() <= 12) {
                auto cycles = dynamics::kolmogorov_cycle_check(chain, chain.size());
                row.insert(row.end(), {yes_no(cycles.holds), static_cast<double>(cycles.cyclesChecked),
                                       cycles.worstLogRatio});
            } else {
                row.insert(row.end(), {std::string(""), std::string(""), std::string("")});
            }
            r.rows.push_back(std::move(row));
            return r;
        }
        std::vector<double> initial(chain.size(), 0.0);
        if (o->initial.empty()) {
            initial.front() = 1.0;
        } else {
            initial = parse_list(o->initial);
        }
        auto traj = dynamics::evolve(chain, initial, parse_sweep(o->times));
        dynamics::Functional functional;
        functional.kind = dynamics::FunctionalKind::Divergence;
        auto divergence = dynamics::monotone_monitor(traj, functional, stationary);
        auto table = io::trajectory_table(traj);
        r.columns = table.header();
        r.columns.insert(r.columns.end(), {"entropy", "divergence"});
        for (std::size_t t = 0; t < traj.times.size(); ++t) {
            std::vector<Cell> row(table.rows()[t].begin(), table.rows()[t].end());
            row.emplace_back(dynamics::shannon_entropy(traj.distributions[t]));
            row.emplace_back(divergence.values[t]);
            r.rows.push_back(std::move(row));
        }
        r.extra["divergence_monotone"] = divergence.monotone;
        return r;
    });
}

struct SampleOptions
{
    std::string kernel = "metropolis";
    std::string model = "ising1d";
    std::size_t sites = 8;
    double beta = 1.0;
    double coupling = 1.0;
    double field = 0.0;
    double steps = 1e6;
    double burnIn = 0.1;
    std::uint64_t recordEvery = 0;
};

void add_sample(CLI::App& root, Registry& registry)
{
    auto o = std::make_shared<SampleOptions>();
    auto* cmd = root.add_subcommand(
        "sample", "Markov chain Monte Carlo with Metropolis or heat-bath (Glauber) single-site updates on the "
                  "Ising ring or the Curie-Weiss magnet, compared with exact enumeration for small systems.");
    cmd->add_option("--kernel", o->kernel, "metropolis | heat-bath");
    cmd->add_option("--model", o->model, "ising1d | cw");
    cmd->add_option("--n", o->sites, "Number of spins")->check(CLI::Range(1, 1000000));
    cmd->add_option("--beta", o->beta, "Inverse temperature");
    cmd->add_option("--J", o->coupling, "Coupling");
    cmd->add_option("--B", o->field, "Magnetic field");
    cmd->add_option("--steps", o->steps, "Number of single-site updates (e.g. 1e6)");
    cmd->add_option("--burn-in", o->burnIn, "Fraction of initial steps discarded");
    cmd->add_option("--record-every", o->recordEvery, "Emit every k-th state instead of the summary (0: summary)");
    registry.bind(cmd, [o](const RunContext& ctx) {
        if (!(o->steps >= 1.0) || o->steps != std::floor(o->steps) || o->steps > 1e13) {
            throw UsageError("--steps must be a positive integer");
        }
        mcmc::SamplerConfig config;
        config.kernel = mcmc::kernel_from_string(choose(o->kernel, {"metropolis", "heat-bath"}, "--kernel"));
        config.beta = o->beta;
        config.steps = static_cast<std::uint64_t>(o->steps);
        config.seed = ctx.seed;
        config.burnInFraction = o->burnIn;
        config.recordEvery = o->recordEvery;
        const auto model = choose(o->model, {"ising1d", "cw"}, "--model");
        auto target = model == "cw" ? mcmc::curie_weiss_target(o->sites, o->coupling, o->field)
                                    : mcmc::ising_ring_target(o->sites, o->coupling, o->field);
        auto run = mcmc::sample(config, target);
        if (o->recordEvery > 0) {
            auto table = io::sample_table(run.records);
            Report r{table.header(), {}, {}};
            for (const auto& row : table.rows()) {
                r.rows.emplace_back(row.begin(), row.end());
            }
            return r;
        }
        Report r{{"model", "kernel", "n", "beta", "steps", "acceptance", "energy", "energy_se", "magnetization",
                  "magnetization_se", "energy_exact", "magnetization_exact", "tv_distance"},
                 {},
                 {}};
        std::vector<Cell> row{model,
                              mcmc::to_string(config.kernel),
                              static_cast<double>(o->sites),
                              o->beta,
                              o->steps,
                              run.acceptanceRate,
                              run.energy.mean,
                              run.energy.standardError,
                              run.magnetization.mean,
                              run.magnetization.standardError};
        if (o->sites <= 16 && !run.empirical.empty()) {
            auto system = target.enumerate();
            auto pi = ensembles::canonical_distribution(system, o->beta);
            double energy = 0.0;
            double magnetization = 0.0;
            for (std::size_t i = 0; i < pi.size(); ++i) {
                energy += pi[i] * system.energies[i];
                magnetization += pi[i] * target.magnetization_of(target.configuration(i));
            }
            row.insert(row.end(), {energy, magnetization, mcmc::total_variation(run.empirical, pi)});
        } else {
            row.insert(row.end(), {std::string(""), std::string(""), std::string("")});
        }
        r.rows.push_back(std::move(row));
        return r;
    });
}

struct EstimateOptions
{
    std::string quantity = "fisher";
    std::string density = "gaussian";
    std::string file;
    double mean = 0.0;
    double variance = 1.0;
    double scale = 1.0;
    std::size_t points = 4001;
    double alpha = 1.0;
    std::string perturbation = "gaussian";
    std::string deltas = "0.01,0.005,0.0025";
    std::string hmm;
    double flip = 0.1;
    double noise = 0.2;
    std::size_t starts = 5;
};

estimation::GriddedDensity load_density(const EstimateOptions& o)
{
    const auto kind = choose(o.density, {"gaussian", "laplace", "file"}, "--density");
    if (kind == "file") {
        std::ifstream in(o.file);
        if (!in) {
            throw statmech::Error("cannot open '" + o.file + "'");
        }
        auto density = io::density_from_table(io::CsvTable::read(in));
        density.validate();
        return density;
    }
    if (kind == "laplace") {
        return estimation::laplace_density(o.scale, std::max<std::size_t>(o.points, 3));
    }
    return estimation::gaussian_density(o.mean, o.variance, std::max<std::size_t>(o.points, 3));
}

void add_estimate(CLI::App& root, Registry& registry)
{
    auto o = std::make_shared<EstimateOptions>();
    auto* cmd = root.add_subcommand(
        "estimate", "Information measures from estimation theory: Fisher information and the Fisher-information "
                    "temperature of a density, the small-noise entropy derivative, and an upper bound on the "
                    "entropy rate of a hidden Markov process.");
    cmd->add_option("--quantity", o->quantity, "fisher | debruijn | hmm");
    cmd->add_option("--density", o->density, "gaussian | laplace | file");
    cmd->add_option("--file", o->file, "CSV density with columns x,q on a uniform grid");
    cmd->add_option("--mean", o->mean, "Gaussian mean");
    cmd->add_option("--var", o->variance, "Gaussian variance");
    cmd->add_option("--scale", o->scale, "Laplace scale");
    cmd->add_option("--points", o->points, "Grid points of built-in densities");
    cmd->add_option("--alpha", o->alpha, "Coefficient of the quadratic energy alpha x^2 / 2 (temperature)");
    cmd->add_option("--perturbation", o->perturbation, "gaussian | uniform | triangular");
    cmd->add_option("--deltas", o->deltas, "Comma-separated noise variances for the slope extrapolation");
    cmd->add_option("--hmm", o->hmm, "JSON file {transition, emission, stationary?}; overrides --flip/--noise");
    cmd->add_option("--flip", o->flip, "Binary symmetric HMM: state flip probability");
    cmd->add_option("--noise", o->noise, "Binary symmetric HMM: observation noise");
    cmd->add_option("--starts", o->starts, "Random restarts of the bound optimization");
    registry.bind(cmd, [o](const RunContext& ctx) {
        const auto q = choose(o->quantity, {"fisher", "debruijn", "hmm"}, "--quantity");
        if (q == "hmm") {
            auto hmm = o->hmm.empty() ? estimation::HmmSpec::binary_symmetric(o->flip, o->noise)
                                      : io::hmm_from_json(io::read_json_file(o->hmm));
            estimation::HmmBoundSettings settings;
            settings.randomStarts = o->starts;
            settings.seed = ctx.seed;
            auto bound = estimation::hmm_entropy_upper_bound(hmm, settings);
            Report r{{"bound", "converged", "iterations"}, {}, {}};
            r.rows.push_back({bound.bound, yes_no(bound.converged), static_cast<double>(bound.iterations)});
            r.extra["hmm"] = io::to_json(hmm);
            return r;
        }
        auto density = load_density(*o);
        if (q == "fisher") {
            Report r{{"fisher", "entropy", "temperature"}, {}, {}};
            r.rows.push_back({estimation::fisher_information(density), estimation::differential_entropy(density),
                              estimation::generalized_temperature(density, o->alpha)});
            return r;
        }
        const auto kind = choose(o->perturbation, {"gaussian", "uniform", "triangular"}, "--perturbation");
        auto pert = kind == "uniform"      ? estimation::Perturbation::uniform()
                    : kind == "triangular" ? estimation::Perturbation::triangular()
                                           : estimation::Perturbation::gaussian();
        auto result = estimation::de_bruijn_check(density, pert, parse_list(o->deltas));
        Report r{{"slope", "half_fisher", "difference", "base_entropy"}, {}, {}};
        r.rows.push_back({result.slope, result.halfFisher, result.slope - result.halfFisher, result.baseEntropy});
        return r;
    });
}

} // namespace

void add_dynamics_commands(CLI::App& root, Registry& registry)
{
    add_dynamics(root, registry);
    add_sample(root, registry);
    add_estimate(root, registry);
}

} // namespace statmech::cli
