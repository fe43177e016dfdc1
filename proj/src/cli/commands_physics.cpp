// thermo, ising, cw, rem, grem.

#include "cli/cli.hpp"

#include "statmech/ensembles.hpp"
#include "statmech/rem.hpp"
#include "statmech/spin_models.hpp"

#include <cmath>

namespace statmech::cli {

using namespace spin;

namespace {

std::string to_string(CwPhase phase)
{
    return phase == CwPhase::Ordered ? "ordered" : "paramagnetic";
}

Report curve_report(const rem::PiecewisePhi& phi)
{
    Report r{{"beta_low", "beta_high", "phase", "constant", "linear", "quadratic"}, {}, {}};
    for (const auto& s : phi.segments) {
        r.rows.push_back({s.betaLow, s.betaHigh, rem::to_string(s.phase), s.constant, s.linear, s.quadratic});
    }
    r.extra["curve"] = io::to_json(phi);
    return r;
}

struct ThermoOptions
{
    std::string model = "levels";
    std::string energies = "0,1";
    std::string degeneracies;
    std::string system;
    std::string beta = "1";
    double amplitude = 1.0;
    double mass = 1.0;
    double kT = 1.0;
    double planck = 1.0;
    double theta = 2.0;
    double alpha = 1.0;
};

void add_thermo(CLI::App& root, Registry& registry)
{
    auto o = std::make_shared<ThermoOptions>();
    auto* cmd = root.add_subcommand(
        "thermo", "Canonical ensembles: partition function and thermodynamic quantities of discrete level schemes, "
                  "variational bounds for the quartic oscillator, and equipartition for power-law energies.");
    cmd->add_option("--model", o->model, "levels | oscillator | equipartition");
    cmd->add_option("--energies", o->energies, "Comma-separated energy levels");
    cmd->add_option("--degeneracies", o->degeneracies, "Comma-separated degeneracies (default all 1)");
    cmd->add_option("--system", o->system, "JSON file {label, energies, degeneracies}; overrides --energies");
    cmd->add_option("--beta", o->beta, "Inverse temperature sweep");
    cmd->add_option("--amplitude", o->amplitude, "Oscillator: coefficient A of A z^4");
    cmd->add_option("--mass", o->mass, "Oscillator: mass");
    cmd->add_option("--kT", o->kT, "Oscillator: temperature");
    cmd->add_option("--planck", o->planck, "Oscillator: Planck constant");
    cmd->add_option("--theta", o->theta, "Equipartition: exponent of alpha |x|^theta");
    cmd->add_option("--alpha", o->alpha, "Equipartition: coefficient");
    registry.bind(cmd, [o](const RunContext& ctx) {
        const auto model = choose(o->model, {"levels", "oscillator", "equipartition"}, "--model");
        if (model == "oscillator") {
            ensembles::OscillatorProblem problem{o->amplitude, o->mass, o->kT, o->planck};
            Report r{{"trial", "lower_bound", "exact", "ratio", "parameter"}, {}, {}};
            for (auto [trial, name] : {std::pair{ensembles::OscillatorTrial::SquareWell, "square-well"},
                                       std::pair{ensembles::OscillatorTrial::Harmonic, "harmonic"}}) {
                auto b = ensembles::variational_bound_oscillator(problem, trial);
                r.rows.push_back({std::string(name), b.lowerBound, b.exact, b.ratio, b.optimalParameter});
            }
            return r;
        }
        const auto betas = parse_sweep(o->beta);
        if (model == "equipartition") {
            Report r{{"beta", "mean_energy", "target", "mean_virial", "virial_target"}, {}, {}};
            auto rows = parallel_map(betas.size(), ctx.jobs, [&](std::size_t i) {
                auto e = ensembles::equipartition(o->theta, o->alpha, betas[i]);
                return std::vector<Cell>{betas[i], e.meanEnergy, e.target, e.meanVirial, e.virialTarget};
            });
            r.rows = std::move(rows);
            return r;
        }
        ensembles::DiscreteSystem system;
        if (!o->system.empty()) {
            system = io::discrete_system_from_json(io::read_json_file(o->system));
        } else {
            system.energies = parse_list(o->energies);
            if (!o->degeneracies.empty()) {
                system.degeneracies = parse_list(o->degeneracies);
            }
            system.validate();
        }
        Report r{{"beta", "log_z", "mean_energy", "var_energy", "entropy", "free_energy"}, {}, {}};
        for (double beta : betas) {
            auto t = ensembles::thermo_state(system, beta);
            r.rows.push_back({beta, t.logZ, t.meanEnergy, t.varEnergy, t.entropy, t.freeEnergy});
        }
        r.extra["system"] = io::to_json(system);
        return r;
    });
}

struct IsingOptions
{
    std::string beta = "1";
    std::string field = "0";
    double coupling = 1.0;
    int n = 0;
};

void add_ising(CLI::App& root, Registry& registry)
{
    auto o = std::make_shared<IsingOptions>();
    auto* cmd = root.add_subcommand("ising", "One-dimensional Ising ring: transfer-matrix free energy and "
                                             "magnetization, optionally checked against enumeration of n spins.");
    cmd->add_option("--beta", o->beta, "Inverse temperature sweep");
    cmd->add_option("--B", o->field, "Magnetic field sweep");
    cmd->add_option("--J", o->coupling, "Coupling");
    cmd->add_option("--n", o->n, "Ring size for finite-n columns (0: limit only; enumeration for n <= 20)")
        ->check(CLI::Range(0, 100000));
    registry.bind(cmd, [o](const RunContext& ctx) {
        auto grid = product(parse_sweep(o->beta), parse_sweep(o->field));
        std::vector<std::string> cols{"beta", "B", "phi", "magnetization"};
        if (o->n > 0) {
            cols.insert(cols.end(), {"log_z_transfer", "log_z_exact"});
        }
        Report r{cols, {}, {}};
        r.rows = parallel_map(grid.size(), ctx.jobs, [&](std::size_t i) {
            IsingParams p{grid[i].first, grid[i].second, o->coupling};
            std::vector<Cell> row{p.beta, p.field, ising1d_phi(p), ising1d_magnetization(p)};
            if (o->n > 0) {
                row.emplace_back(ising1d_transfer_log_z(o->n, p));
                row.emplace_back(o->n <= 20 ? Cell{ising1d_exact(o->n, p)} : Cell{std::string("")});
            }
            return row;
        });
        return r;
    });
}

struct CwOptions
{
    std::string beta = "1";
    std::string field = "0";
    double coupling = 1.0;
};

void add_cw(CLI::App& root, Registry& registry)
{
    auto o = std::make_shared<CwOptions>();
    auto* cmd = root.add_subcommand("cw", "Curie-Weiss mean-field magnet: self-consistent magnetization, "
                                          "free energy, phase, and the auxiliary-field cross-check.");
    cmd->add_option("--beta", o->beta, "Inverse temperature sweep");
    cmd->add_option("--B", o->field, "Magnetic field sweep");
    cmd->add_option("--J", o->coupling, "Coupling");
    registry.bind(cmd, [o](const RunContext& ctx) {
        auto grid = product(parse_sweep(o->beta), parse_sweep(o->field));
        Report r{{"beta", "B", "magnetization", "phi", "phase", "fixed_points", "landau_phi"}, {}, {}};
        r.rows = parallel_map(grid.size(), ctx.jobs, [&](std::size_t i) {
            IsingParams p{grid[i].first, grid[i].second, o->coupling};
            auto s = curie_weiss_solve(p);
            auto landau = curie_weiss_landau_check(p);
            return std::vector<Cell>{p.beta,
                                     p.field,
                                     s.magnetization,
                                     s.phi,
                                     to_string(s.phase),
                                     static_cast<double>(s.fixedPoints.size()),
                                     landau.landauValue};
        });
        return r;
    });
}

struct RemOptions
{
    std::string model = "plain";
    double coupling = 1.0;
    std::string beta = "0.5:4:0.5";
    std::string field = "0";
    std::string threshold = "0";
    std::string temperature = "0.5:2:0.25";
    int mcSize = 0;
    bool curve = false;
};

void add_rem(CLI::App& root, Registry& registry)
{
    auto o = std::make_shared<RemOptions>();
    auto* cmd = root.add_subcommand(
        "rem", "Random energy model: quenched free energy and glass transition, finite-size Monte Carlo, "
               "the model in a magnetic field, its susceptibility, and the spin-glass capacity of metastable states.");
    cmd->add_option("--model", o->model, "plain | field | sk | susceptibility");
    cmd->add_option("--J", o->coupling, "Energy scale");
    cmd->add_option("--beta", o->beta, "Inverse temperature sweep");
    cmd->add_option("--B", o->field, "Field sweep (model field)");
    cmd->add_option("--K", o->threshold, "Stability threshold sweep (model sk)");
    cmd->add_option("--T", o->temperature, "Temperature sweep (model susceptibility)");
    cmd->add_option("--mc-n", o->mcSize, "Add a Monte Carlo (ln Z)/n column for 2^n levels (model plain, n <= 24)")
        ->check(CLI::Range(0, 24));
    cmd->add_flag("--curve", o->curve, "Emit the piecewise free-energy curve instead (model plain)");
    registry.bind(cmd, [o](const RunContext& ctx) {
        const auto model = choose(o->model, {"plain", "field", "sk", "susceptibility"}, "--model");
        const double J = o->coupling;
        if (model == "sk") {
            auto ks = parse_sweep(o->threshold);
            Report r{{"K", "capacity", "t_star", "residual"}, {}, {}};
            r.rows = parallel_map(ks.size(), ctx.jobs, [&](std::size_t i) {
                auto c = rem::sk_capacity(ks[i], J);
                return std::vector<Cell>{ks[i], c.capacity, c.tStar, c.residual};
            });
            return r;
        }
        if (model == "susceptibility") {
            auto ts = parse_sweep(o->temperature);
            Report r{{"T", "chi"}, {}, {}};
            for (double t : ts) {
                r.rows.push_back({t, rem::rem_susceptibility(t, J)});
            }
            return r;
        }
        if (model == "field") {
            auto grid = product(parse_sweep(o->beta), parse_sweep(o->field));
            Report r{{"beta", "B", "magnetization", "phi", "phase", "beta_c"}, {}, {}};
            r.rows = parallel_map(grid.size(), ctx.jobs, [&](std::size_t i) {
                auto s = rem::rem_field_phi(grid[i].first, grid[i].second, J);
                return std::vector<Cell>{s.beta, s.field, s.magnetization, s.phi, rem::to_string(s.phase),
                                         s.criticalBeta};
            });
            return r;
        }
        if (o->curve) {
            return curve_report(rem::rem_phi_curve(J));
        }
        auto betas = parse_sweep(o->beta);
        std::vector<std::string> cols{"beta", "phi", "phase", "annealed_phi"};
        if (o->mcSize > 0) {
            cols.emplace_back("mc_phi");
        }
        Report r{cols, {}, {}};
        r.rows = parallel_map(betas.size(), ctx.jobs, [&](std::size_t i) {
            auto v = rem::rem_phi(betas[i], J);
            std::vector<Cell> row{betas[i], v.value, rem::to_string(v.phase), rem::rem_annealed_phi(betas[i], J)};
            if (o->mcSize > 0) {
                // One energy draw per row, seeded by row index so the table does not depend on --jobs.
                row.emplace_back(rem::rem_monte_carlo(o->mcSize, J, betas[i], ctx.seed + i));
            }
            return row;
        });
        return r;
    });
}

struct GremOptions
{
    double coupling = 1.0;
    double firstRate = 0.5 * std::log(2.0);
    double firstShare = 0.5;
    std::string beta = "0.5:4:0.5";
    bool curve = false;
};

void add_grem(CLI::App& root, Registry& registry)
{
    auto o = std::make_shared<GremOptions>();
    auto* cmd = root.add_subcommand("grem", "Two-level generalized random energy model: free energy, "
                                            "phases and freezing transitions of the tree.");
    cmd->add_option("--J", o->coupling, "Energy scale");
    cmd->add_option("--R1", o->firstRate, "Rate of the first level (the second gets ln 2 - R1)");
    cmd->add_option("--share", o->firstShare, "Energy-variance share of the first level");
    cmd->add_option("--beta", o->beta, "Inverse temperature sweep");
    cmd->add_flag("--curve", o->curve, "Emit the piecewise free-energy curve instead");
    registry.bind(cmd, [o](const RunContext&) {
        rem::GremParams params{o->coupling, o->firstRate, o->firstShare};
        params.validate();
        if (o->curve) {
            return curve_report(rem::grem_phi_curve(params));
        }
        Report r{{"beta", "phi", "phase"}, {}, {}};
        for (double beta : parse_sweep(o->beta)) {
            auto v = rem::grem_phi(beta, params);
            r.rows.push_back({beta, v.value, rem::to_string(v.phase)});
        }
        return r;
    });
}

} // namespace

void add_physics_commands(CLI::App& root, Registry& registry)
{
    add_thermo(root, registry);
    add_ising(root, registry);
    add_cw(root, registry);
    add_rem(root, registry);
    add_grem(root, registry);
}

} // namespace statmech::cli
