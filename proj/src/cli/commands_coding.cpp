// coding, rd, jscc, table1, phase-diagram.

#include "cli/cli.hpp"

#include "statmech/asymptotics.hpp"
#include "statmech/coding.hpp"
#include "statmech/rate_distortion.hpp"
#include "statmech/rem.hpp"

#include <cmath>

namespace statmech::cli {

namespace {

struct CodingOptions
{
    std::string quantity = "phase";
    double crossover = 0.1;
    std::string rate = "0.1:0.6:0.1";
    std::string beta = "1";
    std::string s = "0:2:0.25";
    double firstRate = 0.2;
    double secondRate = 0.4;
    double lambda = 0.5;
};

void add_coding(CLI::App& root, Registry& registry)
{
    auto o = std::make_shared<CodingOptions>();
    auto* cmd = root.add_subcommand(
        "coding", "Random-code ensembles over the binary symmetric channel: decoder free energy and phases, "
                  "correct-decoding exponent above capacity, and distortion exponents of hierarchical codes.");
    cmd->add_option("--quantity", o->quantity, "phase | free-energy | boundaries | pc | hierarchical | two-stage");
    cmd->add_option("--p", o->crossover, "Crossover probability");
    cmd->add_option("--R", o->rate, "Rate sweep (nats)");
    cmd->add_option("--beta", o->beta, "Decoder inverse temperature sweep");
    cmd->add_option("--s", o->s, "Argument sweep of the distortion exponent");
    cmd->add_option("--R1", o->firstRate, "Two-stage: first-stage rate");
    cmd->add_option("--R2", o->secondRate, "Two-stage: second-stage rate");
    cmd->add_option("--lambda", o->lambda, "Two-stage: length fraction of the first stage");
    registry.bind(cmd, [o](const RunContext& ctx) {
        const auto q = choose(o->quantity, {"phase", "free-energy", "boundaries", "pc", "hierarchical", "two-stage"},
                              "--quantity");
        const double p = o->crossover;
        if (q == "two-stage") {
            Report r{{"s", "rate", "value", "valid", "valid_up_to"}, {}, {}};
            for (double s : parse_sweep(o->s)) {
                auto e = coding::hierarchical_two_stage(s, o->firstRate, o->secondRate, o->lambda);
                r.rows.push_back({s, e.rate, e.value, std::string(e.valid ? "true" : "false"),
                                  e.validUpTo ? Cell{*e.validUpTo} : Cell{std::string("")}});
            }
            return r;
        }
        const auto rates = parse_sweep(o->rate);
        if (q == "boundaries") {
            Report r{{"R", "para_glassy_beta", "ferro_beta"}, {}, {}};
            for (double rate : rates) {
                auto b = coding::decoder_boundaries(rate, p);
                r.rows.push_back({rate, b.paraGlassyBeta,
                                  b.ferromagneticBeta ? Cell{*b.ferromagneticBeta} : Cell{std::string("")}});
            }
            return r;
        }
        if (q == "pc") {
            Report r{{"R", "delta_gv", "exponent"}, {}, {}};
            for (double rate : rates) {
                r.rows.push_back({rate, asymptotics::gv_distance(rate), coding::pc_exponent(rate, p)});
            }
            return r;
        }
        if (q == "hierarchical") {
            auto grid = product(parse_sweep(o->s), rates);
            Report r{{"s", "R", "u"}, {}, {}};
            for (auto [s, rate] : grid) {
                r.rows.push_back({s, rate, coding::hierarchical_u(s, rate)});
            }
            return r;
        }
        auto grid = product(parse_sweep(o->beta), rates);
        if (q == "free-energy") {
            Report r{{"beta", "R", "phi", "phase"}, {}, {}};
            for (auto [beta, rate] : grid) {
                auto v = coding::ze_phi(beta, rate, p);
                r.rows.push_back({beta, rate, v.value, coding::to_string(v.phase)});
            }
            return r;
        }
        Report r{{"beta", "R", "phase", "dominant", "ferromagnetic", "random"}, {}, {}};
        r.rows = parallel_map(grid.size(), ctx.jobs, [&](std::size_t i) {
            auto pt = coding::decoder_phase(grid[i].first, grid[i].second, p);
            return std::vector<Cell>{pt.beta, pt.rate, coding::to_string(pt.phase), pt.dominantExponent,
                                     pt.ferromagneticExponent, pt.randomExponent};
        });
        return r;
    });
}

struct RdOptions
{
    std::string quantity = "curve";
    std::string problem;
    std::string distortion = "0:0.5:0.05";
    std::string rate = "0.1:0.6:0.1";
    std::string beta = "0:5:0.5";
    std::string crossover = "0.05:0.45:0.05";
    double theta = 2.0;
    std::size_t points = 2001;
    double halfWidth = 1.0;
};

coding::RdProblem load_problem(const std::string& path)
{
    return path.empty() ? coding::RdProblem::binary_hamming() : io::rd_problem_from_json(io::read_json_file(path));
}

void add_rd(CLI::App& root, Registry& registry)
{
    auto o = std::make_shared<RdOptions>();
    auto* cmd = root.add_subcommand(
        "rd", "Parametric rate-distortion theory: R(D) and D(R) curves, the MMSE integral representation, "
              "parametric channel capacity, high-resolution decay, and tree-code distortion.");
    cmd->add_option("--quantity", o->quantity, "curve | distortion-rate | mmse | capacity | highres | dprm");
    cmd->add_option("--problem", o->problem,
                    "JSON file {source, coding, distortion}; default binary source with Hamming distortion");
    cmd->add_option("--D", o->distortion, "Distortion sweep");
    cmd->add_option("--R", o->rate, "Rate sweep (nats)");
    cmd->add_option("--beta", o->beta, "Slope-parameter sweep (mmse)");
    cmd->add_option("--p", o->crossover, "Crossover sweep (capacity of the binary symmetric channel)");
    cmd->add_option("--theta", o->theta, "High-res: exponent of |x - y|^theta");
    cmd->add_option("--points", o->points, "High-res: grid points")->check(CLI::Range(2001, 200001));
    cmd->add_option("--half-width", o->halfWidth, "High-res: half-width of the source interval");
    registry.bind(cmd, [o](const RunContext& ctx) {
        const auto q =
            choose(o->quantity, {"curve", "distortion-rate", "mmse", "capacity", "highres", "dprm"}, "--quantity");
        if (q == "capacity") {
            Report r{{"p", "capacity", "beta", "closed_form"}, {}, {}};
            for (double p : parse_sweep(o->crossover)) {
                auto c = coding::capacity_parametric(p);
                r.rows.push_back({p, c.capacity, c.beta, std::log(2.0) - asymptotics::binary_entropy(p)});
            }
            return r;
        }
        if (q == "highres") {
            auto rates = parse_sweep(o->rate);
            auto fit = coding::highres_check(o->theta, rates, o->points, o->halfWidth);
            Report r{{"R", "D", "ln_D"}, {}, {}};
            for (std::size_t i = 0; i < fit.rates.size(); ++i) {
                r.rows.push_back({fit.rates[i], fit.distortions[i], std::log(fit.distortions[i])});
            }
            r.extra["fit"] = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"predicted_slope", -o->theta}};
            return r;
        }
        auto problem = load_problem(o->problem);
        coding::DenseDistortionModel model(problem);
        Report r;
        if (q == "curve") {
            auto ds = parse_sweep(o->distortion);
            r.columns = {"D", "R", "beta"};
            r.rows = parallel_map(ds.size(), ctx.jobs, [&](std::size_t i) {
                auto pt = coding::rd_parametric(model, ds[i]);
                return std::vector<Cell>{pt.distortion, pt.rate, pt.beta};
            });
        } else if (q == "distortion-rate" || q == "dprm") {
            auto rates = parse_sweep(o->rate);
            r.columns = {"R", "D", "beta"};
            r.rows = parallel_map(rates.size(), ctx.jobs, [&](std::size_t i) {
                auto pt = q == "dprm" ? coding::dprm_distortion(problem, rates[i])
                                      : coding::distortion_rate(model, rates[i]);
                return std::vector<Cell>{rates[i], pt.distortion, pt.beta};
            });
        } else {
            auto betas = parse_sweep(o->beta);
            r.columns = {"beta", "D", "D_integral", "R", "R_integral"};
            r.rows = parallel_map(betas.size(), ctx.jobs, [&](std::size_t i) {
                auto m = coding::rd_mmse_representation(model, betas[i]);
                return std::vector<Cell>{m.beta, m.distortion, m.distortionIntegral, m.rateDirect, m.rateIntegral};
            });
        }
        r.extra["problem"] = io::to_json(problem);
        return r;
    });
}

struct JsccOptions
{
    std::string quantity = "boundaries";
    double crossover = 0.1;
    std::string source = "0.1";
    double theta = 1.0;
    std::string beta = "0.5:4:0.5";
};

void add_jscc(CLI::App& root, Registry& registry)
{
    auto o = std::make_shared<JsccOptions>();
    auto* cmd = root.add_subcommand("jscc", "Joint source-channel decoding of a biased binary source over a "
                                            "binary symmetric channel: phase boundaries and free energy.");
    cmd->add_option("--quantity", o->quantity, "boundaries | phi");
    cmd->add_option("--p", o->crossover, "Channel crossover probability");
    cmd->add_option("--q", o->source, "Source bias sweep, in (0, 1/2]");
    cmd->add_option("--theta", o->theta, "Channel uses per source symbol");
    cmd->add_option("--beta", o->beta, "Inverse temperature sweep (phi)");
    registry.bind(cmd, [o](const RunContext& ctx) {
        const auto q = choose(o->quantity, {"boundaries", "phi"}, "--quantity");
        auto biases = parse_sweep(o->source);
        if (q == "boundaries") {
            Report r{{"q", "B", "q_star", "field_boundary", "beta_c"}, {}, {}};
            for (double bias : biases) {
                auto b = coding::jscc_boundaries(o->crossover, bias, o->theta);
                r.rows.push_back({bias, b.field, b.qStar, b.fieldBoundary, b.criticalBeta});
            }
            return r;
        }
        auto grid = product(biases, parse_sweep(o->beta));
        Report r{{"q", "beta", "phi", "magnetization", "phase"}, {}, {}};
        r.rows = parallel_map(grid.size(), ctx.jobs, [&](std::size_t i) {
            const double field = 0.5 * std::log(grid[i].first / (1.0 - grid[i].first));
            auto s = coding::jscc_phi(grid[i].second, field, o->theta, o->crossover);
            return std::vector<Cell>{grid[i].first, grid[i].second, s.phi, s.magnetization,
                                     coding::to_string(s.phase)};
        });
        return r;
    });
}

struct Table1Options
{
    double crossover = 0.1;
    double beta = 0.5;
    double threshold = 0.001;
    std::string rate = "0:0.06:0.01";
    double gridStep = 0.005;
    double sMax = 5.0;
    bool refine = false;
};

void add_table1(CLI::App& root, Registry& registry)
{
    auto o = std::make_shared<Table1Options>();
    auto* cmd = root.add_subcommand(
        "table1", "Erasure/list decoding exponents of random codes: the exponent through Jensen's inequality "
                  "next to the exponent from the direct moment analysis, with their optimizing parameters.");
    cmd->add_option("--p", o->crossover, "Crossover probability");
    cmd->add_option("--beta", o->beta, "Decoder inverse temperature");
    cmd->add_option("--T", o->threshold, "Decision threshold");
    cmd->add_option("--R", o->rate, "Rate sweep (nats)");
    cmd->add_option("--grid-step", o->gridStep, "Grid step of the parameter search");
    cmd->add_option("--s-max", o->sMax, "Upper end of the s search (direct exponent)");
    cmd->add_flag("--refine", o->refine, "Golden-section polish of the direct exponent");
    registry.bind(cmd, [o](const RunContext& ctx) {
        coding::ErasureSettings settings{o->crossover, o->beta, o->threshold, o->gridStep, o->sMax, o->refine};
        auto rates = parse_sweep(o->rate);
        Report r{{"R", "E1_jensen", "E1_direct", "s_star", "rho_star"}, {}, {}};
        r.rows = parallel_map(rates.size(), ctx.jobs, [&](std::size_t i) {
            auto jensen = coding::erasure_exponent_jensen(rates[i], settings);
            auto direct = coding::erasure_exponent_direct(rates[i], settings);
            auto opt = [](const std::optional<double>& v) { return v ? Cell{*v} : Cell{std::string("")}; };
            return std::vector<Cell>{rates[i], jensen.value, direct.value, opt(direct.s), opt(jensen.rho)};
        });
        return r;
    });
}

struct PhaseDiagramOptions
{
    std::string model = "rem-field";
    std::string field = "0:2:0.05";
    double coupling = 1.0;
    std::string source = "0.05:0.5:0.05";
    double crossover = 0.1;
    double theta = 1.0;
    std::string rate = "0.05:0.65:0.05";
    std::string firstRate = "0.05:0.65:0.05";
    double firstShare = 0.5;
};

void add_phase_diagram(CLI::App& root, Registry& registry)
{
    auto o = std::make_shared<PhaseDiagramOptions>();
    auto* cmd = root.add_subcommand(
        "phase-diagram", "Parameter sweeps of phase boundaries: glass temperature of the random energy model "
                         "in a field, decoder boundaries of random codes, joint source-channel boundaries, "
                         "and the freezing temperatures of the two-level tree model.");
    cmd->add_option("--model", o->model, "rem-field | decoder | jscc | grem");
    cmd->add_option("--B", o->field, "Field sweep (rem-field)");
    cmd->add_option("--J", o->coupling, "Energy scale (rem-field, grem)");
    cmd->add_option("--q", o->source, "Source bias sweep (jscc)");
    cmd->add_option("--p", o->crossover, "Crossover probability (decoder, jscc)");
    cmd->add_option("--theta", o->theta, "Channel uses per source symbol (jscc)");
    cmd->add_option("--R", o->rate, "Rate sweep (decoder)");
    cmd->add_option("--R1", o->firstRate, "First-level rate sweep (grem)");
    cmd->add_option("--share", o->firstShare, "First-level variance share (grem)");
    registry.bind(cmd, [o](const RunContext& ctx) {
        const auto model = choose(o->model, {"rem-field", "decoder", "jscc", "grem"}, "--model");
        Report r;
        if (model == "rem-field") {
            auto fields = parse_sweep(o->field);
            r.columns = {"B", "beta_c", "T_c"};
            r.rows = parallel_map(fields.size(), ctx.jobs, [&](std::size_t i) {
                const double bc = rem::rem_field_critical_beta(fields[i], o->coupling);
                return std::vector<Cell>{fields[i], bc, 1.0 / bc};
            });
        } else if (model == "decoder") {
            auto rates = parse_sweep(o->rate);
            r.columns = {"R", "para_glassy_beta", "ferro_beta"};
            r.rows = parallel_map(rates.size(), ctx.jobs, [&](std::size_t i) {
                auto b = coding::decoder_boundaries(rates[i], o->crossover);
                return std::vector<Cell>{rates[i], b.paraGlassyBeta,
                                         b.ferromagneticBeta ? Cell{*b.ferromagneticBeta} : Cell{std::string("")}};
            });
        } else if (model == "jscc") {
            auto biases = parse_sweep(o->source);
            r.columns = {"q", "B", "q_star", "field_boundary", "beta_c"};
            r.rows = parallel_map(biases.size(), ctx.jobs, [&](std::size_t i) {
                auto b = coding::jscc_boundaries(o->crossover, biases[i], o->theta);
                return std::vector<Cell>{biases[i], b.field, b.qStar, b.fieldBoundary, b.criticalBeta};
            });
        } else {
            auto rates = parse_sweep(o->firstRate);
            r.columns = {"R1", "beta_c1", "beta_c2"};
            r.rows = parallel_map(rates.size(), ctx.jobs, [&](std::size_t i) {
                rem::GremParams params{o->coupling, rates[i], o->firstShare};
                params.validate();
                auto t = rem::grem_phi_curve(params).transitions();
                std::vector<Cell> row{rates[i]};
                for (std::size_t k = 0; k < 2; ++k) {
                    row.push_back(k < t.size() ? Cell{t[k]} : Cell{std::string("")});
                }
                return row;
            });
        }
        return r;
    });
}

} // namespace

void add_coding_commands(CLI::App& root, Registry& registry)
{
    add_coding(root, registry);
    add_rd(root, registry);
    add_jscc(root, registry);
    add_table1(root, registry);
    add_phase_diagram(root, registry);
}

} // namespace statmech::cli
