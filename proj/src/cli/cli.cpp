#include "cli/cli.hpp"

#include "statmech/error.hpp"
#include "statmech/random.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace statmech::cli {

namespace {

double parse_number(const std::string& text, const std::string& whole)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw UsageError(fmt::format("not a number: '{}' in '{}'", text, whole));
    }
    if (used != text.size() || !std::isfinite(v)) {
        throw UsageError(fmt::format("not a number: '{}' in '{}'", text, whole));
    }
    return v;
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::string part;
    std::stringstream ss(text);
    while (std::getline(ss, part, sep)) {
        parts.push_back(part);
    }
    if (!text.empty() && text.back() == sep) {
        parts.emplace_back();
    }
    return parts;
}

std::string render(const Cell& cell)
{
    if (const auto* v = std::get_if<double>(&cell)) {
        return io::format_number(*v);
    }
    return std::get<std::string>(cell);
}

io::Json json_cell(const Cell& cell)
{
    if (const auto* v = std::get_if<double>(&cell)) {
        if (std::isinf(*v)) {
            return *v > 0 ? io::Json("inf") : io::Json("-inf");
        }
        if (std::isnan(*v)) {
            return nullptr;
        }
        return *v;
    }
    return std::get<std::string>(cell);
}

struct GlobalOptions
{
    std::string format = "csv";
    std::string out;
    std::optional<std::string> seed;
    std::size_t jobs = 1;
};

std::uint64_t parse_seed(const std::string& text, const char* origin)
{
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
        throw UsageError(fmt::format("{}: seed must be a non-negative integer, got '{}'", origin, text));
    }
    try {
        return std::stoull(text);
    } catch (const std::exception&) {
        throw UsageError(fmt::format("{}: seed out of range: '{}'", origin, text));
    }
}

std::uint64_t resolve_seed(const GlobalOptions& global)
{
    if (global.seed) {
        return parse_seed(*global.seed, "--seed");
    }
    if (const char* env = std::getenv("STATMECH_SEED"); env != nullptr && *env != '\0') {
        return parse_seed(env, "STATMECH_SEED");
    }
    return kDefaultSeed;
}

std::string option_value(const CLI::Option& opt)
{
    if (opt.get_expected_max() == 0) {
        return opt.count() > 0 ? "true" : "false";
    }
    if (opt.count() == 0) {
        return opt.get_default_str();
    }
    const auto& results = opt.results();
    std::string joined;
    for (std::size_t i = 0; i < results.size(); ++i) {
        joined += (i ? "," : "") + results[i];
    }
    return joined;
}

io::Json resolved_config(const CLI::App& command, const GlobalOptions& global, const RunContext& context)
{
    io::Json params = io::Json::object();
    for (const CLI::Option* opt : command.get_options()) {
        const auto& names = opt->get_lnames();
        if (names.empty() || names.front() == "help") {
            continue;
        }
        params[names.front()] = option_value(*opt);
    }
    io::Json config;
    config["subcommand"] = command.get_name();
    config["params"] = std::move(params);
    config["format"] = global.format;
    config["seed"] = context.seed;
    config["jobs"] = context.jobs;
    return config;
}

} // namespace

std::vector<double> parse_sweep(const std::string& text)
{
    auto parts = split(text, ':');
    if (parts.size() == 1) {
        return {parse_number(parts[0], text)};
    }
    if (parts.size() != 3) {
        throw UsageError(fmt::format("sweep must be start:stop:step, got '{}'", text));
    }
    const double start = parse_number(parts[0], text);
    const double stop = parse_number(parts[1], text);
    const double step = parse_number(parts[2], text);
    if (!(step > 0.0) || stop < start) {
        throw UsageError(fmt::format("sweep '{}' needs step > 0 and stop >= start", text));
    }
    const double span = (stop - start) / step;
    if (span > 1e6) {
        throw UsageError(fmt::format("sweep '{}' has too many points", text));
    }
    const auto count = static_cast<std::size_t>(std::floor(span + 0.5)) + 1;
    std::vector<double> values(count);
    for (std::size_t k = 0; k < count; ++k) {
        values[k] = start + static_cast<double>(k) * step;
    }
    return values;
}

std::vector<double> parse_list(const std::string& text)
{
    std::vector<double> values;
    for (const auto& part : split(text, ',')) {
        values.push_back(parse_number(part, text));
    }
    if (values.empty()) {
        throw UsageError("empty list");
    }
    return values;
}

std::vector<std::pair<double, double>> product(const std::vector<double>& outer, const std::vector<double>& inner)
{
    std::vector<std::pair<double, double>> out;
    out.reserve(outer.size() * inner.size());
    for (double a : outer) {
        for (double b : inner) {
            out.emplace_back(a, b);
        }
    }
    return out;
}

std::string choose(const std::string& value, const std::vector<std::string>& choices, const char* flag)
{
    for (const auto& c : choices) {
        if (c == value) {
            return value;
        }
    }
    std::string list;
    for (std::size_t i = 0; i < choices.size(); ++i) {
        list += (i ? ", " : "") + choices[i];
    }
    throw UsageError(fmt::format("{} must be one of {}, got '{}'", flag, list, value));
}

void Report::write_csv(std::ostream& out, const io::Json& config) const
{
    out << "# " << config.dump() << '\n';
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out << (c ? "," : "") << columns[c];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "") << render(row[c]);
        }
        out << '\n';
    }
}

void Report::write_json(std::ostream& out, const io::Json& config) const
{
    io::Json doc;
    doc["config"] = config;
    doc["columns"] = columns;
    io::Json rowsJson = io::Json::array();
    for (const auto& row : rows) {
        io::Json r = io::Json::object();
        for (std::size_t c = 0; c < row.size(); ++c) {
            r[columns[c]] = json_cell(row[c]);
        }
        rowsJson.push_back(std::move(r));
    }
    doc["rows"] = std::move(rowsJson);
    for (const auto& [key, value] : extra.items()) {
        doc[key] = value;
    }
    out << doc.dump(2) << '\n';
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("statmech");
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App root{"Statistical physics and information theory toolbox.", "statmech"};
    root.fallthrough();
    root.require_subcommand(1);
    root.option_defaults()->always_capture_default();

    GlobalOptions global;
    root.add_option("--format", global.format, "Output format: csv or json")->check(CLI::IsMember({"csv", "json"}));
    root.add_option("--out", global.out, "Write the table to this path instead of stdout");
    root.add_option("--seed", global.seed, "Random seed (default 1729, or STATMECH_SEED)");
    root.add_option("--jobs", global.jobs, "Worker threads for sweeps")->check(CLI::Range(1, 256));

    Registry registry;
    add_physics_commands(root, registry);
    add_coding_commands(root, registry);
    add_dynamics_commands(root, registry);

    try {
        root.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = root.exit(e, out, err);
        return code == 0 ? 0 : kExitUsage;
    }

    const CLI::App* command = root.get_subcommands().front();
    const Action* action = registry.find(command);
    try {
        RunContext context{resolve_seed(global), global.jobs};
        Report report = (*action)(context);
        io::Json config = resolved_config(*command, global, context);

        std::ofstream file;
        std::ostream* sink = &out;
        if (!global.out.empty()) {
            file.open(global.out);
            if (!file) {
                err << "error: cannot write '" << global.out << "'\n";
                return kExitDomain;
            }
            sink = &file;
        }
        if (global.format == "json") {
            report.write_json(*sink, config);
        } else {
            report.write_csv(*sink, config);
        }
        return 0;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConvergenceError& e) {
        err << "convergence error: " << e.what() << '\n';
        return kExitConvergence;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace statmech::cli
