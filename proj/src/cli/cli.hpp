#pragma once

// Command-line front end: shared plumbing for the subcommand implementations.

#include "statmech/io.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace statmech::cli {

//! Runs one command line; returns the process exit code.
//! 0 success, 2 domain/shape/size error, 3 non-convergence, 64 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

inline constexpr int kExitDomain = 2;
inline constexpr int kExitConvergence = 3;
inline constexpr int kExitUsage = 64;

//! Malformed flag values detected after parsing.
class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

//! "start:stop:step" inclusive of stop within half a step, or a single number.
std::vector<double> parse_sweep(const std::string& text);
//! Comma-separated numbers.
std::vector<double> parse_list(const std::string& text);

using Cell = std::variant<double, std::string>;

//! One output table; rendered as CSV or as a JSON document.
struct Report
{
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    //! Extra members merged into the JSON rendering.
    io::Json extra = io::Json::object();

    void write_csv(std::ostream& out, const io::Json& config) const;
    void write_json(std::ostream& out, const io::Json& config) const;
};

struct RunContext
{
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
};

using Action = std::function<Report(const RunContext&)>;

//! Subcommands register their action against their CLI11 app.
class Registry
{
public:
    void bind(CLI::App* command, Action action) { m_Entries.push_back({command, std::move(action)}); }
    [[nodiscard]] const Action* find(const CLI::App* command) const
    {
        for (const auto& e : m_Entries) {
            if (e.command == command) {
                return &e.action;
            }
        }
        return nullptr;
    }

private:
    struct Entry
    {
        CLI::App* command;
        Action action;
    };
    std::vector<Entry> m_Entries;
};

void add_physics_commands(CLI::App& root, Registry& registry);
void add_coding_commands(CLI::App& root, Registry& registry);
void add_dynamics_commands(CLI::App& root, Registry& registry);

//! Evaluates fn(0..count-1) on at most jobs threads; results keep index order and the
//! exception of the lowest failing index is rethrown.
template <class Fn>
auto parallel_map(std::size_t count, std::size_t jobs, Fn fn) -> std::vector<decltype(fn(std::size_t{}))>
{
    using Result = decltype(fn(std::size_t{}));
    std::vector<std::optional<Result>> slots(count);
    std::vector<std::exception_ptr> failures(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, count));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    std::vector<Result> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (failures[i]) {
            std::rethrow_exception(failures[i]);
        }
        out.push_back(std::move(*slots[i]));
    }
    return out;
}

//! Cartesian product of two sweeps, first index slowest.
std::vector<std::pair<double, double>> product(const std::vector<double>& outer, const std::vector<double>& inner);

//! Rejects values outside the named choices with a usage error.
std::string choose(const std::string& value, const std::vector<std::string>& choices, const char* flag);

} // namespace statmech::cli
