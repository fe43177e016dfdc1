#include <doctest.h>

#include "cli/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace statmech::cli;

namespace {

struct Outcome
{
    int code = 0;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args)
{
    std::ostringstream out;
    std::ostringstream err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        out.push_back(line);
    }
    return out;
}

std::filesystem::path temp_file(const std::string& name, const std::string& contents)
{
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << contents;
    return path;
}

} // namespace

TEST_CASE("sweep syntax")
{
    CHECK(parse_sweep("0:0.06:0.01").size() == 7);
    CHECK(parse_sweep("0:1:0.3").size() == 4);    // 0.9 lies within half a step of 1
    CHECK(parse_sweep("0:1.1:0.3").size() == 5);  // 1.2 lies within half a step of 1.1
    CHECK(parse_sweep("0:1.04:0.3").size() == 4);
    CHECK(parse_sweep("2.5") == std::vector<double>{2.5});
    CHECK(parse_sweep("1:1:0.5") == std::vector<double>{1.0});
    auto v = parse_sweep("0:2:0.05");
    CHECK(v.size() == 41);
    CHECK(v.back() == doctest::Approx(2.0).epsilon(1e-14));
    for (const char* bad : {"0:1", "a:1:0.1", "0:1:0", "1:0:0.1", "0:1:-0.1", "0:1:0.1:2", ""}) {
        CHECK_THROWS_AS(parse_sweep(bad), UsageError);
    }
    CHECK(parse_list("1,2.5,-3") == std::vector<double>{1.0, 2.5, -3.0});
    CHECK_THROWS_AS(parse_list("1,,2"), UsageError);
}

TEST_CASE("table reproduction command")
{
    auto r = invoke({"table1", "--p", "0.1", "--beta", "0.5", "--T", "0.001", "--R", "0:0.06:0.01"});
    REQUIRE(r.code == 0);
    auto rows = lines(r.out);
    REQUIRE(rows.size() == 9);
    CHECK(rows[0].rfind("# {", 0) == 0);
    CHECK(rows[1] == "R,E1_jensen,E1_direct,s_star,rho_star");
    CHECK(rows[2].rfind("0,0.139", 0) == 0);
    CHECK(rows[8].rfind("0.06,0.079", 0) == 0);
}

TEST_CASE("identical flags give byte-identical output")
{
    std::vector<std::string> sample{"sample", "--kernel", "heat-bath", "--model", "ising1d", "--n", "8",
                                    "--beta", "0.7",  "--steps",  "2e5",   "--seed",  "7"};
    auto a = invoke(sample);
    auto b = invoke(sample);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    auto c = invoke({"sample", "--kernel", "heat-bath", "--n", "8", "--beta", "0.7", "--steps", "2e5", "--seed", "8"});
    CHECK(lines(c.out).back() != lines(a.out).back());

    // Worker count changes only the logged configuration.
    std::vector<std::string> sweep{"rem", "--mc-n", "10", "--beta", "0.5:3:0.25"};
    auto serial = invoke(sweep);
    sweep.insert(sweep.end(), {"--jobs", "4"});
    auto parallel = invoke(sweep);
    REQUIRE(serial.code == 0);
    REQUIRE(parallel.code == 0);
    auto s = lines(serial.out);
    auto p = lines(parallel.out);
    CHECK(s.front() != p.front());
    CHECK(std::vector(s.begin() + 1, s.end()) == std::vector(p.begin() + 1, p.end()));
}

TEST_CASE("seed resolution")
{
    auto header = [](const Outcome& o) { return statmech::io::Json::parse(lines(o.out).front().substr(2)); };
    ::unsetenv("STATMECH_SEED");
    CHECK(header(invoke({"rem", "--beta", "1"}))["seed"] == 1729);
    ::setenv("STATMECH_SEED", "99", 1);
    CHECK(header(invoke({"rem", "--beta", "1"}))["seed"] == 99);
    CHECK(header(invoke({"rem", "--beta", "1", "--seed", "5"}))["seed"] == 5);
    ::setenv("STATMECH_SEED", "abc", 1);
    CHECK(invoke({"rem", "--beta", "1"}).code == kExitUsage);
    ::unsetenv("STATMECH_SEED");
}

TEST_CASE("resolved configuration is logged")
{
    auto r = invoke({"ising", "--beta", "0.5", "--B", "0.1"});
    REQUIRE(r.code == 0);
    auto config = statmech::io::Json::parse(lines(r.out).front().substr(2));
    CHECK(config["subcommand"] == "ising");
    CHECK(config["params"]["beta"] == "0.5");
    CHECK(config["params"]["J"] == "1");
    CHECK(config["format"] == "csv");
}

TEST_CASE("json output and file output")
{
    auto r = invoke({"rem", "--curve", "--format", "json"});
    REQUIRE(r.code == 0);
    auto doc = statmech::io::Json::parse(r.out);
    CHECK(doc["config"]["subcommand"] == "rem");
    CHECK(doc["rows"].size() == 2);
    CHECK(doc["rows"][1]["beta_high"] == "inf");
    auto phi = statmech::io::piecewise_phi_from_json(doc["curve"]);
    CHECK(phi.segments.size() == 2);

    auto path = std::filesystem::temp_directory_path() / "statmech_pd.csv";
    auto f = invoke({"phase-diagram", "--model", "rem-field", "--B", "0:2:0.05", "--out", path.string()});
    REQUIRE(f.code == 0);
    CHECK(f.out.empty());
    std::ifstream in(path);
    auto table = statmech::io::CsvTable::read(in);
    CHECK(table.header() == std::vector<std::string>{"B", "beta_c", "T_c"});
    REQUIRE(table.rows().size() == 41);
    for (std::size_t i = 1; i < table.rows().size(); ++i) {
        CHECK(table.rows()[i][2] > table.rows()[i - 1][2]);
    }
}

TEST_CASE("exit codes")
{
    CHECK(invoke({}).code == kExitUsage);
    CHECK(invoke({"nonsense"}).code == kExitUsage);
    CHECK(invoke({"rem", "--no-such-flag", "1"}).code == kExitUsage);
    CHECK(invoke({"rem", "--beta", "0:1"}).code == kExitUsage);
    CHECK(invoke({"rem", "--model", "other"}).code == kExitUsage);
    CHECK(invoke({"sample", "--steps", "1.5"}).code == kExitUsage);
    CHECK(invoke({"--format", "xml", "rem"}).code == kExitUsage);

    CHECK(invoke({"coding", "--R", "0"}).code == kExitDomain);
    CHECK(invoke({"ising", "--beta", "-1"}).code == kExitDomain);
    CHECK(invoke({"thermo", "--energies", "0,1", "--degeneracies", "1"}).code == kExitDomain);

    // Two closed classes leave the stationary law undetermined.
    auto chain = temp_file("statmech_reducible.json", R"({"mode":"continuous","matrix":[[0,1,0,0],[1,0,0,0],[0,0,0,2],[0,0,3,0]]})");
    auto r = invoke({"dynamics", "--quantity", "stationary", "--chain", chain.string()});
    CHECK(r.code == kExitConvergence);
    CHECK(!r.err.empty());

    auto help = invoke({"table1", "--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("Erasure") != std::string::npos);
}
