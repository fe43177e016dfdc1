#include "statmech/io.hpp"

#include "statmech/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

namespace statmech::io {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// JSON has no infinity; null stands in for +inf and the string "-inf" for -inf.
Json number(double v)
{
    if (std::isnan(v)) {
        throw DomainError("cannot serialize NaN");
    }
    if (std::isinf(v)) {
        return v > 0 ? Json(nullptr) : Json("-inf");
    }
    return v;
}

double number_from(const Json& j, const char* what)
{
    if (j.is_null()) {
        return kInf;
    }
    if (j.is_string() && j.get<std::string>() == "-inf") {
        return -kInf;
    }
    if (!j.is_number()) {
        throw ShapeError(fmt::format("{}: expected a number", what));
    }
    return j.get<double>();
}

Json vector_json(const std::vector<double>& values)
{
    Json out = Json::array();
    for (double v : values) {
        out.push_back(number(v));
    }
    return out;
}

std::vector<double> vector_from(const Json& j, const char* what)
{
    if (!j.is_array()) {
        throw ShapeError(fmt::format("{}: expected an array", what));
    }
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        out.push_back(number_from(v, what));
    }
    return out;
}

const Json& field(const Json& doc, const char* key)
{
    if (!doc.is_object() || !doc.contains(key)) {
        throw ShapeError(fmt::format("missing field '{}'", key));
    }
    return doc.at(key);
}

// Rows of equal length; returns the row-major data and the column count.
std::vector<double> matrix_from(const Json& j, const char* what, std::size_t& rows, std::size_t& cols)
{
    if (!j.is_array() || j.empty()) {
        throw ShapeError(fmt::format("{}: expected a non-empty array of rows", what));
    }
    rows = j.size();
    cols = 0;
    std::vector<double> out;
    for (const auto& row : j) {
        auto values = vector_from(row, what);
        if (cols == 0) {
            cols = values.size();
        }
        if (values.empty() || values.size() != cols) {
            throw ShapeError(fmt::format("{}: ragged rows", what));
        }
        out.insert(out.end(), values.begin(), values.end());
    }
    return out;
}

Json matrix_json(const std::vector<double>& data, std::size_t rows, std::size_t cols)
{
    Json out = Json::array();
    for (std::size_t r = 0; r < rows; ++r) {
        out.push_back(vector_json({data.begin() + static_cast<std::ptrdiff_t>(r * cols),
                                   data.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols)}));
    }
    return out;
}

std::string form_of(const rem::PhiSegment& s)
{
    if (s.quadratic != 0.0) {
        return "quadratic";
    }
    return s.linear != 0.0 ? "linear" : "constant";
}

double parse_cell(const std::string& cell)
{
    if (cell == "inf") {
        return kInf;
    }
    if (cell == "-inf") {
        return -kInf;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(cell, &used);
    } catch (const std::exception&) {
        throw ShapeError(fmt::format("not a number: '{}'", cell));
    }
    if (used != cell.size()) {
        throw ShapeError(fmt::format("not a number: '{}'", cell));
    }
    return v;
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

} // namespace

std::string format_number(double value)
{
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    return fmt::format("{:.10g}", value);
}

CsvTable::CsvTable(std::vector<std::string> header)
    : m_Header(std::move(header))
{
    if (m_Header.empty()) {
        throw ShapeError("CSV table needs at least one column");
    }
}

void CsvTable::add_row(const std::vector<double>& row)
{
    if (row.size() != m_Header.size()) {
        throw ShapeError(fmt::format("row has {} cells, header has {}", row.size(), m_Header.size()));
    }
    m_Rows.push_back(row);
}

void CsvTable::write(std::ostream& out) const
{
    for (std::size_t c = 0; c < m_Header.size(); ++c) {
        out << (c ? "," : "") << m_Header[c];
    }
    out << '\n';
    for (const auto& row : m_Rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "") << format_number(row[c]);
        }
        out << '\n';
    }
}

CsvTable CsvTable::read(std::istream& in)
{
    std::string line;
    std::optional<CsvTable> table;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        auto cells = split(line);
        if (!table) {
            table.emplace(std::move(cells));
            continue;
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& cell : cells) {
            row.push_back(parse_cell(cell));
        }
        table->add_row(row);
    }
    if (!table) {
        throw ShapeError("CSV input has no header");
    }
    return std::move(*table);
}

Json to_json(const ensembles::DiscreteSystem& system)
{
    Json doc;
    doc["label"] = system.label;
    doc["energies"] = vector_json(system.energies);
    doc["degeneracies"] = vector_json(system.degeneracies);
    return doc;
}

ensembles::DiscreteSystem discrete_system_from_json(const Json& doc)
{
    ensembles::DiscreteSystem system;
    system.energies = vector_from(field(doc, "energies"), "energies");
    if (doc.contains("degeneracies")) {
        system.degeneracies = vector_from(doc.at("degeneracies"), "degeneracies");
    }
    if (doc.contains("label")) {
        system.label = doc.at("label").get<std::string>();
    }
    system.validate();
    return system;
}

rem::Phase phase_from_string(const std::string& text)
{
    for (auto phase : {rem::Phase::Paramagnetic, rem::Phase::PartiallyFrozen, rem::Phase::Glassy}) {
        if (rem::to_string(phase) == text) {
            return phase;
        }
    }
    throw DomainError(fmt::format("unknown phase '{}'", text));
}

Json to_json(const rem::PiecewisePhi& phi, std::size_t samplesPerSegment)
{
    Json segments = Json::array();
    for (const auto& s : phi.segments) {
        Json seg;
        seg["betaLow"] = number(s.betaLow);
        seg["betaHigh"] = number(s.betaHigh);
        seg["phase"] = rem::to_string(s.phase);
        seg["form"] = form_of(s);
        seg["coefficients"] = vector_json({s.constant, s.linear, s.quadratic});
        // Open-ended segments are sampled over a span equal to their start plus one.
        double hi = std::isinf(s.betaHigh) ? 2.0 * s.betaLow + 1.0 : s.betaHigh;
        Json samples = Json::array();
        for (std::size_t i = 0; i < samplesPerSegment; ++i) {
            double t = samplesPerSegment > 1 ? static_cast<double>(i) / static_cast<double>(samplesPerSegment - 1) : 0.0;
            double beta = s.betaLow + t * (hi - s.betaLow);
            samples.push_back(Json::array({number(beta), number(s.value(beta))}));
        }
        seg["samples"] = std::move(samples);
        segments.push_back(std::move(seg));
    }
    Json doc;
    doc["segments"] = std::move(segments);
    return doc;
}

rem::PiecewisePhi piecewise_phi_from_json(const Json& doc)
{
    rem::PiecewisePhi phi;
    for (const auto& seg : field(doc, "segments")) {
        rem::PhiSegment s;
        s.betaLow = number_from(field(seg, "betaLow"), "betaLow");
        s.betaHigh = number_from(field(seg, "betaHigh"), "betaHigh");
        s.phase = phase_from_string(field(seg, "phase").get<std::string>());
        auto c = vector_from(field(seg, "coefficients"), "coefficients");
        if (c.size() != 3) {
            throw ShapeError("coefficients must hold constant, linear and quadratic terms");
        }
        s.constant = c[0];
        s.linear = c[1];
        s.quadratic = c[2];
        phi.segments.push_back(s);
    }
    phi.validate();
    return phi;
}

Json to_json(const coding::RdProblem& problem)
{
    Json doc;
    doc["source"] = vector_json(problem.source);
    doc["coding"] = vector_json(problem.coding);
    doc["distortion"] = matrix_json(problem.distortion, problem.coding.size(), problem.source.size());
    return doc;
}

coding::RdProblem rd_problem_from_json(const Json& doc)
{
    coding::RdProblem problem;
    problem.source = vector_from(field(doc, "source"), "source");
    problem.coding = vector_from(field(doc, "coding"), "coding");
    std::size_t rows = 0;
    std::size_t cols = 0;
    problem.distortion = matrix_from(field(doc, "distortion"), "distortion", rows, cols);
    if (rows != problem.coding.size() || cols != problem.source.size()) {
        throw ShapeError("distortion matrix must be |coding| x |source|");
    }
    problem.validate();
    return problem;
}

Json to_json(const coding::RdPoint& point)
{
    Json doc;
    doc["distortion"] = number(point.distortion);
    doc["rate"] = number(point.rate);
    doc["beta"] = number(point.beta);
    return doc;
}

Json to_json(const dynamics::ChainSpec& chain)
{
    Json doc;
    doc["mode"] = dynamics::to_string(chain.mode);
    doc["states"] = chain.states;
    const auto n = chain.size();
    std::vector<double> data(n * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            data[r * n + c] = chain.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        }
    }
    doc["matrix"] = matrix_json(data, n, n);
    if (chain.stationary) {
        doc["stationary"] = vector_json(*chain.stationary);
    }
    return doc;
}

dynamics::ChainSpec chain_from_json(const Json& doc)
{
    std::size_t rows = 0;
    std::size_t cols = 0;
    auto data = matrix_from(field(doc, "matrix"), "matrix", rows, cols);
    if (rows != cols) {
        throw ShapeError("chain matrix must be square");
    }
    auto mode = doc.contains("mode") ? dynamics::chain_mode_from_string(doc.at("mode").get<std::string>())
                                     : dynamics::ChainMode::Continuous;
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = data[r * cols + c];
        }
    }
    auto chain = dynamics::ChainSpec::from_matrix(mode, m);
    if (doc.contains("states")) {
        chain.states = doc.at("states").get<std::vector<std::string>>();
    }
    if (doc.contains("stationary") && !doc.at("stationary").is_null()) {
        chain.stationary = vector_from(doc.at("stationary"), "stationary");
    }
    chain.validate();
    return chain;
}

Json to_json(const estimation::HmmSpec& hmm)
{
    Json doc;
    doc["transition"] = matrix_json(hmm.transition, hmm.states, hmm.states);
    doc["emission"] = matrix_json(hmm.emission, hmm.states, hmm.symbols);
    doc["stationary"] = vector_json(hmm.stationary);
    return doc;
}

estimation::HmmSpec hmm_from_json(const Json& doc)
{
    std::size_t rows = 0;
    std::size_t cols = 0;
    auto transition = matrix_from(field(doc, "transition"), "transition", rows, cols);
    if (rows != cols) {
        throw ShapeError("transition matrix must be square");
    }
    std::size_t emissionRows = 0;
    std::size_t symbols = 0;
    auto emission = matrix_from(field(doc, "emission"), "emission", emissionRows, symbols);
    if (emissionRows != rows) {
        throw ShapeError("emission matrix needs one row per state");
    }
    auto hmm = estimation::HmmSpec::make(rows, symbols, std::move(transition), std::move(emission));
    if (doc.contains("stationary") && !doc.at("stationary").is_null()) {
        hmm.stationary = vector_from(doc.at("stationary"), "stationary");
        hmm.validate();
    }
    return hmm;
}

CsvTable trajectory_table(const dynamics::Trajectory& trajectory)
{
    std::vector<std::string> header{"time"};
    const std::size_t k = trajectory.distributions.empty() ? 0 : trajectory.distributions.front().size();
    for (std::size_t i = 1; i <= k; ++i) {
        header.push_back(fmt::format("P_{}", i));
    }
    CsvTable table(std::move(header));
    for (std::size_t t = 0; t < trajectory.times.size(); ++t) {
        std::vector<double> row{trajectory.times[t]};
        row.insert(row.end(), trajectory.distributions[t].begin(), trajectory.distributions[t].end());
        table.add_row(row);
    }
    return table;
}

CsvTable sample_table(const std::vector<mcmc::SampleRecord>& records)
{
    CsvTable table({"step", "state", "energy", "magnetization"});
    for (const auto& r : records) {
        table.add_row({static_cast<double>(r.step), static_cast<double>(r.state), r.energy, r.magnetization});
    }
    return table;
}

CsvTable density_table(const estimation::GriddedDensity& density)
{
    CsvTable table({"x", "q"});
    for (std::size_t i = 0; i < density.size(); ++i) {
        table.add_row({density.x(i), density.values[i]});
    }
    return table;
}

estimation::GriddedDensity density_from_table(const CsvTable& table)
{
    if (table.header().size() != 2) {
        throw ShapeError("density table needs exactly two columns (x, q)");
    }
    std::vector<double> grid;
    std::vector<double> values;
    for (const auto& row : table.rows()) {
        grid.push_back(row[0]);
        values.push_back(row[1]);
    }
    return estimation::GriddedDensity::from_samples(grid, values);
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(fmt::format("cannot open '{}'", path));
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ShapeError(fmt::format("{}: {}", path, e.what()));
    }
}

} // namespace statmech::io
