#pragma once

// JSON documents for the library's value types and CSV writers for tables.

#include "statmech/dynamics.hpp"
#include "statmech/ensembles.hpp"
#include "statmech/estimation.hpp"
#include "statmech/mcmc.hpp"
#include "statmech/rate_distortion.hpp"
#include "statmech/rem.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace statmech::io {

using Json = nlohmann::ordered_json;

//! Shortest round-trip text is not required; tables use 10 significant digits.
std::string format_number(double value);

//! Rows of numbers under a header line. Infinite values print as inf / -inf.
class CsvTable
{
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(const std::vector<double>& row);
    [[nodiscard]] const std::vector<std::string>& header() const { return m_Header; }
    [[nodiscard]] const std::vector<std::vector<double>>& rows() const { return m_Rows; }
    void write(std::ostream& out) const;

    //! Parses a table written by write(); lines starting with '#' are skipped.
    static CsvTable read(std::istream& in);

private:
    std::vector<std::string> m_Header;
    std::vector<std::vector<double>> m_Rows;
};

Json to_json(const ensembles::DiscreteSystem& system);
ensembles::DiscreteSystem discrete_system_from_json(const Json& doc);

//! Segments with bounds (null for +inf), phase and form tags, coefficients and sampled values.
Json to_json(const rem::PiecewisePhi& phi, std::size_t samplesPerSegment = 5);
rem::PiecewisePhi piecewise_phi_from_json(const Json& doc);
rem::Phase phase_from_string(const std::string& text);

Json to_json(const coding::RdProblem& problem);
coding::RdProblem rd_problem_from_json(const Json& doc);
Json to_json(const coding::RdPoint& point);

//! {mode, states[], matrix[][], stationary[] (optional)}.
Json to_json(const dynamics::ChainSpec& chain);
dynamics::ChainSpec chain_from_json(const Json& doc);

//! {transition[][], emission[][], stationary[] (optional, computed when absent)}.
Json to_json(const estimation::HmmSpec& hmm);
estimation::HmmSpec hmm_from_json(const Json& doc);

CsvTable trajectory_table(const dynamics::Trajectory& trajectory);
CsvTable sample_table(const std::vector<mcmc::SampleRecord>& records);
CsvTable density_table(const estimation::GriddedDensity& density);
estimation::GriddedDensity density_from_table(const CsvTable& table);

//! Reads and parses a JSON file; throws Error with the path on failure.
Json read_json_file(const std::string& path);

} // namespace statmech::io
