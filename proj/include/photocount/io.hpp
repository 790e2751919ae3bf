#pragma once

#include "photocount/distributions.hpp"
#include "photocount/montecarlo.hpp"
#include "photocount/simplex.hpp"
#include "photocount/stability.hpp"
#include "photocount/transform.hpp"

#include <json.hpp>

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// JSON and CSV encodings. Doubles are written in shortest round-trip form so
// both formats reproduce every value bit for bit.

namespace photocount::io {

/// Shortest decimal that parses back to exactly `value`.
std::string format_double(double value);

/// Strict parse of a whole field; throws Error{ParseError}.
double parse_double(std::string_view text);

nlohmann::json to_json(Pmf const& pmf);
nlohmann::json to_json(SignedDistribution const& dist);
nlohmann::json to_json(StabilityReport const& report);
nlohmann::json to_json(SimplexCheck const& check);
nlohmann::json to_json(SimulationRun const& run);

Pmf pmf_from_json(nlohmann::json const& j);
SignedDistribution signed_distribution_from_json(nlohmann::json const& j);

/// "index,probability" rows.
void write_pmf_csv(std::ostream& out, Pmf const& pmf);
void write_values_csv(std::ostream& out, std::span<double const> values,
                      std::string_view column = "probability");
/// "index,value,converged,max_term_magnitude" rows.
void write_signed_csv(std::ostream& out, SignedDistribution const& dist);
/// "n,M_n,satisfied" rows plus a trailing "# verdict=..." summary line.
void write_stability_table(std::ostream& out, StabilityReport const& report);
/// "index,vertex_0,...,vertex_{dim-1}" rows.
void write_vertices_csv(std::ostream& out, std::vector<Pmf> const& vertices);

/// Second column of a two-column "index,value" CSV (header optional).
std::vector<double> read_values_csv(std::istream& in);

/// Reads a value vector from a JSON document ({"probs": ...}, {"values": ...}
/// or a bare array) or CSV, chosen by content.
std::vector<double> read_values(std::istream& in);

std::string dump(nlohmann::json const& j);

} // namespace photocount::io
