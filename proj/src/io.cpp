#include "photocount/io.hpp"

#include "photocount/error.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>

namespace photocount::io {

using nlohmann::json;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <typename T>
json optional_or_null(std::optional<T> const& v) {
    return v ? json(*v) : json(nullptr);
}

std::vector<double> doubles_from_json(json const& arr) {
    if (!arr.is_array()) throw Error(ErrorCode::ParseError, "expected a JSON array of numbers");
    std::vector<double> out;
    out.reserve(arr.size());
    for (auto const& v : arr) {
        if (v.is_null()) {
            out.push_back(std::numeric_limits<double>::quiet_NaN());
        } else if (v.is_number()) {
            out.push_back(v.get<double>());
        } else {
            throw Error(ErrorCode::ParseError, "non-numeric entry in array");
        }
    }
    return out;
}

std::string_view trim(std::string_view s) {
    auto const first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    auto const last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

} // namespace

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    auto const [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
    text = trim(text);
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    double value = 0.0;
    auto const [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw Error(ErrorCode::ParseError, "not a number: '" + std::string(text) + "'");
    }
    return value;
}

json to_json(Pmf const& pmf) {
    return json{{"probs", pmf.values()},
                {"tail_mass", pmf.tail_mass()},
                {"origin", std::string(to_string(pmf.origin()))}};
}

json to_json(SignedDistribution const& dist) {
    json values = json::array();
    for (double v : dist.values) values.push_back(number_or_null(v));
    json converged = json::array();
    for (bool c : dist.converged) converged.push_back(c);
    json magnitudes = json::array();
    for (double v : dist.max_term_magnitude) magnitudes.push_back(number_or_null(v));
    return json{{"values", values}, {"converged", converged}, {"max_term_magnitude", magnitudes}};
}

json to_json(StabilityReport const& report) {
    json per_n = json::array();
    for (auto const& rec : report.per_n) {
        per_n.push_back(json{{"n", rec.n},
                             {"M_n", optional_or_null(rec.M_n)},
                             {"satisfied", rec.satisfied},
                             {"analytic_M_n", optional_or_null(rec.analytic_M_n)}});
    }
    return json{{"eta", report.eta},
                {"per_n", per_n},
                {"xi", optional_or_null(report.xi)},
                {"eta_cr", optional_or_null(report.eta_cr)},
                {"verdict", std::string(to_string(report.verdict))}};
}

json to_json(SimplexCheck const& check) {
    json violations = json::array();
    for (auto const& v : check.violations) {
        violations.push_back(json{{"index", v.index}, {"value", number_or_null(v.value)}});
    }
    json bary = json::array();
    for (double v : check.barycentric) bary.push_back(number_or_null(v));
    return json{{"inside", check.inside}, {"barycentric", bary}, {"violations", violations}};
}

json to_json(SimulationRun const& run) {
    return json{{"seed", run.seed},
                {"samples", run.samples},
                {"eta", run.eta},
                {"counts", run.counts},
                {"empirical_q", to_json(run.empirical_q)},
                {"l1_to_analytic", optional_or_null(run.l1_to_analytic)}};
}

Pmf pmf_from_json(json const& j) {
    try {
        auto probs = doubles_from_json(j.at("probs"));
        double const tail = j.value("tail_mass", 0.0);
        Origin const origin = origin_from_string(j.value("origin", std::string("user")));
        return Pmf(std::move(probs), tail, origin);
    } catch (json::exception const& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

SignedDistribution signed_distribution_from_json(json const& j) {
    try {
        SignedDistribution out;
        out.values = doubles_from_json(j.at("values"));
        for (auto const& c : j.at("converged")) out.converged.push_back(c.get<bool>());
        out.max_term_magnitude = doubles_from_json(j.at("max_term_magnitude"));
        return out;
    } catch (json::exception const& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

void write_values_csv(std::ostream& out, std::span<double const> values, std::string_view column) {
    out << "index," << column << '\n';
    for (std::size_t i = 0; i < values.size(); ++i) {
        out << i << ',' << format_double(values[i]) << '\n';
    }
}

void write_pmf_csv(std::ostream& out, Pmf const& pmf) { write_values_csv(out, pmf.probs()); }

void write_signed_csv(std::ostream& out, SignedDistribution const& dist) {
    out << "index,value,converged,max_term_magnitude\n";
    for (std::size_t i = 0; i < dist.values.size(); ++i) {
        out << i << ',' << format_double(dist.values[i]) << ','
            << (dist.converged[i] ? "true" : "false") << ','
            << format_double(dist.max_term_magnitude[i]) << '\n';
    }
}

void write_stability_table(std::ostream& out, StabilityReport const& report) {
    out << "n,M_n,satisfied\n";
    for (auto const& rec : report.per_n) {
        out << rec.n << ',' << (rec.M_n ? std::to_string(*rec.M_n) : std::string("none")) << ','
            << (rec.satisfied ? "true" : "false") << '\n';
    }
    out << "# verdict=" << to_string(report.verdict) << " eta=" << format_double(report.eta);
    if (report.eta_cr) out << " eta_cr=" << format_double(*report.eta_cr);
    if (report.xi) out << " xi=" << format_double(*report.xi);
    out << '\n';
}

void write_vertices_csv(std::ostream& out, std::vector<Pmf> const& vertices) {
    out << "index";
    for (std::size_t v = 0; v < vertices.size(); ++v) out << ",vertex_" << v;
    out << '\n';
    std::size_t rows = 0;
    for (auto const& v : vertices) rows = std::max(rows, v.size());
    for (std::size_t i = 0; i < rows; ++i) {
        out << i;
        for (auto const& v : vertices) out << ',' << format_double(v.at_or_zero(i));
        out << '\n';
    }
}

std::vector<double> read_values_csv(std::istream& in) {
    std::vector<double> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view const row = trim(line);
        if (row.empty() || row.front() == '#') continue;
        auto const comma = row.find(',');
        if (comma == std::string_view::npos) {
            throw Error(ErrorCode::ParseError,
                        "line " + std::to_string(line_no) + ": expected 'index,value'");
        }
        std::string_view const index_field = trim(row.substr(0, comma));
        std::string_view value_field = row.substr(comma + 1);
        value_field = value_field.substr(0, value_field.find(','));
        if (out.empty() && line_no == 1 && index_field == "index") continue;
        std::size_t index = 0;
        auto const [ptr, ec] =
            std::from_chars(index_field.data(), index_field.data() + index_field.size(), index);
        if (ec != std::errc() || ptr != index_field.data() + index_field.size() ||
            index != out.size()) {
            throw Error(ErrorCode::ParseError,
                        "line " + std::to_string(line_no) + ": indices must be 0, 1, 2, ...");
        }
        out.push_back(parse_double(value_field));
    }
    if (out.empty()) throw Error(ErrorCode::EmptyInput, "no values in CSV input");
    return out;
}

std::vector<double> read_values(std::istream& in) {
    std::string const text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    auto const first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
        json j;
        try {
            j = json::parse(text);
        } catch (json::exception const& e) {
            throw Error(ErrorCode::ParseError, e.what());
        }
        if (j.is_array()) return doubles_from_json(j);
        if (j.contains("probs")) return doubles_from_json(j["probs"]);
        if (j.contains("values")) return doubles_from_json(j["values"]);
        throw Error(ErrorCode::ParseError, "JSON input needs a 'probs' or 'values' array");
    }
    std::istringstream csv(text);
    return read_values_csv(csv);
}

std::string dump(json const& j) { return j.dump(2) + "\n"; }

} // namespace photocount::io
