#include "cli.hpp"

#include "photocount/distributions.hpp"
#include "photocount/error.hpp"
#include "photocount/extended.hpp"
#include "photocount/io.hpp"
#include "photocount/montecarlo.hpp"
#include "photocount/simplex.hpp"
#include "photocount/stability.hpp"
#include "photocount/transform.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

namespace photocount::cli {

namespace {

double require_eta(RunConfig const& config) {
    if (!config.eta) throw ConfigError("--eta is required");
    double const eta = *config.eta;
    if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("--eta must lie in (0, 1]");
    return eta;
}

std::optional<FamilyHint> family_hint(RunConfig const& config) {
    if (!config.family) return std::nullopt;
    if (!config.mean) throw ConfigError("--mean is required with --family");
    if (*config.family == Family::poisson) return PoissonParams{*config.mean};
    if (!config.a) throw ConfigError("--a is required with --family compound-poisson");
    return CompoundPoissonParams{*config.mean, *config.a};
}

Pmf family_pmf(FamilyHint const& hint, double epsilon_tail) {
    if (auto const* p = std::get_if<PoissonParams>(&hint)) return poisson_pmf(*p, epsilon_tail);
    return compound_poisson_pmf(std::get<CompoundPoissonParams>(hint), epsilon_tail);
}

std::vector<double> read_input_values(std::filesystem::path const& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open input file '" + path.string() + "'");
    return io::read_values(in);
}

// Distribution from --input (validated strictly) or from --family.
Pmf input_pmf(RunConfig const& config) {
    if (config.input_path) {
        auto const values = read_input_values(*config.input_path);
        return pmf_from_values(values, NormalizationPolicy::strict);
    }
    if (auto hint = family_hint(config)) return family_pmf(*hint, config.epsilon_tail);
    throw ConfigError("either --input or --family is required");
}

std::vector<double> input_values(RunConfig const& config) {
    if (config.input_path) return read_input_values(*config.input_path);
    if (auto hint = family_hint(config)) return family_pmf(*hint, config.epsilon_tail).values();
    throw ConfigError("either --input or --family is required");
}

Format format_or(RunConfig const& config, Format fallback) {
    return config.format.value_or(fallback);
}

std::string render(Pmf const& pmf, Format format) {
    std::ostringstream s;
    if (format == Format::json) {
        s << io::dump(io::to_json(pmf));
    } else {
        io::write_pmf_csv(s, pmf);
    }
    return s.str();
}

std::string run_forward(RunConfig const& config) {
    double const eta = require_eta(config);
    Pmf const p = input_pmf(config);
    TransformSpec const spec(eta, config.dim.value_or(p.size()));
    return render(forward(p, spec), format_or(config, Format::json));
}

std::string run_invert(RunConfig const& config, std::ostream& err) {
    double const eta = require_eta(config);
    auto const q = input_values(config);
    TransformSpec const spec(eta, config.dim.value_or(q.size()));
    SignedDistribution const dist = config.extended_precision
                                        ? extended::inverse_rounded(q, spec)
                                        : inverse(q, spec);

    double total = 0.0;
    for (double v : q) total += v;
    if (std::abs(total - 1.0) <= 1e-9) {
        // Membership is judged on extended-precision coordinates so that long
        // inputs at low efficiency are not flagged by rounding noise alone.
        TransformSpec const full(eta, q.size());
        auto const coords =
            extended::inverse_via_solve(extended::ExtendedVector(q, extended::working_precision(full)),
                                        full)
                .to_doubles();
        std::vector<std::size_t> outside;
        for (std::size_t i = 0; i < coords.size(); ++i) {
            if (!(coords[i] >= -geometric_tolerance && coords[i] <= 1.0 + geometric_tolerance)) {
                outside.push_back(i);
            }
        }
        if (!outside.empty()) {
            err << "warning: OutsideSimplex: input lies outside the Q-simplex; invalid at indices";
            for (auto i : outside) err << ' ' << i;
            err << '\n';
        }
    }
    std::size_t unconverged = 0;
    for (bool c : dist.converged) unconverged += c ? 0 : 1;
    if (unconverged > 0) {
        err << "warning: NotConverged: " << unconverged
            << " component(s) show no monotone term decay within the input support\n";
    }

    std::ostringstream s;
    if (format_or(config, Format::json) == Format::json) {
        s << io::dump(io::to_json(dist));
    } else {
        io::write_signed_csv(s, dist);
    }
    return s.str();
}

std::string run_stability(RunConfig const& config) {
    double const eta = require_eta(config);
    Pmf const q = input_pmf(config);
    StabilityReport const report = analyze(q, eta, config.n_max, family_hint(config));
    std::ostringstream s;
    if (format_or(config, Format::csv) == Format::json) {
        s << io::dump(io::to_json(report));
    } else {
        io::write_stability_table(s, report);
    }
    return s.str();
}

std::string run_etacrit(RunConfig const& config) {
    auto const hint = family_hint(config);
    if (!hint) throw ConfigError("--family is required");
    double const value = std::holds_alternative<PoissonParams>(*hint)
                             ? 0.0
                             : eta_critical(std::get<CompoundPoissonParams>(*hint));
    if (!config.format) return io::format_double(value) + "\n";
    if (*config.format == Format::json) return io::dump(nlohmann::json{{"eta_cr", value}});
    return "eta_cr\n" + io::format_double(value) + "\n";
}

std::string run_simplex(RunConfig const& config) {
    double const eta = require_eta(config);
    std::optional<std::vector<double>> q;
    if (config.input_path) q = read_input_values(*config.input_path);
    std::size_t const dim = config.dim ? *config.dim : q ? q->size() : 0;
    if (dim == 0) throw ConfigError("--dim or --input is required");
    TransformSpec const spec(eta, dim);

    std::ostringstream vertex_csv;
    io::write_vertices_csv(vertex_csv, vertices(spec));
    if (!q) return vertex_csv.str();

    if (config.vertices_path) {
        std::ofstream v(*config.vertices_path);
        if (!v) throw ConfigError("cannot write '" + config.vertices_path->string() + "'");
        v << vertex_csv.str();
    }
    SimplexCheck const check = contains(*q, spec);
    std::ostringstream s;
    if (format_or(config, Format::json) == Format::json) {
        s << io::dump(io::to_json(check));
    } else {
        io::write_values_csv(s, check.barycentric, "barycentric");
    }
    return s.str();
}

std::string run_simulate(RunConfig const& config) {
    double const eta = require_eta(config);
    Pmf const p = input_pmf(config);
    if (config.samples == 0) throw ConfigError("--samples must be positive");
    SimulationRun const sim =
        simulate(p, eta, config.samples, config.seed, SimulationOptions{config.threads});
    std::ostringstream s;
    if (format_or(config, Format::json) == Format::json) {
        s << io::dump(io::to_json(sim));
    } else {
        io::write_pmf_csv(s, sim.empirical_q);
    }
    return s.str();
}

std::string run_figures(RunConfig const& config) {
    if (config.format == Format::json) throw ConfigError("figures emits CSV only");
    if (config.which == 1) return figure1_csv();
    if (config.which == 2) return figure2_csv(config.epsilon_tail, config.max_index);
    throw ConfigError("--which must be 1 or 2");
}

void emit(RunConfig const& config, std::string const& text, std::ostream& out) {
    if (!config.output_path) {
        out << text;
        return;
    }
    std::filesystem::path path = *config.output_path;
    if (path.is_relative()) {
        if (char const* dir = std::getenv(output_dir_env); dir && *dir) path = dir / path;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ConfigError("cannot write '" + path.string() + "'");
    file << text;
}

} // namespace

std::string figure1_csv() {
    std::ostringstream s;
    s << "eta,vertex,q_0,q_1,q_2\n";
    for (double eta : {1.0, 0.8, 0.4}) {
        auto const verts = vertices(TransformSpec(eta, 3));
        for (std::size_t v = 0; v < verts.size(); ++v) {
            s << io::format_double(eta) << ',' << v;
            for (double x : verts[v].probs()) s << ',' << io::format_double(x);
            s << '\n';
        }
    }
    return s.str();
}

std::string figure2_csv(double epsilon_tail, std::size_t max_index) {
    constexpr double mean = 4.0;
    std::vector<double> const shapes{0.2, 1.0, 50.0};
    std::vector<Pmf> curves;
    for (double a : shapes) curves.push_back(compound_poisson_pmf({mean, a}, epsilon_tail));

    std::ostringstream s;
    s << "m";
    for (double a : shapes) s << ",a=" << io::format_double(a);
    s << '\n';
    for (std::size_t m = 0; m <= max_index; ++m) {
        s << m;
        for (auto const& c : curves) {
            s << ',';
            if (m < c.size()) s << io::format_double(c[m]);
        }
        s << '\n';
    }
    return s.str();
}

int run(RunConfig const& config, std::ostream& out, std::ostream& err) {
    try {
        std::string text;
        switch (config.command) {
        case Command::forward: text = run_forward(config); break;
        case Command::invert: text = run_invert(config, err); break;
        case Command::stability: text = run_stability(config); break;
        case Command::etacrit: text = run_etacrit(config); break;
        case Command::simplex: text = run_simplex(config); break;
        case Command::simulate: text = run_simulate(config); break;
        case Command::figures: text = run_figures(config); break;
        }
        emit(config, text, out);
        return exit_ok;
    } catch (ConfigError const& e) {
        err << "error: BadConfig: " << e.what() << '\n';
        return exit_bad_config;
    } catch (Error const& e) {
        err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
        return exit_domain_error;
    }
}

} // namespace photocount::cli
