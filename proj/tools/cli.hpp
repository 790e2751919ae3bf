#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

namespace photocount::cli {

enum class Command { forward, invert, stability, etacrit, simplex, simulate, figures };
enum class Format { json, csv };
enum class Family { poisson, compound_poisson };

/// Environment variable naming the directory for relative --output paths.
inline constexpr char const* output_dir_env = "PHOTOCOUNT_OUTPUT_DIR";

struct RunConfig {
    Command command = Command::forward;
    std::optional<double> eta;
    std::optional<std::filesystem::path> input_path;
    std::optional<std::filesystem::path> output_path;
    std::optional<Family> family;
    std::optional<double> mean;
    std::optional<double> a;
    double epsilon_tail = 1e-12;
    std::optional<std::size_t> dim;
    std::optional<std::size_t> n_max;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    /// Unset picks the command's natural rendering (JSON for most, a table
    /// for stability, CSV for figures, a bare number for etacrit).
    std::optional<Format> format;
    bool extended_precision = false;
    int which = 2;
    std::optional<std::filesystem::path> vertices_path;
    std::size_t max_index = 30;
};

/// Invalid or incomplete configuration; maps to exit status 2.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_domain_error = 1;
inline constexpr int exit_bad_config = 2;

/// Dispatches `config`, writing results to `out` (or the output file) and
/// diagnostics to `err`. Failures print one "error: <Code>: <message>" line.
int run(RunConfig const& config, std::ostream& out, std::ostream& err);

/// Output of the `figures --which 2` export for the given settings.
std::string figure2_csv(double epsilon_tail, std::size_t max_index);

/// Output of the `figures --which 1` export.
std::string figure1_csv();

} // namespace photocount::cli
