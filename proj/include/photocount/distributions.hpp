#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace photocount {

enum class Origin { analytic, empirical, user };

std::string_view to_string(Origin origin) noexcept;
Origin origin_from_string(std::string_view name);

/// Normalization slack allowed for a PMF of the given origin.
constexpr double normalization_tolerance(Origin origin) noexcept {
    return origin == Origin::analytic ? 1e-12 : 1e-9;
}

/// Default truncation threshold for the analytic families.
inline constexpr double default_epsilon_tail = 1e-12;

/// Largest truncation threshold accepted anywhere in the library.
inline constexpr double max_epsilon_tail = 1e-3;

/*!
 * Finite probability mass function indexed from 0.
 *
 * A Pmf may describe a truncated infinite distribution: `tail_mass` records
 * the probability discarded beyond the last stored index, so that
 * `sum(probs) + tail_mass == 1` up to the origin's normalization tolerance.
 * Instances are immutable and validated on construction.
 */
class Pmf {
  public:
    /// Throws Error{EmptyInput | NonFiniteInput | NegativeEntry | NotNormalized | InvalidArgument}.
    Pmf(std::vector<double> probs, double tail_mass, Origin origin,
        double tail_limit = max_epsilon_tail);

    std::span<double const> probs() const noexcept { return probs_; }
    std::vector<double> const& values() const noexcept { return probs_; }
    double tail_mass() const noexcept { return tail_mass_; }
    Origin origin() const noexcept { return origin_; }

    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](std::size_t i) const noexcept { return probs_[i]; }

    /// Probability at `i`, or 0 past the stored support.
    double at_or_zero(std::size_t i) const noexcept {
        return i < probs_.size() ? probs_[i] : 0.0;
    }

    double mean() const noexcept;

    friend bool operator==(Pmf const&, Pmf const&) = default;

  private:
    std::vector<double> probs_;
    double tail_mass_;
    Origin origin_;
};

struct PoissonParams {
    double mean;
};

/// Negative-binomial ("compound Poisson") law with clusterization `a`.
/// a = 1 is the thermal (geometric) law; a -> infinity tends to Poisson.
struct CompoundPoissonParams {
    double mean;
    double clusterization;
};

/// Poisson law truncated at the first N with P(X > N) < epsilon_tail.
Pmf poisson_pmf(PoissonParams params, double epsilon_tail = default_epsilon_tail);

/// Compound Poisson law truncated at the first N with P(X > N) < epsilon_tail.
Pmf compound_poisson_pmf(CompoundPoissonParams params,
                         double epsilon_tail = default_epsilon_tail);

/// Exact tail probabilities P(X > n) used for truncation.
double poisson_tail(PoissonParams params, std::size_t n);
double compound_poisson_tail(CompoundPoissonParams params, std::size_t n);

enum class NormalizationPolicy { strict, renormalize };

/// User-supplied values as a Pmf. Negative entries are always rejected.
Pmf pmf_from_values(std::span<double const> values, NormalizationPolicy policy);

} // namespace photocount
