#pragma once

#include "photocount/distributions.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace photocount {

/// One term a_nm = a1_nm * a2_m of the alternating inverse series for P_n.
struct SeriesTerm {
    std::size_t n;
    std::size_t m;
    double magnitude; ///< (1/eta - 1)^m C(m, n) Q_m
    double factor1;   ///< (1/eta - 1)^m C(m, n)
    double factor2;   ///< Q_m
};

enum class Verdict { stable, unstable, undetermined };

std::string_view to_string(Verdict verdict) noexcept;

struct StabilityRecord {
    std::size_t n;
    std::optional<std::size_t> M_n;
    bool satisfied;
    /// Closed-form threshold when an analytic family hint was supplied.
    std::optional<std::size_t> analytic_M_n;
};

struct StabilityReport {
    double eta;
    std::vector<StabilityRecord> per_n;
    std::optional<double> xi;
    std::optional<double> eta_cr;
    Verdict verdict;
};

using FamilyHint = std::variant<PoissonParams, CompoundPoissonParams>;

/// Throws Error{IndexOutOfRange} unless n <= m < q.size(), and
/// Error{InvalidArgument} unless 0 < eta < 1.
SeriesTerm series_term(Pmf const& q, double eta, std::size_t n, std::size_t m);

/*!
 * Leibniz monotonicity condition a_{n,m+1} < a_{nm}, i.e.
 *   Q_{m+1} < Q_m (1 - n/(m+1)) eta/(1 - eta).
 * A pair of zeros counts as holding.
 *
 * Throws Error{IndexOutOfRange} unless n <= m and m + 1 < q.size(), and
 * Error{InvalidArgument} unless 0 < eta < 1.
 */
bool criterion_holds(Pmf const& q, double eta, std::size_t n, std::size_t m);

/// Smallest M >= n from which the criterion holds up to the end of the
/// support; empty when it fails at the last testable index.
std::optional<std::size_t> find_Mn_empirical(Pmf const& q, double eta, std::size_t n);

/// ceil(n - 1 + (1 - eta)/eta * mean), floored at n.
std::size_t poisson_Mn(PoissonParams params, double eta, std::size_t n);

/// Closed-form threshold for the compound Poisson law; empty when xi <= 0.
std::optional<std::size_t> compound_poisson_Mn(CompoundPoissonParams params, double eta,
                                               std::size_t n);

/// xi = eta/(1 - eta) - mean/(a + mean). Requires 0 < eta < 1.
double compound_poisson_xi(CompoundPoissonParams params, double eta);

/// Critical efficiency (a/mean + 2)^-1.
double eta_critical(CompoundPoissonParams params);

/*!
 * Stability verdict for reconstructing P_0..P_{n_max} from q at efficiency eta.
 *
 * eta > 0.5 is stable outright and leaves per_n empty. Otherwise every n is
 * scanned: all thresholds found means stable; an index whose term ratios stay
 * >= 1 and non-decreasing over the final ten available m means unstable;
 * anything else is undetermined. n_max defaults to q.size() - 1.
 */
StabilityReport analyze(Pmf const& q, double eta, std::optional<std::size_t> n_max = std::nullopt,
                        std::optional<FamilyHint> family_hint = std::nullopt);

namespace detail {

/// |a_{n,m+1}| < |a_nm| for a possibly signed, possibly unnormalized q.
bool decays_at(std::span<double const> q, double eta, std::size_t n, std::size_t m) noexcept;

/// find_Mn_empirical on raw values.
std::optional<std::size_t> decay_onset(std::span<double const> q, double eta,
                                       std::size_t n) noexcept;

} // namespace detail

} // namespace photocount
