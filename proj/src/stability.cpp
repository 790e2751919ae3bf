#include "photocount/stability.hpp"

#include "photocount/error.hpp"
#include "photocount/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace photocount {

namespace {

constexpr std::size_t growth_window = 10;

void require_open_eta(double eta) {
    if (eta == 0.0) throw Error(ErrorCode::EtaZero, "detection efficiency must be positive");
    if (!(eta > 0.0 && eta < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "criterion requires 0 < eta < 1");
    }
}

void require_family(CompoundPoissonParams params) {
    if (!(params.mean > 0.0) || !(params.clusterization > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "compound Poisson parameters must be positive");
    }
}

// Ceiling that treats values within rounding of an integer as that integer.
double snapped_ceil(double x) {
    double const nearest = std::round(x);
    if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x))) return nearest;
    return std::ceil(x);
}

std::size_t threshold_at_least(double x, std::size_t n) {
    double const c = snapped_ceil(x);
    if (c <= static_cast<double>(n)) return n;
    return static_cast<std::size_t>(c);
}

// Ratio a_{n,m+1}/a_nm without the combinatorial (m+1)/(m+1-n) factor, i.e.
// (1/eta - 1) Q_{m+1}/Q_m. That factor tends to 1, so this is the quantity whose
// trend decides growth of the tail.
double reduced_ratio(std::span<double const> q, double odds, std::size_t m) {
    double const cur = std::abs(q[m]);
    double const next = std::abs(q[m + 1]);
    if (cur == 0.0) return next == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return odds * next / cur;
}

// Ratios at least 1 with no downward trend over the final window.
bool tail_grows(std::span<double const> q, double eta, std::size_t n) {
    if (q.size() < growth_window + 1) return false;
    std::size_t const first = q.size() - 1 - growth_window;
    if (first < n) return false;
    double const odds = (1.0 - eta) / eta;
    double previous = 0.0;
    for (std::size_t m = first; m + 1 < q.size(); ++m) {
        double const r = reduced_ratio(q, odds, m);
        if (!(r >= 1.0)) return false;
        if (m > first && r < previous * (1.0 - 1e-9)) return false;
        previous = r;
    }
    return true;
}

} // namespace

std::string_view to_string(Verdict verdict) noexcept {
    switch (verdict) {
    case Verdict::stable: return "stable";
    case Verdict::unstable: return "unstable";
    case Verdict::undetermined: return "undetermined";
    }
    return "undetermined";
}

namespace detail {

bool decays_at(std::span<double const> q, double eta, std::size_t n, std::size_t m) noexcept {
    double const cur = std::abs(q[m]);
    double const next = std::abs(q[m + 1]);
    if (cur == 0.0 && next == 0.0) return true;
    double const shrink = static_cast<double>(m + 1 - n) / static_cast<double>(m + 1);
    return next < cur * shrink * (eta / (1.0 - eta));
}

std::optional<std::size_t> decay_onset(std::span<double const> q, double eta,
                                       std::size_t n) noexcept {
    if (q.size() < 2 || n + 2 > q.size()) return n;
    for (std::size_t m = q.size() - 1; m-- > n;) {
        if (!decays_at(q, eta, n, m)) {
            if (m + 2 == q.size()) return std::nullopt;
            return m + 1;
        }
    }
    return n;
}

} // namespace detail

SeriesTerm series_term(Pmf const& q, double eta, std::size_t n, std::size_t m) {
    require_open_eta(eta);
    if (n > m || m >= q.size()) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "need n <= m < " + std::to_string(q.size()) + ", got n=" +
                        std::to_string(n) + " m=" + std::to_string(m));
    }
    double const log_factor1 =
        static_cast<double>(m) * (std::log1p(-eta) - std::log(eta)) + log_binomial(m, n);
    SeriesTerm term{n, m, 0.0, std::exp(log_factor1), q[m]};
    if (q[m] > 0.0) term.magnitude = std::exp(log_factor1 + std::log(q[m]));
    return term;
}

bool criterion_holds(Pmf const& q, double eta, std::size_t n, std::size_t m) {
    require_open_eta(eta);
    if (n > m || m + 1 >= q.size()) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "need n <= m and m + 1 < " + std::to_string(q.size()) + ", got n=" +
                        std::to_string(n) + " m=" + std::to_string(m));
    }
    return detail::decays_at(q.probs(), eta, n, m);
}

std::optional<std::size_t> find_Mn_empirical(Pmf const& q, double eta, std::size_t n) {
    require_open_eta(eta);
    return detail::decay_onset(q.probs(), eta, n);
}

std::size_t poisson_Mn(PoissonParams params, double eta, std::size_t n) {
    require_open_eta(eta);
    if (!(params.mean > 0.0)) throw Error(ErrorCode::InvalidArgument, "Poisson mean must be positive");
    double const x = static_cast<double>(n) - 1.0 + (1.0 - eta) / eta * params.mean;
    return threshold_at_least(x, n);
}

double compound_poisson_xi(CompoundPoissonParams params, double eta) {
    require_open_eta(eta);
    require_family(params);
    return eta / (1.0 - eta) - params.mean / (params.clusterization + params.mean);
}

std::optional<std::size_t> compound_poisson_Mn(CompoundPoissonParams params, double eta,
                                               std::size_t n) {
    double const xi = compound_poisson_xi(params, eta);
    if (!(xi > 0.0)) return std::nullopt;
    double const a = params.clusterization;
    double const rhs = eta * (static_cast<double>(n) - 1.0) / (1.0 - eta) +
                       params.mean * a / (a + params.mean);
    if (rhs < 0.0) return std::size_t{0};
    return threshold_at_least(rhs / xi, n);
}

double eta_critical(CompoundPoissonParams params) {
    require_family(params);
    return 1.0 / (params.clusterization / params.mean + 2.0);
}

StabilityReport analyze(Pmf const& q, double eta, std::optional<std::size_t> n_max,
                        std::optional<FamilyHint> family_hint) {
    if (eta == 0.0) throw Error(ErrorCode::EtaZero, "detection efficiency must be positive");
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "detection efficiency outside (0, 1]");
    }

    StabilityReport report{eta, {}, std::nullopt, std::nullopt, Verdict::stable};
    if (family_hint) {
        if (std::holds_alternative<PoissonParams>(*family_hint)) {
            // a -> infinity limit of the compound Poisson expressions.
            report.eta_cr = 0.0;
            if (eta < 1.0) report.xi = eta / (1.0 - eta);
        } else {
            auto const& cp = std::get<CompoundPoissonParams>(*family_hint);
            report.eta_cr = eta_critical(cp);
            if (eta < 1.0) report.xi = compound_poisson_xi(cp, eta);
        }
    }
    if (eta > 0.5) return report;

    std::size_t const last = n_max.value_or(q.size() - 1);
    bool all_found = true;
    bool growing = false;
    report.per_n.reserve(last + 1);
    for (std::size_t n = 0; n <= last; ++n) {
        StabilityRecord rec{n, detail::decay_onset(q.probs(), eta, n), false, std::nullopt};
        rec.satisfied = rec.M_n.has_value();
        if (family_hint) {
            if (auto const* poisson = std::get_if<PoissonParams>(&*family_hint)) {
                rec.analytic_M_n = poisson_Mn(*poisson, eta, n);
            } else {
                rec.analytic_M_n =
                    compound_poisson_Mn(std::get<CompoundPoissonParams>(*family_hint), eta, n);
            }
        }
        if (!rec.satisfied) {
            all_found = false;
            growing = growing || tail_grows(q.probs(), eta, n);
        }
        report.per_n.push_back(rec);
    }
    report.verdict = all_found ? Verdict::stable
                     : growing ? Verdict::unstable
                               : Verdict::undetermined;
    return report;
}

} // namespace photocount
