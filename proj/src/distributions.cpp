#include "photocount/distributions.hpp"

#include "photocount/error.hpp"
#include "photocount/summation.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <sstream>
#include <string>

namespace photocount {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EtaZero: return "EtaZero";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

std::string_view to_string(Origin origin) noexcept {
    switch (origin) {
    case Origin::analytic: return "analytic";
    case Origin::empirical: return "empirical";
    case Origin::user: return "user";
    }
    return "user";
}

Origin origin_from_string(std::string_view name) {
    if (name == "analytic") return Origin::analytic;
    if (name == "empirical") return Origin::empirical;
    if (name == "user") return Origin::user;
    throw Error(ErrorCode::ParseError, "unknown origin '" + std::string(name) + "'");
}

namespace {

double compensated_total(std::span<double const> values) {
    CompensatedSum<double> acc;
    for (double v : values) acc += v;
    return acc.value();
}

void require_finite_nonnegative(std::span<double const> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw Error(ErrorCode::NonFiniteInput,
                        "entry " + std::to_string(i) + " is not finite");
        }
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0.0) {
            std::ostringstream msg;
            msg << "entry " << i << " is negative (" << values[i] << ")";
            throw Error(ErrorCode::NegativeEntry, msg.str());
        }
    }
}

void require_epsilon_tail(double epsilon_tail) {
    if (!(epsilon_tail > 0.0 && epsilon_tail <= max_epsilon_tail)) {
        throw Error(ErrorCode::InvalidArgument, "epsilon_tail must lie in (0, 1e-3]");
    }
}

// Smallest n with tail(n) < epsilon: exponential then binary search over a
// non-increasing tail function.
template <typename Tail>
std::size_t truncation_index(Tail const& tail, double epsilon) {
    if (tail(0) < epsilon) return 0;
    std::size_t lo = 0; // tail(lo) >= epsilon
    std::size_t hi = 1;
    while (!(tail(hi) < epsilon)) {
        lo = hi;
        hi *= 2;
        if (hi > (std::size_t{1} << 40)) {
            throw Error(ErrorCode::InvalidArgument, "truncation support is unreasonably large");
        }
    }
    while (hi - lo > 1) {
        std::size_t const mid = lo + (hi - lo) / 2;
        if (tail(mid) < epsilon) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

} // namespace

Pmf::Pmf(std::vector<double> probs, double tail_mass, Origin origin, double tail_limit)
    : probs_(std::move(probs)), tail_mass_(tail_mass), origin_(origin) {
    if (probs_.empty()) throw Error(ErrorCode::EmptyInput, "a PMF needs at least one entry");
    require_finite_nonnegative(probs_);
    if (!std::isfinite(tail_mass_) || tail_mass_ < 0.0 || tail_mass_ > tail_limit) {
        std::ostringstream msg;
        msg << "tail mass " << tail_mass_ << " outside [0, " << tail_limit << "]";
        throw Error(ErrorCode::InvalidArgument, msg.str());
    }
    double const total = compensated_total(probs_);
    double const tol = normalization_tolerance(origin_);
    if (total < 1.0 - tol - tail_mass_ || total > 1.0 - tail_mass_ + tol) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "probabilities sum to " << total << " with tail mass " << tail_mass_;
        throw Error(ErrorCode::NotNormalized, msg.str());
    }
}

double Pmf::mean() const noexcept {
    CompensatedSum<double> acc;
    for (std::size_t m = 0; m < probs_.size(); ++m) acc += static_cast<double>(m) * probs_[m];
    return acc.value();
}

double poisson_tail(PoissonParams params, std::size_t n) {
    // P(X > n) = P(n + 1, mean), the regularized lower incomplete gamma.
    return boost::math::gamma_p(static_cast<double>(n) + 1.0, params.mean);
}

double compound_poisson_tail(CompoundPoissonParams params, std::size_t n) {
    // Negative binomial with success ratio p = mean / (a + mean):
    // P(X > n) = I_p(n + 1, a).
    double const a = params.clusterization;
    double const p = params.mean / (a + params.mean);
    return boost::math::ibeta(static_cast<double>(n) + 1.0, a, p);
}

Pmf poisson_pmf(PoissonParams params, double epsilon_tail) {
    if (!(params.mean > 0.0) || !std::isfinite(params.mean)) {
        throw Error(ErrorCode::InvalidArgument, "Poisson mean must be positive");
    }
    require_epsilon_tail(epsilon_tail);

    auto tail = [&](std::size_t n) { return poisson_tail(params, n); };
    std::size_t const last = truncation_index(tail, epsilon_tail);

    long double const mean = params.mean;
    long double const log_mean = std::log(mean);
    std::vector<double> probs(last + 1);
    for (std::size_t m = 0; m <= last; ++m) {
        long double const mm = static_cast<long double>(m);
        probs[m] = static_cast<double>(std::exp(mm * log_mean - mean - std::lgamma(mm + 1.0L)));
    }
    return Pmf(std::move(probs), tail(last), Origin::analytic, epsilon_tail);
}

Pmf compound_poisson_pmf(CompoundPoissonParams params, double epsilon_tail) {
    if (!(params.mean > 0.0) || !std::isfinite(params.mean)) {
        throw Error(ErrorCode::InvalidArgument, "compound Poisson mean must be positive");
    }
    if (!(params.clusterization > 0.0) || !std::isfinite(params.clusterization)) {
        throw Error(ErrorCode::InvalidArgument, "clusterization parameter must be positive");
    }
    require_epsilon_tail(epsilon_tail);

    auto tail = [&](std::size_t n) { return compound_poisson_tail(params, n); };
    std::size_t const last = truncation_index(tail, epsilon_tail);

    // Gamma(a+m) alone overflows near m = 170, so every term is assembled from
    // log-gamma differences in extended precision.
    long double const a = params.clusterization;
    long double const ratio = static_cast<long double>(params.mean) / a;
    long double const log_ratio = std::log(ratio);
    long double const log1p_ratio = std::log1p(ratio);
    long double const lgamma_a = std::lgamma(a);
    std::vector<double> probs(last + 1);
    for (std::size_t m = 0; m <= last; ++m) {
        long double const mm = static_cast<long double>(m);
        long double const log_q = std::lgamma(a + mm) - std::lgamma(mm + 1.0L) - lgamma_a +
                                  mm * log_ratio - (mm + a) * log1p_ratio;
        probs[m] = static_cast<double>(std::exp(log_q));
    }
    return Pmf(std::move(probs), tail(last), Origin::analytic, epsilon_tail);
}

Pmf pmf_from_values(std::span<double const> values, NormalizationPolicy policy) {
    if (values.empty()) throw Error(ErrorCode::EmptyInput, "no values supplied");
    require_finite_nonnegative(values);
    if (policy == NormalizationPolicy::strict) {
        return Pmf(std::vector<double>(values.begin(), values.end()), 0.0, Origin::user);
    }
    double const total = compensated_total(values);
    if (!(total > 0.0)) throw Error(ErrorCode::NotNormalized, "values sum to zero");
    std::vector<double> scaled(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) scaled[i] = values[i] / total;
    return Pmf(std::move(scaled), 0.0, Origin::user);
}

} // namespace photocount
