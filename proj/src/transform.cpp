#include "photocount/transform.hpp"

#include "photocount/error.hpp"
#include "photocount/stability.hpp"
#include "photocount/summation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace photocount {

namespace {

void require_finite(std::span<double const> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw Error(ErrorCode::NonFiniteInput,
                        "entry " + std::to_string(i) + " is not finite");
        }
    }
}

// Log-domain quantities are carried in long double: lgamma(m) grows like
// m log m, and its absolute rounding error becomes the relative error of every
// exponentiated term.
long double log_choose(std::size_t n, std::size_t k) noexcept {
    if (k == 0 || k == n) return 0.0L;
    long double const nn = static_cast<long double>(n);
    long double const kk = static_cast<long double>(k);
    return std::lgamma(nn + 1.0L) - std::lgamma(kk + 1.0L) - std::lgamma(nn - kk + 1.0L);
}

// log of C(n, m) eta^m (1 - eta)^(n - m), n >= m, eta in (0, 1).
long double log_loss_weight(std::size_t n, std::size_t m, long double log_eta,
                            long double log_loss) noexcept {
    long double w = log_choose(n, m) + static_cast<long double>(m) * log_eta;
    if (n > m) w += static_cast<long double>(n - m) * log_loss;
    return w;
}

double exp_to_double(long double x) noexcept { return static_cast<double>(std::exp(x)); }

SignedDistribution identity_reconstruction(std::span<double const> q, std::size_t dim) {
    SignedDistribution out;
    out.values.assign(dim, 0.0);
    std::copy_n(q.begin(), std::min(dim, q.size()), out.values.begin());
    detail::annotate_series(q, 1.0, out);
    return out;
}

} // namespace

TransformSpec::TransformSpec(double eta, std::size_t dim) : eta_(eta), dim_(dim) {
    if (eta == 0.0) throw Error(ErrorCode::EtaZero, "detection efficiency must be positive");
    if (!(eta > 0.0 && eta <= 1.0)) {
        std::ostringstream msg;
        msg << "detection efficiency " << eta << " outside (0, 1]";
        throw Error(ErrorCode::InvalidArgument, msg.str());
    }
    if (dim == 0) throw Error(ErrorCode::InvalidArgument, "dimension must be at least 1");
}

double log_binomial(std::size_t n, std::size_t k) noexcept {
    return static_cast<double>(log_choose(n, k));
}

TransformMatrix::TransformMatrix(TransformSpec spec)
    : spec_(spec), entries_(spec.dim() * spec.dim(), 0.0) {
    std::size_t const dim = spec_.dim();
    double const eta = spec_.eta();
    if (eta == 1.0) {
        for (std::size_t i = 0; i < dim; ++i) entries_[i * dim + i] = 1.0;
        return;
    }
    long double const log_eta = std::log(static_cast<long double>(eta));
    long double const log_loss = std::log1p(-static_cast<long double>(eta));
    for (std::size_t m = 0; m < dim; ++m) {
        for (std::size_t n = m; n < dim; ++n) {
            entries_[m * dim + n] = exp_to_double(log_loss_weight(n, m, log_eta, log_loss));
        }
    }
}

std::vector<double> TransformMatrix::column(std::size_t n) const {
    std::vector<double> col(dim());
    for (std::size_t m = 0; m < dim(); ++m) col[m] = (*this)(m, n);
    return col;
}

TransformMatrix build_matrix(TransformSpec const& spec) { return TransformMatrix(spec); }

Pmf forward(Pmf const& p, TransformSpec const& spec) {
    std::size_t const dim = spec.dim();
    if (p.size() > dim) {
        throw Error(ErrorCode::DimensionMismatch,
                    "PMF has " + std::to_string(p.size()) + " entries but dim is " +
                        std::to_string(dim));
    }
    std::vector<double> q(dim, 0.0);
    double const eta = spec.eta();
    if (eta == 1.0) {
        std::copy(p.probs().begin(), p.probs().end(), q.begin());
    } else {
        long double const log_eta = std::log(static_cast<long double>(eta));
        long double const log_loss = std::log1p(-static_cast<long double>(eta));
        for (std::size_t m = 0; m < p.size(); ++m) {
            CompensatedSum<long double> acc;
            for (std::size_t n = m; n < p.size(); ++n) {
                if (p[n] == 0.0) continue;
                acc += std::exp(log_loss_weight(n, m, log_eta, log_loss)) * p[n];
            }
            q[m] = std::max(static_cast<double>(acc.value()), 0.0);
        }
    }
    return Pmf(std::move(q), p.tail_mass(), p.origin(), std::max(p.tail_mass(), max_epsilon_tail));
}

SignedDistribution inverse(std::span<double const> q, TransformSpec const& spec) {
    require_finite(q);
    std::size_t const dim = spec.dim();
    double const eta = spec.eta();
    if (eta == 1.0) return identity_reconstruction(q, dim);

    // term(n, m) = (-1)^(m-n) sign(Q_m) exp(log C(m,n) + (m-n) log(1/eta - 1) - n log eta + log|Q_m|)
    long double const log_eta = std::log(static_cast<long double>(eta));
    long double const log_odds = std::log1p(-static_cast<long double>(eta)) - log_eta;
    std::vector<long double> log_abs_q(q.size());
    for (std::size_t m = 0; m < q.size(); ++m) {
        log_abs_q[m] = q[m] == 0.0 ? 0.0L : std::log(std::abs(static_cast<long double>(q[m])));
    }

    SignedDistribution out;
    out.values.assign(dim, 0.0);
    for (std::size_t n = 0; n < std::min(dim, q.size()); ++n) {
        CompensatedSum<long double> acc;
        long double const nn = static_cast<long double>(n);
        for (std::size_t m = n; m < q.size(); ++m) {
            if (q[m] == 0.0) continue;
            long double const log_mag = log_choose(m, n) +
                                        static_cast<long double>(m - n) * log_odds -
                                        nn * log_eta + log_abs_q[m];
            bool const negative = ((m - n) % 2 == 1) != (q[m] < 0.0);
            long double const term = std::exp(log_mag);
            acc += negative ? -term : term;
        }
        out.values[n] = static_cast<double>(acc.value());
    }
    detail::annotate_series(q, eta, out);
    return out;
}

SignedDistribution inverse_via_solve(std::span<double const> q, TransformSpec const& spec) {
    require_finite(q);
    std::size_t const dim = spec.dim();
    if (q.size() != dim) {
        throw Error(ErrorCode::DimensionMismatch,
                    "expected " + std::to_string(dim) + " values, got " + std::to_string(q.size()));
    }
    if (spec.eta() == 1.0) return identity_reconstruction(q, dim);

    TransformMatrix const t(spec);
    SignedDistribution out;
    out.values.assign(dim, 0.0);
    for (std::size_t i = dim; i-- > 0;) {
        CompensatedSum<double> acc(q[i]);
        for (std::size_t n = i + 1; n < dim; ++n) acc += -t(i, n) * out.values[n];
        out.values[i] = acc.value() / t(i, i);
    }
    detail::annotate_series(q, spec.eta(), out);
    return out;
}

namespace detail {

void annotate_series(std::span<double const> q, double eta, SignedDistribution& out) {
    std::size_t const dim = out.values.size();
    out.converged.assign(dim, true);
    out.max_term_magnitude.assign(dim, 0.0);

    if (eta == 1.0) {
        // (1/eta - 1)^m vanishes except for m = 0.
        if (dim > 0 && !q.empty()) out.max_term_magnitude[0] = std::abs(q[0]);
        return;
    }
    double const log_odds = std::log1p(-eta) - std::log(eta);
    for (std::size_t n = 0; n < dim; ++n) {
        double largest = 0.0;
        for (std::size_t m = n; m < q.size(); ++m) {
            if (q[m] == 0.0) continue;
            double const log_a = static_cast<double>(m) * log_odds + log_binomial(m, n) +
                                 std::log(std::abs(q[m]));
            largest = std::max(largest, std::exp(log_a));
        }
        out.max_term_magnitude[n] = largest;
        out.converged[n] = std::isfinite(out.values[n]) && decay_onset(q, eta, n).has_value();
    }
}

} // namespace detail

} // namespace photocount
