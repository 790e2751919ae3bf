#include "photocount/extended.hpp"

#include "photocount/error.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace photocount::extended {

namespace {

// Owning MPFR scalar with explicit precision. Every operation rounds to
// nearest at the destination's precision; there is no global state.
class Mpfr {
  public:
    explicit Mpfr(mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
    Mpfr(double value, mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_d(v_, value, MPFR_RNDN); }
    Mpfr(Mpfr const& other) {
        mpfr_init2(v_, mpfr_get_prec(other.v_));
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    Mpfr(Mpfr&& other) noexcept {
        mpfr_init2(v_, mpfr_get_prec(other.v_));
        mpfr_swap(v_, other.v_);
    }
    Mpfr& operator=(Mpfr const& other) {
        if (this != &other) {
            mpfr_set_prec(v_, mpfr_get_prec(other.v_));
            mpfr_set(v_, other.v_, MPFR_RNDN);
        }
        return *this;
    }
    Mpfr& operator=(Mpfr&& other) noexcept {
        mpfr_swap(v_, other.v_);
        return *this;
    }
    ~Mpfr() { mpfr_clear(v_); }

    mpfr_ptr get() noexcept { return v_; }
    mpfr_srcptr get() const noexcept { return v_; }

    double to_double() const noexcept { return mpfr_get_d(v_, MPFR_RNDN); }

  private:
    mpfr_t v_;
};

void require_finite(std::span<double const> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw Error(ErrorCode::NonFiniteInput, "entry " + std::to_string(i) + " is not finite");
        }
    }
}

// Shared scalars of the loss model at working precision.
struct LossModel {
    LossModel(double efficiency, mpfr_prec_t bits)
        : eta(efficiency, bits), loss(bits), inv_eta(bits), step(bits) {
        mpfr_ui_sub(loss.get(), 1, eta.get(), MPFR_RNDN);
        mpfr_ui_div(inv_eta.get(), 1, eta.get(), MPFR_RNDN);
        mpfr_ui_sub(step.get(), 1, inv_eta.get(), MPFR_RNDN);
    }
    Mpfr eta;
    Mpfr loss;
    Mpfr inv_eta;
    Mpfr step;
};

} // namespace

struct ExtendedVector::Impl {
    mpfr_prec_t bits;
    std::vector<Mpfr> values;
};

unsigned working_precision(TransformSpec const& spec) {
    double const growth = std::log2(std::max(1.0, 2.0 / spec.eta() - 1.0));
    return 96u + static_cast<unsigned>(std::ceil(static_cast<double>(spec.dim()) * growth));
}

ExtendedVector::ExtendedVector(std::span<double const> values, unsigned precision_bits) {
    require_finite(values);
    auto impl = std::make_shared<Impl>();
    impl->bits = std::max<mpfr_prec_t>(precision_bits, 53);
    impl->values.reserve(values.size());
    for (double v : values) impl->values.emplace_back(v, impl->bits);
    impl_ = std::move(impl);
}

ExtendedVector::ExtendedVector(std::shared_ptr<Impl const> impl) : impl_(std::move(impl)) {}

std::size_t ExtendedVector::size() const noexcept { return impl_->values.size(); }

unsigned ExtendedVector::precision_bits() const noexcept {
    return static_cast<unsigned>(impl_->bits);
}

double ExtendedVector::at(std::size_t i) const { return impl_->values.at(i).to_double(); }

std::vector<double> ExtendedVector::to_doubles() const {
    std::vector<double> out;
    out.reserve(size());
    for (auto const& v : impl_->values) out.push_back(v.to_double());
    return out;
}

double ExtendedVector::sum() const {
    Mpfr total(impl_->bits);
    for (auto const& v : impl_->values) mpfr_add(total.get(), total.get(), v.get(), MPFR_RNDN);
    return total.to_double();
}

double ExtendedVector::max_abs_difference(std::span<double const> other) const {
    Mpfr worst(impl_->bits);
    Mpfr diff(impl_->bits);
    std::size_t const len = std::max(size(), other.size());
    for (std::size_t i = 0; i < len; ++i) {
        if (i < size()) {
            mpfr_set(diff.get(), impl_->values[i].get(), MPFR_RNDN);
        } else {
            mpfr_set_zero(diff.get(), 1);
        }
        if (i < other.size()) mpfr_sub_d(diff.get(), diff.get(), other[i], MPFR_RNDN);
        mpfr_abs(diff.get(), diff.get(), MPFR_RNDN);
        if (mpfr_greater_p(diff.get(), worst.get())) mpfr_set(worst.get(), diff.get(), MPFR_RNDN);
    }
    return worst.to_double();
}

ExtendedVector forward(ExtendedVector const& p, TransformSpec const& spec) {
    std::size_t const dim = spec.dim();
    std::size_t const len = p.size();
    if (len > dim) {
        throw Error(ErrorCode::DimensionMismatch,
                    "vector has " + std::to_string(len) + " entries but dim is " + std::to_string(dim));
    }
    mpfr_prec_t const bits = p.impl_->bits;
    auto const& pv = p.impl_->values;
    LossModel const model(spec.eta(), bits);

    auto out = std::make_shared<ExtendedVector::Impl>();
    out->bits = bits;
    out->values.reserve(dim);

    // Q_m = sum_{n >= m} w(n, m) P_n with w(m, m) = eta^m and
    // w(n + 1, m) = w(n, m) (n + 1)/(n + 1 - m) (1 - eta).
    Mpfr diag(1.0, bits);
    Mpfr weight(bits);
    Mpfr acc(bits);
    Mpfr term(bits);
    for (std::size_t m = 0; m < dim; ++m) {
        mpfr_set_zero(acc.get(), 1);
        mpfr_set(weight.get(), diag.get(), MPFR_RNDN);
        for (std::size_t n = m; n < len; ++n) {
            if (n > m) {
                mpfr_mul_ui(weight.get(), weight.get(), n, MPFR_RNDN);
                mpfr_div_ui(weight.get(), weight.get(), n - m, MPFR_RNDN);
                mpfr_mul(weight.get(), weight.get(), model.loss.get(), MPFR_RNDN);
            }
            mpfr_mul(term.get(), weight.get(), pv[n].get(), MPFR_RNDN);
            mpfr_add(acc.get(), acc.get(), term.get(), MPFR_RNDN);
        }
        out->values.push_back(acc);
        mpfr_mul(diag.get(), diag.get(), model.eta.get(), MPFR_RNDN);
    }
    return ExtendedVector(std::move(out));
}

ExtendedVector inverse(ExtendedVector const& q, TransformSpec const& spec) {
    std::size_t const dim = spec.dim();
    std::size_t const len = q.size();
    mpfr_prec_t const bits = q.impl_->bits;
    auto const& qv = q.impl_->values;
    LossModel const model(spec.eta(), bits);

    auto out = std::make_shared<ExtendedVector::Impl>();
    out->bits = bits;
    out->values.reserve(dim);

    // P_n = sum_{m >= n} c(m, n) Q_m with c(n, n) = eta^-n and
    // c(m + 1, n) = c(m, n) (m + 1)/(m + 1 - n) (1 - 1/eta).
    Mpfr diag(1.0, bits);
    Mpfr coeff(bits);
    Mpfr acc(bits);
    Mpfr term(bits);
    for (std::size_t n = 0; n < dim; ++n) {
        mpfr_set_zero(acc.get(), 1);
        mpfr_set(coeff.get(), diag.get(), MPFR_RNDN);
        for (std::size_t m = n; m < len; ++m) {
            if (m > n) {
                mpfr_mul_ui(coeff.get(), coeff.get(), m, MPFR_RNDN);
                mpfr_div_ui(coeff.get(), coeff.get(), m - n, MPFR_RNDN);
                mpfr_mul(coeff.get(), coeff.get(), model.step.get(), MPFR_RNDN);
            }
            mpfr_mul(term.get(), coeff.get(), qv[m].get(), MPFR_RNDN);
            mpfr_add(acc.get(), acc.get(), term.get(), MPFR_RNDN);
        }
        out->values.push_back(acc);
        mpfr_mul(diag.get(), diag.get(), model.inv_eta.get(), MPFR_RNDN);
    }
    return ExtendedVector(std::move(out));
}

ExtendedVector inverse_via_solve(ExtendedVector const& q, TransformSpec const& spec) {
    std::size_t const dim = spec.dim();
    if (q.size() != dim) {
        throw Error(ErrorCode::DimensionMismatch,
                    "expected " + std::to_string(dim) + " values, got " + std::to_string(q.size()));
    }
    mpfr_prec_t const bits = q.impl_->bits;
    auto const& qv = q.impl_->values;
    LossModel const model(spec.eta(), bits);

    // Row m of T: t(m, n) = C(n, m) eta^m (1 - eta)^(n - m), n >= m.
    std::vector<Mpfr> solution(dim, Mpfr(bits));
    Mpfr diag(bits);
    Mpfr entry(bits);
    Mpfr acc(bits);
    Mpfr term(bits);
    for (std::size_t i = dim; i-- > 0;) {
        mpfr_pow_ui(diag.get(), model.eta.get(), i, MPFR_RNDN);
        mpfr_set(acc.get(), qv[i].get(), MPFR_RNDN);
        mpfr_set(entry.get(), diag.get(), MPFR_RNDN);
        for (std::size_t n = i + 1; n < dim; ++n) {
            mpfr_mul_ui(entry.get(), entry.get(), n, MPFR_RNDN);
            mpfr_div_ui(entry.get(), entry.get(), n - i, MPFR_RNDN);
            mpfr_mul(entry.get(), entry.get(), model.loss.get(), MPFR_RNDN);
            mpfr_mul(term.get(), entry.get(), solution[n].get(), MPFR_RNDN);
            mpfr_sub(acc.get(), acc.get(), term.get(), MPFR_RNDN);
        }
        mpfr_div(solution[i].get(), acc.get(), diag.get(), MPFR_RNDN);
    }

    auto out = std::make_shared<ExtendedVector::Impl>();
    out->bits = bits;
    out->values = std::move(solution);
    return ExtendedVector(std::move(out));
}

SignedDistribution inverse_rounded(std::span<double const> q, TransformSpec const& spec) {
    TransformSpec const working(spec.eta(), std::max(spec.dim(), q.size()));
    ExtendedVector const input(q, working_precision(working));
    SignedDistribution out;
    out.values = inverse(input, spec).to_doubles();
    detail::annotate_series(q, spec.eta(), out);
    return out;
}

} // namespace photocount::extended
