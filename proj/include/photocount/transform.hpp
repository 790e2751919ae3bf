#pragma once

#include "photocount/distributions.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace photocount {

/// Detection efficiency plus the number of retained components.
class TransformSpec {
  public:
    /// Throws Error{EtaZero} for eta == 0 and Error{InvalidArgument} for any
    /// other eta outside (0, 1] or dim == 0.
    TransformSpec(double eta, std::size_t dim);

    double eta() const noexcept { return eta_; }
    std::size_t dim() const noexcept { return dim_; }

    friend bool operator==(TransformSpec const&, TransformSpec const&) = default;

  private:
    double eta_;
    std::size_t dim_;
};

/*!
 * Dense Bernoulli loss matrix T with T(m, n) = C(n, m) eta^m (1 - eta)^(n - m)
 * for n >= m and 0 otherwise. Row index m is the photocount, column index n
 * the photon number, so column n is the Binomial(n, eta) law.
 */
class TransformMatrix {
  public:
    explicit TransformMatrix(TransformSpec spec);

    TransformSpec const& spec() const noexcept { return spec_; }
    std::size_t dim() const noexcept { return spec_.dim(); }

    double operator()(std::size_t m, std::size_t n) const noexcept {
        return entries_[m * spec_.dim() + n];
    }

    std::vector<double> column(std::size_t n) const;

  private:
    TransformSpec spec_;
    std::vector<double> entries_; // row-major
};

/// Reconstructed photon-number values; entries may leave [0, 1].
struct SignedDistribution {
    std::vector<double> values;
    std::vector<bool> converged;
    /// Largest |a_nm| = (1/eta - 1)^m C(m, n) |Q_m| met while summing index n.
    std::vector<double> max_term_magnitude;

    std::size_t size() const noexcept { return values.size(); }
};

TransformMatrix build_matrix(TransformSpec const& spec);

/// log C(n, k) via log-gamma.
double log_binomial(std::size_t n, std::size_t k) noexcept;

/// Photocount law Q = T P. Throws Error{DimensionMismatch} if p is longer than spec.dim().
/// The result has spec.dim() entries and inherits p's tail mass and origin.
Pmf forward(Pmf const& p, TransformSpec const& spec);

/*!
 * Analytic inverse series
 *   P_n = sum_{m >= n} C(m, n) eta^-n (1 - 1/eta)^(m - n) Q_m
 * evaluated term by term in log-magnitude/sign form with ascending-m
 * compensated summation. Every available Q_m contributes; the output has
 * spec.dim() entries.
 *
 * Throws Error{NonFiniteInput} on NaN/inf input.
 */
SignedDistribution inverse(std::span<double const> q, TransformSpec const& spec);

/// Back-substitution on T P = Q. Requires q.size() == spec.dim().
SignedDistribution inverse_via_solve(std::span<double const> q, TransformSpec const& spec);

namespace detail {

/// Fills the per-index convergence flags and largest |a_nm| for a reconstruction.
void annotate_series(std::span<double const> q, double eta, SignedDistribution& out);

} // namespace detail

} // namespace photocount
