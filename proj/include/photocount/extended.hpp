#pragma once

#include "photocount/transform.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

// Arbitrary-precision (MPFR) route through the transform.
//
// The inverse transform is badly conditioned for eta < 1: rounding a photocount
// vector to double and inverting it amplifies the rounding by up to
// C(k, n) (2 (1 - eta))^(k - n). Past a few tens of components the double
// route loses every significant digit. The functions here carry enough bits
// to keep absolute errors far below 1e-9 for any normalized input.

namespace photocount::extended {

/// Working precision in bits: 96 + ceil(dim * log2(2/eta - 1)).
unsigned working_precision(TransformSpec const& spec);

/// Immutable vector of MPFR values sharing one precision.
class ExtendedVector {
  public:
    /// Exact conversion of each double at `precision_bits`.
    ExtendedVector(std::span<double const> values, unsigned precision_bits);

    std::size_t size() const noexcept;
    unsigned precision_bits() const noexcept;

    /// Value i rounded to nearest double.
    double at(std::size_t i) const;
    std::vector<double> to_doubles() const;

    /// Sum at working precision, rounded once.
    double sum() const;

    /// max_i |this[i] - other[i]| evaluated at working precision, rounded once.
    /// Shorter operands are zero-padded.
    double max_abs_difference(std::span<double const> other) const;

    struct Impl;

  private:
    explicit ExtendedVector(std::shared_ptr<Impl const> impl);
    std::shared_ptr<Impl const> impl_;

    friend ExtendedVector forward(ExtendedVector const&, TransformSpec const&);
    friend ExtendedVector inverse(ExtendedVector const&, TransformSpec const&);
    friend ExtendedVector inverse_via_solve(ExtendedVector const&, TransformSpec const&);
};

/// Q = T P with spec.dim() entries. Throws Error{DimensionMismatch} if p is longer.
ExtendedVector forward(ExtendedVector const& p, TransformSpec const& spec);

/// Inverse series over every available Q_m; spec.dim() entries.
ExtendedVector inverse(ExtendedVector const& q, TransformSpec const& spec);

/// Back-substitution. Requires q.size() == spec.dim().
ExtendedVector inverse_via_solve(ExtendedVector const& q, TransformSpec const& spec);

/// Same contract as photocount::inverse, computed at working_precision(spec)
/// and rounded to double once per component.
SignedDistribution inverse_rounded(std::span<double const> q, TransformSpec const& spec);

} // namespace photocount::extended
