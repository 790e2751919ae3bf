#pragma once

#include "photocount/distributions.hpp"
#include "photocount/transform.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace photocount {

/// Slack on barycentric coordinates before a point counts as outside.
inline constexpr double geometric_tolerance = 1e-10;

struct SimplexViolation {
    std::size_t index;
    double value;

    friend bool operator==(SimplexViolation const&, SimplexViolation const&) = default;
};

struct SimplexCheck {
    bool inside;
    /// Coordinates of q in the basis of T's columns (the reconstructed P).
    std::vector<double> barycentric;
    /// Coordinates outside [-geometric_tolerance, 1 + geometric_tolerance].
    std::vector<SimplexViolation> violations;
};

/// Columns of T: vertex n is the Binomial(n, eta) law on 0..dim-1.
std::vector<Pmf> vertices(TransformSpec const& spec);

/// Throws Error{DimensionMismatch} if q.size() != spec.dim() and
/// Error{NotNormalized} if |sum(q) - 1| > 1e-9.
SimplexCheck contains(std::span<double const> q, TransformSpec const& spec);

/// det T = eta^(dim (dim - 1) / 2), the volume ratio of the Q- and P-simplices.
double contraction_ratio(TransformSpec const& spec);

} // namespace photocount
