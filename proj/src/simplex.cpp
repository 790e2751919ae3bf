#include "photocount/simplex.hpp"

#include "photocount/error.hpp"
#include "photocount/summation.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace photocount {

std::vector<Pmf> vertices(TransformSpec const& spec) {
    TransformMatrix const t = build_matrix(spec);
    std::vector<Pmf> out;
    out.reserve(spec.dim());
    for (std::size_t n = 0; n < spec.dim(); ++n) {
        out.emplace_back(t.column(n), 0.0, Origin::analytic);
    }
    return out;
}

SimplexCheck contains(std::span<double const> q, TransformSpec const& spec) {
    if (q.size() != spec.dim()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "expected " + std::to_string(spec.dim()) + " values, got " +
                        std::to_string(q.size()));
    }
    CompensatedSum<double> total;
    for (double v : q) total += v;
    if (!(std::abs(total.value() - 1.0) <= 1e-9)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "values sum to " << total.value();
        throw Error(ErrorCode::NotNormalized, msg.str());
    }

    SimplexCheck check{true, inverse_via_solve(q, spec).values, {}};
    for (std::size_t i = 0; i < check.barycentric.size(); ++i) {
        double const c = check.barycentric[i];
        if (!(c >= -geometric_tolerance && c <= 1.0 + geometric_tolerance)) {
            check.violations.push_back({i, c});
        }
    }
    check.inside = check.violations.empty();
    return check;
}

double contraction_ratio(TransformSpec const& spec) {
    double const dim = static_cast<double>(spec.dim());
    return std::pow(spec.eta(), dim * (dim - 1.0) / 2.0);
}

} // namespace photocount
