#pragma once

#include <cmath>

namespace photocount {

/*!
 * Compensated accumulator (Neumaier's variant of Kahan summation).
 *
 * Unlike plain Kahan summation this also recovers the low-order bits when the
 * incoming term is larger in magnitude than the running sum, which is the
 * usual situation for alternating series whose terms grow before decaying.
 */
template <typename Real>
class CompensatedSum {
  public:
    constexpr CompensatedSum() = default;
    constexpr explicit CompensatedSum(Real initial) : sum_(initial) {}

    constexpr CompensatedSum& operator+=(Real value) noexcept {
        Real const t = sum_ + value;
        using std::abs;
        if (abs(sum_) >= abs(value)) {
            compensation_ += (sum_ - t) + value;
        } else {
            compensation_ += (value - t) + sum_;
        }
        sum_ = t;
        return *this;
    }

    constexpr Real value() const noexcept { return sum_ + compensation_; }

  private:
    Real sum_{0};
    Real compensation_{0};
};

} // namespace photocount
