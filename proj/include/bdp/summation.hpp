#pragma once

#include <cmath>

namespace bdp {

// Neumaier's variant of Kahan summation; robust when terms alternate in sign
// and partially cancel.
template <class T>
class BasicCompensatedSum {
public:
    void add(T term) noexcept {
        const T t = sum_ + term;
        if (std::abs(sum_) >= std::abs(term)) {
            compensation_ += (sum_ - t) + term;
        } else {
            compensation_ += (term - t) + sum_;
        }
        sum_ = t;
    }

    BasicCompensatedSum& operator+=(T term) noexcept {
        add(term);
        return *this;
    }

    T value() const noexcept { return sum_ + compensation_; }

private:
    T sum_ = 0;
    T compensation_ = 0;
};

using CompensatedSum = BasicCompensatedSum<double>;

}  // namespace bdp
