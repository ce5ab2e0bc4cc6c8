#pragma once

#include <stdexcept>
#include <string>

namespace visclimit {

/// Parameter/region precondition violations (c outside J_nu, x outside the
/// interval, poles, negative pressure polynomial). CLI exit code 3.
struct region_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical failures: step-size underflow, trajectory leaving the a-priori
/// bound, endpoint mismatch, failed bisection brackets. CLI exit code 2.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace visclimit
