#pragma once

#include <stdexcept>
#include <string>

namespace mob {

/// Adaptive step control drove the step size below the configured minimum.
struct StepUnderflow : std::runtime_error {
    explicit StepUnderflow(const std::string& what) : std::runtime_error(what) {}
};

/// A state component became NaN or infinite during evaluation.
struct NonFiniteState : std::runtime_error {
    explicit NonFiniteState(const std::string& what) : std::runtime_error(what) {}
};

/// A tangent vector collapsed below representable magnitude before renormalization.
struct DegenerateFrame : std::runtime_error {
    explicit DegenerateFrame(const std::string& what) : std::runtime_error(what) {}
};

/// Correlation matrix could not be factorized even after nugget escalation.
struct SingularCorrelation : std::runtime_error {
    explicit SingularCorrelation(const std::string& what) : std::runtime_error(what) {}
};

/// No admissible candidate remained in the acquisition pool.
struct EmptyPool : std::runtime_error {
    explicit EmptyPool(const std::string& what) : std::runtime_error(what) {}
};

/// A physical point fell outside the declared parameter domain.
struct OutOfDomain : std::runtime_error {
    explicit OutOfDomain(const std::string& what) : std::runtime_error(what) {}
};

/// Paired vectors of unequal length.
struct LengthMismatch : std::runtime_error {
    explicit LengthMismatch(const std::string& what) : std::runtime_error(what) {}
};

/// Reference values have zero spread where a spread-normalized metric was requested.
struct ZeroSpread : std::runtime_error {
    explicit ZeroSpread(const std::string& what) : std::runtime_error(what) {}
};

/// Run records from different problems were mixed in one aggregation.
struct MixedProblems : std::runtime_error {
    explicit MixedProblems(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mob
