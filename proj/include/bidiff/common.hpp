#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bidiff {

using Cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline const Cplx I{0.0, 1.0};
inline const Cplx two_pi_i{0.0, 2.0 * pi};

// Base class for all library errors. Subclasses name the failure mode so
// callers (and the CLI exit-code mapping) can distinguish bad input,
// broken mathematical invariants, and numerical non-convergence.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define BIDIFF_DEFINE_ERROR(NAME)                                     \
    struct NAME final : Error {                                       \
        explicit NAME(const std::string& what) : Error(#NAME ": " + what) {} \
    }

// invalid user input / configuration
BIDIFF_DEFINE_ERROR(BadModulus);
BIDIFF_DEFINE_ERROR(DegenerateCurve);
BIDIFF_DEFINE_ERROR(BadConfiguration);
BIDIFF_DEFINE_ERROR(ConfigError);

// evaluation domain violations
BIDIFF_DEFINE_ERROR(LatticePole);
BIDIFF_DEFINE_ERROR(ChartDomain);
BIDIFF_DEFINE_ERROR(DiagonalPole);
BIDIFF_DEFINE_ERROR(PoleOnPath);
BIDIFF_DEFINE_ERROR(CriticalPoint);

// broken mathematical invariants
BIDIFF_DEFINE_ERROR(ContractViolation);
BIDIFF_DEFINE_ERROR(AsymmetricSolution);
BIDIFF_DEFINE_ERROR(AsymmetricInput);
BIDIFF_DEFINE_ERROR(SingularPiA);
BIDIFF_DEFINE_ERROR(SingularImTau);
BIDIFF_DEFINE_ERROR(ContourTopologyChanged);

// numerical failures
BIDIFF_DEFINE_ERROR(NoConvergence);
BIDIFF_DEFINE_ERROR(IllConditionedFit);
BIDIFF_DEFINE_ERROR(StepTooLarge);

#undef BIDIFF_DEFINE_ERROR

} // namespace bidiff
