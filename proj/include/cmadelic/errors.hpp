#pragma once

#include <stdexcept>
#include <string>

namespace cmadelic {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the operation's domain (zero input, non-square-free, ...).
struct DomainError : Error { using Error::Error; };

// Incompatible congruence classes handed to the Chinese remainder solver.
struct CRTConflict : Error { using Error::Error; };

// Group closure would exceed the configured element cap.
struct GroupTooLarge : Error { using Error::Error; };

// A generator (or other matrix) is not invertible modulo N.
struct NotAUnit : Error { using Error::Error; };

// Claimed subgroup relation does not hold.
struct NotASubgroup : Error { using Error::Error; };

// Level/modulus mismatch: M does not divide N, moduli differ, gcd != 1, ...
struct BadLevel : Error { using Error::Error; };

// Conjugacy search space exceeds the configured cap.
struct SearchTooLarge : Error { using Error::Error; };

// Prime argument unusable (bad reduction, ell = 2 where odd required, ...).
struct BadPrime : Error { using Error::Error; };

// Input curve has no CM by a class-number-one order with rational j.
struct NotCM : Error { using Error::Error; };

// Input is outside the supported family (non-simplest curve with j = 0 or 1728).
struct Unsupported : Error { using Error::Error; };

// Input curve expected to be one of the 40 simplest curves but is not.
struct NotSimplest : Error { using Error::Error; };

// An internal uniqueness/consistency invariant failed; indicates bad inputs.
struct InternalInvariantViolation : Error { using Error::Error; };

// Frobenius data at some good prime is not realized by the claimed image.
struct FrobeniusMismatch : Error { using Error::Error; };

// Entanglement index pattern (2 at the glued level, 1 at both factors) violated.
struct EntanglementMismatch : Error { using Error::Error; };

// Mod-M conjugacy did not match Q-isomorphism on a differentiation check.
struct DifferentiationMismatch : Error { using Error::Error; };

} // namespace cmadelic
