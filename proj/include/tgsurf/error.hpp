#pragma once

#include <stdexcept>
#include <string>

namespace tgsurf {

/// An argument lies outside the mathematical domain of an operation
/// (zero factorization input, non-prime modulus, degenerate circle, ...).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An internal cross-check failed: a computed quantity contradicts an
/// identity that must hold (non-square discriminant determinant, an
/// Eichler value set that is not of the form {0, e}, ...).
class consistency_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace tgsurf
