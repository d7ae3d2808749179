#pragma once

#include <stdexcept>
#include <string>

namespace atlas {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ArityError : Error { using Error::Error; };          // parameter shape mismatch
struct DomainError : Error { using Error::Error; };         // non-finite / out-of-domain input
struct ConvergenceError : Error { using Error::Error; };    // iterative solver failed
struct BracketError : Error { using Error::Error; };        // invalid root bracket
struct SpectralError : Error { using Error::Error; };       // degenerate eigenvalues
struct ResonanceError : Error { using Error::Error; };      // small homological divisor
struct BudgetError : Error { using Error::Error; };         // refinement/node budget exhausted
struct TransitError : Error { using Error::Error; };        // no heteroclinic transit found
struct EscapeError : Error { using Error::Error; };         // orbit escaped to infinity
struct NormalizationError : Error { using Error::Error; };  // return-map normalization failed
struct IoError : Error { using Error::Error; };

} // namespace atlas
