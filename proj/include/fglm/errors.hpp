#ifndef FGLM_ERRORS_HPP
#define FGLM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fglm {

// Base class for everything thrown by this library, so callers can catch
// fglm::Error and still distinguish the specific condition when they care.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- model / design construction ---
struct EmptyLevelError : Error { using Error::Error; };        // declared level with no observations
struct ConfoundedDesignError : Error { using Error::Error; };  // interest columns inside nuisance span
struct ShapeMismatchError : Error { using Error::Error; };     // dimension disagreement between inputs
struct NonFiniteInputError : Error { using Error::Error; };    // NaN/Inf in data or design
struct NotApplicableError : Error { using Error::Error; };     // statistic undefined for this design

// --- envelope construction ---
struct AlphaTooSmallError : Error { using Error::Error; };     // floor(I*alpha) < 1

// --- file ingestion ---
struct ParseError : Error { using Error::Error; };             // malformed CSV/JSON content
struct GridError : Error { using Error::Error; };              // argument grid not strictly increasing
struct DuplicateIdError : Error { using Error::Error; };       // repeated function id
struct IdMismatchError : Error { using Error::Error; };        // factor ids != sample ids
struct MixedColumnError : Error { using Error::Error; };       // factor column mixes numbers and labels

// --- CLI / configuration ---
struct UnknownTableError : Error { using Error::Error; };      // reproduce target outside catalog
struct ConfigError : Error { using Error::Error; };            // bad flag combination or value

} // namespace fglm

#endif
