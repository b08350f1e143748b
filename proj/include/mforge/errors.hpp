#ifndef MFORGE_ERRORS_HPP
#define MFORGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mforge {

// Default tolerances; every entry point that depends on one takes it as a
// parameter so the CLI can override.
constexpr double kTolBoundary = 1e-9;   // "interior" threshold on the ell_j
constexpr double kTolNewton   = 1e-10;  // Legendre inversion, on |grad G - y|_inf
constexpr double kTolKn       = 1e-10;  // Kempf-Ness / level-set residuals
constexpr double kTolLin      = 1e-12;  // relative pivot threshold for PD checks

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// point too close to (or outside) the domain where a potential is smooth
struct BoundaryDomainError : Error {
    explicit BoundaryDomainError(const std::string& msg) : Error(msg) {}
};

struct NotPositiveDefiniteError : Error {
    explicit NotPositiveDefiniteError(const std::string& msg) : Error(msg) {}
};

struct OffLevelSetError : Error {
    explicit OffLevelSetError(const std::string& msg) : Error(msg) {}
};

struct InconsistentSystemError : Error {
    explicit InconsistentSystemError(const std::string& msg) : Error(msg) {}
};

struct DependentNormalsError : Error {
    explicit DependentNormalsError(const std::string& msg) : Error(msg) {}
};

struct NotDelzantError : Error {
    explicit NotDelzantError(const std::string& msg) : Error(msg) {}
};

// Kempf-Ness functional has no minimizer (point outside the stable set)
struct UnstableError : Error {
    explicit UnstableError(const std::string& msg) : Error(msg) {}
};

// syntax error in an input document; line/col are 1-based, 0 if unknown
struct ParseError : Error {
    int line;
    int col;
    ParseError(const std::string& msg, int line_, int col_)
        : Error(msg), line(line_), col(col_) {}
};

// semantically invalid polytope data; kind is a stable short tag
// ("zero normal", "unbounded", "empty interior", "redundant facet", ...)
struct ValidationError : Error {
    std::string kind;
    ValidationError(const std::string& kind_, const std::string& msg)
        : Error(msg), kind(kind_) {}
};

}  // namespace mforge

#endif
