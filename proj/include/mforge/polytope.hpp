#ifndef MFORGE_POLYTOPE_HPP
#define MFORGE_POLYTOPE_HPP

// Labelled-polytope data model. A polytope Delta in R^n* is given by facet
// inequalities <x,u_j> >= lambda_j with integer inward normals u_j and exact
// rational offsets. Construction validates compactness, full dimension and
// facet non-redundancy with exact arithmetic; vertices are enumerated once
// and stored with exact rational coordinates so active sets and simplicity
// are decided without tolerances.

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

#include "mforge/errors.hpp"
#include "mforge/lattice.hpp"

namespace mforge::polytope {

using Rational = mpq_class;

struct Facet {
    std::vector<long> u;  // inward normal in Z^n
    Rational lambda;
};

struct Vertex {
    std::vector<Rational> point;
    std::vector<int> active;  // sorted indices j with ell_j(point) == 0, rank n
    std::vector<double> point_double() const;
};

class LabelledPolytope {
public:
    // Validates the facet data; throws ValidationError with kinds
    // "dimension mismatch", "zero normal", "unbounded", "empty interior",
    // "redundant facet", "facet count".
    LabelledPolytope(int dim, std::vector<Facet> facets, std::string name = "");

    int dim() const { return dim_; }
    int facet_count() const { return static_cast<int>(facets_.size()); }
    const std::vector<Facet>& facets() const { return facets_; }
    const Facet& facet(int j) const { return facets_[j]; }
    const std::string& name() const { return name_; }

    // vertices in canonical (lexicographic) order
    const std::vector<Vertex>& vertices() const { return vertices_; }

    Rational ell_exact(int j, const std::vector<Rational>& x) const;
    double ell_at(int j, const std::vector<double>& x) const;

    double lambda_sum() const;                 // sum of lambda_j
    std::vector<double> vertex_barycenter() const;
    std::pair<std::vector<double>, std::vector<double>> bounding_box() const;

    bool interior_contains(const std::vector<double>& x,
                           double tol_boundary = kTolBoundary) const;

private:
    int dim_;
    std::vector<Facet> facets_;
    std::string name_;
    std::vector<Vertex> vertices_;

    void validate_and_enumerate();
};

enum class DelzantClass { Integral, Rational, Invalid };

struct DelzantReport {
    DelzantClass classification = DelzantClass::Invalid;
    std::string reason;                       // set when Invalid
    std::vector<Vertex> vertices;
    std::vector<lattice::Int> vertex_orders;  // per vertex, empty when Invalid
};

const char* to_string(DelzantClass c);

std::vector<Vertex> enumerate_vertices(const LabelledPolytope& p);

DelzantReport classify_delzant(const LabelledPolytope& p);

bool interior_contains(const LabelledPolytope& p, const std::vector<double>& x,
                       double tol_boundary = kTolBoundary);

struct ParseResult {
    LabelledPolytope polytope;
    std::vector<std::string> warnings;  // e.g. float lambdas snapped to rationals
};

// Parses the JSON polytope format:
//   {"name": "...", "dim": n, "facets": [{"u": [..], "lambda": int|"p/q"|float}, ..]}
// Throws ParseError (with line/column) on syntax errors and ValidationError
// on semantic ones. Floats for lambda are snapped to the nearest rational
// with denominator <= 1e9 and reported in warnings.
ParseResult parse_polytope(const std::string& text);

// Recession-cone triviality ({x : <x,u_j> >= 0 for all j} == {0}), decided
// two independent ways: Fourier-Motzkin elimination, and the combinatorial
// ray/lineality route. Construction uses the first; the pair exists so the
// agreement invariant can be checked.
bool recession_cone_trivial_fm(const std::vector<Facet>& facets, int dim);
bool recession_cone_trivial_rays(const std::vector<Facet>& facets, int dim);

// Best rational approximation with denominator <= max_den (exact on the
// binary value of v). Used for float lambdas; exposed for tests.
Rational nearest_rational(double v, long max_den);

}  // namespace mforge::polytope

#endif
