#ifndef MFORGE_TESTS_FIXTURES_HPP
#define MFORGE_TESTS_FIXTURES_HPP

// Shared in-memory fixture polytopes.

#include "mforge/polytope.hpp"

namespace fixtures {

using mforge::polytope::Facet;
using mforge::polytope::LabelledPolytope;
using mforge::polytope::Rational;

inline LabelledPolytope cp1() {
    return LabelledPolytope(1, {{{1}, Rational(0)}, {{-1}, Rational(-1)}}, "CP1");
}

inline LabelledPolytope cp2() {
    return LabelledPolytope(
        2, {{{1, 0}, Rational(0)}, {{0, 1}, Rational(0)}, {{-1, -1}, Rational(-1)}}, "CP2");
}

inline LabelledPolytope square() {
    return LabelledPolytope(2,
                            {{{1, 0}, Rational(0)},
                             {{-1, 0}, Rational(-1)},
                             {{0, 1}, Rational(0)},
                             {{0, -1}, Rational(-1)}},
                            "CP1xCP1");
}

inline LabelledPolytope wp12() {
    return LabelledPolytope(1, {{{1}, Rational(0)}, {{-2}, Rational(-2)}}, "WP(1,2)");
}

// quadrilateral with vertices (0,0), (2,0), (1,1), (0,1)
inline LabelledPolytope hirzebruch() {
    return LabelledPolytope(2,
                            {{{1, 0}, Rational(0)},
                             {{0, 1}, Rational(0)},
                             {{-1, -1}, Rational(-2)},
                             {{0, -1}, Rational(-1)}},
                            "Hirzebruch");
}

// unit square plus an extra facet through the vertex (1,1): constructible,
// but vertex (1,1) carries three active facets
inline LabelledPolytope nonsimple_square() {
    return LabelledPolytope(2,
                            {{{1, 0}, Rational(0)},
                             {{-1, 0}, Rational(-1)},
                             {{0, 1}, Rational(0)},
                             {{0, -1}, Rational(-1)},
                             {{-1, -1}, Rational(-2)}},
                            "nonsimple");
}

inline std::vector<LabelledPolytope> all_delzant() {
    return {cp1(), cp2(), square(), wp12(), hirzebruch()};
}

// product polytope: facets of a embed in the first block, facets of b in the
// second
inline LabelledPolytope product(const LabelledPolytope& a, const LabelledPolytope& b,
                                const std::string& name) {
    std::vector<Facet> facets;
    for (const auto& f : a.facets()) {
        Facet g;
        g.u = f.u;
        g.u.resize(a.dim() + b.dim(), 0);
        g.lambda = f.lambda;
        facets.push_back(std::move(g));
    }
    for (const auto& f : b.facets()) {
        Facet g;
        g.u.assign(a.dim() + b.dim(), 0);
        for (int i = 0; i < b.dim(); ++i) g.u[a.dim() + i] = f.u[i];
        g.lambda = f.lambda;
        facets.push_back(std::move(g));
    }
    return LabelledPolytope(a.dim() + b.dim(), facets, name);
}

inline LabelledPolytope cp3() {
    return LabelledPolytope(3,
                            {{{1, 0, 0}, Rational(0)},
                             {{0, 1, 0}, Rational(0)},
                             {{0, 0, 1}, Rational(0)},
                             {{-1, -1, -1}, Rational(-1)}},
                            "CP3");
}

inline LabelledPolytope cube() {
    return product(product(cp1(), cp1(), ""), cp1(), "cube");
}

// triangle {x >= 0, y >= 0, x + 2y <= 2}: orbifold with orders {1, 1, 2}
inline LabelledPolytope wp112() {
    return LabelledPolytope(
        2, {{{1, 0}, Rational(0)}, {{0, 1}, Rational(0)}, {{-1, -2}, Rational(-2)}},
        "WP(1,1,2)");
}

// 3d weighted simplex {x,y,z >= 0, x + 2y + 3z <= 6}
inline LabelledPolytope weighted_simplex_3d() {
    return LabelledPolytope(3,
                            {{{1, 0, 0}, Rational(0)},
                             {{0, 1, 0}, Rational(0)},
                             {{0, 0, 1}, Rational(0)},
                             {{-1, -2, -3}, Rational(-6)}},
                            "weighted-3d");
}

inline std::vector<LabelledPolytope> higher_dim() {
    return {cp3(), cube(), wp112(), weighted_simplex_3d(),
            product(square(), square(), "square-x-square"),
            product(wp12(), cp2(), "wp12-x-cp2")};
}

}  // namespace fixtures

#endif
