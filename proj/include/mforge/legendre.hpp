#ifndef MFORGE_LEGENDRE_HPP
#define MFORGE_LEGENDRE_HPP

// Legendre transform between momentum coordinates x and holomorphic-side
// coordinates y = grad G(x): forward map, damped-Newton inversion confined
// to the polytope interior, and the duality-defect diagnostic.

#include "mforge/potential.hpp"

namespace mforge::legendre {

using linalg::Vec;
using polytope::LabelledPolytope;

struct LegendreSolve {
    Vec y_target;
    Vec x;             // best iterate
    int iterations = 0;
    double residual = 0.0;  // |grad G(x) - y_target|_inf
    bool converged = false;
};

struct InvertOptions {
    double tol_newton = kTolNewton;
    int max_iterations = 100;
    double tol_boundary = kTolBoundary;
};

Vec forward(const LabelledPolytope& p, const Vec& x);

// Damped Newton for grad G(x) = y. Every y in R^n is attained on a compact
// Delta; the fraction-to-boundary rule keeps each iterate strictly interior.
// Non-convergence is reported (converged = false), not thrown.
LegendreSolve invert(const LabelledPolytope& p, const Vec& y, const InvertOptions& opt = {});

// F(x) + G(x) - <x, grad G(x)> + 1/2 sum lambda_j; zero in exact arithmetic
double duality_gap(const LabelledPolytope& p, const Vec& x);

}  // namespace mforge::legendre

#endif
