#ifndef MFORGE_POTENTIAL_HPP
#define MFORGE_POTENTIAL_HPP

// Dual (symplectic) and Kaehler potentials on the polytope interior:
// the closed-form expressions G = 1/2 sum ell_j log ell_j,
// F = 1/2 sum (lambda_j log ell_j + ell_j), their gradients and Hessians,
// and the generic pullback of a convex quadrant potential along the affine
// embedding ell = u* - lambda.

#include <memory>
#include <vector>

#include "mforge/errors.hpp"
#include "mforge/linalg.hpp"
#include "mforge/polytope.hpp"

namespace mforge::potential {

using linalg::Mat;
using linalg::Vec;
using polytope::LabelledPolytope;

struct PotentialSample {
    Vec x;       // momentum coordinates
    Vec ell;     // ell_j(x), all > 0
    double g;    // dual potential value G(x)
    Vec y;       // grad G = holomorphic-side coordinate
    Mat hess_g;  // symmetric positive definite
    double f;    // Kaehler potential value F(x)
    Mat hess_f;  // inverse of hess_g
};

// affine map ell_j(x) = <x,u_j> - lambda_j; defined for all x
Vec ell(const LabelledPolytope& p, const Vec& x);

// Guillemin potential sample at an interior point. Throws BoundaryDomainError
// if any ell_j <= tol_boundary.
PotentialSample guillemin_sample(const LabelledPolytope& p, const Vec& x,
                                 double tol_boundary = kTolBoundary);

// Smooth convex function on the open positive quadrant of R^d*, presented by
// value/gradient/Hessian evaluators. Implementations must be stateless.
class QuadrantPotential {
public:
    virtual ~QuadrantPotential() = default;
    virtual double value(const Vec& mu) const = 0;
    virtual Vec gradient(const Vec& mu) const = 0;
    virtual Mat hessian(const Vec& mu) const = 0;
};

// G~ = 1/2 sum mu_j log mu_j, gradient 1/2 (log mu_j + 1),
// Hessian diag(1/(2 mu_j)); throws BoundaryDomainError when some mu_j <= 0
class GuilleminQuadrant : public QuadrantPotential {
public:
    double value(const Vec& mu) const override;
    Vec gradient(const Vec& mu) const override;
    Mat hessian(const Vec& mu) const override;
};

const GuilleminQuadrant& quadrant_guillemin();

// Pullback G = G~ o ell with chain-rule gradient and Hessian. F is fixed by
// the Legendre convention F = <x,y> - G - 1/2 sum lambda_j. Throws
// NotPositiveDefiniteError when the pulled-back Hessian is not positive
// definite (within the kTolLin * trace pivot floor).
PotentialSample pullback_sample(const QuadrantPotential& gt, const LabelledPolytope& p,
                                const Vec& x, double tol_boundary = kTolBoundary);

}  // namespace mforge::potential

#endif
