#ifndef MFORGE_FLAT_MODEL_HPP
#define MFORGE_FLAT_MODEL_HPP

// The model space R^2d ~ C^d with its torus action in polar coordinates:
// points (r_j, theta_j), the momentum map mu_j = r_j^2 / 2, and the flat
// metric written in momentum-angle coordinates.

#include "mforge/errors.hpp"
#include "mforge/linalg.hpp"

namespace mforge::flatmodel {

using linalg::Mat;
using linalg::Vec;

struct FlatPoint {
    FlatPoint() = default;
    // canonicalizes: requires r_j >= 0, stores theta mod 2*pi in [0, 2*pi)
    FlatPoint(Vec r_, Vec theta_);

    Vec r;
    Vec theta;
    int dim() const { return static_cast<int>(r.size()); }
};

// mu_j(v) = r_j^2 / 2
Vec moment_map(const FlatPoint& v);

// block-diagonal diag(1/(2 mu_1), ..., 1/(2 mu_d), 2 mu_1, ..., 2 mu_d);
// throws BoundaryDomainError if some mu_j <= 0
Mat flat_metric_momentum(const Vec& mu);

// Pulls the momentum-coordinate metric back to cartesian coordinates through
// the analytic Jacobian of (x_j, y_j) -> (mu_j, theta_j) and returns the
// max-norm deviation from the identity. Requires all r_j > 0.
double cartesian_pullback_check(const FlatPoint& v);

}  // namespace mforge::flatmodel

#endif
