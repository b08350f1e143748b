#ifndef MFORGE_METRIC_HPP
#define MFORGE_METRIC_HPP

// Full toric Kaehler package in momentum-angle coordinates (x, t) on the
// polytope interior: block metric g = diag(HessG, HessF), the constant
// symplectic pairing omega = sum dx_r ^ dt_r, and the complex structure in
// the (dx, dt) coframe.

#include "mforge/potential.hpp"

namespace mforge::metric {

using linalg::Mat;
using linalg::Vec;

struct MetricSample {
    Vec x;
    Mat g;      // 2n x 2n, blockdiag(hessG, hessF)
    Mat omega;  // [[0, I], [-I, 0]], constant
    Mat j;      // [[0, hessF], [-hessG, 0]] on covectors; g * j = omega
};

MetricSample metric_at(const potential::PotentialSample& sample);

// Compares the Guillemin metric of the unit interval against the round
// 2-sphere form 1/2 (d theta^2 + sin^2 theta dt^2) under x = (1-cos theta)/2;
// returns the max coefficient deviation. Requires 0 < theta < pi.
double round_sphere_check(double theta);

}  // namespace mforge::metric

#endif
