#include "mforge/flat_model.hpp"

#include <cmath>
#include <stdexcept>

namespace mforge::flatmodel {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

FlatPoint::FlatPoint(Vec r_, Vec theta_) : r(std::move(r_)), theta(std::move(theta_)) {
    if (r.size() != theta.size())
        throw std::invalid_argument("FlatPoint: r and theta sizes differ");
    for (double rj : r)
        if (!(rj >= 0.0)) throw std::invalid_argument("FlatPoint: r_j must be >= 0");
    for (double& t : theta) {
        t = std::fmod(t, kTwoPi);
        if (t < 0.0) t += kTwoPi;
    }
}

Vec moment_map(const FlatPoint& v) {
    Vec mu(v.r.size());
    for (size_t j = 0; j < v.r.size(); ++j) mu[j] = 0.5 * v.r[j] * v.r[j];
    return mu;
}

Mat flat_metric_momentum(const Vec& mu) {
    const int d = static_cast<int>(mu.size());
    Mat g(2 * d, 2 * d);
    for (int j = 0; j < d; ++j) {
        if (!(mu[j] > 0.0)) throw BoundaryDomainError("flat metric: mu_j <= 0");
        g(j, j) = 0.5 / mu[j];
        g(d + j, d + j) = 2.0 * mu[j];
    }
    return g;
}

double cartesian_pullback_check(const FlatPoint& v) {
    const int d = v.dim();
    for (double rj : v.r)
        if (!(rj > 0.0)) throw BoundaryDomainError("cartesian pullback: r_j = 0 (polar singularity)");

    const Vec mu = moment_map(v);
    const Mat g = flat_metric_momentum(mu);

    // K = d(mu, theta)/d(x, y) with x_j = r cos(theta), y_j = r sin(theta):
    //   dmu_j = x dx + y dy,  dtheta_j = (-y dx + x dy) / r^2
    Mat k(2 * d, 2 * d);
    for (int j = 0; j < d; ++j) {
        const double x = v.r[j] * std::cos(v.theta[j]);
        const double y = v.r[j] * std::sin(v.theta[j]);
        const double r2 = v.r[j] * v.r[j];
        k(j, j) = x;          // dmu_j / dx_j
        k(j, d + j) = y;      // dmu_j / dy_j
        k(d + j, j) = -y / r2;
        k(d + j, d + j) = x / r2;
    }

    const Mat pulled = k.transposed() * g * k;
    Mat dev = pulled - Mat::identity(2 * d);
    return linalg::max_abs(dev);
}

}  // namespace mforge::flatmodel
