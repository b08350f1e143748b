#include "mforge/metric.hpp"

#include <cmath>
#include <stdexcept>

namespace mforge::metric {

MetricSample metric_at(const potential::PotentialSample& sample) {
    const int n = static_cast<int>(sample.x.size());
    MetricSample m;
    m.x = sample.x;
    m.g = Mat(2 * n, 2 * n);
    m.omega = Mat(2 * n, 2 * n);
    m.j = Mat(2 * n, 2 * n);
    for (int r = 0; r < n; ++r) {
        m.omega(r, n + r) = 1.0;
        m.omega(n + r, r) = -1.0;
        for (int c = 0; c < n; ++c) {
            m.g(r, c) = sample.hess_g(r, c);
            m.g(n + r, n + c) = sample.hess_f(r, c);
            m.j(r, n + c) = sample.hess_f(r, c);
            m.j(n + r, c) = -sample.hess_g(r, c);
        }
    }
    return m;
}

double round_sphere_check(double theta) {
    if (!(theta > 0.0 && theta < M_PI))
        throw std::invalid_argument("round_sphere_check: theta must lie in (0, pi)");

    // Guillemin metric of Delta = [0,1]
    static const polytope::LabelledPolytope interval(
        1, {{{1}, polytope::Rational(0)}, {{-1}, polytope::Rational(-1)}}, "interval");

    const double x = 0.5 * (1.0 - std::cos(theta));
    auto s = potential::guillemin_sample(interval, {x}, 0.0);
    MetricSample m = metric_at(s);

    // dx = (sin(theta)/2) d theta
    const double dx_dtheta = 0.5 * std::sin(theta);
    const double g_theta = m.g(0, 0) * dx_dtheta * dx_dtheta;
    const double g_t = m.g(1, 1);

    const double sphere_theta = 0.5;
    const double sphere_t = 0.5 * std::sin(theta) * std::sin(theta);
    return std::max(std::fabs(g_theta - sphere_theta), std::fabs(g_t - sphere_t));
}

}  // namespace mforge::metric
