#include "mforge/potential.hpp"

#include <cmath>
#include <sstream>

namespace mforge::potential {

namespace {

void require_interior(const LabelledPolytope& p, const Vec& ell_vals, double tol_boundary) {
    for (size_t j = 0; j < ell_vals.size(); ++j)
        if (!(ell_vals[j] > tol_boundary)) {
            std::ostringstream os;
            os << "point is not interior: ell_" << j << " = " << ell_vals[j];
            throw BoundaryDomainError(os.str());
        }
    (void)p;
}

Mat inverse_spd(const Mat& a, const char* what) {
    auto chol = linalg::cholesky(a, kTolLin * linalg::trace(a));
    if (!chol) throw NotPositiveDefiniteError(what);
    return linalg::cholesky_inverse(*chol);
}

}  // namespace

Vec ell(const LabelledPolytope& p, const Vec& x) {
    Vec out(p.facet_count());
    for (int j = 0; j < p.facet_count(); ++j) out[j] = p.ell_at(j, x);
    return out;
}

PotentialSample guillemin_sample(const LabelledPolytope& p, const Vec& x, double tol_boundary) {
    const int n = p.dim();
    const int d = p.facet_count();
    PotentialSample s;
    s.x = x;
    s.ell = ell(p, x);
    require_interior(p, s.ell, tol_boundary);

    s.g = 0.0;
    s.f = 0.0;
    s.y.assign(n, 0.0);
    s.hess_g = Mat(n, n);
    for (int j = 0; j < d; ++j) {
        const double lj = s.ell[j];
        const double log_lj = std::log(lj);
        const double lambda_j = p.facet(j).lambda.get_d();
        s.g += 0.5 * lj * log_lj;
        s.f += 0.5 * (lambda_j * log_lj + lj);
        const double w = 0.5 * (log_lj + 1.0);
        const double h = 0.5 / lj;
        for (int r = 0; r < n; ++r) {
            const double ujr = static_cast<double>(p.facet(j).u[r]);
            s.y[r] += ujr * w;
            for (int c = 0; c < n; ++c)
                s.hess_g(r, c) += ujr * static_cast<double>(p.facet(j).u[c]) * h;
        }
    }
    s.hess_f = inverse_spd(s.hess_g, "Guillemin Hessian not positive definite");
    return s;
}

double GuilleminQuadrant::value(const Vec& mu) const {
    double v = 0.0;
    for (double m : mu) {
        if (!(m > 0.0)) throw BoundaryDomainError("quadrant potential: mu_j <= 0");
        v += 0.5 * m * std::log(m);
    }
    return v;
}

Vec GuilleminQuadrant::gradient(const Vec& mu) const {
    Vec g(mu.size());
    for (size_t j = 0; j < mu.size(); ++j) {
        if (!(mu[j] > 0.0)) throw BoundaryDomainError("quadrant potential: mu_j <= 0");
        g[j] = 0.5 * (std::log(mu[j]) + 1.0);
    }
    return g;
}

Mat GuilleminQuadrant::hessian(const Vec& mu) const {
    Mat h(static_cast<int>(mu.size()), static_cast<int>(mu.size()));
    for (size_t j = 0; j < mu.size(); ++j) {
        if (!(mu[j] > 0.0)) throw BoundaryDomainError("quadrant potential: mu_j <= 0");
        h(static_cast<int>(j), static_cast<int>(j)) = 0.5 / mu[j];
    }
    return h;
}

const GuilleminQuadrant& quadrant_guillemin() {
    static const GuilleminQuadrant instance;
    return instance;
}

PotentialSample pullback_sample(const QuadrantPotential& gt, const LabelledPolytope& p,
                                const Vec& x, double tol_boundary) {
    const int n = p.dim();
    const int d = p.facet_count();
    PotentialSample s;
    s.x = x;
    s.ell = ell(p, x);
    require_interior(p, s.ell, tol_boundary);

    s.g = gt.value(s.ell);
    const Vec grad_mu = gt.gradient(s.ell);
    const Mat hess_mu = gt.hessian(s.ell);

    // chain rule along ell = u* - lambda: y_r = sum_j u_jr dG~_j,
    // HessG_rs = sum_jk u_jr H~_jk u_ks
    s.y.assign(n, 0.0);
    for (int j = 0; j < d; ++j)
        for (int r = 0; r < n; ++r)
            s.y[r] += static_cast<double>(p.facet(j).u[r]) * grad_mu[j];

    s.hess_g = Mat(n, n);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
            const double hjk = hess_mu(j, k);
            if (hjk == 0.0) continue;
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c)
                    s.hess_g(r, c) += static_cast<double>(p.facet(j).u[r]) * hjk *
                                      static_cast<double>(p.facet(k).u[c]);
        }

    s.hess_f = inverse_spd(
        s.hess_g, "pulled-back Hessian not positive definite transverse to ell");

    s.f = linalg::dot(s.x, s.y) - s.g - 0.5 * p.lambda_sum();
    return s;
}

}  // namespace mforge::potential
