#include "mforge/legendre.hpp"

#include <cmath>
#include <limits>

namespace mforge::legendre {

using potential::guillemin_sample;
using potential::PotentialSample;

Vec forward(const LabelledPolytope& p, const Vec& x) {
    return guillemin_sample(p, x).y;
}

namespace {

Vec residual_vec(const PotentialSample& s, const Vec& y_target) {
    Vec r(s.y.size());
    for (size_t i = 0; i < r.size(); ++i) r[i] = s.y[i] - y_target[i];
    return r;
}

// largest step keeping all ell_j(x + a*dx) > 0; ell is affine in a
double max_step_to_boundary(const LabelledPolytope& p, const PotentialSample& s, const Vec& dx) {
    double a_max = std::numeric_limits<double>::infinity();
    for (int j = 0; j < p.facet_count(); ++j) {
        double slope = 0.0;
        for (int r = 0; r < p.dim(); ++r)
            slope += static_cast<double>(p.facet(j).u[r]) * dx[r];
        if (slope < 0.0) a_max = std::min(a_max, s.ell[j] / (-slope));
    }
    return a_max;
}

}  // namespace

LegendreSolve invert(const LabelledPolytope& p, const Vec& y, const InvertOptions& opt) {
    LegendreSolve out;
    out.y_target = y;
    out.x = p.vertex_barycenter();  // always interior for a valid polytope

    PotentialSample s = guillemin_sample(p, out.x, 0.0);
    Vec res = residual_vec(s, y);
    out.residual = linalg::inf_norm(res);

    for (int it = 0; it < opt.max_iterations; ++it) {
        if (out.residual <= opt.tol_newton) {
            out.converged = true;
            break;
        }
        out.iterations = it + 1;

        auto chol = linalg::cholesky(s.hess_g, kTolLin * linalg::trace(s.hess_g));
        if (!chol) break;  // cannot happen on the interior; bail out honestly
        Vec dx = linalg::cholesky_solve(*chol, res);
        for (double& v : dx) v = -v;  // step = hessG^{-1} (y - grad G)

        double alpha = std::min(1.0, 0.95 * max_step_to_boundary(p, s, dx));
        bool accepted = false;
        for (int halving = 0; halving <= 40; ++halving) {
            Vec trial(out.x);
            for (size_t r = 0; r < trial.size(); ++r) trial[r] += alpha * dx[r];
            // an ell_j can round to zero when the target sits beyond double
            // resolution near a facet; treat that trial as rejected
            try {
                PotentialSample ts = guillemin_sample(p, trial, 0.0);
                Vec tres = residual_vec(ts, y);
                double tnorm = linalg::inf_norm(tres);
                if (tnorm < out.residual) {
                    out.x = std::move(trial);
                    s = std::move(ts);
                    res = std::move(tres);
                    out.residual = tnorm;
                    accepted = true;
                    break;
                }
            } catch (const BoundaryDomainError&) {
            }
            alpha *= 0.5;
        }
        if (!accepted) break;  // merit stuck; report best iterate
    }
    if (out.residual <= opt.tol_newton) out.converged = true;
    return out;
}

double duality_gap(const LabelledPolytope& p, const Vec& x) {
    PotentialSample s = guillemin_sample(p, x);
    return s.f + s.g - linalg::dot(x, s.y) + 0.5 * p.lambda_sum();
}

}  // namespace mforge::legendre
