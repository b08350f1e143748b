#include "mforge/quotient.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mforge/potential.hpp"

namespace mforge::quotient {

using polytope::DelzantClass;
using polytope::Rational;

DelzantData build_delzant_data(const LabelledPolytope& p) {
    auto report = polytope::classify_delzant(p);
    if (report.classification == DelzantClass::Invalid)
        throw NotDelzantError("not a rational Delzant polytope: " + report.reason);

    const int n = p.dim();
    const int d = p.facet_count();

    DelzantData data{p, lattice::IntMatrix(n, d), lattice::IntMatrix(), Vec(), 1, {}};
    for (int j = 0; j < d; ++j)
        for (int r = 0; r < n; ++r) data.u_matrix(r, j) = p.facet(j).u[r];

    data.kernel = lattice::kernel_basis(data.u_matrix);

    // c_k = -sum_j lambda_j B_jk, exact rational folded to double at the end
    const int m = data.kernel.cols();
    data.c.assign(m, 0.0);
    for (int k = 0; k < m; ++k) {
        Rational ck = 0;
        for (int j = 0; j < d; ++j)
            ck -= p.facet(j).lambda * Rational(data.kernel(j, k));
        data.c[k] = ck.get_d();
    }

    auto index = lattice::sublattice_index(data.u_matrix, n);
    if (!index)  // impossible: vertex normals already have rank n
        throw NotDelzantError("facet normals do not span R^n");
    data.sublattice_index = *index;

    // nu subsystem: the vertex active set with the largest |det|
    lattice::Int best = 0;
    for (const auto& v : report.vertices) {
        lattice::IntMatrix sub(n, n);
        for (int c = 0; c < n; ++c)
            for (int r = 0; r < n; ++r) sub(r, c) = p.facet(v.active[c]).u[r];
        lattice::Int det = lattice::abs_determinant(sub);
        if (det > best) {
            best = det;
            data.nu_facets = v.active;
        }
    }
    return data;
}

Vec level_residual(const DelzantData& d, const FlatPoint& v) {
    if (v.dim() != d.p.facet_count())
        throw std::invalid_argument("level_residual: point dimension != facet count");
    const Vec mu = flatmodel::moment_map(v);
    const int m = d.kernel.cols();
    Vec res(m, 0.0);
    for (int k = 0; k < m; ++k) {
        double s = 0.0;
        for (int j = 0; j < d.p.facet_count(); ++j)
            s += d.kernel(j, k).get_d() * (mu[j] + d.p.facet(j).lambda.get_d());
        res[k] = s;
    }
    return res;
}

namespace {

Vec nu_of_mu(const DelzantData& d, const Vec& mu, double tol) {
    const int n = d.p.dim();
    Mat a(n, n);
    Vec b(n);
    for (int r = 0; r < n; ++r) {
        int j = d.nu_facets[r];
        for (int i = 0; i < n; ++i) a(r, i) = static_cast<double>(d.p.facet(j).u[i]);
        b[r] = mu[j] + d.p.facet(j).lambda.get_d();
    }
    auto x = linalg::lu_solve(a, b);
    if (!x) throw InconsistentSystemError("nu: facet subsystem singular");

    // the remaining d-n equations must agree
    for (int j = 0; j < d.p.facet_count(); ++j) {
        double lhs = d.p.ell_at(j, *x);
        if (std::fabs(lhs - mu[j]) > tol) {
            std::ostringstream os;
            os << "nu: equation " << j << " inconsistent by " << std::fabs(lhs - mu[j]);
            throw InconsistentSystemError(os.str());
        }
    }
    return *x;
}

}  // namespace

Vec nu(const DelzantData& d, const FlatPoint& v, double tol_kn) {
    Vec res = level_residual(d, v);
    if (linalg::inf_norm(res) > tol_kn) {
        std::ostringstream os;
        os << "point is off the momentum level set: residual " << linalg::inf_norm(res);
        throw OffLevelSetError(os.str());
    }
    const Vec mu = flatmodel::moment_map(v);
    // consistency tolerance scales with the data; exact level-set points pass
    // at machine precision
    double scale = 1.0;
    for (double m : mu) scale = std::max(scale, std::fabs(m));
    return nu_of_mu(d, mu, tol_kn * scale * 16.0 + tol_kn);
}

lattice::Int isotropy_order(const DelzantData& d, const std::vector<int>& face_indices) {
    if (face_indices.empty()) return 1;  // interior orbit: trivial isotropy
    const int n = d.p.dim();
    const int k = static_cast<int>(face_indices.size());
    lattice::IntMatrix sub(n, k);
    for (int c = 0; c < k; ++c)
        for (int r = 0; r < n; ++r) sub(r, c) = d.p.facet(face_indices[c]).u[r];
    auto snf = lattice::smith_normal_form(sub);
    lattice::Int order = 1;
    for (const lattice::Int& f : snf.invariant_factors()) {
        if (f == 0) throw DependentNormalsError("isotropy_order: face normals are dependent");
        order *= f;
    }
    if (snf.rank() < k) throw DependentNormalsError("isotropy_order: face normals are dependent");
    return order;
}

namespace {

struct KnFunctional {
    const DelzantData& d;
    Vec r2;  // r_j^2

    // s = B xi
    Vec scalings(const Vec& xi) const {
        Vec s(d.p.facet_count(), 0.0);
        for (int j = 0; j < d.p.facet_count(); ++j)
            for (int k = 0; k < d.kernel.cols(); ++k)
                s[j] += d.kernel(j, k).get_d() * xi[k];
        return s;
    }

    double value(const Vec& xi) const {
        const Vec s = scalings(xi);
        double phi = 0.0;
        for (int j = 0; j < d.p.facet_count(); ++j)
            phi += 0.25 * std::exp(2.0 * s[j]) * r2[j];
        for (int k = 0; k < d.kernel.cols(); ++k) phi -= d.c[k] * xi[k];
        return phi;
    }

    // w_j = e^{2 s_j} r_j^2; grad_k = 1/2 sum_j B_jk w_j - c_k
    Vec weights(const Vec& s) const {
        Vec w(r2.size());
        for (size_t j = 0; j < r2.size(); ++j) w[j] = std::exp(2.0 * s[j]) * r2[j];
        return w;
    }

    Vec gradient(const Vec& w) const {
        const int m = d.kernel.cols();
        Vec g(m, 0.0);
        for (int k = 0; k < m; ++k) {
            double s = 0.0;
            for (int j = 0; j < d.p.facet_count(); ++j) s += d.kernel(j, k).get_d() * w[j];
            g[k] = 0.5 * s - d.c[k];
        }
        return g;
    }

    Mat hessian(const Vec& w) const {
        const int m = d.kernel.cols();
        Mat h(m, m);
        for (int j = 0; j < d.p.facet_count(); ++j) {
            if (w[j] == 0.0) continue;
            for (int k = 0; k < m; ++k) {
                double bjk = d.kernel(j, k).get_d();
                if (bjk == 0.0) continue;
                for (int l = 0; l < m; ++l) h(k, l) += bjk * d.kernel(j, l).get_d() * w[j];
            }
        }
        return h;
    }
};

}  // namespace

KempfNessResult kempf_ness_project(const DelzantData& d, const FlatPoint& z,
                                   const KempfNessOptions& opt) {
    if (z.dim() != d.p.facet_count())
        throw std::invalid_argument("kempf_ness_project: point dimension != facet count");
    const int m = d.kernel.cols();
    KnFunctional fn{d, {}};
    fn.r2.resize(z.dim());
    for (int j = 0; j < z.dim(); ++j) fn.r2[j] = z.r[j] * z.r[j];

    KempfNessResult out;
    out.xi = opt.start.empty() ? Vec(m, 0.0) : opt.start;
    double phi = fn.value(out.xi);
    Vec w = fn.weights(fn.scalings(out.xi));
    Vec grad = fn.gradient(w);
    out.residual = linalg::inf_norm(grad);

    // Polish well past tol_kn while progress is quadratic: identities that
    // depend on log t are amplified by the Hessian conditioning, so a
    // residual parked just under tol_kn is not good enough downstream.
    const double polish_tol = std::min(opt.tol_kn, 1e-13);

    for (int it = 0; it < opt.max_iterations && out.residual > polish_tol; ++it) {
        out.iterations = it + 1;
        if (linalg::inf_norm(out.xi) > 50.0)
            throw UnstableError("kempf-ness: scalings diverge (point not stable)");

        Mat h = fn.hessian(w);
        // smallest eigenvalue below 1e-12 * trace <=> shifted Cholesky fails
        double tr = linalg::trace(h);
        auto chol = linalg::cholesky(h, kTolLin * tr);
        if (!chol)
            throw UnstableError("kempf-ness: Hessian degenerate (point not stable)");

        Vec step = linalg::cholesky_solve(*chol, grad);
        for (double& v : step) v = -v;

        // backtracking halving on Phi; the slack admits roundoff-level ties
        // so full Newton steps survive near the floor
        double alpha = 1.0;
        bool accepted = false;
        for (int halving = 0; halving <= 60; ++halving) {
            Vec trial(out.xi);
            for (int k = 0; k < m; ++k) trial[k] += alpha * step[k];
            double tphi = fn.value(trial);
            if (tphi <= phi + 1e-14 * (1.0 + std::fabs(phi))) {
                out.xi = std::move(trial);
                phi = tphi;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;

        w = fn.weights(fn.scalings(out.xi));
        grad = fn.gradient(w);
        double prev = out.residual;
        out.residual = linalg::inf_norm(grad);
        // converged and at the roundoff floor: stop polishing
        if (out.residual <= opt.tol_kn && out.residual >= 0.9 * prev) break;
    }

    out.s = fn.scalings(out.xi);
    out.t.resize(z.dim());
    Vec pr(z.dim());
    for (int j = 0; j < z.dim(); ++j) {
        out.t[j] = std::exp(out.s[j]);
        pr[j] = out.t[j] * z.r[j];
    }
    out.projected = FlatPoint(pr, z.theta);
    out.converged = out.residual <= opt.tol_kn;

    if (out.converged) {
        out.x = nu(d, out.projected, std::max(opt.tol_kn, out.residual * 2.0));
        double hk = 0.0;
        for (int j = 0; j < d.p.facet_count(); ++j)
            hk += 0.5 * (d.p.ell_at(j, out.x) +
                         d.p.facet(j).lambda.get_d() * std::log(out.t[j] * out.t[j]));
        out.hat_k = hk;
    }
    return out;
}

HatKDecomposition hatK_decomposition(const DelzantData& d, const FlatPoint& z,
                                     const KempfNessOptions& opt) {
    for (double rj : z.r)
        if (!(rj > 0.0))
            throw BoundaryDomainError("hatK decomposition requires all r_j > 0");

    KempfNessResult kn = kempf_ness_project(d, z, opt);
    if (!kn.converged)
        throw OffLevelSetError("hatK decomposition: projection did not converge");

    HatKDecomposition out{};
    out.hat_k = kn.hat_k;

    // K0(t.z) + (1/2) log |chi_{-c}(t)|^2 with K0 = r^2/4 and
    // |chi_{-c}(t)|^2 = prod_j t_j^{2 lambda_j}
    double k0 = 0.0, chi = 0.0;
    for (int j = 0; j < z.dim(); ++j) {
        k0 += 0.25 * kn.projected.r[j] * kn.projected.r[j];
        chi += 0.5 * d.p.facet(j).lambda.get_d() * std::log(kn.t[j] * kn.t[j]);
    }
    out.bg_form = k0 + chi;

    auto sample = potential::guillemin_sample(d.p, kn.x, 0.0);
    out.guillemin_diff = kn.hat_k - sample.f;

    out.lambda_integral = true;
    for (const auto& f : d.p.facets())
        if (f.lambda.get_den() != 1) out.lambda_integral = false;
    return out;
}

}  // namespace mforge::quotient
