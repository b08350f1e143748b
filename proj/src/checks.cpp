#include "mforge/checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "mforge/flat_model.hpp"
#include "mforge/legendre.hpp"
#include "mforge/metric.hpp"
#include "mforge/potential.hpp"
#include "mforge/quotient.hpp"

namespace mforge::checks {

using flatmodel::FlatPoint;
using linalg::Mat;
using linalg::Vec;
using polytope::LabelledPolytope;
using polytope::Rational;

namespace {

using Rng = std::mt19937_64;

std::string point_str(const Vec& x) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < x.size(); ++i) {
        if (i) os << ", ";
        os << x[i];
    }
    os << ")";
    return os.str();
}

double diameter(const LabelledPolytope& p) {
    auto [lo, hi] = p.bounding_box();
    double d = 0.0;
    for (size_t i = 0; i < lo.size(); ++i) d = std::max(d, hi[i] - lo[i]);
    return d;
}

// rejection sampling in the bounding box; min_ell is an absolute floor on
// every ell_j
Vec sample_interior(const LabelledPolytope& p, Rng& rng, double min_ell) {
    auto [lo, hi] = p.bounding_box();
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int tries = 0; tries < 20000; ++tries) {
        Vec x(p.dim());
        for (int i = 0; i < p.dim(); ++i) x[i] = lo[i] + (hi[i] - lo[i]) * unif(rng);
        bool ok = true;
        for (int j = 0; j < p.facet_count() && ok; ++j)
            if (p.ell_at(j, x) < min_ell) ok = false;
        if (ok) return x;
    }
    return p.vertex_barycenter();
}

// level-set point over a given interior x: r_j = sqrt(2 ell_j(x))
FlatPoint level_point(const LabelledPolytope& p, const Vec& x, Rng& rng) {
    std::uniform_real_distribution<double> ang(0.0, 6.283185307179586);
    Vec r(p.facet_count()), th(p.facet_count());
    for (int j = 0; j < p.facet_count(); ++j) {
        r[j] = std::sqrt(2.0 * p.ell_at(j, x));
        th[j] = ang(rng);
    }
    return FlatPoint(r, th);
}

struct Recorder {
    std::vector<CheckResult>& out;
    CheckResult cur;

    void start(const std::string& module, const std::string& invariant, double tol) {
        cur = CheckResult{module, invariant, true, 0.0, tol, ""};
    }
    void observe(double defect, const Vec& where) {
        if (defect > cur.defect) {
            cur.defect = defect;
            cur.detail = point_str(where);
        }
    }
    void fail(const std::string& why) {
        cur.pass = false;
        if (cur.detail.empty()) cur.detail = why;
    }
    void finish() {
        if (cur.tolerance > 0.0 && cur.defect > cur.tolerance) cur.pass = false;
        out.push_back(cur);
    }
};

// ---------------------------------------------------------------- lattice --

void check_lattice(const LabelledPolytope& p, Rng& rng, Recorder& rec) {
    using lattice::Int;
    using lattice::IntMatrix;

    auto snf_invariants_hold = [](const IntMatrix& a, std::string& why) {
        auto s = lattice::smith_normal_form(a);
        if (!(s.u * a * s.v == s.s)) {
            why = "U*A*V != S";
            return false;
        }
        if (lattice::abs_determinant(s.u) != 1 || lattice::abs_determinant(s.v) != 1) {
            why = "U or V not unimodular";
            return false;
        }
        auto f = s.invariant_factors();
        for (size_t i = 0; i + 1 < f.size(); ++i) {
            if (f[i] < 0 || (f[i] == 0 && f[i + 1] != 0)) {
                why = "diagonal not nonnegative/ordered";
                return false;
            }
            if (f[i] != 0 && f[i + 1] % f[i] != 0) {
                why = "divisibility chain broken";
                return false;
            }
        }
        return true;
    };

    IntMatrix u(p.dim(), p.facet_count());
    for (int j = 0; j < p.facet_count(); ++j)
        for (int r = 0; r < p.dim(); ++r) u(r, j) = p.facet(j).u[r];

    rec.start("lattice", "snf invariants (u-matrix and random 3x3)", 0.0);
    {
        std::string why;
        if (!snf_invariants_hold(u, why)) rec.fail("u-matrix: " + why);
        std::uniform_int_distribution<int> entry(-5, 5);
        for (int t = 0; t < 10; ++t) {
            IntMatrix a(3, 3);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) a(i, j) = entry(rng);
            if (!snf_invariants_hold(a, why)) rec.fail("random 3x3: " + why);
        }
    }
    rec.finish();

    rec.start("lattice", "kernel basis annihilates u and is saturated", 0.0);
    {
        IntMatrix b = lattice::kernel_basis(u);
        if (!(u * b).is_zero()) rec.fail("u * B != 0");
        // integer combinations solve back to their exact coefficients
        std::uniform_int_distribution<int> coef(-4, 4);
        for (int t = 0; t < 8; ++t) {
            std::vector<Rational> rhs(p.facet_count(), Rational(0));
            std::vector<int> want(b.cols());
            for (int k = 0; k < b.cols(); ++k) {
                want[k] = coef(rng);
                for (int j = 0; j < p.facet_count(); ++j)
                    rhs[j] += Rational(b(j, k)) * want[k];
            }
            // least-squares-free exact solve: use the rows of B with a
            // nonsingular square subsystem via Gaussian elimination over Q
            std::vector<std::vector<Rational>> m(p.facet_count(),
                                                 std::vector<Rational>(b.cols()));
            for (int j = 0; j < p.facet_count(); ++j)
                for (int k = 0; k < b.cols(); ++k) m[j][k] = Rational(b(j, k));
            // forward eliminate rectangular system m * t = rhs
            int row = 0;
            std::vector<int> pivot_cols;
            for (int col = 0; col < b.cols() && row < p.facet_count(); ++col) {
                int piv = -1;
                for (int i = row; i < p.facet_count(); ++i)
                    if (m[i][col] != 0) {
                        piv = i;
                        break;
                    }
                if (piv < 0) continue;
                std::swap(m[piv], m[row]);
                std::swap(rhs[piv], rhs[row]);
                for (int i = 0; i < p.facet_count(); ++i) {
                    if (i == row || m[i][col] == 0) continue;
                    Rational f = m[i][col] / m[row][col];
                    for (int k = col; k < b.cols(); ++k) m[i][k] -= f * m[row][k];
                    rhs[i] -= f * rhs[row];
                }
                pivot_cols.push_back(col);
                ++row;
            }
            for (size_t r2 = 0; r2 < pivot_cols.size(); ++r2) {
                Rational got = rhs[r2] / m[r2][pivot_cols[r2]];
                if (got != want[pivot_cols[r2]]) rec.fail("coefficient recovery failed");
            }
        }
    }
    rec.finish();

    rec.start("lattice", "sublattice index matches brute-force point count", 0.0);
    {
        std::uniform_int_distribution<int> entry(-5, 5);
        int done = 0;
        for (int t = 0; t < 60 && done < 6; ++t) {
            IntMatrix a(3, 3);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) a(i, j) = entry(rng);
            auto idx = lattice::sublattice_index(a, 3);
            if (!idx || *idx > 10) continue;
            ++done;
            long m = idx->get_si();
            // membership in the column span over Z via exact Cramer solve
            std::vector<std::vector<Rational>> am(3, std::vector<Rational>(3));
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) am[i][j] = Rational(a(i, j));
            long count = 0;
            for (long x0 = 0; x0 < m; ++x0)
                for (long x1 = 0; x1 < m; ++x1)
                    for (long x2 = 0; x2 < m; ++x2) {
                        // solve a * t = x exactly, member iff t integral
                        std::vector<std::vector<Rational>> mm = am;
                        std::vector<Rational> b = {Rational(x0), Rational(x1), Rational(x2)};
                        bool singular = false;
                        for (int k = 0; k < 3 && !singular; ++k) {
                            int piv = -1;
                            for (int i = k; i < 3; ++i)
                                if (mm[i][k] != 0) {
                                    piv = i;
                                    break;
                                }
                            if (piv < 0) {
                                singular = true;
                                break;
                            }
                            std::swap(mm[piv], mm[k]);
                            std::swap(b[piv], b[k]);
                            for (int i = k + 1; i < 3; ++i) {
                                if (mm[i][k] == 0) continue;
                                Rational f = mm[i][k] / mm[k][k];
                                for (int j = k; j < 3; ++j) mm[i][j] -= f * mm[k][j];
                                b[i] -= f * b[k];
                            }
                        }
                        if (singular) continue;
                        bool integral = true;
                        for (int i = 2; i >= 0; --i) {
                            for (int j = i + 1; j < 3; ++j) b[i] -= mm[i][j] * b[j];
                            b[i] /= mm[i][i];
                            if (b[i].get_den() != 1) integral = false;
                        }
                        if (integral) ++count;
                    }
            // index-m sublattice meets [0,m)^3 in exactly m^2 points
            if (count != m * m) rec.fail("count mismatch at index " + std::to_string(m));
        }
    }
    rec.finish();
}

// --------------------------------------------------------------- polytope --

void check_polytope(const LabelledPolytope& p, Rng& rng, Recorder& rec) {
    rec.start("polytope", "vertex set invariant under facet permutation", 0.0);
    {
        std::vector<int> perm(p.facet_count());
        for (int j = 0; j < p.facet_count(); ++j) perm[j] = j;
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<polytope::Facet> shuffled;
        for (int j : perm) shuffled.push_back(p.facet(j));
        LabelledPolytope q(p.dim(), shuffled, p.name());
        if (q.vertices().size() != p.vertices().size()) {
            rec.fail("vertex count changed");
        } else {
            for (size_t i = 0; i < p.vertices().size(); ++i)
                if (p.vertices()[i].point != q.vertices()[i].point)
                    rec.fail("vertex points changed");
        }
    }
    rec.finish();

    rec.start("polytope", "classification invariant under relabeling and unimodular change", 0.0);
    {
        auto base = polytope::classify_delzant(p);
        std::vector<int> perm(p.facet_count());
        for (int j = 0; j < p.facet_count(); ++j) perm[j] = j;
        std::shuffle(perm.begin(), perm.end(), rng);

        // fixed unimodular W per dimension: identity + one shear
        std::vector<polytope::Facet> mapped;
        for (int j : perm) {
            polytope::Facet f = p.facet(j);
            if (p.dim() >= 2) {
                long w0 = f.u[0] + 2 * f.u[1];  // shear [1 2; 0 1]
                f.u[0] = w0;
            }
            mapped.push_back(std::move(f));
        }
        LabelledPolytope q(p.dim(), mapped, p.name());
        auto got = polytope::classify_delzant(q);
        if (got.classification != base.classification) rec.fail("classification changed");
        auto sorted_orders = [](std::vector<lattice::Int> v) {
            std::sort(v.begin(), v.end());
            return v;
        };
        if (sorted_orders(got.vertex_orders) != sorted_orders(base.vertex_orders))
            rec.fail("vertex order multiset changed");
    }
    rec.finish();

    rec.start("polytope", "recession-cone triviality: FM and ray routes agree", 0.0);
    {
        if (polytope::recession_cone_trivial_fm(p.facets(), p.dim()) !=
            polytope::recession_cone_trivial_rays(p.facets(), p.dim()))
            rec.fail("disagreement on input polytope");
        std::uniform_int_distribution<int> entry(-3, 3);
        std::uniform_int_distribution<int> extra(1, 4);
        for (int t = 0; t < 20; ++t) {
            int d = p.dim() + extra(rng);
            std::vector<polytope::Facet> facets;
            for (int j = 0; j < d; ++j) {
                polytope::Facet f;
                f.u.resize(p.dim());
                bool zero = true;
                for (int i = 0; i < p.dim(); ++i) {
                    f.u[i] = entry(rng);
                    if (f.u[i]) zero = false;
                }
                if (zero) f.u[0] = 1;
                f.lambda = 0;
                facets.push_back(std::move(f));
            }
            if (polytope::recession_cone_trivial_fm(facets, p.dim()) !=
                polytope::recession_cone_trivial_rays(facets, p.dim()))
                rec.fail("disagreement on random cone");
        }
    }
    rec.finish();
}

// -------------------------------------------------------------- potential --

void check_potential(const LabelledPolytope& p, Rng& rng, const CheckOptions& opt,
                     Recorder& rec) {
    const double diam = diameter(p);
    const double h = 1e-5 * diam;
    const int npts = 40;

    rec.start("potential", "finite differences reproduce gradient (rel 1e-6)", 1e-6);
    for (int t = 0; t < npts; ++t) {
        Vec x = sample_interior(p, rng, 0.05 * diam);
        auto s = potential::guillemin_sample(p, x, opt.tol_boundary);
        Vec fd(p.dim());
        for (int r = 0; r < p.dim(); ++r) {
            Vec xp = x, xm = x;
            xp[r] += h;
            xm[r] -= h;
            fd[r] = (potential::guillemin_sample(p, xp, 0.0).g -
                     potential::guillemin_sample(p, xm, 0.0).g) /
                    (2.0 * h);
        }
        double num = 0.0;
        for (int r = 0; r < p.dim(); ++r) num = std::max(num, std::fabs(fd[r] - s.y[r]));
        rec.observe(num / (1.0 + linalg::inf_norm(s.y)), x);
    }
    rec.finish();

    rec.start("potential", "finite differences reproduce Hessian (rel 1e-5)", 1e-5);
    for (int t = 0; t < npts; ++t) {
        Vec x = sample_interior(p, rng, 0.05 * diam);
        auto s = potential::guillemin_sample(p, x, opt.tol_boundary);
        double num = 0.0, scale = linalg::max_abs(s.hess_g);
        for (int c = 0; c < p.dim(); ++c) {
            Vec xp = x, xm = x;
            xp[c] += h;
            xm[c] -= h;
            Vec yp = potential::guillemin_sample(p, xp, 0.0).y;
            Vec ym = potential::guillemin_sample(p, xm, 0.0).y;
            for (int r = 0; r < p.dim(); ++r)
                num = std::max(num, std::fabs((yp[r] - ym[r]) / (2.0 * h) - s.hess_g(r, c)));
        }
        rec.observe(num / (1.0 + scale), x);
    }
    rec.finish();

    rec.start("potential", "Legendre constant F + G - <x,y> = -1/2 sum lambda", 1e-10);
    for (int t = 0; t < npts; ++t) {
        Vec x = sample_interior(p, rng, 1e-4 * diam);
        auto s = potential::guillemin_sample(p, x, opt.tol_boundary);
        double defect =
            std::fabs(s.f + s.g - linalg::dot(s.x, s.y) + 0.5 * p.lambda_sum());
        rec.observe(defect, x);
    }
    rec.finish();

    rec.start("potential", "hessG * hessF = identity", 1e-10);
    for (int t = 0; t < npts; ++t) {
        Vec x = sample_interior(p, rng, 1e-3 * diam);
        auto s = potential::guillemin_sample(p, x, opt.tol_boundary);
        Mat prod = s.hess_g * s.hess_f;
        rec.observe(linalg::max_abs(prod - Mat::identity(p.dim())), x);
    }
    rec.finish();

    rec.start("potential", "closed form equals quadrant pullback", 1e-12);
    for (int t = 0; t < npts; ++t) {
        Vec x = sample_interior(p, rng, 1e-3 * diam);
        auto a = potential::guillemin_sample(p, x, opt.tol_boundary);
        auto b = potential::pullback_sample(potential::quadrant_guillemin(), p, x,
                                            opt.tol_boundary);
        double d = std::fabs(a.g - b.g);
        for (int r = 0; r < p.dim(); ++r) d = std::max(d, std::fabs(a.y[r] - b.y[r]));
        d = std::max(d, linalg::max_abs(a.hess_g - b.hess_g));
        rec.observe(d, x);
    }
    rec.finish();

    rec.start("potential", "hessG positive definite (Cholesky succeeds)", 0.0);
    for (int t = 0; t < npts; ++t) {
        Vec x = sample_interior(p, rng, 1e-4 * diam);
        auto s = potential::guillemin_sample(p, x, opt.tol_boundary);
        if (!linalg::cholesky(s.hess_g, kTolLin * linalg::trace(s.hess_g)))
            rec.fail("Cholesky failed at " + point_str(x));
    }
    rec.finish();

    rec.start("potential", "translation covariance of ell, G, hessG", 1e-12);
    {
        // dyadic shift components stay exact in double arithmetic
        std::uniform_int_distribution<int> numer(-24, 24);
        std::vector<Rational> shift(p.dim());
        Vec shift_d(p.dim());
        for (int i = 0; i < p.dim(); ++i) {
            shift[i] = Rational(numer(rng), 8);
            shift_d[i] = shift[i].get_d();
        }
        std::vector<polytope::Facet> facets = p.facets();
        for (auto& f : facets) {
            Rational inc = 0;
            for (int i = 0; i < p.dim(); ++i) inc += Rational(f.u[i]) * shift[i];
            f.lambda += inc;
        }
        LabelledPolytope q(p.dim(), facets, p.name());
        for (int t = 0; t < npts; ++t) {
            Vec x = sample_interior(p, rng, 1e-2 * diam);
            Vec xt(x);
            for (int i = 0; i < p.dim(); ++i) xt[i] += shift_d[i];
            auto a = potential::guillemin_sample(p, x, opt.tol_boundary);
            auto b = potential::guillemin_sample(q, xt, opt.tol_boundary);
            double dmax = std::fabs(a.g - b.g);
            for (int j = 0; j < p.facet_count(); ++j)
                dmax = std::max(dmax, std::fabs(a.ell[j] - b.ell[j]));
            dmax = std::max(dmax, linalg::max_abs(a.hess_g - b.hess_g) /
                                      (1.0 + linalg::max_abs(a.hess_g)));
            rec.observe(dmax, x);
        }
    }
    rec.finish();
}

// --------------------------------------------------------------- legendre --

void check_legendre(const LabelledPolytope& p, Rng& rng, const CheckOptions& opt,
                    Recorder& rec) {
    const double diam = diameter(p);
    legendre::InvertOptions iopt;
    iopt.tol_newton = opt.tol_newton;

    rec.start("legendre", "round trip invert(forward(x)) = x", 1e-8);
    for (int t = 0; t < 40; ++t) {
        Vec x = sample_interior(p, rng, 1e-3);
        Vec y = legendre::forward(p, x);
        auto solve = legendre::invert(p, y, iopt);
        if (!solve.converged) {
            rec.fail("no convergence at " + point_str(x));
            continue;
        }
        double d = 0.0;
        for (int i = 0; i < p.dim(); ++i) d = std::max(d, std::fabs(solve.x[i] - x[i]));
        rec.observe(d, x);
    }
    rec.finish();

    rec.start("legendre", "forward map strictly monotone", 0.0);
    for (int t = 0; t < 40; ++t) {
        Vec x1 = sample_interior(p, rng, 1e-3 * diam);
        Vec x2 = sample_interior(p, rng, 1e-3 * diam);
        bool same = true;
        for (int i = 0; i < p.dim(); ++i)
            if (x1[i] != x2[i]) same = false;
        if (same) continue;
        Vec y1 = legendre::forward(p, x1), y2 = legendre::forward(p, x2);
        double s = 0.0;
        for (int i = 0; i < p.dim(); ++i) s += (y1[i] - y2[i]) * (x1[i] - x2[i]);
        if (!(s > 0.0)) rec.fail("monotonicity failed at " + point_str(x1));
    }
    rec.finish();

    rec.start("legendre", "duality gap vanishes", 1e-10);
    for (int t = 0; t < 40; ++t) {
        Vec x = sample_interior(p, rng, 1e-3 * diam);
        rec.observe(std::fabs(legendre::duality_gap(p, x)), x);
    }
    rec.finish();
}

// ------------------------------------------------------------- flat model --

void check_flat_model(const LabelledPolytope& p, Rng& rng, Recorder& rec) {
    const int d = p.facet_count();
    std::uniform_real_distribution<double> radius(0.1, 3.0);
    std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);

    rec.start("flat_model", "moment map invariant under torus action", 0.0);
    for (int t = 0; t < 20; ++t) {
        Vec r(d), th1(d), th2(d);
        for (int j = 0; j < d; ++j) {
            r[j] = radius(rng);
            th1[j] = angle(rng);
            th2[j] = angle(rng);
        }
        Vec m1 = flatmodel::moment_map(FlatPoint(r, th1));
        Vec m2 = flatmodel::moment_map(FlatPoint(r, th2));
        for (int j = 0; j < d; ++j)
            if (m1[j] != m2[j]) rec.fail("moment map moved under rotation");
    }
    rec.finish();

    rec.start("flat_model", "flat metric equals Hessian assembly of quadrant potential",
              1e-12);
    for (int t = 0; t < 20; ++t) {
        Vec mu(d);
        for (int j = 0; j < d; ++j) mu[j] = 0.5 * radius(rng) * radius(rng);
        Mat g = flatmodel::flat_metric_momentum(mu);
        Mat hg = potential::quadrant_guillemin().hessian(mu);
        auto chol = linalg::cholesky(hg, 0.0);
        Mat hf = linalg::cholesky_inverse(*chol);
        Mat assembled(2 * d, 2 * d);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                assembled(a, b) = hg(a, b);
                assembled(d + a, d + b) = hf(a, b);
            }
        rec.observe(linalg::max_abs(g - assembled), mu);
    }
    rec.finish();

    rec.start("flat_model", "cartesian pullback of momentum metric is euclidean", 1e-9);
    for (int t = 0; t < 100; ++t) {
        Vec r(d), th(d);
        for (int j = 0; j < d; ++j) {
            r[j] = radius(rng);
            th[j] = angle(rng);
        }
        FlatPoint v(r, th);
        rec.observe(flatmodel::cartesian_pullback_check(v), r);
    }
    rec.finish();
}

// --------------------------------------------------------------- quotient --

void check_quotient(const LabelledPolytope& p, Rng& rng, const CheckOptions& opt,
                    Recorder& rec) {
    auto report = polytope::classify_delzant(p);
    if (report.classification == polytope::DelzantClass::Invalid) {
        rec.start("quotient", "delzant data (skipped: polytope not Delzant)", 0.0);
        rec.finish();
        return;
    }
    auto data = quotient::build_delzant_data(p);
    const double diam = diameter(p);
    std::uniform_real_distribution<double> radius(0.2, 3.0);
    std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
    std::uniform_real_distribution<double> box(-1.0, 1.0);

    rec.start("quotient", "diagram ell(nu(v)) = mu(v) on the level set", 1e-10);
    for (int t = 0; t < 100; ++t) {
        Vec x = sample_interior(p, rng, 1e-3 * diam);
        FlatPoint v = level_point(p, x, rng);
        Vec got = quotient::nu(data, v, opt.tol_kn);
        Vec mu = flatmodel::moment_map(v);
        double dmax = 0.0;
        for (int j = 0; j < p.facet_count(); ++j)
            dmax = std::max(dmax, std::fabs(p.ell_at(j, got) - mu[j]));
        rec.observe(dmax, x);
    }
    rec.finish();

    rec.start("quotient", "kempf-ness: two starts reach the same scalings", 1e-8);
    for (int t = 0; t < 20; ++t) {
        Vec r(p.facet_count()), th(p.facet_count());
        for (int j = 0; j < p.facet_count(); ++j) {
            r[j] = radius(rng);
            th[j] = angle(rng);
        }
        FlatPoint z(r, th);
        quotient::KempfNessOptions a, b;
        a.tol_kn = b.tol_kn = opt.tol_kn;
        b.start.assign(data.kernel.cols(), 0.0);
        for (double& v : b.start) v = box(rng);
        auto ra = quotient::kempf_ness_project(data, z, a);
        auto rb = quotient::kempf_ness_project(data, z, b);
        if (!ra.converged || !rb.converged) {
            rec.fail("projection did not converge");
            continue;
        }
        double dmax = 0.0;
        for (int j = 0; j < p.facet_count(); ++j)
            dmax = std::max(dmax, std::fabs(ra.t[j] - rb.t[j]));
        rec.observe(dmax, r);
    }
    rec.finish();

    rec.start("quotient", "hatK invariant under N rotations along kernel directions", 1e-9);
    for (int t = 0; t < 20; ++t) {
        Vec r(p.facet_count()), th(p.facet_count());
        for (int j = 0; j < p.facet_count(); ++j) {
            r[j] = radius(rng);
            th[j] = angle(rng);
        }
        quotient::KempfNessOptions kopt;
        kopt.tol_kn = opt.tol_kn;
        auto r1 = quotient::kempf_ness_project(data, FlatPoint(r, th), kopt);
        Vec th2(th);
        for (int k = 0; k < data.kernel.cols(); ++k) {
            double eta = box(rng);
            for (int j = 0; j < p.facet_count(); ++j)
                th2[j] += data.kernel(j, k).get_d() * eta;
        }
        auto r2 = quotient::kempf_ness_project(data, FlatPoint(r, th2), kopt);
        if (!r1.converged || !r2.converged) {
            rec.fail("projection did not converge");
            continue;
        }
        rec.observe(std::fabs(r1.hat_k - r2.hat_k), r);
    }
    rec.finish();

    rec.start("quotient", "hatK - F(nu(p(z))) matches its closed form", 1e-9);
    for (int t = 0; t < 20; ++t) {
        Vec r(p.facet_count()), th(p.facet_count());
        for (int j = 0; j < p.facet_count(); ++j) {
            r[j] = radius(rng);
            th[j] = angle(rng);
        }
        quotient::KempfNessOptions kopt;
        kopt.tol_kn = opt.tol_kn;
        auto dec = quotient::hatK_decomposition(data, FlatPoint(r, th), kopt);
        double closed = 0.0;
        for (int j = 0; j < p.facet_count(); ++j)
            closed += 0.5 * p.facet(j).lambda.get_d() *
                      (std::log(2.0) - std::log(r[j] * r[j]));
        rec.observe(std::fabs(dec.guillemin_diff - closed), r);
    }
    rec.finish();

    {
        bool integral_lambda = true;
        for (const auto& f : p.facets())
            if (f.lambda.get_den() != 1) integral_lambda = false;
        rec.start("quotient",
                  integral_lambda ? "hatK equals its character form"
                                  : "hatK equals its character form (skipped: non-integral lambda)",
                  1e-9);
        if (integral_lambda) {
            for (int t = 0; t < 20; ++t) {
                Vec r(p.facet_count()), th(p.facet_count());
                for (int j = 0; j < p.facet_count(); ++j) {
                    r[j] = radius(rng);
                    th[j] = angle(rng);
                }
                quotient::KempfNessOptions kopt;
                kopt.tol_kn = opt.tol_kn;
                auto dec = quotient::hatK_decomposition(data, FlatPoint(r, th), kopt);
                rec.observe(std::fabs(dec.hat_k - dec.bg_form), r);
            }
        }
        rec.finish();
    }

    rec.start("quotient", "projected scalings recover x (t^2 r^2 = 2 ell)", 1e-9);
    for (int t = 0; t < 20; ++t) {
        Vec r(p.facet_count()), th(p.facet_count());
        for (int j = 0; j < p.facet_count(); ++j) {
            r[j] = radius(rng);
            th[j] = angle(rng);
        }
        quotient::KempfNessOptions kopt;
        kopt.tol_kn = opt.tol_kn;
        auto kn = quotient::kempf_ness_project(data, FlatPoint(r, th), kopt);
        if (!kn.converged) {
            rec.fail("projection did not converge");
            continue;
        }
        double dmax = 0.0;
        for (int j = 0; j < p.facet_count(); ++j)
            dmax = std::max(dmax, std::fabs(p.ell_at(j, kn.x) -
                                            0.5 * kn.t[j] * kn.t[j] * r[j] * r[j]));
        rec.observe(dmax, r);
    }
    rec.finish();
}

// ----------------------------------------------------------------- metric --

void check_metric(const LabelledPolytope& p, Rng& rng, const CheckOptions& opt,
                  Recorder& rec) {
    const double diam = diameter(p);
    const int n = p.dim();

    rec.start("metric", "compatibility triple (omega^T = -omega, J^T g J = g, g J = omega)",
              1e-10);
    Mat first_omega;
    for (int t = 0; t < 40; ++t) {
        Vec x = sample_interior(p, rng, 1e-3 * diam);
        auto m = metric::metric_at(potential::guillemin_sample(p, x, opt.tol_boundary));
        double dmax = linalg::max_abs(m.omega + m.omega.transposed());
        dmax = std::max(dmax, linalg::max_abs(m.j.transposed() * m.g * m.j - m.g));
        dmax = std::max(dmax, linalg::max_abs(m.g * m.j - m.omega));
        dmax = std::max(dmax,
                        linalg::max_abs(m.j * m.j + Mat::identity(2 * n)));
        rec.observe(dmax, x);
        if (t == 0)
            first_omega = m.omega;
        else if (linalg::max_abs(m.omega - first_omega) != 0.0)
            rec.fail("omega varies with x");
    }
    rec.finish();

    rec.start("metric", "interval identity 2 x (1-x) G''(x) = 1", 1e-12);
    {
        LabelledPolytope interval(
            1, {{{1}, Rational(0)}, {{-1}, Rational(-1)}}, "interval");
        for (int k = 1; k < 1000; ++k) {
            double x = static_cast<double>(k) / 1000.0;
            auto s = potential::guillemin_sample(interval, {x}, 0.0);
            rec.observe(std::fabs(2.0 * x * (1.0 - x) * s.hess_g(0, 0) - 1.0), {x});
        }
    }
    rec.finish();
}

}  // namespace

std::vector<CheckResult> run_checks(const LabelledPolytope& p, const CheckOptions& opt) {
    std::vector<CheckResult> results;
    Recorder rec{results, {}};
    Rng rng(opt.seed);
    check_lattice(p, rng, rec);
    check_polytope(p, rng, rec);
    check_potential(p, rng, opt, rec);
    check_legendre(p, rng, opt, rec);
    check_flat_model(p, rng, rec);
    check_quotient(p, rng, opt, rec);
    check_metric(p, rng, opt, rec);
    return results;
}

}  // namespace mforge::checks
