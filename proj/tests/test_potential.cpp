#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "mforge/potential.hpp"

using namespace mforge;
using namespace mforge::potential;
using linalg::Mat;
using linalg::Vec;

namespace {

// direct-summation oracle, independent of the sample assembler
struct Oracle {
    double g = 0, f = 0;
    Vec y;
    Mat hess;
};

Oracle oracle_at(const polytope::LabelledPolytope& p, const Vec& x) {
    Oracle o;
    const int n = p.dim();
    o.y.assign(n, 0.0);
    o.hess = Mat(n, n);
    for (int j = 0; j < p.facet_count(); ++j) {
        double lj = 0.0;
        for (int i = 0; i < n; ++i) lj += p.facet(j).u[i] * x[i];
        lj -= p.facet(j).lambda.get_d();
        o.g += 0.5 * lj * std::log(lj);
        o.f += 0.5 * (p.facet(j).lambda.get_d() * std::log(lj) + lj);
        for (int r = 0; r < n; ++r) {
            o.y[r] += 0.5 * p.facet(j).u[r] * (std::log(lj) + 1.0);
            for (int c = 0; c < n; ++c)
                o.hess(r, c) += p.facet(j).u[r] * p.facet(j).u[c] / (2.0 * lj);
        }
    }
    return o;
}

Vec sample_interior(const polytope::LabelledPolytope& p, std::mt19937_64& rng,
                    double min_ell) {
    auto [lo, hi] = p.bounding_box();
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (;;) {
        Vec x(p.dim());
        for (int i = 0; i < p.dim(); ++i) x[i] = lo[i] + (hi[i] - lo[i]) * unif(rng);
        bool ok = true;
        for (int j = 0; j < p.facet_count() && ok; ++j)
            if (p.ell_at(j, x) < min_ell) ok = false;
        if (ok) return x;
    }
}

}  // namespace

TEST_CASE("ell evaluations") {
    auto cp1 = fixtures::cp1();
    Vec e = ell(cp1, {0.25});
    CHECK(e[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(e[1] == doctest::Approx(0.75).epsilon(1e-15));

    auto cp2 = fixtures::cp2();
    Vec e2 = ell(cp2, {1.0 / 3.0, 1.0 / 3.0});
    for (double v : e2) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    // at a vertex the active components vanish exactly for exact inputs
    Vec ev = ell(cp1, {0.0});
    CHECK(ev[0] == 0.0);
    CHECK(ev[1] == 1.0);
}

TEST_CASE("guillemin sample frozen values: CP1 at 1/2") {
    auto s = guillemin_sample(fixtures::cp1(), {0.5});
    const double ln2 = std::log(2.0);
    CHECK(s.g == doctest::Approx(-0.5 * ln2).epsilon(1e-14));          // -0.3465736
    CHECK(s.f == doctest::Approx(0.5 + 0.5 * ln2).epsilon(1e-14));     // 0.8465736
    CHECK(s.y[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(s.hess_g(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(s.hess_f(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("guillemin sample frozen values: CP1 at 1/4") {
    auto s = guillemin_sample(fixtures::cp1(), {0.25});
    CHECK(s.y[0] == doctest::Approx(0.5 * std::log(1.0 / 3.0)).epsilon(1e-14));
    CHECK(s.hess_g(0, 0) == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("guillemin sample frozen values: CP2 at barycenter") {
    auto s = guillemin_sample(fixtures::cp2(), {1.0 / 3.0, 1.0 / 3.0});
    CHECK(s.g == doctest::Approx(-0.5 * std::log(3.0)).epsilon(1e-14));
    CHECK(s.hess_g(0, 0) == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(s.hess_g(0, 1) == doctest::Approx(1.5).epsilon(1e-13));
    CHECK(s.hess_g(1, 0) == doctest::Approx(1.5).epsilon(1e-13));
    CHECK(s.hess_g(1, 1) == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("guillemin sample matches direct-summation oracle everywhere") {
    std::mt19937_64 rng(41);
    for (const auto& p : fixtures::all_delzant()) {
        for (int t = 0; t < 25; ++t) {
            Vec x = sample_interior(p, rng, 1e-3);
            auto s = guillemin_sample(p, x);
            Oracle o = oracle_at(p, x);
            CHECK(s.g == doctest::Approx(o.g).epsilon(1e-13));
            CHECK(s.f == doctest::Approx(o.f).epsilon(1e-13));
            for (int i = 0; i < p.dim(); ++i)
                CHECK(s.y[i] == doctest::Approx(o.y[i]).epsilon(1e-13));
            CHECK(linalg::max_abs(s.hess_g - o.hess) <= 1e-12 * (1 + linalg::max_abs(o.hess)));
        }
    }
}

TEST_CASE("guillemin sample rejects boundary points") {
    CHECK_THROWS_AS(guillemin_sample(fixtures::cp1(), {0.0}), BoundaryDomainError);
    CHECK_THROWS_AS(guillemin_sample(fixtures::cp1(), {1.0}), BoundaryDomainError);
    CHECK_THROWS_AS(guillemin_sample(fixtures::cp2(), {0.5, 0.5}), BoundaryDomainError);
}

TEST_CASE("quadrant potential closed forms") {
    const auto& gt = quadrant_guillemin();
    CHECK(gt.value({1.0, 1.0, 1.0}) == 0.0);
    CHECK(gt.value({0.5, 0.5}) == doctest::Approx(-0.5 * std::log(2.0)).epsilon(1e-15));
    Mat h = gt.hessian({2.0});
    CHECK(h(0, 0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(gt.value({1.0, 0.0}), BoundaryDomainError);
    CHECK_THROWS_AS(gt.gradient({-1.0}), BoundaryDomainError);
}

TEST_CASE("pullback of quadrant potential equals the closed form") {
    std::mt19937_64 rng(43);
    for (const auto& p : fixtures::all_delzant()) {
        for (int t = 0; t < 25; ++t) {
            Vec x = sample_interior(p, rng, 1e-3);
            auto a = guillemin_sample(p, x);
            auto b = pullback_sample(quadrant_guillemin(), p, x);
            CHECK(std::fabs(a.g - b.g) <= 1e-12);
            for (int i = 0; i < p.dim(); ++i) CHECK(std::fabs(a.y[i] - b.y[i]) <= 1e-12);
            CHECK(linalg::max_abs(a.hess_g - b.hess_g) <= 1e-12);
            CHECK(std::fabs(a.f - b.f) <= 1e-12);
        }
    }
}

namespace {

// G~ = 1/2 sum mu_j^2 for the hand-checked chain-rule case
struct QuadraticQuadrant : QuadrantPotential {
    double value(const Vec& mu) const override {
        double v = 0;
        for (double m : mu) v += 0.5 * m * m;
        return v;
    }
    Vec gradient(const Vec& mu) const override { return mu; }
    Mat hessian(const Vec& mu) const override {
        Mat h(static_cast<int>(mu.size()), static_cast<int>(mu.size()));
        for (int j = 0; j < h.rows(); ++j) h(j, j) = 1.0;
        return h;
    }
};

}  // namespace

TEST_CASE("pullback chain rule for a quadratic quadrant potential") {
    // Hess = sum_j u_j u_j^T = [2] for CP1
    QuadraticQuadrant q;
    auto s = pullback_sample(q, fixtures::cp1(), {0.5});
    CHECK(s.hess_g(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
    // gradient: sum_j u_j ell_j = 0.5 - 0.5 = 0 at the center
    CHECK(s.y[0] == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("pullback near a facet raises BoundaryDomain") {
    CHECK_THROWS_AS(pullback_sample(quadrant_guillemin(), fixtures::cp1(), {1e-12}),
                    BoundaryDomainError);
}

namespace {

// convex along the image of ell for the square (depends only on mu_1 + mu_2),
// flat transverse to it: the pulled-back Hessian degenerates
struct DegenerateQuadrant : QuadrantPotential {
    double value(const Vec& mu) const override {
        double s = mu[0] + mu[1];
        return 0.5 * s * s;
    }
    Vec gradient(const Vec& mu) const override {
        Vec g(mu.size(), 0.0);
        g[0] = g[1] = mu[0] + mu[1];
        return g;
    }
    Mat hessian(const Vec& mu) const override {
        Mat h(static_cast<int>(mu.size()), static_cast<int>(mu.size()));
        h(0, 0) = h(0, 1) = h(1, 0) = h(1, 1) = 1.0;
        return h;
    }
};

}  // namespace

TEST_CASE("pullback flags a Hessian that degenerates transverse to ell") {
    DegenerateQuadrant q;
    CHECK_THROWS_AS(pullback_sample(q, fixtures::square(), {0.5, 0.5}),
                    NotPositiveDefiniteError);
}

TEST_CASE("finite differences reproduce gradient and Hessian") {
    std::mt19937_64 rng(47);
    for (const auto& p : fixtures::all_delzant()) {
        auto [lo, hi] = p.bounding_box();
        double diam = 0;
        for (size_t i = 0; i < lo.size(); ++i) diam = std::max(diam, hi[i] - lo[i]);
        const double h = 1e-5 * diam;
        for (int t = 0; t < 20; ++t) {
            Vec x = sample_interior(p, rng, 0.05 * diam);
            auto s = guillemin_sample(p, x);
            for (int r = 0; r < p.dim(); ++r) {
                Vec xp = x, xm = x;
                xp[r] += h;
                xm[r] -= h;
                double fd = (guillemin_sample(p, xp).g - guillemin_sample(p, xm).g) / (2 * h);
                CHECK(std::fabs(fd - s.y[r]) / (1.0 + std::fabs(s.y[r])) <= 1e-6);
                Vec yp = guillemin_sample(p, xp).y;
                Vec ym = guillemin_sample(p, xm).y;
                for (int c = 0; c < p.dim(); ++c) {
                    double fd2 = (yp[c] - ym[c]) / (2 * h);
                    CHECK(std::fabs(fd2 - s.hess_g(c, r)) /
                              (1.0 + std::fabs(s.hess_g(c, r))) <=
                          1e-5);
                }
            }
        }
    }
}

TEST_CASE("Legendre constant and Hessian inverse pair") {
    std::mt19937_64 rng(53);
    for (const auto& p : fixtures::all_delzant()) {
        for (int t = 0; t < 25; ++t) {
            Vec x = sample_interior(p, rng, 1e-3);
            auto s = guillemin_sample(p, x);
            double defect = s.f + s.g - linalg::dot(s.x, s.y) + 0.5 * p.lambda_sum();
            CHECK(std::fabs(defect) <= 1e-10);
            CHECK(linalg::max_abs(s.hess_g * s.hess_f - Mat::identity(p.dim())) <= 1e-10);
        }
    }
}

TEST_CASE("translation covariance") {
    std::mt19937_64 rng(59);
    for (const auto& p : fixtures::all_delzant()) {
        std::vector<polytope::Facet> facets = p.facets();
        std::vector<polytope::Rational> shift(p.dim());
        Vec shift_d(p.dim());
        std::uniform_int_distribution<int> numer(-2, 3);
        for (int i = 0; i < p.dim(); ++i) {
            shift[i] = polytope::Rational(numer(rng), 4);
            shift_d[i] = shift[i].get_d();
        }
        for (auto& f : facets) {
            polytope::Rational inc = 0;
            for (int i = 0; i < p.dim(); ++i) inc += polytope::Rational(f.u[i]) * shift[i];
            f.lambda += inc;
        }
        polytope::LabelledPolytope q(p.dim(), facets, "");
        for (int t = 0; t < 15; ++t) {
            Vec x = sample_interior(p, rng, 1e-3);
            Vec xt(x);
            for (int i = 0; i < p.dim(); ++i) xt[i] += shift_d[i];
            auto a = guillemin_sample(p, x);
            auto b = guillemin_sample(q, xt);
            CHECK(std::fabs(a.g - b.g) <= 1e-12 * (1.0 + std::fabs(a.g)) + 1e-12);
            for (int j = 0; j < p.facet_count(); ++j)
                CHECK(std::fabs(a.ell[j] - b.ell[j]) <= 1e-12);
            CHECK(linalg::max_abs(a.hess_g - b.hess_g) <=
                  1e-12 * (1.0 + linalg::max_abs(a.hess_g)));
        }
    }
}
