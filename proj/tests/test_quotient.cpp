#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "mforge/potential.hpp"
#include "mforge/quotient.hpp"

using namespace mforge;
using namespace mforge::quotient;
using flatmodel::FlatPoint;
using linalg::Vec;

TEST_CASE("delzant data: CP1") {
    auto d = build_delzant_data(fixtures::cp1());
    REQUIRE(d.kernel.cols() == 1);
    CHECK(d.kernel(0, 0) == 1);
    CHECK(d.kernel(1, 0) == 1);
    REQUIRE(d.c.size() == 1);
    CHECK(d.c[0] == doctest::Approx(1.0).epsilon(1e-15));  // -(0 + (-1))
    CHECK(d.sublattice_index == 1);
}

TEST_CASE("delzant data: CP2") {
    auto d = build_delzant_data(fixtures::cp2());
    REQUIRE(d.kernel.cols() == 1);
    CHECK(d.kernel(0, 0) == 1);
    CHECK(d.kernel(1, 0) == 1);
    CHECK(d.kernel(2, 0) == 1);
    CHECK(d.c[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d.sublattice_index == 1);
}

TEST_CASE("delzant data: WP(1,2)") {
    auto d = build_delzant_data(fixtures::wp12());
    REQUIRE(d.kernel.cols() == 1);
    CHECK(d.kernel(0, 0) == 2);
    CHECK(d.kernel(1, 0) == 1);
    CHECK(d.c[0] == doctest::Approx(2.0).epsilon(1e-15));  // -(2*0 + 1*(-2))
    CHECK(d.sublattice_index == 1);
}

TEST_CASE("delzant data invariants hold on every fixture") {
    for (const auto& p : fixtures::all_delzant()) {
        auto d = build_delzant_data(p);
        CHECK((d.u_matrix * d.kernel).is_zero());
        CHECK(d.kernel.cols() == p.facet_count() - p.dim());
        CHECK(static_cast<int>(d.nu_facets.size()) == p.dim());
    }
}

TEST_CASE("non-simple polytope is rejected") {
    CHECK_THROWS_AS(build_delzant_data(fixtures::nonsimple_square()), NotDelzantError);
}

TEST_CASE("level residual hand values (CP1)") {
    auto d = build_delzant_data(fixtures::cp1());
    Vec r0 = level_residual(d, FlatPoint({1.0, 1.0}, {0.0, 0.0}));
    CHECK(r0[0] == doctest::Approx(0.0).epsilon(1e-15));  // (0.5+0)+(0.5-1)
    Vec r1 = level_residual(d, FlatPoint({2.0, 2.0}, {0.0, 0.0}));
    CHECK(r1[0] == doctest::Approx(3.0).epsilon(1e-15));  // (2+0)+(2-1)
}

TEST_CASE("level residual vanishes on exactly constructed points") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> unif(0.05, 0.95);
    for (const auto& p : fixtures::all_delzant()) {
        auto d = build_delzant_data(p);
        for (int t = 0; t < 20; ++t) {
            Vec x(p.dim());
            auto [lo, hi] = p.bounding_box();
            for (int i = 0; i < p.dim(); ++i) x[i] = lo[i] + (hi[i] - lo[i]) * unif(rng);
            if (!p.interior_contains(x, 1e-6)) continue;
            Vec r(p.facet_count()), th(p.facet_count(), 0.0);
            for (int j = 0; j < p.facet_count(); ++j)
                r[j] = std::sqrt(2.0 * p.ell_at(j, x));
            Vec res = level_residual(d, FlatPoint(r, th));
            CHECK(linalg::inf_norm(res) <= 1e-12);
        }
    }
}

TEST_CASE("nu recovers x: hand values") {
    auto d = build_delzant_data(fixtures::cp1());
    Vec x = nu(d, FlatPoint({1.0, 1.0}, {0.0, 0.0}));
    CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-14));

    auto d2 = build_delzant_data(fixtures::cp2());
    double r = std::sqrt(2.0 / 3.0);
    Vec x2 = nu(d2, FlatPoint({r, r, r}, {0.0, 0.0, 0.0}));
    CHECK(x2[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(x2[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("nu at a vertex preimage returns the vertex") {
    auto d = build_delzant_data(fixtures::cp1());
    // r_1 = 0 forces x = 0; facet 2 needs mu_2 = ell_2(0) = 1, i.e. r_2 = sqrt(2)
    Vec x = nu(d, FlatPoint({0.0, std::sqrt(2.0)}, {0.0, 0.0}));
    CHECK(x[0] == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("nu rejects off-level-set points") {
    auto d = build_delzant_data(fixtures::cp1());
    CHECK_THROWS_AS(nu(d, FlatPoint({2.0, 2.0}, {0.0, 0.0})), OffLevelSetError);
}

TEST_CASE("diagram ell(nu(v)) = mu(v) on constructed level points") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unif(0.02, 0.98);
    std::uniform_real_distribution<double> ang(0.0, 6.28);
    for (const auto& p : fixtures::all_delzant()) {
        auto d = build_delzant_data(p);
        auto [lo, hi] = p.bounding_box();
        for (int t = 0; t < 50; ++t) {
            Vec x(p.dim());
            for (int i = 0; i < p.dim(); ++i) x[i] = lo[i] + (hi[i] - lo[i]) * unif(rng);
            if (!p.interior_contains(x, 1e-4)) continue;
            Vec r(p.facet_count()), th(p.facet_count());
            for (int j = 0; j < p.facet_count(); ++j) {
                r[j] = std::sqrt(2.0 * p.ell_at(j, x));
                th[j] = ang(rng);
            }
            FlatPoint v(r, th);
            Vec got = nu(d, v);
            Vec mu = flatmodel::moment_map(v);
            for (int j = 0; j < p.facet_count(); ++j)
                CHECK(std::fabs(p.ell_at(j, got) - mu[j]) <= 1e-10);
        }
    }
}

TEST_CASE("isotropy orders") {
    auto cp2 = build_delzant_data(fixtures::cp2());
    for (const auto& v : cp2.p.vertices()) CHECK(isotropy_order(cp2, v.active) == 1);
    CHECK(isotropy_order(cp2, {}) == 1);  // interior orbit

    auto wp = build_delzant_data(fixtures::wp12());
    CHECK(isotropy_order(wp, {1}) == 2);  // facet with u = -2
    CHECK(isotropy_order(wp, {0}) == 1);

    // dependent normals: facets 0 and 1 of CP1 are colinear
    auto cp1 = build_delzant_data(fixtures::cp1());
    CHECK_THROWS_AS(isotropy_order(cp1, {0, 1}), DependentNormalsError);
}

TEST_CASE("kempf-ness: point already on the level set") {
    auto d = build_delzant_data(fixtures::cp1());
    auto kn = kempf_ness_project(d, FlatPoint({1.0, 1.0}, {0.0, 0.0}));
    REQUIRE(kn.converged);
    CHECK(kn.iterations == 0);
    CHECK(kn.t[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(kn.t[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(kn.x[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("kempf-ness: scalar convex solve by hand, r = (2,2)") {
    auto d = build_delzant_data(fixtures::cp1());
    auto kn = kempf_ness_project(d, FlatPoint({2.0, 2.0}, {0.0, 0.0}));
    REQUIRE(kn.converged);
    CHECK(kn.xi[0] == doctest::Approx(-std::log(2.0)).epsilon(1e-10));
    CHECK(kn.t[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(kn.projected.r[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(kn.projected.r[1] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(kn.x[0] == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("kempf-ness: one vanishing coordinate converges to the vertex") {
    // z = (1, 0): the N_C-orbit meets the level set at r = (sqrt 2, 0),
    // nu of which is the vertex x = 1; the solve is regular throughout
    auto d = build_delzant_data(fixtures::cp1());
    auto kn = kempf_ness_project(d, FlatPoint({1.0, 0.0}, {0.0, 0.0}));
    REQUIRE(kn.converged);
    CHECK(kn.xi[0] == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-10));
    CHECK(kn.projected.r[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    CHECK(kn.x[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(linalg::inf_norm(level_residual(d, kn.projected)) <= 1e-10);
}

TEST_CASE("kempf-ness: genuinely unstable points are reported") {
    // origin of CP1's model space: Phi(xi) = -xi has no critical point
    auto d = build_delzant_data(fixtures::cp1());
    CHECK_THROWS_AS(kempf_ness_project(d, FlatPoint({0.0, 0.0}, {0.0, 0.0})),
                    UnstableError);

    // square: both coordinates of one kernel block vanish
    auto ds = build_delzant_data(fixtures::square());
    CHECK_THROWS_AS(kempf_ness_project(ds, FlatPoint({0.0, 0.0, 1.0, 1.0}, {0, 0, 0, 0})),
                    UnstableError);
}

TEST_CASE("kempf-ness: random stable points converge fast from two starts") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> radius(0.2, 3.0);
    std::uniform_real_distribution<double> ang(0.0, 6.28);
    std::uniform_real_distribution<double> box(-1.0, 1.0);
    for (const auto& p : fixtures::all_delzant()) {
        auto d = build_delzant_data(p);
        for (int t = 0; t < 25; ++t) {
            Vec r(p.facet_count()), th(p.facet_count());
            for (int j = 0; j < p.facet_count(); ++j) {
                r[j] = radius(rng);
                th[j] = ang(rng);
            }
            FlatPoint z(r, th);
            auto kn = kempf_ness_project(d, z);
            REQUIRE(kn.converged);
            CHECK(kn.iterations <= 30);
            CHECK(kn.residual <= 1e-10);
            CHECK(p.interior_contains(kn.x, 0.0));

            KempfNessOptions opt2;
            opt2.start.assign(d.kernel.cols(), 0.0);
            for (double& v : opt2.start) v = box(rng);
            auto kn2 = kempf_ness_project(d, z, opt2);
            REQUIRE(kn2.converged);
            for (int j = 0; j < p.facet_count(); ++j)
                CHECK(std::fabs(kn.t[j] - kn2.t[j]) <= 1e-8);
        }
    }
}

TEST_CASE("hatK hand computation: CP1, r = (1,1)") {
    auto d = build_delzant_data(fixtures::cp1());
    auto dec = hatK_decomposition(d, FlatPoint({1.0, 1.0}, {0.0, 0.0}));
    const double ln2 = std::log(2.0);
    CHECK(dec.hat_k == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(dec.bg_form == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(dec.guillemin_diff == doctest::Approx(-0.5 * ln2).epsilon(1e-12));
    CHECK(dec.lambda_integral);
    // closed form 1/2 sum lambda_j (log 2 - log r_j^2) = 1/2 (-1)(ln 2)
    CHECK(dec.guillemin_diff ==
          doctest::Approx(0.5 * (-1.0) * (ln2 - std::log(1.0))).epsilon(1e-12));
}

TEST_CASE("hatK hand computation: CP1, r = (2,2)") {
    auto d = build_delzant_data(fixtures::cp1());
    auto dec = hatK_decomposition(d, FlatPoint({2.0, 2.0}, {0.0, 0.0}));
    const double ln2 = std::log(2.0);
    CHECK(dec.hat_k == doctest::Approx(0.5 + ln2).epsilon(1e-10));
    CHECK(dec.bg_form == doctest::Approx(0.5 + ln2).epsilon(1e-10));
}

TEST_CASE("hatK with t = 1: bg form reduces to K0") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unif(0.1, 0.9);
    auto p = fixtures::cp1();
    auto d = build_delzant_data(p);
    for (int t = 0; t < 10; ++t) {
        double x = unif(rng);
        Vec r = {std::sqrt(2.0 * p.ell_at(0, {x})), std::sqrt(2.0 * p.ell_at(1, {x}))};
        auto dec = hatK_decomposition(d, FlatPoint(r, {0.0, 0.0}));
        double k0 = 0.25 * (r[0] * r[0] + r[1] * r[1]);
        CHECK(dec.bg_form == doctest::Approx(k0).epsilon(1e-10));
        CHECK(dec.hat_k == doctest::Approx(k0).epsilon(1e-10));
    }
}

TEST_CASE("hatK identities on random stable points of every fixture") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> radius(0.2, 3.0);
    std::uniform_real_distribution<double> ang(0.0, 6.28);
    for (const auto& p : fixtures::all_delzant()) {
        auto d = build_delzant_data(p);
        for (int t = 0; t < 20; ++t) {
            Vec r(p.facet_count()), th(p.facet_count());
            for (int j = 0; j < p.facet_count(); ++j) {
                r[j] = radius(rng);
                th[j] = ang(rng);
            }
            auto dec = hatK_decomposition(d, FlatPoint(r, th));
            CHECK(dec.lambda_integral);
            CHECK(std::fabs(dec.hat_k - dec.bg_form) <= 1e-9);
            double closed = 0.0;
            for (int j = 0; j < p.facet_count(); ++j)
                closed += 0.5 * p.facet(j).lambda.get_d() *
                          (std::log(2.0) - std::log(r[j] * r[j]));
            CHECK(std::fabs(dec.guillemin_diff - closed) <= 1e-9);
        }
    }
}

TEST_CASE("hatK is invariant under N rotations along kernel directions") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> radius(0.2, 3.0);
    std::uniform_real_distribution<double> box(-2.0, 2.0);
    for (const auto& p : fixtures::all_delzant()) {
        auto d = build_delzant_data(p);
        for (int t = 0; t < 10; ++t) {
            Vec r(p.facet_count()), th(p.facet_count(), 0.5);
            for (int j = 0; j < p.facet_count(); ++j) r[j] = radius(rng);
            auto a = kempf_ness_project(d, FlatPoint(r, th));
            Vec th2(th);
            for (int k = 0; k < d.kernel.cols(); ++k) {
                double eta = box(rng);
                for (int j = 0; j < p.facet_count(); ++j)
                    th2[j] += d.kernel(j, k).get_d() * eta;
            }
            auto b = kempf_ness_project(d, FlatPoint(r, th2));
            REQUIRE(a.converged);
            REQUIRE(b.converged);
            CHECK(std::fabs(a.hat_k - b.hat_k) <= 1e-9);
        }
    }
}

TEST_CASE("scalings recover x through t^2 r^2 = 2 ell") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> radius(0.2, 3.0);
    for (const auto& p : fixtures::all_delzant()) {
        auto d = build_delzant_data(p);
        for (int t = 0; t < 10; ++t) {
            Vec r(p.facet_count()), th(p.facet_count(), 0.0);
            for (int j = 0; j < p.facet_count(); ++j) r[j] = radius(rng);
            auto kn = kempf_ness_project(d, FlatPoint(r, th));
            REQUIRE(kn.converged);
            for (int j = 0; j < p.facet_count(); ++j)
                CHECK(std::fabs(p.ell_at(j, kn.x) -
                                0.5 * kn.t[j] * kn.t[j] * r[j] * r[j]) <= 1e-9);
        }
    }
}
