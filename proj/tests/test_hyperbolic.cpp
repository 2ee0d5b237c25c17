#include "test_main.hpp"

#include "coxdim/errors.hpp"
#include "coxdim/hyperbolic.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace coxdim;
using std::numbers::pi;

namespace {

// mpmath, 30 digits
constexpr double kLog2Half = 0.346573590279972654708616060729;
constexpr double kTheta = 1.91063323624901855632771420503;  // arccos(-1/3)
constexpr double kGap15 = 0.319915136668964052115569593306;
constexpr double kAcos58 = 0.895664793857864972022265426345;
constexpr double kTwoAsinhHalf = 0.962423650119206894995517826849;

}  // namespace

TEST_CASE("dist_h2") {
    using C = std::complex<double>;
    CHECK(dist_h2(C(0, 1), C(0, 2)) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(dist_h2(C(0.3, 1.7), C(0.3, 1.7)) == 0.0);
    CHECK(dist_h2(C(0, 1), C(1, 1)) == doctest::Approx(kTwoAsinhHalf).epsilon(1e-12));
    CHECK_THROWS_AS(dist_h2(C(0, 0), C(0, 1)), DomainError);
    CHECK_THROWS_AS(dist_h2(C(0, 1), C(2, -1)), DomainError);

    std::mt19937 rng(17);
    std::uniform_real_distribution<double> x(-3, 3), y(0.05, 4);
    for (int t = 0; t < 500; ++t) {
        C a(x(rng), y(rng)), b(x(rng), y(rng)), c(x(rng), y(rng));
        CHECK(dist_h2(a, b) == doctest::Approx(dist_h2(b, a)).epsilon(1e-12));
        CHECK(dist_h2(a, c) <= dist_h2(a, b) + dist_h2(b, c) + kTol);
        // Vertical geodesic additivity.
        double h[3] = {y(rng), y(rng), y(rng)};
        std::sort(h, h + 3);
        const double re = x(rng);
        CHECK(dist_h2(C(re, h[0]), C(re, h[1])) + dist_h2(C(re, h[1]), C(re, h[2])) ==
              doctest::Approx(dist_h2(C(re, h[0]), C(re, h[2]))).epsilon(1e-10));
    }
}

TEST_CASE("dist_h3 restricts to dist_h2 on a vertical plane") {
    const UpperHalfSpacePoint p{0.2, 0.0, 0.7}, q{-1.1, 0.0, 2.3};
    CHECK(dist_h3(p, q) == doctest::Approx(dist_h2({0.2, 0.7}, {-1.1, 2.3})).epsilon(1e-12));
    CHECK_THROWS_AS(dist_h3(p, {0, 0, 0}), DomainError);
}

TEST_CASE("truncated block geometry") {
    const auto g = truncated_block(1.5);
    for (double a : g.dihedral) CHECK(a == doctest::Approx(pi / 3).epsilon(1e-12));
    CHECK(g.face4_height == doctest::Approx(1 / std::sqrt(3.0)));
    CHECK(g.y0 > g.face4_height);
    CHECK_THROWS_AS(truncated_block(0.5), DomainError);

    // x0 is equidistant from all faces and lies on the symmetry axis.
    const double d = face_distance(g.x0, 1);
    for (int f = 2; f <= 4; ++f) CHECK(face_distance(g.x0, f) == doctest::Approx(d).epsilon(1e-10));
    CHECK(g.x0.w1 == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(g.x0.w2 == doctest::Approx(std::sqrt(3.0) / 6).epsilon(1e-10));

    // Incenter of the face over (0,0)-(1,0) in closed form.
    CHECK(g.xi[0].w1 == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(std::fabs(g.xi[0].w2) < 1e-12);
    CHECK(g.xi[0].w3 == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-10));
    CHECK(face_distance(g.xi[0], 1) < 1e-12);
    CHECK(face_distance(g.xi[3], 4) < 1e-12);

    // Every x_i is the foot of x0 and at the same distance.
    for (int i = 0; i < 4; ++i) {
        CHECK(dist_h3(g.x0, g.xi[i]) == doctest::Approx(kLog2Half).epsilon(1e-9));
        CHECK(face_distance(g.x0, i + 1) == doctest::Approx(kLog2Half).epsilon(1e-9));
    }
    CHECK_THROWS_AS(face_distance(g.x0, 5), InputError);
}

TEST_CASE("kite leg") {
    const auto k = kite_leg_length();
    CHECK(k.law_of_cosines == doctest::Approx(kLog2Half).epsilon(1e-9));
    CHECK(k.coordinates == doctest::Approx(kLog2Half).epsilon(1e-9));
    CHECK(std::fabs(k.law_of_cosines - k.coordinates) < 1e-9);
    CHECK(k.angle_x0 == doctest::Approx(kTheta).epsilon(1e-9));
    CHECK(k.angle_x12 == doctest::Approx(pi / 6).epsilon(1e-9));
    CHECK(k.angle_x1 == doctest::Approx(pi / 2).epsilon(1e-9));
}

TEST_CASE("boundary angle") {
    CHECK(boundary_angle(0.5, 1.0) == doctest::Approx(3 * pi / 4).epsilon(1e-12));
    CHECK(boundary_angle(1.5, std::sqrt(3.0)) == doctest::Approx(2 * pi / 3).epsilon(1e-12));
    double prev = pi;
    for (double h = 0.1; h < 1e4; h *= 3) {
        const double a = boundary_angle(h, 1.0);
        CHECK(a > pi / 2);
        CHECK(a < prev);
        prev = a;
    }
    CHECK(boundary_angle(1e9, 1.0) - pi / 2 < 1e-8);
    CHECK_THROWS_AS(boundary_angle(0, 1), DomainError);
    CHECK_THROWS_AS(boundary_angle(1, -1), DomainError);

    for (double h : {0.3, 0.6, 1.0, 1.5, 4.0})
        for (double D : {0.5, 1.0, std::sqrt(3.0), 3.0})
            for (double t : {h / 2, h / 10}) {
                const double tri = boundary_angle_triangle(h, D, t);
                CHECK(std::fabs(tri - boundary_angle(h, D)) < 1e-9);
            }
    CHECK_THROWS_AS(boundary_angle_triangle(1, 1, 2), DomainError);
}

TEST_CASE("cap heights") {
    CHECK(cap_height(CapKind::TriangleSqrt3, 1.5) == doctest::Approx(std::sqrt(3.25)).epsilon(1e-12));
    CHECK(cap_height(CapKind::Hexagon1, 1.5) == doctest::Approx(std::sqrt(2.25 + 1.0 / 3)).epsilon(1e-12));
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> y(0.1, 5);
    for (int t = 0; t < 100; ++t) {
        const double y0 = y(rng);
        double mx = 0, mx_circ = 0;
        for (auto k : {CapKind::TriangleSqrt3, CapKind::Hexagon1, CapKind::Triangle1}) {
            CHECK(cap_height(k, y0) <= std::sqrt(y0 * y0 + 1) + 1e-15);
            CHECK(cap_height(k, y0 + 1e-3) > cap_height(k, y0));
            mx = std::max(mx, cap_height(k, y0));
            mx_circ = std::max(mx_circ, cap_height_circumradius(k, y0));
        }
        CHECK(mx == doctest::Approx(std::sqrt(y0 * y0 + 1)).epsilon(1e-12));
        CHECK(mx_circ == doctest::Approx(mx).epsilon(1e-12));
    }
    CHECK_THROWS_AS(cap_height(CapKind::Hexagon1, 0), DomainError);
    CHECK_THROWS_AS(cap_height(static_cast<CapKind>(9), 1.0), InputError);
}

TEST_CASE("prism gap") {
    CHECK(prism_gap(1.5) > 0.3);
    CHECK(prism_gap(1.5) == doctest::Approx(kGap15).epsilon(1e-12));
    CHECK(prism_gap(1.0) > prism_gap(2.0));
    for (double y = 0.1; y < 10; y += 0.1) CHECK(prism_gap(y + 1e-4) < prism_gap(y));
    CHECK_THROWS_AS(prism_gap(0), DomainError);
}

TEST_CASE("link sigma") {
    CHECK(link_sigma(pi / 2, pi / 3) == doctest::Approx(pi / 3).epsilon(1e-12));
    CHECK(link_sigma(2 * pi / 3, pi / 3) == doctest::Approx(kAcos58).epsilon(1e-12));
    CHECK(link_sigma(pi / 2, 2 * pi / 3) == doctest::Approx(2 * pi / 3).epsilon(1e-12));
    for (int i = 0; i <= 40; ++i)
        for (int j = 1; j <= 40; ++j) {
            const double theta = pi / 2 + (pi / 2) * i / 41.0;
            const double alpha = (2 * pi / 3) * j / 40.0;
            const double s = link_sigma(theta, alpha);
            CHECK(s > 0);
            CHECK(s < pi);
            CHECK(std::fabs(s - link_sigma_vectors(theta, alpha)) < 1e-9);
        }
    CHECK_THROWS_AS(link_sigma(pi, pi / 3), DomainError);
    CHECK_THROWS_AS(link_sigma(1.0, pi / 3), DomainError);
    CHECK_THROWS_AS(link_sigma(2.0, 2.5), DomainError);
    CHECK_THROWS_AS(link_sigma(2.0, 0.0), DomainError);
}

TEST_CASE("cat1 link test") {
    auto all_pass = [](int p, int q, int r, double y0) {
        for (const auto& c : cat1_link_test(p, q, r, y0))
            if (!c.pass) return false;
        return true;
    };
    for (int p = 3; p <= 7; ++p)
        for (int q = p; q <= 8; ++q)
            for (int r = q; r <= 9; ++r) {
                if (r == 3) continue;
                CHECK(all_pass(p, q, r, 1.5));
            }
    CHECK_FALSE(all_pass(3, 3, 4, 0.5));
    CHECK_FALSE(all_pass(3, 3, 6, 0.5));
    // More caps around the vertex help: at y0 = 0.5, sigma = arccos(7/8) > pi/7.
    CHECK(all_pass(3, 3, 7, 0.5));
    CHECK(all_pass(3, 3, 4, 1.05));
    CHECK_FALSE(all_pass(3, 3, 4, 1.0));

    auto v = cat1_link_test(3, 4, 5, 1.5);
    REQUIRE(v.size() == 2);
    CHECK(v[0].kind == CapKind::Hexagon1);
    CHECK(v[0].copies == 4);
    CHECK(v[1].copies == 5);
    CHECK(cat1_link_test(4, 5, 6, 1.5).size() == 3);
    CHECK(cat1_link_test(3, 3, 5, 1.5).front().copies == 10);
    CHECK(cap_kind_for(5, 3, 3) == CapKind::TriangleSqrt3);
    CHECK_THROWS_AS(cat1_link_test(3, 3, 3, 1.5), NotApplicableError);
    CHECK_THROWS_AS(cat1_link_test(2, 3, 4, 1.5), InputError);
}

TEST_CASE("y0 feasibility") {
    const auto f = solve_y0();
    CHECK(f.cases[0].closed_form == doctest::Approx(std::sqrt(3.0) * std::pow(2.0, 0.25) / 2));
    CHECK(f.cases[2].closed_form == doctest::Approx(std::pow(2.0, 0.25) / 2));
    CHECK(f.cases[1].closed_form == doctest::Approx(std::sqrt(2.0) / 2));
    for (const auto& c : f.cases) CHECK(std::fabs(c.closed_form - c.bisection) < 1e-6);
    CHECK(std::fabs(f.cases[0].closed_form - 1.0298) < 1e-4);
    CHECK(std::fabs(f.cases[2].closed_form - 0.5946) < 1e-4);
    CHECK(f.minimum == doctest::Approx(f.cases[0].closed_form));
    CHECK(f.minimum < 1.5);
}

TEST_CASE("L_m flag certificate") {
    for (int m : {3, 4, 10}) {
        const auto c = lm_flag_check(m);
        CHECK(c.ell0 == doctest::Approx(kTheta).epsilon(1e-12));
        CHECK(c.ell0_exceeds_half_pi);
        CHECK(c.triangle_angle == doctest::Approx(2 * pi / 3).epsilon(1e-12));
        CHECK(std::fabs(c.gram_det) < 1e-12);
        CHECK(c.pass);
    }
    CHECK_THROWS_AS(lm_flag_check(2), DomainError);
}
