#include "test_main.hpp"

#include "coxdim/bounds.hpp"
#include "coxdim/errors.hpp"
#include "coxdim/hyperbolic.hpp"

#include <cmath>
#include <numbers>

using namespace coxdim;

// Pinned with tests/oracles/bounds.py (mpmath, 30 digits).
TEST_CASE("constants at small instances") {
    CHECK(constant_S1(4, 3) == 18);
    CHECK(constant_S1(5, 4) == 48);
    CHECK(constant_A(4, 3) == doctest::Approx(126).epsilon(1e-14));
    CHECK(constant_B(4, 3) / constant_b0() == doctest::Approx(38).epsilon(1e-14));
    CHECK(constant_B(4, 3, ConstantsVariant::Cor) / constant_b0() == doctest::Approx(36).epsilon(1e-14));
    CHECK(constant_C1(4, 3) == doctest::Approx(684).epsilon(1e-14));
    CHECK(constant_C1(4, 3, ConstantsVariant::Cor) == doctest::Approx(648).epsilon(1e-14));
    CHECK(constant_C2(3, 1.5) == doctest::Approx(std::log(3.0) / prism_gap(1.5)));
    CHECK(constant_C2(3, 1.5) < std::log(3.0) / 0.3);
    CHECK(constant_b0() == doctest::Approx(32 * std::numbers::pi / (3 * std::sqrt(3.0))));
    CHECK_THROWS_AS(constant_A(3, 3), DomainError);
    CHECK_THROWS_AS(constant_S1(4, 2), DomainError);
    CHECK_THROWS_AS(constant_C2(2, 1.5), DomainError);
}

TEST_CASE("A is monotone in m and M") {
    for (int m = 4; m < 40; ++m)
        for (int M = 3; M < 12; ++M) {
            CHECK(constant_A(m + 1, M) > constant_A(m, M));
            CHECK(constant_A(m, M + 1) > constant_A(m, M));
        }
}

TEST_CASE("F switches from B to C1 at M = 4") {
    for (auto v : {ConstantsVariant::Thm, ConstantsVariant::Cor})
        for (int m = 4; m <= 60; ++m) {
            CHECK(constant_F(m, 3, v) == constant_B(m, 3, v));
            for (int M = 4; M <= 20; ++M) CHECK(constant_F(m, M, v) == constant_C1(m, M, v));
        }
}

TEST_CASE("lower bound") {
    auto lb = lower_bound(11, 3);
    CHECK(lb.value == doctest::Approx(1.43067655807339305).epsilon(1e-14));
    CHECK(lb.V == 2);
    CHECK(lb.H == 5);
    CHECK(lower_bound(14, 3).value == doctest::Approx(1 + std::log(3.0) / std::log(5.0)).epsilon(1e-14));
    CHECK(lower_bound(11, 3, 2).value == lb.value);
    CHECK(lower_bound(20, 4, 2).value == doctest::Approx(1 + std::log(2.0) / std::log(7.0)));
    CHECK_THROWS_AS(lower_bound(10, 3), DomainError);
    CHECK_THROWS_AS(lower_bound(10, 3, 2), DomainError);
    CHECK_THROWS_AS(lower_bound(20, 3, 1), DomainError);
}

TEST_CASE("Bourdon-Kleiner and explicit upper bounds") {
    CHECK(bourdon_kleiner_upper(5, 4) == doctest::Approx(1 + std::log(4.0) / std::log(3.0)).epsilon(1e-14));
    CHECK(bourdon_kleiner_upper(5, 4) == doctest::Approx(2.26185950714291487).epsilon(1e-14));
    for (int M = 4; M < 30; ++M) CHECK(bourdon_kleiner_upper(2 * M - 4, M) > 1);
    CHECK_THROWS_AS(bourdon_kleiner_upper(5, 3), NotApplicableError);
    CHECK(cor_upper(4, 3) == doctest::Approx(23 + 12 * std::log(4.0)));
    CHECK(std::fabs(cor_upper(4, 3) - 39.636) < 1e-3);
    CHECK(cor_upper(4, 4) == doctest::Approx(13 + 31 * std::log(4.0)));
}

TEST_CASE("hausdorff upper bound") {
    CHECK(hausdorff_upper(11, 3) == doctest::Approx(44.216559175444434).epsilon(1e-12));
    CHECK(hausdorff_upper(4, 3) == doctest::Approx(30.580660955674605).epsilon(1e-12));
    CHECK(hausdorff_upper(30, 8) == doctest::Approx(78.326913422630183).epsilon(1e-12));
    CHECK(hausdorff_upper(11, 3) <= cor_upper(11, 3));
    CHECK(hausdorff_upper(11, 3, 1.5, ConstantsVariant::Cor) < hausdorff_upper(11, 3));
    CHECK(hausdorff_upper(11, 3, 2.0) > hausdorff_upper(11, 3, 1.5));
    CHECK_THROWS_AS(hausdorff_upper(11, 3, 0.9), DomainError);

    for (int m : {4, 11, 30})
        for (int M : {3, 5, 8}) {
            const double s = hausdorff_upper(m, M);
            CHECK(root_test_ratio(m, M, 1.5, s + 0.01) < 1);
            CHECK(root_test_ratio(m, M, 1.5, s - 0.01) > 1);
        }
}

TEST_CASE("explicit bound chain audit") {
    for (int m = 4; m <= 30; ++m)
        for (int M = 3; M <= 8; ++M)
            for (const auto& c : cor_chain_audit(m, M)) {
                INFO(c.name << " at m=" << m << " M=" << M);
                CHECK(c.pass);
            }
    const auto c = cor_chain_audit(11, 3);
    CHECK(c.back().name == "hausdorff_upper <= cor_upper");
}

TEST_CASE("orbit count bound in log space") {
    CHECK(log_orbit_count_bound(11, 3, 1.5, 1) == doctest::Approx(46.008318644672489).epsilon(1e-12));
    for (int r = 1; r <= 4; ++r) {
        const double direct = orbit_count_bound_direct(4, 3, 1.5, r);
        REQUIRE(std::isfinite(direct));
        CHECK(std::log(direct) == doctest::Approx(log_orbit_count_bound(4, 3, 1.5, r)).epsilon(1e-9));
    }
    CHECK(std::isinf(orbit_count_bound_direct(30, 8, 1.5, 200)));
    CHECK(std::isfinite(log_orbit_count_bound(30, 8, 1.5, 200)));
    CHECK_THROWS_AS(log_orbit_count_bound(4, 3, 1.5, 0), DomainError);
}

TEST_CASE("binomial helpers") {
    CHECK(std::exp(log_binomial(10, 3)) == doctest::Approx(120));
    CHECK(std::isinf(log_binomial(3, 4)));
    CHECK(std::isinf(log_binomial(3, -1)));
    CHECK(log_stars_and_bars(3, 2, 2) == 0.0);
    CHECK(std::exp(log_stars_and_bars(2, 2, 1)) == doctest::Approx(1));
}

TEST_CASE("itinerary chain: stars-and-bars <= binomial <= collapsed") {
    for (int m : {4, 7, 11, 20})
        for (int M : {3, 4, 6})
            for (int r = 1; r <= 8; ++r) {
                const auto terms = itinerary_chain(m, M, 1.5, r);
                std::vector<double> binom_sum(2 * r + 1, -INFINITY);
                for (const auto& t : terms) {
                    CHECK(t.log_stars <= t.log_binom + 1e-9);
                    const double stars = log_stars_and_bars(r, t.j, t.k);
                    CHECK(stars <= t.log_mid + 1e-12);
                    CHECK(t.log_mid <= log_binomial(r + t.j, t.j) + 1e-12);
                    double& acc = binom_sum[t.j];
                    acc = std::max(acc, t.log_binom) + std::log1p(std::exp(-std::fabs(acc - t.log_binom)));
                }
                for (const auto& t : terms)
                    if (t.k == 0) CHECK(binom_sum[t.j] <= t.log_collapsed * (1 + 1e-12));
                // Summing the collapsed terms over j <= 2r stays under the orbit bound.
                double total = -INFINITY;
                for (const auto& t : terms)
                    if (t.k == 0) total = std::max(total, t.log_collapsed) + std::log1p(std::exp(-std::fabs(total - t.log_collapsed)));
                CHECK(std::log(2.0 * M) + total <= log_orbit_count_bound(m, M, 1.5, r) + 1e-9);
            }
}

TEST_CASE("bound grid: parallel matches serial") {
    const auto a = bound_grid(4, 30, 3, 8);
    const auto b = bound_grid_serial(4, 30, 3, 8);
    REQUIRE(a.size() == 27 * 6);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].m == b[i].m);
        CHECK(a[i].M == b[i].M);
        CHECK(a[i].hausdorff_upper == b[i].hausdorff_upper);
        CHECK(a[i].F == std::max(a[i].B, a[i].C1));
        CHECK(a[i].S1 > 0);
        CHECK(a[i].C2 > 0);
        if (a[i].lower) {
            CHECK(*a[i].lower < a[i].hausdorff_upper);
            CHECK(*a[i].lower < a[i].cor_upper);
        }
        CHECK(a[i].bourdon_kleiner.has_value() == (a[i].M >= 4));
    }
    CHECK(a.front().m == 4);
    CHECK(a[1].m == 5);
    CHECK_THROWS_AS(bound_grid(4, 30, 3, 8, 0.5), DomainError);
    CHECK_THROWS_AS(bound_grid(5, 4, 3, 3), InputError);
}

TEST_CASE("dense set table") {
    const auto t = dense_set_table(1.0, {16, 64, 100, 256, 1000});
    REQUIRE(t.size() == 5);
    CHECK(t[2].m == 100);
    CHECK(*t[2].lower_gap == doctest::Approx(0.35125836916753051).epsilon(1e-12));
    CHECK(t[2].bk_gap == doctest::Approx(0.12855675425351200).epsilon(1e-12));
    CHECK(t[2].bk_gap < 0.35);
    for (std::size_t i = 1; i < t.size(); ++i) {
        CHECK(*t[i].lower_gap < *t[i - 1].lower_gap);
        CHECK(t[i].bk_gap < t[i - 1].bk_gap);
    }
    for (double Q : {0.5, 1.0, 1.5}) {
        for (const auto& row : dense_set_table(Q, {8, 16, 32, 64, 128})) {
            if (row.lower) CHECK(*row.lower < row.bourdon_kleiner);
            else CHECK(row.m < 11);
        }
    }
    CHECK(dense_set_table(0.5, {16})[0].m == 4);
    CHECK_THROWS_AS(dense_set_table(0.0, {16}), DomainError);
    CHECK_THROWS_AS(dense_set_table(1.0, {3}), DomainError);
}

TEST_CASE("variant parsing") {
    CHECK(parse_variant("thm") == ConstantsVariant::Thm);
    CHECK(parse_variant("cor") == ConstantsVariant::Cor);
    CHECK(to_string(ConstantsVariant::Cor) == "cor");
    CHECK_THROWS_AS(parse_variant("x"), InputError);
}
