#pragma once

#include <optional>
#include <string>
#include <vector>

namespace coxdim {

inline constexpr double kDefaultY0 = 1.5;

// Thm keeps "+ m - 2" inside B and C1; Cor drops it (the --constants-variant values).
enum class ConstantsVariant { Thm, Cor };
ConstantsVariant parse_variant(const std::string& s);
std::string to_string(ConstantsVariant v);

double constant_S1(int m, int M);
double constant_A(int m, int M);
double constant_B(int m, int M, ConstantsVariant v = ConstantsVariant::Thm);
double constant_C1(int m, int M, ConstantsVariant v = ConstantsVariant::Thm);
double constant_C2(int M, double y0);
double constant_F(int m, int M, ConstantsVariant v = ConstantsVariant::Thm);
// 32 pi / (3 sqrt 3)
double constant_b0();

struct LowerBound {
    double value;
    int V;
    int H;
};
// V defaults to floor((m-5)/3); with explicit V requires V >= 2 and m >= 3V+5.
LowerBound lower_bound(int m, int M, std::optional<int> V = std::nullopt);
double bourdon_kleiner_upper(int m, int M);
double cor_upper(int m, int M);

// Throws DomainError when y0 is below the feasibility threshold of solve_y0.
double hausdorff_upper(int m, int M, double y0 = kDefaultY0, ConstantsVariant v = ConstantsVariant::Thm);
// e^{-s + 3 C2} (1 + A + F)^3, the root-test ratio of the Poincare series.
double root_test_ratio(int m, int M, double y0, double s, ConstantsVariant v = ConstantsVariant::Thm);

double log_orbit_count_bound(int m, int M, double y0, int r, ConstantsVariant v = ConstantsVariant::Thm);
// Same bound without logs; may overflow to infinity.
double orbit_count_bound_direct(int m, int M, double y0, int r, ConstantsVariant v = ConstantsVariant::Thm);

// log C(n, k); -inf when the coefficient is zero.
double log_binomial(long n, long k);
// Stars-and-bars factor C(r + j - floor(3k/2) - 1, j - k - 1); equal to 1 when k == j.
double log_stars_and_bars(int r, int j, int k);

struct ChainTerm {
    int j, k;
    double log_stars;      // A^k F^{j-k} e^{3 C2 r} C(j,k) * stars-and-bars
    double log_binom;      // C(r+j, j) e^{3 C2 r} A^k F^{j-k} C(j,k)
    double log_collapsed;      // C(r+j, j) e^{3 C2 r} (A+F)^j, per j
    double log_mid;      // log C(r + j - floor(k/2), j), the intermediate binomial
};
std::vector<ChainTerm> itinerary_chain(int m, int M, double y0, int r, ConstantsVariant v = ConstantsVariant::Thm);

struct ChainCheck {
    std::string name;
    double lhs;
    double rhs;
    bool pass;  // lhs <= rhs
};
// Every inequality the explicit upper bound relies on, evaluated at (m, M) with y0 = 1.5.
std::vector<ChainCheck> cor_chain_audit(int m, int M);

struct BoundReport {
    int m = 0, M = 0;
    double y0 = kDefaultY0;
    ConstantsVariant variant = ConstantsVariant::Thm;
    double S1 = 0, A = 0, B = 0, C1 = 0, C2 = 0, F = 0, D_y0 = 0;
    std::optional<double> lower;
    int V = 0, H = 0;
    double hausdorff_upper = 0;
    double cor_upper = 0;
    std::optional<double> bourdon_kleiner;
};

BoundReport compute_bounds(int m, int M, double y0 = kDefaultY0, ConstantsVariant v = ConstantsVariant::Thm);

// Row-major over M then m; OpenMP parallel, identical output to the serial version.
std::vector<BoundReport> bound_grid(int m_lo, int m_hi, int M_lo, int M_hi, double y0 = kDefaultY0,
                                    ConstantsVariant v = ConstantsVariant::Thm);
std::vector<BoundReport> bound_grid_serial(int m_lo, int m_hi, int M_lo, int M_hi, double y0 = kDefaultY0,
                                           ConstantsVariant v = ConstantsVariant::Thm);

struct DenseRow {
    int M = 0;
    int m = 0;
    std::optional<double> lower;  // undefined when m < 11
    double bourdon_kleiner = 0;
    std::optional<double> lower_gap;
    double bk_gap = 0;
};
std::vector<DenseRow> dense_set_table(double Q, const std::vector<int>& M_list);

}  // namespace coxdim
