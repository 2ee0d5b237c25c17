#include "coxdim/bounds.hpp"

#include "coxdim/errors.hpp"
#include "coxdim/hyperbolic.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace coxdim {

namespace {

void require_mM(int m, int M, const char* what) {
    if (m < 4 || M < 3) throw DomainError(std::string(what) + ": need m >= 4 and M >= 3");
}

// M(m^3 - 5m^2 + 8m - 4) [+ m - 2]
double bc_polynomial(int m, int M, ConstantsVariant v) {
    const double x = m;
    double p = M * (x * x * x - 5 * x * x + 8 * x - 4);
    if (v == ConstantsVariant::Thm) p += x - 2;
    return p;
}

double feasible_y0() {
    static const double t = solve_y0().minimum;
    return t;
}

std::vector<BoundReport> grid_impl(int m_lo, int m_hi, int M_lo, int M_hi, double y0, ConstantsVariant v,
                                   bool parallel) {
    if (m_lo > m_hi || M_lo > M_hi) throw InputError("bound grid: empty range");
    const int nm = m_hi - m_lo + 1, nM = M_hi - M_lo + 1;
    const long total = static_cast<long>(nm) * nM;
    std::vector<BoundReport> out(static_cast<std::size_t>(total));
    (void)feasible_y0();  // solve once outside the parallel region
    // Exceptions cannot cross the OpenMP boundary; validate the corners first.
    compute_bounds(m_lo, M_lo, y0, v);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long idx = 0; idx < total; ++idx) {
        const int M = M_lo + static_cast<int>(idx / nm);
        const int m = m_lo + static_cast<int>(idx % nm);
        out[static_cast<std::size_t>(idx)] = compute_bounds(m, M, y0, v);
    }
    return out;
}

}  // namespace

ConstantsVariant parse_variant(const std::string& s) {
    if (s == "thm") return ConstantsVariant::Thm;
    if (s == "cor") return ConstantsVariant::Cor;
    throw InputError("constants variant must be thm or cor, got '" + s + "'");
}

std::string to_string(ConstantsVariant v) { return v == ConstantsVariant::Thm ? "thm" : "cor"; }

double constant_S1(int m, int M) {
    require_mM(m, M, "constant_S1");
    return static_cast<double>(M) * (static_cast<double>(m) * m - 3.0 * m + 2);
}

double constant_A(int m, int M) {
    require_mM(m, M, "constant_A");
    const double x = m, y = M;
    return 2 * y * (x - 2) * (x - 2) *
           ((x - 1) / 2 + (2 * y - 5) + (2 * y - 4) * (x - 3) + (2 * y - 3) * (x - 3) * (x - 3) / 4);
}

double constant_b0() { return 32 * std::numbers::pi / (3 * std::sqrt(3.0)); }

double constant_B(int m, int M, ConstantsVariant v) {
    require_mM(m, M, "constant_B");
    return constant_b0() * bc_polynomial(m, M, v);
}

double constant_C1(int m, int M, ConstantsVariant v) {
    require_mM(m, M, "constant_C1");
    return (4.0 * M * M - 6.0 * M) * bc_polynomial(m, M, v);
}

double constant_C2(int M, double y0) {
    if (M < 3) throw DomainError("constant_C2: need M >= 3");
    return std::log(2.0 * M - 3) / prism_gap(y0);
}

double constant_F(int m, int M, ConstantsVariant v) { return std::max(constant_B(m, M, v), constant_C1(m, M, v)); }

LowerBound lower_bound(int m, int M, std::optional<int> V) {
    if (M < 3) throw DomainError("lower_bound: need M >= 3");
    int v;
    if (V) {
        v = *V;
        if (v < 2 || m < 3 * v + 5) throw DomainError("lower_bound: need V >= 2 and m >= 3V + 5");
    } else {
        if (m < 11) throw DomainError("lower_bound: need m >= 11");
        v = (m - 5) / 3;
    }
    const int H = 2 * M - 1;
    return {1 + std::log(static_cast<double>(v)) / std::log(static_cast<double>(H)), v, H};
}

double bourdon_kleiner_upper(int m, int M) {
    if (m < 4) throw DomainError("bourdon_kleiner_upper: need m >= 4");
    if (M < 4) throw NotApplicableError("bourdon_kleiner_upper: only for M >= 4 (hyperbolic case)");
    return 1 + std::log(m - 1.0) / std::log(2.0 * M - 5);
}

double cor_upper(int m, int M) {
    require_mM(m, M, "cor_upper");
    if (M == 3) return 23 + 12 * std::log(static_cast<double>(m));
    return 13 + 12 * std::log(static_cast<double>(m)) + 19 * std::log(static_cast<double>(M));
}

double hausdorff_upper(int m, int M, double y0, ConstantsVariant v) {
    require_mM(m, M, "hausdorff_upper");
    if (y0 < feasible_y0())
        throw DomainError("hausdorff_upper: y0 = " + std::to_string(y0) +
                          " is below the feasibility threshold " + std::to_string(feasible_y0()) +
                          " from solve_y0");
    return 3 * constant_C2(M, y0) + 3 * std::log1p(constant_A(m, M) + constant_F(m, M, v));
}

double root_test_ratio(int m, int M, double y0, double s, ConstantsVariant v) {
    require_mM(m, M, "root_test_ratio");
    return std::exp(-s + 3 * constant_C2(M, y0) + 3 * std::log1p(constant_A(m, M) + constant_F(m, M, v)));
}

double log_orbit_count_bound(int m, int M, double y0, int r, ConstantsVariant v) {
    require_mM(m, M, "orbit_count_bound");
    if (r < 1) throw DomainError("orbit_count_bound: need r >= 1");
    return std::log(2.0 * M) + 3 * constant_C2(M, y0) * r + 3.0 * r * std::log1p(constant_A(m, M) + constant_F(m, M, v));
}

double orbit_count_bound_direct(int m, int M, double y0, int r, ConstantsVariant v) {
    require_mM(m, M, "orbit_count_bound");
    if (r < 1) throw DomainError("orbit_count_bound: need r >= 1");
    return 2.0 * M * std::exp(3 * constant_C2(M, y0) * r) * std::pow(1 + constant_A(m, M) + constant_F(m, M, v), 3 * r);
}

double log_binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_stars_and_bars(int r, int j, int k) {
    if (k == j) return 0.0;
    return log_binomial(static_cast<long>(r) + j - (3 * k) / 2 - 1, j - k - 1);
}

std::vector<ChainTerm> itinerary_chain(int m, int M, double y0, int r, ConstantsVariant v) {
    require_mM(m, M, "itinerary_chain");
    if (r < 1) throw DomainError("itinerary_chain: need r >= 1");
    const double lA = std::log(constant_A(m, M)), lF = std::log(constant_F(m, M, v));
    const double lAF = std::log(constant_A(m, M) + constant_F(m, M, v));
    const double e = 3 * constant_C2(M, y0) * r;
    std::vector<ChainTerm> out;
    for (int j = 1; j <= 2 * r; ++j) {
        const double lrj = log_binomial(r + j, j);
        for (int k = 0; k <= j; ++k) {
            ChainTerm t;
            t.j = j;
            t.k = k;
            const double core = k * lA + (j - k) * lF + e + log_binomial(j, k);
            t.log_stars = core + log_stars_and_bars(r, j, k);
            t.log_binom = core + lrj;
            t.log_collapsed = lrj + e + j * lAF;
            t.log_mid = log_binomial(static_cast<long>(r) + j - k / 2, j);
            out.push_back(t);
        }
    }
    return out;
}

std::vector<ChainCheck> cor_chain_audit(int m, int M) {
    require_mM(m, M, "cor_chain_audit");
    const double y0 = kDefaultY0, x = m, y = M;
    const double A = constant_A(m, M), B = constant_B(m, M), C1 = constant_C1(m, M);
    const double hu = hausdorff_upper(m, M, y0);
    std::vector<ChainCheck> c;
    auto add = [&](std::string name, double lhs, double rhs) { c.push_back({std::move(name), lhs, rhs, lhs <= rhs}); };
    add("0.3 <= D(1.5)", 0.3, prism_gap(y0));
    add("3 C2 <= 10 log(2M-3)", 3 * constant_C2(M, y0), 10 * std::log(2 * y - 3));
    add("1 + A <= 3 m^4 M^2", 1 + A, 3 * std::pow(x, 4) * y * y);
    add("B <= 20 m^3 M", B, 20 * std::pow(x, 3) * y);
    add("C1 <= 4 m^3 M^3", C1, 4 * std::pow(x, 3) * std::pow(y, 3));
    if (M == 3) {
        add("F = B: C1 <= B", C1, B);
        const double mid = 10 * std::log(3.0) + 3 * std::log(27 * std::pow(x, 4) + 60 * std::pow(x, 3));
        add("hausdorff <= 10 log 3 + 3 log(27m^4 + 60m^3)", hu, mid);
        add("27m^4 + 60m^3 <= 42 m^4", 27 * std::pow(x, 4) + 60 * std::pow(x, 3), 42 * std::pow(x, 4));
        add("10 log 3 + 3 log 42 <= 23", 10 * std::log(3.0) + 3 * std::log(42.0), 23);
    } else {
        add("F = C1: B <= C1", B, C1);
        const double s = 3 * std::pow(x, 4) * y * y + 4 * std::pow(x, 3) * std::pow(y, 3);
        add("hausdorff <= 10 log(2M-3) + 3 log(3m^4M^2 + 4m^3M^3)", hu, 10 * std::log(2 * y - 3) + 3 * std::log(s));
        add("3m^4M^2 + 4m^3M^3 <= 7 m^4 M^3", s, 7 * std::pow(x, 4) * std::pow(y, 3));
        add("10 log(2M-3) <= 10 log M + 10 log 2", 10 * std::log(2 * y - 3), 10 * std::log(y) + 10 * std::log(2.0));
        add("10 log 2 + 3 log 7 <= 13", 10 * std::log(2.0) + 3 * std::log(7.0), 13);
    }
    add("hausdorff_upper <= cor_upper", hu, cor_upper(m, M));
    return c;
}

BoundReport compute_bounds(int m, int M, double y0, ConstantsVariant v) {
    require_mM(m, M, "compute_bounds");
    BoundReport r;
    r.m = m;
    r.M = M;
    r.y0 = y0;
    r.variant = v;
    r.S1 = constant_S1(m, M);
    r.A = constant_A(m, M);
    r.B = constant_B(m, M, v);
    r.C1 = constant_C1(m, M, v);
    r.C2 = constant_C2(M, y0);
    r.F = std::max(r.B, r.C1);
    r.D_y0 = prism_gap(y0);
    r.H = 2 * M - 1;
    if (m >= 11) {
        auto lb = lower_bound(m, M);
        r.lower = lb.value;
        r.V = lb.V;
    }
    r.hausdorff_upper = hausdorff_upper(m, M, y0, v);
    r.cor_upper = cor_upper(m, M);
    if (M >= 4) r.bourdon_kleiner = bourdon_kleiner_upper(m, M);
    return r;
}

std::vector<BoundReport> bound_grid(int m_lo, int m_hi, int M_lo, int M_hi, double y0, ConstantsVariant v) {
    return grid_impl(m_lo, m_hi, M_lo, M_hi, y0, v, true);
}

std::vector<BoundReport> bound_grid_serial(int m_lo, int m_hi, int M_lo, int M_hi, double y0, ConstantsVariant v) {
    return grid_impl(m_lo, m_hi, M_lo, M_hi, y0, v, false);
}

std::vector<DenseRow> dense_set_table(double Q, const std::vector<int>& M_list) {
    if (!(Q > 0)) throw DomainError("dense_set_table: need Q > 0");
    std::vector<DenseRow> out;
    for (int M : M_list) {
        if (M < 4) throw DomainError("dense_set_table: M entries must be >= 4");
        const double p = std::pow(static_cast<double>(M), Q);
        DenseRow row;
        row.M = M;
        row.m = static_cast<int>(std::ceil(p * (1 - 1e-12)));
        row.m = std::max(row.m, 4);
        if (row.m >= 11) {
            row.lower = lower_bound(row.m, M).value;
            row.lower_gap = std::fabs(1 + Q - *row.lower);
        }
        row.bourdon_kleiner = bourdon_kleiner_upper(row.m, M);
        row.bk_gap = std::fabs(row.bourdon_kleiner - (1 + Q));
        out.push_back(row);
    }
    return out;
}

}  // namespace coxdim
