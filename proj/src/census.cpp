#include "coxdim/census.hpp"

#include "coxdim/bounds.hpp"
#include "coxdim/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace coxdim {

std::strong_ordering PolygonKey::operator<=>(const PolygonKey& o) const {
    if (auto c = coset <=> o.coset; c != 0) return c;
    if (auto c = i <=> o.i; c != 0) return c;
    return j <=> o.j;
}

std::string PolygonKey::str() const {
    return coset.str() + "<" + std::to_string(i) + "," + std::to_string(j) + ">";
}

std::size_t PolygonKeyHash::operator()(const PolygonKey& p) const noexcept {
    std::size_t h = WordHash{}(p.coset.nf);
    h ^= static_cast<std::size_t>(p.i * 131 + p.j) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

PolygonKey polygon_through(const CoxeterGroup& W, const GroupElement& v, int i, int j) {
    if (i > j) std::swap(i, j);
    if (i < 1 || j > W.rank() || i == j) throw InputError("polygon_through: bad generator pair");
    const std::array<int, 2> J{i, j};
    return {W.min_coset_rep(v, J), i, j};
}

std::vector<GroupElement> polygon_vertices(const CoxeterGroup& W, const PolygonKey& p) {
    const int len = 2 * W.graph().label(p.i, p.j);
    std::vector<GroupElement> out;
    out.reserve(len);
    GroupElement cur = p.coset;
    for (int k = 0; k < len; ++k) {
        out.push_back(cur);
        cur = W.multiply(cur, k % 2 == 0 ? p.i : p.j);
    }
    return out;
}

std::vector<PolygonKey> polygons_at(const CoxeterGroup& W, const GroupElement& v) {
    std::vector<PolygonKey> out;
    for (int i = 1; i <= W.rank(); ++i)
        for (int j = i + 1; j <= W.rank(); ++j) out.push_back(polygon_through(W, v, i, j));
    return out;
}

std::size_t PolygonCensus::ball(int k) const {
    std::size_t n = 0;
    for (int i = 0; i <= k; ++i) n += shells.at(i).size();
    return n;
}

PolygonCensus polygon_census(const CoxeterGroup& W, const PolygonKey& base, int k) {
    if (k < 0) throw InputError("polygon_census: k must be >= 0");
    PolygonCensus c{base, {{base}}};
    std::unordered_set<PolygonKey, PolygonKeyHash> seen{base};
    for (int layer = 1; layer <= k; ++layer) {
        std::vector<PolygonKey> next;
        for (const auto& Q : c.shells[layer - 1])
            for (const auto& v : polygon_vertices(W, Q))
                for (auto& R : polygons_at(W, v))
                    if (seen.insert(R).second) next.push_back(std::move(R));
        std::sort(next.begin(), next.end());
        c.shells.push_back(std::move(next));
    }
    return c;
}

std::vector<PolygonCensus> census_many(const CoxeterGroup& W, const std::vector<PolygonKey>& bases, int k) {
    std::vector<PolygonCensus> out(bases.size());
    const long n = static_cast<long>(bases.size());
#pragma omp parallel for schedule(dynamic)
    for (long b = 0; b < n; ++b) out[b] = polygon_census(W, bases[b], k);
    return out;
}

std::vector<PolygonCensus> census_many_serial(const CoxeterGroup& W, const std::vector<PolygonKey>& bases, int k) {
    std::vector<PolygonCensus> out;
    out.reserve(bases.size());
    for (const auto& b : bases) out.push_back(polygon_census(W, b, k));
    return out;
}

PolygonCensus polygon_census_in_ball(const DavisBall& ball, int base_polygon, int k) {
    const auto& P = ball.polygons.at(base_polygon);
    int max_len = 0;
    for (int v : P.boundary) max_len = std::max(max_len, ball.vertex_length(v));
    const int need = max_len + ball.graph().max_label() * k;
    if (need > ball.radius)
        throw IndeterminateError("polygon_census_in_ball: need ball radius >= " + std::to_string(need));

    std::vector<std::vector<int>> at_vertex(ball.vertices.size());
    for (std::size_t p = 0; p < ball.polygons.size(); ++p)
        for (int v : ball.polygons[p].boundary) at_vertex[v].push_back(static_cast<int>(p));

    std::vector<char> seen(ball.polygons.size(), 0);
    seen[base_polygon] = 1;
    std::vector<std::vector<int>> layers{{base_polygon}};
    for (int layer = 1; layer <= k; ++layer) {
        std::vector<int> next;
        for (int q : layers[layer - 1])
            for (int v : ball.polygons[q].boundary)
                for (int r : at_vertex[v])
                    if (!seen[r]) {
                        seen[r] = 1;
                        next.push_back(r);
                    }
        layers.push_back(std::move(next));
    }
    auto key = [&](int p) { return PolygonKey{ball.polygons[p].coset_id, ball.polygons[p].i, ball.polygons[p].j}; };
    PolygonCensus c{key(base_polygon), {}};
    for (const auto& L : layers) {
        std::vector<PolygonKey> s;
        for (int p : L) s.push_back(key(p));
        std::sort(s.begin(), s.end());
        c.shells.push_back(std::move(s));
    }
    return c;
}

ShellAudit audit_shells(const CoxeterGroup& W, const PolygonCensus& c) {
    ShellAudit a;
    auto fail = [&](std::string w) {
        if (a.pass) a.witness = std::move(w);
        a.pass = false;
    };
    if (c.shells.empty() || c.shells[0] != std::vector<PolygonKey>{c.base}) {
        fail("shell 0 is not the base polygon");
        return a;
    }
    std::unordered_map<PolygonKey, int, PolygonKeyHash> shell_of;
    for (std::size_t k = 0; k < c.shells.size(); ++k)
        for (const auto& p : c.shells[k]) {
            auto [it, fresh] = shell_of.emplace(p, static_cast<int>(k));
            if (!fresh)
                fail("polygon " + p.str() + " lies in shells " + std::to_string(it->second) + " and " +
                     std::to_string(k));
        }
    // Shell index must be the polygon-adjacency distance from the base.
    for (std::size_t k = 1; k < c.shells.size(); ++k)
        for (const auto& p : c.shells[k]) {
            int nearest = static_cast<int>(c.shells.size());
            for (const auto& v : polygon_vertices(W, p))
                for (const auto& q : polygons_at(W, v)) {
                    if (q == p) continue;
                    auto it = shell_of.find(q);
                    if (it != shell_of.end()) nearest = std::min(nearest, it->second);
                }
            if (nearest != static_cast<int>(k) - 1)
                fail("polygon " + p.str() + " in shell " + std::to_string(k) + " touches shell " +
                     std::to_string(nearest));
        }
    return a;
}

S1Census census_S1(const CoxeterGroup& W, const PolygonKey& base) {
    const auto& g = W.graph();
    const int m = g.m(), M = g.max_label();
    S1Census s;
    auto c = polygon_census(W, base, 1);
    const auto verts = polygon_vertices(W, base);
    std::set<GroupElement> P(verts.begin(), verts.end());
    for (const auto& q : c.shells[1]) {
        int shared = 0;
        for (const auto& v : polygon_vertices(W, q)) shared += static_cast<int>(P.count(v));
        (shared >= 2 ? s.edge_neighbors : s.vertex_neighbors)++;
    }
    s.count = c.shells[1].size();
    s.witnesses = std::move(c.shells[1]);
    if (g.is_uniform()) s.closed_form = 2.0 * M * (m - 2) + 2.0 * M * (m - 2) * (m - 3) / 2;
    s.bound = static_cast<double>(M) * (static_cast<double>(m) * m - 3.0 * m + 2);
    return s;
}

S2Census census_S2(const CoxeterGroup& W, const PolygonKey& base) {
    S2Census s;
    s.count = polygon_census(W, base, 2).count(2);
    s.bound = constant_A(W.rank(), W.graph().max_label());
    return s;
}

TriangleBallCensus census_triangle_ball(int p, int q, int r, int k) {
    std::array<int, 3> t{p, q, r};
    std::sort(t.begin(), t.end());
    if (t[0] < 2) throw InputError("census_triangle_ball: labels must be >= 2");
    const double curv = 1.0 / t[0] + 1.0 / t[1] + 1.0 / t[2];
    if (curv >= 1.0 - 1e-12) throw NotApplicableError("census_triangle_ball: triple is not hyperbolic");
    if (t[0] < 3) throw InputError("census_triangle_ball: labels below 3 are not large type");
    if (k < 0 || k > 6) throw InputError("census_triangle_ball: k must lie in 0..6");
    // s1 s2 span the largest polygon.
    CoxeterGroup W(DefiningGraph::from_matrix({{1, t[2], t[0]}, {t[2], 1, t[1]}, {t[0], t[1], 1}}));
    auto c = polygon_census(W, {GroupElement{}, 1, 2}, std::max(k, 1));
    TriangleBallCensus out{t[0], t[1], t[2], k, c.count(1), {}, 0};
    for (int i = 0; i <= k; ++i) out.ball_sizes.push_back(c.ball(i));
    out.bound = 2.0 * t[2] * std::pow(2.0 * t[2] - 3, k);
    return out;
}

FlatHexagonCensus census_flat_hexagons(int ell, double y) {
    if (ell < 0 || ell > 12) throw InputError("census_flat_hexagons: ell must lie in 0..12");
    if (!(y > 0)) throw DomainError("census_flat_hexagons: y must be positive");
    using std::numbers::pi;
    // Work in units of the side length so the count is independent of y up to rounding.
    const double s = y / std::sqrt(2.0);
    const double R = 2 * std::sqrt(2.0) * y * std::exp(ell / 2.0) / s;
    const double sq3 = std::sqrt(3.0);
    std::array<std::array<double, 2>, 6> vert;
    for (int k = 0; k < 6; ++k) vert[k] = {std::cos(pi / 6 + k * pi / 3), std::sin(pi / 6 + k * pi / 3)};
    const int n = static_cast<int>(R) + 3;
    FlatHexagonCensus out{ell, 0, 0, constant_b0() * std::exp(ell)};
    for (int a = -2 * n; a <= 2 * n; ++a)
        for (int b = -2 * n; b <= 2 * n; ++b) {
            const double cx = sq3 * a + sq3 / 2 * b, cy = 1.5 * b;
            if (std::hypot(cx, cy) <= R) ++out.centers;
            bool inside = true;
            for (const auto& v : vert) inside = inside && std::hypot(cx + v[0], cy + v[1]) <= R;
            if (inside) ++out.contained;
        }
    return out;
}

namespace {

// Integer compositions: number of ways to write a total <= budget as n positive parts.
void count_strict(int r2, int j, int halves, int pos, int used2, std::vector<std::vector<std::size_t>>& acc) {
    // r2, used2 are doubled sums so that halves stay integral.
    if (pos == j) {
        ++acc[j][halves];
        return;
    }
    if (used2 + 1 <= r2) count_strict(r2, j, halves + 1, pos + 1, used2 + 1, acc);
    for (int e = 1; used2 + 2 * e <= r2; ++e) count_strict(r2, j, halves, pos + 1, used2 + 2 * e, acc);
}

}  // namespace

std::vector<ItineraryCount> enumerate_itineraries(int r, int j_max, ItineraryMode mode) {
    if (r < 1 || r > 6) throw InputError("enumerate_itineraries: r must lie in 1..6");
    if (j_max < 1 || j_max > 2 * r) throw InputError("enumerate_itineraries: j_max must lie in 1..2r");
    std::vector<ItineraryCount> out;
    for (int j = 1; j <= j_max; ++j) {
        std::vector<std::vector<std::size_t>> acc(j + 1, std::vector<std::size_t>(j + 1, 0));
        if (mode == ItineraryMode::Strict) {
            count_strict(2 * r, j, 0, 0, 0, acc);
        } else {
            // Choose the positions of the halves, then integer entries >= 1 with sum <= (r - k/2) + (j - k).
            for (int k = 0; k <= j; ++k) {
                if (2 * r - k < 0) continue;
                const int n = j - k;
                const int budget = static_cast<int>(std::floor(r - k / 2.0)) + n;
                // Compositions of totals n..budget into n positive parts: sum C(t-1, n-1) = C(budget, n).
                const double ways = n == 0 ? 1.0 : std::round(std::exp(log_binomial(budget, n)));
                const double pos = std::round(std::exp(log_binomial(j, k)));
                acc[j][k] = budget >= n ? static_cast<std::size_t>(ways * pos) : 0;
            }
        }
        for (int k = 0; k <= j; ++k)
            out.push_back({j, k, acc[j][k], std::exp(log_binomial(j, k) + log_stars_and_bars(r, j, k)),
                           std::exp(log_binomial(j, k) + log_binomial(r - k / 2 + j - k, j - k)),
                           std::exp(log_binomial(j, k) + log_binomial(r + j, j))});
    }
    return out;
}

}  // namespace coxdim
