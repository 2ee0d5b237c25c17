#pragma once

#include "coxdim/coxeter.hpp"
#include "coxdim/davis.hpp"

#include <compare>
#include <string>
#include <vector>

namespace coxdim {

// A polygon of the Davis complex: the coset c<s_i, s_j> with c its ShortLex-least element.
struct PolygonKey {
    GroupElement coset;
    int i = 0, j = 0;  // i < j

    bool operator==(const PolygonKey&) const = default;
    std::strong_ordering operator<=>(const PolygonKey& o) const;
    std::string str() const;
};

struct PolygonKeyHash {
    std::size_t operator()(const PolygonKey& p) const noexcept;
};

PolygonKey polygon_through(const CoxeterGroup& W, const GroupElement& v, int i, int j);
// Boundary vertices, starting at the coset id, first step labelled i.
std::vector<GroupElement> polygon_vertices(const CoxeterGroup& W, const PolygonKey& p);
// All C(m,2) polygons containing v.
std::vector<PolygonKey> polygons_at(const CoxeterGroup& W, const GroupElement& v);

// Shells S_1..S_k about a single polygon; shells[0] = {base}. Each shell is sorted.
struct PolygonCensus {
    PolygonKey base;
    std::vector<std::vector<PolygonKey>> shells;

    std::size_t count(int k) const { return shells.at(k).size(); }
    std::size_t ball(int k) const;  // |B_k| including the base
};

PolygonCensus polygon_census(const CoxeterGroup& W, const PolygonKey& base, int k);

// Census over several base polygons, parallel over bases (OpenMP) and serially.
std::vector<PolygonCensus> census_many(const CoxeterGroup& W, const std::vector<PolygonKey>& bases, int k);
std::vector<PolygonCensus> census_many_serial(const CoxeterGroup& W, const std::vector<PolygonKey>& bases, int k);

// Same shells computed from the polygons of a finite ball. Throws IndeterminateError
// unless every polygon of B_k(base) is guaranteed to lie in the ball.
PolygonCensus polygon_census_in_ball(const DavisBall& ball, int base_polygon, int k);

struct ShellAudit {
    bool pass = true;
    std::string witness;  // first violation
};
// Shells pairwise disjoint, base in no shell, every S_k polygon meets S_{k-1} and misses B_{k-2}.
ShellAudit audit_shells(const CoxeterGroup& W, const PolygonCensus& c);

struct S1Census {
    std::size_t count = 0;
    std::size_t edge_neighbors = 0;    // meet the base in an edge
    std::size_t vertex_neighbors = 0;  // meet the base in a single vertex
    std::vector<PolygonKey> witnesses;
    double closed_form = 0;            // 2M(m-2) + 2M C(m-2, 2), uniform graphs only
    double bound = 0;                  // M(m^2 - 3m + 2)
};
S1Census census_S1(const CoxeterGroup& W, const PolygonKey& base);

struct S2Census {
    std::size_t count = 0;
    double bound = 0;  // constant A
};
S2Census census_S2(const CoxeterGroup& W, const PolygonKey& base);

struct TriangleBallCensus {
    int p = 0, q = 0, r = 0, k = 0;
    std::size_t S1 = 0;
    std::vector<std::size_t> ball_sizes;  // |B_0| .. |B_k|
    double bound = 0;                     // 2r(2r-3)^k
};
// Base polygon is the 2r-gon of the triangle group with labels p <= q <= r.
TriangleBallCensus census_triangle_ball(int p, int q, int r, int k);

struct FlatHexagonCensus {
    int ell = 0;
    std::size_t contained = 0;  // lattice hexagons lying inside the disk
    std::size_t centers = 0;    // lattice hexagons whose centre lies in the disk
    double bound = 0;           // b0 e^ell
};
// Hexagonal tiling with side y / sqrt2 and a disk of radius 2 sqrt2 y e^{ell/2} about a tile centre.
FlatHexagonCensus census_flat_hexagons(int ell, double y = 1.0);

enum class ItineraryMode {
    Strict,  // entries (halves counted as 1/2) sum to at most r
    Loose,   // integer entries sum to at most (r - k/2) + (j - k)
};

struct ItineraryCount {
    int j = 0, k = 0;  // length and number of 1/2 entries
    std::size_t count = 0;
    double stars_factor = 0;       // C(j,k) * stars-and-bars factor
    double slack_factor = 0;     // C(j,k) * C(r - floor(k/2) + j - k, j - k), with a slack bucket
    double binom_factor = 0;       // C(j,k) * C(r + j, j)
};
std::vector<ItineraryCount> enumerate_itineraries(int r, int j_max, ItineraryMode mode = ItineraryMode::Strict);

}  // namespace coxdim
