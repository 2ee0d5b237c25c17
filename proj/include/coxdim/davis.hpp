#pragma once

#include "coxdim/coxeter.hpp"

#include <array>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace coxdim {

struct BallEdge {
    int u = -1;  // shorter endpoint
    int v = -1;
    int label = 0;
    int wall = -1;
};

struct Polygon {
    int i = 0, j = 0;            // i < j
    std::vector<int> boundary;   // 2 m_ij vertex indices, starting at the coset id, first step labelled i
    GroupElement coset_id;       // ShortLex-least element of the coset
};

struct Wall {
    GroupElement reflection;
    std::vector<int> edges;
};

// Word-metric ball of the Davis complex. Vertices are sorted in ShortLex order,
// walls by reflection; all ids are therefore deterministic.
struct DavisBall {
    CoxeterGroup group;
    int radius = 0;
    std::vector<GroupElement> vertices;
    std::vector<BallEdge> edges;
    std::vector<Polygon> polygons;
    std::vector<Wall> walls;
    std::vector<int> neighbor;  // vertices.size() * m, -1 when outside the ball
    std::vector<int> edge_at;   // same shape, edge ids
    std::unordered_map<Word, int, WordHash> index;

    const DefiningGraph& graph() const { return group.graph(); }
    int index_of(const GroupElement& g) const;
    int adjacent(int v, int label) const { return neighbor[static_cast<std::size_t>(v) * graph().m() + (label - 1)]; }
    int edge_between(int u, int v) const;  // -1 if not adjacent
    int vertex_length(int v) const { return static_cast<int>(vertices[v].length()); }
};

DavisBall build_ball(const CoxeterGroup& W, int radius, std::size_t cap = kDefaultBallCap);

// Path given as a vertex sequence. Returns wall id -> number of crossings.
std::map<int, int> walls_crossed(std::span<const int> path, const DavisBall& ball);
bool is_geodesic(std::span<const int> path, const DavisBall& ball);

// BFS distances from source; when `allowed` is given, only those vertices are used.
std::vector<int> bfs_distances(const DavisBall& ball, int source, const std::vector<char>* allowed = nullptr);

// Convexity of the full subgraph on `sub` (edges of the ball between sub vertices).
bool is_convex(std::span<const int> sub, const DavisBall& ball);

struct PeriodicSubcomplex {
    std::array<int, 3> triple{};
    GroupElement coset_rep;
    bool flat = false;  // all three labels equal 3
    std::vector<int> polygons;
};

std::vector<PeriodicSubcomplex> find_flats_and_planes(const DavisBall& ball);

// Polygons of the ball containing an edge of the wall.
std::vector<int> carrier_polygons(const DavisBall& ball, int wall);
// Whether vertex x lies on some polygon crossed by the wall of reflection r.
bool in_carrier(const CoxeterGroup& W, const GroupElement& r, const GroupElement& x);

std::string export_ball_json(const DavisBall& ball);

}  // namespace coxdim
