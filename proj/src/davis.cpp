#include "coxdim/davis.hpp"

#include "coxdim/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <set>

namespace coxdim {

int DavisBall::index_of(const GroupElement& g) const {
    auto it = index.find(g.nf);
    return it == index.end() ? -1 : it->second;
}

int DavisBall::edge_between(int u, int v) const {
    const int m = graph().m();
    for (int s = 1; s <= m; ++s)
        if (adjacent(u, s) == v) return edge_at[static_cast<std::size_t>(u) * m + (s - 1)];
    return -1;
}

DavisBall build_ball(const CoxeterGroup& W, int radius, std::size_t cap) {
    DavisBall b{W, radius, {}, {}, {}, {}, {}, {}, {}};
    b.vertices = W.enumerate_ball(radius, cap).elements;
    const int m = W.rank();
    const std::size_t n = b.vertices.size();
    for (std::size_t i = 0; i < n; ++i) b.index.emplace(b.vertices[i].nf, static_cast<int>(i));
    b.neighbor.assign(n * m, -1);
    b.edge_at.assign(n * m, -1);
    for (std::size_t i = 0; i < n; ++i) {
        for (int s = 1; s <= m; ++s) {
            if (b.neighbor[i * m + (s - 1)] >= 0) continue;
            int j = b.index_of(W.multiply(b.vertices[i], s));
            if (j < 0) continue;
            b.neighbor[i * m + (s - 1)] = j;
            b.neighbor[static_cast<std::size_t>(j) * m + (s - 1)] = static_cast<int>(i);
            BallEdge e;
            e.u = std::min(static_cast<int>(i), j);
            e.v = std::max(static_cast<int>(i), j);
            e.label = s;
            const int id = static_cast<int>(b.edges.size());
            b.edges.push_back(e);
            b.edge_at[i * m + (s - 1)] = id;
            b.edge_at[static_cast<std::size_t>(j) * m + (s - 1)] = id;
        }
    }

    // Walls, keyed by the reduced reflection word of the edge (u, us).
    std::map<GroupElement, std::vector<int>> wall_edges;
    for (std::size_t e = 0; e < b.edges.size(); ++e) {
        const auto& E = b.edges[e];
        wall_edges[W.reflection(b.vertices[E.u], E.label)].push_back(static_cast<int>(e));
    }
    for (auto& [r, es] : wall_edges) {
        const int id = static_cast<int>(b.walls.size());
        for (int e : es) b.edges[e].wall = id;
        b.walls.push_back(Wall{r, es});
    }

    // Polygons fully inside the ball, one per minimal coset representative.
    for (std::size_t c = 0; c < n; ++c) {
        for (int i = 1; i <= m; ++i) {
            for (int j = i + 1; j <= m; ++j) {
                const int ni = b.neighbor[c * m + (i - 1)];
                const int nj = b.neighbor[c * m + (j - 1)];
                // c must be the shortest element of c<s_i,s_j>.
                if (ni >= 0 && b.vertices[ni].length() < b.vertices[c].length()) continue;
                if (nj >= 0 && b.vertices[nj].length() < b.vertices[c].length()) continue;
                if (W.is_right_descent(b.vertices[c], i) || W.is_right_descent(b.vertices[c], j)) continue;
                const int len = 2 * W.graph().label(i, j);
                Polygon P;
                P.i = i;
                P.j = j;
                P.coset_id = b.vertices[c];
                int cur = static_cast<int>(c);
                bool inside = true;
                for (int k = 0; k < len; ++k) {
                    P.boundary.push_back(cur);
                    if (k + 1 == len) break;
                    cur = b.adjacent(cur, k % 2 == 0 ? i : j);
                    if (cur < 0) {
                        inside = false;
                        break;
                    }
                }
                if (!inside) continue;
                if (b.adjacent(cur, j) != static_cast<int>(c)) throw std::logic_error("polygon boundary did not close");
                b.polygons.push_back(std::move(P));
            }
        }
    }
    return b;
}

std::map<int, int> walls_crossed(std::span<const int> path, const DavisBall& ball) {
    std::map<int, int> out;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        int e = ball.edge_between(path[k], path[k + 1]);
        if (e < 0) throw InputError("walls_crossed: path is disconnected between positions " + std::to_string(k) +
                                    " and " + std::to_string(k + 1));
        ++out[ball.edges[e].wall];
    }
    return out;
}

bool is_geodesic(std::span<const int> path, const DavisBall& ball) {
    if (path.empty()) throw InputError("is_geodesic: empty path");
    const int L = static_cast<int>(path.size()) - 1;
    for (int v : {path.front(), path.back()})
        if (ball.vertex_length(v) > ball.radius - L)
            throw IndeterminateError("is_geodesic: endpoint " + ball.vertices[v].str() + " is within " +
                                     std::to_string(L) + " of the ball boundary; need radius >= " +
                                     std::to_string(ball.vertex_length(v) + L));
    for (auto [w, c] : walls_crossed(path, ball))
        if (c > 1) return false;
    return true;
}

std::vector<int> bfs_distances(const DavisBall& ball, int source, const std::vector<char>* allowed) {
    const int m = ball.graph().m();
    std::vector<int> dist(ball.vertices.size(), -1);
    std::deque<int> q{source};
    dist[source] = 0;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int s = 1; s <= m; ++s) {
            int w = ball.adjacent(v, s);
            if (w < 0 || dist[w] >= 0) continue;
            if (allowed && !(*allowed)[w]) continue;
            dist[w] = dist[v] + 1;
            q.push_back(w);
        }
    }
    return dist;
}

bool is_convex(std::span<const int> sub, const DavisBall& ball) {
    if (sub.empty()) return true;
    std::vector<char> allowed(ball.vertices.size(), 0);
    for (int v : sub) allowed[v] = 1;
    int max_len = 0, diam = 0;
    bool convex = true;
    std::vector<std::vector<int>> full;
    for (int p : sub) {
        auto d_ball = bfs_distances(ball, p);
        auto d_sub = bfs_distances(ball, p, &allowed);
        for (int q : sub) {
            if (d_ball[q] < 0) throw IndeterminateError("is_convex: vertices disconnected inside the ball");
            diam = std::max(diam, d_ball[q]);
            if (d_sub[q] != d_ball[q]) convex = false;
        }
        max_len = std::max(max_len, ball.vertex_length(p));
    }
    // Any geodesic between sub vertices stays within max_len + diam/2 of the center.
    const int need = max_len + (diam + 1) / 2;
    if (need > ball.radius)
        throw IndeterminateError("is_convex: ball radius " + std::to_string(ball.radius) + " too small, need " +
                                 std::to_string(need));
    return convex;
}

std::vector<PeriodicSubcomplex> find_flats_and_planes(const DavisBall& ball) {
    const auto& g = ball.graph();
    const int m = g.m();
    if (ball.radius < 2) throw InputError("find_flats_and_planes: ball radius must be >= 2");
    std::vector<PeriodicSubcomplex> out;
    for (int i = 1; i <= m; ++i)
        for (int j = i + 1; j <= m; ++j)
            for (int k = j + 1; k <= m; ++k) {
                std::array<int, 3> J{i, j, k};
                std::map<GroupElement, std::vector<int>> groups;
                for (std::size_t p = 0; p < ball.polygons.size(); ++p) {
                    const auto& P = ball.polygons[p];
                    if ((P.i != i && P.i != j && P.i != k) || (P.j != i && P.j != j && P.j != k)) continue;
                    groups[ball.group.min_coset_rep(P.coset_id, J)].push_back(static_cast<int>(p));
                }
                const bool flat = g.label(i, j) == 3 && g.label(i, k) == 3 && g.label(j, k) == 3;
                for (auto& [rep, polys] : groups) out.push_back(PeriodicSubcomplex{J, rep, flat, std::move(polys)});
            }
    return out;
}

std::vector<int> carrier_polygons(const DavisBall& ball, int wall) {
    std::set<int> edges(ball.walls.at(wall).edges.begin(), ball.walls.at(wall).edges.end());
    std::vector<int> out;
    for (std::size_t p = 0; p < ball.polygons.size(); ++p) {
        const auto& B = ball.polygons[p].boundary;
        for (std::size_t k = 0; k < B.size(); ++k) {
            if (edges.count(ball.edge_between(B[k], B[(k + 1) % B.size()]))) {
                out.push_back(static_cast<int>(p));
                break;
            }
        }
    }
    return out;
}

bool in_carrier(const CoxeterGroup& W, const GroupElement& r, const GroupElement& x) {
    Word w = reversed(x.nf);
    w.insert(w.end(), r.nf.begin(), r.nf.end());
    w.insert(w.end(), x.nf.begin(), x.nf.end());
    auto c = W.reduce(w);
    std::set<Letter> letters(c.nf.begin(), c.nf.end());
    // x^{-1} r x lies in some rank-two special subgroup (every pair of generators spans one).
    return letters.size() <= 2;
}

std::string export_ball_json(const DavisBall& ball) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["graph"] = ball.graph().to_text();
    j["radius"] = ball.radius;
    auto& V = j["vertices"] = nlohmann::ordered_json::array();
    for (const auto& v : ball.vertices) V.push_back(v.str());
    auto& E = j["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : ball.edges) E.push_back({e.u, e.v, e.label, e.wall});
    auto& P = j["polygons"] = nlohmann::ordered_json::array();
    for (const auto& p : ball.polygons)
        P.push_back({{"labels", {p.i, p.j}}, {"coset", p.coset_id.str()}, {"boundary", p.boundary}});
    auto& Wj = j["walls"] = nlohmann::ordered_json::array();
    for (const auto& w : ball.walls) Wj.push_back({{"reflection", w.reflection.str()}, {"edges", w.edges}});
    return j.dump(1) + "\n";
}

}  // namespace coxdim
