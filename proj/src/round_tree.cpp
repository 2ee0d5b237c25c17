#include "coxdim/round_tree.hpp"

#include "coxdim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_set>

namespace coxdim {

namespace {

using Edge = std::uint64_t;

Edge edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<Edge>(a) << 32) | static_cast<std::uint32_t>(b);
}
int edge_lo(Edge e) { return static_cast<int>(e >> 32); }
int edge_hi(Edge e) { return static_cast<int>(e & 0xffffffffu); }

std::string address_str(const std::vector<int>& a) {
    if (a.empty()) return "()";
    std::string s = "(";
    for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
    return s + ")";
}

int intern(RoundTree& t, const GroupElement& g) {
    auto [it, inserted] = t.vertex_id.try_emplace(g.nf, static_cast<int>(t.vertices.size()));
    if (inserted) t.vertices.push_back(g);
    return it->second;
}

// Polygon start<a, b> walked from start with a first.
int add_polygon(RoundTree& t, const CoxeterGroup& W, const GroupElement& start, int a, int b) {
    if (a == b) throw ConstructionError("strip polygon with equal labels " + std::to_string(a) + " at " + start.str());
    RTPolygon p;
    p.key = polygon_through(W, start, a, b);
    p.first = a;
    p.second = b;
    const int len = 2 * t.graph.label(a, b);
    GroupElement cur = start;
    for (int k = 0; k < len; ++k) {
        p.boundary.push_back(intern(t, cur));
        cur = W.multiply(cur, k % 2 == 0 ? a : b);
    }
    t.polygons.push_back(std::move(p));
    return static_cast<int>(t.polygons.size()) - 1;
}

int step_label(const RTPolygon& p, int k) { return k % 2 == 0 ? p.first : p.second; }

void build_stage0(RoundTree& t, const CoxeterGroup& W) {
    const int m12 = t.graph.label(1, 2), m13 = t.graph.label(1, 3), m23 = t.graph.label(2, 3);
    const GroupElement e{};
    const int P12 = add_polygon(t, W, e, 1, 2);
    const auto b12 = t.polygons[P12].boundary;
    const GroupElement v = t.vertices[b12[m12]];
    const int P13 = add_polygon(t, W, v, 1, 3);
    const int P23 = add_polygon(t, W, v, 3, 2);
    const auto& b13 = t.polygons[P13].boundary;
    const auto& b23 = t.polygons[P23].boundary;

    // Two halves of P12 from x0 = e to the neighbours of v.
    std::vector<int> half1(b12.begin(), b12.begin() + m12);
    std::vector<int> half2{b12[0]};
    for (int k = 2 * m12 - 1; k > m12; --k) half2.push_back(b12[k]);
    const int vs1 = intern(t, W.multiply(v, 1));
    if (half1.back() != vs1) std::swap(half1, half2);

    RTBranch br;
    br.L = half1;
    br.L.push_back(b13[2]);
    br.L.push_back(b13[3]);
    br.R = half2;
    br.R.push_back(b23[2 * m23 - 2]);
    br.R.push_back(b23[2 * m23 - 3]);
    for (int k = 3; k <= 2 * m13 - 1; ++k) {
        br.E.push_back(b13[k]);
        if (k < 2 * m13 - 1) br.E_labels.push_back(step_label(t.polygons[P13], k));
    }
    br.E_labels.push_back(step_label(t.polygons[P23], 1));
    for (int k = 2; k <= 2 * m23 - 3; ++k) {
        br.E.push_back(b23[k]);
        if (k < 2 * m23 - 3) br.E_labels.push_back(step_label(t.polygons[P23], k));
    }
    br.internal = {2 * m13 - 4};
    br.partner = {intern(t, v)};
    br.polygons = {P12, P13, P23};
    t.stages.push_back({0, {std::move(br)}});
}

std::vector<std::uint64_t> label_masks(const RoundTree& t) {
    std::vector<std::uint64_t> mask(t.vertices.size(), 0);
    for (const auto& p : t.polygons)
        for (int v : p.boundary) mask[v] |= (1ULL << p.first) | (1ULL << p.second);
    return mask;
}

void build_next_stage(RoundTree& t, const CoxeterGroup& W) {
    const auto& prev = t.stages.back();
    const int n = prev.n;
    const auto& tri = t.forbidden(n);
    const std::uint64_t tmask = (1ULL << tri[0]) | (1ULL << tri[1]) | (1ULL << tri[2]);
    const auto mask = label_masks(t);
    const int m = t.graph.m();
    RoundTreeStage next{n + 1, {}};

    for (const auto& br : prev.branches) {
        const int k = static_cast<int>(br.internal.size());
        const int N = static_cast<int>(br.E.size()) - 1;
        // c[j][i]: label of strip j at internal vertex i.
        std::vector<std::vector<int>> c(t.V, std::vector<int>(k));
        for (int i = 0; i < k; ++i) {
            const int vi = br.E[br.internal[i]], vp = br.partner[i];
            const std::uint64_t avoid = mask[vi] | mask[vp] | tmask;
            std::vector<int> free;
            for (int s = 1; s <= m && static_cast<int>(free.size()) < t.V; ++s)
                if (!(avoid >> s & 1)) free.push_back(s);
            if (static_cast<int>(free.size()) < t.V)
                throw ConstructionError("label choice infeasible at vertex " + t.vertices[vi].str() + " (address " +
                                        address_str(br.address) + ")");
            if (i == 0) {
                for (int j = 0; j < t.V; ++j) c[j][0] = free[j];
                continue;
            }
            std::vector<bool> used(t.V, false), taken(t.V, false);
            for (int j = 0; j < t.V; ++j)
                for (int f = 0; f < t.V; ++f)
                    if (free[f] == c[j][i - 1]) c[j][i] = free[f], used[j] = taken[f] = true;
            int f = 0;
            for (int j = 0; j < t.V; ++j) {
                if (used[j]) continue;
                while (taken[f]) ++f;
                c[j][i] = free[f];
                taken[f] = true;
            }
        }

        for (int j = 0; j < t.V; ++j) {
            RTBranch child;
            child.address = br.address;
            child.address.push_back(j + 1);
            child.polygons = br.polygons;
            auto new_polygon = [&](const GroupElement& start, int a, int b, bool corner) {
                const int id = add_polygon(t, W, start, a, b);
                auto& p = t.polygons[id];
                p.stage = n + 1;
                p.parent_address = br.address;
                p.strip = j + 1;
                p.corner = corner;
                p.designated = 1;
                child.strip.push_back(id);
                child.polygons.push_back(id);
                return id;
            };
            auto append_path = [&](const RTPolygon& p, int from, int to) {
                for (int q = from; q <= to; ++q) {
                    if (!child.E.empty() && q == from) {
                        if (child.E.back() != p.boundary[q])
                            throw ConstructionError("strip outer paths do not chain at " + t.vertices[p.boundary[q]].str());
                        continue;
                    }
                    if (!child.E.empty()) child.E_labels.push_back(step_label(p, q - 1));
                    child.E.push_back(p.boundary[q]);
                }
            };

            int seg = 0;  // internal vertices strictly left of the current edge
            for (int s = 1; s <= N; ++s) {
                while (seg < k && br.internal[seg] < s) ++seg;
                // Edge s joins E[s-1] and E[s]; seg internal vertices sit at positions < s.
                int z;
                bool corner_after = false;
                if (seg == 0) {
                    z = c[j][0];
                } else if (seg == k) {
                    z = c[j][k - 1];
                } else {
                    const int x = c[j][seg - 1], y = c[j][seg];
                    const int first_edge = br.internal[seg - 1] + 1;
                    if (x == y) {
                        z = x;
                    } else {
                        if (br.internal[seg] - br.internal[seg - 1] < 2)
                            throw ConstructionError("internal vertices too close for a corner at " +
                                                    t.vertices[br.E[br.internal[seg]]].str());
                        z = s == first_edge ? x : y;
                        corner_after = s == first_edge;
                    }
                }
                const int label = br.E_labels[s - 1];
                const GroupElement u = t.vertices[br.E[s - 1]];
                const int id = new_polygon(u, z, label, false);
                const RTPolygon& P = t.polygons[id];
                const int len = static_cast<int>(P.boundary.size());
                if (s == 1) {
                    child.L = br.L;
                    child.L.push_back(P.boundary[1]);
                    child.L.push_back(P.boundary[2]);
                }
                append_path(P, s == 1 ? 2 : 1, s == N ? len - 3 : len - 2);
                if (s == N) {
                    child.R = br.R;
                    child.R.push_back(P.boundary[len - 2]);
                    child.R.push_back(P.boundary[len - 3]);
                }
                if (s < N && !corner_after) {
                    child.internal.push_back(static_cast<int>(child.E.size()) - 1);
                    child.partner.push_back(br.E[s]);
                }
                if (corner_after) {
                    const int x = c[j][seg - 1], y = c[j][seg];
                    const int cid = new_polygon(t.vertices[br.E[s]], x, y, true);
                    const RTPolygon& C = t.polygons[cid];
                    child.internal.push_back(static_cast<int>(child.E.size()) - 1);
                    child.partner.push_back(br.E[s]);
                    append_path(C, 1, static_cast<int>(C.boundary.size()) - 1);
                    child.internal.push_back(static_cast<int>(child.E.size()) - 1);
                    child.partner.push_back(br.E[s]);
                }
            }
            next.branches.push_back(std::move(child));
        }
    }
    t.stages.push_back(std::move(next));
}

// Edge -> wall id, with walls identified by reduced reflection words.
struct WallTable {
    std::unordered_map<Edge, int> wall;
};

WallTable wall_table(const RoundTree& t, const std::vector<int>& polys) {
    const CoxeterGroup W(t.graph);
    WallTable out;
    std::unordered_map<Word, int, WordHash> ids;
    for (int pid : polys) {
        const auto& p = t.polygons[pid];
        const int len = static_cast<int>(p.boundary.size());
        for (int k = 0; k < len; ++k) {
            const Edge e = edge_key(p.boundary[k], p.boundary[(k + 1) % len]);
            if (out.wall.count(e)) continue;
            const auto r = W.reflection(t.vertices[p.boundary[k]], step_label(p, k));
            auto [it, _] = ids.try_emplace(r.nf, static_cast<int>(ids.size()));
            out.wall[e] = it->second;
        }
    }
    return out;
}

std::vector<int> stage_polygons(const RoundTree& t, int n) {
    std::vector<int> out;
    for (std::size_t p = 0; p < t.polygons.size(); ++p)
        if (t.polygons[p].stage <= n) out.push_back(static_cast<int>(p));
    return out;
}

struct LocalGraph {
    std::vector<int> verts;                    // local -> global
    std::vector<std::vector<std::pair<int, int>>> adj;  // (neighbour, wall)
};

LocalGraph local_graph(const RoundTree& t, const std::vector<int>& polys, const WallTable& walls) {
    LocalGraph g;
    std::unordered_map<int, int> local;
    std::set<Edge> edges;
    for (int pid : polys) {
        const auto& b = t.polygons[pid].boundary;
        for (std::size_t k = 0; k < b.size(); ++k) {
            if (local.try_emplace(b[k], static_cast<int>(g.verts.size())).second) g.verts.push_back(b[k]);
            edges.insert(edge_key(b[k], b[(k + 1) % b.size()]));
        }
    }
    g.adj.resize(g.verts.size());
    for (Edge e : edges) {
        const int a = local[edge_lo(e)], b = local[edge_hi(e)], w = walls.wall.at(e);
        g.adj[a].push_back({b, w});
        g.adj[b].push_back({a, w});
    }
    return g;
}

// Returns the local index of a target reached by a wall-repeating BFS-tree path, or -1.
int convexity_from(const LocalGraph& g, int src, int n_walls) {
    const int N = static_cast<int>(g.verts.size());
    std::vector<int> parent(N, -2), pwall(N, -1), order;
    std::vector<std::vector<int>> children(N);
    std::queue<int> q;
    parent[src] = -1;
    q.push(src);
    while (!q.empty()) {
        const int a = q.front();
        q.pop();
        for (auto [b, w] : g.adj[a])
            if (parent[b] == -2) {
                parent[b] = a;
                pwall[b] = w;
                children[a].push_back(b);
                q.push(b);
            }
    }
    std::vector<int> count(n_walls, 0);
    // Iterative DFS on the BFS tree with enter/exit markers.
    std::vector<std::pair<int, bool>> st{{src, false}};
    while (!st.empty()) {
        auto [a, done] = st.back();
        st.pop_back();
        if (done) {
            if (pwall[a] >= 0) --count[pwall[a]];
            continue;
        }
        if (pwall[a] >= 0 && ++count[pwall[a]] > 1) return a;
        st.push_back({a, true});
        for (int b : children[a]) st.push_back({b, false});
    }
    for (int v = 0; v < N; ++v)
        if (parent[v] == -2) return v;  // disconnected
    return -1;
}

CheckResult convexity_impl(const RoundTree& t, int n, bool parallel) {
    const auto polys = stage_polygons(t, n);
    const auto walls = wall_table(t, polys);
    int n_walls = 0;
    for (const auto& [e, w] : walls.wall) n_walls = std::max(n_walls, w + 1);
    const auto g = local_graph(t, polys, walls);
    const int N = static_cast<int>(g.verts.size());
    std::vector<int> bad(N, -1);
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 8)
        for (int s = 0; s < N; ++s) bad[s] = convexity_from(g, s, n_walls);
    } else {
        for (int s = 0; s < N; ++s) bad[s] = convexity_from(g, s, n_walls);
    }
    CheckResult r;
    for (int s = 0; s < N; ++s)
        if (bad[s] >= 0) {
            r.fail("BFS path in A_" + std::to_string(n) + " from " + t.vertices[g.verts[s]].str() + " to " +
                   t.vertices[g.verts[bad[s]]].str() + " crosses a wall twice");
            break;
        }
    return r;
}

struct CellData {
    std::unordered_map<Edge, int> edge_mult;
    std::set<int> verts;
};

CellData cells(const RoundTree& t, const std::vector<int>& polys) {
    CellData d;
    for (int pid : polys) {
        const auto& b = t.polygons[pid].boundary;
        for (std::size_t k = 0; k < b.size(); ++k) {
            d.verts.insert(b[k]);
            ++d.edge_mult[edge_key(b[k], b[(k + 1) % b.size()])];
        }
    }
    return d;
}

std::set<Edge> path_edges(const std::vector<int>& p) {
    std::set<Edge> out;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) out.insert(edge_key(p[i], p[i + 1]));
    return out;
}

std::set<Edge> cycle_edges(const std::vector<int>& b) {
    auto out = path_edges(b);
    out.insert(edge_key(b.back(), b.front()));
    return out;
}

std::set<Edge> boundary_edges(const CellData& d) {
    std::set<Edge> out;
    for (const auto& [e, c] : d.edge_mult)
        if (c == 1) out.insert(e);
    return out;
}

bool geodesic_path(const RoundTree& t, const CoxeterGroup& W, const std::vector<int>& p) {
    if (p.empty()) return false;
    if (t.vertices[p.back()].length() + 1 != p.size()) return false;
    std::set<Word> walls;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        const auto& a = t.vertices[p[i]];
        const auto& b = t.vertices[p[i + 1]];
        int s = 0;
        for (int c = 1; c <= W.rank() && !s; ++c)
            if (W.multiply(a, c) == b) s = c;
        if (!s || !walls.insert(W.reflection(a, s).nf).second) return false;
    }
    return true;
}

std::set<int> as_set(const std::vector<int>& v) { return {v.begin(), v.end()}; }

template <class Set>
std::vector<int> intersect(const Set& a, const Set& b) {
    std::vector<int> out;
    for (int x : a)
        if (b.count(x)) out.push_back(x);
    return out;
}

// Rooted tree test for the union of L (or R) paths over stages 0..n.
void tree_check(const RoundTree& t, int n, bool left, CheckResult& r) {
    std::set<Edge> edges;
    std::set<int> verts;
    for (int k = 0; k <= n; ++k)
        for (const auto& br : t.stages[k].branches) {
            const auto& p = left ? br.L : br.R;
            verts.insert(p.begin(), p.end());
            const auto pe = path_edges(p);
            edges.insert(pe.begin(), pe.end());
        }
    const char* side = left ? "left" : "right";
    if (edges.size() + 1 != verts.size()) {
        r.fail(std::string(side) + " tree at stage " + std::to_string(n) + " is not a tree");
        return;
    }
    std::map<int, int> deg;
    for (Edge e : edges) ++deg[edge_lo(e)], ++deg[edge_hi(e)];
    const int root = t.vertex_id.at(Word{});
    std::size_t branch = 0, leaves = 0;
    for (const auto& [v, d] : deg) {
        if (v == root) {
            if (d != 1) r.fail(std::string(side) + " tree root has degree " + std::to_string(d));
        } else if (d == 1) {
            ++leaves;
        } else if (d == t.V + 1) {
            ++branch;
        } else if (d != 2) {
            r.fail(std::string(side) + " tree vertex " + t.vertices[v].str() + " has degree " + std::to_string(d));
        }
    }
    std::size_t want_branch = 0, pw = 1;
    for (int k = 0; k < n; ++k) want_branch += pw, pw *= t.V;
    if (t.V == 1) want_branch = 0;
    if (branch != want_branch || leaves != pw)
        r.fail(std::string(side) + " tree at stage " + std::to_string(n) + " has " + std::to_string(branch) +
               " branch points and " + std::to_string(leaves) + " leaves");
}

void audit_ih1(const RoundTree& t, const CoxeterGroup& W, int n, CheckResult& r) {
    const auto& st = t.stages[n];
    std::size_t expect = 1;
    for (int k = 0; k < n; ++k) expect *= t.V;
    if (st.branches.size() != expect) r.fail("stage " + std::to_string(n) + " has " + std::to_string(st.branches.size()) + " addresses");
    std::set<std::vector<int>> addrs;
    std::set<int> union_polys;
    const std::size_t want_len = t.L0_length() + 2 * n;
    for (const auto& br : st.branches) {
        const std::string where = "A" + address_str(br.address);
        if (!addrs.insert(br.address).second) r.fail("duplicate address " + where);
        union_polys.insert(br.polygons.begin(), br.polygons.end());
        if (br.L.size() != want_len + 1 || br.R.size() != want_len + 1)
            r.fail(where + ": |L| or |R| differs from " + std::to_string(want_len));
        if (!geodesic_path(t, W, br.L)) r.fail(where + ": L is not a geodesic from x0");
        if (!geodesic_path(t, W, br.R)) r.fail(where + ": R is not a geodesic from x0");
        for (const auto* side : {&br.L, &br.R}) {
            const auto pe = path_edges(*side);
            std::size_t touching = 0;
            for (int pid : br.polygons) {
                const auto& b = t.polygons[pid].boundary;
                bool hit = false;
                for (std::size_t k = 0; k < b.size() && !hit; ++k) hit = pe.count(edge_key(b[k], b[(k + 1) % b.size()])) > 0;
                touching += hit;
            }
            if (touching != static_cast<std::size_t>(2 + n))
                r.fail(where + ": " + (side == &br.L ? "L" : "R") + " meets " + std::to_string(touching) + " polygons");
        }
        const auto disk = disk_check(t, br.polygons);
        if (!disk.pass) r.fail(where + " is not a disk: " + disk.witness);
        auto want = path_edges(br.L);
        for (const auto& p : {br.R, br.E}) {
            const auto pe = path_edges(p);
            want.insert(pe.begin(), pe.end());
        }
        if (boundary_edges(cells(t, br.polygons)) != want) r.fail(where + ": boundary is not L u E u R");
        const auto Ls = as_set(br.L), Rs = as_set(br.R), Es = as_set(br.E);
        if (intersect(Ls, Rs) != std::vector<int>{br.L.front()} || intersect(Ls, Es) != std::vector<int>{br.L.back()} ||
            intersect(Rs, Es) != std::vector<int>{br.R.back()})
            r.fail(where + ": L, E, R do not meet in single endpoints");
        if (br.E.front() != br.L.back() || br.E.back() != br.R.back()) r.fail(where + ": E does not run from L to R");
    }
    std::set<int> all;
    for (int p : stage_polygons(t, n)) all.insert(p);
    if (union_polys != all) r.fail("A_" + std::to_string(n) + " is not the union of its branches");
    tree_check(t, n, true, r);
    tree_check(t, n, false, r);
}

// IH2 for the strips glued at stage k < n, read from stage k+1.
void audit_ih2(const RoundTree& t, int k, StageAudit& sa) {
    CheckResult& r = sa.ih2_structure;
    const int H = 2 * t.graph.max_label() - 1;
    const auto& parents = t.stages[k].branches;
    const auto& children = t.stages[k + 1].branches;
    std::unordered_map<int, std::size_t> owner;  // strip vertex -> parent index
    for (std::size_t pi = 0; pi < parents.size(); ++pi) {
        const auto& P = parents[pi];
        const std::string where = "E" + address_str(P.address);
        const auto Es = as_set(P.E);
        const auto Eedges = path_edges(P.E);
        const auto parent_cells = cells(t, P.polygons);
        std::vector<const RTBranch*> kids;
        for (const auto& c : children)
            if (std::equal(P.address.begin(), P.address.end(), c.address.begin()) && c.address.size() == P.address.size() + 1)
                kids.push_back(&c);
        if (static_cast<int>(kids.size()) != t.V) r.fail(where + " carries " + std::to_string(kids.size()) + " strips");
        std::vector<CellData> strip_cells;
        for (const auto* c : kids) {
            const std::string sw = "strip " + std::to_string(c->address.back()) + " on " + where;
            const auto disk = disk_check(t, c->strip);
            if (!disk.pass) r.fail(sw + " is not a disk: " + disk.witness);
            auto sc = cells(t, c->strip);
            if (intersect(sc.verts, parent_cells.verts) != std::vector<int>(Es.begin(), Es.end()))
                r.fail(sw + " meets A" + address_str(P.address) + " outside E");
            for (const auto& [e, _] : sc.edge_mult)
                if (parent_cells.edge_mult.count(e) && !Eedges.count(e)) r.fail(sw + " shares a non-E edge with its base");
            for (int v : sc.verts) {
                if (Es.count(v)) continue;
                auto [it, inserted] = owner.try_emplace(v, pi);
                if (!inserted && it->second != pi)
                    r.fail(sw + " meets a strip at another address in " + t.vertices[v].str());
            }
            for (int pid : c->strip) {
                const auto hit = intersect(as_set(t.polygons[pid].boundary), Es);
                bool ok = hit.size() == 1;
                if (hit.size() == 2) ok = Eedges.count(edge_key(hit[0], hit[1])) > 0;
                if (!ok) r.fail(describe_polygon(t, pid) + " meets " + where + " in " + std::to_string(hit.size()) + " vertices");
            }
            if (!intersect(as_set(c->E), Es).empty()) r.fail("E" + address_str(c->address) + " meets " + where);
            strip_cells.push_back(std::move(sc));
        }
        for (std::size_t a = 0; a < strip_cells.size(); ++a)
            for (std::size_t b = a + 1; b < strip_cells.size(); ++b)
                if (intersect(strip_cells[a].verts, strip_cells[b].verts) != std::vector<int>(Es.begin(), Es.end()))
                    r.fail("strips " + std::to_string(a + 1) + " and " + std::to_string(b + 1) + " on " + where +
                           " meet outside E");
        // Polygons of the base incident to E meet <= H polygons of each strip.
        for (int pid : P.polygons) {
            const auto pv = as_set(t.polygons[pid].boundary);
            if (intersect(pv, Es).empty()) continue;
            const auto pe = cycle_edges(t.polygons[pid].boundary);
            std::size_t total = 0;
            for (const auto* c : kids) {
                std::size_t cnt = 0, ecnt = 0;
                for (int q : c->strip) {
                    const auto& qb = t.polygons[q].boundary;
                    cnt += !intersect(pv, as_set(qb)).empty();
                    const auto qe = cycle_edges(qb);
                    ecnt += std::any_of(qe.begin(), qe.end(), [&](Edge e) { return pe.count(e) > 0; });
                }
                sa.max_meet_per_strip = std::max(sa.max_meet_per_strip, cnt);
                sa.max_edge_meet_per_strip = std::max(sa.max_edge_meet_per_strip, ecnt);
                if (cnt > static_cast<std::size_t>(H))
                    sa.ih2_branching.fail(describe_polygon(t, pid) + " meets " + std::to_string(cnt) + " > H polygons of one strip");
                total += cnt;
            }
            sa.max_meet_total = std::max(sa.max_meet_total, total);
            if (total > static_cast<std::size_t>(t.V * H))
                sa.ih2_branching.fail(describe_polygon(t, pid) + " meets " + std::to_string(total) + " > VH new polygons");
        }
    }
}

void audit_ih4(const RoundTree& t, int n, CheckResult& r) {
    for (std::size_t p = 0; p < t.polygons.size(); ++p) {
        const auto& P = t.polygons[p];
        if (P.stage == 0 || P.stage > n) continue;
        const auto& tri = t.forbidden(P.stage - 1);
        const bool in_i = std::count(tri.begin(), tri.end(), P.key.i) > 0;
        const bool in_j = std::count(tri.begin(), tri.end(), P.key.j) > 0;
        if (in_i && in_j)
            r.fail(describe_polygon(t, static_cast<int>(p)) + " carries a pair of the forbidden triple {" +
                   std::to_string(tri[0]) + "," + std::to_string(tri[1]) + "," + std::to_string(tri[2]) + "}");
    }
}

}  // namespace

std::string describe_polygon(const RoundTree& t, int p) {
    const auto& P = t.polygons[p];
    std::ostringstream s;
    s << "polygon #" << p << " " << P.key.str() << " (stage " << P.stage;
    if (P.stage > 0) s << ", strip " << P.strip << " on E" << address_str(P.parent_address) << (P.corner ? ", corner" : "");
    s << ")";
    return s.str();
}

RoundTree build_round_tree(const DefiningGraph& g, int V, int n_max) {
    const int m = g.m();
    if (V < 2) throw DomainError("build_round_tree: V must be >= 2");
    if (m < 3 * V + 5) throw DomainError("build_round_tree: need m >= 3V + 5 (m = " + std::to_string(m) + ", V = " + std::to_string(V) + ")");
    if (m > 63) throw InputError("build_round_tree: m > 63 unsupported");
    if (n_max < 0) throw InputError("build_round_tree: n_max must be >= 0");
    for (int i = 1; i <= m; ++i)
        for (int j = i + 1; j <= m; ++j)
            if (g.label(i, j) < 3) throw InputError("build_round_tree: labels must be >= 3");

    RoundTree t;
    t.graph = g;
    t.V = V;
    for (int p = 1; p <= m; ++p)
        for (int q = p + 1; q <= m; ++q)
            for (int r = q + 1; r <= m; ++r) t.triples.push_back({p, q, r});
    const CoxeterGroup W(g);
    build_stage0(t, W);
    for (int n = 0; n < n_max; ++n) build_next_stage(t, W);
    return t;
}

CheckResult disk_check(const RoundTree& t, const std::vector<int>& polys) {
    CheckResult r;
    if (polys.empty()) {
        r.fail("empty complex");
        return r;
    }
    const auto d = cells(t, polys);
    for (const auto& [e, c] : d.edge_mult)
        if (c > 2) {
            r.fail("edge " + t.vertices[edge_lo(e)].str() + " - " + t.vertices[edge_hi(e)].str() + " lies in " +
                   std::to_string(c) + " polygons");
            return r;
        }
    const long chi = static_cast<long>(d.verts.size()) - static_cast<long>(d.edge_mult.size()) + static_cast<long>(polys.size());
    if (chi != 1) r.fail("Euler characteristic " + std::to_string(chi));

    // Vertex links: nodes are edges at v, one link edge per polygon corner.
    std::unordered_map<int, std::vector<std::pair<Edge, Edge>>> corners;
    for (int pid : polys) {
        const auto& b = t.polygons[pid].boundary;
        const std::size_t len = b.size();
        for (std::size_t k = 0; k < len; ++k)
            corners[b[k]].push_back({edge_key(b[k], b[(k + len - 1) % len]), edge_key(b[k], b[(k + 1) % len])});
    }
    for (const auto& [v, cs] : corners) {
        std::map<Edge, std::vector<Edge>> adj;
        std::set<std::pair<Edge, Edge>> seen;
        for (auto [a, b] : cs) {
            if (!seen.insert(std::minmax(a, b)).second) r.fail("two polygons share both edges at " + t.vertices[v].str());
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        std::size_t ends = 0;
        for (const auto& [e, nb] : adj) {
            if (nb.size() > 2) r.fail("link of " + t.vertices[v].str() + " branches");
            ends += nb.size() == 1;
        }
        // Connected path or cycle.
        std::set<Edge> vis;
        std::vector<Edge> st{adj.begin()->first};
        while (!st.empty()) {
            const Edge e = st.back();
            st.pop_back();
            if (!vis.insert(e).second) continue;
            for (Edge f : adj[e]) st.push_back(f);
        }
        if (vis.size() != adj.size() || (ends != 0 && ends != 2))
            r.fail("link of " + t.vertices[v].str() + " is not a path or a cycle");
        if (!r.pass) return r;
    }

    // Boundary is one simple cycle.
    const auto be = boundary_edges(d);
    std::map<int, std::vector<int>> badj;
    for (Edge e : be) badj[edge_lo(e)].push_back(edge_hi(e)), badj[edge_hi(e)].push_back(edge_lo(e));
    for (const auto& [v, nb] : badj)
        if (nb.size() != 2) {
            r.fail("boundary is not a simple cycle at " + t.vertices[v].str());
            return r;
        }
    if (!badj.empty()) {
        std::set<int> vis;
        std::vector<int> st{badj.begin()->first};
        while (!st.empty()) {
            const int v = st.back();
            st.pop_back();
            if (!vis.insert(v).second) continue;
            for (int w : badj[v]) st.push_back(w);
        }
        if (vis.size() != badj.size()) r.fail("boundary has several components");
    } else {
        r.fail("no boundary");
    }

    // Connectedness of the 1-skeleton.
    std::map<int, std::vector<int>> adj;
    for (const auto& [e, c] : d.edge_mult) adj[edge_lo(e)].push_back(edge_hi(e)), adj[edge_hi(e)].push_back(edge_lo(e));
    std::set<int> vis;
    std::vector<int> st{*d.verts.begin()};
    while (!st.empty()) {
        const int v = st.back();
        st.pop_back();
        if (!vis.insert(v).second) continue;
        for (int w : adj[v]) st.push_back(w);
    }
    if (vis.size() != d.verts.size()) r.fail("not connected");
    return r;
}

CheckResult audit_convexity(const RoundTree& t, int n) { return convexity_impl(t, n, true); }
CheckResult audit_convexity_serial(const RoundTree& t, int n) { return convexity_impl(t, n, false); }

std::vector<StageAudit> audit_inductive_hypotheses(const RoundTree& t, bool parallel) {
    const CoxeterGroup W(t.graph);
    std::vector<StageAudit> out;
    for (const auto& st : t.stages) {
        StageAudit a;
        a.n = st.n;
        audit_ih1(t, W, st.n, a.ih1);
        for (int k = 0; k < st.n; ++k) audit_ih2(t, k, a);
        for (const auto* part : {&a.ih2_structure, &a.ih2_branching})
            if (!part->pass) a.ih2.fail(part->witness);
        a.ih3 = parallel ? audit_convexity(t, st.n) : audit_convexity_serial(t, st.n);
        audit_ih4(t, st.n, a.ih4);
        out.push_back(std::move(a));
    }
    return out;
}

SystolicCertificate check_strictly_systolic(const RoundTree& t, double corner_scale) {
    SystolicCertificate c;
    const int n = t.stages.back().n;
    std::unordered_set<int> tree;
    for (const auto& st : t.stages)
        for (const auto& br : st.branches) {
            tree.insert(br.L.begin(), br.L.end());
            tree.insert(br.R.begin(), br.R.end());
        }
    struct Tri {
        std::array<int, 3> v;
        std::array<double, 3> angle;
    };
    std::vector<Tri> tris;
    for (int pid : stage_polygons(t, n)) {
        const auto& P = t.polygons[pid];
        if (std::any_of(P.boundary.begin(), P.boundary.end(), [&](int v) { return tree.count(v) > 0; })) continue;
        if (P.designated < 0) continue;
        ++c.polygons;
        const int len = static_cast<int>(P.boundary.size());
        const double unit = std::numbers::pi / len;
        auto at = [&](int i) { return P.boundary[(P.designated + i) % len]; };
        for (int i = 1; i + 1 < len; ++i)
            tris.push_back({{at(0), at(i), at(i + 1)}, {unit * corner_scale, (len - i - 1) * unit, i * unit}});
    }
    c.triangles = tris.size();
    c.angle_sums_ok = true;
    for (const auto& tr : tris) {
        const double s = tr.angle[0] + tr.angle[1] + tr.angle[2];
        c.max_angle_sum = std::max(c.max_angle_sum, s);
        if (!(s < std::numbers::pi - 1e-12) && c.angle_sums_ok) {
            c.angle_sums_ok = false;
            c.witness = "triangle at " + t.vertices[tr.v[0]].str() + " has angle sum " + std::to_string(s);
        }
    }

    // Links: for each vertex v, a weighted graph on its neighbours.
    std::unordered_map<int, std::map<std::pair<int, int>, double>> links;
    std::set<std::pair<int, int>> skeleton;
    std::set<std::array<int, 3>> faces;
    for (const auto& tr : tris) {
        for (int k = 0; k < 3; ++k) {
            const int v = tr.v[k], a = tr.v[(k + 1) % 3], b = tr.v[(k + 2) % 3];
            links[v][std::minmax(a, b)] += tr.angle[k];
            skeleton.insert(std::minmax(v, a));
        }
        auto f = tr.v;
        std::sort(f.begin(), f.end());
        faces.insert(f);
    }
    c.cycles_ok = true;
    c.three_flag = true;
    c.min_cycle_angle = std::numeric_limits<double>::infinity();
    for (const auto& [v, L] : links) {
        std::map<int, std::vector<std::pair<int, double>>> adj;
        for (const auto& [e, w] : L) adj[e.first].push_back({e.second, w}), adj[e.second].push_back({e.first, w});
        auto adjacent = [&](int a, int b) { return L.count(std::minmax(a, b)) > 0; };
        for (const auto& [e, w] : L)
            for (const auto& [x, wx] : adj[e.first])
                if (x != e.second && adjacent(x, e.second) && c.three_flag) {
                    c.three_flag = false;
                    if (c.witness.empty()) c.witness = "link of " + t.vertices[v].str() + " contains a 3-cycle";
                }
        // Simple cycles, each once: smallest node first, second node below the last.
        std::vector<int> path;
        std::set<int> on;
        std::function<void(int, double)> dfs = [&](int a, double len) {
            for (const auto& [b, w] : adj[a]) {
                if (b == path[0] && path.size() > 3 && path[1] < path.back()) {
                    bool two_full = true;
                    const std::size_t L = path.size();
                    for (std::size_t i = 0; i < L && two_full; ++i) two_full = !adjacent(path[i], path[(i + 2) % L]);
                    if (two_full) {
                        ++c.cycles;
                        c.min_cycle_angle = std::min(c.min_cycle_angle, len + w);
                        if (len + w < 2 * std::numbers::pi - 1e-12 && c.cycles_ok) {
                            c.cycles_ok = false;
                            if (c.witness.empty()) c.witness = "short 2-full cycle in the link of " + t.vertices[v].str();
                        }
                    }
                }
                if (b <= path[0] || on.count(b)) continue;
                path.push_back(b);
                on.insert(b);
                dfs(b, len + w);
                on.erase(b);
                path.pop_back();
            }
        };
        for (const auto& [s, _] : adj) {
            path = {s};
            on = {s};
            dfs(s, 0);
        }
    }
    if (c.cycles == 0) c.min_cycle_angle = 0;
    c.flag = true;
    for (const auto& [a, b] : skeleton)
        for (const auto& [x, y] : skeleton)
            if (x == b) {
                const int z = y;
                if (skeleton.count(std::minmax(a, z))) {
                    std::array<int, 3> f{a, b, z};
                    std::sort(f.begin(), f.end());
                    if (!faces.count(f)) c.flag = false;
                }
            }
    c.pass = c.angle_sums_ok && c.cycles_ok && c.three_flag;
    return c;
}

std::vector<FlatIntersection> flat_intersection_diameters(const RoundTree& t) {
    std::vector<FlatIntersection> out;
    const CoxeterGroup W(t.graph);
    const int m = t.graph.m();
    std::vector<std::array<int, 3>> flats;
    for (int p = 1; p <= m; ++p)
        for (int q = p + 1; q <= m; ++q)
            for (int r = q + 1; r <= m; ++r)
                if (t.graph.label(p, q) == 3 && t.graph.label(q, r) == 3 && t.graph.label(p, r) == 3) flats.push_back({p, q, r});
    for (const auto& st : t.stages) {
        FlatIntersection fi;
        fi.n = st.n;
        std::map<std::pair<Word, std::array<int, 3>>, std::vector<int>> groups;
        for (int pid : stage_polygons(t, st.n)) {
            const auto& P = t.polygons[pid];
            for (const auto& f : flats)
                if (std::count(f.begin(), f.end(), P.key.i) && std::count(f.begin(), f.end(), P.key.j))
                    groups[{W.min_coset_rep(P.key.coset, f).nf, f}].push_back(pid);
        }
        fi.flats_met = groups.size();
        for (const auto& [key, polys] : groups) {
            std::map<int, std::set<int>> adj;
            for (int pid : polys) {
                const auto& b = t.polygons[pid].boundary;
                for (std::size_t k = 0; k < b.size(); ++k) {
                    const int x = b[k], y = b[(k + 1) % b.size()];
                    adj[x].insert(y);
                    adj[y].insert(x);
                }
            }
            for (const auto& [s, _] : adj) {
                std::map<int, int> dist{{s, 0}};
                std::queue<int> q;
                q.push(s);
                while (!q.empty()) {
                    const int a = q.front();
                    q.pop();
                    fi.max_diameter = std::max(fi.max_diameter, dist[a]);
                    for (int b : adj[a])
                        if (dist.try_emplace(b, dist[a] + 1).second) q.push(b);
                }
            }
        }
        out.push_back(fi);
    }
    return out;
}

Mutation mutate_relabel_forbidden(const RoundTree& t) {
    if (t.stages.size() < 2) throw InputError("mutate_relabel_forbidden: needs a built strip");
    Mutation mu{t, -1, {}};
    const auto& br = t.stages.back().branches.front();
    const int pid = br.strip[br.strip.size() / 2];
    auto& P = mu.tree.polygons[pid];
    const auto& tri = t.forbidden(P.stage - 1);
    P.key.i = tri[0];
    P.key.j = tri[1];
    mu.polygon = pid;
    mu.description = "relabelled " + describe_polygon(t, pid) + " into the forbidden triple";
    return mu;
}

Mutation mutate_delete_polygon(const RoundTree& t) {
    if (t.stages.size() < 2) throw InputError("mutate_delete_polygon: needs a built strip");
    Mutation mu{t, -1, {}};
    const auto& br = t.stages[1].branches.front();
    const int pid = br.strip[br.strip.size() / 2];
    mu.polygon = pid;
    mu.description = "deleted " + describe_polygon(t, pid);
    for (auto& st : mu.tree.stages)
        for (auto& b : st.branches) {
            std::erase(b.polygons, pid);
            std::erase(b.strip, pid);
        }
    // Park it beyond every stage so stage-wide audits skip it too.
    mu.tree.polygons[pid].stage = std::numeric_limits<int>::max();
    return mu;
}

}  // namespace coxdim
