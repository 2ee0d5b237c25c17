#pragma once

#include "coxdim/census.hpp"
#include "coxdim/coxeter.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace coxdim {

struct RTPolygon {
    PolygonKey key;
    std::vector<int> boundary;     // vertex ids; boundary[k] -> boundary[k+1] has label first/second alternately
    int first = 0, second = 0;     // labels of the even and odd steps of the boundary walk
    int stage = 0;                 // 0 for A_0, k+1 for a strip glued to E at stage k
    std::vector<int> parent_address;
    int strip = 0;                 // 1..V, 0 for A_0
    bool corner = false;
    int designated = -1;           // boundary index of the internal vertex u
};

struct RTBranch {
    std::vector<int> address;       // a_n, empty at stage 0
    std::vector<int> polygons;      // all polygons of A_{a_n}
    std::vector<int> strip;         // polygons added in the last step
    std::vector<int> L, R, E;       // vertex paths; L, R start at x0
    std::vector<int> E_labels;      // E_labels[s] labels the edge E[s] - E[s+1]
    std::vector<int> internal;      // positions in E
    std::vector<int> partner;       // vertex ids in the previous E
};

struct RoundTreeStage {
    int n = 0;
    std::vector<RTBranch> branches;  // sorted by address
};

struct RoundTree {
    DefiningGraph graph;
    int V = 0;
    std::vector<std::array<int, 3>> triples;  // t_0 .. t_{R-1}, lexicographic
    std::vector<GroupElement> vertices;
    std::unordered_map<Word, int, WordHash> vertex_id;
    std::vector<RTPolygon> polygons;
    std::vector<RoundTreeStage> stages;

    const std::array<int, 3>& forbidden(int k) const { return triples[k % triples.size()]; }
    int L0_length() const { return graph.label(1, 2) + 1; }
};

// Requires V >= 2 and m >= 3V + 5.
RoundTree build_round_tree(const DefiningGraph& g, int V, int n_max);

struct CheckResult {
    bool pass = true;
    std::string witness;
    void fail(std::string w) {
        if (pass) witness = std::move(w);
        pass = false;
    }
};

struct StageAudit {
    int n = 0;
    CheckResult ih1, ih2, ih3, ih4;
    // ih2 is the conjunction of these: strip topology and disjointness, and the H / VH meeting bound.
    CheckResult ih2_structure, ih2_branching;
    // Largest number of new polygons meeting one polygon on E, per strip and over all strips;
    // edge_meet counts only new polygons sharing an edge with it.
    std::size_t max_meet_per_strip = 0, max_meet_total = 0, max_edge_meet_per_strip = 0;
    bool pass() const { return ih1.pass && ih2.pass && ih3.pass && ih4.pass; }
};

// Convexity of A_n^(1): BFS inside A_n from every vertex; every BFS-tree path must
// cross each wall at most once. Parallel over sources; the serial twin is the reference.
CheckResult audit_convexity(const RoundTree& t, int n);
CheckResult audit_convexity_serial(const RoundTree& t, int n);

// Disk test for a set of polygons: every edge in <= 2 polygons, vertex links are
// paths or cycles, boundary is one simple cycle, connected, Euler characteristic 1.
CheckResult disk_check(const RoundTree& t, const std::vector<int>& polys);

std::vector<StageAudit> audit_inductive_hypotheses(const RoundTree& t, bool parallel = true);

struct SystolicCertificate {
    std::size_t polygons = 0;        // polygons of A'
    std::size_t triangles = 0;
    double max_angle_sum = 0;
    bool angle_sums_ok = false;      // (a)
    std::size_t cycles = 0;          // 2-full link cycles of length > 3
    double min_cycle_angle = 0;
    bool cycles_ok = false;          // (b)
    bool three_flag = false;         // (c) no vertex link contains a 3-cycle
    bool flag = false;               // every 3-clique spans a triangle
    bool pass = false;
    std::string witness;
};

SystolicCertificate check_strictly_systolic(const RoundTree& t, double corner_scale = 0.75);

struct FlatIntersection {
    int n = 0;
    std::size_t flats_met = 0;
    int max_diameter = 0;
};
std::vector<FlatIntersection> flat_intersection_diameters(const RoundTree& t);

struct Mutation {
    RoundTree tree;
    int polygon = -1;
    std::string description;
};
// Relabel one strip polygon of the last built step into its forbidden triple.
Mutation mutate_relabel_forbidden(const RoundTree& t);
// Delete one strip polygon from stage 1 that later strips surround.
Mutation mutate_delete_polygon(const RoundTree& t);

std::string describe_polygon(const RoundTree& t, int p);

}  // namespace coxdim
