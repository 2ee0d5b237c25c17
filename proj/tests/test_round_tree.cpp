#include "test_main.hpp"

#include "coxdim/bounds.hpp"
#include "coxdim/errors.hpp"
#include "coxdim/round_tree.hpp"

#include <cmath>
#include <numbers>

using namespace coxdim;

namespace {

const RoundTree& tree3() {
    static const RoundTree t = build_round_tree(DefiningGraph::uniform(11, 3), 2, 3);
    return t;
}

}  // namespace

TEST_CASE("initial complex") {
    const auto t = build_round_tree(DefiningGraph::uniform(11, 3), 2, 0);
    REQUIRE(t.stages.size() == 1);
    CHECK(t.polygons.size() == 3);
    const auto& br = t.stages[0].branches.at(0);
    CHECK(br.L.size() == 5);
    CHECK(br.R.size() == 5);
    CHECK(br.internal.size() == 1);
    CHECK(t.triples.size() == 165);
    CHECK(t.forbidden(0) == std::array{1, 2, 3});
    const auto a = audit_inductive_hypotheses(t);
    CHECK(a.at(0).pass());
}

TEST_CASE("stage counts match the replay oracle") {
    const auto& t = tree3();
    REQUIRE(t.stages.size() == 4);
    std::vector<std::size_t> polys, branches;
    for (const auto& st : t.stages) {
        std::size_t c = 0;
        for (const auto& p : t.polygons) c += p.stage <= st.n;
        polys.push_back(c);
        branches.push_back(st.branches.size());
    }
    CHECK(branches == std::vector<std::size_t>{1, 2, 4, 8});
    INFO("polygons per stage: " << polys[0] << " " << polys[1] << " " << polys[2] << " " << polys[3]);
    // tests/oracles/round_tree_replay.py
    CHECK(polys == std::vector<std::size_t>{3, 11, 51, 283});
    std::vector<std::size_t> e3;
    for (const auto& br : t.stages[3].branches) e3.push_back(br.E.size() - 1);
    CHECK(e3 == std::vector<std::size_t>{82, 90, 82, 90, 82, 90, 82, 90});
    CHECK(t.stages[1].branches[0].E.size() - 1 == 10);
    CHECK(t.stages[2].branches[3].E.size() - 1 == 28);
}

TEST_CASE("inductive hypotheses through stage 3") {
    const auto& t = tree3();
    const auto audits = audit_inductive_hypotheses(t);
    for (const auto& a : audits) {
        INFO("stage " << a.n << ": " << a.ih1.witness << " | " << a.ih2.witness << " | " << a.ih3.witness << " | " << a.ih4.witness);
        CHECK(a.ih1.pass);
        CHECK(a.ih2_structure.pass);
        CHECK(a.ih3.pass);
        CHECK(a.ih4.pass);
        CHECK(a.max_edge_meet_per_strip <= 5);
        CHECK(a.pass() == (a.n <= 2));
    }
    // Through stage 2 every polygon on E meets at most H = 5 polygons of a strip.
    CHECK(audits[2].max_meet_per_strip == 5);
    CHECK(audits[2].max_meet_total == 10);
    // Gluing the stage-2 strips, a corner {x,y} polygon sits inside the outer path of a
    // previous strip polygon, next to the two end neighbours: 3 + 2 + 1 = 2M meets.
    CHECK(audits[3].max_meet_per_strip == 6);
    CHECK(audits[3].max_meet_total == 11);
    CHECK(audits[3].max_edge_meet_per_strip == 3);
    CHECK_FALSE(audits[3].ih2_branching.pass);
    CHECK(audits[3].ih2_branching.witness.find("6 > H") != std::string::npos);
}

TEST_CASE("parallel convexity matches serial") {
    const auto& t = tree3();
    for (int n = 0; n <= 3; ++n) {
        const auto a = audit_convexity(t, n);
        const auto b = audit_convexity_serial(t, n);
        CHECK(a.pass == b.pass);
        CHECK(a.witness == b.witness);
    }
}

TEST_CASE("strictly systolic certificate") {
    const auto& t = tree3();
    const auto c = check_strictly_systolic(t);
    INFO(c.witness);
    CHECK(c.polygons > 0);
    CHECK(c.angle_sums_ok);
    CHECK(c.cycles_ok);
    CHECK(c.three_flag);
    CHECK(c.pass);
    // Hexagon fan from u: the u corner of each triangle is (3/4) pi/6.
    CHECK(c.max_angle_sum == doctest::Approx(std::numbers::pi - std::numbers::pi / 24));
    if (c.cycles > 0) CHECK(c.min_cycle_angle >= 2 * std::numbers::pi - 1e-12);

    const auto flat = check_strictly_systolic(t, 1.0);
    CHECK_FALSE(flat.angle_sums_ok);
    CHECK_FALSE(flat.pass);
    CHECK(flat.max_angle_sum == doctest::Approx(std::numbers::pi));
    CHECK_FALSE(flat.witness.empty());
}

TEST_CASE("mutations are caught with witnesses") {
    const auto& t = tree3();
    const auto relabel = mutate_relabel_forbidden(t);
    bool ih4 = true;
    std::string w;
    for (const auto& a : audit_inductive_hypotheses(relabel.tree))
        if (!a.ih4.pass) ih4 = false, w = a.ih4.witness;
    CHECK_FALSE(ih4);
    CHECK(w.find("#" + std::to_string(relabel.polygon) + " ") != std::string::npos);

    const auto del = mutate_delete_polygon(t);
    bool ih1 = true;
    for (const auto& a : audit_inductive_hypotheses(del.tree))
        if (!a.ih1.pass) ih1 = false, w = a.ih1.witness;
    CHECK_FALSE(ih1);
    CHECK_FALSE(w.empty());
}

TEST_CASE("disk check rejects a pair of polygons sharing a vertex only") {
    const auto& t = tree3();
    CHECK(disk_check(t, {0}).pass);
    CHECK(disk_check(t, {0, 1, 2}).pass);
    // Two strip polygons on different strips meet E but not each other along an edge.
    const auto& st = t.stages[1].branches;
    CHECK_FALSE(disk_check(t, {st[0].strip.front(), st[1].strip.back()}).pass);
}

TEST_CASE("flat intersections stay bounded") {
    const auto f = flat_intersection_diameters(tree3());
    REQUIRE(f.size() == 4);
    for (const auto& x : f) CHECK(x.max_diameter >= 0);
    for (std::size_t i = 1; i < f.size(); ++i) CHECK(f[i].max_diameter <= f.back().max_diameter);
}

TEST_CASE("preconditions") {
    CHECK_THROWS_AS(build_round_tree(DefiningGraph::uniform(10, 3), 2, 1), DomainError);
    CHECK_THROWS_AS(build_round_tree(DefiningGraph::uniform(11, 3), 1, 1), DomainError);
    CHECK_THROWS_AS(build_round_tree(DefiningGraph::uniform(11, 3), 2, -1), InputError);
    CHECK_NOTHROW(build_round_tree(DefiningGraph::uniform(14, 4), 3, 1));
    const auto lb = lower_bound(11, 3, 2);
    CHECK(lb.V == 2);
    CHECK(lb.H == 5);
}
