// Command-line front end: one subcommand per module, JSON by default, CSV as a flat projection.
#include "coxdim/bounds.hpp"
#include "coxdim/census.hpp"
#include "coxdim/davis.hpp"
#include "coxdim/errors.hpp"
#include "coxdim/hyperbolic.hpp"
#include "coxdim/round_tree.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace coxdim;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;

struct Common {
    std::string graph_file;
    int m = 0, M = 0;
    double y0 = kDefaultY0;
    std::string out;
    std::string format = "json";
    std::uint64_t seed = 0;
    int jobs = 0;
};

struct Result {
    Json doc;
    std::vector<std::vector<std::string>> csv;  // first row is the header
    bool pass = true;
};

std::string num(double x) {
    std::ostringstream s;
    s.precision(17);
    s << x;
    return s.str();
}

Json opt(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

DefiningGraph resolve_graph(const Common& c) {
    if (!c.graph_file.empty()) return DefiningGraph::load(c.graph_file);
    if (c.m <= 0 || c.M <= 0) throw InputError("give --graph FILE or both --m and --M");
    return DefiningGraph::uniform(c.m, c.M);
}

Json bound_json(const BoundReport& r) {
    return {{"m", r.m},
            {"M", r.M},
            {"y0", r.y0},
            {"constants_variant", to_string(r.variant)},
            {"S1", r.S1},
            {"A", r.A},
            {"B", r.B},
            {"C1", r.C1},
            {"C2", r.C2},
            {"F", r.F},
            {"D_y0", r.D_y0},
            {"lower", opt(r.lower)},
            {"V", r.V},
            {"H", r.H},
            {"hausdorff_upper", r.hausdorff_upper},
            {"cor_upper", r.cor_upper},
            {"bourdon_kleiner_upper", opt(r.bourdon_kleiner)}};
}

std::pair<int, int> parse_range(const std::string& s) {
    const auto dash = s.find('-');
    if (dash == std::string::npos) return {std::stoi(s), std::stoi(s)};
    return {std::stoi(s.substr(0, dash)), std::stoi(s.substr(dash + 1))};
}

Result run_bounds(const Common& c, const std::string& variant, const std::string& grid) {
    const auto v = parse_variant(variant);
    Result res;
    std::vector<BoundReport> rows;
    if (!grid.empty()) {
        const auto comma = grid.find(',');
        if (comma == std::string::npos) throw InputError("--grid expects MLO-MHI,BIGMLO-BIGMHI, e.g. 11-30,3-6");
        const auto [mlo, mhi] = parse_range(grid.substr(0, comma));
        const auto [Mlo, Mhi] = parse_range(grid.substr(comma + 1));
        rows = bound_grid(mlo, mhi, Mlo, Mhi, c.y0, v);
    } else {
        const auto g = resolve_graph(c);
        rows.push_back(compute_bounds(g.m(), g.max_label(), c.y0, v));
    }
    res.csv.push_back({"m", "M", "y0", "S1", "A", "B", "C1", "C2", "F", "D_y0", "lower", "hausdorff_upper", "cor_upper",
                       "bourdon_kleiner_upper"});
    Json arr = Json::array();
    for (const auto& r : rows) {
        arr.push_back(bound_json(r));
        res.csv.push_back({std::to_string(r.m), std::to_string(r.M), num(r.y0), num(r.S1), num(r.A), num(r.B), num(r.C1),
                           num(r.C2), num(r.F), num(r.D_y0), r.lower ? num(*r.lower) : "", num(r.hausdorff_upper),
                           num(r.cor_upper), r.bourdon_kleiner ? num(*r.bourdon_kleiner) : ""});
        for (const auto& ch : cor_chain_audit(r.m, r.M)) res.pass = res.pass && ch.pass;
    }
    res.doc["kind"] = "bounds";
    if (grid.empty())
        res.doc["report"] = arr[0];
    else
        res.doc["grid"] = arr;
    return res;
}

Json check_json(const CheckResult& r) { return {{"pass", r.pass}, {"witness", r.witness}}; }

Result run_round_tree(const Common& c, int V, int stages) {
    const auto g = resolve_graph(c);
    const auto t = build_round_tree(g, V, stages);
    const auto audits = audit_inductive_hypotheses(t);
    const auto sys = check_strictly_systolic(t);
    const auto flats = flat_intersection_diameters(t);
    const auto lb = lower_bound(g.m(), g.max_label(), V);
    Result res;
    res.doc["kind"] = "round-tree";
    res.doc["V"] = V;
    res.doc["n_max"] = stages;
    res.csv.push_back({"stage", "polygons", "ih1", "ih2", "ih3", "ih4", "max_meet_per_strip", "max_meet_total", "flat_diameter"});
    Json st = Json::array();
    bool convex = true;
    for (std::size_t i = 0; i < audits.size(); ++i) {
        const auto& a = audits[i];
        std::size_t polys = 0;
        for (const auto& p : t.polygons) polys += p.stage <= a.n;
        st.push_back({{"stage", a.n},
                      {"polygons", polys},
                      {"addresses", t.stages[i].branches.size()},
                      {"ih1", check_json(a.ih1)},
                      {"ih2", check_json(a.ih2)},
                      {"ih3", check_json(a.ih3)},
                      {"ih4", check_json(a.ih4)},
                      {"max_meet_per_strip", a.max_meet_per_strip},
                      {"max_meet_total", a.max_meet_total},
                      {"max_edge_meet_per_strip", a.max_edge_meet_per_strip},
                      {"flats_met", flats[i].flats_met},
                      {"flat_diameter", flats[i].max_diameter}});
        res.csv.push_back({std::to_string(a.n), std::to_string(polys), a.ih1.pass ? "pass" : "fail", a.ih2.pass ? "pass" : "fail",
                           a.ih3.pass ? "pass" : "fail", a.ih4.pass ? "pass" : "fail", std::to_string(a.max_meet_per_strip),
                           std::to_string(a.max_meet_total), std::to_string(flats[i].max_diameter)});
        convex = convex && a.ih3.pass;
        res.pass = res.pass && a.pass();
    }
    res.doc["stages"] = st;
    res.doc["convex"] = convex;
    res.doc["systolic"] = sys.pass;
    res.doc["systolic_detail"] = {{"polygons", sys.polygons},       {"triangles", sys.triangles},
                                  {"max_angle_sum", sys.max_angle_sum}, {"cycles", sys.cycles},
                                  {"min_cycle_angle", sys.min_cycle_angle}, {"three_flag", sys.three_flag},
                                  {"flag", sys.flag},                   {"witness", sys.witness}};
    res.doc["lower_bound"] = lb.value;
    res.pass = res.pass && sys.pass;
    return res;
}

Result run_links(const Common& c, const std::vector<std::string>& triples) {
    Result res;
    res.doc["kind"] = "links";
    res.doc["y0"] = c.y0;
    res.csv.push_back({"p", "q", "r", "cap_kind", "caps", "copies", "theta", "sigma", "loop", "pass"});
    std::vector<std::array<int, 3>> list;
    for (const auto& s : triples) {
        std::array<int, 3> t{};
        char a, b;
        std::istringstream in(s);
        if (!(in >> t[0] >> a >> t[1] >> b >> t[2]) || a != ',' || b != ',') throw InputError("bad triple '" + s + "', use p,q,r");
        std::sort(t.begin(), t.end());
        list.push_back(t);
    }
    if (list.empty()) list = {{3, 3, 4}, {3, 4, 4}, {4, 4, 4}};
    Json arr = Json::array();
    for (const auto& [p, q, r] : list) {
        Json checks = Json::array();
        for (const auto& k : cat1_link_test(p, q, r, c.y0)) {
            checks.push_back({{"cap_kind", static_cast<int>(k.kind)}, {"caps", k.caps}, {"copies", k.copies}, {"theta", k.theta},
                              {"sigma", k.sigma}, {"loop", k.loop}, {"pass", k.pass}});
            res.csv.push_back({std::to_string(p), std::to_string(q), std::to_string(r), std::to_string(static_cast<int>(k.kind)),
                               std::to_string(k.caps), std::to_string(k.copies), num(k.theta), num(k.sigma), num(k.loop),
                               k.pass ? "pass" : "fail"});
            res.pass = res.pass && k.pass;
        }
        arr.push_back({{"triple", {p, q, r}}, {"checks", checks}});
    }
    res.doc["triples"] = arr;
    return res;
}

Result run_census(const Common& c, int k) {
    const CoxeterGroup W(resolve_graph(c));
    const PolygonKey base{GroupElement{}, 1, 2};
    const auto cen = polygon_census(W, base, k);
    const auto audit = audit_shells(W, cen);
    const auto s1 = census_S1(W, base);
    const auto s2 = census_S2(W, base);
    Result res;
    res.doc["kind"] = "census";
    res.doc["base"] = base.str();
    Json shells = Json::array();
    res.csv.push_back({"k", "shell_size", "ball_size"});
    for (int i = 0; i <= k; ++i) {
        shells.push_back(cen.count(i));
        res.csv.push_back({std::to_string(i), std::to_string(cen.count(i)), std::to_string(cen.ball(i))});
    }
    res.doc["shell_sizes"] = shells;
    res.doc["shell_audit"] = {{"pass", audit.pass}, {"witness", audit.witness}};
    res.doc["S1"] = {{"count", s1.count},
                     {"edge_neighbors", s1.edge_neighbors},
                     {"vertex_neighbors", s1.vertex_neighbors},
                     {"closed_form", s1.closed_form},
                     {"bound", s1.bound}};
    res.doc["S2"] = {{"count", s2.count}, {"bound", s2.bound}};
    res.pass = audit.pass && static_cast<double>(s1.count) <= s1.bound && static_cast<double>(s2.count) <= s2.bound;
    return res;
}

Result run_y0() {
    const auto f = solve_y0();
    Result res;
    res.doc["kind"] = "y0";
    res.csv.push_back({"case", "closed_form", "bisection", "stated"});
    Json arr = Json::array();
    for (const auto& cs : f.cases) {
        arr.push_back({{"case", static_cast<int>(cs.kind)},
                       {"closed_form", cs.closed_form},
                       {"bisection", cs.bisection},
                       {"stated", cs.source_value},
                       {"agrees_with_stated", std::abs(cs.closed_form - cs.source_value) < 1e-3}});
        res.csv.push_back({std::to_string(static_cast<int>(cs.kind)), num(cs.closed_form), num(cs.bisection), num(cs.source_value)});
        res.pass = res.pass && std::abs(cs.closed_form - cs.bisection) < 1e-6;
    }
    res.doc["cases"] = arr;
    res.doc["minimum"] = f.minimum;
    return res;
}

Result run_ball(const Common& c, int radius) {
    const CoxeterGroup W(resolve_graph(c));
    const auto ball = build_ball(W, radius);
    Result res;
    res.doc = Json::parse(export_ball_json(ball));
    res.doc["kind"] = "ball";
    res.csv.push_back({"length", "sphere_size"});
    std::vector<std::size_t> spheres(radius + 1, 0);
    for (const auto& v : ball.vertices) ++spheres[v.length()];
    for (int r = 0; r <= radius; ++r) res.csv.push_back({std::to_string(r), std::to_string(spheres[r])});
    return res;
}

void emit(const Result& r, const Common& c, const std::string& subcommand) {
    std::string text;
    if (c.format == "csv") {
        for (const auto& row : r.csv) {
            for (std::size_t i = 0; i < row.size(); ++i) text += (i ? "," : "") + row[i];
            text += "\n";
        }
    } else {
        Json doc;
        doc["schema_version"] = kSchemaVersion;
        doc["subcommand"] = subcommand;
        doc["seed"] = c.seed;
        doc["pass"] = r.pass;
        for (auto it = r.doc.begin(); it != r.doc.end(); ++it)
            if (it.key() != "schema_version") doc[it.key()] = it.value();
        text = doc.dump(2) + "\n";
    }
    if (c.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(c.out, std::ios::binary);
        if (!f) throw InputError("cannot write " + c.out);
        f << text;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coxeter group dimension toolkit"};
    app.require_subcommand(1);
    Common c;

    auto add_common = [&](CLI::App* sub, bool graph) {
        if (graph) {
            auto* gf = sub->add_option("--graph", c.graph_file, "defining graph file (m=<int>, then uniform=<M> or i j m_ij lines)");
            auto* mo = sub->add_option("--m", c.m, "number of generators of a uniform graph");
            auto* Mo = sub->add_option("--M", c.M, "common edge label of a uniform graph");
            gf->excludes(mo)->excludes(Mo);
            mo->needs(Mo);
            Mo->needs(mo);
        }
        sub->add_option("--y0", c.y0, "horosphere height")->capture_default_str();
        sub->add_option("--out", c.out, "write output here instead of stdout");
        sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
        sub->add_option("--seed", c.seed, "recorded in the output; all computations are deterministic")->capture_default_str();
        sub->add_option("--jobs", c.jobs, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
    };

    std::string variant = "thm", grid;
    auto* bounds = app.add_subcommand("bounds", "constants and dimension bounds for (m, M)");
    add_common(bounds, true);
    bounds->add_option("--constants-variant", variant, "thm or cor")->check(CLI::IsMember({"thm", "cor"}))->capture_default_str();
    bounds->add_option("--grid", grid, "evaluate a grid instead, e.g. 11-30,3-6 (m range, M range)");

    int V = 2, stages = 3;
    auto* rt = app.add_subcommand("round-tree", "build the round tree and audit it");
    add_common(rt, true);
    rt->add_option("--V", V, "vertical branching")->capture_default_str();
    rt->add_option("--stages", stages, "number of inductive steps")->capture_default_str();

    std::vector<std::string> triples;
    auto* links = app.add_subcommand("links", "link-condition check at cap vertices of triangle groups");
    add_common(links, false);
    links->add_option("--triple", triples, "p,q,r (repeatable); default 3,3,4 3,4,4 4,4,4");

    int k = 2;
    auto* census = app.add_subcommand("census", "polygon shells about the <1,2> polygon");
    add_common(census, true);
    census->add_option("--k", k, "number of shells")->capture_default_str();

    auto* y0 = app.add_subcommand("y0", "feasibility thresholds for the horosphere height");
    add_common(y0, false);

    int radius = 3;
    auto* ball = app.add_subcommand("ball", "export a word-metric ball of the Davis complex");
    add_common(ball, true);
    ball->add_option("--radius", radius, "ball radius")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    if (c.jobs > 0) omp_set_num_threads(c.jobs);

    try {
        Result r;
        std::string name;
        if (bounds->parsed()) {
            r = run_bounds(c, variant, grid);
            name = "bounds";
        } else if (rt->parsed()) {
            r = run_round_tree(c, V, stages);
            name = "round-tree";
        } else if (links->parsed()) {
            r = run_links(c, triples);
            name = "links";
        } else if (census->parsed()) {
            r = run_census(c, k);
            name = "census";
        } else if (y0->parsed()) {
            r = run_y0();
            name = "y0";
        } else {
            r = run_ball(c, radius);
            name = "ball";
        }
        emit(r, c, name);
        return r.pass ? 0 : 1;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NotApplicableError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
