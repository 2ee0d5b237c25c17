#include "test_main.hpp"

#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(COXDIM_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("every subcommand has help") {
    CHECK(run("--help").code == 0);
    for (const char* sub : {"bounds", "round-tree", "links", "census", "y0", "ball"}) {
        const auto r = run(std::string(sub) + " --help");
        INFO(sub);
        CHECK(r.code == 0);
        CHECK(r.out.find("--format") != std::string::npos);
    }
}

TEST_CASE("usage errors exit 2") {
    CHECK(run("").code == 2);
    CHECK(run("bounds --m 11").code == 2);
    CHECK(run("bounds --m 11 --M 3 --format xml").code == 2);
    CHECK(run("bounds --graph x.txt --m 11 --M 3").code == 2);
    CHECK(run("round-tree --m 10 --M 3 --V 2").code == 2);
    CHECK(run("links --triple 3,3,3").code == 2);
    CHECK(run("bounds --m 11 --M 3 --y0 0.5").code == 2);
}

TEST_CASE("bounds report") {
    const auto r = run("bounds --m 11 --M 3");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["schema_version"] == 1);
    CHECK(j["report"]["lower"].get<double>() == doctest::Approx(1.4306765580733931).epsilon(1e-12));
    CHECK(j["report"]["bourdon_kleiner_upper"].is_null());
    const auto g = run("bounds --grid 11-13,3-4 --format csv --jobs 2");
    CHECK(g.code == 0);
    CHECK(std::count(g.out.begin(), g.out.end(), '\n') == 7);
}

TEST_CASE("round tree at two stages passes its audit") {
    const auto r = run("round-tree --m 11 --M 3 --V 2 --stages 2");
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["stages"].size() == 3);
    CHECK(j["convex"] == true);
    CHECK(j["systolic"] == true);
    for (const auto& s : j["stages"])
        for (const char* ih : {"ih1", "ih2", "ih3", "ih4"}) CHECK(s[ih]["pass"] == true);
}

TEST_CASE("y0, links, census and ball") {
    const auto y = run("y0");
    CHECK(y.code == 0);
    const auto yj = nlohmann::json::parse(y.out);
    CHECK(yj["cases"][0]["agrees_with_stated"] == true);
    CHECK(yj["cases"][1]["agrees_with_stated"] == false);

    CHECK(run("links --y0 1.5").code == 0);
    CHECK(run("links --y0 0.5 --triple 3,3,4").code == 1);

    const auto c = run("census --m 4 --M 3 --k 2");
    CHECK(c.code == 0);
    CHECK(nlohmann::json::parse(c.out)["S1"]["count"] == 18);

    const auto b = run("ball --m 3 --M 3 --radius 4 --format csv");
    CHECK(b.code == 0);
    CHECK(b.out.rfind("length,sphere_size\n0,1\n1,3\n", 0) == 0);
}

TEST_CASE("identical flags give identical bytes") {
    const auto dir = std::filesystem::temp_directory_path() / "coxdim_cli_test";
    std::filesystem::create_directories(dir);
    for (const std::string args : {"bounds --grid 11-20,3-5 --jobs 1", "round-tree --m 11 --M 3 --stages 2", "census --m 5 --M 3 --k 2",
                                   "ball --m 4 --M 3 --radius 3"}) {
        const auto a = dir / "a.out", b = dir / "b.out";
        run(args + " --seed 7 --out " + a.string());
        run(args + " --seed 7 --out " + b.string());
        INFO(args);
        CHECK(!slurp(a).empty());
        CHECK(slurp(a) == slurp(b));
    }
    // Thread count does not change the output.
    const auto one = run("bounds --grid 11-30,3-6 --jobs 1").out;
    const auto four = run("bounds --grid 11-30,3-6 --jobs 4").out;
    CHECK(one == four);
    std::filesystem::remove_all(dir);
}
