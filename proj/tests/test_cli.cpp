#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "qtrees/bassserre.hpp"
#include "qtrees/cli.hpp"
#include "qtrees/fixtures.hpp"
#include "qtrees/formats.hpp"

using namespace qtrees;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("qtrees_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name, const std::string& content) {
        std::string p = (path / name).string();
        std::ofstream out(p);
        out << content;
        return p;
    }
};

cli::RunResult run(std::vector<std::string> args) { return cli::run(args); }

} // namespace

TEST_CASE("classify, homogeneous and expand commands") {
    TempDir tmp;
    std::string zp = tmp.file("zp_zp.gog", fixtures::content("zp_zp.gog"));

    cli::RunResult r = run({"classify", zp});
    CHECK(r.exit_code == 0);
    CHECK(r.out == "trichotomy=BUSHY\n");

    cli::RunResult h = run({"homogeneous", zp});
    CHECK(h.exit_code == 0);
    CHECK(h.out == "geometrically_homogeneous=true\n");

    std::string out_tree = (tmp.path / "ball.tree").string();
    cli::RunResult e = run({"expand", zp, "--base", "v", "--radius", "2", "-o", out_tree});
    CHECK(e.exit_code == 0);
    CHECK(e.out.find("vertices=26") != std::string::npos);
    CHECK(std::filesystem::exists(out_tree));

    // reports are byte-identical across runs
    CHECK(run({"classify", zp}).out == r.out);
}

TEST_CASE("reduce command reports the trace") {
    TempDir tmp;
    std::string path = tmp.file("collapse_path.gog", fixtures::content("collapse_path.gog"));
    cli::RunResult r = run({"reduce", path});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("trace.0=collapse edge=e1") != std::string::npos);
    CHECK(r.out.find("index=15") != std::string::npos);
    CHECK(r.out.find("graph:") != std::string::npos);
}

TEST_CASE("check commands use exit code 1 for failed properties") {
    TempDir tmp;
    std::string bad = tmp.file("z3_single_plane.gog", fixtures::content("z3_single_plane.gog"));
    cli::RunResult failing = run({"check-star", bad});
    CHECK(failing.exit_code == 1);
    CHECK(failing.out.find("vertex.v=fail") != std::string::npos);

    std::string good = tmp.file("z3_three_planes.gog", fixtures::content("z3_three_planes.gog"));
    CHECK(run({"check-star", good}).exit_code == 0);
    CHECK(run({"check-raft-hypotheses", good}).exit_code == 0);
    CHECK(run({"check-raft-hypotheses", bad}).exit_code == 1);
}

TEST_CASE("crossing command with the lattice oracle") {
    TempDir tmp;
    std::string path = tmp.file("z2_two_lines.gog", fixtures::content("z2_two_lines.gog"));
    cli::RunResult r = run({"crossing", path, "--vertex", "v", "--oracle", "--box", "10",
                            "--deep-threshold", "3"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("summary=CONNECTED") != std::string::npos);
    CHECK(r.out.find("conclusive=true") != std::string::npos);
}

TEST_CASE("patterns commands") {
    TempDir tmp;
    std::string p = tmp.file("a.pat", fixtures::content("lines_0inf12.pat"));
    std::string q = tmp.file("b.pat", fixtures::content("lines_0inf13.pat"));

    cli::RunResult cr = run({"patterns", "cross-ratio", p});
    CHECK(cr.out == "cross_ratio=1/2\n");

    cli::RunResult eq = run({"patterns", "equiv", p, q});
    CHECK(eq.exit_code == 0);
    CHECK(eq.out.find("equivalent=NO") != std::string::npos);

    cli::RunResult same = run({"patterns", "equiv", p, p});
    CHECK(same.out.find("equivalent=YES") != std::string::npos);
    CHECK(same.out.find("verify.0=exact") != std::string::npos);

    cli::RunResult ap = run({"patterns", "apply", p, "--matrix", "1,0;0,2"});
    CHECK(ap.exit_code == 0);
    CHECK(ap.out.find("sub l3 rows=1,2") != std::string::npos);
}

TEST_CASE("tracks commands") {
    TempDir tmp;
    std::string hex = tmp.file("hexagon_disk.cx2", fixtures::content("hexagon_disk.cx2"));
    std::string core = tmp.file("hexagon_core.npat", fixtures::content("hexagon_core.npat"));

    cli::RunResult h1 = run({"tracks", "h1", hex});
    CHECK(h1.out == "h1=0\n");

    cli::RunResult find = run({"tracks", "find", hex, "--essential-min", "1", "--weight-cap", "8"});
    CHECK(find.exit_code == 0);
    CHECK(find.out.find("tracks=") != std::string::npos);

    cli::RunResult dual = run({"tracks", "dual", hex, core});
    CHECK(dual.exit_code == 0);
    CHECK(dual.out.find("nodes=2") != std::string::npos);
    CHECK(dual.out.find("is_tree=true") != std::string::npos);
}

TEST_CASE("qe commands over a tree fixture") {
    TempDir tmp;
    std::string tree = tmp.file("ball.tree", fixtures::content("trivalent_ball_4.tree"));

    // boundary of the shipped ball starts at vertex 22 (depth-4 frontier)
    bassserre::TreeBall ball = bassserre::parse_tree(fixtures::content("trivalent_ball_4.tree"));
    std::vector<int> boundary;
    for (const auto& v : ball.vertices)
        if (v.truncated) boundary.push_back(v.id);
    std::string clopen;
    for (size_t i = 0; i < boundary.size() / 2; ++i)
        clopen += (i ? "," : "") + std::to_string(boundary[i]);

    cli::RunResult c = run({"qe", "constant", tree, "--clopen", clopen});
    CHECK(c.exit_code == 0);
    CHECK(c.out.find("constant=") != std::string::npos);

    std::string gens = tmp.file("id.gens", [&] {
        std::string s = "gens v1\ngen id\n";
        for (int v = 0; v < static_cast<int>(ball.vertices.size()); ++v)
            s += "m " + std::to_string(v) + " " + std::to_string(v) + "\n";
        return s;
    }());
    cli::RunResult push = run({"qe", "push", tree, "--clopen", clopen, "--gens", gens});
    CHECK(push.exit_code == 0);
    cli::RunResult orbit =
        run({"qe", "orbit", tree, "--clopen", clopen, "--gens", gens, "--wordlen", "2"});
    CHECK(orbit.exit_code == 0);
    CHECK(orbit.out.find("nodes=1") != std::string::npos);
}

TEST_CASE("fixtures command lists and writes the corpus") {
    cli::RunResult list = run({"fixtures"});
    CHECK(list.exit_code == 0);
    CHECK(list.out.find("zp_zp.gog") != std::string::npos);
    CHECK(list.out.find("hexagon_disk.cx2") != std::string::npos);
    CHECK(list.out.find("mapping_torus_circle.gog") != std::string::npos);

    TempDir tmp;
    std::string dir = (tmp.path / "fx").string();
    cli::RunResult w = run({"fixtures", "--write", dir});
    CHECK(w.exit_code == 0);
    CHECK(std::filesystem::exists(std::filesystem::path(dir) / "zp_zp.gog"));
}

TEST_CASE("input errors exit with code 2") {
    TempDir tmp;
    std::string junk = tmp.file("junk.gog", "gog v1 abstract\nvertex v dim=0\nvertex v dim=0\n");
    cli::RunResult r = run({"classify", junk});
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("line 3") != std::string::npos);

    CHECK(run({"definitely-not-a-command"}).exit_code == 2);
    CHECK(run({"classify", (tmp.path / "missing.gog").string()}).exit_code == 2);
}
