#include "ftd/ftd.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

using namespace ftd;
namespace fs = std::filesystem;

namespace
{
    struct Run
    {
        int code = -1;
        std::string out;
    };

    /// Runs the CLI with stderr folded into the captured output.
    Run ftd_cli(const std::string &args)
    {
        std::string cmd = std::string(FTD_CLI_PATH) + " " + args + " 2>&1";
        Run r;
        FILE *pipe = ::popen(cmd.c_str(), "r");
        REQUIRE(pipe != nullptr);
        char buf[4096];
        while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe))
            r.out.append(buf, got);
        int status = ::pclose(pipe);
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        return r;
    }

    struct Workspace
    {
        fs::path dir;
        Workspace(const std::string &tag) : dir(fs::temp_directory_path() / ("ftd_cli_" + tag + "_" + std::to_string(::getpid())))
        {
            fs::remove_all(dir);
            fs::create_directories(dir);
        }
        ~Workspace() { fs::remove_all(dir); }
        std::string operator/(const std::string &name) const { return (dir / name).string(); }
    };

    std::string slurp(const fs::path &p)
    {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    double field(const std::string &text, const std::string &key)
    {
        std::smatch m;
        REQUIRE(std::regex_search(text, m, std::regex(key + "=([-+0-9.eE]+)")));
        return std::stod(m[1]);
    }
}

TEST_CASE("solve on K7 writes the uniform weighting")
{
    Workspace ws("k7");
    auto gen = ftd_cli("--out-dir " + ws / "" + " gen --n 7 --p 1 --out k7.graph");
    REQUIRE(gen.code == 0);
    auto solve = ftd_cli("--out-dir " + ws / "" + " solve --graph " + ws / "k7.graph");
    CHECK(solve.code == 0);
    CHECK(solve.out.find("FTD_FOUND") != std::string::npos);

    Graph g = read_graph(fs::path(ws / "k7.graph"));
    TriangleIndex ti(g);
    std::ifstream in(ws / "weighting.txt");
    auto w = read_weighting(in, ti);
    REQUIRE(w.size() == 35);
    for (double x : w.values)
        CHECK(x == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(fs::exists(ws / "trajectory.csv"));
    // Flags are echoed into artifact headers.
    CHECK(slurp(ws / "weighting.txt").find("# --graph=") != std::string::npos);
}

TEST_CASE("verify the P family at 11/4")
{
    auto r = ftd_cli("verify --family P --alpha 11/4");
    CHECK(r.code == 0);
    CHECK(r.out.find("37 passed, 0 failed") != std::string::npos);
    int rows = 0;
    std::istringstream in(r.out);
    for (std::string line; std::getline(in, line);)
        rows += line.rfind("P(", 0) == 0 && line.find(" pass ") != std::string::npos;
    CHECK(rows == 37);
}

TEST_CASE("check rejects a weighting for another graph")
{
    Workspace ws("mismatch");
    REQUIRE(ftd_cli("--out-dir " + ws / "" + " gen --n 7 --p 1 --out k7.graph").code == 0);
    REQUIRE(ftd_cli("--out-dir " + ws / "" + " gen --n 6 --p 1 --out k6.graph").code == 0);
    REQUIRE(ftd_cli("--out-dir " + ws / "" + " solve --graph " + ws / "k7.graph").code == 0);
    auto r = ftd_cli("check --graph " + ws / "k6.graph" + " --weighting " + ws / "weighting.txt");
    CHECK(r.code == 1);
    CHECK_FALSE(r.out.empty());
}

TEST_CASE("solve then check reproduces delta_inf")
{
    Workspace ws("roundtrip");
    auto solve = ftd_cli("--out-dir " + ws / "" + " solve --n 30 --p 0.6 --seed 4 --k 3 --max-iters 5");
    REQUIRE(solve.code == 0);
    REQUIRE(ftd_cli("--out-dir " + ws / "" + " gen --n 30 --p 0.6 --seed 4 --out g.graph").code == 0);
    auto check = ftd_cli("check --graph " + ws / "g.graph" + " --weighting " + ws / "weighting.txt");
    CHECK(check.code == 0);
    double a = field(solve.out, "final: delta_inf"), b = field(check.out, "delta_inf");
    CHECK(std::abs(a - b) <= 1e-12);
}

TEST_CASE("exit codes and determinism")
{
    Workspace ws("codes");
    CHECK(ftd_cli("--out-dir " + ws / "" + " scan --n 3000 --c 1.3 --trials 1").code == 2);
    CHECK(ftd_cli("solve --no-such-flag").code == 1);
    CHECK(ftd_cli("check --graph " + ws / "missing.graph" + " --weighting " + ws / "missing.txt").code == 1);

    REQUIRE(ftd_cli("--out-dir " + ws / "" + " gen --n 50 --p 0.3 --seed 9 --out a.graph").code == 0);
    REQUIRE(ftd_cli("--out-dir " + ws / "" + " --threads 2 gen --n 50 --p 0.3 --seed 9 --out b.graph").code == 0);
    std::string a = slurp(ws / "a.graph"), b = slurp(ws / "b.graph");
    auto strip = [](const std::string &s) { return s.substr(s.find("\n5")); };
    CHECK(strip(a) == strip(b));

    auto oracle = ftd_cli("--out-dir " + ws / "" + " oracle --n 7 --p 1");
    CHECK(oracle.code == 0);
    CHECK(oracle.out.find("FEASIBLE") != std::string::npos);
}
