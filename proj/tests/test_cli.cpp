#include "doctest.h"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "cf/cli.hpp"
#include "cf/generators.hpp"
#include "cf/io.hpp"
#include "cf/linking.hpp"

using namespace cf;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = 0;
    std::string out, err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream o, e;
    Run r;
    r.code = run_cli(args, o, e);
    r.out = o.str();
    r.err = e.str();
    return r;
}

// The real binary, through the shell.
Run run_binary(const std::string& args) {
    Run r;
    std::string cmd = std::string(CF_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf{};
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

struct Files {
    fs::path dir;
    std::string mesh, split1, split2, link2;

    Files() {
        dir = fs::temp_directory_path() / ("cf_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir);
        auto hm = hopf_s3({});
        const auto& m = hm.mesh;
        mesh = (dir / "s3.json").string();
        write_json(mesh, mesh_to_json(m));
        auto loop = [&](auto vid) {
            std::vector<int> l;
            for (int i = 0; i < hm.cfg.n; ++i) l.push_back(vid(i));
            return edge_loop(m, l);
        };
        auto a = pushoff(m, loop([&](int i) { return hm.vid(i, 3, 5); }), 3);
        auto b = pushoff(m, loop([&](int i) { return hm.vid(i, 9, 6); }), 5);
        auto c = pushoff(m, loop([&](int i) { return hm.vid(8, i, 4); }), 7);
        split1 = (dir / "a.json").string();
        split2 = (dir / "b.json").string();
        link2 = (dir / "c.json").string();
        write_json(split1, link_to_json(a));
        write_json(split2, link_to_json(b));
        write_json(link2, link_to_json(c));
    }
    ~Files() { fs::remove_all(dir); }
};

const Files& files() {
    static Files f;
    return f;
}

}  // namespace

TEST_CASE("homology of the S3 mesh from a file") {
    auto r = run({"homology", "--mesh", files().mesh});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["command"] == "homology");
    CHECK(j["result"]["betti"] == json::array({1, 0, 0, 1}));
}

TEST_CASE("lk of split and linked loops") {
    const auto& f = files();
    auto r = run({"lk", "--mesh", f.mesh, "--l1", f.split1, "--l2", f.split2, "--check"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["result"] == "0/1");
    r = run({"lk", "--mesh", f.mesh, "--l1", f.split1, "--l2", f.link2});
    REQUIRE(r.code == 0);
    std::string v = json::parse(r.out)["result"];
    CHECK((v == "1/1" || v == "-1/1"));
}

TEST_CASE("usage and domain errors") {
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"lk", "--mesh", files().mesh}).code == 2);  // missing --l2
    CHECK(run({"lk", "--mesh", files().mesh, "--l1", files().split1, "--l2", files().split1}).code == 1);
    auto r = run({"homology", "--mesh", (files().dir / "missing.json").string()});
    CHECK(r.code == 1);
    CHECK(json::parse(r.out).contains("error"));
}

TEST_CASE("binary: hopf demo and deterministic reports") {
    auto a = run_binary("hopf-demo --seed 3");
    REQUIRE(a.code == 0);
    CHECK(json::parse(a.out)["result"] == "-8/1");
    auto b = run_binary("hopf-demo --seed 3");
    CHECK(a.out == b.out);
    CHECK(run_binary("frobnicate").code == 2);
}
