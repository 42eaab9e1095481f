#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct Run {
    int rc;
    std::string out;
};

Run cli(const std::string& args) {
    const char* bin = std::getenv("PADICL_CLI");
    REQUIRE(bin != nullptr);
    std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
    FILE* f = popen(cmd.c_str(), "r");
    REQUIRE(f != nullptr);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
    int st = pclose(f);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

nlohmann::json js(const Run& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST_CASE("gauss") {
    auto r = cli("gauss --p 5 --cond 1 --char legendre");
    CHECK(r.rc == 0);
    auto j = js(r);
    CHECK(j["schema"] == 1);
    CHECK(std::abs(j["tau_re"].get<double>() - 2.2360679774997896) < 1e-12);
    CHECK(std::abs(j["tau_im"].get<double>()) < 1e-12);
    CHECK(j["abs_squared_exact"] == "5");
}

TEST_CASE("lemma24, euler, prop27") {
    auto a = js(cli("lemma24 --p 3 --cond 2 --char 1 --chi-pi 2"));
    CHECK(a["rel_err"].get<double>() < 1e-9);
    auto e = js(cli("euler --p 11 --cond 0 --chi-pi 1 --alpha1 1 --kind special"));
    CHECK(e["exact"] == "0");
    auto p = js(cli("prop27 --p 5 --cond 1 --char legendre --chi-pi 2 --alpha1 2 --alpha2 15 --kind spherical"));
    CHECK(p["report"]["exact_equal"] == true);
}

TEST_CASE("tree") {
    auto r = cli("tree --q 2 --radius 3 --emit dot");
    CHECK(r.rc == 0);
    CHECK(r.out.rfind("graph bt {", 0) == 0);
    auto j = js(cli("tree --q 2 --radius 3 --emit json"));
    // 1 + 3 + 6 + 12 classes, a tree
    CHECK(j["vertices"].size() == 22);
    CHECK(j["edges"].size() == 21);
}

TEST_CASE("arch") {
    auto j = js(cli("arch --identity mellin --s 0.5 1"));
    CHECK(std::abs(j["rows"][0]["quadrature"].get<double>() - 1.0) < 1e-9);
    CHECK(cli("arch --identity nonsense").rc == 2);
}

TEST_CASE("lp") {
    auto j = js(cli("lp --curve 11a --p 11 --level 1 --s 0"));
    CHECK(j["exceptional"] == true);
    CHECK(j["vanishes"] == true);
    CHECK(std::abs(j["Lp0"]["re"].get<double>()) < 1e-10);
    auto path = std::string("cli_test_out.json");
    CHECK(cli("lp --curve 11a --p 5 --level 1 --s 0 --out " + path).rc == 0);
    std::ifstream in(path);
    auto k = nlohmann::json::parse(in);
    CHECK(k["exceptional"] == false);
    std::remove(path.c_str());
    CHECK(cli("lp --curve 37a --p 5").rc == 2);
    CHECK(cli("lp --curve 11a --p 2").rc == 2);  // a_2 = -2 is not a 2-adic unit
}

TEST_CASE("verify campaign") {
    auto r = cli("verify --only local_dist.prop27 --seed 5");
    CHECK(r.rc == 0);
    auto j = js(r);
    CHECK(j["summary"]["fail"] == 0);
    CHECK(j["summary"]["total"].get<int>() > 40);
    // reproducible apart from timings
    auto a = cli("verify --only char_gauss.lemma24 --seed 9 --threads 2").out;
    auto b = cli("verify --only char_gauss.lemma24 --seed 9").out;
    auto ja = nlohmann::json::parse(a), jb = nlohmann::json::parse(b);
    ja.erase("threads");
    jb.erase("threads");
    CHECK(ja == jb);

    {
        std::ofstream cfg("cli_test_bad.cfg");
        cfg << "tol.char_gauss.lemma24 = tight\n";
    }
    CHECK(cli("verify --config cli_test_bad.cfg --only char_gauss").rc == 2);
    std::remove("cli_test_bad.cfg");
    CHECK(cli("verify --only nosuchmodule").rc == 2);
    CHECK(cli("gauss --p 5 --cond 1 --char 99").rc == 2);
    CHECK(cli("nosuchcommand").rc == 2);
}
