#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

// Runs the CLI and captures stdout; stderr is discarded.
Run cli(const std::string& args) {
    const std::string cmd = std::string(RADLAB_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string tmp(const std::string& name) { return (std::filesystem::temp_directory_path() / name).string(); }

std::string slurp(const std::string& path) {
    std::ifstream is(path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("exit codes") {
    CHECK(cli("").code == 2);
    CHECK(cli("bogus").code == 2);
    CHECK(cli("classify -N 3 -p x").code == 2);
    CHECK(cli("classify -N 3 -p 0.5 -q 2").code == 3);
    CHECK(cli("portrait -N 3 -p 2 -q 1.5 -M 1").code == 3);
    CHECK(cli("classify -N 3 -p 2 -q 1.5 -M 1").code == 0);
}

TEST_CASE("error JSON goes to stderr") {
    const std::string cmd = std::string(RADLAB_CLI_PATH) + " classify -N 3 -p 0.5 -q 2 2>&1 1>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe);
    std::string err;
    char buf[1024];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) err.append(buf, n);
    pclose(pipe);
    const auto j = nlohmann::json::parse(err);
    CHECK(j.at("exit_code") == 3);
    CHECK(j.at("error") == "domain");
}

TEST_CASE("classify flags M below m*") {
    const Run r = cli("classify -N 3 -p 5 -q 1.6666666667 -M 1");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("M_below_m_star") == true);
    const Run exact = cli("classify -N 3 -p 5 -q 5/3 -M 1");
    CHECK(nlohmann::json::parse(exact.out).at("regime").at("mass_position") == "below_m_star");
}

TEST_CASE("identical runs give identical bytes") {
    const std::string a = tmp("radlab_cli_a.json"), b = tmp("radlab_cli_b.json");
    REQUIRE(cli("shoot -N 3 -p 2 -q 4/3 -M 1 --out " + a).code == 0);
    REQUIRE(cli("shoot -N 3 -p 2 -q 4/3 -M 1 --out " + b).code == 0);
    const std::string sa = slurp(a);
    CHECK_FALSE(sa.empty());
    CHECK(sa == slurp(b));
    CHECK(nlohmann::json::parse(sa).at("status") == "success");
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}

TEST_CASE("flags override the config file") {
    const std::string cfg = tmp("radlab_cli_cfg.json");
    std::ofstream(cfg) << R"({"N": 3, "p": 5, "q": "5/3", "M": 2})";
    const auto from_cfg = nlohmann::json::parse(cli("equilibria --config " + cfg).out);
    CHECK(from_cfg.at("constant_solutions").at("roots").size() == 2);
    const auto flag = nlohmann::json::parse(cli("equilibria --config " + cfg + " -M 1").out);
    CHECK(flag.at("constant_solutions").at("roots").empty());
    std::filesystem::remove(cfg);
}

TEST_CASE("portrait writes its three artifacts") {
    const std::string base = tmp("radlab_cli_pt");
    REQUIRE(cli("portrait -N 3 -p 5 -q 5/3 -M 2 --bbox 0,2,-1,2 --grid 11,11 --out " + base).code == 0);
    for (const char* suffix : {"_field.csv", "_curves.json", "_plot.py"}) {
        CHECK(std::filesystem::exists(base + suffix));
        std::filesystem::remove(base + suffix);
    }
}

TEST_CASE("integrate writes CSV") {
    const std::string out = tmp("radlab_cli_tr.csv");
    REQUIRE(cli("integrate -N 3 -p 2 -q 4/3 -M 1 --chart planar --init 0.4,0.3 --t1 1 --out " + out).code == 0);
    const std::string csv = slurp(out);
    CHECK(csv.rfind("t,s0,s1,r,u,du\n", 0) == 0);
    std::filesystem::remove(out);
}

TEST_CASE("verify runs a selected criterion") {
    const Run r = cli("verify --suite 1,9");
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS [1]") != std::string::npos);
    CHECK(r.out.find("PASS [9]") != std::string::npos);
}

TEST_CASE("barriers and linearize produce JSON") {
    const Run b = cli("barriers -N 3 -p 3 -q 1.8 -M 1 --family riccati_sub");
    REQUIRE(b.code == 0);
    CHECK(nlohmann::json::parse(b.out).dump().find("certified") != std::string::npos);
    const Run l = cli("linearize -N 3 -p 3 -q 1.8 -M 1 --order3");
    REQUIRE(l.code == 0);
    CHECK(nlohmann::json::parse(l.out).at("equilibria").at(0).contains("closed_form_eigenvalues"));
}
