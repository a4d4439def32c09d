#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {
const char* kBase = R"([masses]
mu = 1
kappa = 0.1
frame = m0centric
[hamiltonian]
index = H2
Lambda = 1
m0 = 1
[domain]
construct = remark
eps0 = 0.5
delta = 0.05
[quadrature]
nodes = 256
)";

struct Sandbox {
    fs::path dir;
    explicit Sandbox(const std::string& name) {
        dir = fs::temp_directory_path() / ("perilib_cli_" + name);
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Sandbox() { fs::remove_all(dir); }
    std::string config(const std::string& text, const std::string& name = "run.ini") const {
        const fs::path p = dir / name;
        std::ofstream(p) << text;
        return p.string();
    }
    std::string out() const { return (dir / "out").string(); }
    json read_json(const std::string& name) const {
        std::ifstream is(dir / "out" / name);
        return json::parse(is);
    }
    std::string read(const std::string& name) const {
        std::ifstream is(dir / "out" / name);
        std::stringstream ss;
        ss << is.rdbuf();
        return ss.str();
    }
};

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "perilib");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream o, e;
    const int code = perilib::cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
    return {code, o.str(), e.str()};
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 't') continue;
        std::vector<double> r;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) r.push_back(std::stod(cell));
        rows.push_back(r);
    }
    return rows;
}
}  // namespace

TEST_SUITE("cli") {
TEST_CASE("portrait lists the equilibria of each regime") {
    Sandbox s("portrait");
    const auto cfg = s.config(kBase);
    const Result r = run({"portrait", "--config", cfg, "--out", s.out(), "--eps", "0.3,0.7", "--seed", "5"});
    REQUIRE(r.code == 0);
    const json a = s.read_json("equilibria_eps0.3.json");
    CHECK(a["centers"] == 2);
    CHECK(a["saddles"] == 0);
    CHECK(a["seed"] == 5);
    const json b = s.read_json("equilibria_eps0.7.json");
    CHECK(b["saddles"] == 1);
    CHECK(s.read("portrait_eps0.3.csv").rfind("# seed,5\n", 0) == 0);
    for (const auto& e : fs::directory_iterator(s.dir / "out")) CHECK(e.path().extension() != ".tmp");
}

TEST_CASE("malformed config names the failing field") {
    Sandbox s("badcfg");
    const auto cfg = s.config(std::string(kBase) + "[integrator]\nrtol = -1\n");
    const Result r = run({"portrait", "--config", cfg, "--out", s.out()});
    CHECK(r.code == 2);
    CHECK(r.err.find("integrator.rtol") != std::string::npos);
    const auto cfg2 = s.config("[masses]\nmu = abc\n", "b.ini");
    const Result r2 = run({"check-theorem", "--config", cfg2, "--out", s.out()});
    CHECK(r2.code == 2);
    CHECK(r2.err.find("masses.mu") != std::string::npos);
    const Result r3 = run({"portrait", "--config", cfg, "--set", "nodot=1"});
    CHECK(r3.code == 2);
}

TEST_CASE("flags override file values") {
    Sandbox s("override");
    const auto cfg = s.config(kBase);
    const Result r = run({"check-theorem", "--config", cfg, "--out", s.out(), "--set", "domain.construct=none",
                          "--set", "domain.alpha_minus=1", "--set", "domain.alpha_plus=8"});
    REQUIRE(r.code == 0);
    CHECK(s.read_json("theorem_report.json")["construction"] == "none");
}

TEST_CASE("verify-renorm") {
    Sandbox s("renorm");
    const auto cfg = s.config(kBase);
    Result r = run({"verify-renorm", "--config", cfg, "--out", s.out(), "--eps", "0,0.3"});
    REQUIRE(r.code == 0);
    const json j = s.read_json("renorm_report.json");
    CHECK(j["results"][0]["max_residual"].get<double>() == 0.0);
    CHECK(j["results"][1]["max_residual"].get<double>() < 1e-8);
    CHECK(j["results"][1]["bracket_max_abs"].get<double>() < 1e-6);
    r = run({"verify-renorm", "--config", cfg, "--out", s.out(), "--eps", "0.6"});
    CHECK(r.code == 2);
    CHECK(r.err.find("|eps| < 1/2") != std::string::npos);
}

TEST_CASE("evolve on the invariant manifold") {
    Sandbox s("m0");
    const auto cfg = s.config(std::string(kBase) + "[integrator]\nenergy_tol = 1e-8\n");
    const Result r = run({"evolve", "--config", cfg, "--out", s.out(), "--set", "domain.construct=none", "--set",
                          "domain.alpha_plus=8", "--chart", "secular", "--state", "0.1,0,100,0", "--T", "1000"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(s.read("trajectory.csv"));
    REQUIRE(rows.size() > 2);
    for (const auto& row : rows) CHECK(std::abs(row[2]) < 1e-9);
    const json j = s.read_json("evolve_summary.json");
    CHECK(j["energy_within_tol"] == true);
}

TEST_CASE("evolve libration under a passing report") {
    Sandbox s("lib");
    const auto cfg = s.config(kBase);
    const Result r = run({"evolve", "--config", cfg, "--out", s.out(), "--chart", "action-angle", "--state", "auto",
                          "--T", "auto"});
    REQUIRE(r.code == 0);
    const json j = s.read_json("evolve_summary.json");
    CHECK(j["winding"].get<double>() >= 2.0 * std::numbers::pi);
    CHECK(j["squeezes"].get<int>() >= 2);
    CHECK(j["domain_exit"] == false);
}

TEST_CASE("zero-duration evolve writes one row") {
    Sandbox s("zero");
    const auto cfg = s.config(kBase);
    const Result r = run({"evolve", "--config", cfg, "--out", s.out(), "--chart", "action-angle", "--state", "auto",
                          "--T", "0"});
    REQUIRE(r.code == 0);
    CHECK(csv_rows(s.read("trajectory.csv")).size() == 1);
    CHECK(s.read_json("evolve_summary.json")["winding"].get<double>() == 0.0);
}

TEST_CASE("check-theorem reports failure as data") {
    Sandbox s("theorem");
    const auto cfg = s.config(kBase);
    Result r = run({"check-theorem", "--config", cfg, "--out", s.out()});
    REQUIRE(r.code == 0);
    CHECK(s.read_json("theorem_report.json")["report"]["pass"] == true);
    r = run({"check-theorem", "--config", cfg, "--out", s.out(), "--set", "domain.construct=none", "--set",
             "domain.eps0=1.5", "--set", "domain.alpha_plus=8"});
    REQUIRE(r.code == 0);
    CHECK(s.read_json("theorem_report.json")["report"]["pass"] == false);
}

TEST_CASE("normalform: zero steps and contraction loss") {
    Sandbox s("nf");
    const auto cfg = s.config(kBase);
    Result r = run({"normalform", "--config", cfg, "--out", s.out(), "--N", "0"});
    REQUIRE(r.code == 0);
    CHECK(s.read_json("normalform_norms.json")["steps"].size() == 1);
    CHECK(s.read_json("f_star.json")["format"] == "perilib.tfseries");
    r = run({"normalform", "--config", cfg, "--out", s.out(), "--N", "2", "--set", "normalform.rho=1e-4", "--set",
             "normalform.r=1e-4", "--set", "normalform.xi=1e-4"});
    CHECK(r.code == 3);
    CHECK(r.err.find("factor") != std::string::npos);
}

TEST_CASE("runs are deterministic given config and seed") {
    Sandbox s("det");
    const auto cfg = s.config(kBase);
    REQUIRE(run({"verify-renorm", "--config", cfg, "--out", s.out(), "--eps", "0.2", "--seed", "9"}).code == 0);
    const std::string a = s.read("renorm_report.json");
    REQUIRE(run({"verify-renorm", "--config", cfg, "--out", s.out(), "--eps", "0.2", "--seed", "9"}).code == 0);
    CHECK(a == s.read("renorm_report.json"));
    CHECK(json::parse(a)["seed"] == 9);
}

TEST_CASE("I/O failures exit with code 4") {
    Sandbox s("io");
    CHECK(run({"portrait", "--config", (s.dir / "missing.ini").string()}).code == 4);
    const auto cfg = s.config(kBase);
    std::ofstream(s.dir / "blocker") << "x";
    CHECK(run({"portrait", "--config", cfg, "--out", (s.dir / "blocker" / "sub").string()}).code == 4);
}

TEST_CASE("unknown subcommands are configuration errors") {
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"portrait"}).code == 2);
}
}
