#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "henon/cli.hpp"
#include "henon/error.hpp"
#include "henon/params.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace henon;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome call(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::main_entry(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch() {
    const fs::path dir = fs::temp_directory_path() / "henon_cli_test";
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p;
}

std::string read_file(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::stringstream ss(text);
    for (std::string l; std::getline(ss, l);) v.push_back(l);
    return v;
}

const std::string kSymmetric = R"({"n":3,"a":0,"b":0,"nu":2,"alpha":3,"beta":3})";

}  // namespace

TEST_CASE("csv quoting and number formatting") {
    CHECK(cli::csv_field("plain") == "plain");
    CHECK(cli::csv_field("a,b") == "\"a,b\"");
    CHECK(cli::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(cli::csv_field("two\nlines") == "\"two\nlines\"");
    CHECK(cli::format_number(0.1) == "0.10000000000000001");
    CHECK(std::stod(cli::format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("range parsing") {
    const auto v = cli::parse_range("-2:0:0.05");
    REQUIRE(v.size() == 41);
    CHECK(v.front() == -2.0);
    CHECK(std::abs(v.back()) < 1e-12);
    CHECK(cli::parse_range("0.5") == std::vector<double>{0.5});
    for (const char* bad : {"1:2", "1:0:0.1", "0:1:0", "x:1:0.1", "0:1:-1", ""}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(cli::parse_range(bad), Error);
    }
}

TEST_CASE("verify-all on the symmetric sample config") {
    const fs::path cfg = write_file("n3.json", kSymmetric);
    const Outcome o = call({"verify-all", "--config", cfg.string()});
    CHECK(o.code == 0);
    const json j = json::parse(o.out);
    CHECK(j.at("schema_version") == cli::kSchemaVersion);
    CHECK(j.at("pass") == true);
    CHECK(j.at("checks").size() == 12);
}

TEST_CASE("Felli-Schneider sweep CSV") {
    const Outcome o = call({"sweep", "--a=-2:0:0.05", "--curve", "fs", "--format", "csv"});
    REQUIRE(o.code == 0);
    const auto ls = lines(o.out);
    REQUIRE(ls.size() == 42);
    CHECK(ls[0] == "a,b_fs");
    for (std::size_t i = 1; i < ls.size(); ++i) {
        const auto comma = ls[i].find(',');
        const double a = std::stod(ls[i].substr(0, comma));
        const double b = std::stod(ls[i].substr(comma + 1));
        CHECK(b == felli_schneider(3, a));
        CHECK(ls[i].find("nan") == std::string::npos);
    }
}

TEST_CASE("exit codes") {
    SUBCASE("malformed JSON reports the location") {
        const fs::path cfg = write_file("bad.json", "{\"n\": 3, \"a\": }");
        const Outcome o = call({"verify-all", "--config", cfg.string()});
        CHECK(o.code == 2);
        CHECK(o.err.find("at byte") != std::string::npos);
    }
    SUBCASE("constraint violation") {
        CHECK(call({"bubble", "--n", "3", "--a", "2", "--b", "0"}).code == 2);
    }
    SUBCASE("missing key") {
        const Outcome o = call({"sync", "--n", "3", "--a", "0", "--b", "0"});
        CHECK(o.code == 2);
        CHECK(o.err.find("missing key") != std::string::npos);
    }
    SUBCASE("unknown flag and unknown subcommand") {
        CHECK(call({"bubble", "--bogus", "1"}).code == 2);
        CHECK(call({"frobnicate"}).code == 2);
        CHECK(call({}).code == 2);
    }
    SUBCASE("symmetry-breaking regime is refused with the condition named") {
        const Outcome o = call({"groundstate", "--n", "3", "--a", "-1", "--b", "-0.99", "--nu", "1", "--alpha", "2"});
        CHECK(o.code == 2);
        CHECK(o.err.find("b < b_FS(a)") != std::string::npos);
    }
    SUBCASE("missing config file and unwritable output are I/O failures") {
        CHECK(call({"verify-all", "--config", "/nonexistent/x.json"}).code == 3);
        CHECK(call({"sweep", "--a=0:1:0.5", "--out", "/nonexistent/dir/out.csv", "--format", "csv"}).code == 3);
    }
    SUBCASE("help") { CHECK(call({"--help"}).code == 0); }
}

TEST_CASE("flags override config values") {
    const fs::path cfg = write_file("prec.json", R"({"params":{"n":3,"a":0,"b":0},"nu":5,"alpha":3})");
    const Outcome base = call({"sync", "--config", cfg.string()});
    REQUIRE(base.code == 0);
    CHECK(json::parse(base.out).at("params").at("nu") == 5.0);
    CHECK(json::parse(base.out).at("params").at("beta") == 3.0);  // defaulted to p - alpha
    const Outcome over = call({"sync", "--config", cfg.string(), "--nu", "0.1"});
    REQUIRE(over.code == 0);
    const json j = json::parse(over.out);
    CHECK(j.at("params").at("nu") == 0.1);
    // nu = 0.1 < 2/3: only the symmetric root among positive ones
    int positive = 0;
    for (const auto& r : j.at("roots")) positive += r.at("label") == "positive";
    CHECK(positive == 1);
}

TEST_CASE("outputs are deterministic across runs and job counts") {
    const fs::path a = scratch() / "gs1.csv", b = scratch() / "gs2.csv";
    const std::vector<std::string> common{"groundstate", "--n", "3", "--alpha", "3",
                                          "--sweep", "a=0:0.4:0.2,b=0:0.4:0.2,nu=0.1:2.1:1", "--format", "csv"};
    auto with = [&](std::vector<std::string> extra) {
        auto v = common;
        v.insert(v.end(), extra.begin(), extra.end());
        return v;
    };
    REQUIRE(call(with({"--out", a.string(), "--jobs", "1"})).code == 0);
    REQUIRE(call(with({"--out", b.string(), "--jobs", "4"})).code == 0);
    const std::string ta = read_file(a);
    CHECK(ta == read_file(b));
    const auto ls = lines(ta);
    REQUIRE(ls.size() == 1 + 27);
    CHECK(ls[0] == "a,b,nu,alpha,beta,case,f_min,S,S_bar,energy,error");
    // b < a violates the admissible range: the row carries an error and no NaN
    bool saw_error = false;
    for (std::size_t i = 1; i < ls.size(); ++i) {
        CHECK(ls[i].find("nan") == std::string::npos);
        if (ls[i].back() != ',') saw_error = true;
    }
    CHECK(saw_error);

    const fs::path k1 = scratch() / "k1.json", k2 = scratch() / "k2.json";
    const fs::path spec = write_file("k3.json", R"({"n":3,"a":0,"b":0,
        "kappa":[[1,0.5,0.5],[0.5,1,0.5],[0.5,0.5,1]],
        "alpha_ij":[[3,3,3],[3,3,3],[3,3,3]],"beta_ij":[[3,3,3],[3,3,3],[3,3,3]]})");
    REQUIRE(call({"groundstate", "--config", spec.string(), "--seed", "7", "--out", k1.string()}).code == 0);
    REQUIRE(call({"groundstate", "--config", spec.string(), "--seed", "7", "--out", k2.string()}).code == 0);
    CHECK(read_file(k1) == read_file(k2));
}

TEST_CASE("profile CSV with JSON sidecar") {
    const fs::path out = scratch() / "bubble.csv";
    REQUIRE(call({"bubble", "--n", "3", "--a", "0", "--b", "0", "--points", "101", "--format", "csv", "--out",
                  out.string()}).code == 0);
    const auto ls = lines(read_file(out));
    REQUIRE(ls.size() == 102);
    CHECK(ls[0] == "t,value");
    const json side = json::parse(read_file(out.string() + ".json"));
    CHECK(side.at("schema_version") == cli::kSchemaVersion);
    CHECK(side.at("lambda") == 0.5);
    CHECK(side.contains("tail_fit"));
    CHECK(side.at("params").at("n") == 3);
}

TEST_CASE("other commands run") {
    const fs::path cfg = write_file("n3b.json", kSymmetric);
    const Outcome ode = call({"solve-ode", "--config", cfg.string(), "--rmax", "5"});
    REQUIRE(ode.code == 0);
    const json j = json::parse(ode.out);
    for (const char* key : {"residual", "asymptotics", "windows", "iterations"}) CHECK(j.contains(key));
    CHECK(j.at("residual").get<double>() < 1e-6);

    const Outcome init = call({"solve-ode", "--config", cfg.string(), "--init", "1,2", "--rmax", "1", "--points", "51"});
    CHECK(init.code == 0);
    CHECK(call({"solve-ode", "--config", cfg.string(), "--init", "1,x"}).code == 2);

    const Outcome spec = call({"spectrum", "--config", cfg.string(), "--modes", "3", "--scan-nu", "0.5:0.8:0.05"});
    REQUIRE(spec.code == 0);
    const json s = json::parse(spec.out);
    CHECK(std::abs(s.at("spectrum").at("eigenvalues")[0].get<double>() - 1.0) < 1e-4);
    CHECK(s.at("roots").size() >= 1);

    const Outcome gs = call({"groundstate", "--config", cfg.string()});
    REQUIRE(gs.code == 0);
    CHECK(json::parse(gs.out).at("result").at("case") == "case_ii");

    const Outcome sync_csv = call({"sync", "--config", cfg.string(), "--format", "csv", "--require-positive"});
    REQUIRE(sync_csv.code == 0);
    CHECK(lines(sync_csv.out).at(0) == "branch,label,c1,c2,residual");

    CHECK(call({"groundstate", "--config", cfg.string(), "--format", "csv"}).code == 2);
}
