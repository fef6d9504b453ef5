#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "qism/cli.hpp"
#include "qism/errors.hpp"

using namespace qism;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "qism");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json report_json(const RunReport& report) { return nlohmann::json::parse(report.to_json()); }

}  // namespace

TEST_CASE("complex literals") {
    CHECK(parse_complex("0.3") == Complex(0.3, 0.0));
    CHECK(parse_complex("-0.3") == Complex(-0.3, 0.0));
    CHECK(parse_complex("0.1+0.2i") == Complex(0.1, 0.2));
    CHECK(parse_complex("0.1-0.2i") == Complex(0.1, -0.2));
    CHECK(parse_complex("-2i") == Complex(0.0, -2.0));
    CHECK(parse_complex("i") == Complex(0.0, 1.0));
    CHECK(parse_complex("-i") == Complex(0.0, -1.0));
    CHECK(parse_complex("1-i") == Complex(1.0, -1.0));
    CHECK(parse_complex("1e-3+2E+1i") == Complex(1e-3, 20.0));
    CHECK(parse_complex("-1.5e-2-3e-1i") == Complex(-1.5e-2, -0.3));
    for (const char* bad : {"", "+1", "1+", "0.1 +0.2i", "abc", "1+2", "ii", "nan", "inf", "1e400", "0.1+0.2j", "1++2i"})
        CHECK_THROWS_AS(parse_complex(bad), InvalidArgument);
    const auto list = parse_complex_list("0.1+0.2i,0.3,i");
    REQUIRE(list.size() == 3);
    CHECK(list[2] == Complex(0.0, 1.0));
    CHECK(parse_complex_list("").empty());
    CHECK_THROWS_AS(parse_complex_list("0.1,,0.2"), InvalidArgument);
}

TEST_CASE("formatting round-trips") {
    for (const Complex z : {Complex(0.1, 0.2), Complex(-1e-300, 3.5), Complex(0.0, -0.0), Complex(1.0 / 3.0, -2.0 / 7.0)})
        CHECK(parse_complex(format_complex(z)) == (z + Complex(0.0, 0.0)));
    CHECK(format_complex(Complex(0.5, -0.0)) == "0.5+0i");
}

TEST_CASE("report schema") {
    RunReport report;
    report.command = "verify ybe";
    report.params = {{"seed", "7"}};
    report.seed = 7;
    report.results = {make_check("a", {Complex(1.0, 2.0)}, 1e-13, 1e-12), make_check("b", {}, 1e-11, 1e-12),
                      failed_check("c", "boom")};
    const auto j = report_json(report);
    CHECK(j["command"] == "verify ybe");
    CHECK(j["params"]["seed"] == "7");
    CHECK(j["seed"] == 7);
    CHECK(j["elapsed_ms"] == 0);
    REQUIRE(j["results"].size() == 3);
    CHECK(j["results"][0]["check_name"] == "a");
    CHECK(j["results"][0]["values"][0] == "1+2i");
    CHECK(j["results"][0]["pass"] == true);
    CHECK(j["results"][1]["pass"] == false);
    CHECK(j["results"][2]["residual"].is_null());
    CHECK(j["results"][2]["note"] == "boom");
    CHECK(!report.all_pass());
    for (const auto& entry : j["results"])
        for (const auto& [key, value] : entry.items()) CHECK(!value.is_object());
}

TEST_CASE("verify suites pass with defaults") {
    for (const char* suite : {"ybe", "crossing", "commutation", "dwpf", "scalar", "hamiltonian"}) {
        RunOptions options;
        options.trials = 3;
        const auto report = cmd_verify(suite, options);
        INFO(suite);
        CHECK(!report.results.empty());
        for (const auto& r : report.results) {
            INFO(r.name, " ", r.residual, " ", r.note);
            CHECK(r.pass);
        }
    }
}

TEST_CASE("yang-baxter suite reports every trial") {
    const auto r = run({"verify", "ybe", "--model", "felderhof", "--trials", "100", "--seed", "7"});
    CHECK(r.code == 0);
    RunOptions options;
    options.model = ModelKind::felderhof;
    options.trials = 100;
    options.seed = 7;
    const auto report = cmd_verify("ybe", options);
    CHECK(report.results.size() == 100);
    for (const auto& c : report.results) CHECK(c.residual < 1e-12);
}

TEST_CASE("a tight tolerance propagates to every check") {
    RunOptions options;
    options.model = ModelKind::xxz;
    options.trials = 2;
    options.tol = 0.0;
    int failed = 0;
    for (const auto& c : cmd_verify("dwpf", options).results) {
        CHECK(c.tolerance == 0.0);
        failed += c.pass ? 0 : 1;
    }
    CHECK(failed > 0);
    CHECK(run({"verify", "dwpf", "--model", "xxz", "--trials", "2", "--tol", "0"}).code == 1);
}

TEST_CASE("eval z at one site is the c weight") {
    RunOptions options;
    options.gamma = 0.7;
    options.v = std::vector<Complex>{0.3};
    options.w = std::vector<Complex>{-0.2};
    const auto report = cmd_eval("z", options);
    CHECK(report.all_pass());
    for (const auto& c : report.results)
        for (const auto& value : c.values) CHECK(std::abs(value - std::sinh(0.7)) < 1e-14);
}

TEST_CASE("eval with solved Bethe roots") {
    RunOptions options;
    options.big_n = 1;
    options.m = 3;
    options.solve_bethe = true;
    const auto slavnov = cmd_eval("slavnov", options);
    CHECK(slavnov.all_pass());
    for (const auto& c : slavnov.results)
        if (c.name == "slavnov/slavnov-oracle") CHECK(c.residual < 1e-9);

    options.model = ModelKind::felderhof;
    options.big_n = 2;
    options.m = 4;
    CHECK(cmd_eval("sn", options).all_pass());
    options.solve_bethe = false;
    CHECK_THROWS_AS(cmd_eval("sn", options), UsageError);
    CHECK_THROWS_AS(cmd_eval("slavnov", options), UsageError);

    RunOptions z;
    z.model = ModelKind::felderhof;
    z.big_n = 2;
    const auto report = cmd_eval("z", z);
    bool saw = false;
    for (const auto& c : report.results)
        if (c.name == "z/enumerate-factorized") {
            saw = true;
            CHECK(c.residual < 1e-10);
        }
    CHECK(saw);
}

TEST_CASE("bethe command") {
    RunOptions options;
    options.gamma = 0.5;
    options.big_n = 1;
    options.w = std::vector<Complex>{0.0};
    const auto report = cmd_bethe(options);
    REQUIRE(report.results.size() == 1);
    const Complex root = report.results[0].values[0];
    CHECK(std::abs(root - Complex(-0.25, kPi / 2)) < 1e-12);

    RunOptions ff;
    ff.model = ModelKind::felderhof;
    ff.m = 4;
    ff.big_n = 2;
    ff.check_eigenvector = true;
    const auto roots = cmd_bethe(ff);
    int defects = 0, eigen = 0;
    for (const auto& c : roots.results) {
        CHECK(c.pass);
        if (c.name.find("eigenvector") != std::string::npos)
            ++eigen;
        else
            ++defects;
    }
    CHECK(defects == 4);
    CHECK(eigen == 2);
}

TEST_CASE("exit codes") {
    CHECK(run({"verify", "nonsense"}).code == 2);
    CHECK(run({"verify", "ybe", "--trials", "x"}).code == 2);
    CHECK(run({"verify", "ybe", "--model", "xyz"}).code == 2);
    CHECK(run({"eval", "z", "--v", "0.1+"}).code == 2);
    CHECK(run({"eval", "z", "--v", "0.1", "--w", "0.1,0.2"}).code == 2);
    CHECK(run({"verify", "crossing", "--model", "felderhof"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"--help"}).code == 0);
    const auto degenerate = run({"eval", "z", "--v", "0.1,0.1", "--w", "0.2,0.3"});
    CHECK(degenerate.code == 1);
    CHECK(degenerate.err.find("DegenerateNodes") != std::string::npos);
    CHECK(run({"eval", "z", "--v", "-0.3i,1-i", "--w", "i,0.2+0.3i", "--gamma", "0.5"}).code == 0);
}

TEST_CASE("reports do not depend on the thread count") {
    RunOptions one;
    one.seed = 3;
    one.trials = 4;
    RunOptions four = one;
    four.threads = 4;
    for (const char* suite : {"ybe", "commutation", "dwpf", "scalar"})
        CHECK(cmd_verify(suite, one).to_json() == cmd_verify(suite, four).to_json());
}
