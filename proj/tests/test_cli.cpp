#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wold/report.hpp"

using namespace wold;

namespace {

std::string fixture_path(const std::string& name) {
    return std::string(WOLD_FIXTURE_DIR) + "/" + name;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CliRun {
    int exit_code = -1;
    std::string output;
};

CliRun run_cli(const std::string& args, const std::string& tag) {
    std::string out_path = "/tmp/wold_cli_test_" + tag + ".out";
    std::string cmd =
        std::string(WOLD_CLI_BIN) + " " + args + " > " + out_path + " 2>/dev/null";
    int raw = std::system(cmd.c_str());
    CliRun r;
    r.exit_code = WEXITSTATUS(raw);
    std::ifstream in(out_path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    r.output = buf.str();
    return r;
}

} // namespace

TEST_CASE("minimal spec parses") {
    auto spec = parse_spec(read_file(fixture_path("minimal.json")));
    CHECK(spec.operators.size() == 1);
    CHECK(spec.depths == std::vector<std::vector<int>>{{8}});
    CHECK(spec.cap == 1);
}

TEST_CASE("non-unimodular weights are rejected at parse time") {
    CHECK_THROWS_WITH_AS(parse_spec(read_file(fixture_path("bad_weight.json"))),
                         doctest::Contains("ParseError"), Error);
    try {
        parse_spec(read_file(fixture_path("bad_weight.json")));
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("weights.value") != std::string::npos);
    }
}

TEST_CASE("unknown operator kinds name the supported set") {
    std::string text = R"({
      "lattice": {"blocks": [{"axes": ["half"]}]},
      "operators": [{"op": {"kind": "mystery", "axis": 0}}],
      "window": {"depth": 4}
    })";
    try {
        parse_spec(text);
        FAIL("expected ParseError");
    } catch (const Error& e) {
        std::string msg = e.what();
        CHECK(msg.find("unknown operator kind") != std::string::npos);
        CHECK(msg.find("unilateral_shift") != std::string::npos);
    }
}

TEST_CASE("the tensor-pair fixture parses into the expected operator shapes") {
    auto spec = parse_spec(read_file(fixture_path("diag_shift_pair.json")));
    REQUIRE(spec.operators.size() == 2);
    CHECK(spec.operators[0].kind() == StructuredOperator::Kind::TensorAssign);
    REQUIRE(spec.operators[0].children().size() == 2);
    CHECK(spec.operators[0].children()[0].kind() == StructuredOperator::Kind::DiagonalUnitary);
    CHECK(spec.operators[0].children()[1].kind() == StructuredOperator::Kind::UnilateralShift);
    CHECK(spec.operators[1].kind() == StructuredOperator::Kind::UnilateralShift);
    CHECK(spec.operators[1].axis() == 0);
}

TEST_CASE("spec serialization round-trips") {
    for (const char* name :
         {"minimal.json", "weighted_shift_pair.json", "diag_shift_pair.json"}) {
        auto spec = parse_spec(read_file(fixture_path(name)));
        std::string once = serialize_spec(spec);
        auto reparsed = parse_spec(once);
        std::string twice = serialize_spec(reparsed);
        CHECK(once == twice);
    }
}

TEST_CASE("validation bounds on tol and depths") {
    std::string base = read_file(fixture_path("minimal.json"));
    auto with = [&](const std::string& key, const std::string& value) {
        auto doc = nlohmann::json::parse(base);
        doc[key] = nlohmann::json::parse(value);
        return doc.dump();
    };
    CHECK_THROWS_WITH_AS(parse_spec(with("tol", "0.5")), doctest::Contains("ParseError"), Error);
    CHECK_THROWS_WITH_AS(parse_spec(with("tol", "0")), doctest::Contains("ParseError"), Error);
    CHECK_THROWS_WITH_AS(parse_spec(with("window", "{\"depth\":0}")),
                         doctest::Contains("ParseError"), Error);
    CHECK_THROWS_WITH_AS(parse_spec(with("max_power", "0")), doctest::Contains("ParseError"),
                         Error);
}

TEST_CASE("run_spec is deterministic modulo the timing field") {
    auto spec = parse_spec(read_file(fixture_path("diag_shift_pair.json")));
    RunOptions opts;
    opts.action = "decompose";
    opts.with_timing = false;
    auto a = run_spec(spec, opts);
    auto b = run_spec(spec, opts);
    CHECK(a.exit_code == 0);
    CHECK(a.report == b.report);
}

TEST_CASE("report JSON parses and carries the pipeline sections") {
    auto spec = parse_spec(read_file(fixture_path("weighted_shift_pair.json")));
    RunOptions opts;
    opts.action = "decompose";
    auto r = run_spec(spec, opts);
    CHECK(r.exit_code == 2);
    auto doc = nlohmann::json::parse(r.report);
    CHECK(doc["hypotheses"]["plain_pass"] == true);
    CHECK(doc["hypotheses"]["starred_pass"] == false);
    CHECK(doc["hypotheses"]["pairs"][0].contains("witness"));
    CHECK(doc.contains("decomposition"));
    CHECK(doc.contains("verification"));
    CHECK(doc["warnings"].is_array());
    // All floating values round-trip at full precision.
    double gap = doc["hypotheses"]["pairs"][0]["worst_starred_gap"].get<double>();
    CHECK(gap >= 0.5);
}

TEST_CASE("text format renders a summary") {
    auto spec = parse_spec(read_file(fixture_path("diag_shift_pair.json")));
    RunOptions opts;
    opts.action = "decompose";
    opts.format = "text";
    auto r = run_spec(spec, opts);
    CHECK(r.report.find("hypotheses: plain PASS, starred PASS") != std::string::npos);
    CHECK(r.report.find("blocks") != std::string::npos);
}

TEST_CASE("cli binary honors the exit-code contract") {
    auto pass = run_cli("check --spec " + fixture_path("diag_shift_pair.json"), "pass");
    CHECK(pass.exit_code == 0);
    CHECK_FALSE(pass.output.empty());

    auto fail_run = run_cli("check --spec " + fixture_path("weighted_shift_pair.json"), "fail");
    CHECK(fail_run.exit_code == 2);
    CHECK_FALSE(fail_run.output.empty()); // report still emitted

    auto err = run_cli("check --spec " + fixture_path("bad_weight.json"), "err");
    CHECK(err.exit_code == 1);

    auto missing = run_cli("check --spec /nonexistent/spec.json", "missing");
    CHECK(missing.exit_code == 1);
}

TEST_CASE("cli depth and format overrides work") {
    auto r = run_cli("decompose --spec " + fixture_path("diag_shift_pair.json") +
                         " --depth 4 --format text",
                     "text");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("hypotheses: plain PASS") != std::string::npos);
}

TEST_CASE("interior-only reports drop the full-window block dimensions") {
    auto r = run_cli("decompose --spec " + fixture_path("diag_shift_pair.json") +
                         " --interior-only",
                     "interior");
    REQUIRE(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.output);
    for (const auto& blk : doc["decomposition"]["blocks"]) {
        CHECK_FALSE(blk.contains("dim"));
        CHECK(blk.contains("interior_dim"));
    }
}

TEST_CASE("three-operator fixture decomposes into eight nonzero blocks") {
    auto r = run_cli("decompose --spec " + fixture_path("three_op_blocks.json") +
                         " --depth 3 --max-power 1",
                     "three");
    REQUIRE(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.output);
    auto blocks = doc["decomposition"]["blocks"];
    REQUIRE(blocks.size() == 8);
    // Every subset pattern is realized on exactly one lattice block of
    // matching size: half-line axes contribute 4 points, full-line axes 7.
    for (const auto& blk : blocks) {
        unsigned mask = blk["mask"].get<unsigned>();
        int half_axes = __builtin_popcount(mask);
        long long expected = 1;
        for (int a = 0; a < half_axes; ++a) expected *= 4;
        for (int a = half_axes; a < 3; ++a) expected *= 7;
        CHECK(blk["dim"].get<long long>() == expected);
    }
}

TEST_CASE("axis references outside the lattice are parse errors") {
    std::string text = R"({
      "lattice": {"blocks": [{"axes": ["half"]}]},
      "operators": [{"op": {"kind": "unilateral_shift", "axis": 3}}],
      "window": {"depth": 4}
    })";
    CHECK_THROWS_WITH_AS(parse_spec(text), doctest::Contains("ParseError"), Error);
}

TEST_CASE("wold_tuple surfaces GuardTooSmall when the window guard is tight") {
    auto spec = parse_spec(read_file(fixture_path("minimal.json")));
    Window w = Window::uniform(spec.lattice, 8, /*guard=*/2);
    CHECK_THROWS_WITH_AS(wold_tuple(spec.operators, w, 3, spec.tol),
                         doctest::Contains("GuardTooSmall"), Error);
}

TEST_CASE("cli accepts the spec on stdin") {
    std::string out_path = "/tmp/wold_cli_test_stdin.out";
    std::string cmd = std::string("cat ") + fixture_path("minimal.json") + " | " + WOLD_CLI_BIN +
                      " check --spec - > " + out_path + " 2>/dev/null";
    int raw = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(raw) == 0);
}

TEST_CASE("verify subcommand emits the identity suite") {
    auto r = run_cli("verify --spec " + fixture_path("diag_shift_pair.json"), "verify");
    CHECK(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.output);
    CHECK(doc.contains("verification"));
    CHECK_FALSE(doc.contains("decomposition"));
    CHECK(doc["verification"]["wandering"]["flagged"] == false);
}

TEST_CASE("cli reports are byte-identical across runs once timing is dropped") {
    std::string args = "decompose --spec " + fixture_path("diag_shift_pair.json");
    auto a = run_cli(args, "det_a");
    auto b = run_cli(args, "det_b");
    REQUIRE(a.exit_code == 0);
    auto da = nlohmann::json::parse(a.output);
    auto db = nlohmann::json::parse(b.output);
    da.erase("timing_ms");
    db.erase("timing_ms");
    CHECK(da.dump() == db.dump());
}
