// Command-line front end: parse an operator-tuple spec, run the hypothesis
// checks and the decomposition pipeline, emit a machine- or human-readable
// report.
//
// Exit codes: 0 run completed with hypotheses Pass, 2 run completed with
// hypotheses Fail (report still emitted), 1 operational error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wold/report.hpp"

namespace {

std::string read_spec_text(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) wold::fail("IoError", "cannot open spec file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_action(const std::string& action, const std::string& spec_path,
               const wold::RunOptions& base) {
    wold::TupleSpec spec = wold::parse_spec(read_spec_text(spec_path));
    wold::RunOptions opts = base;
    opts.action = action;
    wold::RunResult result = wold::run_spec(spec, opts);
    std::cout << result.report;
    return result.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wold decomposition toolkit for tuples of structured isometries"};
    app.require_subcommand(1);

    std::string spec_path;
    wold::RunOptions opts;
    int depth = -1;
    int max_power = -1;
    double tol = -1.0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--spec", spec_path, "spec file path, or '-' for stdin")->required();
        sub->add_option("--depth", depth, "override all window depths");
        sub->add_option("--max-power", max_power, "override the decomposition power bound");
        sub->add_option("--tol", tol, "override the tolerance");
        sub->add_option("--format", opts.format, "report format: json or text")
            ->check(CLI::IsMember({"json", "text"}));
        sub->add_flag("--interior-only", opts.interior_only,
                      "report interior-trimmed block dimensions only");
    };

    CLI::App* check = app.add_subcommand("check", "hypothesis checks only");
    CLI::App* decompose = app.add_subcommand("decompose", "full decomposition pipeline");
    CLI::App* verify = app.add_subcommand("verify", "decomposition plus identity suite");
    add_common(check);
    add_common(decompose);
    add_common(verify);

    CLI11_PARSE(app, argc, argv);

    opts.depth_override = depth;
    opts.max_power_override = max_power;
    opts.tol_override = tol;

    std::string action = check->parsed() ? "check" : decompose->parsed() ? "decompose" : "verify";
    try {
        return run_action(action, spec_path, opts);
    } catch (const wold::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
