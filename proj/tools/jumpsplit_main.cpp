// jumpsplit CLI: batch runner, bounds calculator, Monte-Carlo oracle, and
// path dump, all through the shared C API.
//
//   jumpsplit run    --config cfg.json [--out DIR]
//   jumpsplit bounds --config cfg.json
//   jumpsplit oracle --config cfg.json
//   jumpsplit paths  --config cfg.json [--out FILE]
//
// Exit code 0 iff every requested operation completed; partial sweep
// failures exit nonzero after writing the completed rows.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "jumpsplit.h"

namespace {

// Read a whole file; returns false (with a message on stderr) on failure.
bool slurp(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot open config file '" << path << "'\n";
        return false;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

int report_failure(const char* what, js_status status) {
    std::cerr << "error: " << what << " failed (status " << static_cast<int>(status)
              << "): " << js_last_error() << "\n";
    return 1;
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
    std::string config;
    if (!slurp(config_path, config)) return 1;
    char* csv = nullptr;
    const js_status st =
        js_run_sweep(config.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(), &csv);
    if (csv != nullptr) {
        std::cout << csv;
        js_string_free(csv);
    }
    if (st == JS_PARTIAL) {
        std::cerr << "warning: some runs failed: " << js_last_error() << "\n";
        return 1;
    }
    if (st != JS_OK) return report_failure("run", st);
    return 0;
}

int cmd_text(const char* what, js_status (*fn)(const char*, char**),
             const std::string& config_path, const std::string& out_file) {
    std::string config;
    if (!slurp(config_path, config)) return 1;
    char* text = nullptr;
    const js_status st = fn(config.c_str(), &text);
    if (st != JS_OK) {
        if (text != nullptr) js_string_free(text);
        return report_failure(what, st);
    }
    int rc = 0;
    if (out_file.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_file, std::ios::binary);
        if (out) out << text;
        if (!out) {
            std::cerr << "error: cannot write '" << out_file << "'\n";
            rc = 1;
        }
    }
    js_string_free(text);
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(js_version()) +
                 " — deep splitting solver for semilinear PDEs/PIDEs with jumps"};
    app.require_subcommand(1);

    std::string run_config, run_out;
    auto* run = app.add_subcommand("run", "Execute a benchmark sweep (CSV + JSON artifacts)");
    run->add_option("--config", run_config, "Run config (JSON)")->required();
    run->add_option("--out", run_out, "Output directory (default: config's output path)");

    std::string bounds_config;
    auto* bounds = app.add_subcommand("bounds", "Evaluate the explicit error bounds");
    bounds->add_option("--config", bounds_config, "Bounds config (JSON)")->required();

    std::string oracle_config;
    auto* oracle = app.add_subcommand("oracle", "Monte-Carlo reference estimate");
    oracle->add_option("--config", oracle_config, "Oracle config (JSON)")->required();

    std::string paths_config, paths_out;
    auto* paths = app.add_subcommand("paths", "Dump simulated paths as CSV (d <= 16)");
    paths->add_option("--config", paths_config, "Paths config (JSON)")->required();
    paths->add_option("--out", paths_out, "Output file (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(run_config, run_out);
    if (bounds->parsed()) return cmd_text("bounds", js_bounds_json, bounds_config, "");
    if (oracle->parsed()) return cmd_text("oracle", js_oracle_json, oracle_config, "");
    if (paths->parsed()) return cmd_text("paths", js_paths_csv, paths_config, paths_out);
    return 1;  // unreachable: require_subcommand(1)
}
