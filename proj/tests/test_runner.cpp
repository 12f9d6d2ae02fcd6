#define DOCTEST_CONFIG_SUPER_FAST_ASSERTS
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "jumpsplit/errors.hpp"
#include "jumpsplit/models.hpp"
#include "jumpsplit/oracle.hpp"
#include "jumpsplit/rng.hpp"
#include "jumpsplit/runner.hpp"
#include "jumpsplit/splitting.hpp"

using namespace jumpsplit;
using nlohmann::json;

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    return out;
}

// The canonical small sweep used across several cases below.
const char* kTinySweep = R"({
  "model": {"preset": "bs_default"},
  "dims": [1, 2],
  "method": "both",
  "euler": {"N": 3},
  "net": {"K": 8},
  "train": {"J": 40, "epochs": 30},
  "runs": 2,
  "seed": 5,
  "output": "unused"
})";

std::string strip_runtime_column(const std::string& csv) {
    std::string out;
    for (const auto& line : split_lines(csv)) {
        const auto fields = split_fields(line);
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i == 4) continue; // mean_runtime_s is wall-clock noise
            if (!out.empty() && out.back() != '\n') out += ',';
            out += fields[i];
        }
        out += '\n';
    }
    return out;
}

} // namespace

TEST_SUITE("runner") {

TEST_CASE("parse_run_config: full document") {
    const RunConfig cfg = parse_run_config(R"({
      "model": {"preset": "merton_default", "mu0": 0.02, "lambda": 0.4},
      "dims": [1, 10, 100],
      "method": "random",
      "euler": {"N": 6, "delta": 0.2, "m_comp": 33},
      "net": {"K": 17, "activation": "tanh"},
      "train": {"J": 44, "epochs": 55,
                "lr": {"rates": [0.1, 0.01], "cutoffs": [10]}},
      "runs": 3,
      "seed": 9,
      "output": "outdir"
    })");
    CHECK(cfg.preset == "merton_default");
    CHECK(cfg.overrides.at("mu0") == 0.02);
    CHECK(cfg.overrides.at("lambda") == 0.4);
    CHECK(cfg.dims == std::vector<int>{1, 10, 100});
    REQUIRE(cfg.methods.size() == 1);
    CHECK(cfg.methods[0] == SplittingConfig::Method::random);
    CHECK(cfg.euler.N == 6);
    CHECK(cfg.euler.delta == 0.2);
    CHECK(cfg.euler.m_comp == 33);
    CHECK(cfg.euler.J == 44);
    CHECK(cfg.K == 17);
    CHECK(cfg.sgd.epochs == 55);
    CHECK(cfg.sgd.schedule.rates == std::vector<double>{0.1, 0.01});
    CHECK(cfg.sgd.schedule.cutoffs == std::vector<long long>{10});
    CHECK(cfg.runs == 3);
    CHECK(cfg.seed == 9);
    CHECK(cfg.output == "outdir");
}

TEST_CASE("parse_run_config: defaults for everything optional") {
    const RunConfig cfg =
        parse_run_config(R"({"model": {"preset": "bs_default"}, "dims": [2]})");
    CHECK(cfg.preset == "bs_default");
    CHECK(cfg.overrides.empty());
    REQUIRE(cfg.methods.size() == 2); // "both"
    CHECK(cfg.methods[0] == SplittingConfig::Method::random);
    CHECK(cfg.methods[1] == SplittingConfig::Method::deterministic);
    CHECK(cfg.euler.N == 12);
    CHECK(cfg.euler.delta == 0.1);
    CHECK(cfg.euler.m_comp == 200);
    CHECK(cfg.euler.J == 500);
    CHECK(cfg.K == 0); // min(d, 2000) policy
    CHECK(cfg.sgd.epochs == 2000);
    CHECK(cfg.sgd.schedule.rates == std::vector<double>{1e-2, 1e-3, 1e-4});
    CHECK(cfg.sgd.schedule.cutoffs == std::vector<long long>{500, 1000});
    CHECK(cfg.runs == 10);
    CHECK(cfg.seed == 1);
    CHECK(cfg.output == "results");

    const RunConfig k_str = parse_run_config(
        R"js({"model": {"preset": "bs_default"}, "dims": [1],
              "net": {"K": "min(d,2000)"}})js");
    CHECK(k_str.K == 0);
}

TEST_CASE("parse_run_config: rejections name the offending field") {
    const auto bad = [](const char* text, const char* needle) {
        CHECK_THROWS_WITH_AS((void)parse_run_config(text), doctest::Contains(needle),
                             ConfigError);
    };
    bad(R"({"model": {"preset": "bs_default"}, "dims": [1], "modle": 1})", "modle");
    bad(R"({"dims": [1]})", "model");
    bad(R"({"model": {"preset": "nope"}, "dims": [1]})", "unknown preset");
    bad(R"({"model": {"preset": "bs_default", "vol": "x"}, "dims": [1]})", "vol");
    bad(R"({"model": {"preset": "bs_default"}})", "dims");
    bad(R"({"model": {"preset": "bs_default"}, "dims": []})", "dims");
    bad(R"({"model": {"preset": "bs_default"}, "dims": [0]})", "dims");
    bad(R"({"model": {"preset": "bs_default"}, "dims": [1], "method": "sgd"})",
        "random | deterministic | both");
    bad(R"({"model": {"preset": "bs_default"}, "dims": [1],
            "euler": {"steps": 3}})",
        "steps");
    bad(R"({"model": {"preset": "bs_default"}, "dims": [1], "euler": {"N": 0}})",
        "euler.N");
    bad(R"({"model": {"preset": "bs_default"}, "dims": [1],
            "euler": {"m_comp": 0}})",
        "m_comp");
    bad(R"({"model": {"preset": "bs_default"}, "dims": [1], "net": {"K": 0}})",
        "net.K");
    bad(R"({"model": {"preset": "bs_default"}, "dims": [1],
            "net": {"activation": "relu"}})",
        "tanh");
    bad(R"({"model": {"preset": "bs_default"}, "dims": [1], "train": {"J": 1}})",
        "train.J");
    bad(R"({"model": {"preset": "bs_default"}, "dims": [1],
            "train": {"epochs": 0}})",
        "epochs");
    bad(R"({"model": {"preset": "bs_default"}, "dims": [1],
            "train": {"lr": {"rates": []}}})",
        "rates");
    bad(R"({"model": {"preset": "bs_default"}, "dims": [1],
            "train": {"lr": {"rates": [0.1, 0.01], "cutoffs": [5, 2]}}})",
        "increasing");
    bad(R"({"model": {"preset": "bs_default"}, "dims": [1], "runs": 0})", "runs");
    bad(R"({"model": {"preset": "bs_default"}, "dims": [1], "seed": -1})", "seed");
    bad(R"([1, 2, 3])", "object");
    CHECK_THROWS_AS((void)parse_run_config("{"), ConfigError);
}

TEST_CASE("parse_solver_config: defaults, full form, rejections") {
    const SplittingConfig def = parse_solver_config("{}");
    CHECK(def.method == SplittingConfig::Method::random);
    CHECK(def.euler.N == 12);
    CHECK(def.euler.J == 500);
    CHECK(def.K == 0);
    CHECK(def.sgd.epochs == 2000);
    CHECK(def.master_seed == 1);
    CHECK(def.truncation_theta == 0.0);

    const SplittingConfig sc = parse_solver_config(R"({
      "method": "deterministic",
      "euler": {"N": 5},
      "net": {"K": 9},
      "train": {"J": 21, "epochs": 13},
      "seed": 77,
      "truncation_theta": 1.5
    })");
    CHECK(sc.method == SplittingConfig::Method::deterministic);
    CHECK(sc.euler.N == 5);
    CHECK(sc.euler.J == 21);
    CHECK(sc.K == 9);
    CHECK(sc.sgd.epochs == 13);
    CHECK(sc.master_seed == 77);
    CHECK(sc.truncation_theta == 1.5);

    // "both" is a sweep notion; a single solve must name one method.
    CHECK_THROWS_WITH_AS((void)parse_solver_config(R"({"method": "both"})"),
                         doctest::Contains("random | deterministic"), ConfigError);
    CHECK_THROWS_WITH_AS((void)parse_solver_config(R"({"dims": [1]})"),
                         doctest::Contains("dims"), ConfigError);
}

TEST_CASE("run_seed_for: lane derivation, preset offsets, distinctness") {
    const std::uint64_t master = 99;
    CHECK(run_seed_for(master, "bs_default", 10, 3) ==
          derive_seed(master, Lane{LANE_RUN_SEED, 10u, 3u}));
    CHECK(run_seed_for(master, "merton_default", 10, 3) ==
          derive_seed(master, Lane{LANE_RUN_SEED, 1000010u, 3u}));
    CHECK(run_seed_for(master, "vasicek_cc", 1, 0) ==
          derive_seed(master, Lane{LANE_RUN_SEED, 2000001u, 0u}));
    CHECK(run_seed_for(master, "expvg_cc", 2, 7) ==
          derive_seed(master, Lane{LANE_RUN_SEED, 3000002u, 7u}));

    CHECK(run_seed_for(master, "bs_default", 1, 0) !=
          run_seed_for(master, "bs_default", 1, 1));
    CHECK(run_seed_for(master, "bs_default", 1, 0) !=
          run_seed_for(master, "bs_default", 2, 0));
    CHECK(run_seed_for(master, "bs_default", 1, 0) !=
          run_seed_for(master, "merton_default", 1, 0));
    CHECK(run_seed_for(master, "bs_default", 1, 0) !=
          run_seed_for(master + 1, "bs_default", 1, 0));
}

TEST_CASE("run_sweep: record layout, seeds, determinism") {
    const RunConfig cfg = parse_run_config(kTinySweep);
    const SweepResult res = run_sweep(cfg);
    CHECK(res.all_ok);
    REQUIRE(res.records.size() == 8); // 2 dims x 2 methods x 2 runs

    std::size_t i = 0;
    for (int d : {1, 2}) {
        for (const auto method :
             {SplittingConfig::Method::random, SplittingConfig::Method::deterministic}) {
            for (int r = 0; r < 2; ++r, ++i) {
                const RunRecord& rec = res.records[i];
                CHECK(rec.preset == "bs_default");
                CHECK(rec.d == d);
                CHECK(rec.method == method);
                CHECK(rec.run_index == r);
                CHECK(rec.run_seed == run_seed_for(cfg.seed, "bs_default", d, r));
                CHECK(rec.ok);
                CHECK(rec.error.empty());
                CHECK(std::isfinite(rec.u0));
                CHECK(rec.evals > 0);
                CHECK(!rec.steps.empty());
            }
        }
    }
    // Same-dimension same-seed runs of the two methods start from the same
    // seed but are distinct estimators.
    CHECK(res.records[0].run_seed == res.records[2].run_seed);

    const SweepResult res2 = run_sweep(cfg);
    REQUIRE(res2.records.size() == res.records.size());
    for (std::size_t k = 0; k < res.records.size(); ++k) {
        CHECK(res2.records[k].u0 == res.records[k].u0);
        CHECK(res2.records[k].evals == res.records[k].evals);
    }
    CHECK(strip_runtime_column(sweep_csv(cfg, res)) ==
          strip_runtime_column(sweep_csv(cfg, res2)));
}

TEST_CASE("sweep_csv: header, one row per cell, aggregates match the records") {
    const RunConfig cfg = parse_run_config(kTinySweep);
    const SweepResult res = run_sweep(cfg);
    const auto lines = split_lines(sweep_csv(cfg, res));
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "d,method,mean_u0,std_u0,mean_runtime_s,mean_evals");

    std::size_t row = 1;
    for (int d : {1, 2}) {
        for (const auto method :
             {SplittingConfig::Method::random, SplittingConfig::Method::deterministic}) {
            const auto fields = split_fields(lines[row++]);
            REQUIRE(fields.size() == 6);
            CHECK(fields[0] == std::to_string(d));
            CHECK(fields[1] == method_name(method));

            double sum = 0, sumsq = 0, evals = 0;
            for (const auto& rec : res.records) {
                if (rec.d != d || rec.method != method) continue;
                sum += rec.u0;
                sumsq += rec.u0 * rec.u0;
                evals += static_cast<double>(rec.evals);
            }
            const double mean = sum / 2.0;
            const double sd = std::sqrt(std::max(0.0, sumsq - 2.0 * mean * mean));
            CHECK(std::stod(fields[2]) == doctest::Approx(mean).epsilon(1e-11));
            CHECK(std::stod(fields[3]) == doctest::Approx(sd).epsilon(1e-9));
            CHECK(std::stod(fields[5]) == doctest::Approx(evals / 2.0).epsilon(1e-11));
        }
    }
    CHECK(method_name(SplittingConfig::Method::random) == std::string("random"));
    CHECK(method_name(SplittingConfig::Method::deterministic) ==
          std::string("deterministic"));

    // A single run per cell reports zero spread.
    RunConfig one = cfg;
    one.runs = 1;
    one.dims = {1};
    one.methods = {SplittingConfig::Method::random};
    const auto one_lines = split_lines(sweep_csv(one, run_sweep(one)));
    REQUIRE(one_lines.size() == 2);
    CHECK(std::stod(split_fields(one_lines[1])[3]) == 0.0);
}

TEST_CASE("run_sweep: solver failures are recorded, not fatal") {
    // delta = 0.99 starves the Merton rejection sampler, so every run fails
    // inside the compensator draw.
    const RunConfig cfg = parse_run_config(R"({
      "model": {"preset": "merton_default"},
      "dims": [1],
      "method": "random",
      "euler": {"N": 2, "delta": 0.99, "m_comp": 3},
      "net": {"K": 4},
      "train": {"J": 10},
      "runs": 2,
      "seed": 1
    })");
    const SweepResult res = run_sweep(cfg);
    CHECK(!res.all_ok);
    REQUIRE(res.records.size() == 2);
    for (const auto& rec : res.records) {
        CHECK(!rec.ok);
        CHECK(rec.error.find("merton jump sampler") != std::string::npos);
    }
    CHECK(sweep_csv(cfg, res) == "d,method,mean_u0,std_u0,mean_runtime_s,mean_evals\n");

    const json doc = json::parse(sweep_diagnostics_json(cfg, res));
    CHECK(doc.at("all_ok") == false);
    REQUIRE(doc.at("runs").size() == 2);
    CHECK(doc.at("runs")[0].at("ok") == false);
    CHECK(!doc.at("runs")[0].at("error").get<std::string>().empty());
    CHECK(!doc.at("runs")[0].contains("u0"));
}

TEST_CASE("sweep_diagnostics_json and write_sweep_outputs") {
    RunConfig cfg = parse_run_config(kTinySweep);
    cfg.dims = {1};
    cfg.methods = {SplittingConfig::Method::random};
    const SweepResult res = run_sweep(cfg);

    const json doc = json::parse(sweep_diagnostics_json(cfg, res));
    CHECK(doc.at("preset") == "bs_default");
    CHECK(doc.at("dims") == json::array({1}));
    CHECK(doc.at("runs_per_cell") == 2);
    CHECK(doc.at("seed") == 5);
    CHECK(doc.at("all_ok") == true);
    REQUIRE(doc.at("runs").size() == 2);
    const json& r0 = doc.at("runs")[0];
    CHECK(r0.at("method") == "random");
    CHECK(r0.at("run") == 0);
    CHECK(r0.at("seed").get<std::uint64_t>() == res.records[0].run_seed);
    CHECK(r0.at("u0").get<double>() == res.records[0].u0);
    CHECK(r0.at("evals").get<long long>() == res.records[0].evals);
    REQUIRE(!r0.at("steps").empty());
    CHECK(r0.at("steps")[0].contains("n"));
    CHECK(r0.at("steps")[0].contains("mse"));

    const std::string dir = "/tmp/jumpsplit_runner_out_test";
    std::filesystem::remove_all(dir);
    cfg.output = dir;
    write_sweep_outputs(cfg, res, ""); // empty out_dir falls back to config.output
    std::ifstream csv(dir + "/results.csv", std::ios::binary);
    REQUIRE(csv.good());
    std::ostringstream csv_buf;
    csv_buf << csv.rdbuf();
    CHECK(csv_buf.str() == sweep_csv(cfg, res));
    std::ifstream js(dir + "/runs.json", std::ios::binary);
    REQUIRE(js.good());
    const json reread = json::parse(js);
    CHECK(reread.at("all_ok") == true);
    std::filesystem::remove_all(dir);
}

TEST_CASE("solution_diagnostics_json mirrors the solution") {
    const PideProblem p = make_preset("bs_default", 1, {});
    SplittingConfig sc;
    sc.euler.N = 3;
    sc.euler.J = 40;
    sc.K = 8;
    sc.master_seed = 4;
    const SplittingSolution sol = solve_random(p, sc);
    const json doc = json::parse(solution_diagnostics_json(sol));
    CHECK(doc.at("method") == "random");
    CHECK(doc.at("d") == 1);
    CHECK(doc.at("N") == 3);
    CHECK(doc.at("u0").get<double>() == sol.u0);
    CHECK(doc.at("evals").get<long long>() == sol.eval_count);
    CHECK(doc.at("steps").size() == sol.steps.size());
}

TEST_CASE("bounds_report: json and csv front-ends") {
    const char* request = R"({
      "theory": {"L": 0.001, "L1": 0.001, "L2": 0.001, "C_eta": 0.001,
                 "T": 0.25, "p": 1, "q": 4, "d": 1,
                 "xi_second_moment": 0, "xi_q_moment": 1},
      "budget": {"N": 16, "delta": 0.25, "m_comp": 256, "K": 12, "J": 4096,
                 "theta": 2},
      "select": {"epsilon_target": 0.5, "K": 10}
    })";
    const json doc = json::parse(bounds_report(request));
    CHECK(doc.at("constants").at("c").get<double>() ==
          doctest::Approx(0.2552771647104747).epsilon(1e-12));
    CHECK(doc.at("constants").at("C0").get<double>() ==
          doctest::Approx(84491.42107362302).epsilon(1e-12));
    const json& b = doc.at("budget");
    CHECK(b.at("total").get<double>() ==
          doctest::Approx(b.at("tail").get<double>() + b.at("discr").get<double>() +
                          b.at("gen").get<double>() + b.at("uat").get<double>())
              .epsilon(1e-15));
    CHECK(doc.at("selected").at("theta").get<double>() == 1.0);
    CHECK(doc.at("selected").at("N").get<std::int64_t>() == 524288);
    CHECK(doc.at("selected").at("delta").get<double>() == 0.03125);
    CHECK(doc.at("selected").at("m_comp").get<std::int64_t>() == 536870912);
    CHECK(doc.at("selected").at("J").get<std::int64_t>() == 536870912);

    json csv_req = json::parse(request);
    csv_req["format"] = "csv";
    const std::string csv = bounds_report(csv_req.dump());
    const auto lines = split_lines(csv);
    REQUIRE(lines.size() == 1 + 8 + 5 + 5);
    CHECK(lines[0] == "name,value");
    bool saw_c0 = false, saw_theta = false;
    for (const auto& line : lines) {
        if (line.rfind("C0,", 0) == 0) saw_c0 = true;
        if (line.rfind("theta,", 0) == 0) saw_theta = true;
    }
    CHECK(saw_c0);
    CHECK(saw_theta);

    CHECK_THROWS_WITH_AS((void)bounds_report(R"({"format": "json"})"),
                         doctest::Contains("theory"), ConfigError);
    json bad = json::parse(request);
    bad["format"] = "xml";
    CHECK_THROWS_WITH_AS((void)bounds_report(bad.dump()),
                         doctest::Contains("json | csv"), ConfigError);
    json extra = json::parse(request);
    extra["theory"]["M"] = 3;
    CHECK_THROWS_WITH_AS((void)bounds_report(extra.dump()), doctest::Contains("\"M\""),
                         ConfigError);
}

TEST_CASE("oracle_report: both modes agree with direct calls") {
    OracleConfig oc;
    oc.samples = 500;
    oc.grid_N = 6;
    oc.seed = 3;
    const json mc = json::parse(oracle_report(R"({
      "model": {"preset": "bs_default", "x0": 77},
      "d": 1, "mode": "mc_terminal", "samples": 500, "grid_N": 6, "seed": 3
    })"));
    const McResult direct =
        mc_terminal(make_preset("bs_default", 1, {{"x0", 77.0}}), oc);
    CHECK(mc.at("estimate").get<double>() == direct.mean);
    CHECK(mc.at("stderr").get<double>() == direct.std_error);
    CHECK(mc.at("evals").get<long long>() == direct.evals);
    CHECK(!mc.contains("iterates"));

    oc.samples = 400;
    oc.picard_iters = 2;
    const json pic = json::parse(oracle_report(R"({
      "model": {"preset": "bs_default"},
      "d": 1, "mode": "picard", "samples": 400, "picard_iters": 2,
      "grid_N": 6, "seed": 3
    })"));
    const PicardResult pr = picard_mc(make_preset("bs_default", 1, {}), oc);
    CHECK(pic.at("estimate").get<double>() == pr.u0_estimate);
    REQUIRE(pic.at("iterates").size() == 3);
    CHECK(pic.at("iterates")[2].get<double>() == pr.iterates[2]);

    const auto bad = [](const char* text, const char* needle) {
        CHECK_THROWS_WITH_AS((void)oracle_report(text), doctest::Contains(needle),
                             ConfigError);
    };
    bad(R"({"d": 1})", "model");
    bad(R"({"model": {"preset": "bs_default"}, "mode": "exact"})",
        "mc_terminal | picard");
    bad(R"({"model": {"preset": "bs_default"}, "d": 0})", "d");
    bad(R"({"model": {"preset": "bs_default"}, "budget": 1})", "budget");
}

TEST_CASE("paths_csv: dump equals the simulated batch; d is capped") {
    const json doc = json::parse(R"({
      "model": {"preset": "bs_default"},
      "d": 2, "euler": {"N": 3}, "J": 4, "seed": 5
    })");
    const std::string csv = paths_csv(doc.dump());
    const auto lines = split_lines(csv);
    REQUIRE(lines.size() == 1 + 4 * 4);
    CHECK(lines[0] == "j,k,x_1,x_2");

    EulerConfig euler;
    euler.N = 3;
    euler.J = 4;
    const PathBatch batch = simulate_paths(make_preset("bs_default", 2, {}), euler, 5);
    std::size_t row = 1;
    for (long long j = 0; j < 4; ++j) {
        for (int k = 0; k <= 3; ++k, ++row) {
            const auto fields = split_fields(lines[row]);
            REQUIRE(fields.size() == 4);
            CHECK(fields[0] == std::to_string(j));
            CHECK(fields[1] == std::to_string(k));
            const double* x = batch.state(j, k);
            CHECK(std::stod(fields[2]) == doctest::Approx(x[0]).epsilon(1e-11));
            CHECK(std::stod(fields[3]) == doctest::Approx(x[1]).epsilon(1e-11));
        }
    }

    const auto bad = [](const char* text, const char* needle) {
        CHECK_THROWS_WITH_AS((void)paths_csv(text), doctest::Contains(needle),
                             ConfigError);
    };
    bad(R"({"model": {"preset": "bs_default"}, "d": 17})", "d <= 16");
    bad(R"({"model": {"preset": "bs_default"}, "J": 0})", "J");
    bad(R"({"model": {"preset": "bs_default"}, "joints": 2})", "joints");
}

} // TEST_SUITE
