#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "error_bounds.hpp"
#include "errors.hpp"
#include "models.hpp"
#include "oracle.hpp"

namespace jumpsplit {

using nlohmann::json;

namespace {

[[noreturn]] void bad_config(const std::string& what) {
    throw ConfigError("config: " + what);
}

void reject_unknown(const json& obj, const std::vector<std::string>& allowed,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            bad_config("unknown key \"" + it.key() + "\" in " + where);
    }
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) bad_config("missing key \"" + key + "\" in " + where);
    if (!obj.at(key).is_number()) bad_config("\"" + where + "." + key + "\" must be a number");
    return obj.at(key).get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback,
                 const std::string& where) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number()) bad_config("\"" + where + "." + key + "\" must be a number");
    return obj.at(key).get<double>();
}

json parse_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) bad_config("not valid JSON");
    if (!j.is_object()) bad_config("top level must be a JSON object");
    return j;
}

// model: {"preset": name, ...numeric overrides...}
void parse_model(const json& m, std::string& preset,
                 std::map<std::string, double>& overrides) {
    if (!m.is_object()) bad_config("\"model\" must be an object");
    if (!m.contains("preset") || !m.at("preset").is_string())
        bad_config("\"model.preset\" must be a preset name string");
    preset = m.at("preset").get<std::string>();
    const auto names = preset_names();
    if (std::find(names.begin(), names.end(), preset) == names.end())
        bad_config("unknown preset \"" + preset + "\" in model.preset");
    for (auto it = m.begin(); it != m.end(); ++it) {
        if (it.key() == "preset") continue;
        if (!it.value().is_number())
            bad_config("model override \"" + it.key() + "\" must be a number");
        overrides[it.key()] = it.value().get<double>();
    }
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

json steps_to_json(const std::vector<StepDiagnostics>& steps) {
    json arr = json::array();
    for (const auto& s : steps) {
        arr.push_back(json{{"n", s.n},
                           {"mse", s.mse},
                           {"ridge_used", s.ridge_used},
                           {"final_loss", s.final_loss},
                           {"wall_s", s.wall_s}});
    }
    return arr;
}

void apply_euler_section(const json& e, EulerConfig& euler) {
    if (!e.is_object()) bad_config("\"euler\" must be an object");
    reject_unknown(e, {"N", "delta", "m_comp"}, "euler");
    euler.N = static_cast<int>(number_or(e, "N", euler.N, "euler"));
    euler.delta = number_or(e, "delta", euler.delta, "euler");
    euler.m_comp = static_cast<int>(number_or(e, "m_comp", euler.m_comp, "euler"));
    if (euler.N < 1) bad_config("\"euler.N\" must be >= 1");
    if (euler.m_comp < 1) bad_config("\"euler.m_comp\" must be >= 1");
}

void apply_net_section(const json& n, int& K) {
    if (!n.is_object()) bad_config("\"net\" must be an object");
    reject_unknown(n, {"K", "activation"}, "net");
    if (n.contains("K")) {
        const json& k = n.at("K");
        if (k.is_string()) {
            if (k.get<std::string>() != "min(d,2000)")
                bad_config("\"net.K\" string form must be \"min(d,2000)\"");
            K = 0;
        } else if (k.is_number_integer() && k.get<long long>() >= 1) {
            K = k.get<int>();
        } else {
            bad_config("\"net.K\" must be \"min(d,2000)\" or an integer >= 1");
        }
    }
    if (n.contains("activation")) {
        if (!n.at("activation").is_string() ||
            n.at("activation").get<std::string>() != "tanh")
            bad_config("\"net.activation\" must be \"tanh\"");
    }
}

void apply_train_section(const json& t, EulerConfig& euler, SgdConfig& sgd) {
    if (!t.is_object()) bad_config("\"train\" must be an object");
    reject_unknown(t, {"J", "epochs", "lr"}, "train");
    euler.J = static_cast<long long>(
        number_or(t, "J", static_cast<double>(euler.J), "train"));
    if (euler.J < 2) bad_config("\"train.J\" must be >= 2");
    sgd.epochs = static_cast<long long>(
        number_or(t, "epochs", static_cast<double>(sgd.epochs), "train"));
    if (sgd.epochs < 1) bad_config("\"train.epochs\" must be >= 1");
    if (t.contains("lr")) {
        const json& lr = t.at("lr");
        if (!lr.is_object()) bad_config("\"train.lr\" must be an object");
        reject_unknown(lr, {"rates", "cutoffs"}, "train.lr");
        if (!lr.contains("rates") || !lr.at("rates").is_array() || lr.at("rates").empty())
            bad_config("\"train.lr.rates\" must be a non-empty array");
        LrSchedule sched;
        sched.rates.clear();
        sched.cutoffs.clear();
        for (const auto& r : lr.at("rates")) {
            if (!r.is_number() || !(r.get<double>() > 0))
                bad_config("\"train.lr.rates\" entries must be positive numbers");
            sched.rates.push_back(r.get<double>());
        }
        if (lr.contains("cutoffs")) {
            for (const auto& c : lr.at("cutoffs")) {
                if (!c.is_number_integer() || c.get<long long>() < 1)
                    bad_config("\"train.lr.cutoffs\" entries must be integers >= 1");
                sched.cutoffs.push_back(c.get<long long>());
            }
        }
        if (sched.cutoffs.size() + 1 != sched.rates.size())
            bad_config("\"train.lr\" needs len(rates) == len(cutoffs) + 1");
        if (!std::is_sorted(sched.cutoffs.begin(), sched.cutoffs.end()))
            bad_config("\"train.lr.cutoffs\" must be increasing");
        sgd.schedule = sched;
    }
}

SplittingConfig::Method method_from_string(const std::string& name) {
    if (name == "random") return SplittingConfig::Method::random;
    if (name == "deterministic") return SplittingConfig::Method::deterministic;
    bad_config("\"method\" must be random | deterministic");
}

TheoryParams theory_from_json(const json& t) {
    if (!t.is_object()) bad_config("\"theory\" must be an object");
    reject_unknown(t,
                   {"L", "L1", "L2", "C_eta", "T", "p", "q", "d",
                    "xi_second_moment", "xi_q_moment"},
                   "theory");
    TheoryParams tp;
    tp.L = require_number(t, "L", "theory");
    tp.L1 = number_or(t, "L1", tp.L, "theory");
    tp.L2 = number_or(t, "L2", tp.L, "theory");
    tp.C_eta = require_number(t, "C_eta", "theory");
    tp.T = require_number(t, "T", "theory");
    tp.p = require_number(t, "p", "theory");
    tp.q = require_number(t, "q", "theory");
    tp.d = static_cast<int>(number_or(t, "d", 1, "theory"));
    tp.xi_second_moment = number_or(t, "xi_second_moment", 0.0, "theory");
    tp.xi_q_moment = number_or(t, "xi_q_moment", 1.0, "theory");
    return tp;
}

} // namespace

const char* method_name(SplittingConfig::Method m) {
    return m == SplittingConfig::Method::random ? "random" : "deterministic";
}

std::uint64_t run_seed_for(std::uint64_t master_seed, const std::string& preset,
                           int d, int run_index) {
    const auto names = preset_names();
    std::uint32_t model_id = 0;
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == preset) model_id = static_cast<std::uint32_t>(i);
    return derive_seed(master_seed,
                       Lane{LANE_RUN_SEED, model_id * 1000000u + static_cast<std::uint32_t>(d),
                            static_cast<std::uint32_t>(run_index)});
}

RunConfig parse_run_config(const std::string& json_text) {
    const json j = parse_json(json_text);
    reject_unknown(j,
                   {"model", "dims", "method", "euler", "net", "train", "runs",
                    "seed", "output"},
                   "config");

    RunConfig cfg;
    if (!j.contains("model")) bad_config("missing \"model\"");
    parse_model(j.at("model"), cfg.preset, cfg.overrides);

    if (!j.contains("dims") || !j.at("dims").is_array() || j.at("dims").empty())
        bad_config("\"dims\" must be a non-empty array of dimensions");
    for (const auto& v : j.at("dims")) {
        if (!v.is_number_integer() || v.get<long long>() < 1)
            bad_config("\"dims\" entries must be integers >= 1");
        cfg.dims.push_back(v.get<int>());
    }

    std::string method = "both";
    if (j.contains("method")) {
        if (!j.at("method").is_string()) bad_config("\"method\" must be a string");
        method = j.at("method").get<std::string>();
    }
    if (method == "random") {
        cfg.methods = {SplittingConfig::Method::random};
    } else if (method == "deterministic") {
        cfg.methods = {SplittingConfig::Method::deterministic};
    } else if (method == "both") {
        cfg.methods = {SplittingConfig::Method::random,
                       SplittingConfig::Method::deterministic};
    } else {
        bad_config("\"method\" must be random | deterministic | both");
    }

    if (j.contains("euler")) apply_euler_section(j.at("euler"), cfg.euler);
    if (j.contains("net")) apply_net_section(j.at("net"), cfg.K);
    if (j.contains("train")) apply_train_section(j.at("train"), cfg.euler, cfg.sgd);

    if (j.contains("runs")) {
        if (!j.at("runs").is_number_integer() || j.at("runs").get<long long>() < 1)
            bad_config("\"runs\" must be an integer >= 1");
        cfg.runs = j.at("runs").get<int>();
    }
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_integer() || j.at("seed").get<long long>() < 0)
            bad_config("\"seed\" must be a non-negative integer");
        cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("output")) {
        if (!j.at("output").is_string()) bad_config("\"output\" must be a string");
        cfg.output = j.at("output").get<std::string>();
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

SplittingConfig parse_solver_config(const std::string& json_text) {
    const json j = parse_json(json_text);
    reject_unknown(j, {"method", "euler", "net", "train", "seed", "truncation_theta"},
                   "solver config");
    SplittingConfig sc;
    if (j.contains("method")) {
        if (!j.at("method").is_string()) bad_config("\"method\" must be a string");
        sc.method = method_from_string(j.at("method").get<std::string>());
    }
    if (j.contains("euler")) apply_euler_section(j.at("euler"), sc.euler);
    if (j.contains("net")) apply_net_section(j.at("net"), sc.K);
    if (j.contains("train")) apply_train_section(j.at("train"), sc.euler, sc.sgd);
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_integer() || j.at("seed").get<long long>() < 0)
            bad_config("\"seed\" must be a non-negative integer");
        sc.master_seed = j.at("seed").get<std::uint64_t>();
    }
    sc.truncation_theta = number_or(j, "truncation_theta", 0.0, "solver config");
    return sc;
}

std::string solution_diagnostics_json(const SplittingSolution& solution) {
    json doc{{"method", method_name(solution.method)},
             {"d", solution.d},
             {"N", solution.N},
             {"u0", solution.u0},
             {"evals", solution.eval_count},
             {"wall_s", solution.wall_s},
             {"steps", steps_to_json(solution.steps)}};
    return doc.dump(2) + "\n";
}

SweepResult run_sweep(const RunConfig& cfg) {
    SweepResult result;
    for (int d : cfg.dims) {
        for (const auto method : cfg.methods) {
            for (int r = 0; r < cfg.runs; ++r) {
                RunRecord rec;
                rec.preset = cfg.preset;
                rec.d = d;
                rec.method = method;
                rec.run_index = r;
                rec.run_seed = run_seed_for(cfg.seed, cfg.preset, d, r);
                try {
                    const PideProblem problem = make_preset(cfg.preset, d, cfg.overrides);
                    SplittingConfig sc;
                    sc.method = method;
                    sc.euler = cfg.euler;
                    sc.K = cfg.K;
                    sc.sgd = cfg.sgd;
                    sc.master_seed = rec.run_seed;
                    const SplittingSolution sol =
                        method == SplittingConfig::Method::random
                            ? solve_random(problem, sc)
                            : solve_deterministic(problem, sc);
                    rec.ok = true;
                    rec.u0 = sol.u0;
                    rec.runtime_s = sol.wall_s;
                    rec.evals = sol.eval_count;
                    rec.steps = sol.steps;
                } catch (const std::exception& e) {
                    rec.ok = false;
                    rec.error = e.what();
                    result.all_ok = false;
                }
                result.records.push_back(std::move(rec));
            }
        }
    }
    return result;
}

std::string sweep_csv(const RunConfig& cfg, const SweepResult& result) {
    std::ostringstream out;
    out << "d,method,mean_u0,std_u0,mean_runtime_s,mean_evals\n";
    for (int d : cfg.dims) {
        for (const auto method : cfg.methods) {
            double sum = 0, sumsq = 0, time_sum = 0, eval_sum = 0;
            long long n = 0;
            for (const auto& rec : result.records) {
                if (rec.d != d || rec.method != method || !rec.ok) continue;
                sum += rec.u0;
                sumsq += rec.u0 * rec.u0;
                time_sum += rec.runtime_s;
                eval_sum += static_cast<double>(rec.evals);
                ++n;
            }
            if (n == 0) continue; // no completed runs for this cell
            const double mean = sum / static_cast<double>(n);
            double var = 0;
            if (n > 1) {
                var = (sumsq - static_cast<double>(n) * mean * mean) /
                      static_cast<double>(n - 1);
                if (var < 0) var = 0;
            }
            out << d << ',' << method_name(method) << ',' << format_double(mean) << ','
                << format_double(std::sqrt(var)) << ','
                << format_double(time_sum / static_cast<double>(n)) << ','
                << format_double(eval_sum / static_cast<double>(n)) << '\n';
        }
    }
    return out.str();
}

std::string sweep_diagnostics_json(const RunConfig& cfg, const SweepResult& result) {
    json runs = json::array();
    for (const auto& rec : result.records) {
        json r{{"preset", rec.preset},
               {"d", rec.d},
               {"method", method_name(rec.method)},
               {"run", rec.run_index},
               {"seed", rec.run_seed},
               {"ok", rec.ok}};
        if (rec.ok) {
            r["u0"] = rec.u0;
            r["runtime_s"] = rec.runtime_s;
            r["evals"] = rec.evals;
            r["steps"] = steps_to_json(rec.steps);
        } else {
            r["error"] = rec.error;
        }
        runs.push_back(std::move(r));
    }
    json doc{{"preset", cfg.preset},
             {"dims", cfg.dims},
             {"runs_per_cell", cfg.runs},
             {"seed", cfg.seed},
             {"all_ok", result.all_ok},
             {"runs", std::move(runs)}};
    return doc.dump(2) + "\n";
}

void write_sweep_outputs(const RunConfig& cfg, const SweepResult& result,
                         const std::string& out_dir) {
    const std::string dir = out_dir.empty() ? cfg.output : out_dir;
    std::filesystem::create_directories(dir);
    {
        std::ofstream csv(dir + "/results.csv", std::ios::binary);
        if (!csv) throw ConfigError("config: cannot write to \"" + dir + "\"");
        csv << sweep_csv(cfg, result);
    }
    {
        std::ofstream js(dir + "/runs.json", std::ios::binary);
        if (!js) throw ConfigError("config: cannot write to \"" + dir + "\"");
        js << sweep_diagnostics_json(cfg, result);
    }
}

std::string bounds_report(const std::string& json_text) {
    const json j = parse_json(json_text);
    reject_unknown(j, {"theory", "budget", "select", "format"}, "bounds config");
    if (!j.contains("theory")) bad_config("missing \"theory\"");
    const TheoryParams tp = theory_from_json(j.at("theory"));

    std::string format = "json";
    if (j.contains("format")) {
        if (!j.at("format").is_string()) bad_config("\"format\" must be a string");
        format = j.at("format").get<std::string>();
        if (format != "json" && format != "csv")
            bad_config("\"format\" must be json | csv");
    }

    const BoundConstants k = constants(tp);
    json out;
    out["constants"] = json{{"c", k.c},           {"c1", k.c1},
                            {"c2", k.c2},         {"c3", k.c3},
                            {"C_tilde", k.C_tilde}, {"C_hat", k.C_hat},
                            {"C_bar", k.C_bar},   {"C0", k.C0}};

    if (j.contains("budget")) {
        const json& b = j.at("budget");
        if (!b.is_object()) bad_config("\"budget\" must be an object");
        reject_unknown(b, {"N", "delta", "m_comp", "K", "J", "theta", "epsilon_uat"},
                       "budget");
        const ErrorBudget eb = budget(
            tp, static_cast<std::int64_t>(require_number(b, "N", "budget")),
            require_number(b, "delta", "budget"),
            static_cast<std::int64_t>(require_number(b, "m_comp", "budget")),
            static_cast<std::int64_t>(require_number(b, "K", "budget")),
            static_cast<std::int64_t>(require_number(b, "J", "budget")),
            require_number(b, "theta", "budget"),
            number_or(b, "epsilon_uat", 0.0, "budget"));
        out["budget"] = json{{"tail", eb.tail},
                             {"discr", eb.discr},
                             {"gen", eb.gen},
                             {"uat", eb.uat},
                             {"total", eb.total}};
    }

    if (j.contains("select")) {
        const json& s = j.at("select");
        if (!s.is_object()) bad_config("\"select\" must be an object");
        reject_unknown(s, {"epsilon_target", "K"}, "select");
        const SelectedParameters sp = select_parameters(
            tp, require_number(s, "epsilon_target", "select"),
            static_cast<std::int64_t>(require_number(s, "K", "select")));
        out["selected"] = json{{"theta", sp.theta},
                               {"N", sp.N},
                               {"delta", sp.delta},
                               {"m_comp", sp.m_comp},
                               {"J", sp.J}};
    }

    if (format == "csv") {
        std::ostringstream csv;
        csv << "name,value\n";
        for (const auto& section : {"constants", "budget", "selected"}) {
            if (!out.contains(section)) continue;
            for (auto it = out.at(section).begin(); it != out.at(section).end(); ++it)
                csv << it.key() << ',' << format_double(it.value().get<double>()) << '\n';
        }
        return csv.str();
    }
    return out.dump(2) + "\n";
}

std::string oracle_report(const std::string& json_text) {
    const json j = parse_json(json_text);
    reject_unknown(j,
                   {"model", "d", "mode", "samples", "picard_iters", "grid_N",
                    "seed", "delta", "m_comp"},
                   "oracle config");
    if (!j.contains("model")) bad_config("missing \"model\"");
    std::string preset;
    std::map<std::string, double> overrides;
    parse_model(j.at("model"), preset, overrides);

    const int d = static_cast<int>(number_or(j, "d", 1, "oracle"));
    if (d < 1) bad_config("\"d\" must be >= 1");

    std::string mode = "mc_terminal";
    if (j.contains("mode")) {
        if (!j.at("mode").is_string()) bad_config("\"mode\" must be a string");
        mode = j.at("mode").get<std::string>();
        if (mode != "mc_terminal" && mode != "picard")
            bad_config("\"mode\" must be mc_terminal | picard");
    }

    OracleConfig oc;
    oc.samples = static_cast<long long>(
        number_or(j, "samples", static_cast<double>(oc.samples), "oracle"));
    oc.picard_iters =
        static_cast<int>(number_or(j, "picard_iters", oc.picard_iters, "oracle"));
    oc.grid_N = static_cast<int>(number_or(j, "grid_N", oc.grid_N, "oracle"));
    oc.seed = static_cast<std::uint64_t>(number_or(j, "seed", 1.0, "oracle"));
    oc.delta = number_or(j, "delta", oc.delta, "oracle");
    oc.m_comp = static_cast<int>(number_or(j, "m_comp", oc.m_comp, "oracle"));

    const PideProblem problem = make_preset(preset, d, overrides);

    json out;
    if (mode == "mc_terminal") {
        const McResult res = mc_terminal(problem, oc);
        out = json{{"estimate", res.mean}, {"stderr", res.std_error}, {"evals", res.evals}};
    } else {
        const PicardResult res = picard_mc(problem, oc);
        out = json{{"estimate", res.u0_estimate},
                   {"stderr", res.std_error},
                   {"evals", res.evals},
                   {"iterates", res.iterates}};
    }
    return out.dump(2) + "\n";
}

std::string paths_csv(const std::string& json_text) {
    const json j = parse_json(json_text);
    reject_unknown(j, {"model", "d", "euler", "J", "seed"}, "paths config");
    if (!j.contains("model")) bad_config("missing \"model\"");
    std::string preset;
    std::map<std::string, double> overrides;
    parse_model(j.at("model"), preset, overrides);

    const int d = static_cast<int>(number_or(j, "d", 1, "paths"));
    if (d < 1) bad_config("\"d\" must be >= 1");
    if (d > 16) bad_config("path dump is limited to d <= 16");

    EulerConfig euler;
    if (j.contains("euler")) apply_euler_section(j.at("euler"), euler);
    euler.J = static_cast<long long>(number_or(j, "J", 500.0, "paths"));
    if (euler.J < 1) bad_config("\"J\" must be >= 1");
    const auto seed = static_cast<std::uint64_t>(number_or(j, "seed", 1.0, "paths"));

    const PideProblem problem = make_preset(preset, d, overrides);
    const PathBatch batch = simulate_paths(problem, euler, seed);

    std::string out = "j,k";
    for (int i = 1; i <= d; ++i) out += ",x_" + std::to_string(i);
    out += '\n';
    for (long long p = 0; p < batch.J; ++p) {
        for (int k = 0; k <= batch.N; ++k) {
            out += std::to_string(p);
            out += ',';
            out += std::to_string(k);
            const double* x = batch.state(p, k);
            for (int i = 0; i < d; ++i) {
                out += ',';
                out += format_double(x[i]);
            }
            out += '\n';
        }
    }
    return out;
}

} // namespace jumpsplit
