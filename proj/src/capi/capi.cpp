// C shared-library interface: thin guard layer mapping the C++ exception
// taxonomy onto js_status codes and opaque handles.

#include "jumpsplit.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include <json.hpp>

#include "jumpsplit/errors.hpp"
#include "jumpsplit/models.hpp"
#include "jumpsplit/runner.hpp"
#include "jumpsplit/splitting.hpp"

struct js_problem {
    jumpsplit::PideProblem impl;
};

struct js_solution {
    jumpsplit::SplittingSolution impl;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

// Duplicate with malloc so the C side can free with js_string_free.
char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) return nullptr;
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

// Run fn(), translating exceptions into status codes.  SingularSystemError
// derives from NumericError and must be matched first.
template <typename Fn>
js_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const jumpsplit::ParameterError& e) {
        set_error(e.what());
        return JS_ERR_PARAMETER;
    } catch (const jumpsplit::SingularSystemError& e) {
        set_error(e.what());
        return JS_ERR_SINGULAR;
    } catch (const jumpsplit::NumericError& e) {
        set_error(e.what());
        return JS_ERR_NUMERIC;
    } catch (const jumpsplit::BudgetError& e) {
        set_error(e.what());
        return JS_ERR_BUDGET;
    } catch (const jumpsplit::ConfigError& e) {
        set_error(e.what());
        return JS_ERR_CONFIG;
    } catch (const std::exception& e) {
        set_error(e.what());
        return JS_ERR_UNKNOWN;
    } catch (...) {
        set_error("unknown error");
        return JS_ERR_UNKNOWN;
    }
}

js_status require(bool ok, const char* msg) {
    if (!ok) {
        set_error(msg);
        return JS_ERR_PARAMETER;
    }
    return JS_OK;
}

}  // namespace

extern "C" {

const char* js_version(void) { return "jumpsplit 1.0.0"; }

const char* js_last_error(void) { return g_last_error.c_str(); }

void js_string_free(char* s) { std::free(s); }

js_status js_problem_new_preset(const char* name, int d, const char* overrides_json,
                                js_problem** out) {
    if (js_status st = require(name != nullptr && out != nullptr,
                               "js_problem_new_preset: name and out must be non-NULL");
        st != JS_OK)
        return st;
    *out = nullptr;
    return guarded([&]() {
        std::map<std::string, double> overrides;
        if (overrides_json != nullptr && overrides_json[0] != '\0') {
            nlohmann::json doc = nlohmann::json::parse(overrides_json, nullptr, false);
            if (doc.is_discarded() || !doc.is_object())
                throw jumpsplit::ConfigError(
                    "js_problem_new_preset: overrides_json must be a JSON object");
            for (const auto& [key, value] : doc.items()) {
                if (!value.is_number())
                    throw jumpsplit::ConfigError(
                        "js_problem_new_preset: override '" + key + "' must be numeric");
                overrides[key] = value.get<double>();
            }
        }
        auto handle = new js_problem{jumpsplit::make_preset(name, d, overrides)};
        *out = handle;
        return JS_OK;
    });
}

void js_problem_free(js_problem* p) { delete p; }

js_status js_solve(const js_problem* p, const char* config_json, js_solution** out) {
    if (js_status st = require(p != nullptr && out != nullptr,
                               "js_solve: problem and out must be non-NULL");
        st != JS_OK)
        return st;
    *out = nullptr;
    return guarded([&]() {
        const std::string text =
            (config_json != nullptr && config_json[0] != '\0') ? config_json : "{}";
        jumpsplit::SplittingConfig cfg = jumpsplit::parse_solver_config(text);
        jumpsplit::SplittingSolution sol =
            (cfg.method == jumpsplit::SplittingConfig::Method::random)
                ? jumpsplit::solve_random(p->impl, cfg)
                : jumpsplit::solve_deterministic(p->impl, cfg);
        *out = new js_solution{std::move(sol)};
        return JS_OK;
    });
}

js_status js_solution_u0(const js_solution* s, double* out) {
    if (js_status st = require(s != nullptr && out != nullptr,
                               "js_solution_u0: solution and out must be non-NULL");
        st != JS_OK)
        return st;
    *out = s->impl.u0;
    return JS_OK;
}

js_status js_solution_evals(const js_solution* s, int64_t* out) {
    if (js_status st = require(s != nullptr && out != nullptr,
                               "js_solution_evals: solution and out must be non-NULL");
        st != JS_OK)
        return st;
    *out = s->impl.eval_count;
    return JS_OK;
}

js_status js_solution_diagnostics_json(const js_solution* s, char** out) {
    if (js_status st = require(s != nullptr && out != nullptr,
                               "js_solution_diagnostics_json: solution and out must be non-NULL");
        st != JS_OK)
        return st;
    *out = nullptr;
    return guarded([&]() {
        char* text = dup_string(jumpsplit::solution_diagnostics_json(s->impl));
        if (text == nullptr) throw std::bad_alloc();
        *out = text;
        return JS_OK;
    });
}

js_status js_solution_eval(const js_solution* s, int n, const double* x, int d,
                           double* out) {
    if (js_status st = require(s != nullptr && x != nullptr && out != nullptr,
                               "js_solution_eval: solution, x and out must be non-NULL");
        st != JS_OK)
        return st;
    return guarded([&]() {
        if (d != s->impl.d)
            throw jumpsplit::ParameterError("js_solution_eval: x has dimension " +
                                            std::to_string(d) + ", problem has " +
                                            std::to_string(s->impl.d));
        *out = jumpsplit::evaluate_solution(s->impl, n, x);
        return JS_OK;
    });
}

void js_solution_free(js_solution* s) { delete s; }

js_status js_run_sweep(const char* config_json, const char* out_dir, char** csv_out) {
    if (js_status st = require(config_json != nullptr && csv_out != nullptr,
                               "js_run_sweep: config_json and csv_out must be non-NULL");
        st != JS_OK)
        return st;
    *csv_out = nullptr;
    return guarded([&]() -> js_status {
        jumpsplit::RunConfig cfg = jumpsplit::parse_run_config(config_json);
        jumpsplit::SweepResult result = jumpsplit::run_sweep(cfg);
        const std::string dir = out_dir != nullptr ? out_dir : "";
        jumpsplit::write_sweep_outputs(cfg, result, dir);
        char* text = dup_string(jumpsplit::sweep_csv(cfg, result));
        if (text == nullptr) throw std::bad_alloc();
        *csv_out = text;
        if (!result.all_ok) {
            for (const auto& rec : result.records) {
                if (!rec.ok) {
                    set_error("run failed (" + rec.preset + ", d=" + std::to_string(rec.d) +
                              ", method=" + jumpsplit::method_name(rec.method) +
                              ", run=" + std::to_string(rec.run_index) + "): " + rec.error);
                    break;
                }
            }
            return JS_PARTIAL;
        }
        return JS_OK;
    });
}

js_status js_bounds_json(const char* config_json, char** out) {
    if (js_status st = require(config_json != nullptr && out != nullptr,
                               "js_bounds_json: config_json and out must be non-NULL");
        st != JS_OK)
        return st;
    *out = nullptr;
    return guarded([&]() {
        char* text = dup_string(jumpsplit::bounds_report(config_json));
        if (text == nullptr) throw std::bad_alloc();
        *out = text;
        return JS_OK;
    });
}

js_status js_oracle_json(const char* config_json, char** out) {
    if (js_status st = require(config_json != nullptr && out != nullptr,
                               "js_oracle_json: config_json and out must be non-NULL");
        st != JS_OK)
        return st;
    *out = nullptr;
    return guarded([&]() {
        char* text = dup_string(jumpsplit::oracle_report(config_json));
        if (text == nullptr) throw std::bad_alloc();
        *out = text;
        return JS_OK;
    });
}

js_status js_paths_csv(const char* config_json, char** out) {
    if (js_status st = require(config_json != nullptr && out != nullptr,
                               "js_paths_csv: config_json and out must be non-NULL");
        st != JS_OK)
        return st;
    *out = nullptr;
    return guarded([&]() {
        char* text = dup_string(jumpsplit::paths_csv(config_json));
        if (text == nullptr) throw std::bad_alloc();
        *out = text;
        return JS_OK;
    });
}

}  // extern "C"
