#include "twlab.h"

#include <memory>
#include <string>

#include "twlab/asymptotics.hpp"
#include "twlab/auxsys.hpp"
#include "twlab/commands.hpp"
#include "twlab/config.hpp"
#include "twlab/distribution.hpp"
#include "twlab/errors.hpp"
#include "twlab/oracles.hpp"
#include "twlab/painleve2.hpp"

using namespace twlab;

struct twlab_config {
    config::RunConfig cfg;
    std::string scratch;
};

struct twlab_hm {
    p2::Painleve2Solution sol;
};

struct twlab_aux {
    aux::AuxSolution sol;
};

static_assert((int)Errc::Domain == TWLAB_E_DOMAIN);
static_assert((int)Errc::ParseError == TWLAB_E_PARSE);
static_assert((int)Errc::Internal == TWLAB_E_INTERNAL);

namespace {

struct LastError {
    int code = TWLAB_OK;
    std::string message, json;
};

thread_local LastError last_error;
thread_local std::string last_manifest;

int set_error(int code, const std::string& msg, const std::string& json) {
    last_error = {code, msg, json};
    return code;
}

int from_exception() {
    try {
        throw;
    } catch (const Error& e) {
        return set_error((int)e.code(), e.what(), cmd::error_json(e));
    } catch (const std::exception& e) {
        return set_error(TWLAB_E_INTERNAL, e.what(), cmd::error_json(e));
    } catch (...) {
        return set_error(TWLAB_E_INTERNAL, "unknown exception",
                         R"({"error":{"code":"Internal","message":"unknown exception"}})");
    }
}

int null_arg(const char* what) {
    std::string m = std::string(what) + " is NULL";
    return set_error(TWLAB_E_NULL_ARGUMENT, m, R"({"error":{"code":"NullArgument","message":")" + m + "\"}}");
}

template <class F>
int guard(F&& f) {
    try {
        f();
        return TWLAB_OK;
    } catch (...) {
        return from_exception();
    }
}

}  // namespace

extern "C" {

TWLAB_API const char* twlab_version(void) { return cmd::kVersion; }

TWLAB_API int twlab_last_error_code(void) { return last_error.code; }
TWLAB_API const char* twlab_last_error_message(void) { return last_error.message.c_str(); }
TWLAB_API const char* twlab_last_error_json(void) { return last_error.json.c_str(); }
TWLAB_API void twlab_clear_error(void) { last_error = {}; }

TWLAB_API twlab_config* twlab_config_new(void) { return new twlab_config(); }

TWLAB_API twlab_config* twlab_config_load(const char* path) {
    if (!path) return null_arg("path"), nullptr;
    std::unique_ptr<twlab_config> c;
    if (guard([&] { c.reset(new twlab_config{config::load(path), {}}); })) return nullptr;
    return c.release();
}

TWLAB_API twlab_config* twlab_config_parse(const char* text) {
    if (!text) return null_arg("text"), nullptr;
    std::unique_ptr<twlab_config> c;
    if (guard([&] { c.reset(new twlab_config{config::parse(text), {}}); })) return nullptr;
    return c.release();
}

TWLAB_API void twlab_config_free(twlab_config* cfg) { delete cfg; }

TWLAB_API int twlab_config_set(twlab_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) return null_arg("config, key or value");
    return guard([&] { config::set(cfg->cfg, key, value); });
}

TWLAB_API const char* twlab_config_get(twlab_config* cfg, const char* key) {
    if (!cfg || !key) return null_arg("config or key"), nullptr;
    if (guard([&] { cfg->scratch = config::get(cfg->cfg, key); })) return nullptr;
    return cfg->scratch.c_str();
}

TWLAB_API int twlab_config_save(const twlab_config* cfg, const char* path) {
    if (!cfg || !path) return null_arg("config or path");
    return guard([&] { config::save(cfg->cfg, path); });
}

TWLAB_API size_t twlab_config_key_count(void) { return config::keys().size(); }
TWLAB_API const char* twlab_config_key(size_t i) {
    return i < config::keys().size() ? config::keys()[i].c_str() : nullptr;
}
TWLAB_API size_t twlab_command_count(void) { return config::command_names().size(); }
TWLAB_API const char* twlab_command_name(size_t i) {
    return i < config::command_names().size() ? config::command_names()[i].c_str() : nullptr;
}

TWLAB_API int twlab_run(const twlab_config* cfg) {
    if (!cfg) return null_arg("config"), 2;
    cmd::RunResult res;
    if (guard([&] { res = cmd::run(cfg->cfg); })) return 1;
    last_manifest = res.manifest_path;
    if (res.exit_code != 0) {
        int code = res.exit_code == 2 ? TWLAB_E_CONFIG : TWLAB_E_RUN_FAILED;
        set_error(code, res.error_json, res.error_json);
    }
    return res.exit_code;
}

TWLAB_API const char* twlab_last_manifest_path(void) { return last_manifest.c_str(); }

TWLAB_API twlab_hm* twlab_hm_solve(double t_min, double t_max, int n, double tol) {
    std::unique_ptr<twlab_hm> h;
    if (guard([&] { h.reset(new twlab_hm{p2::solve_hastings_mcleod(t_min, t_max, n, tol)}); }))
        return nullptr;
    return h.release();
}

TWLAB_API void twlab_hm_free(twlab_hm* hm) { delete hm; }

TWLAB_API int twlab_hm_eval(const twlab_hm* hm, double t, double* u, double* ut, double* omega) {
    if (!hm) return null_arg("hm");
    return guard([&] {
        auto p = hm->sol.eval(t);
        if (u) *u = p.u;
        if (ut) *ut = p.ut;
        if (omega) *omega = p.omega;
    });
}

TWLAB_API twlab_aux* twlab_aux_solve(const twlab_hm* hm, double t_start, double tol, int route) {
    if (!hm) return null_arg("hm"), nullptr;
    if (route != 0 && route != 1) {
        set_error(TWLAB_E_DOMAIN, "route must be 0 or 1",
                  R"({"error":{"code":"Domain","message":"route must be 0 or 1"}})");
        return nullptr;
    }
    std::unique_ptr<twlab_aux> a;
    int e = guard([&] {
        aux::AuxOptions o;
        o.route = route ? aux::Route::Nonlinear : aux::Route::Linear;
        a.reset(new twlab_aux{aux::solve(hm->sol, t_start, hm->sol.t_min(), tol, o)});
    });
    return e ? nullptr : a.release();
}

TWLAB_API void twlab_aux_free(twlab_aux* aux) { delete aux; }

TWLAB_API int twlab_aux_q2(const twlab_aux* aux, double t, double* q2) {
    if (!aux || !q2) return null_arg("aux or q2");
    return guard([&] { *q2 = aux->sol.eval(t).q2; });
}

TWLAB_API int twlab_F2(const twlab_hm* hm, double t, double* out) {
    if (!hm || !out) return null_arg("hm or out");
    return guard([&] { *out = dist::eval_F2(hm->sol, t); });
}

TWLAB_API int twlab_F6(const twlab_hm* hm, const twlab_aux* aux, double t, double* out) {
    if (!hm || !aux || !out) return null_arg("hm, aux or out");
    return guard([&] { *out = dist::eval_F6(hm->sol, aux->sol, dist::internal_t(t)); });
}

TWLAB_API int twlab_fredholm_F2(double t, int m, double* out) {
    if (!out) return null_arg("out");
    return guard([&] { *out = oracle::airy_kernel_fredholm(t, m); });
}

TWLAB_API int twlab_tail_constant(double beta, double* out) {
    if (!out) return null_arg("out");
    return guard([&] { *out = asym::eval_c0(beta); });
}

}  // extern "C"
