#include "levystab/levystab.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "levystab/bounds.hpp"
#include "levystab/config.hpp"
#include "levystab/errors.hpp"
#include "levystab/experiments.hpp"
#include "levystab/specfun.hpp"
#include "levystab/stable.hpp"
#include "levystab/wasserstein.hpp"

struct lvs_config {
  levystab::Config cfg;
};

struct lvs_report {
  levystab::Report report;
};

struct lvs_rng {
  levystab::RngStream stream;
};

namespace {

thread_local std::string g_last_error;

lvs_status fail(lvs_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename Fn>
lvs_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const levystab::Error& e) {
    return fail(static_cast<lvs_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(LVS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LVS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(LVS_ERR_INTERNAL, "unknown error");
  }
}

lvs_status null_arg(const char* name) {
  return fail(LVS_ERR_CONFIG, std::string("null argument: ") + name);
}

}  // namespace

extern "C" {

const char* lvs_version(void) { return "0.1.0"; }

const char* lvs_last_error(void) { return g_last_error.c_str(); }

lvs_config* lvs_config_new(void) { return new (std::nothrow) lvs_config{}; }

void lvs_config_free(lvs_config* cfg) { delete cfg; }

lvs_status lvs_config_parse_file(lvs_config* cfg, const char* path) {
  if (!cfg || !path) return null_arg("cfg/path");
  return guarded([&] {
    cfg->cfg.merge(levystab::Config::from_file(path));
    return LVS_OK;
  });
}

lvs_status lvs_config_parse_text(lvs_config* cfg, const char* text) {
  if (!cfg || !text) return null_arg("cfg/text");
  return guarded([&] {
    cfg->cfg.merge(levystab::Config::from_text(text));
    return LVS_OK;
  });
}

lvs_status lvs_config_set(lvs_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return null_arg("cfg/key/value");
  return guarded([&] {
    cfg->cfg.set(key, value);
    return LVS_OK;
  });
}

lvs_status lvs_config_get(const lvs_config* cfg, const char* key, char* buf, size_t buf_len,
                          size_t* needed) {
  if (!cfg || !key) return null_arg("cfg/key");
  return guarded([&] {
    const auto v = cfg->cfg.get(key);
    if (!v) return fail(LVS_ERR_CONFIG, std::string("key not set: ") + key);
    if (needed) *needed = v->size();
    if (buf && buf_len > 0) {
      const size_t n = v->size() < buf_len - 1 ? v->size() : buf_len - 1;
      std::memcpy(buf, v->data(), n);
      buf[n] = '\0';
    }
    return LVS_OK;
  });
}

lvs_status lvs_run(const char* command, const lvs_config* cfg, lvs_report** out) {
  if (!command || !out) return null_arg("command/out");
  *out = nullptr;
  return guarded([&] {
    const levystab::Config empty;
    auto* rep = new lvs_report{levystab::run_command(command, cfg ? cfg->cfg : empty)};
    *out = rep;
    if (rep->report.status != 0) {
      return fail(static_cast<lvs_status>(rep->report.status), "checks failed");
    }
    return LVS_OK;
  });
}

const char* lvs_report_text(const lvs_report* report) { return report ? report->report.text.c_str() : ""; }

const char* lvs_report_format(const lvs_report* report) {
  return report ? report->report.format.c_str() : "";
}

int lvs_report_status(const lvs_report* report) { return report ? report->report.status : 0; }

void lvs_report_free(lvs_report* report) { delete report; }

lvs_status lvs_gamma(double x, double* out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = levystab::specfun::gamma(x);
    return LVS_OK;
  });
}

lvs_status lvs_log_abs_gamma(double x, double* out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = levystab::specfun::log_abs_gamma(x);
    return LVS_OK;
  });
}

lvs_status lvs_digamma(double x, double* out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = levystab::specfun::digamma(x);
    return LVS_OK;
  });
}

lvs_status lvs_log_g(double alpha, size_t d, double* out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = levystab::bounds::log_g(alpha, d);
    return LVS_OK;
  });
}

lvs_status lvs_g(double alpha, size_t d, double* out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = levystab::bounds::g(alpha, d);
    return LVS_OK;
  });
}

lvs_status lvs_compute_c0(double alpha, size_t d, const double bundle[7], double* out) {
  if (!bundle || !out) return null_arg("bundle/out");
  return guarded([&] {
    levystab::ConstantBundle b{bundle[0], bundle[1], bundle[2], bundle[3], bundle[4], bundle[5], bundle[6]};
    *out = levystab::bounds::compute_C0(alpha, d, b);
    return LVS_OK;
  });
}

lvs_status lvs_critical_alpha0(double* c0, double* alpha0) {
  if (!c0 || !alpha0) return null_arg("c0/alpha0");
  return guarded([&] {
    const auto c = levystab::bounds::critical_alpha0();
    *c0 = c.c0;
    *alpha0 = c.alpha0;
    return LVS_OK;
  });
}

lvs_rng* lvs_rng_new(uint64_t seed, uint64_t stream) {
  return new (std::nothrow) lvs_rng{levystab::RngStream(seed, stream)};
}

void lvs_rng_free(lvs_rng* rng) { delete rng; }

lvs_status lvs_sample_sas(lvs_rng* rng, double alpha, double scale, double* out, size_t count) {
  if (!rng || (!out && count > 0)) return null_arg("rng/out");
  return guarded([&] {
    const levystab::StableNoiseSpec spec{alpha, scale};
    spec.validate();
    for (size_t i = 0; i < count; ++i) out[i] = levystab::sample_sas_scalar(spec, rng->stream);
    return LVS_OK;
  });
}

lvs_status lvs_sample_isotropic(lvs_rng* rng, double alpha, double scale, double* out, size_t d) {
  if (!rng || !out) return null_arg("rng/out");
  return guarded([&] {
    const levystab::StableNoiseSpec spec{alpha, scale};
    spec.validate();
    if (d == 0) throw levystab::DomainError("dimension must be positive");
    levystab::sample_isotropic_vector(spec, rng->stream, {out, d});
    return LVS_OK;
  });
}

lvs_status lvs_w1_exact_1d(const double* a, const double* b, size_t n, double* out) {
  if (!a || !b || !out) return null_arg("a/b/out");
  return guarded([&] {
    *out = levystab::w1_exact_1d(levystab::EmpiricalMeasure(1, {a, a + n}),
                                 levystab::EmpiricalMeasure(1, {b, b + n}));
    return LVS_OK;
  });
}

lvs_status lvs_w1_assignment(const double* a, const double* b, size_t n, size_t d, double* out) {
  if (!a || !b || !out) return null_arg("a/b/out");
  return guarded([&] {
    *out = levystab::w1_assignment(levystab::EmpiricalMeasure(d, {a, a + n * d}),
                                   levystab::EmpiricalMeasure(d, {b, b + n * d}));
    return LVS_OK;
  });
}

}  // extern "C"
