#include "lyapnorm/lyapnorm.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "model_io.hpp"
#include "verify_suite.hpp"

using namespace lyapnorm;

struct lyp_model {
  Model m;
};

struct lyp_normal_form {
  NormalFormResult nf;
  PolydiskGeometry geom;
  lyp_normal_form(NormalFormResult r, PolydiskGeometry g)
      : nf(std::move(r)), geom(std::move(g)) {}
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_err(char** err, const std::string& msg) {
  if (err) *err = dup_string(msg);
}

lyp_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::none: return LYP_OK;
    case ErrorCode::input: return LYP_E_INPUT;
    case ErrorCode::resonance: return LYP_E_RESONANCE;
    case ErrorCode::validation: return LYP_E_VALIDATION;
    case ErrorCode::degenerate: return LYP_E_DEGENERATE;
    case ErrorCode::divergence: return LYP_E_DIVERGENCE;
    case ErrorCode::internal: return LYP_E_INTERNAL;
  }
  return LYP_E_INTERNAL;
}

template <typename Fn>
lyp_status guarded(char** err, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    set_err(err, e.what());
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    set_err(err, "out of memory");
    return LYP_E_INTERNAL;
  } catch (const std::exception& e) {
    set_err(err, e.what());
    return LYP_E_INTERNAL;
  }
}

}  // namespace

extern "C" {

const char* lyp_version(void) { return "0.1.0"; }

void lyp_string_free(char* s) { std::free(s); }

lyp_status lyp_model_parse(const char* json_text, lyp_model** out, char** err) {
  if (!json_text || !out) {
    set_err(err, "null argument");
    return LYP_E_INPUT;
  }
  return guarded(err, [&] {
    auto* handle = new lyp_model{parse_model_json(json_text)};
    *out = handle;
    return LYP_OK;
  });
}

lyp_status lyp_model_from_file(const char* path, lyp_model** out, char** err) {
  if (!path || !out) {
    set_err(err, "null argument");
    return LYP_E_INPUT;
  }
  return guarded(err, [&] {
    auto* handle = new lyp_model{load_model_file(path)};
    *out = handle;
    return LYP_OK;
  });
}

void lyp_model_free(lyp_model* model) { delete model; }

lyp_status lyp_model_info(const lyp_model* model, char** json_out) {
  if (!model || !json_out) return LYP_E_INPUT;
  return guarded(nullptr, [&] {
    nlohmann::json j;
    j["n"] = model->m.n;
    j["mode"] = mode_name(model->m.spectrum.mode);
    nlohmann::json lam = nlohmann::json::array();
    for (const Complex& l : model->m.spectrum.lambda)
      lam.push_back(nlohmann::json::array({l.real(), l.imag()}));
    j["lambda"] = lam;
    j["gamma"] = model->m.spectrum.gamma;
    j["gamma_empirical"] = model->m.spectrum.gamma_empirical;
    j["gamma_verified_up_to"] = model->m.spectrum.gamma_verified_up_to;
    j["radii"] = model->m.geometry.radii();
    *json_out = dup_string(dump_json_17(j));
    return LYP_OK;
  });
}

lyp_status lyp_model_set_radii(lyp_model* model, const double* radii, int n,
                               char** err) {
  if (!model || !radii) {
    set_err(err, "null argument");
    return LYP_E_INPUT;
  }
  return guarded(err, [&] {
    if (std::size_t(n) != model->m.n)
      fail(ErrorCode::input, "radii length must equal the model dimension");
    model->m.geometry = PolydiskGeometry(std::vector<double>(radii, radii + n));
    return LYP_OK;
  });
}

lyp_status lyp_model_set_mode(lyp_model* model, const char* mode, char** err) {
  if (!model || !mode) {
    set_err(err, "null argument");
    return LYP_E_INPUT;
  }
  return guarded(err, [&] {
    Mode m = mode_from_name(mode);
    // Re-verify the spectrum under the new mode.
    model->m.spectrum = make_spectrum(model->m.spectrum.lambda, m);
    return LYP_OK;
  });
}

void lyp_normalize_opts_init(lyp_normalize_opts* opts) {
  if (!opts) return;
  opts->order = 6;
  opts->trunc_order = 0;
  opts->prune = 0.0;
  opts->residual_tol = 1e-12;
}

lyp_status lyp_normalize(const lyp_model* model, const lyp_normalize_opts* opts,
                         lyp_normal_form** out, char** err) {
  if (!model || !opts || !out) {
    set_err(err, "null argument");
    return LYP_E_INPUT;
  }
  return guarded(err, [&] {
    int trunc = opts->trunc_order > 0 ? opts->trunc_order : -1;
    NormalFormResult nf =
        normalize(model->m.hamiltonian, model->m.spectrum, opts->order, trunc,
                  opts->prune, opts->residual_tol);
    nf.input_hash = model->m.input_hash;
    *out = new lyp_normal_form(std::move(nf), model->m.geometry);
    return LYP_OK;
  });
}

void lyp_normal_form_free(lyp_normal_form* nf) { delete nf; }

lyp_status lyp_normal_form_to_json(const lyp_normal_form* nf, char** json_out) {
  if (!nf || !json_out) return LYP_E_INPUT;
  return guarded(nullptr, [&] {
    *json_out = dup_string(dump_json_17(normal_form_to_json(nf->nf)));
    return LYP_OK;
  });
}

lyp_status lyp_normal_form_summary(const lyp_normal_form* nf, char** json_out) {
  if (!nf || !json_out) return LYP_E_INPUT;
  return guarded(nullptr, [&] {
    *json_out = dup_string(dump_json_17(normal_form_summary_json(nf->nf)));
    return LYP_OK;
  });
}

void lyp_certify_opts_init(lyp_certify_opts* opts) {
  if (!opts) return;
  opts->d = 0.25;
  opts->margin = 0.1;
  opts->exact_t = 0;
}

lyp_status lyp_certify(const lyp_normal_form* nf, const lyp_certify_opts* opts,
                       char** ledger_csv, char** certificate_json, char** err) {
  if (!nf || !opts) {
    set_err(err, "null argument");
    return LYP_E_INPUT;
  }
  return guarded(err, [&] {
    DeltaSequence ds(opts->d);
    BoundLedger ledger = build_ledger(nf->nf, nf->geom, ds, opts->exact_t != 0);
    if (ledger.degenerate)
      fail(ErrorCode::degenerate,
           "perturbation is empty; majorant fit is degenerate");
    Certificate cert = fit_certificate(chi_norms(nf->nf, nf->geom, ds.d()), ds,
                                       ledger.C, ledger.Lambda, opts->margin);
    if (ledger_csv) *ledger_csv = dup_string(ledger_to_csv(ledger));
    if (certificate_json)
      *certificate_json = dup_string(dump_json_17(certificate_to_json(cert, ledger)));
    if (!ledger.all_pass) {
      set_err(err, "ledger has rows with actual norm above the Lemma 3 bound");
      return LYP_E_VALIDATION;
    }
    return LYP_OK;
  });
}

void lyp_orbit_opts_init(lyp_orbit_opts* opts) {
  if (!opts) return;
  opts->amplitude = 0.01;
  opts->dt = 1e-3;
  opts->nsamples = 256;
}

lyp_status lyp_orbit(const lyp_normal_form* nf, const lyp_orbit_opts* opts,
                     char** orbit_csv, char** summary_json, char** err) {
  if (!nf || !opts) {
    set_err(err, "null argument");
    return LYP_E_INPUT;
  }
  return guarded(err, [&] {
    OrbitRun run = run_orbit_pipeline(nf->nf, nf->geom, opts->amplitude, opts->dt,
                                      opts->nsamples);
    if (orbit_csv) *orbit_csv = dup_string(orbit_to_csv(run.integrated, nf->nf.input));
    if (summary_json)
      *summary_json = dup_string(dump_json_17(
          orbit_summary_json(run.integrated, run.a1, run.zeta, nf->nf.order,
                             opts->amplitude, opts->dt)));
    return LYP_OK;
  });
}

void lyp_verify_opts_init(lyp_verify_opts* opts) {
  if (!opts) return;
  opts->trials = 200;
  opts->seed = 0;
  opts->d = 0.25;
}

lyp_status lyp_verify(const lyp_model* model, const lyp_verify_opts* opts,
                      char** report_json, char** err) {
  if (!model || !opts) {
    set_err(err, "null argument");
    return LYP_E_INPUT;
  }
  return guarded(err, [&] {
    VerifySuiteOptions vopts;
    vopts.trials = opts->trials;
    vopts.seed = opts->seed;
    vopts.d = opts->d;
    nlohmann::json report = run_verify_suite(model->m, vopts);
    if (report_json) *report_json = dup_string(dump_json_17(report));
    if (report["violations"].get<int>() > 0) {
      set_err(err, "verification suite found violated inequalities");
      return LYP_E_VALIDATION;
    }
    return LYP_OK;
  });
}

lyp_status lyp_convert_real(const char* real_json, char** model_json, char** err) {
  if (!real_json || !model_json) {
    set_err(err, "null argument");
    return LYP_E_INPUT;
  }
  return guarded(err, [&] {
    *model_json = dup_string(convert_real_model_json(real_json));
    return LYP_OK;
  });
}

}  // extern "C"
