// lyapnorm command line front end.  All functionality comes through the C API
// of the shared library; this file only handles argument parsing, file IO and
// report formatting.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lyapnorm/lyapnorm.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void die(int code, const std::string& msg) {
  throw CliError{code, msg};
}

std::string take_string(char* s) {
  std::string out = s ? s : "";
  lyp_string_free(s);
  return out;
}

void check(lyp_status st, char* err, const char* what) {
  if (st == LYP_OK) {
    lyp_string_free(err);
    return;
  }
  std::string msg = err ? err : "unknown error";
  lyp_string_free(err);
  die(int(st), std::string(what) + ": " + msg);
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) die(1, "cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

std::vector<double> parse_radii(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (...) {
      die(1, "bad --radii value: " + item);
    }
  }
  return out;
}

int read_thread_cap() {
  const char* env = std::getenv("LYAPNORM_THREADS");
  if (!env) return 1;
  int v = std::atoi(env);
  if (v < 1) {
    std::cerr << "warning: LYAPNORM_THREADS must be a positive integer; using 1\n";
    return 1;
  }
  return v;
}

struct CommonOpts {
  std::string in;
  std::string out = ".";
  std::string order = "6";
  std::string mode;
  std::string radii;
  double prune = 0.0;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_order = true) {
  cmd->add_option("--in", o.in, "input model JSON")->required();
  cmd->add_option("--out", o.out, "output directory");
  if (with_order) cmd->add_option("--order", o.order, "normalization order (N or A:B)");
  cmd->add_option("--mode", o.mode, "override the model mode (thm1|thm2|birkhoff)");
  cmd->add_option("--radii", o.radii, "polydisk radii, comma separated");
  cmd->add_option("--prune", o.prune, "relative coefficient prune threshold");
}

std::pair<int, int> parse_order_range(const std::string& text) {
  auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      int v = std::stoi(text);
      return {v, v};
    }
    int a = std::stoi(text.substr(0, colon));
    int b = std::stoi(text.substr(colon + 1));
    return {a, b};
  } catch (...) {
    die(1, "bad --order value: " + text);
  }
}

struct ModelHandle {
  lyp_model* m = nullptr;
  ~ModelHandle() { lyp_model_free(m); }
};

struct NfHandle {
  lyp_normal_form* nf = nullptr;
  ~NfHandle() { lyp_normal_form_free(nf); }
};

void load_model(const CommonOpts& o, ModelHandle& model) {
  char* err = nullptr;
  lyp_status st = lyp_model_from_file(o.in.c_str(), &model.m, &err);
  check(st, err, "input");
  if (!o.mode.empty()) {
    err = nullptr;
    st = lyp_model_set_mode(model.m, o.mode.c_str(), &err);
    check(st, err, "mode");
  }
  if (!o.radii.empty()) {
    std::vector<double> r = parse_radii(o.radii);
    err = nullptr;
    st = lyp_model_set_radii(model.m, r.data(), int(r.size()), &err);
    check(st, err, "radii");
  }
}

void run_normalize_into(const ModelHandle& model, int order, double prune,
                        NfHandle& nf) {
  if (order < 1) die(1, "order must be >= 1");
  lyp_normalize_opts opts;
  lyp_normalize_opts_init(&opts);
  opts.order = order;
  opts.prune = prune;
  char* err = nullptr;
  lyp_status st = lyp_normalize(model.m, &opts, &nf.nf, &err);
  check(st, err, "normalize");
}

int cmd_normalize(const CommonOpts& o) {
  ModelHandle model;
  load_model(o, model);
  auto [lo, hi] = parse_order_range(o.order);
  if (lo != hi) die(1, "normalize takes a single order");
  NfHandle nf;
  run_normalize_into(model, lo, o.prune, nf);

  char* out_json = nullptr;
  check(lyp_normal_form_to_json(nf.nf, &out_json), nullptr, "serialize");
  write_file_atomic(fs::path(o.out) / "normalform.json", take_string(out_json));

  char* summary = nullptr;
  check(lyp_normal_form_summary(nf.nf, &summary), nullptr, "summary");
  json s = json::parse(take_string(summary));
  std::printf("normalized to order %d (mode %s, gamma %.9g%s)\n",
              s["order"].get<int>(), s["mode"].get<std::string>().c_str(),
              s["gamma"].get<double>(),
              s["gamma_empirical"].get<bool>() ? ", empirical" : "");
  std::printf("%4s %14s %14s %14s\n", "r", "|chi_r|_1", "|Z_r|_1", "residual");
  for (const auto& row : s["residuals"])
    std::printf("%4d %14.6e %14.6e %14.6e\n", row["r"].get<int>(),
                row["chi_l1"].get<double>(), row["Z_l1"].get<double>(),
                row["relative_residual"].get<double>());
  std::printf("wrote %s\n", (fs::path(o.out) / "normalform.json").c_str());
  return 0;
}

int cmd_certify(const CommonOpts& o, double d, double margin, bool exact_t) {
  if (!(d > 0.0 && d < 0.5)) die(1, "certify requires 0 < d < 1/2");
  ModelHandle model;
  load_model(o, model);
  auto [lo, hi] = parse_order_range(o.order);
  if (lo != hi) die(1, "certify takes a single order");
  NfHandle nf;
  run_normalize_into(model, lo, o.prune, nf);

  lyp_certify_opts opts;
  lyp_certify_opts_init(&opts);
  opts.d = d;
  opts.margin = margin;
  opts.exact_t = exact_t ? 1 : 0;
  char *ledger = nullptr, *cert = nullptr, *err = nullptr;
  lyp_status st = lyp_certify(nf.nf, &opts, &ledger, &cert, &err);
  std::string ledger_s = take_string(ledger), cert_s = take_string(cert);
  if (st != LYP_OK && ledger_s.empty()) check(st, err, "certify");
  write_file_atomic(fs::path(o.out) / "ledger.csv", ledger_s);
  write_file_atomic(fs::path(o.out) / "certificate.json", cert_s);
  std::printf("%s", ledger_s.c_str());
  json c = json::parse(cert_s);
  std::printf("beta %.6e (theoretical %.6e)  G %.6e  rho %.6e\n",
              c["beta"].get<double>(), c["beta_theoretical"].get<double>(),
              c["G"].get<double>(), c["rho"].get<double>());
  if (st != LYP_OK) {
    std::string msg = err ? err : "certification failed";
    lyp_string_free(err);
    std::fprintf(stderr, "certify: %s\n", msg.c_str());
    return int(st);
  }
  lyp_string_free(err);
  return 0;
}

int cmd_orbit(const CommonOpts& o, double amplitude, double dt, int nsamples) {
  ModelHandle model;
  load_model(o, model);
  auto [lo, hi] = parse_order_range(o.order);
  if (lo < 1 || hi < lo) die(1, "bad order range");

  json rows = json::array();
  std::string last_csv;
  for (int order = lo; order <= hi; ++order) {
    NfHandle nf;
    run_normalize_into(model, order, o.prune, nf);
    lyp_orbit_opts opts;
    lyp_orbit_opts_init(&opts);
    opts.amplitude = amplitude;
    opts.dt = dt;
    opts.nsamples = nsamples;
    char *csv = nullptr, *summary = nullptr, *err = nullptr;
    lyp_status st = lyp_orbit(nf.nf, &opts, &csv, &summary, &err);
    check(st, err, "orbit");
    last_csv = take_string(csv);
    rows.push_back(json::parse(take_string(summary)));
  }
  write_file_atomic(fs::path(o.out) / "orbit.csv", last_csv);
  json summary;
  summary["rows"] = rows;
  write_file_atomic(fs::path(o.out) / "orbit_summary.json", summary.dump(2) + "\n");
  std::printf("%6s %14s %14s %14s %10s\n", "order", "period", "residual",
              "energy_drift", "aperiodic");
  for (const auto& row : rows)
    std::printf("%6d %14.6e %14.6e %14.6e %10s\n", row["order"].get<int>(),
                row["period"].get<double>(), row["residual"].get<double>(),
                row["energy_drift"].get<double>(),
                row["aperiodic"].get<bool>() ? "yes" : "no");
  return 0;
}

int cmd_verify(const CommonOpts& o, int trials, unsigned long long seed, double d) {
  ModelHandle model;
  load_model(o, model);
  lyp_verify_opts opts;
  lyp_verify_opts_init(&opts);
  opts.trials = trials;
  opts.seed = seed;
  opts.d = d;
  char *report = nullptr, *err = nullptr;
  lyp_status st = lyp_verify(model.m, &opts, &report, &err);
  std::string report_s = take_string(report);
  if (report_s.empty()) check(st, err, "verify");
  write_file_atomic(fs::path(o.out) / "verify_report.json", report_s);
  json r = json::parse(report_s);
  std::printf("verify: %d trials, %d violations\n", r["trials"].get<int>(),
              r["violations"].get<int>());
  for (const auto& w : r["warnings"])
    std::printf("warning: %s\n", w.get<std::string>().c_str());
  if (r.contains("cauchy"))
    for (const char* key :
         {"stimagen", "general", "natural_projection", "normal_form"})
      std::printf("  %-20s min_slack %.6e  max_ratio %.6f\n", key,
                  r["cauchy"][key]["min_slack"].get<double>(),
                  r["cauchy"][key]["max_ratio"].get<double>());
  if (st != LYP_OK) {
    std::string msg = err ? err : "verification failed";
    lyp_string_free(err);
    std::fprintf(stderr, "verify: %s\n", msg.c_str());
    return int(st);
  }
  lyp_string_free(err);
  return 0;
}

int cmd_convert(const std::string& in, const std::string& out) {
  std::ifstream f(in, std::ios::binary);
  if (!f) die(1, "cannot open " + in);
  std::ostringstream buf;
  buf << f.rdbuf();
  char *converted = nullptr, *err = nullptr;
  lyp_status st = lyp_convert_real(buf.str().c_str(), &converted, &err);
  check(st, err, "convert");
  write_file_atomic(out, take_string(converted));
  std::printf("wrote %s\n", out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lyapounov normal forms of polynomial Hamiltonians"};
  app.set_version_flag("--version", std::string(lyp_version()));
  app.require_subcommand(1);
  (void)read_thread_cap();  // parallelism cap; execution is sequential

  CommonOpts norm_o, cert_o, orb_o, ver_o;
  double cert_d = 0.25, cert_margin = 0.1;
  bool cert_exact_t = false;
  double orb_amplitude = 0.01, orb_dt = 1e-3;
  int orb_nsamples = 256;
  int ver_trials = 200;
  unsigned long long ver_seed = 0;
  double ver_d = 0.25;
  std::string conv_in, conv_out = "model_complex.json";

  CLI::App* normalize = app.add_subcommand("normalize", "compute the normal form");
  add_common(normalize, norm_o);

  CLI::App* certify =
      app.add_subcommand("certify", "evaluate the bound ledger and certificate");
  add_common(certify, cert_o);
  certify->add_option("--d", cert_d, "domain-loss budget, 0 < d < 1/2");
  certify->add_option("--margin", cert_margin, "displacement margin for rho");
  certify->add_flag("--exact-t", cert_exact_t, "use exact T enumeration");

  CLI::App* orbit = app.add_subcommand("orbit", "synthesize and validate orbits");
  add_common(orbit, orb_o);
  orbit->add_option("--amplitude", orb_amplitude, "manifold amplitude xi0 = eta0");
  orbit->add_option("--dt", orb_dt, "RK4 step");
  orbit->add_option("--nsamples", orb_nsamples, "trajectory samples in the CSV");

  CLI::App* verify = app.add_subcommand("verify", "run the inequality suite");
  add_common(verify, ver_o, /*with_order=*/false);
  verify->add_option("--trials", ver_trials, "randomized trials");
  verify->add_option("--seed", ver_seed, "RNG seed");
  verify->add_option("--d", ver_d, "delta sequence budget");

  CLI::App* convert =
      app.add_subcommand("convert", "convert a real oscillator model to complex form");
  convert->add_option("--in", conv_in, "real model JSON")->required();
  convert->add_option("--out", conv_out, "output model JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (normalize->parsed()) return cmd_normalize(norm_o);
    if (certify->parsed()) return cmd_certify(cert_o, cert_d, cert_margin, cert_exact_t);
    if (orbit->parsed()) return cmd_orbit(orb_o, orb_amplitude, orb_dt, orb_nsamples);
    if (verify->parsed()) return cmd_verify(ver_o, ver_trials, ver_seed, ver_d);
    if (convert->parsed()) return cmd_convert(conv_in, conv_out);
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 9;
  }
  return 1;
}
