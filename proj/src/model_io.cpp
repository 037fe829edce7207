#include "model_io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace lyapnorm {

using nlohmann::json;

namespace {

Complex complex_from_json(const json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex(j[0].get<double>(), j[1].get<double>());
  fail(ErrorCode::input, "expected a number or [re,im] pair, got " + j.dump());
}

json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

std::vector<int> int_vector_from_json(const json& j, std::size_t n,
                                      const char* field) {
  if (!j.is_array() || j.size() != n)
    fail(ErrorCode::input, std::string("field '") + field +
                               "' must be an array of length n");
  std::vector<int> out;
  out.reserve(n);
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<int>() < 0)
      fail(ErrorCode::input, std::string("field '") + field +
                                 "' must hold non-negative integers");
    out.push_back(v.get<int>());
  }
  return out;
}

json parse_json_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(ErrorCode::input, "malformed JSON input");
  return j;
}

}  // namespace

Polynomial polynomial_from_json(const json& j, std::size_t n) {
  Polynomial out(n);
  if (!j.is_array()) fail(ErrorCode::input, "terms must be an array");
  for (const auto& t : j) {
    if (t.is_string()) {
      out += Polynomial::parse_text(t.get<std::string>(), n);
      continue;
    }
    if (!t.is_object() || !t.contains("j") || !t.contains("k") || !t.contains("c"))
      fail(ErrorCode::input, "term must be {j, k, c} or a text string: " + t.dump());
    ExponentPair e(int_vector_from_json(t["j"], n, "j"),
                   int_vector_from_json(t["k"], n, "k"));
    out.add_term(e, complex_from_json(t["c"]));
  }
  return out;
}

json polynomial_to_json(const Polynomial& p) {
  json arr = json::array();
  for (const auto& [e, c] : p.terms()) {
    json t;
    t["j"] = e.j_vector();
    t["k"] = e.k_vector();
    t["c"] = complex_to_json(c);
    arr.push_back(t);
  }
  return arr;
}

Model parse_model_json(const std::string& text, int verify_up_to) {
  json j = parse_json_text(text);
  if (!j.is_object()) fail(ErrorCode::input, "model must be a JSON object");
  if (!j.contains("n") || !j["n"].is_number_integer())
    fail(ErrorCode::input, "model field 'n' (dimension) missing or not an integer");
  const std::size_t n = j["n"].get<std::size_t>();
  if (n < 1 || n > kMaxDim) fail(ErrorCode::input, "model dimension must be in 1..8");
  if (!j.contains("lambda") || !j["lambda"].is_array() || j["lambda"].size() != n)
    fail(ErrorCode::input, "model field 'lambda' must be an array of n eigenvalues");
  std::vector<Complex> lambda;
  for (const auto& v : j["lambda"]) lambda.push_back(complex_from_json(v));
  Mode mode = Mode::LyapunovManifold;
  if (j.contains("mode")) mode = mode_from_name(j["mode"].get<std::string>());

  std::vector<double> radii(n, 1.0);
  if (j.contains("radii")) {
    if (!j["radii"].is_array() || j["radii"].size() != n)
      fail(ErrorCode::input, "model field 'radii' must be an array of n positives");
    for (std::size_t l = 0; l < n; ++l) radii[l] = j["radii"][l].get<double>();
  }

  Model model;
  model.n = n;
  model.geometry = PolydiskGeometry(radii);
  model.spectrum = make_spectrum(lambda, mode, verify_up_to);
  model.input_hash = fnv1a64(text);

  Polynomial perturbation(n);
  if (j.contains("terms")) perturbation = polynomial_from_json(j["terms"], n);
  int max_deg = std::max(2, perturbation.max_degree());
  GradedSeries H(n, max_deg);
  Polynomial H0(n);
  for (std::size_t l = 0; l < n; ++l) {
    ExponentPair e(n);
    e.set_j(l, 1);
    e.set_k(l, 1);
    H0.set_coefficient(e, lambda[l]);
  }
  H.accumulate(H0);
  H.accumulate(perturbation);
  model.hamiltonian = std::move(H);
  return model;
}

Model load_model_file(const std::string& path, int verify_up_to) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::input, "cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model_json(buf.str(), verify_up_to);
}

std::string convert_real_model_json(const std::string& text) {
  json j = parse_json_text(text);
  if (!j.is_object()) fail(ErrorCode::input, "real model must be a JSON object");
  if (!j.contains("n") || !j["n"].is_number_integer())
    fail(ErrorCode::input, "real model field 'n' missing");
  const std::size_t n = j["n"].get<std::size_t>();
  if (n < 1 || n > kMaxDim) fail(ErrorCode::input, "dimension must be in 1..8");
  Polynomial H_qp(n);
  if (!j.contains("terms") || !j["terms"].is_array())
    fail(ErrorCode::input, "real model field 'terms' missing");
  for (const auto& t : j["terms"]) {
    if (!t.is_object() || !t.contains("q") || !t.contains("p") || !t.contains("c"))
      fail(ErrorCode::input, "real term must be {q, p, c}: " + t.dump());
    ExponentPair e(int_vector_from_json(t["q"], n, "q"),
                   int_vector_from_json(t["p"], n, "p"));
    Complex c = complex_from_json(t["c"]);
    if (c.imag() != 0.0)
      fail(ErrorCode::input, "real model coefficients must be real");
    H_qp.add_term(e, c);
  }
  RealifyResult res = realify(H_qp);

  json out;
  out["n"] = n;
  if (j.contains("mode")) out["mode"] = j["mode"];
  json lam = json::array();
  for (std::size_t l = 0; l < n; ++l) lam.push_back(json::array({0.0, res.omega[l]}));
  out["lambda"] = lam;
  if (j.contains("radii")) out["radii"] = j["radii"];
  Polynomial flat = res.hamiltonian.flatten();
  Polynomial higher(n);
  for (const auto& [e, c] : flat.terms())
    if (e.degree() >= 3) higher.set_coefficient(e, c);
  out["terms"] = polynomial_to_json(higher);
  return dump_json_17(out);
}

json normal_form_to_json(const NormalFormResult& nf) {
  json out;
  char hash_buf[32];
  std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                static_cast<unsigned long long>(nf.input_hash));
  out["provenance"] = {{"input_hash", hash_buf},
                       {"order", nf.order},
                       {"trunc_order", nf.state.trunc_order},
                       {"mode", mode_name(nf.spectrum.mode)},
                       {"prune", nf.prune},
                       {"residual_tol", nf.residual_tol}};
  json lam = json::array();
  for (const Complex& l : nf.spectrum.lambda) lam.push_back(complex_to_json(l));
  out["lambda"] = lam;
  out["gamma"] = nf.spectrum.gamma;
  out["gamma_verified_up_to"] = nf.spectrum.gamma_verified_up_to;
  out["gamma_empirical"] = nf.spectrum.gamma_empirical;

  json zs = json::array(), chis = json::array();
  for (int m = 1; m <= nf.order; ++m) {
    zs.push_back(json{{"order", m},
                      {"degree", m + 2},
                      {"terms", polynomial_to_json(nf.state.Z[std::size_t(m - 1)])}});
    chis.push_back(json{{"order", m},
                        {"degree", m + 2},
                        {"terms", polynomial_to_json(nf.state.chi[std::size_t(m - 1)])}});
  }
  out["Z"] = zs;
  out["chi"] = chis;
  json tail = json::array();
  for (const auto& [d, p] : nf.state.tail.parts())
    tail.push_back(json{{"degree", d}, {"terms", polynomial_to_json(p)}});
  out["tail"] = tail;
  out["residuals"] = normal_form_summary_json(nf)["residuals"];
  return out;
}

json normal_form_summary_json(const NormalFormResult& nf) {
  json out;
  out["order"] = nf.order;
  out["mode"] = mode_name(nf.spectrum.mode);
  out["gamma"] = nf.spectrum.gamma;
  out["gamma_empirical"] = nf.spectrum.gamma_empirical;
  out["trunc_order"] = nf.state.trunc_order;
  json rows = json::array();
  for (int r = 1; r <= nf.order; ++r) {
    double res = homological_residual(nf.state, r);
    double ref = nf.state.psis[std::size_t(r - 1)].coefficient_l1_norm();
    rows.push_back(json{
        {"r", r},
        {"chi_l1", nf.state.chi[std::size_t(r - 1)].coefficient_l1_norm()},
        {"Z_l1", nf.state.Z[std::size_t(r - 1)].coefficient_l1_norm()},
        {"residual", res},
        {"relative_residual", ref > 0.0 ? res / ref : 0.0}});
  }
  out["residuals"] = rows;
  return out;
}

std::string ledger_to_csv(const BoundLedger& ledger) {
  std::ostringstream os;
  os << "r,actual_chi,bound_chi,ratio,mu,T_path,pass,actual_Z,bound_Z,ratio_Z\n";
  for (const LedgerRow& row : ledger.rows) {
    os << row.r << "," << format_double_17(row.actual_chi) << ","
       << format_double_17(row.bound_chi) << "," << format_double_17(row.ratio_chi)
       << "," << format_double_17(row.mu_value) << "," << row.t_path << ","
       << (row.pass ? "pass" : "fail") << "," << format_double_17(row.actual_Z)
       << "," << format_double_17(row.bound_Z) << ","
       << format_double_17(row.ratio_Z) << "\n";
  }
  return os.str();
}

json certificate_to_json(const Certificate& cert, const BoundLedger& ledger) {
  json out;
  out["beta"] = cert.beta;
  out["G"] = cert.G;
  out["beta_theoretical"] = cert.beta_theoretical;
  out["rho"] = cert.rho;
  out["margin"] = cert.margin;
  out["orders"] = cert.orders;
  out["E"] = ledger.E;
  out["h"] = ledger.h;
  out["C"] = ledger.C;
  out["gamma"] = ledger.gamma;
  out["Lambda"] = ledger.Lambda;
  out["d"] = ledger.d;
  out["b"] = ledger.b;
  out["ledger_all_pass"] = ledger.all_pass;
  return out;
}

json orbit_summary_json(const OrbitSample& integrated, Complex a1, Complex zeta,
                        int order, double amplitude, double dt) {
  json out;
  out["order"] = order;
  out["amplitude"] = amplitude;
  out["dt"] = dt;
  out["zeta"] = complex_to_json(zeta);
  out["a1"] = complex_to_json(a1);
  out["period"] = integrated.period;
  out["aperiodic"] = integrated.aperiodic;
  out["residual"] = integrated.residual;
  out["energy_drift"] = integrated.energy_drift;
  return out;
}

std::string orbit_to_csv(const OrbitSample& sample, const GradedSeries& H) {
  const std::size_t n = H.dim();
  Polynomial Hp = H.flatten();
  std::ostringstream os;
  os << "t";
  for (std::size_t l = 1; l <= n; ++l) os << ",x" << l << "_re,x" << l << "_im";
  for (std::size_t l = 1; l <= n; ++l) os << ",y" << l << "_re,y" << l << "_im";
  os << ",H_re,H_im\n";
  for (std::size_t i = 0; i < sample.times.size(); ++i) {
    os << format_double_17(sample.times[i]);
    const auto& st = sample.states[i];
    for (std::size_t l = 0; l < 2 * n; ++l)
      os << "," << format_double_17(st[l].real()) << ","
         << format_double_17(st[l].imag());
    std::vector<Complex> x(st.begin(), st.begin() + long(n));
    std::vector<Complex> y(st.begin() + long(n), st.end());
    Complex hv = Hp.evaluate(x, y);
    os << "," << format_double_17(hv.real()) << "," << format_double_17(hv.imag())
       << "\n";
  }
  return os.str();
}

std::string format_double_17(double v) {
  char buf[48];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

void dump_json_17_impl(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        dump_json_17_impl(it.value(), out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        dump_json_17_impl(v, out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float: {
      double v = j.get<double>();
      if (std::isfinite(v))
        out += format_double_17(v);
      else
        out += v > 0 ? "\"inf\"" : (v < 0 ? "\"-inf\"" : "\"nan\"");
      break;
    }
    default:
      out += j.dump();
      break;
  }
}

}  // namespace

std::string dump_json_17(const json& j) {
  std::string out;
  dump_json_17_impl(j, out);
  out += '\n';
  return out;
}

void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::input, "cannot write file: " + tmp.string());
    out << content;
    if (!out.good()) fail(ErrorCode::input, "write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t Rng::next_u64() {
  // splitmix64
  state_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double Rng::uniform(double lo, double hi) {
  double u = double(next_u64() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

int Rng::uniform_int(int lo, int hi) {
  if (hi < lo) fail(ErrorCode::input, "empty integer range");
  std::uint64_t span = std::uint64_t(hi - lo) + 1;
  return lo + int(next_u64() % span);
}

}  // namespace lyapnorm
