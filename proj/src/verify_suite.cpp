#include "verify_suite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lyapnorm {

using nlohmann::json;

Polynomial random_homogeneous(Rng& rng, std::size_t n, int degree) {
  Polynomial out(n);
  for (const ExponentPair& e : enumerate_monomials(n, degree))
    out.set_coefficient(e, Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)));
  return out;
}

namespace {

constexpr double kRelSlack = 1e-9;  // fp slack on exact combinatorial maxima

json check_t_properties(const DeltaSequence& ds, int& violations) {
  json out;
  int checked = 0;
  bool prop1 = true, prop2 = true, dominated = true;
  for (int s = 2; s <= 7; ++s) {
    for (int rp = 0; rp < s; ++rp) {
      double t_rp_s = t_exact(rp, s, ds);
      if (t_exact(0, s, ds) != 1.0) prop1 = false;
      for (int r = 0; r <= rp; ++r) {
        ++checked;
        if (t_exact(r, s, ds) > t_rp_s * (1.0 + kRelSlack)) prop1 = false;
        // T-prop.2 needs T_{r-1,r}; the r = 0 instance is vacuous (d_0 = 1,
        // empty J), so start at r = 1.
        if (r >= 1) {
          double lhs = t_exact(r - 1, r, ds) * t_rp_s / (ds.d_r(r) * ds.d_r(r));
          double rhs = t_exact(rp, r + s, ds);
          if (lhs > rhs * (1.0 + kRelSlack)) prop2 = false;
        }
      }
      if (t_rp_s > t_bound(s, ds.b()) * (1.0 + kRelSlack)) dominated = false;
    }
  }
  out["pairs_checked"] = checked;
  out["prop1_pass"] = prop1;
  out["prop2_pass"] = prop2;
  out["closed_bound_dominates"] = dominated;
  violations += (!prop1) + (!prop2) + (!dominated);
  return out;
}

json check_mu(int& violations) {
  json out;
  bool base = true, diag_identity = true, majorant = true;
  for (int s = 1; s <= 20; ++s)
    if (mu(0, s) != 1) base = false;
  if (mu(0, 0) != 0) base = false;
  if (mu(1, 2) != 2) base = false;
  for (int r = 1; r <= 12; ++r)
    for (int s = 0; s <= r; ++s)
      if (mu(r, s) != mu(r - 1, s)) diag_identity = false;
  for (int r = 1; r <= 25; ++r)
    if (mu(r - 1, r) > boost::multiprecision::pow(BigInt(4), unsigned(r - 1)))
      majorant = false;
  out["base_cases_pass"] = base;
  out["diagonal_identity_pass"] = diag_identity;
  out["majorant_4r_pass"] = majorant;
  violations += (!base) + (!diag_identity) + (!majorant);
  return out;
}

json check_catalan(int& violations) {
  json out;
  bool closed = true, bound = true;
  for (int r = 1; r <= 20; ++r)
    if (catalan(r) != catalan_closed(r)) closed = false;
  if (catalan(1) != 1 || catalan(4) != 5) closed = false;
  for (int r = 1; r <= 25; ++r)
    if (catalan(r) > boost::multiprecision::pow(BigInt(4), unsigned(r - 1)))
      bound = false;
  out["closed_form_pass"] = closed;
  out["bound_4r_pass"] = bound;
  violations += (!closed) + (!bound);
  return out;
}

}  // namespace

json run_sequence_checks(double d) {
  DeltaSequence ds(d);
  int violations = 0;
  json out;
  out["d"] = d;
  out["T"] = check_t_properties(ds, violations);
  out["mu"] = check_mu(violations);
  out["catalan"] = check_catalan(violations);
  out["violations"] = violations;
  return out;
}

json run_verify_suite(const Model& model, const VerifySuiteOptions& opts) {
  if (opts.trials < 0) fail(ErrorCode::input, "trials must be >= 0");
  json out;
  out["seed"] = opts.seed;
  out["trials"] = opts.trials;
  json warnings = json::array();
  int violations = 0;

  // Lemma 2 brute force on the model's spectrum.
  if (model.spectrum.mode != Mode::Birkhoff) {
    GammaCertificate cert = gamma_lower_bound(model.spectrum, 200);
    out["lemma2"] = json{{"gamma", cert.gamma},
                         {"N", cert.big_n},
                         {"delta_min", cert.delta_min},
                         {"theta", cert.theta},
                         {"empirical", cert.empirical},
                         {"verified_up_to", cert.verified_up_to}};
  } else {
    warnings.push_back("lemma2 brute force skipped in birkhoff mode");
  }

  out["sequences"] = run_sequence_checks(opts.d);
  violations += out["sequences"]["violations"].get<int>();

  // Randomized Cauchy-estimate trials.
  if (model.spectrum.mode == Mode::Birkhoff) {
    warnings.push_back("cauchy trials skipped in birkhoff mode (no gamma)");
  } else if (opts.trials == 0) {
    warnings.push_back("trials = 0: cauchy suite is a vacuous pass");
  } else {
    Rng rng(opts.seed);
    const std::size_t n = model.n;
    const double deltas[3] = {0.1, 0.25, 0.5};
    struct Stat {
      double min_slack = std::numeric_limits<double>::infinity();
      double max_ratio = 0.0;
      int violations = 0;
      void add(const CauchyCheck& c) {
        min_slack = std::min(min_slack, c.slack);
        if (c.rhs > 0.0) max_ratio = std::max(max_ratio, c.lhs / c.rhs);
        if (!c.pass) ++violations;
      }
      json to_json() const {
        return json{{"min_slack", min_slack},
                    {"max_ratio", max_ratio},
                    {"violations", violations}};
      }
    } s_gen, s_chi, s_nat, s_nf;

    for (int t = 0; t < opts.trials; ++t) {
      double delta = deltas[t % 3];
      Polynomial chi(n), Z(n);
      for (int attempt = 0; attempt < 8 && chi.empty(); ++attempt)
        chi = project_subspace(random_homogeneous(rng, n, rng.uniform_int(3, 6)),
                               SubspaceTag::WPart, model.spectrum);
      Polynomial f = random_homogeneous(rng, n, rng.uniform_int(3, 6));
      for (int attempt = 0; attempt < 8 && Z.empty(); ++attempt)
        Z = project_subspace(random_homogeneous(rng, n, 2 * rng.uniform_int(2, 3)),
                             SubspaceTag::ZPart, model.spectrum);
      CauchyReport rep = verify_cauchy(chi, f, Z, model.spectrum, model.geometry,
                                       0.0, 0.0, delta);
      s_chi.add(rep.stimagen);
      s_gen.add(rep.general);
      s_nat.add(rep.natural_projection);
      s_nf.add(rep.normal_form);
    }
    int cauchy_violations =
        s_chi.violations + s_gen.violations + s_nat.violations + s_nf.violations;
    violations += cauchy_violations;
    out["cauchy"] = json{{"stimagen", s_chi.to_json()},
                         {"general", s_gen.to_json()},
                         {"natural_projection", s_nat.to_json()},
                         {"normal_form", s_nf.to_json()},
                         {"violations", cauchy_violations}};
  }

  out["warnings"] = warnings;
  out["violations"] = violations;
  return out;
}

}  // namespace lyapnorm
