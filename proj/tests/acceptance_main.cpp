// Acceptance suite: every criterion is evaluated at its stated tolerance on
// the reference model M (n = 2, lambda = (i, i sqrt2), H3 = (x1+y1)^2 (x2+y2),
// R = (1,1), d = 0.25, seed 0) and prints one pass/fail line.  The exit code
// is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "test_helpers.hpp"

using namespace lyapnorm;
using namespace testutil;

namespace {

struct Criterion {
  int id;
  std::string label;
  std::function<bool(std::string&)> run;
};

struct Context {
  Spectrum spec = model_m_spectrum();
  PolydiskGeometry geom{{1.0, 1.0}};
  GradedSeries H10 = model_m_series(10);
  NormalFormResult nf6 = normalize(H10, spec, 6, 10);
};

Context* ctx = nullptr;

bool criterion_homological(std::string& detail) {
  bool pass = true;
  double worst = 0.0;
  for (int r = 1; r <= 6; ++r) {
    double res = homological_residual(ctx->nf6.state, r);
    double ref = polydisk_norm(ctx->nf6.state.psis[std::size_t(r - 1)], ctx->geom, 0.0);
    if (res > 1e-12 * std::max(ref, 1e-300)) pass = false;
    if (ref > 0.0) worst = std::max(worst, res / ref);
  }
  detail = "worst relative residual " + format_double_17(worst);
  return pass;
}

bool criterion_oracle_equivalence(std::string& detail) {
  double worst = 0.0;
  auto compare = [&](const GradedSeries& H, const Spectrum& spec, int order) {
    NormalFormResult nf = normalize(H, spec, order, H.trunc_order());
    OraclePipelineResult oracle = oracle_pipeline(H, spec, order);
    worst = std::max(worst, max_rel_deviation(nf.state.assemble(), oracle.series));
  };
  compare(ctx->H10, ctx->spec, 6);
  Rng rng(0);
  for (int t = 0; t < 20; ++t) {
    std::size_t n = std::size_t(1 + t % 3);
    Spectrum spec = random_spectrum(rng, n, Mode::LyapunovManifold, true);
    int order = 3 + t % 4;  // orders 3..6
    GradedSeries H = random_cubic_model(rng, spec, order + 4);
    compare(H, spec, order);
  }
  detail = "max relative coefficient deviation " + format_double_17(worst) +
           " over M + 20 random models";
  return worst <= 1e-11;
}

bool criterion_structure(std::string& detail) {
  Polynomial z = ctx->nf6.state.sum_Z();
  bool pass = !z.empty();
  for (const auto& [e, c] : z.terms()) {
    bool kernel_power = e.diagonal() && e.natural_weight() == 0;
    bool flat = e.natural_weight() >= 2;
    if (!(kernel_power || flat)) pass = false;
  }
  if (!project_class(z, DivisorClass::Natural, Mode::LyapunovManifold).empty())
    pass = false;
  detail = std::to_string(z.size()) + " normal-form monomials, natural projection empty";
  return pass;
}

bool criterion_lemma2(std::string& detail) {
  bool pass = true;
  // Independent scan: every k in K_sharp u K_natural with |k| <= 200.
  auto scan = [&](const Spectrum& spec, int cap) {
    double gamma = spec.gamma;
    if (spec.gamma_empirical) pass = false;
    const std::size_t n = spec.dim();
    std::vector<std::vector<int>> tails{{}};  // tail exponents k_2..k_n
    std::vector<int> tail(n - 1, 0);
    std::function<void(std::size_t, int)> gen = [&](std::size_t slot, int left) {
      if (slot == n - 1) {
        bool nonzero = false;
        for (int v : tail) nonzero = nonzero || v != 0;
        if (nonzero) tails.push_back(tail);
        return;
      }
      for (int v = -left; v <= left; ++v) {
        tail[slot] = v;
        int used = std::abs(v);
        gen(slot + 1, left - used);
      }
    };
    if (n > 1) gen(0, cap);
    for (const auto& t : tails) {
      int tl1 = 0;
      Complex tv = 0.0;
      for (std::size_t l = 0; l + 1 < n; ++l) {
        tl1 += std::abs(t.size() ? t[l] : 0);
        if (!t.empty()) tv += double(t[l]) * spec.lambda[l + 1];
      }
      for (int k1 = -(200 - tl1); k1 <= 200 - tl1; ++k1) {
        int l1 = std::abs(k1) + tl1;
        if (l1 == 0) continue;
        double value = std::abs(double(k1) * spec.lambda[0] + tv);
        if (value < double(l1) * gamma * (1.0 - 1e-12)) pass = false;
      }
    }
  };
  Spectrum s1 = ctx->spec;
  scan(s1, 1);
  if (std::abs(s1.gamma - 0.10355339059327379) > 1e-6) pass = false;
  Spectrum s2 = make_spectrum({Complex(1, 0), Complex(0, 1)}, Mode::LyapunovManifold);
  scan(s2, 1);
  Spectrum s3 = make_spectrum(
      {Complex(0, 1), Complex(0, std::sqrt(2.0)), Complex(0, std::sqrt(5.0))},
      Mode::ExtendedCenter);
  scan(s3, 2);
  detail = "gamma = " + format_double_17(s1.gamma) + ", " +
           format_double_17(s2.gamma) + ", " + format_double_17(s3.gamma) +
           "; all |<k,lambda>| >= |k| gamma up to |k| = 200";
  return pass;
}

bool criterion_cauchy(std::string& detail) {
  Spectrum spec = model_m_spectrum(Mode::ExtendedCenter);
  Rng rng(0);
  const double deltas[3] = {0.1, 0.25, 0.5};
  int violations = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 200; ++t) {
    double delta = deltas[t % 3];
    Polynomial chi(2), Z(2);
    for (int attempt = 0; attempt < 8 && chi.empty(); ++attempt)
      chi = project_subspace(random_homogeneous(rng, 2, rng.uniform_int(3, 6)),
                             SubspaceTag::WPart, spec);
    Polynomial f = random_homogeneous(rng, 2, rng.uniform_int(3, 6));
    for (int attempt = 0; attempt < 8 && Z.empty(); ++attempt)
      Z = project_subspace(random_homogeneous(rng, 2, 2 * rng.uniform_int(2, 3)),
                           SubspaceTag::ZPart, spec);
    CauchyReport rep = verify_cauchy(chi, f, Z, spec, ctx->geom, 0.0, 0.0, delta);
    for (const CauchyCheck* c : {&rep.stimagen, &rep.general,
                                 &rep.natural_projection, &rep.normal_form}) {
      if (!c->pass) ++violations;
      min_slack = std::min(min_slack, c->slack);
    }
  }
  detail = "200 trials, " + std::to_string(violations) +
           " violations, min slack " + format_double_17(min_slack);
  return violations == 0;
}

bool criterion_ledger(std::string& detail) {
  DeltaSequence ds(0.25);
  BoundLedger ledger = build_ledger(ctx->nf6, ctx->geom, ds, false);
  bool pass = !ledger.degenerate && ledger.all_pass && ledger.rows.size() == 6;
  double worst = 0.0;
  for (const LedgerRow& row : ledger.rows)
    worst = std::max(worst, std::max(row.ratio_chi, row.ratio_Z));
  detail = "E = " + format_double_17(ledger.E) +
           ", C = " + format_double_17(ledger.C) +
           ", worst actual/bound ratio " + format_double_17(worst);
  return pass;
}

bool criterion_combinatorics(std::string& detail) {
  nlohmann::json seq = run_sequence_checks(0.25);
  bool pass = seq["violations"].get<int>() == 0;
  if (mu(1, 2) != 2 || catalan(4) != 5) pass = false;
  DeltaSequence ds(0.25);
  // the named anchors, re-stated directly
  if (t_exact(0, 5, ds) != 1.0) pass = false;
  double d1 = ds.d_r(1);
  if (std::abs(t_exact(1, 2, ds) - 1.0 / (d1 * d1)) > 1e-9 / (d1 * d1)) pass = false;
  detail = "T props over 0 <= r <= r' < s <= 7, mu and Catalan identities exact";
  return pass;
}

bool criterion_orbit(std::string& detail) {
  bool pass = true;
  double prev = std::numeric_limits<double>::infinity();
  double last_residual = 0.0, worst_drift = 0.0;
  for (int order = 2; order <= 6; ++order) {
    NormalFormResult nf = normalize(model_m_series(order + 4), ctx->spec, order,
                                    order + 4);
    OrbitRun run = run_orbit_pipeline(nf, ctx->geom, 0.01, 1e-3, 8);
    if (run.integrated.aperiodic) pass = false;
    if (run.integrated.residual > prev * (1.0 + 1e-12)) pass = false;
    prev = run.integrated.residual;
    last_residual = run.integrated.residual;
    worst_drift = std::max(worst_drift, run.integrated.energy_drift);
  }
  if (last_residual > 1e-6) pass = false;
  if (worst_drift > 1e-9) pass = false;
  detail = "residual at order 6 = " + format_double_17(last_residual) +
           ", worst energy drift " + format_double_17(worst_drift);
  return pass;
}

bool criterion_certificate(std::string& detail) {
  DeltaSequence ds(0.25);
  BoundLedger ledger = build_ledger(ctx->nf6, ctx->geom, ds, false);
  Certificate c6 = fit_certificate(chi_norms(ctx->nf6, ctx->geom, ds.d()), ds,
                                   ledger.C, ctx->geom.min_radius(), 0.1);
  bool pass = std::isfinite(c6.beta) && c6.beta > 0.0 && c6.rho > 0.0 &&
              c6.beta <= c6.beta_theoretical;
  NormalFormResult nf12 = normalize(model_m_series(16), ctx->spec, 12, 16);
  Certificate c12 = fit_certificate(chi_norms(nf12, ctx->geom, ds.d()), ds,
                                    ledger.C, ctx->geom.min_radius(), 0.1);
  double change = std::abs(c12.beta - c6.beta) / c6.beta;
  if (change > 0.20) pass = false;
  detail = "beta " + format_double_17(c6.beta) + " (order 12: " +
           format_double_17(c12.beta) + ", change " + format_double_17(change) +
           "), rho " + format_double_17(c6.rho);
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  Context context;
  ctx = &context;

  std::vector<Criterion> criteria{
      {1, "homological exactness to 1e-12 at orders 1..6", criterion_homological},
      {2, "recursion == direct exp(L_chi) to 1e-11 on M + 20 random models",
       criterion_oracle_equivalence},
      {3, "theorem 1 structure of sum Z_m (exact)", criterion_structure},
      {4, "lemma 2 small-divisor bound, brute force to |k| = 200", criterion_lemma2},
      {5, "cauchy estimates: 200 seeded trials, zero violations", criterion_cauchy},
      {6, "lemma 3 ledger: actual <= bound for r = 1..6, d = 0.25", criterion_ledger},
      {7, "combinatorial exactness of T, mu, Catalan", criterion_combinatorics},
      {8, "orbit residual non-increasing over orders 2..6, <= 1e-6 at 6",
       criterion_orbit},
      {9, "convergence certificate: beta finite, <= theoretical, stable",
       criterion_certificate},
  };

  const double budgets[10] = {0, 10.0, 60.0, 10.0, 5.0, 30.0, 10.0, 10.0, 30.0, 30.0};
  int failures = 0;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (elapsed > budgets[c.id]) {
      ok = false;
      detail += " [over the " + std::to_string(int(budgets[c.id])) + " s budget]";
    }
    std::printf("[%s] criterion %d: %s -- %s (%.2f s)\n", ok ? "PASS" : "FAIL",
                c.id, c.label.c_str(), detail.c_str(), elapsed);
    if (!ok) ++failures;
  }
  return failures;
}
