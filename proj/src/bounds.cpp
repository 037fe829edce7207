#include "bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

namespace lyapnorm {

DeltaSequence::DeltaSequence(double d) : d_(d) {
  if (!(d > 0.0 && d < 0.5))
    fail(ErrorCode::input, "domain-loss budget d must satisfy 0 < d < 1/2");
  b_ = 6.0 * d / (std::numbers::pi * std::numbers::pi);
}

double DeltaSequence::d_r(int r) const {
  if (r < 0) fail(ErrorCode::input, "d_r index must be >= 0");
  if (r == 0) return 1.0;
  return b_ / (double(r) * double(r));
}

double DeltaSequence::delta_r(int r) const {
  if (r < 0) fail(ErrorCode::input, "delta_r index must be >= 0");
  double s = 0.0;
  for (int j = r; j >= 1; --j) s += d_r(j);
  return s;
}

double t_exact(int r, int s, const DeltaSequence& ds) {
  if (r < 0 || s < 1 || r >= s)
    fail(ErrorCode::input, "t_exact requires 0 <= r < s");
  if (r == 0) return 1.0;
  if (s > 14) fail(ErrorCode::input, "t_exact enumeration guarded at s <= 14");

  const int max_card = 2 * (s - 1);
  const double budget = 2.0 * (double(s - 1) - std::log2(double(s))) + 1e-9;
  std::vector<double> inv_d(std::size_t(r) + 1), lg(std::size_t(r) + 1);
  for (int j = 1; j <= r; ++j) {
    inv_d[std::size_t(j)] = 1.0 / ds.d_r(j);
    lg[std::size_t(j)] = std::log2(double(j));
  }
  const double inv_d1 = inv_d[1];
  double best = 0.0;
  // Multisets over {2..r} padded with ones up to full cardinality; ones are
  // free in the budget and d_1 < 1, so padding never lowers the product.
  std::function<void(int, int, double, double)> dfs = [&](int v, int count,
                                                          double used, double prod) {
    if (v < 2) {
      best = std::max(best, prod * std::pow(inv_d1, max_card - count));
      return;
    }
    for (int c = 0; count + c <= max_card && used + c * lg[std::size_t(v)] <= budget;
         ++c)
      dfs(v - 1, count + c, used + c * lg[std::size_t(v)],
          prod * std::pow(inv_d[std::size_t(v)], c));
  };
  dfs(r, 0, 0.0, 1.0);
  return best;
}

double t_bound(int s, double b) {
  if (s < 1) fail(ErrorCode::input, "t_bound requires s >= 1");
  if (!(b > 0.0)) fail(ErrorCode::input, "t_bound requires b > 0");
  return std::pow(16.0 / (b * b), double(s - 1));
}

namespace {

BigInt mu_impl(int r, int s, std::map<std::pair<int, int>, BigInt>& table) {
  if (r == 0) return s == 0 ? BigInt(0) : BigInt(1);
  auto key = std::make_pair(r, s);
  auto it = table.find(key);
  if (it != table.end()) return it->second;
  BigInt diag = mu_impl(r - 1, r, table);
  BigInt sum = 0;
  BigInt diag_pow = 1;  // diag^p
  for (int p = 0; r * p < s; ++p) {
    sum += diag_pow * mu_impl(r - 1, s - r * p, table);
    diag_pow *= diag;
  }
  table.emplace(key, sum);
  return sum;
}

}  // namespace

BigInt mu(int r, int s) {
  if (r < 0 || s < 0) fail(ErrorCode::input, "mu indices must be >= 0");
  static std::map<std::pair<int, int>, BigInt> table;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  return mu_impl(r, s, table);
}

BigInt catalan(int r) {
  if (r < 1) fail(ErrorCode::input, "catalan index must be >= 1");
  static std::vector<BigInt> table{BigInt(0), BigInt(1)};  // table[1] = 1
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  for (int m = int(table.size()); m <= r; ++m) {
    BigInt sum = 0;
    for (int j = 1; j <= m - 1; ++j) sum += table[std::size_t(j)] * table[std::size_t(m - j)];
    table.push_back(sum);
  }
  return table[std::size_t(r)];
}

BigInt catalan_closed(int r) {
  if (r < 1) fail(ErrorCode::input, "catalan index must be >= 1");
  BigInt num = boost::multiprecision::pow(BigInt(2), unsigned(r - 1));
  for (int odd = 1; odd <= 2 * r - 3; odd += 2) num *= odd;  // (2r-3)!!, empty = 1
  BigInt den = 1;
  for (int j = 2; j <= r; ++j) den *= j;
  if (num % den != 0) fail(ErrorCode::internal, "catalan closed form not integral");
  return num / den;
}

double constant_C(double h, double E, double gamma, double Lambda) {
  if (h < 0.0 || E < 0.0) fail(ErrorCode::input, "majorant constants must be >= 0");
  if (!(gamma > 0.0) || !(Lambda > 0.0))
    fail(ErrorCode::input, "gamma and Lambda must be positive");
  const double e2 = std::numbers::e * std::numbers::e;
  return h + 4.0 * e2 * E / (gamma * Lambda * Lambda);
}

namespace {

double t_value(int r, int s, const DeltaSequence& ds, bool exact_T) {
  return exact_T ? t_exact(r, s, ds) : t_bound(s, ds.b());
}

}  // namespace

OrderBounds lemma3_order_bounds(int r, double E, double h, double gamma,
                                double Lambda, const DeltaSequence& ds,
                                bool exact_T) {
  if (r < 1) fail(ErrorCode::input, "lemma3 bounds require r >= 1");
  const double C = constant_C(h, E, gamma, Lambda);
  const double mu_v = mu(r - 1, r).convert_to<double>();
  const double T = t_value(r - 1, r, ds, exact_T);
  const double common = mu_v * T * std::pow(C, double(r - 1)) * E;
  OrderBounds out;
  out.chi = common / gamma;
  out.Z = common / ds.d_r(r - 1);
  out.Zsharp = common;
  return out;
}

TailBounds lemma3_tail_bound(int r, int s, double E, double h, double gamma,
                             double Lambda, const DeltaSequence& ds, bool exact_T) {
  if (r < 0 || s <= r) fail(ErrorCode::input, "lemma3 tail bound requires s > r >= 0");
  const double C = constant_C(h, E, gamma, Lambda);
  const double mu_v = mu(r, s).convert_to<double>();
  const double T = t_value(r, s, ds, exact_T);
  const double common = mu_v * T * std::pow(C, double(s - 1)) * E;
  return TailBounds{common / ds.d_r(r), common};
}

MajorantFit majorize_input(const GradedSeries& H, const PolydiskGeometry& geom) {
  MajorantFit fit;
  std::map<int, double> norms;  // paper index s -> ||H_s||_1
  for (const auto& [lit, part] : H.parts()) {
    if (lit < 3) continue;
    double v = polydisk_norm(part, geom, 0.0);
    if (v > 0.0) norms[lit - 2] = v;
  }
  if (norms.empty()) {
    fit.E = std::numeric_limits<double>::min();
    fit.degenerate = true;
    return fit;
  }
  auto it1 = norms.find(1);
  if (it1 != norms.end()) {
    fit.E = it1->second;
  } else {
    // No cubic part: the smallest E admitting a finite h <= 1 is the largest
    // norm present.
    fit.no_cubic = true;
    for (const auto& [s, v] : norms) fit.E = std::max(fit.E, v);
  }
  for (const auto& [s, v] : norms) {
    if (s < 2) continue;
    fit.h = std::max(fit.h, std::pow(v / fit.E, 1.0 / double(s - 1)));
  }
  return fit;
}

CauchyReport verify_cauchy(const Polynomial& chi, const Polynomial& f,
                           const Polynomial& Z, const Spectrum& spec,
                           const PolydiskGeometry& geom, double delta_prime,
                           double delta_dblprime, double delta) {
  if (spec.mode == Mode::Birkhoff)
    fail(ErrorCode::input, "cauchy verification requires a Melnikov mode");
  if (!(spec.gamma > 0.0)) fail(ErrorCode::input, "spectrum carries no gamma");
  if (!(delta_prime >= 0.0 && delta_dblprime >= 0.0 &&
        std::max(delta_prime, delta_dblprime) < delta && delta <= 0.5))
    fail(ErrorCode::input,
         "deltas must satisfy 0 <= max(delta',delta'') < delta <= 1/2");
  for (const auto& [e, c] : chi.terms())
    if (subspace_of(e, spec) != SubspaceTag::WPart)
      fail(ErrorCode::validation, "chi has a monomial outside the W subspace");
  for (const auto& [e, c] : Z.terms())
    if (subspace_of(e, spec) != SubspaceTag::ZPart)
      fail(ErrorCode::validation, "Z has a monomial outside the normal-form subspace");

  const double gamma = spec.gamma;
  const double Lambda = geom.min_radius();
  Polynomial psi(chi.dim());
  for (const auto& [e, c] : chi.terms()) psi.set_coefficient(e, c * divisor(e, spec));

  CauchyReport report;
  auto fill = [](CauchyCheck& c, double lhs, double rhs) {
    c.lhs = lhs;
    c.rhs = rhs;
    c.slack = rhs - lhs;
    c.pass = c.slack >= 0.0;
  };

  fill(report.stimagen, polydisk_norm(chi, geom, delta_prime),
       polydisk_norm(psi, geom, delta_prime) / gamma);

  const double chi_n = polydisk_norm(chi, geom, delta_prime);
  const double f_n = polydisk_norm(f, geom, delta_dblprime);
  fill(report.general, polydisk_norm(lie_derivative(chi, f), geom, delta),
       chi_n * f_n /
           ((delta - delta_prime) * (delta - delta_dblprime) * Lambda * Lambda));

  Polynomial chi_nat = project_class(chi, DivisorClass::Natural, spec.mode);
  Polynomial f_flat = project_class(f, DivisorClass::Flat, spec.mode);
  Polynomial proj =
      project_class(lie_derivative(chi_nat, f_flat), DivisorClass::Natural, spec.mode);
  fill(report.natural_projection, polydisk_norm(proj, geom, delta),
       4.0 * chi_n * f_n / ((delta - delta_dblprime) * Lambda * Lambda));

  Polynomial z_sn = project_class(Z, DivisorClass::Sharp, spec.mode);
  z_sn += project_class(Z, DivisorClass::Natural, spec.mode);
  fill(report.normal_form, polydisk_norm(lie_derivative(chi, z_sn), geom, delta),
       polydisk_norm(psi, geom, delta_prime) * polydisk_norm(Z, geom, delta_dblprime) /
           ((delta - delta_dblprime) * gamma * Lambda * Lambda));

  report.pass = report.stimagen.pass && report.general.pass &&
                report.natural_projection.pass && report.normal_form.pass;
  return report;
}

std::vector<double> chi_norms(const NormalFormResult& nf,
                              const PolydiskGeometry& geom, double delta) {
  std::vector<double> out;
  out.reserve(nf.state.chi.size());
  for (const Polynomial& chi : nf.state.chi)
    out.push_back(polydisk_norm(chi, geom, delta));
  return out;
}

BoundLedger build_ledger(const NormalFormResult& nf, const PolydiskGeometry& geom,
                         const DeltaSequence& ds, bool exact_T) {
  BoundLedger ledger;
  ledger.d = ds.d();
  ledger.b = ds.b();
  ledger.Lambda = geom.min_radius();
  ledger.gamma = nf.spectrum.gamma;
  if (!(ledger.gamma > 0.0))
    fail(ErrorCode::validation,
         "ledger requires a certified gamma (mode thm1 or thm2)");
  MajorantFit fit = majorize_input(nf.input, geom);
  ledger.E = fit.E;
  ledger.h = fit.h;
  ledger.degenerate = fit.degenerate;
  if (fit.degenerate) return ledger;
  ledger.C = constant_C(fit.h, fit.E, ledger.gamma, ledger.Lambda);

  for (int r = 1; r <= nf.order; ++r) {
    LedgerRow row;
    row.r = r;
    double delta_prev = ds.delta_r(r - 1);
    row.actual_chi = polydisk_norm(nf.state.chi[std::size_t(r - 1)], geom, delta_prev);
    row.actual_Z = polydisk_norm(nf.state.Z[std::size_t(r - 1)], geom, delta_prev);
    OrderBounds b = lemma3_order_bounds(r, fit.E, fit.h, ledger.gamma,
                                        ledger.Lambda, ds, exact_T);
    row.bound_chi = b.chi;
    row.bound_Z = b.Z;
    row.ratio_chi = row.actual_chi / row.bound_chi;
    row.ratio_Z = row.actual_Z / row.bound_Z;
    row.mu_value = mu(r - 1, r).convert_to<double>();
    row.t_value = exact_T ? t_exact(r - 1, r, ds) : t_bound(r, ds.b());
    row.t_path = exact_T ? "exact" : "nrm11";
    row.pass = row.actual_chi <= row.bound_chi && row.actual_Z <= row.bound_Z;
    ledger.all_pass = ledger.all_pass && row.pass;
    ledger.rows.push_back(row);
  }
  return ledger;
}

Certificate fit_certificate(const std::vector<double>& chi_norms_at_1md,
                            const DeltaSequence& ds, double C, double Lambda,
                            double margin) {
  if (chi_norms_at_1md.size() < 3)
    fail(ErrorCode::input, "certificate fit needs at least 3 orders");
  if (!(margin > 0.0)) fail(ErrorCode::input, "margin must be positive");
  Certificate cert;
  cert.margin = margin;
  cert.orders = int(chi_norms_at_1md.size());
  cert.beta_theoretical = 4.0 * (16.0 / (ds.b() * ds.b())) * C;

  double G = chi_norms_at_1md[0];
  if (G == 0.0)
    for (double v : chi_norms_at_1md) G = std::max(G, v);
  cert.G = G;
  double beta = 0.0;
  if (G > 0.0) {
    for (std::size_t i = 1; i < chi_norms_at_1md.size(); ++i) {
      double v = chi_norms_at_1md[i];
      if (v <= 0.0) continue;
      beta = std::max(beta, std::pow(v / G, 1.0 / double(i)));
    }
  }
  cert.beta = beta;

  // Largest rho with sum_{r>=1} beta^{r-1} rho^{r+2} = rho^3 / (1 - beta rho)
  // below margin * Lambda, capped at the unit polydisk.
  const double target = margin * Lambda;
  const double rho_max = (beta > 0.0) ? std::min(1.0, (1.0 - 1e-12) / beta) : 1.0;
  auto series = [beta](double rho) { return rho * rho * rho / (1.0 - beta * rho); };
  if (series(rho_max) <= target) {
    cert.rho = rho_max;
  } else {
    double lo = 0.0, hi = rho_max;
    for (int i = 0; i < 200; ++i) {
      double mid = 0.5 * (lo + hi);
      (series(mid) <= target ? lo : hi) = mid;
    }
    cert.rho = lo;
  }
  return cert;
}

}  // namespace lyapnorm
