#include "normalform.hpp"

#include <cmath>
#include <string>

namespace lyapnorm {

Polynomial NormalizationState::sum_Z() const {
  Polynomial out(dim());
  for (const Polynomial& z : Z) out += z;
  return out;
}

GradedSeries NormalizationState::assemble() const {
  GradedSeries out(dim(), trunc_order);
  if (tail.was_truncated()) out.mark_truncated();
  out.accumulate(H0);
  for (const Polynomial& z : Z) out.accumulate(z);
  for (const auto& [d, p] : tail.parts()) out.accumulate(p);
  return out;
}

HomologicalSolution solve_homological(const Polynomial& psi, const Spectrum& spec) {
  if (psi.dim() != spec.dim())
    fail(ErrorCode::input, "homological equation dimension mismatch");
  HomologicalSolution sol{Polynomial(psi.dim()), Polynomial(psi.dim())};
  for (const auto& [e, c] : psi.terms()) {
    if (subspace_of(e, spec) == SubspaceTag::ZPart) {
      sol.Z.set_coefficient(e, c);
    } else {
      Complex d = divisor(e, spec);
      if (std::abs(d) <= spec.resonance_tolerance(e.j_minus_k_l1()))
        fail(ErrorCode::resonance,
             "zero divisor on a range monomial; Melnikov hypothesis violated");
      sol.chi.set_coefficient(e, c / d);
    }
  }
  return sol;
}

namespace {

// L_chi^p f / p! for p = 0.. while the literal degree stays within trunc.
std::vector<Polynomial> lie_powers(const Polynomial& chi, const Polynomial& f,
                                   int trunc_literal) {
  std::vector<Polynomial> pows{f};
  if (chi.empty() || f.empty()) return pows;
  int step = chi.min_degree() - 2;
  for (int p = 1;; ++p) {
    const Polynomial& prev = pows.back();
    if (prev.empty() || prev.min_degree() + step > trunc_literal) break;
    Polynomial next = lie_derivative(chi, prev);
    next *= Complex(1.0 / double(p));
    pows.push_back(std::move(next));
  }
  return pows;
}

const Polynomial& power_or_zero(const std::vector<Polynomial>& pows, int p,
                                const Polynomial& zero) {
  return (p >= 0 && p < int(pows.size())) ? pows[std::size_t(p)] : zero;
}

}  // namespace

NormalizationState normalize_step(const NormalizationState& state,
                                  const Spectrum& spec, double prune) {
  const int r = state.order + 1;
  const int trunc = state.trunc_order;
  const int trunc_paper = trunc - 2;
  if (r > trunc_paper)
    fail(ErrorCode::input, "normalization order exceeds the truncation order");
  const std::size_t n = state.dim();
  const Polynomial zero(n);

  Polynomial psi = state.tail.part_or_zero(r + 2);
  HomologicalSolution sol = solve_homological(psi, spec);

  const Polynomial& chi = sol.chi;
  std::vector<Polynomial> Zr_pows = lie_powers(chi, sol.Z, trunc);
  std::vector<Polynomial> psi_pows = lie_powers(chi, psi, trunc);
  // Powers of the previously normalized parts Z_m, 1 <= m < r.
  std::vector<std::vector<Polynomial>> Zm_pows;
  Zm_pows.resize(std::size_t(r));
  for (int m = 1; m < r; ++m)
    Zm_pows[std::size_t(m)] = lie_powers(chi, state.Z[std::size_t(m - 1)], trunc);
  // Powers of the tail parts H^(r-1)_u for paper index u > r.
  std::map<int, std::vector<Polynomial>> Hu_pows;
  for (const auto& [lit, part] : state.tail.parts()) {
    int u = lit - 2;
    if (u > r) Hu_pows.emplace(u, lie_powers(chi, part, trunc));
  }
  auto tail_pows = [&](int u) -> const std::vector<Polynomial>& {
    static const std::vector<Polynomial> none;
    auto it = Hu_pows.find(u);
    return it == Hu_pows.end() ? none : it->second;
  };

  NormalizationState out(n, trunc);
  out.H0 = state.H0;
  out.Z = state.Z;
  out.chi = state.chi;
  out.psis = state.psis;
  out.order = r;
  out.Z.push_back(sol.Z);
  out.chi.push_back(chi);
  out.psis.push_back(psi);
  if (state.tail.was_truncated()) out.tail.mark_truncated();

  for (int sp = r + 1; sp <= trunc_paper; ++sp) {
    int s = sp / r;
    int m = sp % r;
    Polynomial part(n);
    if (m != 0) {
      // H^(r)_{sr+m} = (1/s!) L^s Z_m + sum_{p=0}^{s-1} (1/p!) L^p H_{(s-p)r+m}
      part += power_or_zero(Zm_pows[std::size_t(m)], s, zero);
      for (int p = 0; p <= s - 1; ++p)
        part += power_or_zero(tail_pows((s - p) * r + m), p, zero);
    } else {
      // H^(r)_{sr} = (1/(s-1)!) L^{s-1} ((1/s) Z_r + ((s-1)/s) H^(r-1)_r)
      //            + sum_{p=0}^{s-2} (1/p!) L^p H_{(s-p)r}
      part += power_or_zero(Zr_pows, s - 1, zero) * Complex(1.0 / double(s));
      part += power_or_zero(psi_pows, s - 1, zero) * Complex(double(s - 1) / double(s));
      for (int p = 0; p <= s - 2; ++p)
        part += power_or_zero(tail_pows((s - p) * r), p, zero);
    }
    part.prune(prune);
    if (!part.empty()) out.tail.accumulate(part);
  }
  return out;
}

double homological_residual(const NormalizationState& state, int m) {
  if (m < 1 || m > state.order) fail(ErrorCode::input, "residual order out of range");
  Polynomial lhs = lie_derivative(state.H0, state.chi[std::size_t(m - 1)]);
  lhs += state.Z[std::size_t(m - 1)];
  lhs -= state.psis[std::size_t(m - 1)];
  return lhs.coefficient_l1_norm();
}

NormalFormResult normalize(const GradedSeries& H, const Spectrum& spec, int order,
                           int trunc_order, double prune, double residual_tol) {
  const std::size_t n = H.dim();
  if (spec.dim() != n) fail(ErrorCode::input, "spectrum dimension mismatch");
  if (order < 0) fail(ErrorCode::input, "order must be >= 0");
  if (trunc_order < 0) trunc_order = order + 4;
  if (order > trunc_order - 2)
    fail(ErrorCode::input, "order exceeds what the truncation order can hold");

  // Validate the quadratic part: diagonal and equal to sum lambda_l x_l y_l.
  const double scale = std::max(1.0, spec.max_abs_lambda());
  Polynomial H0(n);
  for (std::size_t l = 0; l < n; ++l) {
    ExponentPair e(n);
    e.set_j(l, 1);
    e.set_k(l, 1);
    H0.set_coefficient(e, spec.lambda[l]);
  }
  if (const Polynomial* q = H.part(2)) {
    Polynomial diff = *q - H0;
    for (const auto& [e, c] : diff.terms())
      if (std::abs(c) > 1e-12 * scale)
        fail(ErrorCode::validation,
             "quadratic part is not the diagonal sum lambda_l x_l y_l: offending "
             "monomial " + Polynomial::monomial(e, c).to_text());
  }
  if (H.part(1))
    fail(ErrorCode::validation, "degree-1 terms present; not an equilibrium");

  NormalFormResult result(n, trunc_order);
  result.spectrum = spec;
  result.order = order;
  result.prune = prune;
  result.residual_tol = residual_tol;
  result.input = GradedSeries(n, trunc_order);
  if (H.was_truncated() || H.max_degree() > trunc_order) result.input.mark_truncated();
  result.input.accumulate(H0);
  for (const auto& [d, p] : H.parts())
    if (d >= 3) result.input.accumulate(p);

  NormalizationState state(n, trunc_order);
  state.H0 = H0;
  for (const auto& [d, p] : result.input.parts())
    if (d >= 3) state.tail.accumulate(p);
  if (result.input.was_truncated()) state.tail.mark_truncated();

  for (int r = 1; r <= order; ++r) {
    state = normalize_step(state, spec, prune);
    double res = homological_residual(state, r);
    double ref = state.psis[std::size_t(r - 1)].coefficient_l1_norm();
    if (res > residual_tol * std::max(ref, 1e-300))
      fail(ErrorCode::validation,
           "homological residual " + std::to_string(res) + " exceeds tolerance at order " +
               std::to_string(r));
  }
  result.state = std::move(state);
  check_normal_form_structure(result);
  return result;
}

GradedSeries oracle_transform(const GradedSeries& H, const Polynomial& chi, int trunc) {
  return lie_series_apply(chi, H, trunc);
}

std::vector<GradedSeries> compose_coordinates(const std::vector<Polynomial>& chis,
                                              std::size_t n, int trunc) {
  std::vector<GradedSeries> out;
  out.reserve(2 * n);
  for (std::size_t l = 0; l < 2 * n; ++l) {
    Polynomial g = (l < n) ? Polynomial::variable_x(n, l)
                           : Polynomial::variable_y(n, l - n);
    GradedSeries acc = GradedSeries::from_polynomial(g, trunc);
    for (const Polynomial& chi : chis) acc = lie_series_apply(chi, acc, trunc);
    out.push_back(std::move(acc));
  }
  return out;
}

void check_normal_form_structure(const NormalFormResult& result) {
  if (result.spectrum.mode == Mode::Birkhoff) return;  // projection is the contract
  Polynomial z = result.state.sum_Z();
  for (const auto& [e, c] : z.terms()) {
    DivisorClass cls = classify_index(e, result.spectrum.mode);
    if (cls == DivisorClass::Flat) continue;
    if (result.spectrum.mode == Mode::LyapunovManifold) {
      if (cls == DivisorClass::Natural)
        fail(ErrorCode::validation,
             "normal form contains a natural monomial: " +
                 Polynomial::monomial(e, c).to_text());
      if (!e.diagonal())
        fail(ErrorCode::validation,
             "sharp part of the normal form is not a power of x1 y1: " +
                 Polynomial::monomial(e, c).to_text());
    } else {
      if (!e.diagonal())
        fail(ErrorCode::validation,
             "sharp/natural part of the normal form has j != k: " +
                 Polynomial::monomial(e, c).to_text());
    }
  }
}

}  // namespace lyapnorm
