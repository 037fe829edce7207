#pragma once

#include <vector>

#include "poly.hpp"
#include "resonance.hpp"

namespace lyapnorm {

// State of the normalization after `order` steps.  Z[m-1] and chi[m-1] are
// homogeneous of literal degree m + 2 (the paper-style index m); the tail
// holds the not yet normalized parts of literal degree order + 3 and up.
// psis[m-1] keeps the right-hand side of the homological equation at step m
// so residuals can be checked on demand.
struct NormalizationState {
  Polynomial H0;
  std::vector<Polynomial> Z;
  std::vector<Polynomial> chi;
  std::vector<Polynomial> psis;
  GradedSeries tail;
  int order = 0;
  int trunc_order = 0;  // literal degree

  NormalizationState(std::size_t n, int trunc)
      : H0(n), tail(n, trunc), trunc_order(trunc) {}

  std::size_t dim() const { return H0.dim(); }
  Polynomial sum_Z() const;
  // H0 + Z_1 + ... + Z_order + tail as one graded series.
  GradedSeries assemble() const;
};

struct HomologicalSolution {
  Polynomial chi;
  Polynomial Z;
};

// Splits psi into Z (ZPart projection) and chi with coefficients
// psi_{j,k} / <j-k,lambda> on the WPart monomials.
HomologicalSolution solve_homological(const Polynomial& psi, const Spectrum& spec);

// One order of the normalization recursion (both branches, exactly as the
// expansion of exp(L_chi) rearranges them).  Returns the advanced state.
NormalizationState normalize_step(const NormalizationState& state,
                                  const Spectrum& spec, double prune = 0.0);

struct NormalFormResult {
  NormalizationState state;
  Spectrum spectrum;
  GradedSeries input;  // H^(0) including the quadratic part
  int order = 0;
  double prune = 0.0;
  double residual_tol = 1e-12;
  std::uint64_t input_hash = 0;

  NormalFormResult(std::size_t n, int trunc)
      : state(n, trunc), input(n, trunc) {}
};

// ||L_{H0} chi_m + Z_m - psi_m||_l1 for step m in 1..order.
double homological_residual(const NormalizationState& state, int m);

// Iterates normalize_step to the requested order.  The degree-2 part of H
// must match sum lambda_l x_l y_l within 1e-12; degree-1 terms are rejected.
// order 0 returns the input unchanged.  trunc_order < 0 selects the default
// order + 4 (literal), which leaves the first unnormalized degrees visible.
NormalFormResult normalize(const GradedSeries& H, const Spectrum& spec,
                           int order, int trunc_order = -1, double prune = 0.0,
                           double residual_tol = 1e-12);

// Direct evaluation of exp(L_chi) H, bypassing the recursion bookkeeping.
GradedSeries oracle_transform(const GradedSeries& H, const Polynomial& chi,
                              int trunc);

// Original coordinates as series in the final normalized coordinates:
// exp(L_chi_r) ... exp(L_chi_1) applied to each coordinate function.
// Output order: x_1..x_n, y_1..y_n; every series starts with the identity
// monomial.
std::vector<GradedSeries> compose_coordinates(const std::vector<Polynomial>& chis,
                                              std::size_t n, int trunc);

// Structural invariant of the result (Theorem 1 / Theorem 2 shape of sum Z).
// Throws a validation error when violated.
void check_normal_form_structure(const NormalFormResult& result);

}  // namespace lyapnorm
