#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "normalform.hpp"

namespace lyapnorm {

using BigInt = boost::multiprecision::cpp_int;

// Domain-loss budget d split as d_r = b / r^2 with b = 6 d / pi^2, so that
// sum_{r>=1} d_r = d.  d_0 = 1 by the Lemma 3 convention.
class DeltaSequence {
 public:
  explicit DeltaSequence(double d);
  double d() const { return d_; }
  double b() const { return b_; }
  double d_r(int r) const;
  double delta_r(int r) const;  // d_1 + ... + d_r, delta_0 = 0

 private:
  double d_;
  double b_;
};

// Exact T_{r,s} = max over the admissible multisets J of prod d_j^{-1}.
// J draws from {1..r}, has 1 <= #J <= 2(s-1) and sum log2(j) <= 2(s-1-log2 s).
// Exhaustive enumeration, guarded at s <= 14.
double t_exact(int r, int s, const DeltaSequence& ds);

// Closed bound T_{r,s} <= (16/b^2)^{s-1}, valid for the d_r = b/r^2 choice.
double t_bound(int s, double b);

// mu_{0,0} = 0, mu_{0,s} = 1, mu_{r,s} = sum_{0<=rp<s} mu_{r-1,r}^p mu_{r-1,s-rp}.
// Exact big-integer values, memoized; safe for concurrent callers.
BigInt mu(int r, int s);

// Catalan sequence nu_1 = 1, nu_r = sum_{j=1}^{r-1} nu_j nu_{r-j}, and the
// closed form 2^{r-1} (2r-3)!! / r!.
BigInt catalan(int r);
BigInt catalan_closed(int r);

// C = h + 4 e^2 E / (gamma Lambda^2).
double constant_C(double h, double E, double gamma, double Lambda);

struct OrderBounds {
  double chi;     // ||chi_r||_{1-delta_{r-1}} bound
  double Z;       // ||Z_r|| bound
  double Zsharp;  // ||Z_r^sharp + Z_r^natural|| bound
};
OrderBounds lemma3_order_bounds(int r, double E, double h, double gamma,
                                double Lambda, const DeltaSequence& ds,
                                bool exact_T);

struct TailBounds {
  double H;       // ||H^(r)_s||_{1-delta_r} bound
  double Hsharp;
};
TailBounds lemma3_tail_bound(int r, int s, double E, double h, double gamma,
                             double Lambda, const DeltaSequence& ds, bool exact_T);

// Smallest E, then smallest h, with ||H^(0)_s||_1 <= h^{s-1} E for every
// paper degree s >= 1 present in the input (literal degree s + 2).
struct MajorantFit {
  double E = 0.0;
  double h = 0.0;
  bool degenerate = false;  // no perturbation at all
  bool no_cubic = false;    // cubic part absent, E fitted from higher degrees
};
MajorantFit majorize_input(const GradedSeries& H, const PolydiskGeometry& geom);

struct CauchyCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool pass = true;
};

// Both sides of the generalized Cauchy estimates evaluated on actual norms:
// the generating-function bound, the generic Lie-derivative bound, the
// natural-projection bound (no delta - delta' divisor) and the normal-form
// bound.  Preconditions: 0 <= max(delta', delta'') < delta <= 1/2, chi in W,
// Z in the normal-form subspace.
struct CauchyReport {
  CauchyCheck stimagen;
  CauchyCheck general;
  CauchyCheck natural_projection;
  CauchyCheck normal_form;
  bool pass = true;
};
CauchyReport verify_cauchy(const Polynomial& chi, const Polynomial& f,
                           const Polynomial& Z, const Spectrum& spec,
                           const PolydiskGeometry& geom, double delta_prime,
                           double delta_dblprime, double delta);

struct LedgerRow {
  int r = 0;
  double actual_chi = 0.0;
  double bound_chi = 0.0;
  double ratio_chi = 0.0;
  double actual_Z = 0.0;
  double bound_Z = 0.0;
  double ratio_Z = 0.0;
  double mu_value = 0.0;  // mu_{r-1,r}
  double t_value = 0.0;   // T_{r-1,r} (exact or nrm.11 path)
  std::string t_path;     // "exact" | "nrm11"
  bool pass = true;       // both actual <= bound
};

struct BoundLedger {
  double E = 0.0, h = 0.0, gamma = 0.0, Lambda = 0.0, C = 0.0;
  double d = 0.0, b = 0.0;
  bool degenerate = false;
  bool all_pass = true;
  std::vector<LedgerRow> rows;
};

BoundLedger build_ledger(const NormalFormResult& nf, const PolydiskGeometry& geom,
                         const DeltaSequence& ds, bool exact_T);

// ||chi_r||_{(1-delta) R} for r = 1..order.
std::vector<double> chi_norms(const NormalFormResult& nf,
                              const PolydiskGeometry& geom, double delta);

struct Certificate {
  double beta = 0.0;
  double G = 0.0;
  double beta_theoretical = 0.0;
  double rho = 0.0;
  double margin = 0.0;
  int orders = 0;
};

// Fits ||chi_r||_{1-d} <= beta^{r-1} G with G = ||chi_1|| and beta the max
// per-order ratio; beta_theoretical = 4 (16/b^2) C; rho is the largest scale
// with sum_r beta^{r-1} rho^{r+2} <= margin * Lambda.
Certificate fit_certificate(const std::vector<double>& chi_norms_at_1md,
                            const DeltaSequence& ds, double C, double Lambda,
                            double margin = 0.1);

}  // namespace lyapnorm
