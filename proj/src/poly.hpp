#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "errors.hpp"

namespace lyapnorm {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxDim = 8;
inline constexpr int kMaxDegree = 64;

// Exponent pair (j, k) of a monomial x^j y^k.  Components are 16-bit
// non-negative integers; the total degree |j| + |k| is cached and is the
// grading key.  Ordering is graded lexicographic (degree first, then the
// component sequence j_1..j_n k_1..k_n).
class ExponentPair {
 public:
  explicit ExponentPair(std::size_t n);
  ExponentPair(const std::vector<int>& j, const std::vector<int>& k);

  std::size_t dim() const { return n_; }
  int j(std::size_t l) const { return lanes_[l]; }
  int k(std::size_t l) const { return lanes_[n_ + l]; }
  void set_j(std::size_t l, int v);
  void set_k(std::size_t l, int v);
  int degree() const { return degree_; }

  // Weight carried by the non-distinguished variables: sum_{l>=2}(j_l + k_l).
  int natural_weight() const;
  bool diagonal() const;  // j == k

  ExponentPair times(const ExponentPair& other) const;
  std::vector<int> j_vector() const;
  std::vector<int> k_vector() const;
  std::vector<int> j_minus_k() const;
  int j_minus_k_l1() const;

  friend bool operator==(const ExponentPair& a, const ExponentPair& b);
  friend bool operator<(const ExponentPair& a, const ExponentPair& b);

  std::size_t hash() const noexcept;

 private:
  void recompute_degree();

  std::array<std::uint16_t, 2 * kMaxDim> lanes_{};
  std::uint16_t degree_ = 0;
  std::uint8_t n_ = 0;
};

struct ExponentPairHash {
  std::size_t operator()(const ExponentPair& e) const noexcept {
    return e.hash();
  }
};

// Polydisk of radii R with Lambda = min_j R_j.
class PolydiskGeometry {
 public:
  explicit PolydiskGeometry(std::vector<double> radii);
  std::size_t dim() const { return radii_.size(); }
  double radius(std::size_t l) const { return radii_[l]; }
  const std::vector<double>& radii() const { return radii_; }
  double min_radius() const;  // Lambda, recomputed from R

 private:
  std::vector<double> radii_;
};

// Sparse polynomial with complex double coefficients.  Terms with an exactly
// zero coefficient are never stored.
class Polynomial {
 public:
  using TermMap = std::map<ExponentPair, Complex>;

  explicit Polynomial(std::size_t n);
  static Polynomial monomial(const ExponentPair& e, Complex c);
  static Polynomial constant(std::size_t n, Complex c);
  static Polynomial variable_x(std::size_t n, std::size_t l);
  static Polynomial variable_y(std::size_t n, std::size_t l);

  std::size_t dim() const { return n_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const TermMap& terms() const { return terms_; }

  Complex coefficient(const ExponentPair& e) const;
  void set_coefficient(const ExponentPair& e, Complex c);
  void add_term(const ExponentPair& e, Complex c);

  int min_degree() const;  // -1 when empty
  int max_degree() const;
  bool is_homogeneous() const;
  Polynomial homogeneous_part(int degree) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(Complex c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, Complex c) { return a *= c; }
  friend Polynomial operator*(Complex c, Polynomial a) { return a *= c; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b);

  Polynomial derivative_x(std::size_t l) const;
  Polynomial derivative_y(std::size_t l) const;
  Polynomial conjugated() const;  // conjugate every coefficient

  // Drop terms with |c| < rel_eps * max|c|.  rel_eps = 0 keeps everything
  // (exact zeros are already gone).
  void prune(double rel_eps);

  Complex evaluate(const std::vector<Complex>& x,
                   const std::vector<Complex>& y) const;

  double coefficient_l1_norm() const;

  std::string to_text() const;
  static Polynomial parse_text(const std::string& text, std::size_t n);

 private:
  void check_dim(const Polynomial& other) const;

  std::size_t n_;
  TermMap terms_;
};

// Series of homogeneous parts keyed by literal polynomial degree.  Terms of
// degree above trunc_order are discarded; the flag records that this
// happened at least once.
class GradedSeries {
 public:
  GradedSeries(std::size_t n, int trunc_order);
  static GradedSeries from_polynomial(const Polynomial& p, int trunc_order);

  std::size_t dim() const { return n_; }
  int trunc_order() const { return trunc_order_; }
  bool was_truncated() const { return truncated_; }
  void mark_truncated() { truncated_ = true; }

  bool empty() const { return parts_.empty(); }
  const std::map<int, Polynomial>& parts() const { return parts_; }
  const Polynomial* part(int degree) const;
  Polynomial part_or_zero(int degree) const;
  int min_degree() const;  // -1 when empty
  int max_degree() const;

  // Adds p (homogeneous or not) into the series, truncating.
  void accumulate(const Polynomial& p);
  GradedSeries& operator+=(const GradedSeries& other);
  GradedSeries& operator-=(const GradedSeries& other);
  GradedSeries& operator*=(Complex c);

  Polynomial flatten() const;
  void prune(double rel_eps);

 private:
  std::size_t n_;
  std::map<int, Polynomial> parts_;
  int trunc_order_;
  bool truncated_ = false;
};

// {f, g} = sum_l (df/dx_l dg/dy_l - df/dy_l dg/dx_l).
Polynomial poisson_bracket(const Polynomial& f, const Polynomial& g);

// L_chi f := {f, chi}.  With H0 = sum lambda_l x_l y_l this gives
// L_{H0} x^j y^k = <j - k, lambda> x^j y^k, which fixes the sign convention.
Polynomial lie_derivative(const Polynomial& chi, const Polynomial& f);

// exp(L_chi) f = sum_{s>=0} L_chi^s f / s!, truncated at trunc_order.
// Requires every term of chi to have degree >= 3 so the sum is degree-finite.
GradedSeries lie_series_apply(const Polynomial& chi, const GradedSeries& f,
                              int trunc_order);

// ||f||_{(1-delta)R} = sum |f_{j,k}| ((1-delta) R)^{j+k}.
double polydisk_norm(const Polynomial& f, const PolydiskGeometry& geom,
                     double delta);

// All exponent pairs of the given total degree, in canonical order.
std::vector<ExponentPair> enumerate_monomials(std::size_t n, int degree);

}  // namespace lyapnorm
