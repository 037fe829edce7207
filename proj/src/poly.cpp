#include "poly.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace lyapnorm {

namespace {

void check_component(int v) {
  if (v < 0) fail(ErrorCode::input, "negative exponent component");
  if (v > kMaxDegree) fail(ErrorCode::input, "exponent component exceeds degree cap 64");
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

ExponentPair::ExponentPair(std::size_t n) : n_(static_cast<std::uint8_t>(n)) {
  if (n == 0 || n > kMaxDim) fail(ErrorCode::input, "dimension must be in 1..8");
}

ExponentPair::ExponentPair(const std::vector<int>& j, const std::vector<int>& k)
    : ExponentPair(j.size()) {
  if (j.size() != k.size()) fail(ErrorCode::input, "exponent vectors j, k differ in length");
  for (std::size_t l = 0; l < j.size(); ++l) {
    check_component(j[l]);
    check_component(k[l]);
    lanes_[l] = static_cast<std::uint16_t>(j[l]);
    lanes_[n_ + l] = static_cast<std::uint16_t>(k[l]);
  }
  recompute_degree();
}

void ExponentPair::recompute_degree() {
  int d = 0;
  for (std::size_t l = 0; l < 2 * static_cast<std::size_t>(n_); ++l) d += lanes_[l];
  if (d > kMaxDegree) fail(ErrorCode::input, "total degree exceeds cap 64");
  degree_ = static_cast<std::uint16_t>(d);
}

void ExponentPair::set_j(std::size_t l, int v) {
  check_component(v);
  lanes_[l] = static_cast<std::uint16_t>(v);
  recompute_degree();
}

void ExponentPair::set_k(std::size_t l, int v) {
  check_component(v);
  lanes_[n_ + l] = static_cast<std::uint16_t>(v);
  recompute_degree();
}

int ExponentPair::natural_weight() const {
  int m = 0;
  for (std::size_t l = 1; l < n_; ++l) m += lanes_[l] + lanes_[n_ + l];
  return m;
}

bool ExponentPair::diagonal() const {
  for (std::size_t l = 0; l < n_; ++l)
    if (lanes_[l] != lanes_[n_ + l]) return false;
  return true;
}

ExponentPair ExponentPair::times(const ExponentPair& other) const {
  if (n_ != other.n_) fail(ErrorCode::input, "dimension mismatch");
  ExponentPair out(static_cast<std::size_t>(n_));
  for (std::size_t l = 0; l < 2 * static_cast<std::size_t>(n_); ++l)
    out.lanes_[l] = static_cast<std::uint16_t>(lanes_[l] + other.lanes_[l]);
  out.recompute_degree();
  return out;
}

std::vector<int> ExponentPair::j_vector() const {
  std::vector<int> v(n_);
  for (std::size_t l = 0; l < n_; ++l) v[l] = lanes_[l];
  return v;
}

std::vector<int> ExponentPair::k_vector() const {
  std::vector<int> v(n_);
  for (std::size_t l = 0; l < n_; ++l) v[l] = lanes_[n_ + l];
  return v;
}

std::vector<int> ExponentPair::j_minus_k() const {
  std::vector<int> v(n_);
  for (std::size_t l = 0; l < n_; ++l) v[l] = int(lanes_[l]) - int(lanes_[n_ + l]);
  return v;
}

int ExponentPair::j_minus_k_l1() const {
  int s = 0;
  for (std::size_t l = 0; l < n_; ++l) s += std::abs(int(lanes_[l]) - int(lanes_[n_ + l]));
  return s;
}

bool operator==(const ExponentPair& a, const ExponentPair& b) {
  return a.n_ == b.n_ && a.lanes_ == b.lanes_;
}

bool operator<(const ExponentPair& a, const ExponentPair& b) {
  if (a.degree_ != b.degree_) return a.degree_ < b.degree_;
  return a.lanes_ < b.lanes_;
}

std::size_t ExponentPair::hash() const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(n_);
  for (std::size_t l = 0; l < 2 * static_cast<std::size_t>(n_); ++l) mix(lanes_[l]);
  return static_cast<std::size_t>(h);
}

PolydiskGeometry::PolydiskGeometry(std::vector<double> radii)
    : radii_(std::move(radii)) {
  if (radii_.empty() || radii_.size() > kMaxDim)
    fail(ErrorCode::input, "polydisk dimension must be in 1..8");
  for (double r : radii_)
    if (!(r > 0.0)) fail(ErrorCode::input, "polydisk radii must be positive");
}

double PolydiskGeometry::min_radius() const {
  return *std::min_element(radii_.begin(), radii_.end());
}

Polynomial::Polynomial(std::size_t n) : n_(n) {
  if (n == 0 || n > kMaxDim) fail(ErrorCode::input, "dimension must be in 1..8");
}

Polynomial Polynomial::monomial(const ExponentPair& e, Complex c) {
  Polynomial p(e.dim());
  p.add_term(e, c);
  return p;
}

Polynomial Polynomial::constant(std::size_t n, Complex c) {
  return monomial(ExponentPair(n), c);
}

Polynomial Polynomial::variable_x(std::size_t n, std::size_t l) {
  ExponentPair e(n);
  e.set_j(l, 1);
  return monomial(e, 1.0);
}

Polynomial Polynomial::variable_y(std::size_t n, std::size_t l) {
  ExponentPair e(n);
  e.set_k(l, 1);
  return monomial(e, 1.0);
}

void Polynomial::check_dim(const Polynomial& other) const {
  if (n_ != other.n_) fail(ErrorCode::input, "polynomial dimension mismatch");
}

Complex Polynomial::coefficient(const ExponentPair& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Complex(0.0) : it->second;
}

void Polynomial::set_coefficient(const ExponentPair& e, Complex c) {
  if (e.dim() != n_) fail(ErrorCode::input, "exponent dimension mismatch");
  if (c == Complex(0.0))
    terms_.erase(e);
  else
    terms_[e] = c;
}

void Polynomial::add_term(const ExponentPair& e, Complex c) {
  if (e.dim() != n_) fail(ErrorCode::input, "exponent dimension mismatch");
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex(0.0)) terms_.erase(it);
  } else if (c == Complex(0.0)) {
    terms_.erase(it);
  }
}

int Polynomial::min_degree() const {
  return terms_.empty() ? -1 : terms_.begin()->first.degree();
}

int Polynomial::max_degree() const {
  return terms_.empty() ? -1 : terms_.rbegin()->first.degree();
}

bool Polynomial::is_homogeneous() const {
  return terms_.empty() || min_degree() == max_degree();
}

Polynomial Polynomial::homogeneous_part(int degree) const {
  Polynomial out(n_);
  for (const auto& [e, c] : terms_)
    if (e.degree() == degree) out.terms_.emplace(e, c);
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  check_dim(other);
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  check_dim(other);
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(Complex c) {
  if (c == Complex(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  // scaling by a finite nonzero factor cannot create exact zeros except via
  // underflow; sweep anyway to keep the invariant
  for (auto it = terms_.begin(); it != terms_.end();)
    it = (it->second == Complex(0.0)) ? terms_.erase(it) : std::next(it);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_dim(b);
  std::unordered_map<ExponentPair, Complex, ExponentPairHash> acc;
  acc.reserve(a.size() * 2 + 8);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) acc[ea.times(eb)] += ca * cb;
  Polynomial out(a.n_);
  for (auto& [e, c] : acc)
    if (c != Complex(0.0)) out.terms_.emplace(e, c);
  return out;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  return a.n_ == b.n_ && a.terms_ == b.terms_;
}

Polynomial Polynomial::derivative_x(std::size_t l) const {
  Polynomial out(n_);
  for (const auto& [e, c] : terms_) {
    int p = e.j(l);
    if (p == 0) continue;
    ExponentPair d = e;
    d.set_j(l, p - 1);
    out.add_term(d, c * double(p));
  }
  return out;
}

Polynomial Polynomial::derivative_y(std::size_t l) const {
  Polynomial out(n_);
  for (const auto& [e, c] : terms_) {
    int p = e.k(l);
    if (p == 0) continue;
    ExponentPair d = e;
    d.set_k(l, p - 1);
    out.add_term(d, c * double(p));
  }
  return out;
}

Polynomial Polynomial::conjugated() const {
  Polynomial out(n_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, std::conj(c));
  return out;
}

void Polynomial::prune(double rel_eps) {
  if (rel_eps <= 0.0 || terms_.empty()) return;
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
  double cut = rel_eps * m;
  for (auto it = terms_.begin(); it != terms_.end();)
    it = (std::abs(it->second) < cut) ? terms_.erase(it) : std::next(it);
}

Complex Polynomial::evaluate(const std::vector<Complex>& x,
                             const std::vector<Complex>& y) const {
  if (x.size() != n_ || y.size() != n_)
    fail(ErrorCode::input, "evaluation point dimension mismatch");
  Complex sum = 0.0;
  for (const auto& [e, c] : terms_) {
    Complex t = c;
    for (std::size_t l = 0; l < n_; ++l) {
      for (int p = 0; p < e.j(l); ++p) t *= x[l];
      for (int p = 0; p < e.k(l); ++p) t *= y[l];
    }
    sum += t;
  }
  return sum;
}

double Polynomial::coefficient_l1_norm() const {
  double s = 0.0;
  for (const auto& [e, c] : terms_) s += std::abs(c);
  return s;
}

std::string Polynomial::to_text() const {
  if (terms_.empty()) return "(0,0)";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) out += " + ";
    first = false;
    out += "(" + format_double(c.real()) + "," + format_double(c.imag()) + ")";
    for (std::size_t l = 0; l < n_; ++l) {
      if (e.j(l) > 0) {
        out += " x" + std::to_string(l + 1);
        if (e.j(l) > 1) out += "^" + std::to_string(e.j(l));
      }
    }
    for (std::size_t l = 0; l < n_; ++l) {
      if (e.k(l) > 0) {
        out += " y" + std::to_string(l + 1);
        if (e.k(l) > 1) out += "^" + std::to_string(e.k(l));
      }
    }
  }
  return out;
}

namespace {

struct TextCursor {
  const std::string& s;
  std::size_t pos = 0;
  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() { return s[pos]; }
  bool consume(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  double number() {
    skip_ws();
    if (pos < s.size() && s[pos] == '+') ++pos;
    std::size_t start = pos;
    double v = 0.0;
    auto res = std::from_chars(s.data() + start, s.data() + s.size(), v);
    if (res.ec != std::errc())
      fail(ErrorCode::input, "polynomial text: expected a number at position " +
                                 std::to_string(start));
    pos = std::size_t(res.ptr - s.data());
    return v;
  }
  int integer() {
    double v = number();
    int i = static_cast<int>(v);
    if (double(i) != v) fail(ErrorCode::input, "polynomial text: expected an integer");
    return i;
  }
};

}  // namespace

// Term format: "(re,im) x1^a1 y2^b2 ..."; terms joined by '+'.
Polynomial Polynomial::parse_text(const std::string& text, std::size_t n) {
  Polynomial out(n);
  TextCursor cur{text};
  bool expect_term = true;
  while (!cur.done()) {
    if (!expect_term) {
      if (!cur.consume('+')) fail(ErrorCode::input, "polynomial text: expected '+'");
    }
    expect_term = false;
    if (!cur.consume('(')) fail(ErrorCode::input, "polynomial text: expected '('");
    double re = cur.number();
    if (!cur.consume(',')) fail(ErrorCode::input, "polynomial text: expected ','");
    double im = cur.number();
    if (!cur.consume(')')) fail(ErrorCode::input, "polynomial text: expected ')'");
    ExponentPair e(n);
    while (true) {
      cur.skip_ws();
      if (cur.pos >= text.size()) break;
      char c = cur.peek();
      if (c != 'x' && c != 'y') break;
      ++cur.pos;
      int idx = cur.integer();
      if (idx < 1 || static_cast<std::size_t>(idx) > n)
        fail(ErrorCode::input, "polynomial text: variable index out of range");
      int exp = 1;
      if (cur.consume('^')) exp = cur.integer();
      if (c == 'x')
        e.set_j(idx - 1, e.j(idx - 1) + exp);
      else
        e.set_k(idx - 1, e.k(idx - 1) + exp);
    }
    out.add_term(e, Complex(re, im));
  }
  return out;
}

GradedSeries::GradedSeries(std::size_t n, int trunc_order)
    : n_(n), trunc_order_(trunc_order) {
  if (n == 0 || n > kMaxDim) fail(ErrorCode::input, "dimension must be in 1..8");
  if (trunc_order < 0) fail(ErrorCode::input, "truncation order must be >= 0");
}

GradedSeries GradedSeries::from_polynomial(const Polynomial& p, int trunc_order) {
  GradedSeries out(p.dim(), trunc_order);
  out.accumulate(p);
  return out;
}

const Polynomial* GradedSeries::part(int degree) const {
  auto it = parts_.find(degree);
  return it == parts_.end() ? nullptr : &it->second;
}

Polynomial GradedSeries::part_or_zero(int degree) const {
  const Polynomial* p = part(degree);
  return p ? *p : Polynomial(n_);
}

int GradedSeries::min_degree() const {
  return parts_.empty() ? -1 : parts_.begin()->first;
}

int GradedSeries::max_degree() const {
  return parts_.empty() ? -1 : parts_.rbegin()->first;
}

void GradedSeries::accumulate(const Polynomial& p) {
  if (p.dim() != n_) fail(ErrorCode::input, "series dimension mismatch");
  for (const auto& [e, c] : p.terms()) {
    int d = e.degree();
    if (d > trunc_order_) {
      truncated_ = true;
      continue;
    }
    auto it = parts_.find(d);
    if (it == parts_.end()) it = parts_.emplace(d, Polynomial(n_)).first;
    it->second.add_term(e, c);
    if (it->second.empty()) parts_.erase(it);
  }
}

GradedSeries& GradedSeries::operator+=(const GradedSeries& other) {
  if (other.n_ != n_) fail(ErrorCode::input, "series dimension mismatch");
  trunc_order_ = std::min(trunc_order_, other.trunc_order_);
  truncated_ = truncated_ || other.truncated_;
  for (const auto& [d, p] : other.parts_) accumulate(p);
  // re-truncate in case trunc_order_ shrank
  for (auto it = parts_.begin(); it != parts_.end();) {
    if (it->first > trunc_order_) {
      truncated_ = true;
      it = parts_.erase(it);
    } else {
      ++it;
    }
  }
  return *this;
}

GradedSeries& GradedSeries::operator-=(const GradedSeries& other) {
  GradedSeries neg = other;
  neg *= Complex(-1.0);
  return *this += neg;
}

GradedSeries& GradedSeries::operator*=(Complex c) {
  if (c == Complex(0.0)) {
    parts_.clear();
    return *this;
  }
  for (auto& [d, p] : parts_) p *= c;
  for (auto it = parts_.begin(); it != parts_.end();)
    it = it->second.empty() ? parts_.erase(it) : std::next(it);
  return *this;
}

Polynomial GradedSeries::flatten() const {
  Polynomial out(n_);
  for (const auto& [d, p] : parts_) out += p;
  return out;
}

void GradedSeries::prune(double rel_eps) {
  if (rel_eps <= 0.0) return;
  for (auto it = parts_.begin(); it != parts_.end();) {
    it->second.prune(rel_eps);
    it = it->second.empty() ? parts_.erase(it) : std::next(it);
  }
}

Polynomial poisson_bracket(const Polynomial& f, const Polynomial& g) {
  if (f.dim() != g.dim()) fail(ErrorCode::input, "poisson bracket dimension mismatch");
  std::size_t n = f.dim();
  std::unordered_map<ExponentPair, Complex, ExponentPairHash> acc;
  acc.reserve(f.size() + g.size() + 8);
  for (const auto& [ef, cf] : f.terms()) {
    for (const auto& [eg, cg] : g.terms()) {
      for (std::size_t l = 0; l < n; ++l) {
        // df/dx_l dg/dy_l - df/dy_l dg/dx_l
        long factor = long(ef.j(l)) * long(eg.k(l)) - long(ef.k(l)) * long(eg.j(l));
        if (factor == 0) continue;
        ExponentPair e = ef.times(eg);
        e.set_j(l, e.j(l) - 1);
        e.set_k(l, e.k(l) - 1);
        acc[e] += cf * cg * double(factor);
      }
    }
  }
  Polynomial out(n);
  for (auto& [e, c] : acc)
    if (c != Complex(0.0)) out.set_coefficient(e, c);
  return out;
}

Polynomial lie_derivative(const Polynomial& chi, const Polynomial& f) {
  return poisson_bracket(f, chi);
}

GradedSeries lie_series_apply(const Polynomial& chi, const GradedSeries& f,
                              int trunc_order) {
  if (chi.dim() != f.dim()) fail(ErrorCode::input, "lie series dimension mismatch");
  if (!chi.empty() && chi.min_degree() <= 2)
    fail(ErrorCode::input,
         "lie series generator has a term of degree <= 2; series would not be "
         "degree-finite");
  GradedSeries out(f.dim(), trunc_order);
  if (f.was_truncated() || f.max_degree() > trunc_order) out.mark_truncated();
  GradedSeries term(f.dim(), trunc_order);
  for (const auto& [d, p] : f.parts()) term.accumulate(p);
  out += term;
  if (chi.empty()) return out;
  int step = chi.min_degree() - 2;  // bracket raises degree by at least this
  for (int s = 1; !term.empty(); ++s) {
    GradedSeries next(f.dim(), trunc_order);
    for (const auto& [d, p] : term.parts()) {
      if (d + step > trunc_order) continue;
      Polynomial br = lie_derivative(chi, p);
      br *= Complex(1.0 / double(s));
      next.accumulate(br);
    }
    term = std::move(next);
    out += term;
  }
  return out;
}

std::vector<ExponentPair> enumerate_monomials(std::size_t n, int degree) {
  if (degree < 0 || degree > kMaxDegree) fail(ErrorCode::input, "degree out of range");
  std::vector<ExponentPair> out;
  std::vector<int> buf(2 * n, 0);
  auto rec = [&](auto&& self, std::size_t slot, int left) -> void {
    if (slot == 2 * n - 1) {
      buf[slot] = left;
      std::vector<int> j(buf.begin(), buf.begin() + long(n));
      std::vector<int> k(buf.begin() + long(n), buf.end());
      out.emplace_back(j, k);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      buf[slot] = v;
      self(self, slot + 1, left - v);
    }
  };
  rec(rec, 0, degree);
  std::sort(out.begin(), out.end());
  return out;
}

double polydisk_norm(const Polynomial& f, const PolydiskGeometry& geom,
                     double delta) {
  if (geom.dim() != f.dim()) fail(ErrorCode::input, "norm geometry dimension mismatch");
  if (!(delta >= 0.0 && delta < 1.0)) fail(ErrorCode::input, "delta must lie in [0,1)");
  double sum = 0.0;
  for (const auto& [e, c] : f.terms()) {
    double w = std::abs(c);
    for (std::size_t l = 0; l < f.dim(); ++l) {
      double rl = (1.0 - delta) * geom.radius(l);
      for (int p = 0; p < e.j(l) + e.k(l); ++p) w *= rl;
    }
    sum += w;
  }
  return sum;
}

}  // namespace lyapnorm
