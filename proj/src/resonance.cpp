#include "resonance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lyapnorm {

namespace {

std::string format_k(const std::vector<int>& k) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i) os << ",";
    os << k[i];
  }
  os << ")";
  return os.str();
}

// Tail patterns (k_2..k_n) spanning the natural index set of the mode.
std::vector<std::vector<int>> natural_tails(std::size_t n, Mode mode) {
  std::vector<std::vector<int>> tails;
  if (n < 2) return tails;
  std::vector<int> t(n - 1, 0);
  for (std::size_t v = 0; v < n - 1; ++v) {
    for (int s : {1, -1}) {
      t.assign(n - 1, 0);
      t[v] = s;
      tails.push_back(t);
    }
  }
  if (mode == Mode::ExtendedCenter) {
    for (std::size_t v = 0; v < n - 1; ++v) {
      for (int s : {2, -2}) {
        t.assign(n - 1, 0);
        t[v] = s;
        tails.push_back(t);
      }
    }
    for (std::size_t v = 0; v < n - 1; ++v) {
      for (std::size_t w = v + 1; w < n - 1; ++w) {
        for (int sv : {1, -1}) {
          for (int sw : {1, -1}) {
            t.assign(n - 1, 0);
            t[v] = sv;
            t[w] = sw;
            tails.push_back(t);
          }
        }
      }
    }
  }
  return tails;
}

int tail_l1(const std::vector<int>& t) {
  int s = 0;
  for (int v : t) s += std::abs(v);
  return s;
}

}  // namespace

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::LyapunovManifold: return "thm1";
    case Mode::ExtendedCenter: return "thm2";
    case Mode::Birkhoff: return "birkhoff";
  }
  return "thm1";
}

Mode mode_from_name(const std::string& s) {
  if (s == "thm1") return Mode::LyapunovManifold;
  if (s == "thm2") return Mode::ExtendedCenter;
  if (s == "birkhoff") return Mode::Birkhoff;
  fail(ErrorCode::input, "unknown mode '" + s + "' (expected thm1|thm2|birkhoff)");
}

double Spectrum::max_abs_lambda() const {
  double m = 0.0;
  for (const Complex& l : lambda) m = std::max(m, std::abs(l));
  return m;
}

double Spectrum::resonance_tolerance(int l1) const {
  return 1e-10 * max_abs_lambda() * std::max(1, l1);
}

DivisorClass classify_index(const ExponentPair& e, Mode mode) {
  if (mode == Mode::Birkhoff) return DivisorClass::Sharp;  // classification unused
  int m = e.natural_weight();
  int natural_cap = (mode == Mode::ExtendedCenter) ? 2 : 1;
  if (m == 0) return DivisorClass::Sharp;
  if (m <= natural_cap) return DivisorClass::Natural;
  return DivisorClass::Flat;
}

Complex divisor(const ExponentPair& e, const Spectrum& spec) {
  if (e.dim() != spec.dim()) fail(ErrorCode::input, "divisor dimension mismatch");
  Complex d = 0.0;
  for (std::size_t l = 0; l < spec.dim(); ++l)
    d += double(e.j(l) - e.k(l)) * spec.lambda[l];
  return d;
}

SubspaceTag subspace_of(const ExponentPair& e, const Spectrum& spec) {
  if (spec.mode == Mode::Birkhoff) {
    Complex d = divisor(e, spec);
    double ad = std::abs(d);
    if (ad == 0.0) return SubspaceTag::ZPart;
    double tol = spec.resonance_tolerance(e.j_minus_k_l1());
    if (ad < tol)
      fail(ErrorCode::resonance,
           "ambiguous resonance: |<j-k,lambda>| = " + std::to_string(ad) +
               " below tolerance for monomial with j-k = " + format_k(e.j_minus_k()));
    return SubspaceTag::WPart;
  }
  DivisorClass cls = classify_index(e, spec.mode);
  if (cls == DivisorClass::Flat) return SubspaceTag::ZPart;
  if (spec.mode == Mode::LyapunovManifold) {
    // Natural monomials are never in the kernel under the first Melnikov
    // condition; Sharp ones are exactly when j == k.
    if (cls == DivisorClass::Sharp && e.diagonal()) return SubspaceTag::ZPart;
    return SubspaceTag::WPart;
  }
  // ExtendedCenter: kernel membership of sharp and natural monomials is j == k.
  return e.diagonal() ? SubspaceTag::ZPart : SubspaceTag::WPart;
}

GammaCertificate gamma_lower_bound(const Spectrum& spec, int verify_up_to) {
  if (spec.mode == Mode::Birkhoff)
    fail(ErrorCode::input, "gamma lower bound requires mode thm1 or thm2");
  if (spec.dim() == 0) fail(ErrorCode::input, "empty spectrum");
  if (verify_up_to < 1) fail(ErrorCode::input, "verify_up_to must be >= 1");
  const Complex l1 = spec.lambda[0];
  if (std::abs(l1) <= spec.resonance_tolerance(1))
    fail(ErrorCode::resonance, "lambda_1 vanishes");

  auto tails = natural_tails(spec.dim(), spec.mode);
  std::vector<Complex> tail_values(tails.size());
  double theta = 0.0;
  for (std::size_t i = 0; i < tails.size(); ++i) {
    Complex v = 0.0;
    for (std::size_t l = 0; l + 1 < spec.dim(); ++l)
      v += double(tails[i][l]) * spec.lambda[l + 1];
    tail_values[i] = v;
    theta = std::max(theta, std::abs(v));
  }

  GammaCertificate cert;
  cert.theta = theta;
  cert.big_n = std::max(1, int(std::ceil(1.0 + 2.0 * theta)));
  cert.delta_min = std::numeric_limits<double>::infinity();

  auto scan = [&](int bound, bool track_delta, double* min_ratio,
                  std::vector<int>* worst_k) {
    // K_sharp: k = k1 e1, k1 != 0.
    for (int k1 = -bound; k1 <= bound; ++k1) {
      if (k1 == 0) continue;
      double av = std::abs(double(k1) * l1);
      if (av <= spec.resonance_tolerance(std::abs(k1)))
        fail(ErrorCode::resonance, "resonant spectrum: <k,lambda> = 0 at k = " +
                                       format_k([&] {
                                         std::vector<int> k(spec.dim(), 0);
                                         k[0] = k1;
                                         return k;
                                       }()));
      if (min_ratio) {
        double ratio = av / std::abs(double(k1));
        if (ratio < *min_ratio) {
          *min_ratio = ratio;
          if (worst_k) {
            worst_k->assign(spec.dim(), 0);
            (*worst_k)[0] = k1;
          }
        }
      }
    }
    // K_natural.
    for (std::size_t i = 0; i < tails.size(); ++i) {
      int tl1 = tail_l1(tails[i]);
      for (int k1 = -(bound - tl1); k1 <= bound - tl1; ++k1) {
        Complex v = double(k1) * l1 + tail_values[i];
        double av = std::abs(v);
        int kl1 = std::abs(k1) + tl1;
        if (av <= spec.resonance_tolerance(kl1)) {
          std::vector<int> k(spec.dim(), 0);
          k[0] = k1;
          for (std::size_t l = 0; l + 1 < spec.dim(); ++l) k[l + 1] = tails[i][l];
          fail(ErrorCode::resonance,
               "resonant spectrum: <k,lambda> = 0 at k = " + format_k(k) +
                   " (Melnikov condition violated)");
        }
        if (track_delta && kl1 <= cert.big_n) cert.delta_min = std::min(cert.delta_min, av);
        if (min_ratio) {
          double ratio = av / double(kl1);
          if (ratio < *min_ratio) {
            *min_ratio = ratio;
            if (worst_k) {
              worst_k->assign(spec.dim(), 0);
              (*worst_k)[0] = k1;
              for (std::size_t l = 0; l + 1 < spec.dim(); ++l)
                (*worst_k)[l + 1] = tails[i][l];
            }
          }
        }
      }
    }
  };

  // First pass fixes delta over |k| <= N (and catches exact resonances there).
  scan(cert.big_n, true, nullptr, nullptr);
  double gamma = std::min(std::isfinite(cert.delta_min)
                              ? cert.delta_min / double(cert.big_n)
                              : std::numeric_limits<double>::infinity(),
                          std::abs(l1) / 2.0);
  // Full verification pass of |<k,lambda>| >= |k| gamma.
  double min_ratio = std::numeric_limits<double>::infinity();
  std::vector<int> worst_k;
  scan(verify_up_to, false, &min_ratio, &worst_k);
  if (min_ratio < gamma * (1.0 - 1e-12)) {
    // The constructive value failed; fall back to the observed minimum with a
    // 1% safety margin and record that the certificate is empirical.
    gamma = 0.99 * min_ratio;
    cert.empirical = true;
  }
  if (!(gamma > 0.0))
    fail(ErrorCode::resonance, "gamma lower bound collapsed to zero near k = " +
                                   format_k(worst_k));
  cert.gamma = gamma;
  cert.verified_up_to = verify_up_to;
  return cert;
}

Spectrum make_spectrum(std::vector<Complex> lambda, Mode mode, int verify_up_to) {
  if (lambda.empty() || lambda.size() > kMaxDim)
    fail(ErrorCode::input, "spectrum dimension must be in 1..8");
  Spectrum spec;
  spec.lambda = std::move(lambda);
  spec.mode = mode;
  if (std::abs(spec.lambda[0]) == 0.0)
    fail(ErrorCode::resonance, "lambda_1 must be nonzero");
  if (mode != Mode::Birkhoff) {
    GammaCertificate cert = gamma_lower_bound(spec, verify_up_to);
    spec.gamma = cert.gamma;
    spec.gamma_verified_up_to = cert.verified_up_to;
    spec.gamma_empirical = cert.empirical;
  }
  return spec;
}

Polynomial project_class(const Polynomial& p, DivisorClass cls, Mode mode) {
  Polynomial out(p.dim());
  for (const auto& [e, c] : p.terms())
    if (classify_index(e, mode) == cls) out.set_coefficient(e, c);
  return out;
}

Polynomial project_subspace(const Polynomial& p, SubspaceTag tag,
                            const Spectrum& spec) {
  Polynomial out(p.dim());
  for (const auto& [e, c] : p.terms())
    if (subspace_of(e, spec) == tag) out.set_coefficient(e, c);
  return out;
}

}  // namespace lyapnorm
