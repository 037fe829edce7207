#pragma once

#include <string>
#include <vector>

#include "poly.hpp"

namespace lyapnorm {

// Normal-form flavour.  LyapunovManifold needs the first Melnikov condition,
// ExtendedCenter both, Birkhoff neither (kernel detected numerically).
enum class Mode { LyapunovManifold, ExtendedCenter, Birkhoff };

enum class DivisorClass { Sharp, Natural, Flat };
enum class SubspaceTag { ZPart, WPart };

std::string mode_name(Mode m);       // "thm1" / "thm2" / "birkhoff"
Mode mode_from_name(const std::string& s);

struct Spectrum {
  std::vector<Complex> lambda;
  Mode mode = Mode::LyapunovManifold;
  double gamma = 0.0;            // certified small-divisor constant, Lemma 2
  int gamma_verified_up_to = 0;  // |k| cutoff of the brute-force check
  bool gamma_empirical = false;  // true when the constructive gamma failed
                                 // verification and was lowered empirically

  std::size_t dim() const { return lambda.size(); }
  double max_abs_lambda() const;
  // Resonance tolerance for deciding |<k,lambda>| == 0 at index-l1 scale.
  double resonance_tolerance(int l1) const;
};

// m = sum_{l>=2} (j_l + k_l) of the classification key j + k.
DivisorClass classify_index(const ExponentPair& e, Mode mode);

// <j - k, lambda>.
Complex divisor(const ExponentPair& e, const Spectrum& spec);

// Z/W membership of a monomial.  Kernel membership is structural in the
// Melnikov modes (Sharp: j1 == k1; Natural under the second condition:
// j == k) and tolerance-based in Birkhoff mode, where a divisor strictly
// between zero and the tolerance is an error rather than a guess.
SubspaceTag subspace_of(const ExponentPair& e, const Spectrum& spec);

struct GammaCertificate {
  double gamma = 0.0;
  int big_n = 0;          // the integer N >= 1 + 2*theta of the construction
  double delta_min = 0.0; // min |<k,lambda>| over the natural set, |k| <= N
  double theta = 0.0;
  bool empirical = false;
  int verified_up_to = 0;
};

// Constructive lower bound of Lemma 2 / Corollary 1, brute-force verified on
// every k in K_sharp u K_natural with |k| <= verify_up_to.  An exact zero in
// the scanned range raises a resonance error naming the offending k; a
// verification failure lowers gamma empirically (1% margin) and flags it.
GammaCertificate gamma_lower_bound(const Spectrum& spec, int verify_up_to);

// Builds a spectrum and, in the Melnikov modes, fills the gamma fields.
Spectrum make_spectrum(std::vector<Complex> lambda, Mode mode,
                       int verify_up_to = 200);

// Projection helpers over the sharp/natural/flat splitting.
Polynomial project_class(const Polynomial& p, DivisorClass cls, Mode mode);
Polynomial project_subspace(const Polynomial& p, SubspaceTag tag,
                            const Spectrum& spec);

}  // namespace lyapnorm
