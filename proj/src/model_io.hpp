#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "bounds.hpp"
#include "normalform.hpp"
#include "orbit.hpp"

namespace lyapnorm {

// Parsed job input: spectrum, full Hamiltonian (quadratic part implied by
// lambda), polydisk geometry.
struct Model {
  std::size_t n = 0;
  Spectrum spectrum;
  GradedSeries hamiltonian;  // H0 + perturbation terms
  PolydiskGeometry geometry;
  std::uint64_t input_hash = 0;

  Model() : hamiltonian(1, 0), geometry(std::vector<double>{1.0}) {}
};

// Model JSON: {"n":2, "lambda":[[0,1],[0,1.41421356]], "mode":"thm1",
// "terms":[{"j":[2,0],"k":[0,1],"c":[1,0]}, "..."], "radii":[1,1]}.
// Entries of "terms" may also be strings in the polynomial text format.
Model parse_model_json(const std::string& text, int verify_up_to = 200);
Model load_model_file(const std::string& path, int verify_up_to = 200);

// Real oscillator input: {"n":2, "mode":"thm1",
// "terms":[{"q":[2,0],"p":[0,0],"c":0.5}, ...]} including the quadratic part
// sum omega_l (q_l^2 + p_l^2)/2.  Returns the complex model JSON text.
std::string convert_real_model_json(const std::string& text);

nlohmann::json polynomial_to_json(const Polynomial& p);
Polynomial polynomial_from_json(const nlohmann::json& j, std::size_t n);

nlohmann::json normal_form_to_json(const NormalFormResult& nf);
nlohmann::json normal_form_summary_json(const NormalFormResult& nf);

std::string ledger_to_csv(const BoundLedger& ledger);
nlohmann::json certificate_to_json(const Certificate& cert, const BoundLedger& ledger);

nlohmann::json orbit_summary_json(const OrbitSample& integrated, Complex a1,
                                  Complex zeta, int order, double amplitude,
                                  double dt);
std::string orbit_to_csv(const OrbitSample& sample, const GradedSeries& H);

// JSON serializer with doubles rendered at 17 significant digits (round-trip
// exact) and object keys in sorted order.
std::string dump_json_17(const nlohmann::json& j);

std::string format_double_17(double v);

// Writes via a temp file in the same directory followed by a rename.
void atomic_write_file(const std::string& path, const std::string& content);

std::uint64_t fnv1a64(const std::string& bytes);

// Deterministic RNG (splitmix64-based) with implementation-independent
// uniform draws, for reproducible randomized suites.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next_u64();
  double uniform(double lo, double hi);  // in [lo, hi)
  int uniform_int(int lo, int hi);       // inclusive bounds

 private:
  std::uint64_t state_;
};

}  // namespace lyapnorm
