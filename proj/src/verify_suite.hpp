#pragma once

#include "model_io.hpp"

namespace lyapnorm {

struct VerifySuiteOptions {
  int trials = 200;
  std::uint64_t seed = 0;
  double d = 0.25;
};

// Random homogeneous polynomial of the given degree, coefficients uniform in
// [-1,1]^2.
Polynomial random_homogeneous(Rng& rng, std::size_t n, int degree);

// Exact combinatorial checks: T properties by exhaustive multiset
// enumeration, the mu recursion identities and Catalan closed form.  Returns
// a report object with a "violations" count.
nlohmann::json run_sequence_checks(double d);

// Randomized Cauchy-estimate trials (degrees 3..6, delta' = delta'' = 0,
// delta cycling over {0.1, 0.25, 0.5}) plus the sequence checks and the
// Lemma 2 brute force for the model's spectrum.
nlohmann::json run_verify_suite(const Model& model, const VerifySuiteOptions& opts);

}  // namespace lyapnorm
