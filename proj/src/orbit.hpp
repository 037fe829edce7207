#pragma once

#include <map>
#include <vector>

#include "normalform.hpp"

namespace lyapnorm {

// Dynamics on the invariant manifold x_2 = .. = y_n = 0: the Hamiltonian
// restricted there is lambda_1 zeta + Gamma(zeta) with zeta = x_1 y_1 and
// Gamma(zeta) = sum_j gamma_coeffs[j] zeta^j.
struct ManifoldDynamics {
  std::map<int, Complex> gamma_coeffs;  // zeta power (>= 2) -> coefficient
  Complex lambda1 = 0.0;
  Mode mode = Mode::LyapunovManifold;
};

// Collects the (x1 y1)^j coefficients of sum Z_m.  Any sharp kernel content
// that is not a pure (x1 y1) power is a structural failure.
ManifoldDynamics extract_gamma(const NormalFormResult& nf);

// a_1(zeta) = lambda_1 + Gamma'(zeta).
Complex frequency(const ManifoldDynamics& md, Complex zeta);

struct OrbitSample {
  std::vector<double> times;
  std::vector<std::vector<Complex>> states;  // 2n complex components (x, y)
  double period = 0.0;
  double residual = 0.0;
  double energy_drift = 0.0;
  bool aperiodic = false;
};

// Manifold solution x_1(t) = xi0 e^{t a_1}, y_1(t) = eta0 e^{-t a_1} pushed
// through the composed coordinate series to original variables, sampled over
// one period 2 pi / |Im a_1| (flagged aperiodic when Re a_1 != 0).
OrbitSample synthesize_orbit(const NormalFormResult& nf, const ManifoldDynamics& md,
                             Complex xi0, Complex eta0, int nsamples);

// Fixed-step RK4 integration of dx_l/dt = dH/dy_l, dy_l/dt = -dH/dx_l over
// [0, T].  Guards: T/dt <= 1e7 steps; |z|_inf > guard_radius aborts with a
// divergence error.  Records |z(T) - z(0)| and the energy drift.
OrbitSample integrate(const GradedSeries& H, const std::vector<Complex>& z0,
                      double T, double dt, double guard_radius, int nsamples);

struct RealifyResult {
  GradedSeries hamiltonian;   // in complex (x, y) variables
  std::vector<double> omega;  // oscillator frequencies; lambda_l = i omega_l
};

// Transforms H(q, p) = sum omega_l (q_l^2 + p_l^2)/2 + higher into complex
// coordinates via q_l = (x_l + i y_l)/sqrt(2), p_l = (y_l + i x_l)/sqrt(2),
// mapping the quadratic part to sum i omega_l x_l y_l.  The input polynomial
// reuses ExponentPair with j = q exponents and k = p exponents.
RealifyResult realify(const Polynomial& H_qp);

// State maps between real (q, p) and complex (x, y) coordinates:
// x = (q - i p)/sqrt(2), y = (p - i q)/sqrt(2), and the inverse.
std::vector<Complex> complexify_state(const std::vector<Complex>& qp);
std::vector<Complex> realify_state(const std::vector<Complex>& xy);

// Monomial-level check that the normalized vector field components 2..n
// vanish identically on the manifold x_2 = .. = y_n = 0.
bool manifold_invariant(const NormalFormResult& nf);

struct OrbitRun {
  OrbitSample integrated;
  Complex a1 = 0.0;
  Complex zeta = 0.0;
};

// Full validation pipeline: manifold point xi0 = eta0 = amplitude, predicted
// period from a_1(zeta), mapped to original coordinates and integrated with
// RK4 against the original Hamiltonian.  Guard radius is 1e3 * Lambda.
OrbitRun run_orbit_pipeline(const NormalFormResult& nf, const PolydiskGeometry& geom,
                            double amplitude, double dt, int nsamples);

}  // namespace lyapnorm
