#include "orbit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lyapnorm {

ManifoldDynamics extract_gamma(const NormalFormResult& nf) {
  if (nf.spectrum.mode == Mode::Birkhoff)
    fail(ErrorCode::input, "manifold extraction requires mode thm1 or thm2");
  ManifoldDynamics md;
  md.lambda1 = nf.spectrum.lambda[0];
  md.mode = nf.spectrum.mode;
  Polynomial z = nf.state.sum_Z();
  for (const auto& [e, c] : z.terms()) {
    if (classify_index(e, nf.spectrum.mode) != DivisorClass::Sharp) continue;
    if (!e.diagonal() || e.j(0) != e.degree() / 2)
      fail(ErrorCode::validation,
           "sharp kernel term is not a power of x1 y1: " +
               Polynomial::monomial(e, c).to_text());
    md.gamma_coeffs[e.j(0)] += c;
  }
  return md;
}

Complex frequency(const ManifoldDynamics& md, Complex zeta) {
  Complex a = md.lambda1;
  for (const auto& [j, c] : md.gamma_coeffs) {
    Complex zp = 1.0;
    for (int p = 0; p < j - 1; ++p) zp *= zeta;
    a += double(j) * c * zp;
  }
  return a;
}

OrbitSample synthesize_orbit(const NormalFormResult& nf, const ManifoldDynamics& md,
                             Complex xi0, Complex eta0, int nsamples) {
  if (nsamples < 1) fail(ErrorCode::input, "nsamples must be >= 1");
  const std::size_t n = nf.state.dim();
  const Complex zeta = xi0 * eta0;
  const Complex a1 = frequency(md, zeta);

  OrbitSample sample;
  sample.aperiodic = std::abs(a1.real()) > 1e-10 * std::max(1.0, std::abs(a1));
  // Periodic case: one rotation period 2 pi / |Im a_1|.  With a real part the
  // orbit does not close; sample over the characteristic time 2 pi / |a_1|
  // instead, which stays finite however the spectrum mixes.
  sample.period = sample.aperiodic
                      ? 2.0 * std::numbers::pi / std::max(std::abs(a1), 1e-300)
                      : 2.0 * std::numbers::pi / std::abs(a1.imag());

  std::vector<GradedSeries> coords =
      compose_coordinates(nf.state.chi, n, nf.state.trunc_order);
  std::vector<Polynomial> coord_polys;
  coord_polys.reserve(2 * n);
  for (const GradedSeries& s : coords) coord_polys.push_back(s.flatten());

  for (int i = 0; i <= nsamples; ++i) {
    double t = sample.period * double(i) / double(nsamples);
    std::vector<Complex> x(n, 0.0), y(n, 0.0);
    x[0] = xi0 * std::exp(t * a1);
    y[0] = eta0 * std::exp(-t * a1);
    std::vector<Complex> state(2 * n);
    for (std::size_t l = 0; l < 2 * n; ++l) state[l] = coord_polys[l].evaluate(x, y);
    sample.times.push_back(t);
    sample.states.push_back(std::move(state));
  }
  double acc = 0.0;
  for (std::size_t l = 0; l < 2 * n; ++l)
    acc += std::norm(sample.states.front()[l] - sample.states.back()[l]);
  sample.residual = std::sqrt(acc);
  return sample;
}

namespace {

// Flattened term list for fast repeated evaluation.
struct PolyEval {
  struct Term {
    Complex c;
    std::array<std::uint8_t, 2 * kMaxDim> e;
  };
  std::size_t n = 0;
  std::vector<Term> terms;

  explicit PolyEval(const Polynomial& p) : n(p.dim()) {
    terms.reserve(p.size());
    for (const auto& [e, c] : p.terms()) {
      Term t;
      t.c = c;
      t.e.fill(0);
      for (std::size_t l = 0; l < n; ++l) {
        t.e[l] = std::uint8_t(e.j(l));
        t.e[n + l] = std::uint8_t(e.k(l));
      }
      terms.push_back(t);
    }
  }

  Complex operator()(const std::vector<Complex>& z) const {
    Complex sum = 0.0;
    for (const Term& t : terms) {
      Complex v = t.c;
      for (std::size_t l = 0; l < 2 * n; ++l)
        for (int p = 0; p < t.e[l]; ++p) v *= z[l];
      sum += v;
    }
    return sum;
  }
};

}  // namespace

OrbitSample integrate(const GradedSeries& H, const std::vector<Complex>& z0,
                      double T, double dt, double guard_radius, int nsamples) {
  const std::size_t n = H.dim();
  if (z0.size() != 2 * n) fail(ErrorCode::input, "initial state dimension mismatch");
  if (!(dt > 0.0)) fail(ErrorCode::input, "dt must be positive");
  if (!(T >= 0.0)) fail(ErrorCode::input, "integration time must be >= 0");
  if (T / dt > 1e7) fail(ErrorCode::input, "step guard exceeded: T/dt > 1e7");
  if (nsamples < 1) nsamples = 1;

  Polynomial Hp = H.flatten();
  PolyEval Heval(Hp);
  std::vector<PolyEval> grad;
  grad.reserve(2 * n);
  for (std::size_t l = 0; l < n; ++l) grad.emplace_back(Hp.derivative_y(l));
  for (std::size_t l = 0; l < n; ++l) grad.emplace_back(Hp.derivative_x(l));

  auto field = [&](const std::vector<Complex>& z, std::vector<Complex>& dz) {
    for (std::size_t l = 0; l < n; ++l) {
      dz[l] = grad[l](z);           // dH/dy_l
      dz[n + l] = -grad[n + l](z);  // -dH/dx_l
    }
  };
  auto max_abs = [&](const std::vector<Complex>& z) {
    double m = 0.0;
    for (const Complex& c : z) m = std::max(m, std::abs(c));
    return m;
  };

  OrbitSample sample;
  sample.period = T;
  const Complex E0 = Heval(z0);
  std::vector<Complex> z = z0, k1(2 * n), k2(2 * n), k3(2 * n), k4(2 * n),
                       tmp(2 * n);
  long total_steps = long(std::ceil(T / dt - 1e-12));
  if (total_steps < 1) total_steps = (T > 0.0) ? 1 : 0;
  long stride = std::max<long>(1, total_steps / nsamples);

  double t = 0.0;
  sample.times.push_back(0.0);
  sample.states.push_back(z);
  for (long step = 0; step < total_steps; ++step) {
    double h = std::min(dt, T - t);
    field(z, k1);
    for (std::size_t i = 0; i < 2 * n; ++i) tmp[i] = z[i] + 0.5 * h * k1[i];
    field(tmp, k2);
    for (std::size_t i = 0; i < 2 * n; ++i) tmp[i] = z[i] + 0.5 * h * k2[i];
    field(tmp, k3);
    for (std::size_t i = 0; i < 2 * n; ++i) tmp[i] = z[i] + h * k3[i];
    field(tmp, k4);
    for (std::size_t i = 0; i < 2 * n; ++i)
      z[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    t += h;
    if (max_abs(z) > guard_radius)
      fail(ErrorCode::divergence, "trajectory left the guard polydisk at t = " +
                                      std::to_string(t));
    if ((step + 1) % stride == 0 || step + 1 == total_steps) {
      sample.times.push_back(t);
      sample.states.push_back(z);
    }
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < 2 * n; ++i) acc += std::norm(z[i] - z0[i]);
  sample.residual = std::sqrt(acc);
  sample.energy_drift = std::abs(Heval(z) - E0);
  return sample;
}

RealifyResult realify(const Polynomial& H_qp) {
  const std::size_t n = H_qp.dim();
  RealifyResult out{GradedSeries(n, std::max(H_qp.max_degree(), 2)),
                    std::vector<double>(n, 0.0)};

  // Validate the quadratic part: sum omega_l (q_l^2 + p_l^2)/2, no cross terms.
  Polynomial quad = H_qp.homogeneous_part(2);
  const double scale = std::max(1.0, quad.coefficient_l1_norm());
  for (const auto& [e, c] : quad.terms()) {
    bool square = false;
    for (std::size_t l = 0; l < n; ++l)
      if ((e.j(l) == 2 && e.degree() == 2) || (e.k(l) == 2 && e.degree() == 2))
        square = true;
    if (!square)
      fail(ErrorCode::validation,
           "quadratic part is not a diagonal oscillator sum: cross term " +
               Polynomial::monomial(e, c).to_text());
    if (std::abs(c.imag()) > 1e-12 * scale)
      fail(ErrorCode::validation, "oscillator coefficients must be real");
  }
  for (std::size_t l = 0; l < n; ++l) {
    ExponentPair eq(n), ep(n);
    eq.set_j(l, 2);
    ep.set_k(l, 2);
    Complex cq = quad.coefficient(eq), cp = quad.coefficient(ep);
    if (std::abs(cq - cp) > 1e-12 * scale)
      fail(ErrorCode::validation,
           "oscillator requires equal q^2 and p^2 coefficients in every mode");
    double w = 2.0 * cq.real();
    if (!(w > 0.0))
      fail(ErrorCode::validation, "oscillator frequencies must be positive");
    out.omega[l] = w;
  }

  // Substitution polynomials Q_l = (x_l + i y_l)/sqrt(2), P_l = (y_l + i x_l)/sqrt(2).
  const double is2 = 1.0 / std::numbers::sqrt2;
  std::vector<Polynomial> Q, P;
  for (std::size_t l = 0; l < n; ++l) {
    Polynomial q = Polynomial::variable_x(n, l) * Complex(is2) +
                   Polynomial::variable_y(n, l) * Complex(0.0, is2);
    Polynomial p = Polynomial::variable_y(n, l) * Complex(is2) +
                   Polynomial::variable_x(n, l) * Complex(0.0, is2);
    Q.push_back(std::move(q));
    P.push_back(std::move(p));
  }
  for (const auto& [e, c] : H_qp.terms()) {
    Polynomial term = Polynomial::constant(n, c);
    for (std::size_t l = 0; l < n; ++l) {
      for (int p = 0; p < e.j(l); ++p) term = term * Q[l];
      for (int p = 0; p < e.k(l); ++p) term = term * P[l];
    }
    out.hamiltonian.accumulate(term);
  }
  return out;
}

std::vector<Complex> complexify_state(const std::vector<Complex>& qp) {
  if (qp.size() % 2 != 0) fail(ErrorCode::input, "state must have 2n components");
  const std::size_t n = qp.size() / 2;
  const double is2 = 1.0 / std::numbers::sqrt2;
  std::vector<Complex> xy(2 * n);
  for (std::size_t l = 0; l < n; ++l) {
    xy[l] = (qp[l] - Complex(0.0, 1.0) * qp[n + l]) * is2;
    xy[n + l] = (qp[n + l] - Complex(0.0, 1.0) * qp[l]) * is2;
  }
  return xy;
}

std::vector<Complex> realify_state(const std::vector<Complex>& xy) {
  if (xy.size() % 2 != 0) fail(ErrorCode::input, "state must have 2n components");
  const std::size_t n = xy.size() / 2;
  const double is2 = 1.0 / std::numbers::sqrt2;
  std::vector<Complex> qp(2 * n);
  for (std::size_t l = 0; l < n; ++l) {
    qp[l] = (xy[l] + Complex(0.0, 1.0) * xy[n + l]) * is2;
    qp[n + l] = (xy[n + l] + Complex(0.0, 1.0) * xy[l]) * is2;
  }
  return qp;
}

OrbitRun run_orbit_pipeline(const NormalFormResult& nf, const PolydiskGeometry& geom,
                            double amplitude, double dt, int nsamples) {
  if (amplitude < 0.0) fail(ErrorCode::input, "amplitude must be >= 0");
  OrbitRun run;
  ManifoldDynamics md = extract_gamma(nf);
  run.zeta = Complex(amplitude * amplitude, 0.0);
  run.a1 = frequency(md, run.zeta);
  OrbitSample synth = synthesize_orbit(nf, md, amplitude, amplitude, 1);
  run.integrated = integrate(nf.input, synth.states.front(), synth.period, dt,
                             1e3 * geom.min_radius(), nsamples);
  run.integrated.aperiodic = synth.aperiodic;
  return run;
}

bool manifold_invariant(const NormalFormResult& nf) {
  const std::size_t n = nf.state.dim();
  Polynomial h = nf.state.H0;
  h += nf.state.sum_Z();
  for (std::size_t l = 1; l < n; ++l) {
    for (const Polynomial& d : {h.derivative_x(l), h.derivative_y(l)}) {
      for (const auto& [e, c] : d.terms()) {
        int off_manifold = 0;
        for (std::size_t m = 1; m < n; ++m) off_manifold += e.j(m) + e.k(m);
        if (off_manifold == 0) return false;  // survives on the manifold
      }
    }
  }
  return true;
}

}  // namespace lyapnorm
