#include <numbers>

#include "doctest.h"
#include "test_helpers.hpp"

using namespace lyapnorm;
using namespace testutil;

TEST_CASE("gamma extraction") {
  SUBCASE("H0 only gives an empty Gamma") {
    GradedSeries H(2, 8);
    Spectrum spec = model_m_spectrum();
    Polynomial H0(2);
    H0.set_coefficient(exps({1, 0}, {1, 0}), spec.lambda[0]);
    H0.set_coefficient(exps({0, 1}, {0, 1}), spec.lambda[1]);
    H.accumulate(H0);
    NormalFormResult nf = normalize(H, spec, 4, 8);
    ManifoldDynamics md = extract_gamma(nf);
    CHECK(md.gamma_coeffs.empty());
    CHECK(approx(frequency(md, 0.05), spec.lambda[0]));
  }
  SUBCASE("already-normal (x1 y1)^2 input passes through") {
    GradedSeries H(1, 8);
    H.accumulate(Polynomial::monomial(exps({1}, {1}), Complex(0, 1)));
    H.accumulate(Polynomial::monomial(exps({2}, {2}), 1.0));
    Spectrum spec = make_spectrum({Complex(0, 1)}, Mode::LyapunovManifold);
    NormalFormResult nf = normalize(H, spec, 4, 8);
    ManifoldDynamics md = extract_gamma(nf);
    REQUIRE(md.gamma_coeffs.count(2) == 1);
    CHECK(approx(md.gamma_coeffs.at(2), 1.0));
  }
  SUBCASE("reference model z_2") {
    NormalFormResult nf = normalize(model_m_series(8), model_m_spectrum(), 4, 8);
    ManifoldDynamics md = extract_gamma(nf);
    CHECK(approx(md.gamma_coeffs.at(2), Complex(0, std::sqrt(2.0)), 1e-12));
  }
}

TEST_CASE("frequency series") {
  ManifoldDynamics md;
  md.lambda1 = Complex(0, 1);
  CHECK(approx(frequency(md, 0.3), Complex(0, 1)));
  md.gamma_coeffs[2] = Complex(0.5, -0.25);  // Gamma = c zeta^2
  CHECK(approx(frequency(md, Complex(0.1, 0.0)),
               Complex(0, 1) + 2.0 * Complex(0.5, -0.25) * 0.1));
  SUBCASE("imaginary coefficients with real zeta keep a1 on the axis") {
    ManifoldDynamics imd;
    imd.lambda1 = Complex(0, 1);
    imd.gamma_coeffs[2] = Complex(0, 1.5);
    imd.gamma_coeffs[3] = Complex(0, -0.2);
    Complex a1 = frequency(imd, 0.01);
    CHECK(a1.real() == 0.0);
  }
}

TEST_CASE("rk4 integrator") {
  // Pure rotation: x(t) = x0 e^{it}, y(t) = y0 e^{-it}.
  GradedSeries H(1, 4);
  H.accumulate(Polynomial::monomial(exps({1}, {1}), Complex(0, 1)));
  std::vector<Complex> z0{Complex(1, 0), Complex(0, 0)};
  const double T = 2.0 * std::numbers::pi;
  SUBCASE("one period closes to 1e-10 at dt = 1e-3") {
    OrbitSample s = integrate(H, z0, T, 1e-3, 1e3, 16);
    CHECK(s.residual <= 1e-10);
    CHECK(s.energy_drift <= 1e-12);
  }
  SUBCASE("fourth-order convergence: halving dt gains ~16x") {
    double e1 = integrate(H, z0, T, 0.02, 1e3, 4).residual;
    double e2 = integrate(H, z0, T, 0.01, 1e3, 4).residual;
    CHECK(e1 / e2 >= 12.0);
    CHECK(e1 / e2 <= 20.0);
  }
  SUBCASE("energy drift on the cubic model stays tiny over one period") {
    GradedSeries M = model_m_series(8);
    std::vector<Complex> start{Complex(0.01, 0), Complex(0, 0), Complex(0.01, 0),
                               Complex(0, 0)};
    OrbitSample s = integrate(M, start, T, 1e-3, 1e3, 16);
    CHECK(s.energy_drift <= 1e-9);
  }
  SUBCASE("guards") {
    CHECK_THROWS_AS(integrate(H, z0, 1.0, 1e-9, 1e3, 4), Error);  // step guard
    GradedSeries Hyp(1, 4);
    Hyp.accumulate(Polynomial::monomial(exps({1}, {1}), Complex(3, 0)));
    try {
      integrate(Hyp, {Complex(10, 0), Complex(10, 0)}, 5.0, 1e-3, 1e2, 4);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::divergence);
    }
  }
}

TEST_CASE("synthesized orbits") {
  SUBCASE("linear flow: circular orbit with zero residual") {
    GradedSeries H(1, 6);
    H.accumulate(Polynomial::monomial(exps({1}, {1}), Complex(0, 1)));
    Spectrum spec = make_spectrum({Complex(0, 1)}, Mode::LyapunovManifold);
    NormalFormResult nf = normalize(H, spec, 2, 6);
    ManifoldDynamics md = extract_gamma(nf);
    OrbitSample s = synthesize_orbit(nf, md, 0.3, 0.3, 32);
    CHECK_FALSE(s.aperiodic);
    CHECK(approx(s.period, 2.0 * std::numbers::pi, 1e-12));
    CHECK(s.residual <= 1e-12);
    // |x1(t)| is constant on the circle
    for (const auto& st : s.states) CHECK(approx(std::abs(st[0]), 0.3, 1e-12));
  }
  SUBCASE("hyperbolic flow is flagged and grows like e^t") {
    GradedSeries H(1, 6);
    H.accumulate(Polynomial::monomial(exps({1}, {1}), Complex(1, 0)));
    Spectrum spec = make_spectrum({Complex(1, 0)}, Mode::LyapunovManifold);
    NormalFormResult nf = normalize(H, spec, 2, 6);
    ManifoldDynamics md = extract_gamma(nf);
    OrbitSample s = synthesize_orbit(nf, md, 0.1, 0.1, 8);
    CHECK(s.aperiodic);
    double t1 = s.times[4];
    CHECK(approx(std::abs(s.states[4][0]), 0.1 * std::exp(t1), 1e-10));
  }
}

TEST_CASE("orbit validation pipeline on the reference model") {
  PolydiskGeometry geom({1.0, 1.0});
  double prev = 1.0;
  for (int order : {2, 4, 6}) {
    NormalFormResult nf =
        normalize(model_m_series(order + 4), model_m_spectrum(), order, order + 4);
    OrbitRun run = run_orbit_pipeline(nf, geom, 0.01, 1e-3, 8);
    CHECK_FALSE(run.integrated.aperiodic);
    CHECK(run.integrated.residual < prev);
    CHECK(run.integrated.energy_drift <= 1e-9);
    prev = run.integrated.residual;
  }
  CHECK(prev <= 1e-6);
}

TEST_CASE("invariant manifold at the monomial level") {
  NormalFormResult nf = normalize(model_m_series(10), model_m_spectrum(), 6, 10);
  CHECK(manifold_invariant(nf));
  // the raw input is not invariant
  NormalFormResult raw = normalize(model_m_series(10), model_m_spectrum(), 0, 10);
  raw.state.Z.push_back(model_m_cubic());  // pretend the cubic were normal
  CHECK_FALSE(manifold_invariant(raw));
}

TEST_CASE("oscillator complexification") {
  SUBCASE("quadratic part maps to i omega x y") {
    Polynomial H_qp(1);
    H_qp.set_coefficient(exps({2}, {0}), 0.85);  // q^2 coefficient omega/2
    H_qp.set_coefficient(exps({0}, {2}), 0.85);
    RealifyResult res = realify(H_qp);
    CHECK(approx(res.omega[0], 1.7));
    Polynomial flat = res.hamiltonian.flatten();
    CHECK(flat.size() == 1);
    CHECK(approx(flat.coefficient(exps({1}, {1})), Complex(0, 1.7), 1e-13));
  }
  SUBCASE("q^3 round trips through the state maps") {
    Polynomial H_qp(1);
    H_qp.set_coefficient(exps({2}, {0}), 0.5);
    H_qp.set_coefficient(exps({0}, {2}), 0.5);
    H_qp.set_coefficient(exps({3}, {0}), 1.0);
    RealifyResult res = realify(H_qp);
    Polynomial Hxy = res.hamiltonian.flatten();
    Rng rng(71);
    for (int t = 0; t < 20; ++t) {
      std::vector<Complex> qp{Complex(rng.uniform(-1, 1), 0),
                              Complex(rng.uniform(-1, 1), 0)};
      std::vector<Complex> xy = complexify_state(qp);
      // value agreement under substitution
      Complex direct = H_qp.evaluate({qp[0]}, {qp[1]});
      Complex via = Hxy.evaluate({xy[0]}, {xy[1]});
      CHECK(approx(direct, via, 1e-13));
      // state round trip
      std::vector<Complex> back = realify_state(xy);
      CHECK(approx(back[0], qp[0], 1e-13));
      CHECK(approx(back[1], qp[1], 1e-13));
    }
  }
  SUBCASE("canonical pair stays canonical") {
    // {x, y} = 1 in (q, p) coordinates
    Polynomial x(1), y(1);
    const double is2 = 1.0 / std::numbers::sqrt2;
    x.set_coefficient(exps({1}, {0}), is2);
    x.set_coefficient(exps({0}, {1}), Complex(0, -is2));
    y.set_coefficient(exps({0}, {1}), is2);
    y.set_coefficient(exps({1}, {0}), Complex(0, -is2));
    Polynomial b = poisson_bracket(x, y);
    CHECK(approx(b.coefficient(exps({0}, {0})), 1.0, 1e-14));
  }
  SUBCASE("reality pairing of the transformed coefficients") {
    // Real H(q,p) forces c_{j,k} = i^{|j+k|} conj(c_{k,j}).
    Rng rng(73);
    Polynomial H_qp(2);
    H_qp.set_coefficient(exps({2, 0}, {0, 0}), 0.5);
    H_qp.set_coefficient(exps({0, 0}, {2, 0}), 0.5);
    H_qp.set_coefficient(exps({0, 2}, {0, 0}), 0.5);
    H_qp.set_coefficient(exps({0, 0}, {0, 2}), 0.5);
    for (const ExponentPair& e : enumerate_monomials(2, 3))
      H_qp.set_coefficient(e, rng.uniform(-1, 1));
    Polynomial Hxy = realify(H_qp).hamiltonian.flatten();
    for (const auto& [e, c] : Hxy.terms()) {
      ExponentPair swapped(e.k_vector(), e.j_vector());
      Complex mirror = Hxy.coefficient(swapped);
      Complex ipow = 1.0;
      for (int p = 0; p < e.degree() % 4; ++p) ipow *= Complex(0, 1);
      CHECK(approx(c, ipow * std::conj(mirror), 1e-12));
    }
  }
  SUBCASE("non-oscillator quadratic parts are rejected") {
    Polynomial bad(1);
    bad.set_coefficient(exps({1}, {1}), 1.0);  // q p cross term
    bad.set_coefficient(exps({2}, {0}), 0.5);
    bad.set_coefficient(exps({0}, {2}), 0.5);
    CHECK_THROWS_AS(realify(bad), Error);
    Polynomial neg(1);
    neg.set_coefficient(exps({2}, {0}), -0.5);
    neg.set_coefficient(exps({0}, {2}), -0.5);
    CHECK_THROWS_AS(realify(neg), Error);
  }
}
