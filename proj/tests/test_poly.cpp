#include "doctest.h"
#include "test_helpers.hpp"

using namespace lyapnorm;
using namespace testutil;

TEST_CASE("canonical pair bracket") {
  Polynomial x1 = Polynomial::variable_x(1, 0), y1 = Polynomial::variable_y(1, 0);
  Polynomial b = poisson_bracket(x1, y1);
  CHECK(b.size() == 1);
  CHECK(approx(b.coefficient(exps({0}, {0})), 1.0));
}

TEST_CASE("bracket of squares") {
  Polynomial x1 = Polynomial::variable_x(1, 0), y1 = Polynomial::variable_y(1, 0);
  Polynomial b = poisson_bracket(y1 * y1, x1 * x1);
  CHECK(b.size() == 1);
  CHECK(approx(b.coefficient(exps({1}, {1})), -4.0));
}

TEST_CASE("bracket against the quadratic part is the eigenvalue action") {
  // {x1, i x1 y1} = i x1 for lambda_1 = i
  Polynomial x1 = Polynomial::variable_x(1, 0);
  Polynomial H0 = Polynomial::monomial(exps({1}, {1}), Complex(0, 1));
  Polynomial b = poisson_bracket(x1, H0);
  CHECK(approx(b.coefficient(exps({1}, {0})), Complex(0, 1)));
}

TEST_CASE("lie derivative convention locked by the eigenvalue property") {
  // L_{H0} x^j y^k = <j-k, lambda> x^j y^k, with L_chi f = {f, chi}.
  Rng rng(7);
  Spectrum spec = make_spectrum({Complex(0, 1), Complex(0, 2.2360679)},
                                Mode::LyapunovManifold);
  Polynomial H0(2);
  for (std::size_t l = 0; l < 2; ++l) {
    ExponentPair e(2);
    e.set_j(l, 1);
    e.set_k(l, 1);
    H0.set_coefficient(e, spec.lambda[l]);
  }
  for (int t = 0; t < 50; ++t) {
    std::vector<int> j{rng.uniform_int(0, 4), rng.uniform_int(0, 4)};
    std::vector<int> k{rng.uniform_int(0, 4), rng.uniform_int(0, 4)};
    ExponentPair e(j, k);
    Polynomial mono = Polynomial::monomial(e, 1.0);
    Polynomial lhs = lie_derivative(H0, mono);
    Complex expected = divisor(e, spec);
    CHECK(approx(lhs.coefficient(e), expected, 1e-14));
    CHECK(lhs.size() == (std::abs(expected) == 0.0 ? 0u : 1u));
  }

  // The sign this fixes: L_{x1^2} y1^2 = {y1^2, x1^2} = -4 x1 y1.
  Polynomial x1 = Polynomial::variable_x(1, 0), y1 = Polynomial::variable_y(1, 0);
  Polynomial d = lie_derivative(x1 * x1, y1 * y1);
  CHECK(approx(d.coefficient(exps({1}, {1})), -4.0));

  // L_{H0} x1 y2^2 with lambda = (i, 2i) multiplies by <(1,-2),(i,2i)> = -3i.
  Polynomial H0b(2);
  H0b.set_coefficient(exps({1, 0}, {1, 0}), Complex(0, 1));
  H0b.set_coefficient(exps({0, 1}, {0, 1}), Complex(0, 2));
  Polynomial f = Polynomial::monomial(exps({1, 0}, {0, 2}), 1.0);
  Polynomial lf = lie_derivative(H0b, f);
  CHECK(approx(lf.coefficient(exps({1, 0}, {0, 2})), Complex(0, -3)));
}

TEST_CASE("lie derivative of a constant vanishes") {
  Rng rng(3);
  Polynomial chi = random_homogeneous(rng, 2, 4);
  Polynomial c = Polynomial::constant(2, Complex(2.5, -1.0));
  CHECK(lie_derivative(chi, c).empty());
}

TEST_CASE("bracket antisymmetry on random pairs") {
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = std::size_t(rng.uniform_int(1, 3));
    Polynomial f = random_homogeneous(rng, n, rng.uniform_int(2, 5));
    Polynomial g = random_homogeneous(rng, n, rng.uniform_int(2, 5));
    Polynomial sum = poisson_bracket(f, g) + poisson_bracket(g, f);
    double scale = poisson_bracket(f, g).coefficient_l1_norm();
    CHECK(sum.coefficient_l1_norm() <= 1e-14 * std::max(1.0, scale));
  }
}

TEST_CASE("jacobi identity on random cubics") {
  Rng rng(13);
  for (int t = 0; t < 25; ++t) {
    std::size_t n = std::size_t(rng.uniform_int(1, 3));
    Polynomial f = random_homogeneous(rng, n, 3);
    Polynomial g = random_homogeneous(rng, n, 3);
    Polynomial h = random_homogeneous(rng, n, 3);
    Polynomial sum = poisson_bracket(f, poisson_bracket(g, h));
    sum += poisson_bracket(g, poisson_bracket(h, f));
    sum += poisson_bracket(h, poisson_bracket(f, g));
    double scale = poisson_bracket(f, poisson_bracket(g, h)).coefficient_l1_norm();
    CHECK(sum.coefficient_l1_norm() <= 1e-12 * std::max(1.0, scale));
  }
}

TEST_CASE("bracket degree bookkeeping on homogeneous inputs") {
  Rng rng(17);
  Polynomial f = random_homogeneous(rng, 2, 4);
  Polynomial g = random_homogeneous(rng, 2, 5);
  Polynomial b = poisson_bracket(f, g);
  CHECK(b.is_homogeneous());
  CHECK(b.max_degree() == 4 + 5 - 2);
}

TEST_CASE("lie series termination and truncation") {
  Polynomial chi = Polynomial::monomial(exps({3}, {0}), 1.0);  // x1^3
  GradedSeries f = GradedSeries::from_polynomial(Polynomial::variable_y(1, 0), 5);
  GradedSeries out = lie_series_apply(chi, f, 5);
  // exp(L_{x1^3}) y1 = y1 + {y1, x1^3} = y1 - 3 x1^2 and the series stops.
  Polynomial flat = out.flatten();
  CHECK(flat.size() == 2);
  CHECK(approx(flat.coefficient(exps({0}, {1})), 1.0));
  CHECK(approx(flat.coefficient(exps({2}, {0})), -3.0));

  SUBCASE("kernel generator leaves H0 alone") {
    Polynomial H0 = Polynomial::monomial(exps({1}, {1}), Complex(0, 1));
    Polynomial kernel_chi = Polynomial::monomial(exps({2}, {2}), Complex(0.3, 1.7));
    GradedSeries h = GradedSeries::from_polynomial(H0, 8);
    GradedSeries res = lie_series_apply(kernel_chi, h, 8);
    CHECK(max_rel_deviation(res, h) == 0.0);
  }

  SUBCASE("truncation below the input degree flags and empties") {
    GradedSeries low = lie_series_apply(chi, GradedSeries::from_polynomial(
                                                 Polynomial::monomial(exps({4}, {0}), 1.0), 8),
                                        3);
    CHECK(low.empty());
    CHECK(low.was_truncated());
  }

  SUBCASE("degree <= 2 generators are rejected") {
    Polynomial bad = Polynomial::monomial(exps({1}, {1}), 1.0);
    CHECK_THROWS_AS(lie_series_apply(bad, f, 5), Error);
  }
}

TEST_CASE("polydisk norm") {
  Polynomial f = Polynomial::monomial(exps({2, 0}, {0, 1}), 2.0);  // 2 x1^2 y2
  CHECK(approx(polydisk_norm(f, PolydiskGeometry({1, 1}), 0.0), 2.0));
  CHECK(approx(polydisk_norm(f, PolydiskGeometry({2, 3}), 0.0), 24.0));
  CHECK(approx(polydisk_norm(f, PolydiskGeometry({1, 1}), 0.5), 0.25));

  SUBCASE("triangle inequality and absolute homogeneity") {
    Rng rng(23);
    PolydiskGeometry geom({0.9, 1.3});
    for (int t = 0; t < 40; ++t) {
      Polynomial a = random_homogeneous(rng, 2, rng.uniform_int(2, 5));
      Polynomial b = random_homogeneous(rng, 2, rng.uniform_int(2, 5));
      double delta = rng.uniform(0.0, 0.9);
      CHECK(polydisk_norm(a + b, geom, delta) <=
            polydisk_norm(a, geom, delta) + polydisk_norm(b, geom, delta) + 1e-12);
      Complex alpha(rng.uniform(-2, 2), rng.uniform(-2, 2));
      CHECK(approx(polydisk_norm(a * alpha, geom, delta),
                   std::abs(alpha) * polydisk_norm(a, geom, delta), 1e-12));
    }
  }

  SUBCASE("monotone non-increasing in delta") {
    Rng rng(29);
    Polynomial a = random_homogeneous(rng, 2, 4);
    PolydiskGeometry geom({1.0, 2.0});
    double prev = polydisk_norm(a, geom, 0.0);
    for (double delta : {0.1, 0.25, 0.5, 0.75}) {
      double v = polydisk_norm(a, geom, delta);
      CHECK(v <= prev + 1e-15);
      prev = v;
    }
  }
}

TEST_CASE("cleanup drops exact zeros and prune is relative") {
  Polynomial p(1);
  p.add_term(exps({1}, {0}), 1.0);
  p.add_term(exps({1}, {0}), -1.0);
  CHECK(p.empty());

  Polynomial q(1);
  q.add_term(exps({1}, {0}), 1.0);
  q.add_term(exps({2}, {0}), 1e-13);
  q.prune(1e-12);
  CHECK(q.size() == 1);
}

TEST_CASE("text and json round trips") {
  Rng rng(31);
  for (int t = 0; t < 20; ++t) {
    std::size_t n = std::size_t(rng.uniform_int(1, 3));
    Polynomial p = random_homogeneous(rng, n, rng.uniform_int(0, 4));
    Polynomial back = Polynomial::parse_text(p.to_text(), n);
    Polynomial diff = back - p;
    CHECK(diff.coefficient_l1_norm() <= 1e-12 * std::max(1.0, p.coefficient_l1_norm()));
    CHECK(polynomial_from_json(polynomial_to_json(p), n) == p);
  }
  Polynomial parsed = Polynomial::parse_text("(1,0) x1^2 y2 + (0,-0.25) x1 y1", 2);
  CHECK(approx(parsed.coefficient(exps({2, 0}, {0, 1})), 1.0));
  CHECK(approx(parsed.coefficient(exps({1, 0}, {1, 0})), Complex(0, -0.25)));
}

TEST_CASE("series grading invariants") {
  GradedSeries s = model_m_series(10);
  for (const auto& [d, p] : s.parts()) {
    CHECK(p.is_homogeneous());
    CHECK(p.max_degree() == d);
  }
  CHECK(s.min_degree() == 2);
  CHECK(s.max_degree() == 3);

  // trunc order of a sum is the min of the operands'.
  GradedSeries a(2, 8), b(2, 6);
  a += b;
  CHECK(a.trunc_order() == 6);
}

TEST_CASE("exponent cap and dimension validation") {
  CHECK_THROWS_AS(ExponentPair({65}, {0}), Error);
  CHECK_THROWS_AS(ExponentPair({33}, {32}), Error);
  CHECK_THROWS_AS(poisson_bracket(Polynomial(1), Polynomial(2)), Error);
  CHECK_THROWS_AS(PolydiskGeometry({1.0, -1.0}), Error);
}
