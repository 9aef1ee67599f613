#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "moutard/field_io.hpp"
#include "test_util.hpp"

using namespace moutard;
using namespace tutil;

TEST_CASE("grid validation and indexing") {
  CHECK_THROWS_AS(Grid({0.0}, {0.0}, {5}), Error);
  CHECK_THROWS_AS(Grid({0.0}, {0.1}, {2}), Error);
  CHECK_THROWS_AS(Grid({0.0, 0.0}, {0.1}, {5, 5}), DimensionError);

  const Grid g = unit2(17);
  CHECK(g.dim() == 2);
  CHECK(g.size() == 17 * 17);
  std::vector<std::size_t> idx{3, 11};
  const std::size_t flat = g.flatten(idx);
  std::vector<std::size_t> back(2);
  g.unflatten(flat, back);
  CHECK(back == idx);

  // point() is bit-reproducible
  const auto p1 = g.point(idx);
  const auto p2 = g.point(idx);
  CHECK(std::memcmp(p1.data(), p2.data(), sizeof(double) * 2) == 0);
  CHECK(p1[0] == doctest::Approx(3.0 / 16.0).epsilon(1e-15));
}

TEST_CASE("field arithmetic requires identical grids") {
  const Grid a = unit2(9);
  const Grid b = unit2(11);
  const ScalarField fa = ScalarField::constant(a, 1.0);
  const ScalarField fb = ScalarField::constant(b, 1.0);
  CHECK_THROWS_AS(add(fa, fb), GridMismatch);
  CHECK_THROWS_AS(ScalarField(a, std::vector<double>(5, 0.0)), GridMismatch);
}

TEST_CASE("conj is an exact involution") {
  const ComplexField f = random_complex(unit2(13), 99);
  const ComplexField back = conj(conj(f));
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(f[i].real() == back[i].real());
    CHECK(f[i].imag() == back[i].imag());
  }
}

TEST_CASE("wirtinger derivatives on polynomial examples") {
  const Grid g = unit2(33);
  const ComplexField z = csample2(g, [](double x, double y) { return Complex(x, y); });
  const ComplexField zbar = csample2(g, [](double x, double y) { return Complex(x, -y); });

  CHECK(max_abs_diff(wirtinger_dz(z), ComplexField::constant(g, {1.0, 0.0})) <= 1e-12);
  CHECK(wirtinger_dz(zbar).max_abs() <= 1e-12);
  CHECK(max_abs_diff(wirtinger_dzbar(zbar), ComplexField::constant(g, {1.0, 0.0})) <= 1e-12);
  CHECK(wirtinger_dzbar(z).max_abs() <= 1e-12);

  const ComplexField x1sq = csample2(g, [](double x, double) { return Complex(x * x, 0.0); });
  const ComplexField x1 = csample2(g, [](double x, double) { return Complex(x, 0.0); });
  CHECK(max_abs_diff(wirtinger_dz(x1sq), x1) <= 1e-12);

  const ComplexField x2sq = csample2(g, [](double, double y) { return Complex(y * y, 0.0); });
  const ComplexField i_x2 = csample2(g, [](double, double y) { return Complex(0.0, y); });
  CHECK(max_abs_diff(wirtinger_dzbar(x2sq), i_x2) <= 1e-12);

  CHECK_THROWS_AS(wirtinger_dz(ComplexField::constant(unit3(5), {0, 0})), DimensionError);
}

TEST_CASE("wirtinger exactness on all complex quadratics") {
  const Grid g = unit2(21);
  // monomials of total degree <= 2 with their dz / dzbar derivatives
  struct Case {
    std::function<double(double, double)> mono;
    std::function<Complex(double, double)> dz;
    std::function<Complex(double, double)> dzbar;
  };
  const Case cases[] = {
      {[](double, double) { return 1.0; },
       [](double, double) { return Complex(0, 0); },
       [](double, double) { return Complex(0, 0); }},
      {[](double x, double) { return x; },
       [](double, double) { return Complex(0.5, 0); },
       [](double, double) { return Complex(0.5, 0); }},
      {[](double, double y) { return y; },
       [](double, double) { return Complex(0, -0.5); },
       [](double, double) { return Complex(0, 0.5); }},
      {[](double x, double) { return x * x; },
       [](double x, double) { return Complex(x, 0); },
       [](double x, double) { return Complex(x, 0); }},
      {[](double x, double y) { return x * y; },
       [](double x, double y) { return Complex(0.5 * y, -0.5 * x); },
       [](double x, double y) { return Complex(0.5 * y, 0.5 * x); }},
      {[](double, double y) { return y * y; },
       [](double, double y) { return Complex(0, -y); },
       [](double, double y) { return Complex(0, y); }},
  };
  const Complex coeff(2.0, -3.0); // exercise complex-linear behaviour
  for (const auto& c : cases) {
    const ComplexField f =
        csample2(g, [&](double x, double y) { return coeff * c.mono(x, y); });
    const ComplexField want_dz =
        csample2(g, [&](double x, double y) { return coeff * c.dz(x, y); });
    const ComplexField want_dzbar =
        csample2(g, [&](double x, double y) { return coeff * c.dzbar(x, y); });
    CHECK(max_abs_diff(wirtinger_dz(f), want_dz) <= 1e-12);
    CHECK(max_abs_diff(wirtinger_dzbar(f), want_dzbar) <= 1e-12);
  }
}

TEST_CASE("derivative linearity") {
  const Grid g = unit2(17);
  const ComplexField f = random_complex(g, 1);
  const ComplexField h = random_complex(g, 2);
  const Complex a(0.7, -1.3), b(-2.1, 0.4);

  std::vector<Complex> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    v[i] = a * f[i] + b * h[i];
  const ComplexField af_bh(g, std::move(v));

  using Op = ComplexField (*)(const ComplexField&);
  for (Op op : {static_cast<Op>(wirtinger_dz), static_cast<Op>(wirtinger_dzbar)}) {
    const ComplexField lhs = op(af_bh);
    const ComplexField df = op(f);
    const ComplexField dh = op(h);
    std::vector<Complex> rv(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
      rv[i] = a * df[i] + b * dh[i];
    const double scale = lhs.max_abs();
    CHECK(max_abs_diff(lhs, ComplexField(g, std::move(rv))) <= 1e-12 * std::max(1.0, scale));
  }
}

TEST_CASE("conjugation rule is exact") {
  for (unsigned seed : {7u, 8u, 9u, 100u, 4242u}) {
    const ComplexField f = random_complex(unit2(19), seed);
    CHECK(max_abs_diff(wirtinger_dzbar(conj(f)), conj(wirtinger_dz(f))) <= 1e-15);
  }
}

TEST_CASE("gradient and divergence examples") {
  const Grid g3 = unit3(9);
  const ScalarField x1 = ScalarField::from_function(
      g3, [](std::span<const double> p) { return p[0]; });
  const auto grad = gradient(x1);
  REQUIRE(grad.size() == 3);
  CHECK(max_abs_diff(grad[0], ScalarField::constant(g3, 1.0)) <= 1e-12);
  CHECK(grad[1].max_abs() <= 1e-12);
  CHECK(grad[2].max_abs() <= 1e-12);

  const auto gradc = gradient(ScalarField::constant(g3, 4.2));
  for (const auto& c : gradc)
    CHECK(c.max_abs() <= 1e-12);

  const Grid g = unit2(17);
  const ScalarField x1x2 = sample2(g, [](double x, double y) { return x * y; });
  const auto gxy = gradient(x1x2);
  CHECK(max_abs_diff(gxy[0], sample2(g, [](double, double y) { return y; })) <= 1e-12);
  CHECK(max_abs_diff(gxy[1], sample2(g, [](double x, double) { return x; })) <= 1e-12);

  const std::vector<ScalarField> radial{sample2(g, [](double x, double) { return x; }),
                                        sample2(g, [](double, double y) { return y; })};
  CHECK(max_abs_diff(divergence(radial), ScalarField::constant(g, 2.0)) <= 1e-12);

  const std::vector<ScalarField> rot{sample2(g, [](double, double y) { return y; }),
                                     sample2(g, [](double x, double) { return -x; })};
  CHECK(divergence(rot).max_abs() <= 1e-12);

  const ScalarField r2 = sample2(g, [](double x, double y) { return x * x + y * y; });
  CHECK(max_abs_diff(divergence(gradient(r2)), ScalarField::constant(g, 4.0)) <= 1e-12);

  const std::vector<ScalarField> bad{radial[0]};
  CHECK_THROWS_AS(divergence(bad), DimensionError);
}

TEST_CASE("wirtinger convergence order on exp(x1)cos(x2)") {
  std::vector<double> hs, errs;
  for (std::size_t n : {17, 33, 65}) {
    const Grid g = unit2(n);
    const ComplexField f =
        csample2(g, [](double x, double y) { return Complex(std::exp(x) * std::cos(y), 0.0); });
    const ComplexField want = csample2(g, [](double x, double y) {
      return 0.5 * std::exp(x) * Complex(std::cos(y), std::sin(y));
    });
    hs.push_back(g.max_spacing());
    errs.push_back(max_abs_diff(wirtinger_dz(f), want));
  }
  CHECK(order_fit(hs, errs) >= 1.9);
}

TEST_CASE("path_integrate on exact integrands") {
  const Grid g = unit2(33);

  SUBCASE("P = Q = i gives 2 i (x1 - x1(base))") {
    const ComplexField p = ComplexField::constant(g, {0.0, 1.0});
    for (GridIndex base : {GridIndex{0, 0}, GridIndex{10, 20}}) {
      const auto [w, defect] = path_integrate(p, p, base);
      const double xb = g.coord(0, base[0]);
      const ComplexField want =
          csample2(g, [xb](double x, double) { return Complex(0.0, 2.0 * (x - xb)); });
      CHECK(max_abs_diff(w, want) <= 1e-12);
      CHECK(defect <= 1e-12);
    }
  }

  SUBCASE("P = 1, Q = 0 gives z - z(base)") {
    const auto [w, defect] = path_integrate(ComplexField::constant(g, {1.0, 0.0}),
                                            ComplexField::constant(g, {0.0, 0.0}),
                                            {0, 0});
    const ComplexField want = csample2(g, [](double x, double y) { return Complex(x, y); });
    CHECK(max_abs_diff(w, want) <= 1e-12);
    CHECK(defect <= 1e-12);
  }

  SUBCASE("P = i z against the exact antiderivative i (x1^2 - x2^2)") {
    const Grid g65 = unit2(65);
    const ComplexField p =
        csample2(g65, [](double x, double y) { return Complex(0.0, 1.0) * Complex(x, y); });
    const ComplexField q = neg(conj(p));
    const auto [w, defect] = path_integrate(p, q, {0, 0});
    const ComplexField want =
        csample2(g65, [](double x, double y) { return Complex(0.0, x * x - y * y); });
    CHECK(max_abs_diff(w, want) <= 1e-12);
    CHECK(defect <= 1e-12);
  }

  SUBCASE("dimension error") {
    const ComplexField f3 = ComplexField::constant(unit3(5), {1.0, 0.0});
    CHECK_THROWS_AS(path_integrate(f3, f3, {0, 0, 0}), DimensionError);
  }

  SUBCASE("base index must be on the grid") {
    const ComplexField f = ComplexField::constant(g, {1.0, 0.0});
    CHECK_THROWS_AS(path_integrate(f, f, {40, 0}), Error);
  }
}

TEST_CASE("path independence defect converges at second order") {
  // P = e^z / 2, Q = e^zbar / 2 is a compatible pair with nonpolynomial W.
  std::vector<double> hs, defects;
  for (std::size_t n : {17, 33, 65}) {
    const Grid g = unit2(n);
    const ComplexField p = csample2(g, [](double x, double y) {
      return 0.5 * std::exp(x) * Complex(std::cos(y), std::sin(y));
    });
    const ComplexField q = csample2(g, [](double x, double y) {
      return 0.5 * std::exp(x) * Complex(std::cos(y), -std::sin(y));
    });
    const auto [w, defect] = path_integrate(p, q, {0, 0});
    (void)w;
    hs.push_back(g.max_spacing());
    defects.push_back(defect);
  }
  CHECK(order_fit(hs, defects) >= 1.9);
}

TEST_CASE("field files round-trip bit-identically") {
  const Grid g = unit2(7);
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = std::sin(static_cast<double>(i) * 12.9898) * 43758.5453;
  v[0] = -0.0;
  v[1] = 1e-308;
  v[2] = -1.7976931348623157e308;
  v[3] = std::numeric_limits<double>::quiet_NaN();
  v[4] = std::numeric_limits<double>::infinity();
  const ScalarField f(g, std::move(v));

  const std::string text = format_field(f);
  const AnyField back = parse_field(text, "test");
  REQUIRE(std::holds_alternative<ScalarField>(back));
  CHECK(format_field(std::get<ScalarField>(back)) == text);

  const ComplexField c = random_complex(g, 3);
  const std::string ctext = format_field(c);
  const AnyField cback = parse_field(ctext, "test");
  REQUIRE(std::holds_alternative<ComplexField>(cback));
  CHECK(format_field(std::get<ComplexField>(cback)) == ctext);
}

TEST_CASE("field file reader rejects malformed input") {
  CHECK_THROWS_AS(parse_field("no header\n1\n", "t"), ParseError);
  CHECK_THROWS_AS(parse_field("# grid d=2 origin=0,0 spacing=0.5,0.5 shape=3,3 kind=real\n1\n2\n",
                              "t"),
                  ParseError); // wrong count
  CHECK_THROWS_AS(parse_field("# grid d=2 origin=0,0 spacing=0.5,0.5 shape=3,3 kind=banana\n",
                              "t"),
                  ParseError);
  const std::string complex_file =
      "# grid d=1 origin=0 spacing=0.5 shape=3 kind=complex\n1,2\n3,4\n5,6\n";
  const AnyField f = parse_field(complex_file, "t");
  CHECK(std::holds_alternative<ComplexField>(f));
}
