#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "moutard/conductivity2d.hpp"
#include "moutard/conductivity_nd.hpp"
#include "moutard/verify.hpp"
#include "test_util.hpp"

using namespace moutard;
using namespace tutil;
using verify::EquationId;

namespace {

Conductivity ones(const Grid& g) {
  return Conductivity::strict(ScalarField::constant(g, 1.0));
}

} // namespace

TEST_CASE("residual detector sanity") {
  const Grid g = unit2(65);

  SUBCASE("linear potential passes") {
    verify::ResidualInputs in;
    in.sigma = ones(g);
    in.u = sample2(g, [](double x, double) { return x; });
    const auto rep = verify::residual(EquationId::hc1, in);
    CHECK(rep.norm_max <= 1e-12);
    CHECK(rep.pass);
    CHECK(rep.points_evaluated > 0);
  }

  SUBCASE("x1^2 fails with norm 2") {
    verify::ResidualInputs in;
    in.sigma = ones(g);
    in.u = sample2(g, [](double x, double) { return x * x; });
    const auto rep = verify::residual(EquationId::hc1, in);
    CHECK(rep.norm_max == doctest::Approx(2.0).epsilon(1e-6));
    CHECK_FALSE(rep.pass);
  }

  SUBCASE("an M_I output passes hcm1 on 129^2") {
    const Grid g129 = unit2(129);
    const auto [sigma_t, u_t] =
        transform_MI(ones(g129), sample2(g129, [](double x, double) { return x + 2.0; }),
                    sample2(g129, [](double, double y) { return y; }));
    verify::ResidualInputs in;
    in.sigma = sigma_t;
    in.u = u_t;
    CHECK(verify::residual(EquationId::hcm1, in).pass);
  }
}

TEST_CASE("signature errors") {
  const Grid g = unit2(9);
  verify::ResidualInputs in;
  CHECK_THROWS_AS(verify::residual(EquationId::hc1, in), SignatureError);
  in.sigma = ones(g);
  CHECK_THROWS_AS(verify::residual(EquationId::hc1, in), SignatureError);
  in.u = ScalarField::constant(unit2(11), 0.0); // wrong grid
  CHECK_THROWS_AS(verify::residual(EquationId::hc1, in), GridMismatch);
  CHECK_THROWS_AS(verify::residual(EquationId::gan1, in), SignatureError);
}

TEST_CASE("reports are deterministic") {
  const Grid g = unit2(33);
  verify::ResidualInputs in;
  in.sigma = ones(g);
  in.u = random_scalar(g, 12);
  const auto r1 = verify::residual(EquationId::hc1, in);
  const auto r2 = verify::residual(EquationId::hc1, in);
  CHECK(verify::to_json(r1) == verify::to_json(r2));
  CHECK(r1.norm_max == r2.norm_max);
  CHECK(r1.norm_l2 == r2.norm_l2);
}

TEST_CASE("report json has the stable key set") {
  const Grid g = unit2(9);
  verify::ResidualInputs in;
  in.sigma = ones(g);
  in.u = ScalarField::zeros(g);
  const std::string j = verify::to_json(verify::residual(EquationId::hc1, in));
  for (const char* key : {"\"equation\"", "\"norm_max\"", "\"norm_l2\"", "\"h\"",
                          "\"masked_fraction\"", "\"tolerance\"", "\"pass\"",
                          "\"points_evaluated\""})
    CHECK(j.find(key) != std::string::npos);
  // insertion order is stable
  CHECK(j.find("\"equation\"") < j.find("\"norm_max\""));
  CHECK(j.find("\"norm_max\"") < j.find("\"norm_l2\""));
}

TEST_CASE("masking is monotone and reported") {
  const Grid g = unit2(33);
  // a "solution" that is wrong only in a small patch
  std::vector<double> uv(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::size_t idx[2];
    g.unflatten(i, std::span<std::size_t>(idx, 2));
    uv[i] = (idx[0] == 16 && idx[1] == 16) ? 1.0 : 0.0;
  }
  const ScalarField u(g, std::move(uv));

  Mask small_mask(g.size(), 0);
  small_mask[16 * 33 + 16] = 1;
  Mask big_mask = small_mask;
  big_mask[16 * 33 + 17] = 1;
  big_mask[10 * 33 + 10] = 1;

  verify::ResidualInputs unmasked;
  unmasked.sigma = ones(g);
  unmasked.u = u;
  verify::ResidualInputs small_in;
  small_in.sigma = Conductivity::with_mask(ScalarField::constant(g, 1.0), small_mask);
  small_in.u = u;
  verify::ResidualInputs big_in;
  big_in.sigma = Conductivity::with_mask(ScalarField::constant(g, 1.0), big_mask);
  big_in.u = u;

  const auto r0 = verify::residual(EquationId::hc1, unmasked);
  const auto r1 = verify::residual(EquationId::hc1, small_in);
  const auto r2 = verify::residual(EquationId::hc1, big_in);
  CHECK(r0.norm_max > 0.0);
  CHECK(r1.norm_max <= r0.norm_max);
  CHECK(r2.norm_max <= r1.norm_max);
  CHECK(r1.masked_fraction > 0.0);
  CHECK(r2.masked_fraction > r1.masked_fraction);
  CHECK(r1.masked_fraction <= 1.0);
  // the wrong patch sits inside the halo, so the masked run passes
  CHECK(r1.pass);
}

TEST_CASE("every residual operator flags a deliberately wrong input") {
  const Grid g = unit2(65);
  const Conductivity sigma = ones(g);
  const ScalarField xsq = sample2(g, [](double x, double) { return x * x; });
  const ComplexField zbar = csample2(g, [](double x, double y) { return Complex(x, -y); });
  const ComplexField q0 = ComplexField::zeros(g);

  auto check_fails = [](EquationId id, const verify::ResidualInputs& in,
                        double scale) {
    const auto rep = verify::residual(id, in);
    CHECK_FALSE(rep.pass);
    CHECK(rep.norm_max >= 0.1 * scale);
  };

  for (EquationId id : {EquationId::hc1, EquationId::hcm1, EquationId::mdhc2}) {
    verify::ResidualInputs in;
    in.sigma = sigma;
    in.u = xsq;
    check_fails(id, in, 1.0);
  }
  for (EquationId id : {EquationId::conj1_3, EquationId::hcm1bis}) {
    verify::ResidualInputs in;
    in.sigma = sigma;
    in.v = xsq;
    check_fails(id, in, 1.0);
  }
  for (EquationId id : {EquationId::gan1, EquationId::gan3, EquationId::gan2,
                        EquationId::gan4}) {
    verify::ResidualInputs in;
    in.q = q0;
    in.psi = zbar;
    check_fails(id, in, 1.0);
  }
  {
    verify::ResidualInputs in;
    in.Q = ScalarField::zeros(g);
    in.f = xsq;
    check_fails(EquationId::sch2, in, 1.0);
  }
  {
    verify::ResidualInputs in;
    in.sigma = sigma;
    in.u = xsq;
    in.qpot = ScalarField::zeros(g);
    check_fails(EquationId::ga2, in, 1.0);
  }
  {
    verify::ResidualInputs in;
    in.f = xsq;
    check_fails(EquationId::harmonic, in, 1.0);
  }
  {
    verify::ResidualInputs in;
    in.q = csample2(g, [](double x, double) { return Complex(0.0, x); });
    check_fails(EquationId::compat, in, 1.0);
  }
}

TEST_CASE("convergence studies") {
  SUBCASE("seeded-transform family converges at order >= 1.9") {
    const auto gen = [](int level) {
      const Grid g = unit2((static_cast<std::size_t>(64) << level) + 1);
      const auto [sigma_t, u_t] = transform_MI(
          Conductivity::strict(ScalarField::constant(g, 1.0)),
          ScalarField::from_function(
              g, [](std::span<const double> p) { return p[0] + 2.0; }),
          ScalarField::from_function(
              g, [](std::span<const double> p) { return p[1]; }));
      verify::ResidualInputs in;
      in.sigma = sigma_t;
      in.u = u_t;
      return in;
    };
    const auto rep = verify::convergence_study(EquationId::hcm1, gen, 3);
    CHECK_FALSE(rep.floor_limited);
    CHECK(rep.estimated_order >= 1.9);
  }

  SUBCASE("compat study on the quadratic-log family hits the rounding floor") {
    // log sigma = x1^2 + x2^2 is quadratic, so the second-order stencils are
    // exact on it and the defect never rises above rounding noise
    const auto gen = [](int level) {
      const Grid g = unit2((static_cast<std::size_t>(32) << level) + 1);
      verify::ResidualInputs in;
      in.q = sigma_to_q(Conductivity::strict(ScalarField::from_function(
                            g,
                            [](std::span<const double> p) {
                              return std::exp(p[0] * p[0] + p[1] * p[1]);
                            })))
                 .q;
      return in;
    };
    const auto rep = verify::convergence_study(EquationId::compat, gen, 3);
    CHECK((rep.floor_limited || rep.estimated_order >= 1.9));
    CHECK(rep.floor_limited);
  }

  SUBCASE("compat study on an analytically sampled q converges") {
    // q from sigma_to_q is floor-limited for any sigma: the discrete dz and
    // dzbar commute to rounding. An analytically sampled conductivity-type
    // coefficient with mixed dependence (here -1/2 dz log sigma for
    // sigma = exp(sin(x1 x2))) carries a genuine O(h^2) compat defect.
    const auto gen = [](int level) {
      const Grid g = unit2((static_cast<std::size_t>(64) << level) + 1);
      verify::ResidualInputs in;
      in.q = ComplexField::from_function(g, [](std::span<const double> p) {
        const double c = std::cos(p[0] * p[1]);
        return Complex(-0.25 * p[1] * c, 0.25 * p[0] * c);
      });
      return in;
    };
    const auto rep = verify::convergence_study(EquationId::compat, gen, 3);
    CHECK_FALSE(rep.floor_limited);
    CHECK(rep.estimated_order >= 1.9);
  }

  SUBCASE("exact polynomial family is flagged floor-limited") {
    const auto gen = [](int level) {
      const Grid g = unit2((static_cast<std::size_t>(16) << level) + 1);
      verify::ResidualInputs in;
      in.sigma = Conductivity::strict(ScalarField::constant(g, 1.0));
      in.u = ScalarField::from_function(
          g, [](std::span<const double> p) { return p[0]; });
      return in;
    };
    const auto rep = verify::convergence_study(EquationId::hc1, gen, 3);
    CHECK(rep.floor_limited);
    const std::string j = verify::to_json(rep);
    CHECK(j.find("\"floor_limited\": true") != std::string::npos);
  }

  SUBCASE("needs at least 3 levels") {
    CHECK_THROWS_AS(
        verify::convergence_study(
            EquationId::hc1, [](int) { return verify::ResidualInputs{}; }, 2),
        Error);
  }
}

TEST_CASE("interior_max_abs skips NaN and the margin") {
  const Grid g = unit2(9);
  std::vector<double> v(g.size(), 1.0);
  v[4 * 9 + 4] = std::numeric_limits<double>::quiet_NaN();
  v[0] = 100.0; // corner, outside margin 3
  const ScalarField f(g, std::move(v));
  CHECK(verify::interior_max_abs(f) == 1.0);
  CHECK(verify::interior_max_abs(f, 0) == 100.0);
}
