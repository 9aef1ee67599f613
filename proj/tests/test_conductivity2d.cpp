#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "moutard/conductivity2d.hpp"
#include "moutard/verify.hpp"
#include "test_util.hpp"

using namespace moutard;
using namespace tutil;

namespace {

Conductivity sigma_one(const Grid& g) {
  return Conductivity::strict(ScalarField::constant(g, 1.0));
}

Conductivity sigma_exp_neg2x1(const Grid& g) {
  return Conductivity::strict(
      sample2(g, [](double x, double) { return std::exp(-2.0 * x); }));
}

Conductivity sigma_gauss(const Grid& g) {
  return Conductivity::strict(
      sample2(g, [](double x, double y) { return std::exp(x * x + y * y); }));
}

ScalarField u_exp_cosh(const Grid& g) {
  return sample2(g, [](double x, double y) { return std::exp(x) * std::cosh(y); });
}

double hc1_residual(const Conductivity& sigma, const ScalarField& u,
                    double tolerance_scale = 50.0) {
  verify::ResidualInputs in;
  in.sigma = sigma;
  in.u = u;
  verify::VerifyOptions opts;
  opts.tolerance_scale = tolerance_scale;
  return verify::residual(verify::EquationId::hc1, in, opts).norm_max;
}

bool hc1_pass(const Conductivity& sigma, const ScalarField& u) {
  verify::ResidualInputs in;
  in.sigma = sigma;
  in.u = u;
  return verify::residual(verify::EquationId::hc1, in).pass;
}

bool conj_pass(const Conductivity& sigma, const ScalarField& v) {
  verify::ResidualInputs in;
  in.sigma = sigma;
  in.v = v;
  return verify::residual(verify::EquationId::conj1_3, in).pass;
}

// erf-based solutions of div(exp(x1^2+x2^2) grad u) = 0
double erf_primitive(double t) { return 0.5 * std::sqrt(M_PI) * std::erf(t); }

} // namespace

TEST_CASE("special_fplus closed forms and conjugate residuals") {
  const Grid g = unit2(65);

  const Conductivity one = sigma_one(g);
  CHECK(max_abs_diff(special_fplus(one, FPlusVariant::R),
                     ComplexField::constant(g, {1.0, 0.0})) <= 1e-15);
  CHECK(max_abs_diff(special_fplus(one, FPlusVariant::I),
                     ComplexField::constant(g, {0.0, 1.0})) <= 1e-15);

  const Conductivity four = Conductivity::strict(ScalarField::constant(g, 4.0));
  CHECK(max_abs_diff(special_fplus(four, FPlusVariant::I),
                     ComplexField::constant(g, {0.0, 0.5})) <= 1e-15);

  const Conductivity sigma = sigma_exp_neg2x1(g);
  const ComplexField fpr = special_fplus(sigma, FPlusVariant::R);
  CHECK(max_abs_diff(fpr, csample2(g, [](double x, double) {
          return Complex(std::exp(-x), 0.0);
        })) <= 1e-12);
  const double h = g.max_spacing();
  const GafCoefficient q = sigma_to_q(sigma);
  CHECK(check_gaf_conjugate(fpr, q) <= 50.0 * h * h);
  CHECK(check_gaf_conjugate(special_fplus(sigma, FPlusVariant::I), q) <=
        50.0 * h * h);
}

TEST_CASE("u_to_psi closed forms") {
  const Grid g = unit2(33);
  const Conductivity one = sigma_one(g);

  CHECK(max_abs_diff(u_to_psi(sample2(g, [](double x, double) { return x; }), one),
                     ComplexField::constant(g, {0.5, 0.0})) <= 1e-12);
  CHECK(max_abs_diff(u_to_psi(sample2(g, [](double, double y) { return y; }), one),
                     ComplexField::constant(g, {0.0, -0.5})) <= 1e-12);
  CHECK(u_to_psi(ScalarField::constant(g, 3.7), one).max_abs() <= 1e-12);
}

TEST_CASE("psi_to_u inverts u_to_psi") {
  const Grid g = unit2(65);
  const Conductivity one = sigma_one(g);

  SUBCASE("psi = 1/2 gives u = x1") {
    const ScalarField u =
        psi_to_u(ComplexField::constant(g, {0.5, 0.0}), one, {0, 0}, 0.0);
    CHECK(max_abs_diff(u, sample2(g, [](double x, double) { return x; })) <= 1e-12);
  }

  SUBCASE("psi = 0 gives the constant") {
    const ScalarField u = psi_to_u(ComplexField::zeros(g), one, {2, 3}, 4.5);
    CHECK(max_abs_diff(u, ScalarField::constant(g, 4.5)) == 0.0);
  }

  SUBCASE("harmonic round trip on 129^2") {
    const Grid g129 = unit2(129);
    const Conductivity one129 = sigma_one(g129);
    const ScalarField u =
        sample2(g129, [](double x, double y) { return std::exp(x) * std::sin(y); });
    const ScalarField back =
        psi_to_u(u_to_psi(u, one129), one129, {0, 0}, u[0]);
    const double h = g129.max_spacing();
    CHECK(max_abs_diff(back, u) <= 50.0 * h * h * std::max(1.0, u.max_abs()));
  }
}

TEST_CASE("stream function") {
  const Grid g = unit2(65);
  const Conductivity one = sigma_one(g);
  const double h = g.max_spacing();

  SUBCASE("u = x1 gives v = x2") {
    const ScalarField v =
        stream_function(one, sample2(g, [](double x, double) { return x; }), {0, 0}, 0.0);
    CHECK(max_abs_diff(v, sample2(g, [](double, double y) { return y; })) <= 1e-12);
  }

  SUBCASE("u = x2 gives v = -x1") {
    const ScalarField v =
        stream_function(one, sample2(g, [](double, double y) { return y; }), {0, 0}, 0.0);
    CHECK(max_abs_diff(v, sample2(g, [](double x, double) { return -x; })) <= 1e-12);
  }

  SUBCASE("conjugate equation and current duality for exp(-2 x1)") {
    const Conductivity sigma = sigma_exp_neg2x1(g);
    const ScalarField u = u_exp_cosh(g);
    const ScalarField v = stream_function(sigma, u, {0, 0}, 0.0);
    CHECK(conj_pass(sigma, v));

    const auto [i1, i2] = current_density(sigma, u);
    // d_x2 v = I1 and -d_x1 v = I2 on the interior evaluation set
    const double scale = std::max(1.0, std::max(i1.max_abs(), i2.max_abs()));
    CHECK(verify::interior_max_abs(sub(diff_axis(v, 1), i1)) <= 50.0 * h * h * scale);
    CHECK(verify::interior_max_abs(add(diff_axis(v, 0), i2)) <= 50.0 * h * h * scale);

    // psi = (1/2) sigma^(-1/2) (I1 - i I2)
    const ComplexField psi = u_to_psi(u, sigma);
    const ScalarField inv_root =
        map(sigma.field(), [](double s) { return 0.5 / std::sqrt(s); });
    const ComplexField want =
        ComplexField::from_parts(mul(inv_root, i1), mul(inv_root, moutard::scale(i2, -1.0)));
    CHECK(verify::interior_max_abs(sub(psi, want)) <= 50.0 * h * h * scale);
  }
}

TEST_CASE("make_solution records residuals and current") {
  const Grid g = unit2(65);
  const Conductivity sigma = sigma_exp_neg2x1(g);
  const ConductivitySolution sol =
      make_solution(sigma, u_exp_cosh(g), true, true, {0, 0}, 0.0);
  const double h = g.max_spacing();
  CHECK(sol.residual_u <= 50.0 * h * h * sol.u.max_abs());
  REQUIRE(sol.residual_v.has_value());
  CHECK(*sol.residual_v <= 50.0 * h * h * sol.v->max_abs());
  REQUIRE(sol.current.has_value());
}

TEST_CASE("moutard_transform_2d closed forms") {
  const Grid g = unit2(65);
  const Conductivity one = sigma_one(g);

  SUBCASE("variant I with seed 2 x1 + 5 gives (2 x1 + 3)^2") {
    TransformPlan2D plan(FPlusVariant::I,
                         sample2(g, [](double x, double) { return 2.0 * x + 5.0; }));
    const ConductivityTransform2D r = moutard_transform_2d(one, plan);
    CHECK_FALSE(r.seed_warning);
    CHECK(r.omega_ff.constant == Complex(0.0, 3.0));
    const ScalarField want =
        sample2(g, [](double x, double) { return (2.0 * x + 3.0) * (2.0 * x + 3.0); });
    CHECK(max_abs_diff(r.sigma_tilde.field(), want) <= 1e-12 * 25.0);

    // explicit-form consistency: sigma~ equals u1^2 sigma with u1 = -i omega
    const ScalarField u1 = r.omega_ff.omega.imag_part();
    const auto [mi_sigma, mi_u] = transform_MI(one, u1, u1);
    CHECK(max_abs_diff(mi_sigma.field(), r.sigma_tilde.field()) == 0.0);
    CHECK(max_abs_diff(mi_u, ScalarField::constant(g, 1.0)) == 0.0);
  }

  SUBCASE("variant R with seed 2 x2 + 7 gives (2 x2 + 3)^(-2)") {
    TransformPlan2D plan(FPlusVariant::R,
                         sample2(g, [](double, double y) { return 2.0 * y + 7.0; }));
    const ConductivityTransform2D r = moutard_transform_2d(one, plan);
    CHECK_FALSE(r.seed_warning);
    const ScalarField want = sample2(g, [](double, double y) {
      return 1.0 / ((2.0 * y + 3.0) * (2.0 * y + 3.0));
    });
    CHECK(max_abs_diff(r.sigma_tilde.field(), want) <= 1e-12);
    // q~ = -1/2 dz log sigma~ to O(h^2)
    const GafCoefficient q_check = sigma_to_q(r.sigma_tilde);
    const double h = g.max_spacing();
    CHECK(verify::interior_max_abs(sub(r.q_tilde.q, q_check.q)) <= 50.0 * h * h);
  }

  SUBCASE("raw omega with a zero raises SingularOmega") {
    TransformPlan2D plan(FPlusVariant::I,
                         sample2(g, [](double x, double) { return 2.0 * x; }),
                         OmegaMode::raw);
    CHECK_THROWS_AS(moutard_transform_2d(one, plan), SingularOmega);

    plan.singular.allow = true;
    const ConductivityTransform2D r = moutard_transform_2d(one, plan);
    CHECK(r.sigma_tilde.degenerate());
    CHECK(r.sigma_tilde.masked_count() > 0);
  }

  SUBCASE("non-solution seed is flagged") {
    TransformPlan2D plan(FPlusVariant::I,
                         sample2(g, [](double x, double) { return x * x; }));
    const ConductivityTransform2D r = moutard_transform_2d(one, plan);
    CHECK(r.seed_warning);
  }
}

TEST_CASE("psi map and recovery through the transform") {
  const Grid g = unit2(65);
  const Conductivity one = sigma_one(g);
  const double h = g.max_spacing();

  const TransformPlan2D plan(FPlusVariant::I,
                             sample2(g, [](double x, double) { return 2.0 * x + 5.0; }));
  const ConductivityTransform2D r = moutard_transform_2d(one, plan);

  SUBCASE("recovered pair matches the explicit quotient formula") {
    const ScalarField u = sample2(g, [](double, double y) { return y; });
    const ComplexField psi = u_to_psi(u, one);
    const ComplexField psi_t = transform_psi(r, psi, {0, 0});
    const auto [u_t, v_t] = recover_pair(r.sigma_tilde, psi_t, {0, 0});

    const ScalarField want =
        sample2(g, [](double x, double y) { return y / (2.0 * x + 3.0); });
    CHECK(max_abs_diff(u_t, want) <= 50.0 * h * h);
    CHECK(hc1_pass(r.sigma_tilde, u_t));
    CHECK(conj_pass(r.sigma_tilde, v_t));
  }

  SUBCASE("zero psi recovers constants exactly") {
    const auto [u_t, v_t] =
        recover_pair(r.sigma_tilde, ComplexField::zeros(g), {0, 0}, 1.5, -2.0);
    CHECK(max_abs_diff(u_t, ScalarField::constant(g, 1.5)) == 0.0);
    CHECK(max_abs_diff(v_t, ScalarField::constant(g, -2.0)) == 0.0);
  }
}

TEST_CASE("full transform pipeline from exp(-2 x1), both variants") {
  const Grid g = unit2(129);
  const Conductivity sigma = sigma_exp_neg2x1(g);
  const ScalarField u = u_exp_cosh(g);

  for (FPlusVariant variant : {FPlusVariant::I, FPlusVariant::R}) {
    // x2 + 2 solves both div(sigma grad .) = 0 and div(sigma^-1 grad .) = 0
    // for this sigma
    const TransformPlan2D plan(
        variant, sample2(g, [](double, double y) { return y + 2.0; }));
    const ConductivityTransform2D r = moutard_transform_2d(sigma, plan);
    CHECK_FALSE(r.seed_warning);

    const ComplexField psi = u_to_psi(u, sigma);
    const ComplexField psi_t = transform_psi(r, psi, {0, 0});
    const double h = g.max_spacing();
    CHECK(check_gaf(psi_t, r.q_tilde) <= 50.0 * h * h * std::max(1.0, psi.max_abs()));

    const auto [u_t, v_t] = recover_pair(r.sigma_tilde, psi_t, {0, 0});
    CHECK(hc1_pass(r.sigma_tilde, u_t));
    CHECK(conj_pass(r.sigma_tilde, v_t));
  }
}

TEST_CASE("explicit M_I and M_R transforms") {
  const Grid g = unit2(129);
  const Conductivity one = sigma_one(g);
  const double h = g.max_spacing();

  SUBCASE("M_I on (u1, u) = (x1+2, x2)") {
    const ScalarField u1 = sample2(g, [](double x, double) { return x + 2.0; });
    const ScalarField u = sample2(g, [](double, double y) { return y; });
    const auto [sigma_t, u_t] = transform_MI(one, u1, u);
    CHECK(max_abs_diff(sigma_t.field(),
                       sample2(g, [](double x, double) { return (x + 2.0) * (x + 2.0); })) <=
          1e-14 * 9.0);
    CHECK(max_abs_diff(u_t, sample2(g, [](double x, double y) { return y / (x + 2.0); })) <=
          1e-14);
    CHECK(hc1_pass(sigma_t, u_t));

    const auto [s2, same] = transform_MI(one, u1, u1);
    (void)s2;
    CHECK(max_abs_diff(same, ScalarField::constant(g, 1.0)) == 0.0);

    const auto [s3, ident] = transform_MI(one, ScalarField::constant(g, 1.0), u);
    CHECK(max_abs_diff(s3.field(), one.field()) == 0.0);
    CHECK(max_abs_diff(ident, u) == 0.0);

    CHECK_THROWS_AS(
        transform_MI(one, sample2(g, [](double x, double) { return x - 0.5; }), u),
        ZeroDivisor);
  }

  SUBCASE("M_R on (v1, v) = (x2+2, x1)") {
    const ScalarField v1 = sample2(g, [](double, double y) { return y + 2.0; });
    const ScalarField v = sample2(g, [](double x, double) { return x; });
    const auto [sigma_t, v_t] = transform_MR(one, v1, v);
    CHECK(max_abs_diff(sigma_t.field(), sample2(g, [](double, double y) {
            return 1.0 / ((y + 2.0) * (y + 2.0));
          })) <= 1e-14);
    CHECK(max_abs_diff(v_t, sample2(g, [](double x, double y) { return x / (y + 2.0); })) <=
          1e-14);
    verify::ResidualInputs in;
    in.sigma = sigma_t;
    in.v = v_t;
    CHECK(verify::residual(verify::EquationId::hcm1bis, in).pass);

    const auto [s2, same] = transform_MR(one, v1, v1);
    (void)s2;
    CHECK(max_abs_diff(same, ScalarField::constant(g, 1.0)) == 0.0);

    const auto [s3, ident] = transform_MR(one, ScalarField::constant(g, 1.0), v);
    CHECK(max_abs_diff(s3.field(), one.field()) == 0.0);
    CHECK(max_abs_diff(ident, v) == 0.0);
  }

  (void)h;
}

TEST_CASE("PDE/GAF residual equivalence across conductivity families") {
  const Grid g = unit2(65);
  const double h = g.max_spacing();

  struct Family {
    Conductivity sigma;
    std::vector<ScalarField> solutions;
  };
  const Family families[] = {
      {sigma_one(g),
       {sample2(g, [](double x, double y) { return x + 2.0 * y; }),
        sample2(g, [](double x, double y) { return x * x - y * y; }),
        sample2(g, [](double x, double y) { return std::exp(x) * std::sin(y); })}},
      {sigma_exp_neg2x1(g),
       {sample2(g, [](double, double y) { return y + 2.0; }),
        sample2(g, [](double x, double) { return std::exp(2.0 * x); }),
        u_exp_cosh(g)}},
      {sigma_gauss(g),
       {sample2(g, [](double x, double) { return erf_primitive(x); }),
        sample2(g, [](double, double y) { return erf_primitive(y); }),
        sample2(g, [](double x, double y) {
          return erf_primitive(x) * erf_primitive(y);
        })}},
  };

  for (const auto& fam : families) {
    const GafCoefficient q = sigma_to_q(fam.sigma);
    for (const auto& u : fam.solutions) {
      const double r_pde = hc1_residual(fam.sigma, u);
      const double r_gaf = check_gaf(u_to_psi(u, fam.sigma), q);
      const double scale = std::max(1.0, u.max_abs());
      CHECK(r_pde <= 50.0 * h * h * std::max(scale, fam.sigma.sigma1()));
      CHECK(r_gaf <= 50.0 * h * h * scale);
    }
    // negative control: x1^2 solves neither equation
    const ScalarField bad = sample2(g, [](double x, double) { return x * x; });
    CHECK(hc1_residual(fam.sigma, bad) >= 0.05);
    CHECK(check_gaf(u_to_psi(bad, fam.sigma), q) >= 0.05);
  }
}

TEST_CASE("residuals converge at second order on smooth families") {
  // exp(a x1) cos(b x2) solves div(exp(-2 x1) grad u) = 0 when a^2 - b^2 = 2a;
  // a = 3, b = sqrt(3) keeps the two axis truncation factors distinct, so the
  // discrete residual carries a genuine O(h^2) signal.
  std::vector<double> hs, errs;
  for (std::size_t n : {33, 65, 129}) {
    const Grid g = unit2(n);
    const ScalarField u = sample2(g, [](double x, double y) {
      return std::exp(3.0 * x) * std::cos(std::sqrt(3.0) * y);
    });
    hs.push_back(g.max_spacing());
    errs.push_back(hc1_residual(sigma_exp_neg2x1(g), u));
  }
  CHECK(order_fit(hs, errs) >= 1.9);
}

TEST_CASE("example2 quadrature solutions") {
  const Grid g = unit2(129);
  const ScalarField w = sample2(g, [](double x, double) { return 2.0 + x; });
  const ScalarField phi = sample2(g, [](double, double y) { return y; });

  SUBCASE("closed form for (w, phi) = (2+x1, x2)") {
    const ConductivitySolution sol = quadrature_solution(w, phi, {0, 0}, 1.0);
    const ScalarField want = sample2(g, [](double x, double y) {
      return 1.0 - (2.0 * x + 0.5 * x * x + 0.5 * y * y);
    });
    CHECK(max_abs_diff(sol.u, want) <= 1e-12);
    const double h = g.max_spacing();
    CHECK(sol.residual_u <= 50.0 * h * h * std::max(1.0, sol.u.max_abs()));
  }

  SUBCASE("phi = w collapses to the constant exactly") {
    const ConductivitySolution sol = quadrature_solution(w, w, {0, 0}, 3.25);
    CHECK(max_abs_diff(sol.u, ScalarField::constant(g, 3.25)) == 0.0);
  }

  SUBCASE("phi = 1") {
    const ConductivitySolution sol =
        quadrature_solution(w, ScalarField::constant(g, 1.0), {0, 0}, 0.0);
    const double h = g.max_spacing();
    CHECK(sol.residual_u <= 50.0 * h * h * std::max(1.0, sol.u.max_abs()));
  }

  SUBCASE("non-harmonic inputs are rejected") {
    const ScalarField bad = sample2(g, [](double x, double) { return x * x; });
    CHECK_THROWS_AS(quadrature_solution(bad, phi, {0, 0}, 0.0), PreconditionError);
    CHECK_THROWS_AS(quadrature_solution(w, bad, {0, 0}, 0.0), PreconditionError);
  }
}

TEST_CASE("example3 solutions") {
  const Grid g = unit2(129);
  const ScalarField w = sample2(g, [](double x, double) { return 2.0 + x; });
  const ScalarField phi1 = sample2(g, [](double, double y) { return y; });

  SUBCASE("phi = phi1, c = c1 gives U = 1 exactly") {
    const ConductivitySolution sol = quadrature_solution_transformed(w, phi1, 4.0, phi1, 4.0, {0, 0});
    CHECK(max_abs_diff(sol.u, ScalarField::constant(g, 1.0)) == 0.0);
  }

  SUBCASE("standard instance passes the residual gate") {
    const ConductivitySolution sol = quadrature_solution_transformed(
        w, phi1, 4.0, ScalarField::constant(g, 1.0), 0.0, {0, 0});
    const double h = g.max_spacing();
    const double scale =
        std::max({1.0, sol.u.max_abs(), sol.sigma.sigma1()});
    CHECK(sol.residual_u <= 50.0 * h * h * scale);
  }

  SUBCASE("degenerate w with a zero line, singular mode") {
    const ScalarField w_deg = sample2(g, [](double x, double) { return x - 0.5; });
    SingularPolicy allow;
    allow.allow = true;
    CHECK_THROWS_AS(
        quadrature_solution_transformed(w_deg, phi1, 4.0, ScalarField::constant(g, 1.0), 0.0,
                          {0, 0}),
        ZeroDivisor);
    const ConductivitySolution sol = quadrature_solution_transformed(
        w_deg, phi1, 4.0, ScalarField::constant(g, 1.0), 0.0, {0, 0}, allow);
    CHECK(sol.sigma.degenerate());
    verify::ResidualInputs in;
    in.sigma = sol.sigma;
    in.u = sol.u;
    const auto rep = verify::residual(verify::EquationId::hcm1, in);
    CHECK(rep.masked_fraction > 0.0);
    CHECK(rep.pass);
  }
}
