/*******************************************************************************
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*******************************************************************************/
#include "moutard/verify.hpp"

#include <cfloat>
#include <cmath>
#include <variant>

#include <json.hpp>

namespace moutard::verify {

namespace {

using Json = nlohmann::ordered_json;

struct TagInfo {
  EquationId id;
  const char* name;
};

constexpr TagInfo kTags[] = {
    {EquationId::hc1, "hc1"},         {EquationId::conj1_3, "conj1.3"},
    {EquationId::gan1, "gan1"},       {EquationId::gan2, "gan2"},
    {EquationId::gan3, "gan3"},       {EquationId::gan4, "gan4"},
    {EquationId::hcm1, "hcm1"},       {EquationId::hcm1bis, "hcm1bis"},
    {EquationId::sch2, "sch2"},       {EquationId::ga2, "ga2"},
    {EquationId::mdhc2, "mdhc2"},     {EquationId::harmonic, "harmonic"},
    {EquationId::compat, "compat"},
};

const Conductivity& need_sigma(const ResidualInputs& in, const char* eq) {
  if (!in.sigma)
    throw SignatureError(std::string(eq) + ": missing input 'sigma'");
  return *in.sigma;
}

const ScalarField& need_scalar(const std::optional<ScalarField>& f,
                               const char* role, const char* eq) {
  if (!f)
    throw SignatureError(std::string(eq) + ": missing input '" + role + "'");
  return *f;
}

const ComplexField& need_complex(const std::optional<ComplexField>& f,
                                 const char* role, const char* eq) {
  if (!f)
    throw SignatureError(std::string(eq) + ": missing input '" + role + "'");
  return *f;
}

ScalarField div_sigma_grad(const ScalarField& sigma_values,
                           const ScalarField& u) {
  std::vector<ScalarField> flux = gradient(u);
  for (auto& comp : flux)
    comp = mul(sigma_values, comp);
  return divergence(flux);
}

ScalarField reciprocal_values(const ScalarField& s) {
  return map(s, [](double x) { return 1.0 / x; });
}

using ResidualField = std::variant<ScalarField, ComplexField>;

ResidualField residual_field(EquationId id, const ResidualInputs& in) {
  const char* eq = equation_name(id);
  switch (id) {
  case EquationId::hc1:
  case EquationId::hcm1:
  case EquationId::mdhc2: {
    const Conductivity& sigma = need_sigma(in, eq);
    const ScalarField& u = need_scalar(in.u, "u", eq);
    require_same_grid(sigma.grid(), u.grid(), eq);
    return div_sigma_grad(sigma.field(), u);
  }
  case EquationId::conj1_3:
  case EquationId::hcm1bis: {
    const Conductivity& sigma = need_sigma(in, eq);
    const ScalarField& v = need_scalar(in.v, "v", eq);
    require_same_grid(sigma.grid(), v.grid(), eq);
    return div_sigma_grad(reciprocal_values(sigma.field()), v);
  }
  case EquationId::gan1:
  case EquationId::gan3: {
    const ComplexField& q = need_complex(in.q, "q", eq);
    const ComplexField& psi = need_complex(in.psi, "psi", eq);
    require_same_grid(q.grid(), psi.grid(), eq);
    return sub(wirtinger_dzbar(psi), mul(q, conj(psi)));
  }
  case EquationId::gan2:
  case EquationId::gan4: {
    const ComplexField& q = need_complex(in.q, "q", eq);
    const ComplexField& psi = need_complex(in.psi, "psi", eq);
    require_same_grid(q.grid(), psi.grid(), eq);
    return add(wirtinger_dzbar(psi), mul(conj(q), conj(psi)));
  }
  case EquationId::sch2: {
    const ScalarField& Q = need_scalar(in.Q, "Q", eq);
    const ScalarField& f = need_scalar(in.f, "f", eq);
    require_same_grid(Q.grid(), f.grid(), eq);
    return sub(mul(Q, f), laplacian(f));
  }
  case EquationId::ga2: {
    const Conductivity& sigma = need_sigma(in, eq);
    const ScalarField& u = need_scalar(in.u, "u", eq);
    const ScalarField& qpot = need_scalar(in.qpot, "qpot", eq);
    require_same_grid(sigma.grid(), u.grid(), eq);
    require_same_grid(sigma.grid(), qpot.grid(), eq);
    return sub(mul(qpot, u), div_sigma_grad(sigma.field(), u));
  }
  case EquationId::harmonic: {
    const ScalarField& f = need_scalar(in.f, "f", eq);
    return laplacian(f);
  }
  case EquationId::compat: {
    const ComplexField& q = need_complex(in.q, "q", eq);
    return sub(wirtinger_dzbar(q), wirtinger_dz(conj(q)));
  }
  }
  throw SignatureError("unknown equation id");
}

const Grid& residual_grid(const ResidualField& r) {
  if (const auto* s = std::get_if<ScalarField>(&r))
    return s->grid();
  return std::get<ComplexField>(r).grid();
}

bool scalar_finite(double v) { return std::isfinite(v); }

// Union of the sigma mask and nonfinite samples in any provided input.
Mask input_mask(const ResidualInputs& in, std::size_t n) {
  Mask m(n, 0);
  bool any = false;
  if (in.sigma && in.sigma->degenerate()) {
    const Mask& sm = in.sigma->mask();
    for (std::size_t i = 0; i < n; ++i)
      if (sm[i]) {
        m[i] = 1;
        any = true;
      }
  }
  auto scan_scalar = [&](const std::optional<ScalarField>& f) {
    if (!f)
      return;
    for (std::size_t i = 0; i < n; ++i)
      if (!scalar_finite((*f)[i])) {
        m[i] = 1;
        any = true;
      }
  };
  auto scan_complex = [&](const std::optional<ComplexField>& f) {
    if (!f)
      return;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex z = (*f)[i];
      if (!scalar_finite(z.real()) || !scalar_finite(z.imag())) {
        m[i] = 1;
        any = true;
      }
    }
  };
  scan_scalar(in.u);
  scan_scalar(in.v);
  scan_scalar(in.Q);
  scan_scalar(in.qpot);
  scan_scalar(in.f);
  scan_complex(in.q);
  scan_complex(in.psi);
  if (!any)
    m.clear();
  return m;
}

// Chebyshev dilation by `halo` cells, any dimension.
Mask dilate(const Grid& g, const Mask& m, std::size_t halo) {
  if (m.empty() || halo == 0)
    return m;
  const int d = g.dim();
  Mask out(m.size(), 0);
  std::vector<std::size_t> idx(static_cast<std::size_t>(d));
  std::vector<long> off(static_cast<std::size_t>(d), -static_cast<long>(halo));
  for (std::size_t flat = 0; flat < m.size(); ++flat) {
    if (!m[flat])
      continue;
    g.unflatten(flat, idx);
    // walk the (2*halo+1)^d neighborhood
    std::fill(off.begin(), off.end(), -static_cast<long>(halo));
    while (true) {
      std::size_t nflat = 0;
      bool ok = true;
      for (int k = 0; k < d && ok; ++k) {
        const long j = static_cast<long>(idx[static_cast<std::size_t>(k)]) +
                       off[static_cast<std::size_t>(k)];
        if (j < 0 ||
            j >= static_cast<long>(g.shape()[static_cast<std::size_t>(k)]))
          ok = false;
        else
          nflat += static_cast<std::size_t>(j) *
                   g.stride(k);
      }
      if (ok)
        out[nflat] = 1;
      int k = d - 1;
      for (; k >= 0; --k) {
        auto& o = off[static_cast<std::size_t>(k)];
        if (++o <= static_cast<long>(halo))
          break;
        o = -static_cast<long>(halo);
      }
      if (k < 0)
        break;
    }
  }
  return out;
}

double input_scale(const ResidualInputs& in) {
  double s = 0.0;
  if (in.sigma)
    s = std::max(s, in.sigma->field().max_abs());
  auto acc_s = [&](const std::optional<ScalarField>& f) {
    if (f)
      s = std::max(s, f->max_abs());
  };
  auto acc_c = [&](const std::optional<ComplexField>& f) {
    if (f)
      s = std::max(s, f->max_abs());
  };
  acc_s(in.u);
  acc_s(in.v);
  acc_s(in.Q);
  acc_s(in.qpot);
  acc_s(in.f);
  acc_c(in.q);
  acc_c(in.psi);
  return s;
}

} // namespace

const char* equation_name(EquationId id) {
  for (const auto& t : kTags)
    if (t.id == id)
      return t.name;
  return "?";
}

std::optional<EquationId> parse_equation(const std::string& name) {
  for (const auto& t : kTags)
    if (name == t.name)
      return t.id;
  return std::nullopt;
}

double interior_max_abs(const ScalarField& f, std::size_t margin) {
  const Grid& g = f.grid();
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (g.boundary_distance(i) < margin)
      continue;
    const double v = std::fabs(f[i]);
    if (v > m)
      m = v;
  }
  return m;
}

double interior_max_abs(const ComplexField& f, std::size_t margin) {
  const Grid& g = f.grid();
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (g.boundary_distance(i) < margin)
      continue;
    const double v = std::hypot(f[i].real(), f[i].imag());
    if (v > m)
      m = v;
  }
  return m;
}

ResidualReport residual(EquationId id, const ResidualInputs& in,
                        const VerifyOptions& opts) {
  const ResidualField r = residual_field(id, in);
  const Grid& g = residual_grid(r);

  const Mask base_mask = input_mask(in, g.size());
  const Mask halo = dilate(g, base_mask, opts.mask_halo);

  double norm_max = 0.0;
  double sum_sq = 0.0;
  std::size_t n_eval = 0;
  std::size_t n_masked = 0;

  auto visit_point = [&](std::size_t i, double mag) {
    if (!halo.empty() && halo[i]) {
      ++n_masked;
      return;
    }
    if (g.boundary_distance(i) < opts.boundary_margin)
      return;
    if (!std::isfinite(mag))
      return;
    ++n_eval;
    if (mag > norm_max)
      norm_max = mag;
    sum_sq += mag * mag;
  };

  if (const auto* s = std::get_if<ScalarField>(&r)) {
    for (std::size_t i = 0; i < s->size(); ++i)
      visit_point(i, std::fabs((*s)[i]));
  } else {
    const auto& c = std::get<ComplexField>(r);
    for (std::size_t i = 0; i < c.size(); ++i)
      visit_point(i, std::hypot(c[i].real(), c[i].imag()));
  }

  ResidualReport rep;
  rep.equation = id;
  rep.norm_max = norm_max;
  rep.norm_l2 = std::sqrt(sum_sq * g.cell_volume());
  rep.h = g.max_spacing();
  rep.masked_fraction =
      static_cast<double>(n_masked) / static_cast<double>(g.size());
  rep.tolerance =
      opts.tolerance_scale * rep.h * rep.h * std::max(1.0, input_scale(in));
  rep.pass = norm_max <= rep.tolerance;
  rep.points_evaluated = n_eval;
  return rep;
}

std::string to_json(const ResidualReport& r) {
  Json j;
  j["equation"] = equation_name(r.equation);
  j["norm_max"] = r.norm_max;
  j["norm_l2"] = r.norm_l2;
  j["h"] = r.h;
  j["masked_fraction"] = r.masked_fraction;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["points_evaluated"] = r.points_evaluated;
  return j.dump(2);
}

ConvergenceReport convergence_study(
    EquationId id, const std::function<ResidualInputs(int)>& gen, int levels,
    const VerifyOptions& opts) {
  if (levels < 3)
    throw Error("convergence_study: need at least 3 levels");
  ConvergenceReport rep;
  rep.equation = id;
  bool floor = true;
  for (int level = 0; level < levels; ++level) {
    const ResidualInputs in = gen(level);
    const ResidualReport r = residual(id, in, opts);
    rep.spacings.push_back(r.h);
    rep.norms.push_back(r.norm_max);
    // rounding floor for second-order difference operators: eps * scale / h^2
    const double scale = r.tolerance / (opts.tolerance_scale * r.h * r.h);
    if (r.norm_max > 64.0 * DBL_EPSILON * scale / (r.h * r.h))
      floor = false;
  }
  rep.floor_limited = floor;
  if (!floor) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(levels);
    for (int i = 0; i < levels; ++i) {
      const double x = std::log(rep.spacings[static_cast<std::size_t>(i)]);
      const double y = std::log(rep.norms[static_cast<std::size_t>(i)]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    rep.estimated_order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return rep;
}

std::string to_json(const ConvergenceReport& r) {
  Json j;
  j["equation"] = equation_name(r.equation);
  j["spacings"] = r.spacings;
  j["norms"] = r.norms;
  j["estimated_order"] = r.estimated_order;
  j["floor_limited"] = r.floor_limited;
  return j.dump(2);
}

} // namespace moutard::verify
