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
#include "moutard/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include <json.hpp>

#include "moutard/expr.hpp"
#include "moutard/field_io.hpp"
#include "moutard/gaf.hpp"

namespace moutard::pipeline {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using verify::EquationId;

// ---------------------------------------------------------------- parsing

FieldSpec parse_fieldspec(const Json& j, const std::string& config_dir,
                          const char* where) {
  if (!j.is_object())
    throw ParseError(std::string(where) + ": field spec must be an object");
  FieldSpec s;
  if (j.contains("expr")) {
    s.kind = FieldSpec::Kind::expr;
    s.expr = j.at("expr").get<std::string>();
  } else if (j.contains("file")) {
    s.kind = FieldSpec::Kind::file;
    s.file = (fs::path(config_dir) / j.at("file").get<std::string>()).string();
  } else if (j.contains("state")) {
    s.kind = FieldSpec::Kind::state;
    s.state = j.at("state").get<std::string>();
    if (s.state != "u" && s.state != "v")
      throw ParseError(std::string(where) + ": state spec must be 'u' or 'v'");
  } else if (j.contains("quadrature_u")) {
    const Json& q = j.at("quadrature_u");
    s.kind = FieldSpec::Kind::quadrature_u;
    s.quad_w = q.at("w").get<std::string>();
    s.quad_phi = q.at("phi").get<std::string>();
    s.quad_c = q.value("c", 0.0);
  } else {
    throw ParseError(std::string(where) +
                     ": field spec needs expr, file, state or quadrature_u");
  }
  return s;
}

StepConfig parse_step(const Json& j, const std::string& config_dir, int index) {
  const std::string where = "steps[" + std::to_string(index) + "]";
  if (!j.is_object() || !j.contains("op"))
    throw ParseError(where + ": step must be an object with 'op'");
  StepConfig s;
  s.op = j.at("op").get<std::string>();
  if (s.op == "moutard2d") {
    const std::string variant = j.value("variant", "I");
    if (variant == "I")
      s.variant = FPlusVariant::I;
    else if (variant == "R")
      s.variant = FPlusVariant::R;
    else
      throw ParseError(where + ": variant must be 'I' or 'R'");
    if (!j.contains("seed"))
      throw ParseError(where + ": moutard2d needs a 'seed' field spec");
    s.seed = parse_fieldspec(j.at("seed"), config_dir, where.c_str());
    const std::string mode = j.value("omega_mode", "nonvanishing");
    if (mode == "raw")
      s.omega_mode = OmegaMode::raw;
    else if (mode == "nonvanishing")
      s.omega_mode = OmegaMode::nonvanishing;
    else
      throw ParseError(where + ": omega_mode must be raw or nonvanishing");
    if (j.contains("omega_constant_im"))
      s.omega_constant_im = j.at("omega_constant_im").get<double>();
  } else if (s.op == "seeded" || s.op == "theorem3") {
    s.op = "seeded"; // accepted alias
    if (!j.contains("w"))
      throw ParseError(where + ": seeded needs a 'w' field spec");
    s.w = parse_fieldspec(j.at("w"), config_dir, where.c_str());
  } else if (s.op == "generalized") {
    if (!j.contains("w") || !j.contains("Q1") || !j.contains("Q2"))
      throw ParseError(where + ": generalized needs 'Q1', 'Q2' and 'w'");
    s.w = parse_fieldspec(j.at("w"), config_dir, where.c_str());
    s.q1 = parse_fieldspec(j.at("Q1"), config_dir, where.c_str());
    s.q2 = parse_fieldspec(j.at("Q2"), config_dir, where.c_str());
  } else if (s.op == "schrodinger_reduce") {
    // no parameters
  } else if (s.op == "stream_function") {
    s.value_at_base = j.value("value_at_base", 0.0);
  } else if (s.op == "recover_u_v") {
    s.value_u = j.value("value_u", 0.0);
    s.value_v = j.value("value_v", 0.0);
  } else {
    throw ParseError(where + ": unknown op '" + s.op + "'");
  }
  return s;
}

Grid parse_grid(const Json& j) {
  if (!j.is_object())
    throw ParseError("config: 'grid' must be an object");
  const auto origin = j.at("origin").get<std::vector<double>>();
  const auto spacing = j.at("spacing").get<std::vector<double>>();
  const auto shape = j.at("shape").get<std::vector<std::size_t>>();
  if (j.contains("dim") &&
      j.at("dim").get<std::size_t>() != shape.size())
    throw ParseError("config: grid dim does not match shape length");
  return Grid(origin, spacing, shape);
}

} // namespace

PipelineConfig parse_config(const std::string& json_text,
                            const std::string& config_dir) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object())
    throw ParseError("config: top level must be an object");
  if (!j.contains("grid") || !j.contains("sigma") || !j.contains("output"))
    throw ParseError("config: 'grid', 'sigma' and 'output' are required");

  Grid grid = parse_grid(j.at("grid"));
  PipelineConfig cfg{
      std::move(grid), parse_fieldspec(j.at("sigma"), config_dir, "sigma"),
      std::nullopt,    std::nullopt,
      GridIndex{},     {},
      {},              (fs::path(config_dir) /
                        j.at("output").get<std::string>()).string(),
      j.value("tolerance_scale", 50.0),
      j.value("singular_mode", false),
      j.value("max_depth", 4)};

  if (j.contains("u"))
    cfg.u = parse_fieldspec(j.at("u"), config_dir, "u");
  if (j.contains("v"))
    cfg.v = parse_fieldspec(j.at("v"), config_dir, "v");

  cfg.base.assign(static_cast<std::size_t>(cfg.grid.dim()), 0);
  if (j.contains("base")) {
    const auto b = j.at("base").get<std::vector<std::size_t>>();
    if (b.size() != static_cast<std::size_t>(cfg.grid.dim()))
      throw ParseError("config: base length does not match grid dim");
    cfg.base = b;
  }

  if (j.contains("steps")) {
    int i = 0;
    for (const Json& js : j.at("steps"))
      cfg.steps.push_back(parse_step(js, config_dir, i++));
  }
  if (j.contains("verify")) {
    for (const Json& je : j.at("verify")) {
      const std::string name = je.get<std::string>();
      const auto id = verify::parse_equation(name);
      if (!id)
        throw ParseError("config: unknown verify equation '" + name + "'");
      cfg.verify_eqs.push_back(*id);
    }
  }
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), fs::path(path).parent_path().string());
}

// ------------------------------------------------------------- validation

namespace {

struct SimState {
  bool u = false, v = false, psi = false, q = false;
  bool Qpot = false, psi_s = false, qpot_ga = false;
};

void check_expr_dim(const FieldSpec& s, int dim, const std::string& where) {
  auto check_one = [&](const std::string& text) {
    const Expression e = Expression::parse(text);
    if (e.max_variable() > dim)
      throw ValidationError(where + ": expression '" + text + "' uses x" +
                            std::to_string(e.max_variable()) + " on a " +
                            std::to_string(dim) + "D grid");
  };
  switch (s.kind) {
  case FieldSpec::Kind::expr:
    check_one(s.expr);
    break;
  case FieldSpec::Kind::quadrature_u:
    if (dim != 2)
      throw ValidationError(where + ": quadrature_u specs need a 2D grid");
    check_one(s.quad_w);
    check_one(s.quad_phi);
    break;
  case FieldSpec::Kind::file:
  case FieldSpec::Kind::state:
    break;
  }
}

void check_state_spec(const FieldSpec& s, const SimState& st,
                      const std::string& where) {
  if (s.kind != FieldSpec::Kind::state)
    return;
  if ((s.state == "u" && !st.u) || (s.state == "v" && !st.v))
    throw ValidationError(where + ": state field '" + s.state +
                          "' is not available at this step");
}

} // namespace

void validate(const PipelineConfig& cfg, const RunOptions& opts) {
  const int dim = cfg.grid.dim();
  const int max_depth = opts.max_depth.value_or(cfg.max_depth);
  if (cfg.output.empty())
    throw ValidationError("config: output directory must not be empty");
  for (std::size_t k = 0; k < cfg.base.size(); ++k)
    if (cfg.base[k] >= cfg.grid.shape()[k])
      throw ValidationError("config: base index out of range on axis " +
                            std::to_string(k));

  check_expr_dim(cfg.sigma, dim, "sigma");
  if (cfg.u)
    check_expr_dim(*cfg.u, dim, "u");
  if (cfg.v)
    check_expr_dim(*cfg.v, dim, "v");
  if (cfg.sigma.kind == FieldSpec::Kind::state)
    throw ValidationError("sigma: state specs are not allowed here");

  SimState st;
  st.u = cfg.u.has_value();
  st.v = cfg.v.has_value();

  int depth = 0;
  for (std::size_t i = 0; i < cfg.steps.size(); ++i) {
    const StepConfig& s = cfg.steps[i];
    const std::string where = "step " + std::to_string(i) + " (" + s.op + ")";
    if (s.op == "moutard2d") {
      ++depth;
      if (dim != 2)
        throw ValidationError(where + ": 2D-only step on a " +
                              std::to_string(dim) + "D grid");
      check_expr_dim(*s.seed, dim, where);
      check_state_spec(*s.seed, st, where);
      st.psi = st.u || st.psi;
      st.u = st.v = false;
      st.q = true;
      st.Qpot = st.psi_s = st.qpot_ga = false;
    } else if (s.op == "seeded") {
      ++depth;
      check_expr_dim(*s.w, dim, where);
      check_state_spec(*s.w, st, where);
      st.v = st.psi = st.q = false;
      st.Qpot = st.psi_s = st.qpot_ga = false;
    } else if (s.op == "generalized") {
      ++depth;
      if (!st.u)
        throw ValidationError(where + ": needs a current solution u");
      check_expr_dim(*s.w, dim, where);
      check_expr_dim(*s.q1, dim, where);
      check_expr_dim(*s.q2, dim, where);
      check_state_spec(*s.w, st, where);
      st.qpot_ga = true;
      st.v = st.psi = st.q = false;
      st.Qpot = st.psi_s = false;
    } else if (s.op == "schrodinger_reduce") {
      st.Qpot = true;
      st.psi_s = st.u;
    } else if (s.op == "stream_function") {
      if (dim != 2)
        throw ValidationError(where + ": 2D-only step on a " +
                              std::to_string(dim) + "D grid");
      if (!st.u)
        throw ValidationError(where + ": needs a current solution u");
      st.v = true;
    } else if (s.op == "recover_u_v") {
      if (dim != 2)
        throw ValidationError(where + ": 2D-only step on a " +
                              std::to_string(dim) + "D grid");
      if (!st.psi)
        throw ValidationError(where + ": needs a current GAF solution psi");
      st.u = st.v = true;
    }
  }
  if (depth > max_depth)
    throw ValidationError("config: " + std::to_string(depth) +
                          " transform steps exceed max depth " +
                          std::to_string(max_depth));

  for (EquationId id : cfg.verify_eqs) {
    const std::string where =
        std::string("verify ") + verify::equation_name(id);
    switch (id) {
    case EquationId::hc1:
    case EquationId::hcm1:
    case EquationId::mdhc2:
    case EquationId::harmonic:
      if (!st.u)
        throw ValidationError(where + ": final state has no u");
      break;
    case EquationId::conj1_3:
    case EquationId::hcm1bis:
      if (!st.v)
        throw ValidationError(where + ": final state has no v");
      break;
    case EquationId::gan1:
    case EquationId::gan2:
    case EquationId::gan3:
    case EquationId::gan4:
      if (dim != 2)
        throw ValidationError(where + ": needs a 2D grid");
      if (!st.psi)
        throw ValidationError(where + ": final state has no psi");
      break;
    case EquationId::sch2:
      if (!st.Qpot || !st.psi_s)
        throw ValidationError(where + ": run schrodinger_reduce first");
      break;
    case EquationId::ga2:
      if (!st.u || !st.qpot_ga)
        throw ValidationError(where + ": run a generalized step first");
      break;
    case EquationId::compat:
      if (dim != 2)
        throw ValidationError(where + ": needs a 2D grid");
      break;
    }
  }
}

// -------------------------------------------------------------- execution

namespace {

struct State {
  Conductivity sigma;
  std::optional<ScalarField> u, v, Qpot, psi_s, qpot_ga;
  std::optional<ComplexField> psi, q;
};

ScalarField resolve_scalar(const FieldSpec& s, const Grid& g, const State* st,
                           const GridIndex& base, const SingularPolicy& policy,
                           const std::string& where) {
  switch (s.kind) {
  case FieldSpec::Kind::expr:
    return Expression::parse(s.expr).sample(g);
  case FieldSpec::Kind::file: {
    ScalarField f = read_scalar_field(s.file);
    if (f.grid() != g)
      throw ValidationError(where + ": field file '" + s.file +
                            "' does not match the config grid");
    return f;
  }
  case FieldSpec::Kind::state: {
    if (st == nullptr)
      throw ValidationError(where + ": state spec not allowed here");
    const auto& opt = s.state == "u" ? st->u : st->v;
    if (!opt)
      throw ValidationError(where + ": state field '" + s.state +
                            "' is not available");
    return *opt;
  }
  case FieldSpec::Kind::quadrature_u: {
    const ScalarField w = Expression::parse(s.quad_w).sample(g);
    const ScalarField phi = Expression::parse(s.quad_phi).sample(g);
    return quadrature_solution(w, phi, base, s.quad_c, policy).u;
  }
  }
  throw ValidationError(where + ": bad field spec");
}

class ArtifactWriter {
public:
  ArtifactWriter(std::string outdir, bool enabled)
      : outdir_(std::move(outdir)), enabled_(enabled) {
    if (enabled_)
      fs::create_directories(outdir_);
  }

  template <typename FieldT>
  void write(int step, const char* name, const FieldT& f) {
    if (!enabled_)
      return;
    char prefix[16];
    std::snprintf(prefix, sizeof(prefix), "%03d_", step);
    const std::string fname = std::string(prefix) + name + ".field";
    write_field((fs::path(outdir_) / fname).string(), f);
    final_[name] = fname;
  }

  void write_text(const std::string& fname, const std::string& text) const {
    if (!enabled_)
      return;
    std::ofstream out(fs::path(outdir_) / fname, std::ios::binary);
    if (!out)
      throw IoError("cannot write " + fname + " in " + outdir_);
    out << text;
  }

  const std::map<std::string, std::string>& final_files() const {
    return final_;
  }

private:
  std::string outdir_;
  bool enabled_;
  std::map<std::string, std::string> final_;
};

verify::ResidualInputs inputs_for(EquationId id, const State& st) {
  verify::ResidualInputs in;
  auto q_of_sigma = [&]() -> ComplexField {
    if (st.q)
      return *st.q;
    return sigma_to_q(st.sigma).q;
  };
  switch (id) {
  case EquationId::hc1:
  case EquationId::hcm1:
  case EquationId::mdhc2:
    in.sigma = st.sigma;
    in.u = st.u;
    break;
  case EquationId::conj1_3:
  case EquationId::hcm1bis:
    in.sigma = st.sigma;
    in.v = st.v;
    break;
  case EquationId::gan1:
  case EquationId::gan2:
  case EquationId::gan3:
  case EquationId::gan4:
    in.q = q_of_sigma();
    in.psi = st.psi;
    break;
  case EquationId::sch2:
    in.Q = st.Qpot;
    in.f = st.psi_s;
    break;
  case EquationId::ga2:
    in.sigma = st.sigma;
    in.u = st.u;
    in.qpot = st.qpot_ga;
    break;
  case EquationId::harmonic:
    in.f = st.u;
    break;
  case EquationId::compat:
    in.q = q_of_sigma();
    break;
  }
  return in;
}

RunResult run_verifications(const std::vector<EquationId>& eqs,
                            const State& st, const verify::VerifyOptions& vopts,
                            int jobs, ArtifactWriter& artifacts,
                            std::vector<std::string> warnings) {
  RunResult result;
  result.warnings = std::move(warnings);

  std::vector<verify::ResidualReport> reports(eqs.size());
  auto compute = [&](std::size_t i) {
    reports[i] = verify::residual(eqs[i], inputs_for(eqs[i], st), vopts);
  };
  if (jobs > 1) {
    std::vector<std::future<void>> futures;
    futures.reserve(eqs.size());
    for (std::size_t i = 0; i < eqs.size(); ++i)
      futures.push_back(std::async(std::launch::async, compute, i));
    for (auto& f : futures)
      f.get();
  } else {
    for (std::size_t i = 0; i < eqs.size(); ++i)
      compute(i);
  }

  for (std::size_t i = 0; i < eqs.size(); ++i) {
    char prefix[16];
    std::snprintf(prefix, sizeof(prefix), "%02zu", i);
    const std::string fname = std::string("report_") + prefix + "_" +
                              verify::equation_name(eqs[i]) + ".json";
    artifacts.write_text(fname, verify::to_json(reports[i]) + "\n");
    result.outcomes.push_back({eqs[i], reports[i], fname});
    result.all_pass = result.all_pass && reports[i].pass;
  }
  return result;
}

} // namespace

RunResult run(const PipelineConfig& cfg, const RunOptions& opts) {
  validate(cfg, opts);

  SingularPolicy policy;
  policy.allow = opts.singular_mode.value_or(cfg.singular_mode);
  verify::VerifyOptions vopts;
  vopts.tolerance_scale = opts.tolerance_scale.value_or(cfg.tolerance_scale);

  std::vector<std::string> warnings;
  ArtifactWriter artifacts(cfg.output, true);

  // initial state; singular mode masks nonfinite and near-pole samples by
  // the same relative rule guarded divisions use (a pole of sigma is a zero
  // of 1/sigma)
  ScalarField sigma_values = resolve_scalar(cfg.sigma, cfg.grid, nullptr,
                                            cfg.base, policy, "sigma");
  auto build_sigma = [&]() {
    if (!policy.allow)
      return Conductivity::strict(sigma_values);
    std::vector<double> recip(sigma_values.size());
    for (std::size_t i = 0; i < recip.size(); ++i) {
      const double s = sigma_values[i];
      recip[i] = (std::isfinite(s) && s != 0.0) ? 1.0 / s : 0.0;
    }
    const double m =
        kernels::table().max_abs(recip.data(), recip.size());
    Mask mask(sigma_values.size(), 0);
    for (std::size_t i = 0; i < mask.size(); ++i) {
      const double s = sigma_values[i];
      if (!std::isfinite(s) || s <= 0.0 ||
          std::fabs(recip[i]) <= policy.rel_threshold * m)
        mask[i] = 1;
    }
    return Conductivity::with_mask(sigma_values, std::move(mask));
  };
  State st{build_sigma(), {}, {}, {}, {}, {}, {}, {}};
  artifacts.write(0, "sigma", st.sigma.field());
  if (cfg.u) {
    st.u = resolve_scalar(*cfg.u, cfg.grid, nullptr, cfg.base, policy, "u");
    artifacts.write(0, "u", *st.u);
  }
  if (cfg.v) {
    st.v = resolve_scalar(*cfg.v, cfg.grid, nullptr, cfg.base, policy, "v");
    artifacts.write(0, "v", *st.v);
  }

  const double h = cfg.grid.max_spacing();
  for (std::size_t i = 0; i < cfg.steps.size(); ++i) {
    const StepConfig& s = cfg.steps[i];
    const int step_no = static_cast<int>(i) + 1;
    const std::string where = "step " + std::to_string(i) + " (" + s.op + ")";
    try {
      if (s.op == "moutard2d") {
        TransformPlan2D plan{s.variant,
                             resolve_scalar(*s.seed, cfg.grid, &st, cfg.base,
                                            policy, where),
                             s.omega_mode, s.omega_constant_im, cfg.base,
                             policy};
        std::optional<ComplexField> carried;
        if (st.u)
          carried = u_to_psi(*st.u, st.sigma);
        else if (st.psi)
          carried = st.psi;
        ConductivityTransform2D res = moutard_transform_2d(st.sigma, plan);
        if (res.seed_warning)
          warnings.push_back(where + ": seed residual " +
                             std::to_string(res.seed_residual) +
                             " exceeds the solution gate");
        artifacts.write(step_no, "omega", res.omega_ff.omega);
        artifacts.write(step_no, "sigma", res.sigma_tilde.field());
        artifacts.write(step_no, "q", res.q_tilde.q);
        if (carried) {
          ComplexField psi_t =
              transform_psi(res, *carried, cfg.base, 0.0, policy);
          artifacts.write(step_no, "psi", psi_t);
          st.psi = std::move(psi_t);
        } else {
          st.psi.reset();
        }
        st.sigma = std::move(res.sigma_tilde);
        st.q = std::move(res.q_tilde.q);
        st.u.reset();
        st.v.reset();
        st.Qpot.reset();
        st.psi_s.reset();
        st.qpot_ga.reset();
      } else if (s.op == "seeded") {
        ScalarField w =
            resolve_scalar(*s.w, cfg.grid, &st, cfg.base, policy, where);
        NdTransform t = make_nd_transform(st.sigma, w);
        if (t.residual_w > 50.0 * h * h * std::max(1.0, w.max_abs()))
          warnings.push_back(where + ": seed residual " +
                             std::to_string(t.residual_w) +
                             " exceeds the solution gate");
        artifacts.write(step_no, "w", w);
        if (st.u) {
          auto [sigma_t, u_t] = seeded_transform(t, *st.u, policy);
          st.sigma = std::move(sigma_t);
          st.u = std::move(u_t);
          artifacts.write(step_no, "sigma", st.sigma.field());
          artifacts.write(step_no, "u", *st.u);
        } else {
          ScalarField sig = mul(mul(w, w), st.sigma.field());
          st.sigma = st.sigma.mask().empty()
                         ? Conductivity::strict(sig)
                         : Conductivity::with_mask(sig, st.sigma.mask());
          artifacts.write(step_no, "sigma", st.sigma.field());
        }
        st.v.reset();
        st.psi.reset();
        st.q.reset();
        st.Qpot.reset();
        st.psi_s.reset();
        st.qpot_ga.reset();
      } else if (s.op == "generalized") {
        ScalarField w =
            resolve_scalar(*s.w, cfg.grid, &st, cfg.base, policy, where);
        ScalarField q1 =
            resolve_scalar(*s.q1, cfg.grid, &st, cfg.base, policy, where);
        ScalarField q2 =
            resolve_scalar(*s.q2, cfg.grid, &st, cfg.base, policy, where);
        {
          verify::ResidualInputs win;
          win.sigma = st.sigma;
          win.u = w;
          win.qpot = q2;
          const auto wrep = verify::residual(EquationId::ga2, win, vopts);
          if (!wrep.pass)
            warnings.push_back(where + ": w residual " +
                               std::to_string(wrep.norm_max) +
                               " exceeds the solution gate");
        }
        GeneralizedResult res =
            generalized_transform(st.sigma, q1, q2, w, *st.u, policy);
        st.sigma = std::move(res.sigma_tilde);
        st.u = std::move(res.u_tilde);
        st.qpot_ga = std::move(res.q);
        artifacts.write(step_no, "w", w);
        artifacts.write(step_no, "sigma", st.sigma.field());
        artifacts.write(step_no, "u", *st.u);
        artifacts.write(step_no, "qpot", *st.qpot_ga);
        st.v.reset();
        st.psi.reset();
        st.q.reset();
        st.Qpot.reset();
        st.psi_s.reset();
      } else if (s.op == "schrodinger_reduce") {
        SchrodingerData sd = schrodinger_Q(st.sigma);
        st.Qpot = std::move(sd.Q);
        artifacts.write(step_no, "Q", *st.Qpot);
        if (st.u) {
          st.psi_s = to_schrodinger_psi(*st.u, st.sigma);
          artifacts.write(step_no, "psi_schrod", *st.psi_s);
        }
      } else if (s.op == "stream_function") {
        st.v = stream_function(st.sigma, *st.u, cfg.base, s.value_at_base);
        artifacts.write(step_no, "v", *st.v);
      } else if (s.op == "recover_u_v") {
        RecoveredPair rp = recover_pair(st.sigma, *st.psi, cfg.base,
                                            s.value_u, s.value_v);
        st.u = std::move(rp.u);
        st.v = std::move(rp.v);
        artifacts.write(step_no, "u", *st.u);
        artifacts.write(step_no, "v", *st.v);
      }
    } catch (const ValidationError&) {
      throw;
    } catch (const Error& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }

  RunResult result = run_verifications(cfg.verify_eqs, st, vopts, opts.jobs,
                                       artifacts, std::move(warnings));

  // summary + manifest
  Json summary;
  summary["all_pass"] = result.all_pass;
  Json verifications = Json::array();
  for (const auto& o : result.outcomes) {
    Json v;
    v["equation"] = verify::equation_name(o.equation);
    v["pass"] = o.report.pass;
    v["norm_max"] = o.report.norm_max;
    v["tolerance"] = o.report.tolerance;
    v["report"] = o.report_file;
    verifications.push_back(v);
  }
  summary["verifications"] = verifications;
  summary["warnings"] = result.warnings;
  artifacts.write_text("summary.json", summary.dump(2) + "\n");

  Json manifest;
  manifest["final"] = artifacts.final_files();
  Json eqs = Json::array();
  for (EquationId id : cfg.verify_eqs)
    eqs.push_back(verify::equation_name(id));
  manifest["verify"] = eqs;
  manifest["tolerance_scale"] = vopts.tolerance_scale;
  artifacts.write_text("manifest.json", manifest.dump(2) + "\n");

  return result;
}

RunResult check_only(const PipelineConfig& cfg, const RunOptions& opts) {
  const fs::path outdir(cfg.output);
  std::ifstream in(outdir / "manifest.json", std::ios::binary);
  if (!in)
    throw ValidationError("check-only: no manifest.json in " + cfg.output +
                          " (run the pipeline first)");
  Json manifest;
  try {
    std::ostringstream ss;
    ss << in.rdbuf();
    manifest = Json::parse(ss.str());
  } catch (const std::exception& e) {
    throw ValidationError(std::string("check-only: bad manifest: ") + e.what());
  }

  const auto& files = manifest.at("final");
  auto path_of = [&](const std::string& key) {
    return (outdir / files.at(key).get<std::string>()).string();
  };

  if (!files.contains("sigma"))
    throw ValidationError("check-only: manifest has no sigma field");
  State st{Conductivity::masked_from_field(read_scalar_field(path_of("sigma"))),
           {}, {}, {}, {}, {}, {}, {}};
  if (files.contains("u"))
    st.u = read_scalar_field(path_of("u"));
  if (files.contains("v"))
    st.v = read_scalar_field(path_of("v"));
  if (files.contains("Q"))
    st.Qpot = read_scalar_field(path_of("Q"));
  if (files.contains("psi_schrod"))
    st.psi_s = read_scalar_field(path_of("psi_schrod"));
  if (files.contains("qpot"))
    st.qpot_ga = read_scalar_field(path_of("qpot"));
  if (files.contains("q"))
    st.q = read_complex_field(path_of("q"));
  if (files.contains("psi"))
    st.psi = read_complex_field(path_of("psi"));

  verify::VerifyOptions vopts;
  vopts.tolerance_scale = opts.tolerance_scale.value_or(
      manifest.value("tolerance_scale", cfg.tolerance_scale));

  std::vector<EquationId> eqs;
  for (const Json& je : manifest.at("verify")) {
    const auto id = verify::parse_equation(je.get<std::string>());
    if (!id)
      throw ValidationError("check-only: unknown equation in manifest");
    eqs.push_back(*id);
  }

  ArtifactWriter no_write("", false);
  return run_verifications(eqs, st, vopts, opts.jobs, no_write, {});
}

// --------------------------------------------------------------- examples

namespace {

const std::vector<ExampleInfo> kExamples = {
    {"example1",
     "sigma = w^2 with w harmonic; every u = phi / w with phi harmonic solves "
     "the transformed equation",
     {{"w", "2+x1", "harmonic seed"},
      {"phi", "x2", "harmonic generator of the solution"},
      {"n", "129", "points per axis"},
      {"d", "2", "dimension"}}},
    {"example2",
     "sigma = w^-2 with w harmonic; solutions come from the antisymmetric "
     "quadrature of (w, phi)",
     {{"w", "2+x1", "harmonic seed"},
      {"phi", "x2", "harmonic generator"},
      {"c", "0", "additive constant"},
      {"n", "129", "points per axis"}}},
    {"example3",
     "sigma = w^-2 u1^2 with u1 an example2 solution; solutions are u / u1",
     {{"w", "2+x1", "harmonic seed"},
      {"phi1", "x2", "generator of the fixed solution u1"},
      {"c1", "4", "constant of u1 (keeps it nonvanishing)"},
      {"phi", "1", "generator of the transformed solution"},
      {"c", "0", "additive constant"},
      {"n", "129", "points per axis"}}},
    {"alternating",
     "alternating M_I / M_R chain seeded by the transformed solutions",
     {{"depth", "2", "number of transforms (<= max depth)"},
      {"u1", "x1+2", "seed solution for the first transform"},
      {"u", "x2", "carried solution"},
      {"n", "129", "points per axis"}}},
};

std::string param_or(const std::map<std::string, std::string>& params,
                     const std::string& name, const ExampleInfo& info) {
  const auto it = params.find(name);
  if (it != params.end())
    return it->second;
  for (const auto& p : info.params)
    if (p.name == name)
      return p.default_value;
  throw ValidationError("example: no default for parameter '" + name + "'");
}

int param_int(const std::map<std::string, std::string>& params,
              const std::string& name, const ExampleInfo& info) {
  const std::string v = param_or(params, name, info);
  try {
    return std::stoi(v);
  } catch (const std::exception&) {
    throw ValidationError("example: parameter '" + name +
                          "' must be an integer, got '" + v + "'");
  }
}

double param_double(const std::map<std::string, std::string>& params,
                    const std::string& name, const ExampleInfo& info) {
  const std::string v = param_or(params, name, info);
  try {
    return std::stod(v);
  } catch (const std::exception&) {
    throw ValidationError("example: parameter '" + name +
                          "' must be a number, got '" + v + "'");
  }
}

Json grid_json(int n, int d) {
  if (n < 3)
    throw ValidationError("example: n must be at least 3");
  if (d < 1 || d > 3)
    throw ValidationError("example: d must be 1, 2 or 3");
  Json g;
  g["dim"] = d;
  g["origin"] = std::vector<double>(static_cast<std::size_t>(d), 0.0);
  g["spacing"] = std::vector<double>(static_cast<std::size_t>(d),
                                     1.0 / static_cast<double>(n - 1));
  g["shape"] = std::vector<int>(static_cast<std::size_t>(d), n);
  return g;
}

Json expr_spec(const std::string& e) {
  Json j;
  j["expr"] = e;
  return j;
}

} // namespace

const std::vector<ExampleInfo>& list_examples() { return kExamples; }

std::string make_example(const std::string& name,
                         const std::map<std::string, std::string>& params) {
  const ExampleInfo* info = nullptr;
  for (const auto& e : kExamples)
    if (e.name == name)
      info = &e;
  if (info == nullptr)
    throw ValidationError("example: unknown name '" + name +
                          "' (see the examples catalog)");
  for (const auto& [key, value] : params) {
    (void)value;
    bool known = false;
    for (const auto& p : info->params)
      known = known || p.name == key;
    if (!known)
      throw ValidationError("example: unknown parameter '" + key + "' for '" +
                            name + "'");
  }

  Json cfg;
  if (name == "example1") {
    const int n = param_int(params, "n", *info);
    const int d = param_int(params, "d", *info);
    const std::string w = param_or(params, "w", *info);
    const std::string phi = param_or(params, "phi", *info);
    cfg["grid"] = grid_json(n, d);
    cfg["sigma"] = expr_spec("1");
    cfg["u"] = expr_spec(phi);
    cfg["steps"] = Json::array({Json{{"op", "seeded"}, {"w", expr_spec(w)}}});
    cfg["verify"] = Json::array({"hc1"});
    cfg["output"] = "example1_out";
  } else if (name == "example2") {
    const int n = param_int(params, "n", *info);
    const std::string w = param_or(params, "w", *info);
    const std::string phi = param_or(params, "phi", *info);
    const double c = param_double(params, "c", *info);
    cfg["grid"] = grid_json(n, 2);
    cfg["sigma"] = expr_spec("(" + w + ")^(-2)");
    Json qu;
    qu["quadrature_u"] = Json{{"w", w}, {"phi", phi}, {"c", c}};
    cfg["u"] = qu;
    cfg["steps"] = Json::array();
    cfg["verify"] = Json::array({"hc1"});
    cfg["output"] = "example2_out";
  } else if (name == "example3") {
    const int n = param_int(params, "n", *info);
    const std::string w = param_or(params, "w", *info);
    const std::string phi1 = param_or(params, "phi1", *info);
    const std::string phi = param_or(params, "phi", *info);
    const double c1 = param_double(params, "c1", *info);
    const double c = param_double(params, "c", *info);
    cfg["grid"] = grid_json(n, 2);
    cfg["sigma"] = expr_spec("(" + w + ")^(-2)");
    Json qu;
    qu["quadrature_u"] = Json{{"w", w}, {"phi", phi}, {"c", c}};
    cfg["u"] = qu;
    Json qu1;
    qu1["quadrature_u"] = Json{{"w", w}, {"phi", phi1}, {"c", c1}};
    cfg["steps"] = Json::array({Json{{"op", "seeded"}, {"w", qu1}}});
    cfg["verify"] = Json::array({"hc1"});
    cfg["output"] = "example3_out";
  } else if (name == "alternating") {
    const int n = param_int(params, "n", *info);
    const int depth = param_int(params, "depth", *info);
    if (depth < 1)
      throw ValidationError("example: depth must be >= 1");
    const std::string u1 = param_or(params, "u1", *info);
    const std::string u = param_or(params, "u", *info);
    cfg["grid"] = grid_json(n, 2);
    cfg["sigma"] = expr_spec("1");
    cfg["u"] = expr_spec(u);
    Json steps = Json::array();
    for (int k = 0; k < depth; ++k) {
      Json step;
      step["op"] = "moutard2d";
      step["variant"] = (k % 2 == 0) ? "I" : "R";
      if (k == 0) {
        step["seed"] = expr_spec(u1);
      } else {
        Json seed;
        seed["state"] = (k % 2 == 0) ? "u" : "v";
        step["seed"] = seed;
      }
      step["omega_mode"] = "nonvanishing";
      steps.push_back(step);
      steps.push_back(Json{{"op", "recover_u_v"}});
    }
    cfg["steps"] = steps;
    cfg["verify"] = Json::array({"hcm1", "hcm1bis"});
    cfg["output"] = "alternating_out";
    cfg["max_depth"] = std::max(4, depth);
  }
  return cfg.dump(2) + "\n";
}

} // namespace moutard::pipeline
