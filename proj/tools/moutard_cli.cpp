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
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "moutard/field_io.hpp"
#include "moutard/kernels.hpp"
#include "moutard/pipeline.hpp"

namespace {

using namespace moutard;

int cmd_run(const std::string& config_path, const pipeline::RunOptions& opts,
            bool check) {
  const pipeline::PipelineConfig cfg = pipeline::load_config(config_path);
  const pipeline::RunResult result =
      check ? pipeline::check_only(cfg, opts) : pipeline::run(cfg, opts);
  for (const auto& o : result.outcomes)
    std::printf("[%s] %-8s norm_max=%.6g tolerance=%.6g\n",
                o.report.pass ? "PASS" : "FAIL",
                verify::equation_name(o.equation), o.report.norm_max,
                o.report.tolerance);
  for (const auto& w : result.warnings)
    std::fprintf(stderr, "warning: %s\n", w.c_str());
  if (!result.all_pass) {
    std::fprintf(stderr, "verification failed; reports in %s\n",
                 cfg.output.c_str());
    return 1;
  }
  return 0;
}

int cmd_verify(const std::vector<std::string>& field_args,
               const std::string& eq_name, double tolerance_scale,
               const std::string& out_path) {
  const auto id = verify::parse_equation(eq_name);
  if (!id)
    throw pipeline::ValidationError("verify: unknown equation '" + eq_name +
                                    "'");
  verify::ResidualInputs in;
  for (const std::string& arg : field_args) {
    const std::size_t eq = arg.find('=');
    if (eq == std::string::npos)
      throw pipeline::ValidationError(
          "verify: field arguments look like role=path, got '" + arg + "'");
    const std::string role = arg.substr(0, eq);
    const std::string path = arg.substr(eq + 1);
    if (role == "sigma")
      in.sigma = Conductivity::masked_from_field(read_scalar_field(path));
    else if (role == "u")
      in.u = read_scalar_field(path);
    else if (role == "v")
      in.v = read_scalar_field(path);
    else if (role == "Q")
      in.Q = read_scalar_field(path);
    else if (role == "qpot")
      in.qpot = read_scalar_field(path);
    else if (role == "f")
      in.f = read_scalar_field(path);
    else if (role == "q")
      in.q = read_complex_field(path);
    else if (role == "psi")
      in.psi = read_complex_field(path);
    else
      throw pipeline::ValidationError("verify: unknown role '" + role + "'");
  }
  verify::VerifyOptions vopts;
  vopts.tolerance_scale = tolerance_scale;
  const verify::ResidualReport report = verify::residual(*id, in, vopts);
  const std::string json = verify::to_json(report);
  if (out_path.empty()) {
    std::printf("%s\n", json.c_str());
  } else {
    std::ofstream out(out_path, std::ios::binary);
    out << json << "\n";
  }
  std::printf("[%s] %s norm_max=%.6g tolerance=%.6g\n",
              report.pass ? "PASS" : "FAIL", verify::equation_name(*id),
              report.norm_max, report.tolerance);
  return report.pass ? 0 : 1;
}

int cmd_example(const std::string& name,
                const std::vector<std::string>& params,
                const std::string& out_path) {
  std::map<std::string, std::string> kv;
  for (const std::string& p : params) {
    const std::size_t eq = p.find('=');
    if (eq == std::string::npos)
      throw pipeline::ValidationError("--param expects k=v, got '" + p + "'");
    kv[p.substr(0, eq)] = p.substr(eq + 1);
  }
  const std::string cfg = pipeline::make_example(name, kv);
  if (out_path.empty()) {
    std::fputs(cfg.c_str(), stdout);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
      throw IoError("cannot write " + out_path);
    out << cfg;
  }
  return 0;
}

int cmd_examples() {
  for (const auto& e : pipeline::list_examples()) {
    std::printf("%-12s %s\n", e.name.c_str(), e.description.c_str());
    for (const auto& p : e.params)
      std::printf("    --param %s=%s  (%s)\n", p.name.c_str(),
                  p.default_value.c_str(), p.description.c_str());
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Darboux-Moutard transforms for the conductivity equation"};
  app.require_subcommand(0, 1);

  // run
  std::string config_path;
  pipeline::RunOptions run_opts;
  bool check_only = false;
  double tol_scale_flag = -1.0;
  int max_depth_flag = -1;
  bool singular_flag = false;
  auto* run_cmd = app.add_subcommand("run", "execute a pipeline config");
  run_cmd->add_option("config", config_path, "pipeline config (JSON)")
      ->required();
  run_cmd->add_flag("--check-only", check_only,
                    "re-verify existing outputs without recomputation");
  run_cmd->add_option("--tolerance-scale", tol_scale_flag,
                      "override the tolerance scale (default from config)");
  run_cmd->add_flag("--singular-mode", singular_flag,
                    "mask degenerate points instead of failing");
  run_cmd->add_option("--max-depth", max_depth_flag,
                      "override the transform depth limit");
  run_cmd->add_option("--jobs", run_opts.jobs,
                      "verification reports computed in parallel");

  // verify
  std::vector<std::string> field_args;
  std::string eq_name;
  double verify_tol_scale = 50.0;
  std::string verify_out;
  auto* verify_cmd =
      app.add_subcommand("verify", "residual-check fields against an equation");
  verify_cmd->add_option("fields", field_args, "role=path field files");
  verify_cmd->add_option("--eq", eq_name, "equation tag")->required();
  verify_cmd->add_option("--tolerance-scale", verify_tol_scale,
                         "tolerance scale (default 50)");
  verify_cmd->add_option("--out", verify_out, "write the report here");

  // example / examples
  std::string example_name;
  std::vector<std::string> example_params;
  std::string example_out;
  auto* example_cmd =
      app.add_subcommand("example", "emit a named example config");
  example_cmd->add_option("name", example_name, "example name")->required();
  example_cmd->add_option("--param", example_params, "k=v parameter");
  example_cmd->add_option("--out", example_out, "write the config here");

  auto* examples_cmd =
      app.add_subcommand("examples", "list the example catalog");

  bool show_backend = false;
  app.add_flag("--kernel-backend", show_backend,
               "print the selected kernel backend and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  if (show_backend) {
    std::printf("kernels: %s\n",
                kernels::backend_name(kernels::active_backend()));
    if (app.get_subcommands().empty())
      return 0;
  }
  if (app.get_subcommands().empty()) {
    std::fputs(app.help().c_str(), stderr);
    return 2;
  }

  try {
    if (run_cmd->parsed()) {
      if (tol_scale_flag > 0.0)
        run_opts.tolerance_scale = tol_scale_flag;
      if (max_depth_flag >= 0)
        run_opts.max_depth = max_depth_flag;
      if (singular_flag)
        run_opts.singular_mode = true;
      return cmd_run(config_path, run_opts, check_only);
    }
    if (verify_cmd->parsed())
      return cmd_verify(field_args, eq_name, verify_tol_scale, verify_out);
    if (example_cmd->parsed())
      return cmd_example(example_name, example_params, example_out);
    if (examples_cmd->parsed())
      return cmd_examples();
  } catch (const moutard::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
