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
#pragma once

#include <map>
#include <string>
#include <vector>

#include "moutard/conductivity2d.hpp"
#include "moutard/conductivity_nd.hpp"
#include "moutard/verify.hpp"

namespace moutard::pipeline {

/// Config validation failures; the CLI maps them to exit code 2.
class ValidationError : public Error {
public:
  using Error::Error;
};

// Declarative pipeline configs (JSON). A field spec is one of
//   {"expr": "..."}                       closed form over x1..xd
//   {"file": "path"}                      field file, relative to the config
//   {"state": "u"|"v"}                    current pipeline state field
//   {"quadrature_u": {"w":expr, "phi":expr, "c":num}}
//                                         the integrable-family quadrature
struct FieldSpec {
  enum class Kind { expr, file, state, quadrature_u };
  Kind kind = Kind::expr;
  std::string expr;
  std::string file;
  std::string state;
  std::string quad_w;
  std::string quad_phi;
  double quad_c = 0.0;
};

struct StepConfig {
  std::string op; // moutard2d | seeded (alias: theorem3) | generalized
                  // | schrodinger_reduce | stream_function | recover_u_v
  // moutard2d
  FPlusVariant variant = FPlusVariant::I;
  std::optional<FieldSpec> seed;
  OmegaMode omega_mode = OmegaMode::nonvanishing;
  std::optional<double> omega_constant_im;
  // seeded / generalized
  std::optional<FieldSpec> w;
  std::optional<FieldSpec> q1;
  std::optional<FieldSpec> q2;
  // stream_function / recover_u_v
  double value_at_base = 0.0;
  double value_u = 0.0;
  double value_v = 0.0;
};

struct PipelineConfig {
  Grid grid;
  FieldSpec sigma;
  std::optional<FieldSpec> u;
  std::optional<FieldSpec> v;
  GridIndex base;
  std::vector<StepConfig> steps;
  std::vector<verify::EquationId> verify_eqs;
  std::string output; // resolved against the config directory
  double tolerance_scale = 50.0;
  bool singular_mode = false;
  int max_depth = 4;
};

struct RunOptions {
  std::optional<double> tolerance_scale; // CLI overrides
  std::optional<bool> singular_mode;
  std::optional<int> max_depth;
  int jobs = 1;
  bool quiet = false;
};

PipelineConfig load_config(const std::string& path);
PipelineConfig parse_config(const std::string& json_text,
                            const std::string& config_dir);

/// Static checks: step typing against the running state, dimension
/// restrictions, expression parses, transform depth. Throws ValidationError.
void validate(const PipelineConfig& cfg, const RunOptions& opts = {});

struct VerifyOutcome {
  verify::EquationId equation;
  verify::ResidualReport report;
  std::string report_file;
};

struct RunResult {
  bool all_pass = true;
  std::vector<VerifyOutcome> outcomes;
  std::vector<std::string> warnings;
};

/// Executes the pipeline, writing every intermediate field, one report per
/// verify entry, summary.json, and manifest.json into cfg.output.
RunResult run(const PipelineConfig& cfg, const RunOptions& opts = {});

/// Re-verifies the final fields recorded in cfg.output/manifest.json without
/// recomputing any transform.
RunResult check_only(const PipelineConfig& cfg, const RunOptions& opts = {});

struct ExampleParam {
  std::string name;
  std::string default_value;
  std::string description;
};

struct ExampleInfo {
  std::string name;
  std::string description;
  std::vector<ExampleParam> params;
};

const std::vector<ExampleInfo>& list_examples();

/// Serialized PipelineConfig (JSON text) reproducing the named construction.
/// Unknown names or params throw ValidationError.
std::string make_example(const std::string& name,
                         const std::map<std::string, std::string>& params);

} // namespace moutard::pipeline
