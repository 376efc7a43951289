// Copyright 2026 The ERD Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Batch runner for scenario configs.
//
//   erd_cli run <config.json> [--seed N] [--out-dir DIR] [--jobs J]
//   erd_cli verify [--seed N] [--out-dir DIR] [--jobs J]
//
// Exit status: 0 when every check passed, 1 on a failed check or partial
// run, 2 on configuration or I/O errors.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "erd/scenario.hpp"

namespace {

int execute(std::vector<erd::Scenario> scenarios, std::optional<std::uint64_t> seed,
            const erd::RunOptions& opts) {
  std::vector<erd::ScenarioResult> results;
  for (auto& s : scenarios) {
    if (seed) s.seed = *seed;
    results.push_back(erd::run(s, opts));
  }
  return erd::report(results, std::cout) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Encoded-qubit decoupling experiments"};
  app.require_subcommand(1);
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  unsigned jobs = 1;
  app.add_option("--seed", seed, "Override every scenario seed");
  app.add_option("--out-dir", out_dir, "Directory for reports and tables");
  app.add_option("--jobs", jobs, "Parallel trajectory workers")->check(CLI::PositiveNumber);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the scenarios of a config file");
  run->add_option("config", config_path, "JSON array of scenarios")->required();
  auto* verify = app.add_subcommand("verify", "Run the built-in invariant suite");
  for (auto* sub : {run, verify}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  const erd::RunOptions opts{out_dir, jobs};
  try {
    if (verify->parsed()) return execute(erd::builtin_verify_config(), seed, opts);
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot read " << config_path << "\n";
      return 2;
    }
    std::ostringstream text;
    text << in.rdbuf();
    return execute(erd::parse_config(text.str()), seed, opts);
  } catch (const erd::ConfigError& e) {
    for (const auto& i : e.issues())
      std::cerr << config_path << ":" << i.line << ": " << (i.key.empty() ? "" : i.key + ": ")
                << i.reason << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
