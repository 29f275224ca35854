/**
 * Copyright 2026 The mmgauss Authors
 *
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
 */

#include <cstdio>
#include <exception>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "cli/config.hpp"
#include "cli/runner.hpp"
#include "cli/verify.hpp"
#include "mmg/error.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitVerification = 4;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mmgauss: multimode Gaussian optics and heralded HOM experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  const unsigned hw = std::thread::hardware_concurrency();
  int threads = hw == 0 ? 1 : static_cast<int>(hw);
  std::string output_dir = ".";
  bool verbose = false;
  app.add_option("--threads", threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_option("--output-dir", output_dir, "directory for CSV and SVG output");
  app.add_flag("-v,--verbose", verbose, "debug logging");

  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "run the experiment described by a config file");
  run->add_option("config", config_path, "JSON config file")->required();
  CLI::App* verify = app.add_subcommand("verify", "oracle-equivalence and invariant suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::warn);

  if (verify->parsed()) {
    // The verification circuits use deliberately small grids.
    if (!verbose) spdlog::set_level(spdlog::level::err);
    try {
      const auto results = mmg::cli::run_verification(std::cout, threads);
      for (const auto& r : results) {
        if (!r.passed) return kExitVerification;
      }
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "verify: " << e.what() << '\n';
      return kExitVerification;
    }
  }

  try {
    const mmg::cli::RunConfig config = mmg::cli::parse_config_file(config_path);
    const mmg::cli::RunOutcome out = mmg::cli::run_experiment(config, {threads, output_dir});
    std::cout << out.summary << '\n';
    return 0;
  } catch (const mmg::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const mmg::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const mmg::DimensionError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
