// Copyright 2026 The vodsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "vodsim/vodsim.hpp"

namespace {

int cmd_validate(const std::string& path) {
  try {
    const auto report = vodsim::validate_scenario(path);
    if (report.empty()) {
      std::cout << path << ": ok\n";
      return vodsim::kExitOk;
    }
    for (const auto& line : report) std::cout << path << ": " << line << '\n';
    return vodsim::kExitValidation;
  } catch (const vodsim::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return vodsim::kExitIo;
  }
}

int cmd_replay(const std::string& path, std::size_t capacity, double lambda) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot read " << path << '\n';
    return vodsim::kExitIo;
  }
  try {
    const auto trace = vodsim::read_trace(in);
    vodsim::LrfuCache<std::string> cache(capacity, lambda);
    const auto results = vodsim::replay(cache, trace);
    std::cout << "tick,key,outcome,evicted\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
      std::cout << trace[i].tick << ',' << trace[i].key << ','
                << (results[i].hit() ? "hit" : "miss") << ',' << results[i].evicted.value_or("")
                << '\n';
    }
    if (!trace.empty()) std::cerr << "hit_ratio " << vodsim::format_double(cache.hit_ratio()) << '\n';
    return vodsim::kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return vodsim::kExitValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-event simulator for video-on-demand storage search and caching"};
  app.require_subcommand(1);

  std::string format = "both";
  app.add_option("--format", format, "Result files to write")
      ->check(CLI::IsMember({"json", "csv", "both"}))
      ->capture_default_str();

  auto* run = app.add_subcommand("run", "Run every scenario in a file");
  std::string run_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  run->add_option("scenario", run_path, "Scenario JSON file")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  auto* seed_opt = run->add_option("--seed", seed, "Override the seed of every scenario");
  run->add_option("--jobs", jobs, "Parallel runs")->check(CLI::PositiveNumber)->capture_default_str();
  run->add_option("--format", format, "Result files to write")
      ->check(CLI::IsMember({"json", "csv", "both"}));

  auto* validate = app.add_subcommand("validate", "Check a scenario file without running it");
  std::string validate_path;
  validate->add_option("scenario", validate_path, "Scenario JSON file")->required();

  auto* topo = app.add_subcommand("topology", "Print a generated storage topology as an edge list");
  vodsim::TopologyConfig topo_config;
  std::string interconnect = "ring";
  topo->add_option("--apps", topo_config.num_app_servers, "Application servers")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  topo->add_option("--db-per-app", topo_config.db_per_app, "Database nodes per application server")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  topo->add_option("--interconnect", interconnect, "Application server wiring")
      ->check(CLI::IsMember({"ring", "chain", "complete"}))
      ->capture_default_str();

  auto* replay = app.add_subcommand("replay", "Replay a tick,key trace through an LRFU cache");
  std::string trace_path;
  std::size_t capacity = 20;
  double lambda = 0.5;
  replay->add_option("trace", trace_path, "Trace file, one tick,key per line")->required();
  replay->add_option("--capacity", capacity, "Cache entries")->check(CLI::PositiveNumber)->capture_default_str();
  replay->add_option("--lambda", lambda, "Decay parameter")->check(CLI::NonNegativeNumber)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? vodsim::kExitOk : vodsim::kExitValidation;
  }

  if (*run) {
    vodsim::RunOptions options;
    if (*seed_opt) options.seed = seed;
    options.jobs = jobs;
    options.format = format == "json" ? vodsim::OutputFormat::json
                     : format == "csv" ? vodsim::OutputFormat::csv
                                       : vodsim::OutputFormat::both;
    options.log = &std::cerr;
    return vodsim::run_scenario(run_path, out_dir, options);
  }
  if (*validate) return cmd_validate(validate_path);
  if (*topo) {
    topo_config.interconnect = *vodsim::parse_interconnect(interconnect);
    vodsim::build_topology(topo_config).write_edge_list(std::cout);
    return vodsim::kExitOk;
  }
  if (*replay) return cmd_replay(trace_path, capacity, lambda);
  return vodsim::kExitOk;
}
