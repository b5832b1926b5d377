// Headless driver: plan, run scenario scripts, serve the wire protocol, and
// summarize discrepancy samples.

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "holoplan/error.h"
#include "holoplan/http_server.h"
#include "holoplan/json_io.h"
#include "holoplan/scenario.h"
#include "holoplan/service.h"
#include "holoplan/stats.h"

namespace {

std::atomic<bool> g_stop{false};

void OnSignal(int) { g_stop = true; }

int Finish(const holoplan::ScenarioResult& r) {
  if (r.exit_code != holoplan::kExitOk) std::cerr << r.message << "\n";
  return r.exit_code;
}

int Stats(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot read " << path << "\n";
    return holoplan::kExitBadInput;
  }
  std::stringstream text;
  text << in.rdbuf();
  try {
    const auto stats = holoplan::ComputeDiscrepancyStats(holoplan::ParseSamples(text.str()));
    std::cout << holoplan::FormatStatsTable(stats);
    return holoplan::kExitOk;
  } catch (const holoplan::Error& e) {
    std::cerr << e.what() << "\n";
    return holoplan::kExitBadInput;
  }
}

int Serve(const std::string& host, int port, int workers, const std::string& config_path,
          bool realtime) {
  holoplan::ServiceConfig config;
  config.workers = workers;
  config.realtime_execution = realtime;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "cannot read " << config_path << "\n";
      return holoplan::kExitBadInput;
    }
    try {
      const auto doc = nlohmann::json::parse(in);
      if (doc.contains("planner")) holoplan::json_io::UpdateFromJson(doc.at("planner"), config.default_planner);
      config.default_planner.Validate();
    } catch (const std::exception& e) {
      std::cerr << config_path << ": " << e.what() << "\n";
      return holoplan::kExitBadInput;
    }
  }
  holoplan::Service service(config);
  holoplan::HttpServer server(service);
  try {
    port = server.Start(host, port);
  } catch (const holoplan::Error& e) {
    std::cerr << e.what() << "\n";
    return holoplan::kExitFailure;
  }
  std::cout << "listening on http://" << host << ":" << port << std::endl;
  std::signal(SIGINT, OnSignal);
  std::signal(SIGTERM, OnSignal);
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.Stop();
  return holoplan::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"holoplan: human-guided RRT* planning for a 7-DOF arm"};
  app.require_subcommand(1);

  std::string scene, out = "out", script, samples, host = "127.0.0.1", config_path;
  int candidates = 0, port = 8080, workers = 2;
  std::uint64_t seed = 0;
  bool realtime = true;

  auto* plan = app.add_subcommand("plan", "plan K candidate paths for a scene");
  plan->add_option("--scene", scene, "scene file")->required()->check(CLI::ExistingFile);
  plan->add_option("--candidates,-k", candidates, "number of candidates (scene default if 0)");
  plan->add_option("--seed", seed, "base seed (scene default if 0)");
  plan->add_option("--out", out, "output directory");

  auto* run = app.add_subcommand("run", "run a scenario script");
  run->add_option("--script", script, "scenario script")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "output directory");

  auto* serve = app.add_subcommand("serve", "serve the wire protocol over HTTP");
  serve->add_option("--port", port, "listen port (0 picks one)")->envname("HOLOPLAN_PORT");
  serve->add_option("--host", host, "listen address");
  serve->add_option("--workers", workers, "planning worker threads")->envname("HOLOPLAN_WORKERS");
  serve->add_option("--config", config_path, "JSON file with default planner settings");
  serve->add_flag("!--no-realtime", realtime, "stream execution frames without pacing");

  auto* stats = app.add_subcommand("stats", "mean/variance/stddev of discrepancy samples");
  stats->add_option("--samples", samples, "two-column file of x/y errors in mm")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : holoplan::kExitBadInput;
  }

  if (*plan) {
    std::optional<int> k;
    std::optional<std::uint64_t> s;
    if (candidates > 0) k = candidates;
    if (seed > 0) s = seed;
    return Finish(holoplan::RunPlanCommand(scene, k, s, out, std::cout));
  }
  if (*run) {
    try {
      return Finish(holoplan::RunScenario(holoplan::LoadScenarioScript(script), out, std::cout));
    } catch (const holoplan::Error& e) {
      std::cerr << e.what() << "\n";
      return holoplan::ExitCodeFor(e.code());
    }
  }
  if (*serve) return Serve(host, port, workers, config_path, realtime);
  return Stats(samples);
}
