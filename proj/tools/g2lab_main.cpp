#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "g2lab/scenario.hpp"

namespace {

struct Job {
  std::string path;
  g2lab::RunResult result;
};

/// Runs one scenario file end to end; parse failures become exit-2 reports.
g2lab::RunResult run_file(const std::string& path, const std::string& command,
                          const g2lab::RunOptions& opt) {
  try {
    g2lab::Scenario sc = g2lab::load_scenario(path);
    if (sc.command != command) {
      throw g2lab::ScenarioError("command: scenario declares '" + sc.command +
                                 "' but the CLI invoked '" + command + "'");
    }
    return g2lab::run_scenario(sc, opt);
  } catch (const std::exception& e) {
    g2lab::RunResult out;
    out.exit_code = 2;
    out.report["tool"]["name"] = "g2lab";
    out.report["tool"]["version"] = "0.1.0";
    out.report["command"] = command;
    out.report["scenario"] = std::filesystem::path(path).stem().string();
    out.report["status"] = "error";
    out.report["error"] = e.what();
    return out;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"g2lab: definite 3-forms, homogeneous cobordism flows, "
               "reduced checks, and horizontal lifts"};
  app.require_subcommand(1);

  std::vector<std::string> scenario_paths;
  std::string out_dir = ".";
  int jobs = 1;
  bool paper_literal = false;

  const std::vector<std::string> commands = {
      "flow", "lift", "theorem3", "check-form", "decompose", "reduced-check"};
  for (const std::string& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--scenario", scenario_paths, "scenario JSON file")
        ->required()
        ->take_all();
    sub->add_option("--out", out_dir, "output directory for artifacts");
    sub->add_option("--jobs", jobs, "run scenario files concurrently")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--paper-literal", paper_literal,
                  "evaluate the literal scale-velocity reading");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  g2lab::RunOptions opt;
  opt.paper_literal = paper_literal;

  std::vector<Job> work(scenario_paths.size());
  for (size_t i = 0; i < scenario_paths.size(); ++i) {
    work[i].path = scenario_paths[i];
  }

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next.fetch_add(1); i < work.size();
         i = next.fetch_add(1)) {
      work[i].result = run_file(work[i].path, command, opt);
    }
  };
  const int n_threads =
      std::max(1, std::min<int>(jobs, static_cast<int>(work.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  int exit_code = 0;
  for (const Job& job : work) {
    const std::string stem = std::filesystem::path(job.path).stem().string();
    const std::string dir =
        work.size() == 1
            ? out_dir
            : (std::filesystem::path(out_dir) / stem).string();
    g2lab::write_artifacts(job.result, dir);
    const auto& rep = job.result.report;
    std::printf("%s: %s (exit %d)\n", stem.c_str(),
                rep.at("status").get<std::string>().c_str(),
                job.result.exit_code);
    for (const auto& chk : rep.value("checks", nlohmann::json::array())) {
      std::printf("  [%s] %s\n",
                  chk.at("status").get<std::string>().c_str(),
                  chk.at("name").get<std::string>().c_str());
    }
    if (rep.contains("error")) {
      std::fprintf(stderr, "error: %s\n",
                   rep.at("error").get<std::string>().c_str());
    }
    exit_code = std::max(exit_code, job.result.exit_code);
  }
  return exit_code;
}
