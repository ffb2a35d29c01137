// Command-line front end over the syskit C API.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "syskit/syskit.h"

namespace {

enum class Level { Error, Info, Debug };

Level log_level() {
  const char* v = std::getenv("SYSKIT_LOG");
  if (!v) return Level::Error;
  if (std::strcmp(v, "debug") == 0) return Level::Debug;
  if (std::strcmp(v, "info") == 0) return Level::Info;
  return Level::Error;
}

void log(Level at, const std::string& msg) {
  static const Level level = log_level();
  if (at <= level) std::cerr << "syskit: " << msg << '\n';
}

struct Flags {
  std::optional<std::string> ell, eps, count, target, seed, steiner, format, log_base;
  std::vector<std::string> consts;
  int jobs = 1;
  std::string out;
};

void add_config_flags(CLI::App* app, Flags& f) {
  app->add_option("--ell", f.ell, "Length scale ell");
  app->add_option("--eps", f.eps, "Epsilon (a number, or max for the fat torus)");
  app->add_option("--count", f.count, "Number of loops");
  app->add_option("--target", f.target, "Target rank");
  app->add_option("--seed", f.seed, "Random seed");
  app->add_option("--steiner", f.steiner, "Midpoint refinements of the input mesh");
  app->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--log-base", f.log_base, "Logarithm in bound formulas")->check(CLI::IsMember({"e", "2"}));
  app->add_option("--const", f.consts, "Parameter override NAME=VALUE (repeatable)");
  app->add_option("--out", f.out, "Output path (default stdout)");
}

/// Returns nullptr after printing the error.
syskit_config* make_config(const Flags& f) {
  syskit_config* cfg = syskit_config_new();
  auto set = [&](const char* key, const std::optional<std::string>& v) {
    if (!v) return true;
    if (syskit_config_set(cfg, key, v->c_str()) == SYSKIT_OK) return true;
    std::cout << syskit_last_error_json();
    log(Level::Error, syskit_last_error());
    return false;
  };
  bool ok = set("ell", f.ell) && set("eps", f.eps) && set("count", f.count) && set("target", f.target) &&
            set("seed", f.seed) && set("steiner", f.steiner) && set("format", f.format) &&
            set("log_base", f.log_base);
  for (const auto& c : f.consts) ok = ok && set("const", c);
  if (!ok) {
    syskit_config_free(cfg);
    return nullptr;
  }
  return cfg;
}

bool write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return static_cast<bool>(std::cout);
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    log(Level::Error, "cannot write " + path);
    return false;
  }
  return true;
}

struct Job {
  std::string input;
  int status = SYSKIT_OK;
  int flagged = 0;
  std::string text;
};

void run_one(const std::string& command, const syskit_config* cfg, Job& job) {
  syskit_report* rep = nullptr;
  job.status = syskit_run_path(command.c_str(), job.input.empty() ? nullptr : job.input.c_str(), cfg, &rep);
  if (rep) {
    job.text = syskit_report_text(rep);
    job.flagged = syskit_report_flagged(rep);
    syskit_report_free(rep);
  } else {
    job.text = syskit_last_error_json();
  }
}

int cmd_run(const std::string& command, const std::vector<std::string>& inputs, const Flags& f) {
  syskit_config* cfg = make_config(f);
  if (!cfg) return 1;
  std::vector<Job> jobs(inputs.empty() ? 1 : inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) jobs[i].input = inputs[i];
  log(Level::Info, "run " + command + " on " + std::to_string(jobs.size()) + " input(s)");

  // Each input is an independent run; a single run stays on this thread.
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, f.jobs)), jobs.size());
  if (workers <= 1) {
    for (auto& j : jobs) run_one(command, cfg, j);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < jobs.size(); i += workers) run_one(command, cfg, jobs[i]);
      });
    for (auto& t : pool) t.join();
  }
  syskit_config_free(cfg);

  std::string text;
  int exit_code = 0;
  const bool json = !f.format || *f.format == "json";
  if (jobs.size() > 1 && json) text += "[\n";
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& j = jobs[i];
    std::string t = j.text;
    if (jobs.size() > 1 && json) {
      if (!t.empty() && t.back() == '\n') t.pop_back();
      t += i + 1 < jobs.size() ? ",\n" : "\n";
    }
    text += t;
    const std::string where = j.input.empty() ? command : command + " " + j.input;
    if (j.status != SYSKIT_OK) {
      log(Level::Error, where + ": " + syskit_status_name(j.status));
      exit_code = 1;
    } else {
      log(Level::Info, where + ": ok, " + std::to_string(j.flagged) + " flagged audit(s)");
      if (j.flagged > 0 && exit_code == 0) exit_code = 2;
    }
  }
  if (jobs.size() > 1 && json) text += "]\n";
  if (!write_output(f.out, text)) return 1;
  return exit_code;
}

int cmd_gen(const std::string& kind, const std::vector<std::string>& params, const Flags& f) {
  if (f.out.empty()) {
    std::cerr << "gen: --out is required\n";
    return 1;
  }
  syskit_config* cfg = make_config(f);
  if (!cfg) return 1;
  std::vector<const char*> argv;
  for (const auto& p : params) argv.push_back(p.c_str());
  syskit_mesh* mesh = nullptr;
  int st = syskit_mesh_generate(kind.c_str(), static_cast<int>(argv.size()), argv.data(), cfg, &mesh);
  syskit_config_free(cfg);
  if (st == SYSKIT_OK) st = syskit_mesh_save(mesh, f.out.c_str());
  if (st != SYSKIT_OK) {
    std::cout << syskit_last_error_json();
    log(Level::Error, std::string("gen ") + kind + ": " + syskit_last_error());
    syskit_mesh_free(mesh);
    return 1;
  }
  int v = 0, e = 0, fc = 0, g = 0, marks = 0;
  double area = 0.0;
  syskit_mesh_info(mesh, &v, &e, &fc, &g, &marks, &area);
  log(Level::Info, "gen " + kind + ": V=" + std::to_string(v) + " E=" + std::to_string(e) + " F=" +
                       std::to_string(fc) + " genus=" + std::to_string(g) + " marks=" + std::to_string(marks));
  syskit_mesh_free(mesh);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"syskit: systolic loops, pants decompositions and hyperbolic calculators"};
  app.require_subcommand(1);

  Flags flags;
  std::string kind;
  std::vector<std::string> params;
  auto* gen = app.add_subcommand("gen", "Write a fixture mesh");
  gen->add_option("kind", kind, "flat-torus, sphere-subdiv, genus2, pinched-genus2, hairy-torus, marked-sphere")
      ->required();
  gen->add_option("params", params, "Fixture parameters");
  add_config_flags(gen, flags);

  std::string command;
  std::vector<std::string> inputs;
  auto* run = app.add_subcommand("run", "Run a pipeline or calculator");
  run->add_option("command", command, "Command (see `syskit-cli list`)")->required();
  run->add_option("inputs", inputs, "Input mesh or graph file(s)");
  run->add_option("--jobs", flags.jobs, "Parallel runs over several inputs")->check(CLI::PositiveNumber);
  add_config_flags(run, flags);

  std::string csv, svg, title;
  auto* plot = app.add_subcommand("plot", "Render a CSV series as SVG");
  plot->add_option("csv", csv, "CSV with a header row; first column is x")->required();
  plot->add_option("--out", svg, "SVG path")->required();
  plot->add_option("--title", title, "Plot title");

  app.add_subcommand("list", "List run commands");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (*gen) return cmd_gen(kind, params, flags);
  if (*run) return cmd_run(command, inputs, flags);
  if (*plot) {
    if (syskit_plot_svg(csv.c_str(), title.c_str(), svg.c_str()) != SYSKIT_OK) {
      std::cout << syskit_last_error_json();
      log(Level::Error, syskit_last_error());
      return 1;
    }
    return 0;
  }
  std::cout << syskit_commands();
  return 0;
}
