// Copyright 2026 The smatch Authors.
// SPDX-License-Identifier: Apache-2.0

// Command-line front end over the C interface.
//
// Every subcommand collects its flags into a JSON object (layered over an
// optional --config file) and hands it to smatch_run. Outputs go to
// --out-dir, or the primary one to stdout when no directory is given.
// Exit status: 0 all gated checks passed, 1 a gated check failed,
// 2 usage or runtime error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "smatch/smatch.h"

namespace {

using json = nlohmann::json;

// Flags of one subcommand; only values actually given reach the JSON.
class Args {
 public:
  explicit Args(CLI::App* app) : app_(app) {
    app_->add_option("--config", *config_path_, "JSON file with arguments (flags override it)")
        ->check(CLI::ExistingFile);
    app_->add_option("--out-dir", *out_dir_, "directory for output files (default: primary output to stdout)");
  }

  template <class T>
  CLI::Option* add(const std::string& flag, const std::string& key, const std::string& help) {
    auto holder = std::make_shared<T>();
    CLI::Option* opt = app_->add_option(flag, *holder, help);
    setters_.push_back([opt, holder, key](json& j) {
      if (opt->count() > 0) j[key] = *holder;
    });
    return opt;
  }

  CLI::Option* flag(const std::string& flag, const std::string& key, const std::string& help) {
    auto holder = std::make_shared<bool>(false);
    CLI::Option* opt = app_->add_flag(flag, *holder, help);
    setters_.push_back([opt, holder, key](json& j) {
      if (opt->count() > 0) j[key] = *holder;
    });
    return opt;
  }

  json build() const {
    json j = json::object();
    if (!config_path_->empty()) {
      std::ifstream in(*config_path_);
      std::stringstream buf;
      buf << in.rdbuf();
      j = json::parse(buf.str());
      if (!j.is_object()) throw std::invalid_argument(*config_path_ + ": expected a JSON object");
    }
    for (const auto& set : setters_) set(j);
    return j;
  }

  const std::string& out_dir() const { return *out_dir_; }
  CLI::App* app() const { return app_; }

 private:
  CLI::App* app_;
  // Heap-held so the bindings survive moving the Args.
  std::shared_ptr<std::string> config_path_ = std::make_shared<std::string>();
  std::shared_ptr<std::string> out_dir_ = std::make_shared<std::string>();
  std::vector<std::function<void(json&)>> setters_;
};

struct Subcommand {
  std::string command;  // name passed to smatch_run
  Args args;
  std::function<void(json&)> adjust;  // last-minute argument rewriting
};

void add_seed(Args& a) { a.add<std::uint64_t>("--seed", "seed", "master seed"); }

void add_model(Args& a) {
  a.add<std::string>("--model", "model", "one | asym | sym")->check(CLI::IsMember({"one", "asym", "sym"}));
  a.add<double>("--eps", "eps", "blue probability of the asymmetric model");
  a.add<std::vector<double>>("--probs", "probs", "color probabilities of the symmetric model");
}

int emit(const smatch_result* result, const std::string& out_dir) {
  const std::size_t n = smatch_result_output_count(result);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t len = 0;
      const char* text = smatch_result_output_text(result, i, &len);
      const auto path = std::filesystem::path(out_dir) / smatch_result_output_name(result, i);
      std::ofstream out(path, std::ios::binary);
      out.write(text, static_cast<std::streamsize>(len));
      if (!out) {
        std::cerr << "error: cannot write " << path.string() << "\n";
        return 2;
      }
      std::cerr << "wrote " << path.string() << "\n";
    }
  } else if (n > 0) {
    std::size_t len = 0;
    const char* text = smatch_result_output_text(result, 0, &len);
    std::cout.write(text, static_cast<std::streamsize>(len));
    std::cout.flush();
  }
  std::cerr << smatch_result_summary(result) << "\n";
  return smatch_result_gated_pass(result) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stable matchings of random point sets: engine, limits and checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(smatch_version()));

  std::vector<std::unique_ptr<Subcommand>> subs;
  auto make = [&](CLI::App* parent, const std::string& name, const std::string& command,
                  const std::string& help) -> Subcommand& {
    subs.push_back(std::make_unique<Subcommand>(Subcommand{command, Args(parent->add_subcommand(name, help)), {}}));
    return *subs.back();
  };

  {
    auto& s = make(&app, "match", "match", "stable matching of an instance file");
    auto* file = s.args.app()->add_option("instance", "instance JSON file");
    auto path = std::make_shared<std::string>();
    file->each([path](const std::string& v) { *path = v; });
    s.args.flag("--allow-ties", "allow_ties", "skip the distinct-weights check");
    s.adjust = [path](json& j) {
      if (!path->empty()) j["instance_path"] = *path;
      if (j.contains("allow_ties")) {
        j["check_ties"] = !j["allow_ties"].get<bool>();
        j.erase("allow_ties");
      }
    };
  }
  {
    auto& s = make(&app, "torus", "torus", "stable matchings of Poisson points on a torus");
    s.args.add<std::string>("--rule", "rule", "one | asym | sym");
    s.args.add<std::vector<double>>("--probs", "probs", "color probabilities");
    s.args.add<int>("--dimension,-d", "dimension", "torus dimension");
    s.args.add<double>("--side", "side", "torus side length");
    s.args.add<double>("--rate", "rate", "point intensity");
    s.args.add<std::size_t>("--reps", "reps", "replicates");
    s.args.add<std::size_t>("--bins", "bins", "histogram bins");
    s.args.add<double>("--max-points", "max_points", "cap on the expected point count");
    s.args.add<bool>("--svg", "svg", "emit an SVG of the first replicate (true|false)");
    add_seed(s.args);
  }
  {
    auto& s = make(&app, "pwit", "pwit", "root matching probabilities on the weighted infinite tree");
    add_model(s.args);
    s.args.add<double>("--T", "T", "weight horizon");
    s.args.add<std::size_t>("--reps", "reps", "replicates");
    s.args.add<std::size_t>("--grid", "grid", "number of equally spaced times in [0, T]");
    s.args.add<unsigned>("--workers", "workers", "worker threads (0: hardware)");
    s.args.add<std::size_t>("--node-cap", "node_cap", "explored-vertex cap per tree");
    add_seed(s.args);
  }
  {
    auto& s = make(&app, "ode", "ode", "integrate the root-availability system");
    s.args.add<std::string>("--model", "model", "one | asym | sym")->check(CLI::IsMember({"one", "asym", "sym"}));
    s.args.add<std::vector<double>>("--params", "params", "eps for asym, the probability vector for sym");
    s.args.add<double>("--tmax", "tmax", "end time");
    s.args.add<double>("--tol", "tol", "local error tolerance");
    s.args.add<double>("--step", "step", "output spacing (default: every accepted step)");
    s.args.add<std::size_t>("--plateau-component", "plateau_component", "report the limit of this component");
    s.args.add<double>("--plateau-accuracy", "plateau_accuracy", "required certified bound");
    s.adjust = [](json& j) {
      if (!j.contains("params")) return;
      const auto params = j["params"].get<std::vector<double>>();
      j.erase("params");
      const std::string model = j.value("model", "asym");
      if (model == "asym") {
        if (params.size() != 1) throw std::invalid_argument("--params for asym takes one value (eps)");
        j["eps"] = params[0];
      } else if (model == "sym") {
        j["probs"] = params;
      } else if (!params.empty()) {
        throw std::invalid_argument("the one-type model takes no parameters");
      }
    };
  }
  {
    CLI::App* hier = app.add_subcommand("hier", "excess recursion on dyadic intervals");
    hier->require_subcommand(1);
    auto& e = make(hier, "exact", "hier_exact", "certified interval recursion");
    e.args.add<double>("--lambda", "lambda", "point intensity");
    e.args.add<double>("--eps", "eps", "blue probability");
    e.args.add<int>("--base-depth", "base_depth", "levels below unit length to start from");
    e.args.add<int>("--levels", "levels", "top level to reach");
    e.args.add<int>("--max-value", "max_value", "largest excess tracked individually");
    e.args.add<double>("--slack-budget", "slack_budget", "largest unlocated base mass");
    auto& m = make(hier, "mc", "hier_mc", "Monte Carlo segments checked against the recursion");
    m.args.add<double>("--lambda", "lambda", "point intensity");
    m.args.add<double>("--eps", "eps", "blue probability");
    m.args.add<int>("--K", "K", "segment length 2^K");
    m.args.add<std::size_t>("--reps", "reps", "segments");
    m.args.add<unsigned>("--workers", "workers", "worker threads (0: hardware)");
    m.args.add<bool>("--compare", "compare", "compare with the interval recursion (true|false)");
    m.args.add<int>("--base-depth", "base_depth", "recursion base depth");
    m.args.add<int>("--max-value", "max_value", "largest excess tracked individually");
    add_seed(m.args);
  }
  {
    auto& s = make(&app, "cross-validate", "cross_validate", "tree estimates against the ODE and the torus");
    add_model(s.args);
    s.args.add<double>("--T", "T", "weight horizon");
    s.args.add<std::size_t>("--reps", "reps", "tree replicates");
    s.args.add<std::size_t>("--grid", "grid", "time points");
    s.args.add<bool>("--torus", "torus", "include the torus column (true|false)");
    s.args.add<std::size_t>("--torus-reps", "torus_reps", "torus replicates");
    add_seed(s.args);
  }
  {
    auto& s = make(&app, "coupling", "coupling", "volume and tree-size lemma checks");
    s.args.add<std::vector<int>>("--dimensions", "dimensions", "lens dimensions");
    s.args.add<std::size_t>("--lens-samples", "lens_samples", "lens samples per dimension");
    s.args.add<std::vector<double>>("--tree-bounds", "tree_bounds", "weight bounds T");
    s.args.add<std::size_t>("--tree-reps", "tree_reps", "trees per bound");
    add_seed(s.args);
  }
  {
    auto& s = make(&app, "theorem-targets", "theorem_targets", "limit formulas against tree estimates");
    add_model(s.args);
    s.args.add<double>("--T", "T", "weight horizon");
    s.args.add<std::size_t>("--reps", "reps", "replicates");
    add_seed(s.args);
  }
  {
    auto& s = make(&app, "verify", "verify", "the full bound and agreement suite");
    s.args.add<std::string>("--scale", "scale", "full | quick")->check(CLI::IsMember({"full", "quick"}));
    add_seed(s.args);
  }
  {
    auto& s = make(&app, "figures", "figures", "matching scatter plots and ODE trajectories");
    add_seed(s.args);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  for (const auto& s : subs) {
    if (!s->args.app()->parsed()) continue;
    std::string args_text;
    try {
      json j = s->args.build();
      if (s->adjust) s->adjust(j);
      args_text = j.dump();
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
    smatch_result* result = nullptr;
    const smatch_status st = smatch_run(s->command.c_str(), args_text.c_str(), &result);
    if (st != SMATCH_OK) {
      std::cerr << "error (" << smatch_status_name(st) << "): " << smatch_last_error() << "\n";
      return 2;
    }
    const int code = emit(result, s->args.out_dir());
    smatch_result_free(result);
    return code;
  }
  return 2;
}
