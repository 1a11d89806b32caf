// ibnls: command-line driver for the biharmonic NLS experiments
#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "ibnls/run.hpp"

using namespace ibnls;

int main(int argc, char** argv) {
  CLI::App app{"Inhomogeneous biharmonic NLS: ground states, evolution, thresholds and diagnostics"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> parallel, stride;
  const char* names[] = {"groundstate", "evolve", "classify", "audit", "virial-check", "lorentz-check", "sweep", "resume"};
  for (const char* name : names) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "seed for randomized data");
    sub->add_option("--parallel", parallel, "concurrent sweep points")->check(CLI::PositiveNumber);
    sub->add_option("--snapshot-stride", stride, "steps between snapshots")->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  RunResult r;
  try {
    RunConfig c = load_config(config_path);
    nlohmann::json doc = c.source;
    if (cmd != "resume") doc["experiment"] = cmd;
    if (seed) doc["seed"] = *seed;
    if (stride) doc["integrator"]["snapshot_stride"] = *stride;
    if (parallel && doc.contains("sweep")) doc["sweep"]["parallel"] = *parallel;
    c = parse_config(doc);
    if (cmd == "resume") {
      if (c.experiment != Experiment::Evolve) throw Error(ErrorKind::ConfigInvalid, "resume needs an evolve config");
      r = resume(c, out_dir);
    } else {
      r = run(c, out_dir);
    }
  } catch (const Error& e) {
    std::cerr << "ibnls: " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
  if (!r.summary.empty()) std::cout << r.summary.dump(2) << '\n';
  (r.exit_code == 0 ? std::cout : std::cerr) << "ibnls " << cmd << ": " << r.message << '\n';
  return r.exit_code;
}
