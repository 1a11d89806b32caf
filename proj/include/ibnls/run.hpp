#pragma once

#include <string>

#include <json.hpp>

#include "ibnls/config.hpp"
#include "ibnls/error.hpp"

namespace ibnls {

// 0 success, 2 configuration, 3 numerical failure, 4 resolution or verdict failure
int exit_code_for(ErrorKind k);

struct RunResult {
  int exit_code = 0;
  std::string message;
  nlohmann::json summary = nlohmann::json::object();
};

// runs the configured experiment into out_dir and writes manifest.json last
RunResult run(const RunConfig& c, const std::string& out_dir);
// continues an evolve run from out_dir/checkpoint.{snap,json} up to c.integrator.t_end
RunResult resume(const RunConfig& c, const std::string& out_dir);

// every file below dir except manifest.json itself, with size and FNV-1a 64 hash
void write_manifest(const std::string& dir);

// "%.17g"
std::string fmt17(double v);

}  // namespace ibnls
