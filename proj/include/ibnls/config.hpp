#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ibnls/classifier.hpp"
#include "ibnls/integrator.hpp"

namespace ibnls {

enum class Experiment { GroundState, Evolve, Classify, Audit, VirialCheck, LorentzCheck, Sweep };
const char* to_string(Experiment e);

struct GridSpec {
  int dim = 1, n = 1024;
  double L = 32;
  bool offset = false;
};

struct WeightSpec {
  bool corrected = true;  // false: (|x|² + eps²)^{-b/2}
  double eps = 0;         // 0 with corrected = false means h/2
};

// gaussian | ring | bandlimited | random-smooth | scaled-ground-state | from-file
struct InitialSpec {
  std::string family = "gaussian";
  double amplitude = 1, width = 1, radius = 0, xi_c = 1, spread = 2, c = 1;
  std::array<double, 3> center{0, 0, 0};
  std::string path;
};

struct RunConfig {
  Experiment experiment = Experiment::GroundState;
  PhysParams params;
  GridSpec grid;
  WeightSpec weight;
  IntegratorConfig integrator;
  InitialSpec initial;
  Tolerances tolerances;
  std::uint64_t seed = 0;
  // groundstate
  double gs_tol = 1e-10;
  int gs_max_iter = 2000;
  // classify: optional c·Q sweep
  std::vector<double> c_values;
  // audit
  int audit_samples = 50;
  bool audit_direct = false;
  // virial-check
  double virial_R = 0;  // 0: L/2
  // lorentz-check
  std::vector<int> lorentz_sizes{256, 512, 1024, 2048, 4096};
  double lorentz_eps = 0.05;
  // evolve
  int checkpoint_every = 0;  // snapshots between checkpoints, 0: final only
  bool scatter = false;      // attach a scattering verdict
  // sweep
  Experiment sweep_experiment = Experiment::GroundState;
  std::vector<std::pair<std::string, std::vector<double>>> sweep_axes;  // dotted key -> values
  int parallel = 1;

  nlohmann::json source;  // the parsed document, for hashing and sweep overrides
};

// ConfigParseError names the offending field or the line of a syntax error
RunConfig parse_config(const std::string& text);
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

// FNV-1a 64
std::uint64_t fnv1a64(const std::string& bytes, std::uint64_t h = 0xcbf29ce484222325ull);
std::string hex64(std::uint64_t h);
// hash of the physics-relevant document: t_end, output and parallelism keys excluded
std::string config_hash(const nlohmann::json& doc);

Grid build_grid(const RunConfig& c);
WeightField build_weight(const RunConfig& c, const Grid& g);
Field build_initial(const RunConfig& c, const Grid& g, const WeightField& w);

}  // namespace ibnls
