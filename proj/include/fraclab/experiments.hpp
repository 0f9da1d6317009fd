#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fraclab/geometry.hpp"

namespace fraclab {

/// Validated, fully-defaulted experiment description.
struct ExperimentConfig {
  std::string experiment;
  Domain domain = Domain::interval(-1.0, 1.0, 0.5);
  double s = 0.5;
  std::vector<int> resolutions = {32, 64, 128};
  unsigned seed = 0;
  std::string nonlinearity = "";              // named; empty = experiment default
  std::map<std::string, double> params;       // nonlinearity and experiment knobs
  std::string out_dir;
};

struct ManifestArtifact {
  std::string file;
  std::string hash;
};

struct ManifestCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunManifest {
  std::string experiment;
  std::string config_echo;  // canonical JSON of the validated config
  std::vector<ManifestArtifact> artifacts;
  std::vector<ManifestCheck> checks;
  double wall_ms = 0.0;
  std::map<std::string, double> stage_ms;
  bool pass = false;

  std::string to_json() const;
};

/// Names and one-line descriptions of every experiment.
std::vector<std::pair<std::string, std::string>> experiment_catalog();

/// Parses and validates a JSON config document, applying defaults
/// (s = 1/2, resolutions {32,64,128}, seed 0). Schema violations are
/// reported with their JSON path; unknown experiments list the valid names.
ExperimentConfig parse_config(const std::string& json_text);

/// Runs the named study, writing CSV/SVG artifacts and manifest.json into
/// the output directory. Embedded assertions become manifest checks; the
/// manifest passes only if all of them do.
RunManifest run_experiment(const ExperimentConfig& config, int jobs = 1);

}  // namespace fraclab
