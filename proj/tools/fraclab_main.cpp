// fraclab command-line runner. Links only the shared C API.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fraclab.h"
#include "json.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw CLI::ValidationError("config", "cannot open " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fraclab - a numerical laboratory for nonlocal variational problems"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
  std::string config_path, out_dir;
  long long seed = -1;
  int jobs = 1;
  run->add_option("config", config_path, "path to the experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "output directory override");
  run->add_option("--seed", seed, "seed override (nonnegative)");
  run->add_option("--jobs", jobs, "worker threads for instance sweeps")->check(CLI::PositiveNumber);

  auto* list = app.add_subcommand("list", "print experiment names and descriptions");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    char* json_text = nullptr;
    if (fraclab_experiment_list(&json_text) != FRACLAB_OK) {
      std::cerr << "error: " << fraclab_last_error() << "\n";
      return 2;
    }
    auto catalog = nlohmann::json::parse(json_text);
    fraclab_string_free(json_text);
    for (const auto& entry : catalog)
      std::cout << entry["name"].get<std::string>() << "\n    "
                << entry["description"].get<std::string>() << "\n";
    return 0;
  }

  std::string config_text;
  try {
    config_text = slurp(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  char* manifest = nullptr;
  fraclab_status st = fraclab_experiment_run(config_text.c_str(),
                                             out_dir.empty() ? nullptr : out_dir.c_str(), seed,
                                             jobs, &manifest);
  if (st != FRACLAB_OK && manifest == nullptr) {
    std::cerr << "error: " << fraclab_last_error() << "\n";
    return 2;
  }

  auto man = nlohmann::json::parse(manifest);
  fraclab_string_free(manifest);
  for (const auto& c : man["checks"])
    std::cout << (c["pass"].get<bool>() ? "[PASS] " : "[FAIL] ") << c["name"].get<std::string>()
              << ": " << c["detail"].get<std::string>() << "\n";
  std::cout << "artifacts in " << man["config"]["out_dir"].get<std::string>() << " ("
            << man["artifacts"].size() << " files), wall " << man["wall_ms"].get<double>()
            << " ms\n";
  if (st == FRACLAB_ASSERTION_FAILED) {
    std::cout << "result: FAIL\n";
    return 1;
  }
  if (st != FRACLAB_OK) {
    std::cerr << "error: " << fraclab_last_error() << "\n";
    return 2;
  }
  std::cout << "result: PASS\n";
  return 0;
}
