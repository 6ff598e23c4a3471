#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "efish/experiments.hpp"

namespace {

// Exit categories: 0 ok, 2 config, 3 geometry/setup, 4 solver, 5 other.
int categorize(const std::exception& e) {
  if (dynamic_cast<const efish::ConfigError*>(&e)) return 2;
  if (dynamic_cast<const efish::InvalidConfigurationError*>(&e) ||
      dynamic_cast<const efish::InvalidGeometryError*>(&e)) {
    return 3;
  }
  if (dynamic_cast<const efish::SolverError*>(&e) ||
      dynamic_cast<const efish::RankDeficiencyError*>(&e) ||
      dynamic_cast<const efish::SingularityError*>(&e) ||
      dynamic_cast<const efish::SingularContrastError*>(&e)) {
    return 4;
  }
  return 5;
}

std::string load_config_text(const std::string& name_or_path, std::string& name) {
  const auto& bundled = efish::bundled_configs();
  if (auto it = bundled.find(name_or_path); it != bundled.end()) {
    name = name_or_path;
    return it->second;
  }
  std::ifstream is(name_or_path);
  if (!is) {
    throw efish::ConfigError("no bundled config or readable file named '" +
                             name_or_path + "' (try `efish list-configs`)");
  }
  name = std::filesystem::path(name_or_path).stem().string();
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

const char* kind_label(efish::ExperimentKind kind) {
  using K = efish::ExperimentKind;
  switch (kind) {
    case K::Validate: return "operator identity suite";
    case K::Forward: return "forward solves and field dumps";
    case K::Locate: return "multi-frequency target search";
    case K::NoiseStats: return "localization error statistics";
    case K::CharacterizeDisk: return "disk size/material recovery";
    case K::CharacterizeEllipse: return "ellipse size/material recovery";
    case K::Scaling: return "non-dimensionalization check";
  }
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weakly-electric-fish field simulation and multi-frequency "
               "target search"};
  app.require_subcommand(1);

  std::string config_arg;
  std::string out_override;
  std::uint64_t seed_override = 0;
  int workers_override = 0;

  CLI::App* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_arg, "bundled config name or path to a JSON file")
      ->required();
  run->add_option("--out", out_override, "output directory override");
  CLI::Option* seed_opt =
      run->add_option("--seed", seed_override, "master seed override");
  run->add_option("--workers", workers_override, "worker thread count");

  CLI::App* validate =
      app.add_subcommand("validate", "run the operator identity suite");
  validate->add_option("--out", out_override, "output directory override");

  CLI::App* list =
      app.add_subcommand("list-configs", "list bundled experiment configs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& [name, text] : efish::bundled_configs()) {
        const efish::ExperimentConfig c = efish::parse_config(text, name);
        std::cout << name << "\t" << kind_label(c.kind) << "\n";
      }
      return 0;
    }
    std::string name;
    std::string text;
    if (validate->parsed()) {
      name = "validate";
      text = efish::bundled_configs().at("validate");
    } else {
      text = load_config_text(config_arg, name);
    }
    efish::ExperimentConfig config = efish::parse_config(text, name);
    if (seed_opt->count() > 0) config.master_seed = seed_override;
    if (workers_override > 0) config.workers = workers_override;
    efish::run_experiment(config, out_override);
    std::cout << "wrote " << (out_override.empty() ? config.output : out_override)
              << "\n";
    return 0;
  } catch (const std::exception& e) {
    const int code = categorize(e);
    std::cerr << "error (category " << code << "): " << e.what() << "\n";
    return code;
  }
}
