#pragma once

#include "efish/characterization.hpp"
#include "efish/config.hpp"
#include "efish/csv.hpp"

namespace efish {

struct ValidationCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// The operator identity suite behind the `validate` experiment.
std::vector<ValidationCheck> run_operator_checks();

/// Execute one experiment; writes every artifact plus a manifest under the
/// config's output directory (or `output_override`). Throws on failure.
void run_experiment(const ExperimentConfig& config,
                    const std::string& output_override = "");

/// Local argmax refinement: rescan a small window around a coarse peak at
/// ten-fold resolution.
Vec2 refine_argmax(const BackgroundModel& model, const SignalProjector& projector,
                   const GridSpec& coarse, Vec2 peak);

}  // namespace efish
