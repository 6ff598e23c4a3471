#pragma once

#include <map>
#include <optional>
#include <string>

#include "efish/imaging.hpp"
#include "efish/scaling.hpp"

namespace efish {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeSpec {
  enum class Kind { Ellipse, Disk, Fourier };
  Kind kind = Kind::Disk;
  double semi_a = 0.05, semi_b = 0.05, angle = 0.0;  // ellipse
  double radius = 0.05;                              // disk
  double base = 0.0;                                 // radial Fourier series
  std::vector<double> cos_coeffs, sin_coeffs;

  BoundaryCurve make_curve(Vec2 center) const;
  /// Analytic polarization shape; empty for Fourier curves.
  std::optional<PtShape> analytic_shape() const;
};

struct TargetConfig {
  ShapeSpec shape;
  Vec2 position{0.75, 1.2990381056766580};
  double conductivity = 2.0;
  double permittivity = 1.0;
};

struct SpectrumConfig {
  double omega0 = 1.0;
  int count = 10;
  double first = 1.0, last = 10.0;
  std::vector<double> list;      // explicit harmonic list (overrides count)
  bool repeated = false;         // `count` copies of `first` (stacked trials)

  std::vector<double> harmonics() const;
  MaterialSpectrum make(double conductivity, double permittivity) const;
};

enum class ExperimentKind {
  Validate,
  Forward,
  Locate,
  NoiseStats,
  CharacterizeDisk,
  CharacterizeEllipse,
  Scaling,
};

struct StudyConfig {
  enum class Vary { Frequencies, Sensors, Distance };
  Vary vary = Vary::Frequencies;
  std::vector<double> zetas{0.01};
  std::vector<int> freq_counts{1, 100};
  std::vector<int> sensor_counts{8, 64};
  std::vector<double> distances{1.0, 1.5, 2.0, 2.5, 3.0};
};

struct CharacterizeRow {
  ShapeSpec shape;
  double conductivity = 2.0;
  double permittivity = 1.0;
};

struct CharacterizeConfig {
  std::vector<CharacterizeRow> rows;
  double init_alpha = 0.01, init_conductivity = 1.0, init_permittivity = 1.0;
  Vec2 position2{-0.25, 1.2990381056766580};
  bool locate = true;   // locate via the imaging functional before fitting
  bool trace = false;   // emit the per-frequency material trace
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Locate;
  std::string name;          // bundled name or file stem
  std::string output = "out";
  std::uint64_t master_seed = 20120707;
  int workers = 1;

  ShapeSpec body_shape;
  Vec2 body_center{0, 0};
  FishBody fish;
  int body_nodes = 256;
  int target_nodes = 128;

  std::optional<TargetConfig> target;
  SpectrumConfig spectrum;

  std::string data_source = "bem";  // "bem" | "dipole"
  NoiseStage noise_stage = NoiseStage::Raw;
  int projector_rank = 1;

  GridSpec grid;
  std::vector<double> zetas;  // locate: optional single noise level
  int trials = 50;

  StudyConfig study;
  CharacterizeConfig characterize;
  PhysicalParams physical;

  std::string canonical;     // normalized serialized form
  std::uint64_t hash = 0;    // FNV-1a of the canonical form
};

/// Parse and validate a JSON experiment config. Parse errors are reported
/// with line/column; semantic errors with the offending config path.
ExperimentConfig parse_config(const std::string& json_text,
                              const std::string& name);

/// Re-serialize the normalized config (defaults applied); parsing the result
/// reproduces the same canonical form and hash.
std::string serialize_config(const ExperimentConfig& config);

/// Bundled experiment definitions, keyed by name (fig2, fig3a..f, fig4..fig9,
/// table2..table4, validate).
const std::map<std::string, std::string>& bundled_configs();

std::uint64_t fnv1a64(const std::string& text);

}  // namespace efish
