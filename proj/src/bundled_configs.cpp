#include "efish/config.hpp"

namespace efish {

namespace {

// One bundled experiment per reproduced figure or table, plus the operator
// validation suite and a physical-scaling example.
const std::map<std::string, std::string> kBundled = {
    {"validate", R"({
  "experiment": "validate",
  "output": "out/validate"
})"},

    {"fig2", R"({
  "experiment": "forward",
  "output": "out/fig2",
  "target": {
    "shape": {"type": "disk", "radius": 0.05},
    "position": [0.75, 1.2990381056766580],
    "conductivity": 1e10,
    "permittivity": 0.0
  },
  "spectrum": {"count": 1, "first": 1, "last": 1},
  "imaging": {"window": [[-2.5, 2.5], [-1.6, 2.4]], "resolution": [251, 201]}
})"},

    {"fig3a", R"({
  "experiment": "locate",
  "output": "out/fig3a",
  "target": {
    "shape": {"type": "disk", "radius": 0.05},
    "position": [0.75, 1.2990381056766580],
    "conductivity": 2.0,
    "permittivity": 1.0
  },
  "spectrum": {"count": 10, "first": 1, "last": 10}
})"},

    {"fig3b", R"({
  "experiment": "locate",
  "output": "out/fig3b",
  "target": {
    "shape": {"type": "fourier", "base": 0.05, "cos": [0, 0, 0.015]},
    "position": [0.75, 1.2990381056766580],
    "conductivity": 2.0,
    "permittivity": 1.0
  },
  "spectrum": {"count": 10, "first": 1, "last": 10}
})"},

    {"fig3c", R"({
  "experiment": "locate",
  "output": "out/fig3c",
  "target": {
    "shape": {"type": "fourier", "base": 0.055, "cos": [0, 0.011], "sin": [0, 0, 0.00825]},
    "position": [0.75, 1.2990381056766580],
    "conductivity": 2.0,
    "permittivity": 1.0
  },
  "spectrum": {"count": 10, "first": 1, "last": 10}
})"},

    {"fig3d", R"({
  "experiment": "locate",
  "output": "out/fig3d",
  "target": {
    "shape": {"type": "ellipse", "semi_axes": [0.025, 0.1], "angle": 1.0471975511965976},
    "position": [0.75, 1.2990381056766580],
    "conductivity": 2.0,
    "permittivity": 1.0
  },
  "spectrum": {"count": 10, "first": 1, "last": 10}
})"},

    {"fig3e", R"({
  "experiment": "locate",
  "output": "out/fig3e",
  "target": {
    "shape": {"type": "fourier", "base": 0.05, "cos": [0, 0.0175]},
    "position": [0.75, 1.2990381056766580],
    "conductivity": 2.0,
    "permittivity": 1.0
  },
  "spectrum": {"count": 10, "first": 1, "last": 10}
})"},

    {"fig3f", R"({
  "experiment": "locate",
  "output": "out/fig3f",
  "target": {
    "shape": {"type": "fourier", "base": 0.05, "cos": [0, 0, 0, 0, 0.0125]},
    "position": [0.75, 1.2990381056766580],
    "conductivity": 2.0,
    "permittivity": 1.0
  },
  "spectrum": {"count": 10, "first": 1, "last": 10}
})"},

    {"fig4", R"({
  "experiment": "locate",
  "output": "out/fig4",
  "target": {
    "shape": {"type": "disk", "radius": 0.05},
    "position": [0.75, 1.2990381056766580],
    "conductivity": 2.0,
    "permittivity": 1.0
  },
  "spectrum": {"count": 1, "first": 1, "last": 1}
})"},

    {"fig5", R"({
  "experiment": "noise-stats",
  "output": "out/fig5",
  "target": {
    "shape": {"type": "disk", "radius": 0.05},
    "position": [0.75, 1.2990381056766580],
    "conductivity": 2.0,
    "permittivity": 1.0
  },
  "spectrum": {"count": 100, "first": 1, "last": 100},
  "noise": {"trials": 250},
  "study": {"vary": "frequencies", "zetas": [0.005, 0.01, 0.02, 0.05], "freq_counts": [1, 10, 100]}
})"},

    {"fig6", R"({
  "experiment": "locate",
  "output": "out/fig6",
  "target": {
    "shape": {"type": "disk", "radius": 0.05},
    "position": [0.75, 1.2990381056766580],
    "conductivity": 2.0,
    "permittivity": 1.0
  },
  "spectrum": {"count": 100, "repeat": 1.0},
  "noise": {"zeta": [0.01]}
})"},

    {"fig7", R"({
  "experiment": "noise-stats",
  "output": "out/fig7",
  "target": {
    "shape": {"type": "disk", "radius": 0.05},
    "position": [0.75, 1.2990381056766580],
    "conductivity": 2.0,
    "permittivity": 1.0
  },
  "spectrum": {"count": 100, "first": 1, "last": 100},
  "noise": {"trials": 250},
  "study": {"vary": "sensors", "zetas": [0.005, 0.01, 0.02, 0.05], "sensor_counts": [8, 64]}
})"},

    {"fig8", R"({
  "experiment": "noise-stats",
  "output": "out/fig8",
  "target": {
    "shape": {"type": "disk", "radius": 0.05},
    "position": [0.75, 1.2990381056766580],
    "conductivity": 2.0,
    "permittivity": 1.0
  },
  "spectrum": {"count": 15, "first": 1, "last": 15},
  "noise": {"trials": 250},
  "study": {"vary": "distance", "zetas": [0.05], "distances": [1.0, 1.5, 2.0, 2.5, 3.0]}
})"},

    {"fig9", R"({
  "experiment": "characterize-ellipse",
  "output": "out/fig9",
  "target": {
    "shape": {"type": "disk", "radius": 0.05},
    "position": [0.75, 1.2990381056766580],
    "conductivity": 2.0,
    "permittivity": 1.0
  },
  "spectrum": {"count": 10, "first": 1, "last": 10},
  "characterize": {
    "rows": [
      {"shape": {"type": "disk", "radius": 0.05}, "conductivity": 2.0, "permittivity": 1.0}
    ],
    "second_position": [-0.25, 1.2990381056766580],
    "trace": true
  }
})"},

    {"table2", R"({
  "experiment": "characterize-disk",
  "output": "out/table2",
  "target": {
    "shape": {"type": "disk", "radius": 0.05},
    "position": [0.75, 1.2990381056766580],
    "conductivity": 5.0,
    "permittivity": 1.0
  },
  "spectrum": {"count": 100, "first": 1, "last": 100},
  "characterize": {
    "rows": [
      {"shape": {"type": "disk", "radius": 0.05}, "conductivity": 5.0, "permittivity": 1.0},
      {"shape": {"type": "disk", "radius": 0.05}, "conductivity": 4.0, "permittivity": 1.0},
      {"shape": {"type": "disk", "radius": 0.05}, "conductivity": 5.0, "permittivity": 2.0},
      {"shape": {"type": "disk", "radius": 0.06}, "conductivity": 5.0, "permittivity": 1.0},
      {"shape": {"type": "disk", "radius": 0.04}, "conductivity": 3.0, "permittivity": 2.0}
    ],
    "init": {"alpha": 0.01, "conductivity": 1.0, "permittivity": 1.0}
  }
})"},

    {"table3", R"({
  "experiment": "characterize-ellipse",
  "output": "out/table3",
  "target": {
    "shape": {"type": "ellipse", "semi_axes": [0.04, 0.04], "angle": 0},
    "position": [0.75, 1.2990381056766580],
    "conductivity": 2.0,
    "permittivity": 1.0
  },
  "spectrum": {"count": 10, "first": 1, "last": 10},
  "characterize": {
    "rows": [
      {"shape": {"type": "ellipse", "semi_axes": [0.04, 0.04], "angle": 0}, "conductivity": 2.0, "permittivity": 1.0},
      {"shape": {"type": "ellipse", "semi_axes": [0.05, 0.05], "angle": 0}, "conductivity": 2.0, "permittivity": 1.0},
      {"shape": {"type": "ellipse", "semi_axes": [0.05, 0.06], "angle": 0}, "conductivity": 2.0, "permittivity": 1.0},
      {"shape": {"type": "ellipse", "semi_axes": [0.03, 0.06], "angle": 0}, "conductivity": 2.0, "permittivity": 1.0},
      {"shape": {"type": "ellipse", "semi_axes": [0.06, 0.05], "angle": 0}, "conductivity": 2.0, "permittivity": 1.0},
      {"shape": {"type": "ellipse", "semi_axes": [0.01, 0.03], "angle": 0}, "conductivity": 2.0, "permittivity": 1.0}
    ],
    "second_position": [-0.25, 1.2990381056766580]
  }
})"},

    {"table4", R"({
  "experiment": "characterize-ellipse",
  "output": "out/table4",
  "target": {
    "shape": {"type": "disk", "radius": 0.05},
    "position": [0.75, 1.2990381056766580],
    "conductivity": 2.0,
    "permittivity": 1.0
  },
  "spectrum": {"count": 10, "first": 1, "last": 10},
  "characterize": {
    "rows": [
      {"shape": {"type": "disk", "radius": 0.05}, "conductivity": 2.0, "permittivity": 1.0},
      {"shape": {"type": "disk", "radius": 0.05}, "conductivity": 3.0, "permittivity": 2.0},
      {"shape": {"type": "disk", "radius": 0.05}, "conductivity": 5.0, "permittivity": 1.0},
      {"shape": {"type": "ellipse", "semi_axes": [0.025, 0.1], "angle": 1.0471975511965976}, "conductivity": 2.0, "permittivity": 1.0},
      {"shape": {"type": "ellipse", "semi_axes": [0.025, 0.1], "angle": 1.0471975511965976}, "conductivity": 3.0, "permittivity": 2.0},
      {"shape": {"type": "ellipse", "semi_axes": [0.025, 0.1], "angle": 1.0471975511965976}, "conductivity": 5.0, "permittivity": 1.0}
    ],
    "second_position": [-0.25, 1.2990381056766580]
  }
})"},

    {"scaling", R"({
  "experiment": "scaling",
  "output": "out/scaling",
  "physical": {}
})"}};

}  // namespace

const std::map<std::string, std::string>& bundled_configs() { return kBundled; }

}  // namespace efish
