#include "efish/config.hpp"

#include <json.hpp>

namespace efish {

using nlohmann::json;

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

BoundaryCurve ShapeSpec::make_curve(Vec2 center) const {
  switch (kind) {
    case Kind::Ellipse:
      return make_ellipse(center, semi_a, semi_b, angle);
    case Kind::Disk:
      return make_ellipse(center, radius, radius);
    case Kind::Fourier: {
      RadialFourierSpec spec;
      spec.center = center;
      spec.base = base;
      spec.cos_coeffs = cos_coeffs;
      spec.sin_coeffs = sin_coeffs;
      return make_fourier_curve(spec);
    }
  }
  throw std::logic_error("unknown shape kind");
}

std::optional<PtShape> ShapeSpec::analytic_shape() const {
  switch (kind) {
    case Kind::Disk:
      return PtShape{DiskShape{radius}};
    case Kind::Ellipse:
      return PtShape{EllipseShape{semi_a, semi_b, angle}};
    case Kind::Fourier:
      return std::nullopt;
  }
  return std::nullopt;
}

std::vector<double> SpectrumConfig::harmonics() const {
  if (!list.empty()) return list;
  std::vector<double> h(count);
  for (int i = 0; i < count; ++i) {
    if (repeated || count == 1) {
      h[i] = first;
    } else {
      h[i] = first + (last - first) * i / (count - 1);
    }
  }
  return h;
}

MaterialSpectrum SpectrumConfig::make(double conductivity,
                                      double permittivity) const {
  MaterialSpectrum s;
  s.conductivity = conductivity;
  s.permittivity = permittivity;
  s.omega0 = omega0;
  s.harmonics = harmonics();
  s.validate();
  return s;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        ok = true;
        break;
      }
    }
    if (!ok) fail(path + "/" + item.key(), "unknown key");
  }
}

double get_num(const json& j, const std::string& path, const char* key,
               double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) fail(path + "/" + key, "expected a number");
  return j[key].get<double>();
}

int get_int(const json& j, const std::string& path, const char* key,
            int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) fail(path + "/" + key, "expected an integer");
  return j[key].get<int>();
}

bool get_bool(const json& j, const std::string& path, const char* key,
              bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_boolean()) fail(path + "/" + key, "expected a boolean");
  return j[key].get<bool>();
}

std::string get_str(const json& j, const std::string& path, const char* key,
                    const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_string()) fail(path + "/" + key, "expected a string");
  return j[key].get<std::string>();
}

Vec2 get_vec2(const json& j, const std::string& path, const char* key,
              Vec2 fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j[key];
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    fail(path + "/" + key, "expected a [x, y] pair");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

std::vector<double> get_num_list(const json& j, const std::string& path,
                                 const char* key,
                                 const std::vector<double>& fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j[key];
  if (!v.is_array()) fail(path + "/" + key, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) fail(path + "/" + key, "expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<int> get_int_list(const json& j, const std::string& path,
                              const char* key, const std::vector<int>& fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j[key];
  if (!v.is_array()) fail(path + "/" + key, "expected an array of integers");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer()) fail(path + "/" + key, "expected integers");
    out.push_back(e.get<int>());
  }
  return out;
}

ShapeSpec parse_shape(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected a shape record");
  const std::string type = get_str(j, path, "type", "");
  ShapeSpec s;
  if (type == "ellipse") {
    check_keys(j, path, {"type", "semi_axes", "angle"});
    s.kind = ShapeSpec::Kind::Ellipse;
    if (!j.contains("semi_axes")) fail(path, "ellipse needs semi_axes");
    const json& ax = j["semi_axes"];
    if (!ax.is_array() || ax.size() != 2) fail(path + "/semi_axes", "expected [a, b]");
    s.semi_a = ax[0].get<double>();
    s.semi_b = ax[1].get<double>();
    s.angle = get_num(j, path, "angle", 0.0);
    if (!(s.semi_a > 0) || !(s.semi_b > 0)) {
      fail(path + "/semi_axes", "semi-axes must be positive");
    }
  } else if (type == "disk") {
    check_keys(j, path, {"type", "radius"});
    s.kind = ShapeSpec::Kind::Disk;
    s.radius = get_num(j, path, "radius", 0.0);
    if (!(s.radius > 0)) fail(path + "/radius", "radius must be positive");
  } else if (type == "fourier") {
    check_keys(j, path, {"type", "base", "cos", "sin"});
    s.kind = ShapeSpec::Kind::Fourier;
    s.base = get_num(j, path, "base", 0.0);
    s.cos_coeffs = get_num_list(j, path, "cos", {});
    s.sin_coeffs = get_num_list(j, path, "sin", {});
  } else {
    fail(path + "/type", "expected one of: ellipse, disk, fourier");
  }
  return s;
}

json emit_shape(const ShapeSpec& s) {
  json j;
  switch (s.kind) {
    case ShapeSpec::Kind::Ellipse:
      j["type"] = "ellipse";
      j["semi_axes"] = {s.semi_a, s.semi_b};
      j["angle"] = s.angle;
      break;
    case ShapeSpec::Kind::Disk:
      j["type"] = "disk";
      j["radius"] = s.radius;
      break;
    case ShapeSpec::Kind::Fourier:
      j["type"] = "fourier";
      j["base"] = s.base;
      j["cos"] = s.cos_coeffs;
      j["sin"] = s.sin_coeffs;
      break;
  }
  return j;
}

ExperimentKind parse_kind(const std::string& text, const std::string& path) {
  if (text == "validate") return ExperimentKind::Validate;
  if (text == "forward") return ExperimentKind::Forward;
  if (text == "locate") return ExperimentKind::Locate;
  if (text == "noise-stats") return ExperimentKind::NoiseStats;
  if (text == "characterize-disk") return ExperimentKind::CharacterizeDisk;
  if (text == "characterize-ellipse") return ExperimentKind::CharacterizeEllipse;
  if (text == "scaling") return ExperimentKind::Scaling;
  fail(path, "unknown experiment kind '" + text + "'");
}

std::string kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Validate: return "validate";
    case ExperimentKind::Forward: return "forward";
    case ExperimentKind::Locate: return "locate";
    case ExperimentKind::NoiseStats: return "noise-stats";
    case ExperimentKind::CharacterizeDisk: return "characterize-disk";
    case ExperimentKind::CharacterizeEllipse: return "characterize-ellipse";
    case ExperimentKind::Scaling: return "scaling";
  }
  return "?";
}

ExperimentConfig build_config(const json& root, const std::string& name) {
  if (!root.is_object()) fail("/", "config must be a JSON object");
  check_keys(root, "", {"experiment", "output", "master_seed", "workers", "fish",
                        "mesh", "target", "spectrum", "data", "imaging", "noise",
                        "study", "characterize", "physical"});
  ExperimentConfig c;
  c.name = name;
  if (!root.contains("experiment")) fail("/experiment", "missing");
  c.kind = parse_kind(get_str(root, "", "experiment", ""), "/experiment");
  c.output = get_str(root, "", "output", "out/" + name);
  const double seed = get_num(root, "", "master_seed", 20120707.0);
  if (seed < 0) fail("/master_seed", "must be nonnegative");
  c.master_seed = static_cast<std::uint64_t>(seed);
  c.workers = get_int(root, "", "workers", 1);
  if (c.workers < 1) fail("/workers", "must be at least 1");

  // Fish.
  {
    const json fish = root.contains("fish") ? root["fish"] : json::object();
    if (!fish.is_object()) fail("/fish", "expected a record");
    check_keys(fish, "/fish",
               {"body", "center", "skin_impedance", "dipole", "sensors"});
    if (fish.contains("body")) {
      c.body_shape = parse_shape(fish["body"], "/fish/body");
    } else {
      c.body_shape.kind = ShapeSpec::Kind::Ellipse;
      c.body_shape.semi_a = 1.0;
      c.body_shape.semi_b = 0.3;
      c.body_shape.angle = 0.0;
    }
    c.body_center = get_vec2(fish, "/fish", "center", {0, 0});
    c.fish.skin_impedance = get_num(fish, "/fish", "skin_impedance", 0.1);
    if (c.fish.skin_impedance < 0) fail("/fish/skin_impedance", "must be >= 0");
    const json dip = fish.contains("dipole") ? fish["dipole"] : json::object();
    check_keys(dip, "/fish/dipole", {"position", "moment"});
    c.fish.dipole_position = get_vec2(dip, "/fish/dipole", "position", {0.7, 0});
    c.fish.dipole_moment = get_vec2(dip, "/fish/dipole", "moment", {1, 0});
    c.fish.sensor_count = get_int(fish, "/fish", "sensors", 64);
    if (c.fish.sensor_count < 1) fail("/fish/sensors", "must be >= 1");
    try {
      c.fish.body = c.body_shape.make_curve(c.body_center);
      c.fish.validate();
    } catch (const std::exception& e) {
      fail("/fish", e.what());
    }
  }

  // Mesh.
  {
    const json mesh = root.contains("mesh") ? root["mesh"] : json::object();
    check_keys(mesh, "/mesh", {"body_nodes", "target_nodes"});
    c.body_nodes = get_int(mesh, "/mesh", "body_nodes", 256);
    c.target_nodes = get_int(mesh, "/mesh", "target_nodes", 128);
    if (c.body_nodes < 16) fail("/mesh/body_nodes", "must be >= 16");
    if (c.target_nodes < 16) fail("/mesh/target_nodes", "must be >= 16");
    if (c.body_nodes % c.fish.sensor_count != 0) {
      fail("/fish/sensors", "sensor count must divide mesh/body_nodes");
    }
  }

  // Target.
  if (root.contains("target")) {
    const json tgt = root["target"];
    check_keys(tgt, "/target", {"shape", "position", "conductivity", "permittivity"});
    TargetConfig t;
    if (!tgt.contains("shape")) fail("/target/shape", "missing");
    t.shape = parse_shape(tgt["shape"], "/target/shape");
    t.position = get_vec2(tgt, "/target", "position", t.position);
    t.conductivity = get_num(tgt, "/target", "conductivity", 2.0);
    t.permittivity = get_num(tgt, "/target", "permittivity", 1.0);
    if (!(t.conductivity > 0)) fail("/target/conductivity", "must be positive");
    if (t.permittivity < 0) fail("/target/permittivity", "must be >= 0");
    if (point_inside(c.fish.body, t.position)) {
      fail("/target/position", "target center lies inside the fish body");
    }
    c.target = t;
  }

  // Spectrum.
  {
    const json sp = root.contains("spectrum") ? root["spectrum"] : json::object();
    check_keys(sp, "/spectrum", {"omega0", "count", "first", "last", "list", "repeat"});
    c.spectrum.omega0 = get_num(sp, "/spectrum", "omega0", 1.0);
    if (!(c.spectrum.omega0 > 0)) fail("/spectrum/omega0", "must be positive");
    c.spectrum.count = get_int(sp, "/spectrum", "count", 10);
    if (c.spectrum.count < 1) fail("/spectrum/count", "must be >= 1");
    c.spectrum.first = get_num(sp, "/spectrum", "first", 1.0);
    c.spectrum.last = get_num(sp, "/spectrum", "last", c.spectrum.count);
    c.spectrum.list = get_num_list(sp, "/spectrum", "list", {});
    if (sp.contains("repeat")) {
      c.spectrum.repeated = true;
      c.spectrum.first = get_num(sp, "/spectrum", "repeat", 1.0);
    }
  }

  // Data.
  {
    const json d = root.contains("data") ? root["data"] : json::object();
    check_keys(d, "/data", {"source", "noise_stage"});
    c.data_source = get_str(d, "/data", "source", "bem");
    if (c.data_source != "bem" && c.data_source != "dipole") {
      fail("/data/source", "expected 'bem' or 'dipole'");
    }
    const std::string stage = get_str(d, "/data", "noise_stage", "raw");
    if (stage == "raw") {
      c.noise_stage = NoiseStage::Raw;
    } else if (stage == "postprocessed") {
      c.noise_stage = NoiseStage::Postprocessed;
    } else {
      fail("/data/noise_stage", "expected 'raw' or 'postprocessed'");
    }
    if (c.data_source == "dipole" && c.target &&
        !c.target->shape.analytic_shape()) {
      fail("/data/source", "the dipole data model needs a disk or ellipse target");
    }
  }

  // Imaging grid.
  {
    const json g = root.contains("imaging") ? root["imaging"] : json::object();
    check_keys(g, "/imaging", {"window", "resolution", "margin", "cap", "rank"});
    if (g.contains("window")) {
      const json& w = g["window"];
      if (!w.is_array() || w.size() != 2 || !w[0].is_array() || !w[1].is_array() ||
          w[0].size() != 2 || w[1].size() != 2) {
        fail("/imaging/window", "expected [[xmin,xmax],[ymin,ymax]]");
      }
      c.grid.xmin = w[0][0].get<double>();
      c.grid.xmax = w[0][1].get<double>();
      c.grid.ymin = w[1][0].get<double>();
      c.grid.ymax = w[1][1].get<double>();
      if (!(c.grid.xmax > c.grid.xmin) || !(c.grid.ymax > c.grid.ymin)) {
        fail("/imaging/window", "empty window");
      }
    }
    if (g.contains("resolution")) {
      const json& r = g["resolution"];
      if (!r.is_array() || r.size() != 2) fail("/imaging/resolution", "expected [nx, ny]");
      c.grid.nx = r[0].get<int>();
      c.grid.ny = r[1].get<int>();
      if (c.grid.nx < 2 || c.grid.ny < 2) fail("/imaging/resolution", "must be >= 2");
    }
    c.grid.margin = get_num(g, "/imaging", "margin", 0.1);
    if (c.grid.margin < 0) fail("/imaging/margin", "must be >= 0");
    c.grid.cap = get_num(g, "/imaging", "cap", 1e12);
    c.projector_rank = get_int(g, "/imaging", "rank", 1);
    if (c.projector_rank < 1 || c.projector_rank > 2) {
      fail("/imaging/rank", "rank must be 1 or 2");
    }
  }

  // Noise.
  {
    const json n = root.contains("noise") ? root["noise"] : json::object();
    check_keys(n, "/noise", {"zeta", "trials"});
    c.zetas = get_num_list(n, "/noise", "zeta", {});
    for (double z : c.zetas) {
      if (z < 0) fail("/noise/zeta", "noise power must be >= 0");
    }
    c.trials = get_int(n, "/noise", "trials", 50);
    if (c.trials < 1) fail("/noise/trials", "must be >= 1");
  }

  // Study (noise-stats).
  if (root.contains("study")) {
    const json s = root["study"];
    check_keys(s, "/study",
               {"vary", "zetas", "freq_counts", "sensor_counts", "distances"});
    const std::string vary = get_str(s, "/study", "vary", "frequencies");
    if (vary == "frequencies") {
      c.study.vary = StudyConfig::Vary::Frequencies;
    } else if (vary == "sensors") {
      c.study.vary = StudyConfig::Vary::Sensors;
    } else if (vary == "distance") {
      c.study.vary = StudyConfig::Vary::Distance;
    } else {
      fail("/study/vary", "expected frequencies, sensors or distance");
    }
    c.study.zetas = get_num_list(s, "/study", "zetas", c.study.zetas);
    c.study.freq_counts = get_int_list(s, "/study", "freq_counts", c.study.freq_counts);
    c.study.sensor_counts =
        get_int_list(s, "/study", "sensor_counts", c.study.sensor_counts);
    c.study.distances = get_num_list(s, "/study", "distances", c.study.distances);
    if (c.study.zetas.empty()) fail("/study/zetas", "must not be empty");
  }

  // Characterization.
  if (root.contains("characterize")) {
    const json ch = root["characterize"];
    check_keys(ch, "/characterize",
               {"rows", "init", "second_position", "locate", "trace"});
    if (ch.contains("rows")) {
      const json& rows = ch["rows"];
      if (!rows.is_array()) fail("/characterize/rows", "expected an array");
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string path = "/characterize/rows/" + std::to_string(i);
        const json& r = rows[i];
        check_keys(r, path, {"shape", "conductivity", "permittivity"});
        CharacterizeRow row;
        if (!r.contains("shape")) fail(path + "/shape", "missing");
        row.shape = parse_shape(r["shape"], path + "/shape");
        if (!row.shape.analytic_shape()) {
          fail(path + "/shape", "characterization rows need disk or ellipse shapes");
        }
        row.conductivity = get_num(r, path, "conductivity", 2.0);
        row.permittivity = get_num(r, path, "permittivity", 1.0);
        if (!(row.conductivity > 0)) fail(path + "/conductivity", "must be positive");
        if (row.permittivity < 0) fail(path + "/permittivity", "must be >= 0");
        c.characterize.rows.push_back(row);
      }
    }
    const json init = ch.contains("init") ? ch["init"] : json::object();
    check_keys(init, "/characterize/init", {"alpha", "conductivity", "permittivity"});
    c.characterize.init_alpha = get_num(init, "/characterize/init", "alpha", 0.01);
    c.characterize.init_conductivity =
        get_num(init, "/characterize/init", "conductivity", 1.0);
    c.characterize.init_permittivity =
        get_num(init, "/characterize/init", "permittivity", 1.0);
    c.characterize.position2 = get_vec2(ch, "/characterize", "second_position",
                                        c.characterize.position2);
    c.characterize.locate = get_bool(ch, "/characterize", "locate", true);
    c.characterize.trace = get_bool(ch, "/characterize", "trace", false);
  }
  if (c.kind == ExperimentKind::CharacterizeDisk ||
      c.kind == ExperimentKind::CharacterizeEllipse) {
    if (c.characterize.rows.empty()) {
      fail("/characterize/rows", "at least one row is required");
    }
    if (!c.target) fail("/target", "characterization needs a target record");
  }
  if ((c.kind == ExperimentKind::Locate || c.kind == ExperimentKind::NoiseStats ||
       c.kind == ExperimentKind::Forward) &&
      !c.target) {
    fail("/target", "this experiment needs a target record");
  }

  // Physical parameters (scaling).
  if (root.contains("physical")) {
    const json ph = root["physical"];
    check_keys(ph, "/physical",
               {"voltage", "body_length", "fundamental_freq", "water_conductivity",
                "organ_current", "body_conductivity", "skin_surface_conductivity",
                "skin_thickness", "permeability", "permittivity"});
    c.physical.voltage = get_num(ph, "/physical", "voltage", c.physical.voltage);
    c.physical.body_length =
        get_num(ph, "/physical", "body_length", c.physical.body_length);
    c.physical.fundamental_freq =
        get_num(ph, "/physical", "fundamental_freq", c.physical.fundamental_freq);
    c.physical.water_conductivity = get_num(ph, "/physical", "water_conductivity",
                                            c.physical.water_conductivity);
    c.physical.organ_current =
        get_num(ph, "/physical", "organ_current", c.physical.organ_current);
    c.physical.body_conductivity = get_num(ph, "/physical", "body_conductivity",
                                           c.physical.body_conductivity);
    c.physical.skin_surface_conductivity =
        get_num(ph, "/physical", "skin_surface_conductivity",
                c.physical.skin_surface_conductivity);
    c.physical.skin_thickness =
        get_num(ph, "/physical", "skin_thickness", c.physical.skin_thickness);
    c.physical.permeability =
        get_num(ph, "/physical", "permeability", c.physical.permeability);
    c.physical.permittivity =
        get_num(ph, "/physical", "permittivity", c.physical.permittivity);
    try {
      c.physical.validate();
    } catch (const std::exception& e) {
      fail("/physical", e.what());
    }
  }

  return c;
}

}  // namespace

std::string serialize_config(const ExperimentConfig& c) {
  json root;
  root["experiment"] = kind_name(c.kind);
  root["output"] = c.output;
  root["master_seed"] = c.master_seed;
  root["workers"] = c.workers;

  if (c.kind != ExperimentKind::Scaling) {
    json fish;
    fish["body"] = emit_shape(c.body_shape);
    fish["center"] = {c.body_center.x(), c.body_center.y()};
    fish["skin_impedance"] = c.fish.skin_impedance;
    fish["dipole"] = {{"position", {c.fish.dipole_position.x(), c.fish.dipole_position.y()}},
                      {"moment", {c.fish.dipole_moment.x(), c.fish.dipole_moment.y()}}};
    fish["sensors"] = c.fish.sensor_count;
    root["fish"] = fish;
    root["mesh"] = {{"body_nodes", c.body_nodes}, {"target_nodes", c.target_nodes}};
    if (c.target) {
      json t;
      t["shape"] = emit_shape(c.target->shape);
      t["position"] = {c.target->position.x(), c.target->position.y()};
      t["conductivity"] = c.target->conductivity;
      t["permittivity"] = c.target->permittivity;
      root["target"] = t;
    }
    json sp;
    sp["omega0"] = c.spectrum.omega0;
    if (!c.spectrum.list.empty()) {
      sp["list"] = c.spectrum.list;
    } else if (c.spectrum.repeated) {
      sp["count"] = c.spectrum.count;
      sp["repeat"] = c.spectrum.first;
    } else {
      sp["count"] = c.spectrum.count;
      sp["first"] = c.spectrum.first;
      sp["last"] = c.spectrum.last;
    }
    root["spectrum"] = sp;
    root["data"] = {{"source", c.data_source},
                    {"noise_stage",
                     c.noise_stage == NoiseStage::Raw ? "raw" : "postprocessed"}};
    root["imaging"] = {{"window", {{c.grid.xmin, c.grid.xmax}, {c.grid.ymin, c.grid.ymax}}},
                       {"resolution", {c.grid.nx, c.grid.ny}},
                       {"margin", c.grid.margin},
                       {"cap", c.grid.cap},
                       {"rank", c.projector_rank}};
    json noise;
    noise["zeta"] = c.zetas;
    noise["trials"] = c.trials;
    root["noise"] = noise;
  }

  if (c.kind == ExperimentKind::NoiseStats) {
    json s;
    switch (c.study.vary) {
      case StudyConfig::Vary::Frequencies:
        s["vary"] = "frequencies";
        s["freq_counts"] = c.study.freq_counts;
        break;
      case StudyConfig::Vary::Sensors:
        s["vary"] = "sensors";
        s["sensor_counts"] = c.study.sensor_counts;
        break;
      case StudyConfig::Vary::Distance:
        s["vary"] = "distance";
        s["distances"] = c.study.distances;
        break;
    }
    s["zetas"] = c.study.zetas;
    root["study"] = s;
  }

  if (c.kind == ExperimentKind::CharacterizeDisk ||
      c.kind == ExperimentKind::CharacterizeEllipse) {
    json ch;
    json rows = json::array();
    for (const auto& row : c.characterize.rows) {
      json r;
      r["shape"] = emit_shape(row.shape);
      r["conductivity"] = row.conductivity;
      r["permittivity"] = row.permittivity;
      rows.push_back(r);
    }
    ch["rows"] = rows;
    ch["init"] = {{"alpha", c.characterize.init_alpha},
                  {"conductivity", c.characterize.init_conductivity},
                  {"permittivity", c.characterize.init_permittivity}};
    ch["second_position"] = {c.characterize.position2.x(),
                             c.characterize.position2.y()};
    ch["locate"] = c.characterize.locate;
    ch["trace"] = c.characterize.trace;
    root["characterize"] = ch;
  }

  if (c.kind == ExperimentKind::Scaling) {
    root["physical"] = {
        {"voltage", c.physical.voltage},
        {"body_length", c.physical.body_length},
        {"fundamental_freq", c.physical.fundamental_freq},
        {"water_conductivity", c.physical.water_conductivity},
        {"organ_current", c.physical.organ_current},
        {"body_conductivity", c.physical.body_conductivity},
        {"skin_surface_conductivity", c.physical.skin_surface_conductivity},
        {"skin_thickness", c.physical.skin_thickness},
        {"permeability", c.physical.permeability},
        {"permittivity", c.physical.permittivity}};
  }

  return root.dump(2);
}

ExperimentConfig parse_config(const std::string& json_text,
                              const std::string& name) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < json_text.size(); ++i) {
      if (json_text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(name + ":" + std::to_string(line) + ":" +
                      std::to_string(col) + ": " + e.what());
  }
  ExperimentConfig c = build_config(root, name);
  c.canonical = serialize_config(c);
  c.hash = fnv1a64(c.canonical);
  return c;
}

}  // namespace efish
