#include "pflp/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "pflp/candgen.hpp"
#include "pflp/errors.hpp"
#include "pflp/json_io.hpp"
#include "pflp/rng.hpp"

namespace pflp {
namespace {

using nlohmann::json;

// Fixed center for generated datasets.
constexpr GeoPoint kGridCenter{16.37, 48.21};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << text;
  if (!out) throw InvalidInput("write failed for " + path.string());
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw InvalidInput("parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

std::string key_of(const json& id, std::size_t index) {
  if (id.is_string()) return id.get<std::string>();
  if (id.is_number_integer()) return std::to_string(id.get<std::int64_t>());
  if (id.is_number()) return id.dump();
  return std::to_string(index);
}

FeaturePoint make_point(std::size_t index, std::string key, const json& name, double lon, double lat,
                        const json* weight) {
  if (!name.is_string() || name.get<std::string>().empty()) {
    throw InvalidInput("record " + std::to_string(index) + ": missing name");
  }
  if (!std::isfinite(lon) || lon < -180.0 || lon > 180.0 || !std::isfinite(lat) || std::abs(lat) > kMaxLatitude) {
    throw InvalidInput("record " + std::to_string(index) + ": coordinates out of range");
  }
  FeaturePoint f;
  f.key = std::move(key);
  f.name = name.get<std::string>();
  f.lon = lon;
  f.lat = lat;
  if (weight && !weight->is_null()) {
    if (!weight->is_number() || !(weight->get<double>() > 0.0)) {
      throw InvalidInput("record " + std::to_string(index) + ": weight must be a positive number");
    }
    f.base_weight = weight->get<double>();
  }
  return f;
}

void parse_geojson(const json& doc, LoadResult& out) {
  if (doc.value("type", "") != "FeatureCollection" || !doc.contains("features") || !doc["features"].is_array()) {
    throw InvalidInput("GeoJSON input must be a FeatureCollection");
  }
  if (doc.contains("name") && doc["name"].is_string()) out.dataset.name = doc["name"].get<std::string>();
  const auto& features = doc["features"];
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& feat = features[i];
    const json* geom = feat.contains("geometry") ? &feat["geometry"] : nullptr;
    const std::string type = geom && geom->is_object() ? geom->value("type", "") : "";
    if (type != "Point") {
      out.warnings.push_back("record " + std::to_string(i) + ": skipped " + (type.empty() ? "missing" : type) +
                             " geometry");
      continue;
    }
    const auto& coords = (*geom)["coordinates"];
    if (!coords.is_array() || coords.size() < 2 || !coords[0].is_number() || !coords[1].is_number()) {
      throw InvalidInput("record " + std::to_string(i) + ": bad Point coordinates");
    }
    static const json kNull;
    const json& props = feat.contains("properties") && feat["properties"].is_object() ? feat["properties"] : kNull;
    const json& name = props.is_object() && props.contains("name") ? props["name"] : kNull;
    const json* weight = props.is_object() && props.contains("weight") ? &props["weight"] : nullptr;
    const json& id = feat.contains("id") ? feat["id"] : (props.is_object() && props.contains("id") ? props["id"] : kNull);
    out.dataset.features.push_back(
        make_point(i, key_of(id, i), name, coords[0].get<double>(), coords[1].get<double>(), weight));
  }
}

void parse_simple(const json& doc, LoadResult& out) {
  if (!doc.is_object() || !doc.contains("features") || !doc["features"].is_array()) {
    throw InvalidInput("simple JSON input needs a 'features' array");
  }
  if (doc.contains("name") && doc["name"].is_string()) out.dataset.name = doc["name"].get<std::string>();
  if (doc.contains("zoom")) out.dataset.zoom = doc["zoom"].get<int>();
  if (doc.contains("position_model")) {
    const auto model = position_model_from_int(doc["position_model"].get<int>());
    if (!model) throw InvalidInput("position_model must be 4 or 8");
    out.dataset.position_model = *model;
  }
  const auto& features = doc["features"];
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& r = features[i];
    if (!r.is_object()) throw InvalidInput("record " + std::to_string(i) + ": not an object");
    static const json kNull;
    if (!r.contains("lon") || !r.contains("lat") || !r["lon"].is_number() || !r["lat"].is_number()) {
      throw InvalidInput("record " + std::to_string(i) + ": missing lon/lat");
    }
    const json& name = r.contains("name") ? r["name"] : kNull;
    const json* weight = r.contains("weight") ? &r["weight"] : nullptr;
    out.dataset.features.push_back(make_point(i, key_of(r.contains("id") ? r["id"] : kNull, i), name,
                                              r["lon"].get<double>(), r["lat"].get<double>(), weight));
  }
}

}  // namespace

std::optional<DatasetFormat> parse_dataset_format(std::string_view name) {
  if (name == "geojson") return DatasetFormat::GeoJson;
  if (name == "simple-json" || name == "json") return DatasetFormat::SimpleJson;
  return std::nullopt;
}

LoadResult parse_dataset(std::string_view text, std::optional<DatasetFormat> format, const std::string& fallback_name) {
  const json doc = parse_json(text);
  LoadResult out;
  out.dataset.name = fallback_name;
  if (!format) {
    format = doc.is_object() && doc.value("type", "") == "FeatureCollection" ? DatasetFormat::GeoJson
                                                                             : DatasetFormat::SimpleJson;
  }
  try {
    if (*format == DatasetFormat::GeoJson) {
      parse_geojson(doc, out);
    } else {
      parse_simple(doc, out);
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed dataset: ") + e.what());
  }
  if (out.dataset.features.empty()) throw InvalidInput("empty dataset");
  if (out.dataset.zoom < 0 || out.dataset.zoom > kMaxZoom) throw InvalidInput("zoom must be in [0, 22]");
  if (out.dataset.name.empty()) out.dataset.name = fallback_name;
  for (std::size_t i = 0; i < out.dataset.features.size(); ++i) {
    out.dataset.features[i].id = FeatureId(static_cast<std::uint32_t>(i));
  }
  return out;
}

LoadResult load_dataset(const std::filesystem::path& path, std::optional<DatasetFormat> format) {
  return parse_dataset(read_file(path), format, path.stem().string());
}

std::string dataset_to_json(const Dataset& dataset) {
  json features = json::array();
  for (const auto& f : dataset.features) {
    if (f.deleted) continue;
    features.push_back({{"id", f.key}, {"name", f.name}, {"lon", f.lon}, {"lat", f.lat}, {"weight", f.base_weight}});
  }
  const json doc = {{"name", dataset.name},
                    {"zoom", dataset.zoom},
                    {"position_model", static_cast<int>(dataset.position_model)},
                    {"features", features}};
  return doc.dump(2) + "\n";
}

void save_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  write_file(path, dataset_to_json(dataset));
}

Dataset generate_grid_dataset(int rows, int cols, double spacing_px, double jitter_px, int name_length,
                              std::uint64_t seed, int zoom) {
  if (rows < 1 || cols < 1) throw InvalidInput("rows and cols must be positive");
  if (!(spacing_px > 0.0) || !(jitter_px >= 0.0)) throw InvalidInput("spacing must be positive, jitter non-negative");
  if (name_length < 1) throw InvalidInput("name_length must be positive");
  if (zoom < 0 || zoom > kMaxZoom) throw InvalidInput("zoom must be in [0, 22]");

  Dataset d;
  d.name = "grid-" + std::to_string(rows) + "x" + std::to_string(cols) + "-" + std::to_string(seed);
  d.zoom = zoom;
  const Point center = project(kGridCenter.lon, kGridCenter.lat, zoom);
  Rng rng(seed);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      Point p{center.x + (c - (cols - 1) / 2.0) * spacing_px, center.y + (r - (rows - 1) / 2.0) * spacing_px};
      p.x += rng.uniform(-jitter_px, jitter_px);
      p.y += rng.uniform(-jitter_px, jitter_px);
      const GeoPoint g = unproject(p, zoom);
      FeaturePoint f;
      f.id = FeatureId(static_cast<std::uint32_t>(d.features.size()));
      f.key = std::to_string(f.id.value);
      for (int k = 0; k < name_length; ++k) f.name.push_back(static_cast<char>('A' + rng.index(26)));
      f.lon = g.lon;
      f.lat = g.lat;
      d.features.push_back(std::move(f));
    }
  }
  return d;
}

InstanceConfig instance_config(const Dataset& dataset) {
  InstanceConfig cfg;
  cfg.zoom = dataset.zoom;
  cfg.model = dataset.position_model;
  return cfg;
}

SessionSnapshot snapshot_of(const std::string& name, const Instance& instance, const Labeling& labeling) {
  SessionSnapshot s;
  s.name = name;
  s.config = instance.config();
  s.features = instance.features();
  s.candidates.assign(instance.candidates().begin(), instance.candidates().end());
  s.history = instance.history();
  s.labeling = labeling;
  return s;
}

std::string session_to_json(const SessionSnapshot& s) {
  const auto& c = s.config;
  const json doc = {
      {"schema_version", kSessionSchemaVersion},
      {"name", s.name},
      {"config",
       {{"zoom", c.zoom},
        {"position_model", static_cast<int>(c.model)},
        {"char_width_factor", c.metrics.char_width_factor},
        {"line_height_factor", c.metrics.line_height_factor},
        {"font_size", c.style.font_size},
        {"padding", c.style.padding},
        {"text_lines", c.style.text_lines},
        {"keep_fixed", c.keep_fixed},
        {"shrink_precedence", c.shrink_precedence}}},
      {"features", s.features},
      {"candidates", s.candidates},
      {"history", s.history},
      {"labeling", s.labeling},
  };
  return doc.dump(1) + "\n";
}

SessionSnapshot session_from_json(std::string_view text) {
  const json doc = parse_json(text);
  try {
    const int version = doc.at("schema_version").get<int>();
    if (version != kSessionSchemaVersion) {
      throw InvalidInput("unsupported session schema_version " + std::to_string(version));
    }
    SessionSnapshot s;
    s.name = doc.at("name").get<std::string>();
    const auto& c = doc.at("config");
    s.config.zoom = c.at("zoom").get<int>();
    const auto model = position_model_from_int(c.at("position_model").get<int>());
    if (!model) throw InvalidInput("position_model must be 4 or 8");
    s.config.model = *model;
    s.config.metrics.char_width_factor = c.at("char_width_factor").get<double>();
    s.config.metrics.line_height_factor = c.at("line_height_factor").get<double>();
    s.config.style.font_size = c.at("font_size").get<double>();
    s.config.style.padding = c.at("padding").get<double>();
    s.config.style.text_lines = c.at("text_lines").get<int>();
    s.config.keep_fixed = c.at("keep_fixed").get<bool>();
    s.config.shrink_precedence = c.at("shrink_precedence").get<bool>();
    s.features = doc.at("features").get<std::vector<FeaturePoint>>();
    s.candidates = doc.at("candidates").get<std::vector<LabelCandidate>>();
    s.history = doc.at("history").get<std::vector<EditDelta>>();
    for (const auto& id : doc.at("labeling").at("selected")) {
      s.labeling.selected.push_back(CandidateId(id.get<std::uint32_t>()));
    }
    s.labeling.proven_optimal = doc.at("labeling").value("proven_optimal", false);
    return s;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed session file: ") + e.what());
  }
}

void save_session(const std::filesystem::path& path, const SessionSnapshot& snapshot) {
  write_file(path, session_to_json(snapshot));
}

SessionSnapshot load_session(const std::filesystem::path& path) { return session_from_json(read_file(path)); }

Instance restore_instance(const SessionSnapshot& snapshot) {
  Instance instance(snapshot.features, snapshot.candidates, snapshot.config);
  instance.set_history(snapshot.history);
  Labeling check = snapshot.labeling;
  for (CandidateId v : check.selected) {
    if (!instance.graph().contains(v)) throw InvalidInput("session labeling refers to a missing candidate");
  }
  if (!validate_labeling(instance.graph(), check).empty()) throw InvalidInput("session labeling is not conflict-free");
  return instance;
}

}  // namespace pflp
