#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pflp/instance.hpp"
#include "pflp/model.hpp"

namespace pflp {

enum class DatasetFormat { GeoJson, SimpleJson };

std::optional<DatasetFormat> parse_dataset_format(std::string_view name);

struct Dataset {
  std::string name;
  std::vector<FeaturePoint> features;  // ids 0..n-1
  int zoom = 12;
  PositionModel position_model = PositionModel::Four;
};

struct LoadResult {
  Dataset dataset;
  std::vector<std::string> warnings;
};

// Parses a dataset; nullopt format picks GeoJSON for a FeatureCollection and
// simple JSON otherwise. Throws InvalidInput on malformed input, on records
// without a name (naming the record index) and when no point survives.
LoadResult parse_dataset(std::string_view text, std::optional<DatasetFormat> format = std::nullopt,
                         const std::string& fallback_name = "dataset");
LoadResult load_dataset(const std::filesystem::path& path, std::optional<DatasetFormat> format = std::nullopt);

// Simple JSON form; deleted features are left out.
std::string dataset_to_json(const Dataset& dataset);
void save_dataset(const std::filesystem::path& path, const Dataset& dataset);

// Jittered pixel grid around a fixed center, back-projected to lon/lat, with
// random uppercase names of a fixed length.
Dataset generate_grid_dataset(int rows, int cols, double spacing_px, double jitter_px, int name_length,
                              std::uint64_t seed, int zoom = 12);

InstanceConfig instance_config(const Dataset& dataset);

// Everything needed to resume editing: instance state, undo history and the
// current labeling.
struct SessionSnapshot {
  std::string name;
  InstanceConfig config;
  std::vector<FeaturePoint> features;
  std::vector<LabelCandidate> candidates;
  std::vector<EditDelta> history;
  Labeling labeling;
};

inline constexpr int kSessionSchemaVersion = 1;

SessionSnapshot snapshot_of(const std::string& name, const Instance& instance, const Labeling& labeling);
std::string session_to_json(const SessionSnapshot& snapshot);
// Throws InvalidInput on schema mismatch or an invalid labeling.
SessionSnapshot session_from_json(std::string_view text);
void save_session(const std::filesystem::path& path, const SessionSnapshot& snapshot);
SessionSnapshot load_session(const std::filesystem::path& path);
// Instance with history restored; the labeling is checked against it.
Instance restore_instance(const SessionSnapshot& snapshot);

}  // namespace pflp
