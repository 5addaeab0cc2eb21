#pragma once

// JSON wire forms of the domain types, shared by session files and the HTTP
// service. Rects are pixel-space {x, y, w, h}; slots use their string names.

#include <json.hpp>

#include "pflp/edits.hpp"
#include "pflp/model.hpp"
#include "pflp/update.hpp"

namespace pflp {

void to_json(nlohmann::json& j, const Rect& r);
void from_json(const nlohmann::json& j, Rect& r);

void to_json(nlohmann::json& j, const FeaturePoint& f);
void from_json(const nlohmann::json& j, FeaturePoint& f);

void to_json(nlohmann::json& j, const LabelCandidate& c);
void from_json(const nlohmann::json& j, LabelCandidate& c);

void to_json(nlohmann::json& j, const Labeling& l);

void to_json(nlohmann::json& j, const StabilityReport& r);

void to_json(nlohmann::json& j, const EditDelta& d);
void from_json(const nlohmann::json& j, EditDelta& d);

// Short form for API responses: counts plus the touched ids.
nlohmann::json delta_summary(const EditDelta& d);

// Parses {"kind": "...", ...}. Throws InvalidInput for unknown kinds or
// missing fields.
Edit edit_from_json(const nlohmann::json& j);

}  // namespace pflp
