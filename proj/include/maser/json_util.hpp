#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

namespace maser {

// Extracts and parses the first balanced {...} block in `text`. Tolerates
// prose or markdown fences around the object; nullopt when nothing parses.
std::optional<nlohmann::json> extract_json_object(const std::string& text);

}  // namespace maser
