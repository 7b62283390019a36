#include "maser/json_util.hpp"

namespace maser {

std::optional<nlohmann::json> extract_json_object(const std::string& text) {
    const size_t open = text.find('{');
    if (open == std::string::npos) return std::nullopt;
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (size_t i = open; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '{') {
            ++depth;
        } else if (c == '}') {
            if (--depth == 0) {
                try {
                    return nlohmann::json::parse(text.substr(open, i - open + 1));
                } catch (const nlohmann::json::exception&) {
                    return std::nullopt;
                }
            }
        }
    }
    return std::nullopt;
}

}  // namespace maser
