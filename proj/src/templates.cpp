#include "maser/templates.hpp"

#include "maser/error.hpp"
#include "maser/jsonl.hpp"

#include <filesystem>

namespace fs = std::filesystem;

namespace maser {

TemplateStore TemplateStore::load_dir(const std::string& dir) {
    if (!fs::is_directory(dir)) {
        throw Error(ErrorCode::TemplateError, "template directory not found: " + dir);
    }
    TemplateStore store;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".tmpl") continue;
        store.templates_[entry.path().stem().string()] =
            read_text_file(entry.path().string());
    }
    return store;
}

bool TemplateStore::has(const std::string& name) const {
    return templates_.count(name) != 0;
}

const std::string& TemplateStore::get(const std::string& name) const {
    auto it = templates_.find(name);
    if (it == templates_.end()) {
        throw Error(ErrorCode::TemplateError, "missing template: " + name);
    }
    return it->second;
}

void TemplateStore::put(std::string name, std::string text) {
    templates_[std::move(name)] = std::move(text);
}

std::string TemplateStore::render(
    const std::string& name, const std::map<std::string, std::string>& values) const {
    return render_template(get(name), values);
}

std::string render_template(const std::string& text,
                            const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(text.size());
    size_t pos = 0;
    while (pos < text.size()) {
        size_t open = text.find("{{", pos);
        if (open == std::string::npos) {
            out.append(text, pos, std::string::npos);
            break;
        }
        size_t close = text.find("}}", open + 2);
        if (close == std::string::npos) {
            out.append(text, pos, std::string::npos);
            break;
        }
        out.append(text, pos, open - pos);
        const std::string key = text.substr(open + 2, close - open - 2);
        auto it = values.find(key);
        if (it == values.end()) {
            throw Error(ErrorCode::TemplateError, "unresolved placeholder: " + key);
        }
        out.append(it->second);
        pos = close + 2;
    }
    return out;
}

}  // namespace maser
