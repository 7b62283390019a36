#pragma once

#include <map>
#include <string>

namespace maser {

// Prompt templates are data files, one "<name>.tmpl" per prompt, with
// {{placeholder}} substitution. Rendering rejects unresolved placeholders.
class TemplateStore {
public:
    TemplateStore() = default;

    // Loads every *.tmpl file under `dir` (non-recursive), keyed by stem.
    static TemplateStore load_dir(const std::string& dir);

    bool has(const std::string& name) const;

    // Throws Error{TemplateError} when the template is missing.
    const std::string& get(const std::string& name) const;

    void put(std::string name, std::string text);

    std::string render(const std::string& name,
                       const std::map<std::string, std::string>& values) const;

private:
    std::map<std::string, std::string> templates_;
};

// Substitutes {{key}} occurrences; throws Error{TemplateError} naming the
// first placeholder without a value.
std::string render_template(const std::string& text,
                            const std::map<std::string, std::string>& values);

}  // namespace maser
