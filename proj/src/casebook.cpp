#include "maser/casebook.hpp"

#include "maser/error.hpp"
#include "maser/json_util.hpp"
#include "maser/jsonl.hpp"
#include "maser/parallel.hpp"
#include "maser/strings.hpp"

#include <algorithm>
#include <filesystem>
#include <set>

namespace fs = std::filesystem;

namespace maser {

// ---------------------------------------------------------------------------
// Party parsing
// ---------------------------------------------------------------------------

const std::vector<std::string>& individual_field_keys() {
    static const std::vector<std::string> keys = {"name", "gender", "birthdate",
                                                  "ethnicity", "address"};
    return keys;
}

const std::vector<std::string>& company_field_keys() {
    static const std::vector<std::string> keys = {"name", "address", "representative"};
    return keys;
}

namespace {

const std::vector<std::pair<std::string, std::string>>& label_table() {
    // label -> canonical key; longest labels first so prefixes match greedily.
    static const std::vector<std::pair<std::string, std::string>> table = {
        {"法定代表人", "representative"},
        {"legal representative", "representative"},
        {"representative", "representative"},
        {"负责人", "representative"},
        {"date of birth", "birthdate"},
        {"出生日期", "birthdate"},
        {"birthdate", "birthdate"},
        {"公司名称", "name"},
        {"ethnicity", "ethnicity"},
        {"nationality", "ethnicity"},
        {"民族", "ethnicity"},
        {"国籍", "ethnicity"},
        {"住所地", "address"},
        {"现住址", "address"},
        {"address", "address"},
        {"住址", "address"},
        {"地址", "address"},
        {"gender", "gender"},
        {"性别", "gender"},
        {"姓名", "name"},
        {"名称", "name"},
        {"name", "name"},
    };
    return table;
}

const std::vector<std::string>& company_markers() {
    static const std::vector<std::string> markers = {
        "公司", "有限", "集团", "工厂", "中心", "银行",  "合作社",
        "Co.",  "Ltd",  "Inc",  "LLC",  "Company", "Corporation",
    };
    return markers;
}

bool is_company_name(const std::string& name) {
    for (const auto& marker : company_markers()) {
        if (contains(name, marker)) return true;
    }
    return false;
}

bool looks_like_date(const std::string& token) {
    if (contains(token, "出生") || contains(token, "生于")) return true;
    if (contains(token, "年") && (contains(token, "月") || contains(token, "日")))
        return true;
    // 1990-05-01 / 1990/5/1 / 1990.05.01
    int digits = 0;
    int seps = 0;
    for (char c : token) {
        if (c >= '0' && c <= '9') ++digits;
        else if (c == '-' || c == '/' || c == '.') ++seps;
        else return false;
    }
    return digits >= 6 && seps == 2;
}

bool is_gender_token(const std::string& token) {
    const std::string lower = to_lower_ascii(token);
    return token == "男" || token == "女" || lower == "male" || lower == "female";
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool starts_with(const std::string& s, const std::string& prefix) {
    return s.compare(0, prefix.size(), prefix) == 0;
}

std::string strip_prefixes(std::string s, const std::vector<std::string>& prefixes) {
    for (const auto& p : prefixes) {
        if (starts_with(s, p)) {
            s = trim(s.substr(p.size()));
            break;
        }
    }
    return s;
}

std::string strip_date_decorations(std::string s) {
    s = strip_prefixes(std::move(s), {"生于"});
    if (ends_with(s, "出生")) s = trim(s.substr(0, s.size() - std::string("出生").size()));
    return s;
}

// Splits a normalized descriptor on segment separators. Full-width commas
// and colons have already been folded to ASCII by normalize_field.
std::vector<std::string> segment(const std::string& normalized) {
    std::vector<std::string> out;
    std::string current;
    size_t i = 0;
    while (i < normalized.size()) {
        // "。" (U+3002) survives width folding; match its UTF-8 bytes.
        if (normalized.compare(i, 3, "\xE3\x80\x82") == 0) {
            out.push_back(trim(current));
            current.clear();
            i += 3;
            continue;
        }
        const char c = normalized[i];
        if (c == ',' || c == ';' || c == '\n') {
            out.push_back(trim(current));
            current.clear();
        } else {
            current.push_back(c);
        }
        ++i;
    }
    out.push_back(trim(current));
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const std::string& s) { return s.empty(); }),
              out.end());
    return out;
}

// "label: value" or "label value" (Chinese labels bind without a colon).
bool match_label(const std::string& seg, std::string& key, std::string& value) {
    const std::string lower = to_lower_ascii(seg);
    for (const auto& [label, canonical] : label_table()) {
        const std::string label_lower = to_lower_ascii(label);
        if (!starts_with(lower, label_lower)) continue;
        std::string rest = trim(seg.substr(label.size()));
        if (!rest.empty() && (rest[0] == ':' || rest[0] == '=')) {
            rest = trim(rest.substr(1));
        } else if (static_cast<unsigned char>(label[0]) < 0x80) {
            // ASCII labels require an explicit separator to avoid eating
            // ordinary words ("nameless ...").
            continue;
        }
        if (rest.empty()) return false;
        key = canonical;
        value = rest;
        return true;
    }
    return false;
}

}  // namespace

PartyFields parse_party(const std::string& info) {
    std::string text = normalize_field(info);
    text = strip_prefixes(text, {"原告:", "被告:", "原告", "被告"});
    {
        const std::string lower = to_lower_ascii(text);
        if (starts_with(lower, "plaintiff:")) text = trim(text.substr(10));
        else if (starts_with(lower, "defendant:")) text = trim(text.substr(10));
    }

    PartyFields party;
    std::vector<std::string> positional;
    for (const std::string& seg : segment(text)) {
        std::string key;
        std::string value;
        if (match_label(seg, key, value)) {
            if (key == "birthdate") value = strip_date_decorations(value);
            party.fields[key] = value;
        } else {
            positional.push_back(seg);
        }
    }

    // Positional fallback for whatever the labels did not cover.
    for (const std::string& token : positional) {
        if (is_gender_token(token)) {
            party.fields.emplace("gender", token);
        } else if (looks_like_date(token)) {
            party.fields.emplace("birthdate", strip_date_decorations(token));
        } else if (ends_with(token, "族")) {
            party.fields.emplace("ethnicity", token);
        } else if (starts_with(token, "住")) {
            party.fields.emplace(
                "address", strip_prefixes(token, {"住所地", "住址", "现住", "住"}));
        } else if (contains(token, "法定代表人")) {
            const size_t pos = token.find("法定代表人");
            std::string rep = trim(token.substr(pos + std::string("法定代表人").size()));
            if (!rep.empty() && rep[0] == ':') rep = trim(rep.substr(1));
            if (!rep.empty()) party.fields.emplace("representative", rep);
        } else if (!party.fields.count("name")) {
            party.fields["name"] = token;
        }
    }

    auto name_it = party.fields.find("name");
    if (name_it == party.fields.end() || name_it->second.empty()) {
        throw Error(ErrorCode::FieldParseError, "party descriptor has no name: " + info);
    }
    party.kind = (party.fields.count("representative") || is_company_name(name_it->second))
                     ? PartyKind::Company
                     : PartyKind::Individual;
    return party;
}

// ---------------------------------------------------------------------------
// JSON bindings
// ---------------------------------------------------------------------------

namespace {

void check_schema(const nlohmann::json& j, const char* expected) {
    if (j.contains("schema") && j.at("schema").get<std::string>() != expected) {
        throw Error(ErrorCode::SchemaError,
                    "expected schema " + std::string(expected) + ", got " +
                        j.at("schema").get<std::string>());
    }
}

}  // namespace

void to_json(nlohmann::json& j, const JudgmentDocument& v) {
    j = nlohmann::json{
        {"schema", JudgmentDocument::kSchema},
        {"doc_id", v.doc_id},
        {"body", v.body},
        {"year", v.year},
        {"cause_of_action", v.cause_of_action},
    };
}

void from_json(const nlohmann::json& j, JudgmentDocument& v) {
    check_schema(j, JudgmentDocument::kSchema);
    j.at("doc_id").get_to(v.doc_id);
    j.at("body").get_to(v.body);
    v.year = j.value("year", 0);
    v.cause_of_action = j.value("cause_of_action", "");
    if (v.body.empty()) {
        throw Error(ErrorCode::SchemaError, "judgment document has empty body");
    }
}

void to_json(nlohmann::json& j, const GroundTruthComplaint& v) {
    j = nlohmann::json{
        {"client_fields", v.client_fields},
        {"defendant_fields", v.defendant_fields},
        {"facts_reasons", v.facts_reasons},
        {"claims", v.claims},
        {"evidence", v.evidence},
    };
}

void from_json(const nlohmann::json& j, GroundTruthComplaint& v) {
    j.at("client_fields").get_to(v.client_fields);
    j.at("defendant_fields").get_to(v.defendant_fields);
    j.at("facts_reasons").get_to(v.facts_reasons);
    j.at("claims").get_to(v.claims);
    j.at("evidence").get_to(v.evidence);
    if (v.client_fields.empty() || v.defendant_fields.empty()) {
        throw Error(ErrorCode::SchemaError,
                    "ground truth requires non-empty client and defendant fields");
    }
}

void to_json(nlohmann::json& j, const MileScenario& v) {
    j = nlohmann::json{
        {"schema", MileScenario::kSchema},
        {"scenario_id", v.scenario_id},
        {"client_profile", v.client_profile},
        {"ground_truth", v.ground_truth},
        {"legal_attribute", v.legal_attribute},
        {"persona_source", v.persona_source},
    };
}

void from_json(const nlohmann::json& j, MileScenario& v) {
    check_schema(j, MileScenario::kSchema);
    j.at("scenario_id").get_to(v.scenario_id);
    j.at("client_profile").get_to(v.client_profile);
    j.at("ground_truth").get_to(v.ground_truth);
    j.at("legal_attribute").get_to(v.legal_attribute);
    v.persona_source = j.value("persona_source", "big5_pipeline");
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

namespace {

std::optional<LegalElements> parse_extraction_reply(const std::string& reply) {
    auto obj = extract_json_object(reply);
    if (!obj) return std::nullopt;
    LegalElements elements;
    for (const auto& name : legal_element_field_names()) {
        if (!obj->contains(name)) continue;  // absent -> empty -> MissingField later
        const auto& value = obj->at(name);
        if (!value.is_string()) return std::nullopt;
        *element_field(elements, name) = value.get<std::string>();
    }
    return elements;
}

}  // namespace

LegalElements extract_elements(const JudgmentDocument& doc, ChatBackend& backend,
                               const TemplateStore& templates,
                               const ExtractOptions& options) {
    if (doc.body.empty()) {
        throw Error(ErrorCode::PreconditionViolation, "document body is empty");
    }
    ChatRequest request;
    request.model_id = options.model_id;
    request.temperature = options.temperature;
    request.max_tokens = options.max_tokens;
    request.messages = {
        {MessageRole::User,
         templates.render("extraction", {{"document", doc.body},
                                         {"cause_of_action", doc.cause_of_action}})}};

    ChatResponse response = backend.complete(request);
    auto elements = parse_extraction_reply(response.content);
    if (!elements) {
        request.messages.push_back({MessageRole::Assistant, response.content});
        request.messages.push_back({MessageRole::User, templates.get("repair_json")});
        response = backend.complete(request);
        elements = parse_extraction_reply(response.content);
        if (!elements) {
            throw Error(ErrorCode::ExtractionParseError,
                        "extraction reply unparseable after repair retry (doc " +
                            doc.doc_id + ")");
        }
    }
    return validate_legal_elements(*elements);
}

GroundTruthComplaint derive_ground_truth(const LegalElements& elements,
                                         const std::string& complaint_template) {
    if (trim(complaint_template).empty()) {
        throw Error(ErrorCode::PreconditionViolation, "complaint template is empty");
    }
    const LegalElements validated = validate_legal_elements(elements);
    GroundTruthComplaint gt;
    gt.client_fields = parse_party(validated.plaintiff_info).fields;
    gt.defendant_fields = parse_party(validated.defendant_info).fields;
    gt.facts_reasons = validated.case_detail;
    gt.claims = validated.claim;
    gt.evidence = validated.evidence;
    return gt;
}

namespace {

std::string render_party_section(const std::map<std::string, std::string>& fields,
                                 const std::vector<std::string>& key_order) {
    std::vector<std::string> parts;
    for (const auto& key : key_order) {
        auto it = fields.find(key);
        if (it != fields.end()) parts.push_back(key + ": " + it->second);
    }
    // Keys outside the canonical order still render, after the known ones.
    for (const auto& [key, value] : fields) {
        if (std::find(key_order.begin(), key_order.end(), key) == key_order.end()) {
            parts.push_back(key + ": " + value);
        }
    }
    return join(parts, "; ");
}

}  // namespace

std::string render_ground_truth_complaint(const GroundTruthComplaint& gt,
                                          const std::string& complaint_template) {
    const bool company = gt.defendant_fields.count("representative") ||
                         (gt.defendant_fields.count("name") &&
                          is_company_name(gt.defendant_fields.at("name")));
    return render_template(
        complaint_template,
        {
            {"plaintiff_section",
             render_party_section(gt.client_fields, individual_field_keys())},
            {"defendant_section",
             render_party_section(gt.defendant_fields, company
                                                           ? company_field_keys()
                                                           : individual_field_keys())},
            {"claims", gt.claims},
            {"facts_reasons", gt.facts_reasons},
            {"evidence", gt.evidence},
        });
}

std::vector<MileScenario> load_scenarios(const std::string& path) {
    std::vector<MileScenario> scenarios = read_jsonl<MileScenario>(path);
    std::set<std::string> seen;
    for (const auto& scenario : scenarios) {
        if (!seen.insert(scenario.scenario_id).second) {
            throw Error(ErrorCode::DuplicateId,
                        "duplicate scenario id: " + scenario.scenario_id);
        }
    }
    return scenarios;
}

std::vector<JudgmentDocument> load_documents(const std::string& path,
                                             const RedactionHook& redact) {
    std::vector<JudgmentDocument> docs;
    if (fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path)) {
            if (entry.is_regular_file() && entry.path().extension() == ".txt") {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            JudgmentDocument doc;
            doc.doc_id = file.stem().string();
            doc.body = read_text_file(file.string());
            docs.push_back(std::move(doc));
        }
    } else if (fs::exists(path)) {
        if (path.size() > 6 && path.substr(path.size() - 6) == ".jsonl") {
            docs = read_jsonl<JudgmentDocument>(path);
        } else {
            JudgmentDocument doc;
            doc.doc_id = fs::path(path).stem().string();
            doc.body = read_text_file(path);
            docs.push_back(std::move(doc));
        }
    } else {
        throw Error(ErrorCode::IoError, "no such file or directory: " + path);
    }
    for (auto& doc : docs) {
        if (redact) doc.body = redact(doc.body);
        if (trim(doc.body).empty()) {
            throw Error(ErrorCode::SchemaError, "document " + doc.doc_id + " is empty");
        }
    }
    return docs;
}

std::vector<ExtractOutcome> extract_corpus(const std::vector<JudgmentDocument>& docs,
                                           ChatBackend& backend,
                                           const TemplateStore& templates,
                                           const ExtractOptions& options, int workers) {
    std::vector<ExtractOutcome> outcomes(docs.size());
    parallel_for(docs.size(), workers, [&](size_t i) {
        outcomes[i].doc_id = docs[i].doc_id;
        try {
            outcomes[i].elements = extract_elements(docs[i], backend, templates, options);
        } catch (const std::exception& e) {
            outcomes[i].error = e.what();
        }
    });
    return outcomes;
}

}  // namespace maser
