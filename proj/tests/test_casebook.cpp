#include "maser/casebook.hpp"

#include "maser/error.hpp"
#include "maser/persona.hpp"
#include "maser/jsonl.hpp"
#include "maser/strings.hpp"

#include <doctest.h>

#include "test_helpers.hpp"

#include <filesystem>
#include <fstream>

using namespace maser;
namespace fs = std::filesystem;

namespace {

ExtractOptions extract_options() {
    ExtractOptions o;
    o.model_id = "extract-model";
    return o;
}

JudgmentDocument sample_doc() {
    JudgmentDocument doc;
    doc.doc_id = "doc-1";
    doc.body = "民事判决书……";
    doc.year = 2020;
    doc.cause_of_action = "Contracts Dispute";
    return doc;
}

std::string well_formed_extraction() {
    return nlohmann::json(test::sample_elements()).dump();
}

MileScenario tiny_scenario(const std::string& id) {
    MileScenario s;
    s.scenario_id = id;
    s.client_profile = build_client_profile(test::sample_elements(),
                                            test::sample_persona(),
                                            make_legal_sense(2), {});
    s.ground_truth = derive_ground_truth(test::sample_elements(),
                                         test::templates().get("complaint_template"));
    s.legal_attribute = "Contracts Dispute";
    return s;
}

}  // namespace

TEST_SUITE("casebook") {

TEST_CASE("parse_party handles chinese positional descriptors") {
    const PartyFields p =
        parse_party("原告：李某，女，1990年5月12日出生，汉族，住上海市静安区南京西路100号");
    CHECK(p.kind == PartyKind::Individual);
    CHECK(p.fields.at("name") == "李某");
    CHECK(p.fields.at("gender") == "女");
    CHECK(p.fields.at("birthdate") == "1990年5月12日");
    CHECK(p.fields.at("ethnicity") == "汉族");
    CHECK(p.fields.at("address") == "上海市静安区南京西路100号");
}

TEST_CASE("parse_party handles companies and labeled fields") {
    const PartyFields company =
        parse_party("北京宏达商贸有限公司，住所地北京市朝阳区建国路88号，法定代表人王强");
    CHECK(company.kind == PartyKind::Company);
    CHECK(company.fields.at("name") == "北京宏达商贸有限公司");
    CHECK(company.fields.at("address") == "北京市朝阳区建国路88号");
    CHECK(company.fields.at("representative") == "王强");

    const PartyFields labeled = parse_party(
        "name: Li Wei; gender: female; birthdate: 1990-05-01; nationality: Han; "
        "address: 9 River Road");
    CHECK(labeled.kind == PartyKind::Individual);
    CHECK(labeled.fields.at("name") == "Li Wei");
    CHECK(labeled.fields.at("gender") == "female");
    CHECK(labeled.fields.at("birthdate") == "1990-05-01");
    CHECK(labeled.fields.at("ethnicity") == "Han");
    CHECK(labeled.fields.at("address") == "9 River Road");
}

TEST_CASE("parse_party requires a name") {
    CHECK(test::error_code_of([] { parse_party("，女，汉族"); }) ==
          ErrorCode::FieldParseError);
    CHECK(test::error_code_of([] { parse_party(""); }) == ErrorCode::FieldParseError);
}

TEST_CASE("extract_elements parses a well-formed reply field by field") {
    auto backend = ScriptedBackend::sequence({well_formed_extraction()});
    const LegalElements out =
        extract_elements(sample_doc(), *backend, test::templates(), extract_options());
    const LegalElements want = test::sample_elements();
    for (const auto& name : legal_element_field_names()) {
        CHECK(*element_field(out, name) == *element_field(want, name));
    }
    // The document body went into the rendered prompt.
    CHECK(contains(backend->seen()[0].messages[0].content, "民事判决书"));
}

TEST_CASE("extract_elements repairs once then raises ExtractionParseError") {
    SUBCASE("repair path recovers") {
        auto backend =
            ScriptedBackend::sequence({"garbled", well_formed_extraction()});
        CHECK_NOTHROW(extract_elements(sample_doc(), *backend, test::templates(),
                                       extract_options()));
        CHECK(backend->calls() == 2);
    }
    SUBCASE("malformed twice") {
        auto backend = ScriptedBackend::sequence({"garbled", "[1,2,3]"});
        CHECK(test::error_code_of([&] {
                  extract_elements(sample_doc(), *backend, test::templates(),
                                   extract_options());
              }) == ErrorCode::ExtractionParseError);
    }
}

TEST_CASE("extract_elements propagates missing fields without retry") {
    nlohmann::json partial = nlohmann::json(test::sample_elements());
    partial.erase("legal_provisions");
    auto backend = ScriptedBackend::sequence({partial.dump()});
    try {
        extract_elements(sample_doc(), *backend, test::templates(), extract_options());
        FAIL("expected MissingField");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingField);
        CHECK(std::string(e.what()).find("legal_provisions") != std::string::npos);
    }
    CHECK(backend->calls() == 1);
}

TEST_CASE("derive_ground_truth lifts fields deterministically") {
    const auto tmpl = test::templates().get("complaint_template");
    const GroundTruthComplaint gt = derive_ground_truth(test::sample_elements(), tmpl);
    CHECK(gt.client_fields.at("name") == "李某");
    CHECK(gt.client_fields.at("gender") == "女");
    CHECK(gt.defendant_fields.at("name") == "张某");
    CHECK(gt.claims == test::sample_elements().claim);
    CHECK(gt.facts_reasons == test::sample_elements().case_detail);
    CHECK(gt.evidence == test::sample_elements().evidence);

    // pure function: identical output on a second run
    CHECK(derive_ground_truth(test::sample_elements(), tmpl) == gt);

    SUBCASE("unnameable plaintiff raises FieldParseError") {
        LegalElements broken = test::sample_elements();
        broken.plaintiff_info = "女，汉族";
        CHECK(test::error_code_of([&] { derive_ground_truth(broken, tmpl); }) ==
              ErrorCode::FieldParseError);
    }
}

TEST_CASE("rendered ground-truth complaints re-parse to the same fields") {
    const auto tmpl = test::templates().get("complaint_template");
    const GroundTruthComplaint gt = derive_ground_truth(test::sample_elements(), tmpl);
    const std::string text = render_ground_truth_complaint(gt, tmpl);
    CHECK(contains(text, "CIVIL COMPLAINT"));
    const PartyFields round_trip =
        parse_party(text.substr(text.find("Plaintiff:"),
                                text.find("Defendant:") - text.find("Plaintiff:")));
    CHECK(round_trip.fields.at("name") == gt.client_fields.at("name"));
    CHECK(round_trip.fields.at("address") == gt.client_fields.at("address"));
}

TEST_CASE("load_scenarios validates ids and schema") {
    const std::string dir = test::scratch_dir("casebook_scenarios");
    const std::string path = dir + "/scenarios.jsonl";

    SUBCASE("five scenarios load and round-trip") {
        std::vector<MileScenario> scenarios;
        for (int i = 0; i < 5; ++i) {
            scenarios.push_back(tiny_scenario("s-" + std::to_string(i)));
        }
        scenarios[1].legal_attribute = "Labor Dispute";
        write_jsonl(scenarios, path);
        const auto loaded = load_scenarios(path);
        REQUIRE(loaded.size() == 5);
        CHECK(loaded == scenarios);

        // attribute histogram
        int contracts = 0;
        for (const auto& s : loaded) {
            if (s.legal_attribute == "Contracts Dispute") ++contracts;
        }
        CHECK(contracts == 4);
    }
    SUBCASE("duplicate ids are rejected") {
        write_jsonl(std::vector<MileScenario>{tiny_scenario("dup"), tiny_scenario("dup")},
                    path);
        CHECK(test::error_code_of([&] { load_scenarios(path); }) ==
              ErrorCode::DuplicateId);
    }
    SUBCASE("malformed line reports its line number") {
        std::ofstream out(path, std::ios::binary);
        out << nlohmann::json(tiny_scenario("ok")).dump() << "\n";
        out << "{ not json\n";
        out.close();
        try {
            load_scenarios(path);
            FAIL("expected SchemaError");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::SchemaError);
            CHECK(std::string(e.what()).find(":2") != std::string::npos);
        }
    }
}

TEST_CASE("load_documents reads directories with a redaction hook") {
    const std::string dir = test::scratch_dir("casebook_docs");
    std::ofstream(dir + "/b.txt") << "second document body";
    std::ofstream(dir + "/a.txt") << "first SECRET body";
    const auto docs = load_documents(dir, [](const std::string& body) {
        std::string out = body;
        const auto pos = out.find("SECRET");
        if (pos != std::string::npos) out.replace(pos, 6, "[redacted]");
        return out;
    });
    REQUIRE(docs.size() == 2);
    CHECK(docs[0].doc_id == "a");  // sorted order
    CHECK(contains(docs[0].body, "[redacted]"));
    CHECK(docs[1].doc_id == "b");
}

TEST_CASE("extract_corpus isolates per-document failures") {
    auto backend = ScriptedBackend::sequence(
        {well_formed_extraction(), "garbled", "also garbled"});
    JudgmentDocument good = sample_doc();
    JudgmentDocument bad = sample_doc();
    bad.doc_id = "doc-2";
    const auto outcomes = extract_corpus({good, bad}, *backend, test::templates(),
                                         extract_options(), 1);
    REQUIRE(outcomes.size() == 2);
    CHECK(outcomes[0].elements.has_value());
    CHECK(outcomes[0].error.empty());
    CHECK_FALSE(outcomes[1].elements.has_value());
    CHECK_FALSE(outcomes[1].error.empty());
}

}  // TEST_SUITE
