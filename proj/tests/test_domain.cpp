#include "maser/domain.hpp"
#include "maser/error.hpp"
#include "maser/strings.hpp"

#include <doctest.h>

#include "test_helpers.hpp"

#include <random>

using namespace maser;

TEST_SUITE("domain") {

TEST_CASE("validate_legal_elements passes populated elements through trimmed") {
    LegalElements e = test::sample_elements();
    e.plaintiff_info = "  张某, 女 ";
    const LegalElements out = validate_legal_elements(e);
    CHECK(out.plaintiff_info == "张某, 女");
    CHECK(out.claim == e.claim);
}

TEST_CASE("validate_legal_elements reports every missing field") {
    LegalElements e = test::sample_elements();
    e.evidence = "";
    auto code = test::error_code_of([&] { validate_legal_elements(e); });
    CHECK(code == ErrorCode::MissingField);

    e.case_analysis = "   ";
    try {
        validate_legal_elements(e);
        FAIL("expected MissingField");
    } catch (const Error& err) {
        CHECK(std::string(err.what()).find("evidence") != std::string::npos);
        CHECK(std::string(err.what()).find("case_analysis") != std::string::npos);
    }
}

TEST_CASE("normalize_field folds widths and collapses whitespace") {
    CHECK(normalize_field("") == "");
    CHECK(normalize_field("１９９０年") == "1990年");
    CHECK(normalize_field("Li  Wei ") == "Li Wei");
    CHECK(normalize_field("ＡＢＣ：１") == "ABC:1");
    CHECK(normalize_field("a　b") == "a b");
    CHECK(normalize_field(" \t\n ") == "");
}

TEST_CASE("normalize_field is idempotent on arbitrary strings") {
    std::mt19937 rng(20240811);
    for (int iter = 0; iter < 500; ++iter) {
        std::string s;
        const int len = static_cast<int>(rng() % 40);
        for (int i = 0; i < len; ++i) {
            switch (rng() % 6) {
                case 0: s.push_back(static_cast<char>('a' + rng() % 26)); break;
                case 1: s.push_back(' '); break;
                case 2: s += "　"; break;
                case 3: {
                    // random full-width ASCII
                    unsigned cp = 0xFF01 + rng() % (0xFF5E - 0xFF01 + 1);
                    s += std::string{static_cast<char>(0xE0 | (cp >> 12)),
                                     static_cast<char>(0x80 | ((cp >> 6) & 0x3F)),
                                     static_cast<char>(0x80 | (cp & 0x3F))};
                    break;
                }
                case 4: s += "汉"; break;
                case 5: s.push_back(static_cast<char>(rng() % 256)); break;
            }
        }
        const std::string once = normalize_field(s);
        CHECK(normalize_field(once) == once);
    }
}

TEST_CASE("default agenda has seven ascending stages") {
    const Agenda agenda = default_agenda();
    REQUIRE(agenda.stages.size() == 7);
    for (size_t i = 0; i < agenda.stages.size(); ++i) {
        CHECK(agenda.stages[i].id == static_cast<int>(i) + 1);
        CHECK_FALSE(agenda.stages[i].title.empty());
    }
    CHECK(agenda.stages[4].title == "Litigation Costs");
    CHECK(contains(agenda.stages[0].instruction, "gender"));
}

TEST_CASE("legal sense catalog pins level descriptions") {
    const LegalSense l3 = make_legal_sense(3);
    CHECK(l3.level == 3);
    CHECK(contains(l3.description, "foundational legal knowledge"));
    CHECK(make_legal_sense(1).description != make_legal_sense(5).description);
    CHECK(test::error_code_of([] { make_legal_sense(6); }) == ErrorCode::InvalidLevel);
    CHECK(test::error_code_of([] { make_legal_sense(0); }) == ErrorCode::InvalidLevel);
}

TEST_CASE("verdict invariants") {
    CHECK_NOTHROW(check_verdict({VerdictStatus::Correct, ""}));
    CHECK_NOTHROW(check_verdict({VerdictStatus::Revise, "mention gender"}));
    CHECK(test::error_code_of([] {
              check_verdict({VerdictStatus::Correct, "surplus"});
          }) == ErrorCode::InvariantViolation);
    CHECK(test::error_code_of([] {
              check_verdict({VerdictStatus::Revise, ""});
          }) == ErrorCode::InvariantViolation);
}

TEST_CASE("transcript invariants") {
    Transcript t = test::sample_transcript(3);
    CHECK_NOTHROW(check_transcript(t, 5));

    SUBCASE("too many rounds") {
        CHECK(test::error_code_of([&] { check_transcript(t, 2); }) ==
              ErrorCode::TranscriptInvariantViolation);
    }
    SUBCASE("no complaint") {
        t.complaint.clear();
        CHECK(test::error_code_of([&] { check_transcript(t, 5); }) ==
              ErrorCode::TranscriptInvariantViolation);
    }
    SUBCASE("correct verdict but altered committed text") {
        t.rounds[1].client.committed = "tampered";
        CHECK(test::error_code_of([&] { check_transcript(t, 5); }) ==
              ErrorCode::TranscriptInvariantViolation);
    }
    SUBCASE("role swap breaks alternation") {
        t.rounds[0].client.role = Role::Lawyer;
        CHECK(test::error_code_of([&] { check_transcript(t, 5); }) ==
              ErrorCode::TranscriptInvariantViolation);
    }
}

TEST_CASE("distractor directives validate stage range on parse") {
    nlohmann::json j{{"stage_id", 8}, {"kind", "vagueness"}, {"target_hint", "x"}};
    CHECK(test::error_code_of([&] { j.get<DistractorDirective>(); }) ==
          ErrorCode::InvariantViolation);
}

TEST_CASE("domain types round-trip through json") {
    const Transcript t = test::sample_transcript(2, 42);
    const nlohmann::json j = t;
    CHECK(j.at("schema") == Transcript::kSchema);
    CHECK(j.get<Transcript>() == t);

    ClientProfile profile;
    profile.personal_info = "李某";
    profile.case_info = "claim text";
    profile.persona = test::sample_persona();
    profile.legal_sense = make_legal_sense(2);
    profile.distractor_plan = {{2, DistractorKind::Vagueness, "be vague about dates"}};
    const nlohmann::json pj = profile;
    CHECK(pj.get<ClientProfile>() == profile);

    nlohmann::json bad = pj;
    bad["schema"] = "maser.other.v1";
    CHECK(test::error_code_of([&] { bad.get<ClientProfile>(); }) ==
          ErrorCode::SchemaError);
}

}  // TEST_SUITE
