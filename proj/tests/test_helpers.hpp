#pragma once

#include "maser/domain.hpp"
#include "maser/error.hpp"
#include "maser/templates.hpp"

#include <doctest.h>

#include <filesystem>
#include <functional>
#include <random>
#include <string>

namespace test {

// Runs fn expecting a maser::Error; reports its code.
inline maser::ErrorCode error_code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const maser::Error& e) {
        return e.code();
    }
    FAIL("expected maser::Error, nothing was thrown");
    return maser::ErrorCode::IoError;
}

inline const maser::TemplateStore& templates() {
    static const maser::TemplateStore store =
        maser::TemplateStore::load_dir(MASER_TEMPLATES_DIR);
    return store;
}

inline std::string fixtures_dir() { return MASER_FIXTURES_DIR; }

// Fresh scratch directory under the build tree.
inline std::string scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("maser_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

inline maser::LegalElements sample_elements() {
    maser::LegalElements e;
    e.plaintiff_info = "李某，女，1990年5月12日出生，汉族，住上海市静安区南京西路100号";
    e.defendant_info = "张某，男，1985年3月2日出生，汉族，住上海市徐汇区漕溪北路45号";
    e.claim = "判令被告支付货款人民币50000元及利息，并承担本案诉讼费用。";
    e.case_detail = "2023年4月，原告与被告签订买卖合同，被告尚欠50000元未付。";
    e.evidence = "买卖合同一份、送货单三张、微信催款记录。";
    e.case_analysis = "法院认为，被告未按约付款构成违约。";
    e.legal_provisions = "《中华人民共和国民法典》第五百七十七条。";
    return e;
}

inline maser::Persona sample_persona() {
    maser::Persona p;
    p.traits.extraversion = maser::TraitLevel::High;
    p.traits.emotional_stability = maser::TraitLevel::Low;
    p.description = "A direct shop owner who wants the dispute settled quickly.";
    p.speaking_style = {"ordered", "concrete", "impatient"};
    p.interactivity = "asks pointed questions";
    return p;
}

// A complete transcript with `rounds` rounds; utterance texts are seeded so
// transcripts differ per seed.
inline maser::Transcript sample_transcript(int rounds, unsigned seed = 1) {
    std::mt19937 rng(seed);
    auto word = [&] {
        static const char* words[] = {"alpha", "bravo", "case", "delta", "echo",
                                      "facts", "golf",  "hotel", "india", "july"};
        return std::string(words[rng() % 10]);
    };
    maser::Transcript t;
    t.case_id = "case-" + std::to_string(seed);
    for (int i = 0; i < rounds; ++i) {
        maser::Round round;
        round.client = {maser::Role::Client, word() + " " + word(), {}, ""};
        round.client.committed = round.client.draft;
        round.lawyer = {maser::Role::Lawyer, word() + " " + word(), {}, ""};
        round.lawyer.committed = round.lawyer.draft;
        t.rounds.push_back(std::move(round));
    }
    t.ended_by = maser::EndReason::MaxTurns;
    t.complaint = "CIVIL COMPLAINT " + word();
    return t;
}

}  // namespace test
