#include "confl/analysis.hpp"
#include "confl/report.hpp"

#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

using namespace confl;

namespace {

IndexedTrs load(const std::string& name) {
    std::ifstream in(std::string(CORPUS_DIR) + "/" + name);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_trs(ss.str());
}

const std::vector<std::string> kCorpus = {
    "dxx.trs",      "fib.trs",     "gdg.trs",         "layered_hfxx.trs",
    "layered_not_overlay.trs",     "nkh.trs",         "nkh_ab.trs",
    "nkh_noc.trs",  "not_layered.trs",                "rank_c.trs",
    "rank_ff.trs",  "vhuet.trs"};

/// Reference decreasingness: try every split point for alpha, an optional
/// facing step right after it, and require the rest to drop below one of
/// the two peak labels.
bool side_oracle(const std::vector<int>& seq, int mine, int other) {
    for (std::size_t a = 0; a <= seq.size(); ++a) {
        bool alpha_ok = true;
        for (std::size_t k = 0; k < a; ++k) alpha_ok = alpha_ok && seq[k] < mine;
        if (!alpha_ok) continue;
        for (int take : {0, 1}) {
            std::size_t d0 = a + static_cast<std::size_t>(take);
            if (d0 > seq.size()) continue;
            if (take == 1 && seq[a] != other) continue;
            bool rest_ok = true;
            for (std::size_t k = d0; k < seq.size(); ++k)
                rest_ok = rest_ok && (seq[k] < mine || seq[k] < other);
            if (rest_ok) return true;
        }
    }
    return false;
}

bool decreasing_oracle(const std::vector<int>& I, const std::vector<int>& J, int i, int j,
                       bool context_has_vars) {
    if (context_has_vars) {
        for (int v : I)
            if (v >= i) return false;
        for (int v : J)
            if (v >= i) return false;
    }
    return side_oracle(I, i, j) && side_oracle(J, j, i);
}

} // namespace

TEST_CASE("decreasingness on hand-picked label sequences") {
    CHECK(check_decreasing({}, {}, 1, 1, false));
    CHECK(check_decreasing({1}, {}, 2, 1, false));   // facing then empty
    CHECK(check_decreasing({3}, {}, 2, 3, false));   // one facing j step
    CHECK(!check_decreasing({3, 3}, {}, 2, 3, false));
    CHECK(check_decreasing({1, 3, 1}, {2}, 2, 3, false));
    CHECK(check_decreasing({2}, {2}, 2, 2, false));  // facing on both sides
    CHECK(!check_decreasing({2, 2}, {}, 2, 2, false));
    // variables in the context force every label below the left peak label
    CHECK(check_decreasing({1}, {1}, 2, 3, true));
    CHECK(!check_decreasing({3}, {}, 2, 3, true));
    CHECK(!check_decreasing({}, {2}, 2, 3, true));
}

TEST_CASE("property: decreasingness agrees with the split-enumeration oracle") {
    std::mt19937 rng(60601);
    std::uniform_int_distribution<int> len(0, 5), val(0, 3), lab(0, 3), coin(0, 1);
    int agree_true = 0;
    for (int iter = 0; iter < 1500; ++iter) {
        std::vector<int> I(len(rng)), J(len(rng));
        for (int& v : I) v = val(rng);
        for (int& v : J) v = val(rng);
        int i = lab(rng), j = lab(rng);
        bool cv = coin(rng) == 1;
        bool got = check_decreasing(I, J, i, j, cv);
        CHECK(got == decreasing_oracle(I, J, i, j, cv));
        if (got) ++agree_true;
    }
    CHECK(agree_true > 200);
}

TEST_CASE("cyclic critical pairs are enumerated once per genuine overlap") {
    SUBCASE("motivating system has exactly one") {
        auto peaks = cyclic_critical_pairs(load("nkh.trs"));
        REQUIRE(peaks.size() == 1);
        const CyclicCriticalPeak& pk = peaks[0];
        CHECK(pk.outer_rule == 0);
        CHECK(pk.inner_rule == 1);
        CHECK(pk.pos.empty());
        CHECK(to_string(pk.left) == "a");
        CHECK(to_string(pk.right) == "b");
        CHECK(pk.unifier.crs.rules.size() == 2);
        CHECK(pk.solved.parameters.empty());
        CHECK(!pk.context_has_vars);
        CHECK(pk.label_i == 1);
        CHECK(pk.label_j == 1);
    }
    SUBCASE("indexed system yields three root overlaps in one orientation each") {
        auto peaks = cyclic_critical_pairs(load("vhuet.trs"));
        REQUIRE(peaks.size() == 3);
        for (const auto& pk : peaks) {
            CHECK(pk.pos.empty());
            CHECK(pk.outer_rule < pk.inner_rule);
        }
        CHECK(peaks[0].outer_rule == 0);
        CHECK(peaks[0].inner_rule == 1);
        CHECK(peaks[1].outer_rule == 0);
        CHECK(peaks[1].inner_rule == 2);
        CHECK(peaks[2].outer_rule == 1);
        CHECK(peaks[2].inner_rule == 2);
        // labels come from the explicit rule indexes
        CHECK(peaks[0].label_i == 2);
        CHECK(peaks[0].label_j == 2);
    }
    SUBCASE("proper-subterm overlaps keep both orientations") {
        auto peaks = cyclic_critical_pairs(load("not_layered.trs"));
        CHECK(peaks.size() == 2);
    }
    SUBCASE("no overlaps at all") {
        CHECK(cyclic_critical_pairs(load("rank_c.trs")).empty());
        CHECK(cyclic_critical_pairs(load("dxx.trs")).empty());
        CHECK(cyclic_critical_pairs(load("fib.trs")).empty());
    }
}

TEST_CASE("golden verdicts over the corpus") {
    struct Row {
        const char* file;
        Verdict verdict;
        std::size_t pairs;
    };
    const std::vector<Row> rows = {
        {"dxx.trs", Verdict::Maybe, 0},
        {"fib.trs", Verdict::Maybe, 0},
        {"gdg.trs", Verdict::Confluent, 1},
        {"layered_hfxx.trs", Verdict::NonConfluent, 1},
        {"layered_not_overlay.trs", Verdict::NonConfluent, 1},
        {"nkh.trs", Verdict::NonConfluent, 1},
        {"nkh_ab.trs", Verdict::Confluent, 1},
        {"nkh_noc.trs", Verdict::Confluent, 1},
        {"not_layered.trs", Verdict::NonConfluent, 2},
        {"rank_c.trs", Verdict::Confluent, 0},
        {"rank_ff.trs", Verdict::Maybe, 0},
        {"vhuet.trs", Verdict::Confluent, 3},
    };
    for (const Row& row : rows) {
        CAPTURE(row.file);
        AnalysisResult res = analyze(load(row.file));
        CHECK(res.verdict == row.verdict);
        CHECK(res.pairs.size() == row.pairs);
    }
}

TEST_CASE("the motivating system gets a verified non-confluence witness") {
    IndexedTrs trs = load("nkh.trs");
    AnalysisResult res = analyze(trs);
    REQUIRE(res.verdict == Verdict::NonConfluent);
    REQUIRE(res.pairs.size() == 1);
    const PairAnalysis& pa = res.pairs[0];
    CHECK(pa.realizability.status == RealizabilityStatus::Realizable);
    CHECK(pa.realizability.realizer.at("x") == Term::mk_app("g"));
    REQUIRE(pa.witness.has_value());
    CHECK(pa.witness->verified);
    CHECK(to_string(pa.witness->start) == "f(g,g)");
    std::set<std::string> nfs{to_string(pa.witness->nf_left), to_string(pa.witness->nf_right)};
    CHECK(nfs == std::set<std::string>{"a", "b"});
}

TEST_CASE("confluence through unrealizability of the cycle") {
    AnalysisResult res = analyze(load("gdg.trs"));
    REQUIRE(res.verdict == Verdict::Confluent);
    REQUIRE(res.pairs.size() == 1);
    CHECK(res.pairs[0].realizability.status == RealizabilityStatus::Unrealizable);
    CHECK(res.pairs[0].discharged);
    CHECK(!res.pairs[0].diagram.has_value());

    AnalysisResult noc = analyze(load("nkh_noc.trs"));
    CHECK(noc.verdict == Verdict::Confluent);
    REQUIRE(noc.pairs.size() == 1);
    CHECK(noc.pairs[0].realizability.status == RealizabilityStatus::Unrealizable);
}

TEST_CASE("confluence through decreasing diagrams with all pairs discharged") {
    AnalysisResult res = analyze(load("vhuet.trs"));
    REQUIRE(res.verdict == Verdict::Confluent);
    REQUIRE(res.pairs.size() == 3);
    for (const PairAnalysis& pa : res.pairs) {
        CHECK(pa.discharged);
        REQUIRE(pa.diagram.has_value());
        CHECK(check_decreasing(pa.diagram->I, pa.diagram->J, pa.peak.label_i, pa.peak.label_j,
                               pa.peak.context_has_vars));
    }
    // the third peak closes with an empty left side and one facing right step
    CHECK(res.pairs[2].diagram->left_steps.empty());
    CHECK(res.pairs[2].diagram->right_steps.size() == 1);
}

TEST_CASE("rank failures stop the analysis at MAYBE and name the rule") {
    AnalysisResult dxx = analyze(load("dxx.trs"));
    CHECK(dxx.verdict == Verdict::Maybe);
    CHECK(!dxx.rank_check.ok);
    CHECK(dxx.first_failure.find("rule 2") != std::string::npos);

    AnalysisResult ff = analyze(load("rank_ff.trs"));
    CHECK(ff.verdict == Verdict::Maybe);
    CHECK(ff.first_failure.find("rule 1") != std::string::npos);

    AnalysisResult fib = analyze(load("fib.trs"));
    CHECK(fib.verdict == Verdict::Maybe);
    CHECK(!fib.rank_check.ok);
}

TEST_CASE("assuming rank non-increase on request is recorded and changes the verdict") {
    IndexedTrs trs = load("dxx.trs");
    AnalysisConfig cfg;
    cfg.assume_rank_nonincreasing = true;
    AnalysisResult res = analyze(trs, cfg);
    CHECK(res.verdict == Verdict::Confluent);
    CHECK(res.rank_check.assumed);
    CHECK(report_text(res, trs).find("ASSUMED ON REQUEST") != std::string::npos);
    RevalidationResult rv = revalidate(res, trs, cfg);
    CHECK(rv.ok);
}

TEST_CASE("non-confluence is sound even without layering") {
    AnalysisResult res = analyze(load("not_layered.trs"));
    CHECK(!res.layering.layered);
    CHECK(res.verdict == Verdict::NonConfluent);
    bool verified = false;
    for (const PairAnalysis& pa : res.pairs)
        if (pa.witness && pa.witness->verified) verified = true;
    CHECK(verified);
}

TEST_CASE("an empty system and a single non-overlapping rule are confluent") {
    CHECK(analyze(parse_trs("(VAR x)\n(RULES\n)")).verdict == Verdict::Confluent);
    CHECK(analyze(parse_trs("(RULES g -> c(g))")).verdict == Verdict::Confluent);
}

TEST_CASE("starved search budgets degrade to MAYBE, never to a wrong verdict") {
    IndexedTrs trs = load("vhuet.trs");
    AnalysisConfig cfg;
    cfg.diagram_depth = 0;
    AnalysisResult res = analyze(trs, cfg);
    CHECK(res.verdict == Verdict::Maybe);
    CHECK(!res.first_failure.empty());
}

TEST_CASE("every corpus analysis revalidates from its own evidence") {
    for (const std::string& name : kCorpus) {
        CAPTURE(name);
        IndexedTrs trs = load(name);
        AnalysisResult res = analyze(trs);
        RevalidationResult rv = revalidate(res, trs);
        CAPTURE(rv.failures.empty() ? std::string() : rv.failures[0]);
        CHECK(rv.ok);
        CHECK(rv.failures.empty());
    }
}

TEST_CASE("revalidation rejects tampered evidence") {
    SUBCASE("witness with equal normal forms") {
        IndexedTrs trs = load("nkh.trs");
        AnalysisResult res = analyze(trs);
        res.pairs[0].witness->nf_right = res.pairs[0].witness->nf_left;
        CHECK(!revalidate(res, trs).ok);
    }
    SUBCASE("witness with a forged step") {
        IndexedTrs trs = load("nkh.trs");
        AnalysisResult res = analyze(trs);
        REQUIRE(!res.pairs[0].witness->to_left.empty());
        res.pairs[0].witness->to_left[0].result = Term::mk_app("b");
        CHECK(!revalidate(res, trs).ok);
    }
    SUBCASE("diagram with a wrong middle") {
        IndexedTrs trs = load("vhuet.trs");
        AnalysisResult res = analyze(trs);
        res.pairs[0].diagram->middle_left = Term::mk_app("g");
        CHECK(!revalidate(res, trs).ok);
    }
    SUBCASE("diagram with a non-decreasing label sequence") {
        IndexedTrs trs = load("vhuet.trs");
        AnalysisResult res = analyze(trs);
        res.pairs[0].diagram->I.assign(4, 99);
        CHECK(!revalidate(res, trs).ok);
    }
    SUBCASE("unrealizable flipped to realizable without joins") {
        IndexedTrs trs = load("gdg.trs");
        AnalysisResult res = analyze(trs);
        res.pairs[0].realizability.status = RealizabilityStatus::Realizable;
        CHECK(!revalidate(res, trs).ok);
    }
    SUBCASE("verdict inconsistent with the evidence") {
        IndexedTrs trs = load("nkh.trs");
        AnalysisResult res = analyze(trs);
        res.verdict = Verdict::Confluent;
        CHECK(!revalidate(res, trs).ok);
    }
}

TEST_CASE("reports round-trip the essentials") {
    IndexedTrs trs = load("nkh.trs");
    AnalysisResult res = analyze(trs);
    std::string text = report_text(res, trs);
    CHECK(text.find("NON-CONFLUENT") != std::string::npos);
    CHECK(text.find("f(g,g)") != std::string::npos);

    auto j = report_json(res, trs);
    CHECK(j["verdict"] == "NON-CONFLUENT");
    CHECK(j["exit_code"] == 1);
    REQUIRE(j["pairs"].size() == 1);
    CHECK(j["pairs"][0]["witness"]["verified"] == true);
    CHECK(j["layering"]["layered"] == true);
    // serialization is deterministic
    CHECK(j.dump(2) == report_json(analyze(trs), trs).dump(2));
}
