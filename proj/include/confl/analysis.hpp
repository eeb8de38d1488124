#pragma once

#include "confl/cyclic.hpp"
#include "confl/layering.hpp"
#include "confl/subrewrite.hpp"
#include "confl/trs.hpp"
#include "confl/unify.hpp"

#include <optional>
#include <string>
#include <vector>

namespace confl {

struct AnalysisConfig {
    int eq_depth = 6;                     // equalization depth for sub-rewriting
    int diagram_depth = 8;                // search depth per diagram side
    int realizer_depth = 6;               // rewrite closure depth for realizer candidates
    std::size_t realizer_candidates = 200;
    int nf_depth = 12;                    // witness normal-form search depth
    std::size_t nf_nodes = 50000;
    bool assume_rank_nonincreasing = false;
    int jobs = 1;                         // corpus-level parallelism
};

/**
 * A cyclic critical peak: the inner rule's left-hand side overlaps the outer
 * rule's at `pos`, the overlap equation is solved, and the canonical cyclic
 * unifier instantiates the peak. `left` and `right` form the cyclic critical
 * pair; the two sources are convertible under the unifier's rewrite system.
 */
struct CyclicCriticalPeak {
    int outer_rule = 0;  // 0-based; its lhs hosts the overlap
    int inner_rule = 0;  // 0-based; renamed apart, fires at pos
    Position pos;
    SolvedForm solved;
    CyclicUnifier unifier;
    Term left;            // outer rhs instantiated
    Term right;           // outer lhs with the inner rhs planted at pos, instantiated
    Term left_source;     // outer lhs instantiated
    Term right_source;    // outer lhs with the inner lhs planted at pos, instantiated
    bool context_has_vars = false;  // outer lhs has variables outside pos
    int label_i = 1;      // outer rule index
    int label_j = 1;      // inner rule index
};

/// Every overlap of one left-hand side into another whose equation is
/// solvable. Root overlaps of two different rules are produced in one
/// orientation only; a rule never root-overlaps itself.
std::vector<CyclicCriticalPeak> cyclic_critical_pairs(const IndexedTrs& trs);

enum class RealizabilityStatus { Realizable, Unrealizable, Unknown };

const char* to_string(RealizabilityStatus s);

/// A joinability certificate for one rule y -> v of the unifier's rewrite
/// system under the realizer: both sides rewrite to the common `meet`.
struct JoinEvidence {
    Symbol var;
    Term lhs_inst;
    Term rhs_inst;
    Term meet;
    std::vector<LabelledStep> lhs_steps;
    std::vector<LabelledStep> rhs_steps;
};

struct RealizabilityReport {
    RealizabilityStatus status = RealizabilityStatus::Unknown;
    Substitution realizer;
    std::vector<JoinEvidence> joins;
    std::string reason;
};

/**
 * Decides realizability where possible: empty rewrite systems are realized
 * by the identity; a sound impossibility criterion detects cycles guarded by
 * inert symbols; otherwise a bounded search tries candidate instantiations
 * closed under rewriting. Unknown when the search exhausts its budget.
 */
RealizabilityReport check_realizability(const CyclicCriticalPeak& peak, const IndexedTrs& trs,
                                        const AnalysisConfig& cfg);

/**
 * The decreasing-diagram condition on index sequences for a peak labelled i
 * (left) and j (right): I splits as steps < i, then optionally one facing j
 * step, then steps < i or < j; J symmetrically with i and j swapped. When
 * the overlap context has variables, every index must additionally be < i.
 */
bool check_decreasing(const std::vector<int>& I, const std::vector<int>& J, int i, int j,
                      bool context_has_vars);

struct DiagramEvidence {
    std::vector<LabelledStep> left_steps;   // from peak.left
    std::vector<LabelledStep> right_steps;  // from peak.right
    Term middle_left;
    Term middle_right;   // congruent to middle_left modulo the unifier's rules
    std::vector<int> I;
    std::vector<int> J;
};

/// Bounded search for a cyclic-joinable decreasing diagram: both pair sides
/// rewrite to terms congruent modulo the unifier's rewrite system, with
/// decreasing label sequences. First hit in a deterministic order.
std::optional<DiagramEvidence> find_diagram(const CyclicCriticalPeak& peak,
                                            const IndexedTrs& trs, const AnalysisConfig& cfg,
                                            RankComputer* rc);

struct WitnessEvidence {
    Term start;
    Term nf_left;
    Term nf_right;
    std::vector<LabelledStep> to_left;
    std::vector<LabelledStep> to_right;
    bool verified = false;  // both reachable sets complete and disjoint
};

/// Instantiates the peak with the realizer and searches for two distinct
/// normal forms of one instance; verification separates their reachable
/// sets completely, making the non-confluence claim sound.
std::optional<WitnessEvidence> witness_nonconfluence(const CyclicCriticalPeak& peak,
                                                     const RealizabilityReport& real,
                                                     const IndexedTrs& trs,
                                                     const AnalysisConfig& cfg);

enum class Verdict { Confluent, NonConfluent, Maybe };

const char* to_string(Verdict v);
int verdict_exit_code(Verdict v);

struct PairAnalysis {
    CyclicCriticalPeak peak;
    RealizabilityReport realizability;
    std::optional<DiagramEvidence> diagram;
    std::optional<WitnessEvidence> witness;
    bool discharged = false;   // diagram found or unrealizable
    std::string obligation;    // what blocks this pair when undischarged
};

struct AnalysisResult {
    Verdict verdict = Verdict::Maybe;
    LayeringReport layering;
    RankCheckReport rank_check;
    std::vector<PairAnalysis> pairs;
    std::string first_failure;  // first unmet obligation for MAYBE
};

/**
 * Full pipeline: layering, rank non-increase, cyclic critical pairs, then
 * per pair a decreasing diagram, an unrealizability proof, or a
 * non-confluence witness. CONFLUENT needs every obligation met;
 * NON-CONFLUENT needs one verified witness (sound regardless of layering);
 * anything else is MAYBE.
 */
AnalysisResult analyze(const IndexedTrs& trs, const AnalysisConfig& cfg = {});

struct RevalidationResult {
    bool ok = true;
    std::vector<std::string> failures;
};

/// Re-checks recorded evidence by replay rather than search: every step
/// list, label, congruence, decreasingness split, realizer join and witness
/// is validated against the rules, as is verdict consistency.
RevalidationResult revalidate(const AnalysisResult& result, const IndexedTrs& trs,
                              const AnalysisConfig& cfg = {});

} // namespace confl
