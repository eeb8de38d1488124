#pragma once

#include "confl/trs.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace confl {

/**
 * Unifies two terms that are both linear and variable-disjoint (callers
 * obtain them by linearizing with distinct salts). Plain simultaneous
 * descent; the result needs no composition and no occur-check.
 */
std::optional<Substitution> linear_overlap(const Term& u, const Term& g);

/// Overlap-free: no non-variable subterm of the linearized term unifies
/// with a linearized left-hand side of the system.
bool is_of(const Term& v, const IndexedTrs& trs);

/// Subterm overlap-free: every proper non-variable subterm is overlap-free.
bool is_sof(const Term& u, const IndexedTrs& trs);

/// An overlap of the inner rule's left-hand side into the outer rule's
/// left-hand side at the given position (indices are 0-based).
struct OverlapSite {
    int outer_rule = 0;
    Position pos;
    int inner_rule = 0;
};

struct LayeringViolation {
    OverlapSite site;
    std::string witness;  // names the subterm whose overlap-freeness fails
};

struct LayeringReport {
    bool layered = true;
    bool overlay = true;  // every overlap sits at the root
    std::vector<OverlapSite> overlaps;
    std::vector<LayeringViolation> violations;
};

/**
 * Layering check: wherever a linearized left-hand side overlaps another one
 * at position p, both the host subterm at p and the overlapping left-hand
 * side must be subterm overlap-free. A rule overlapping itself at the root
 * is a plain renaming and is not considered an overlap.
 */
LayeringReport check_dlo(const IndexedTrs& trs);

struct NotLayered : std::runtime_error {
    explicit NotLayered(LayeringReport rep)
        : std::runtime_error("system is not layered"), report(std::move(rep)) {}
    LayeringReport report;
};

/**
 * Rank of a term: the maximal number of nested linearized redexes along any
 * root-to-leaf path. Only defined for layered systems; the constructor
 * verifies layering unless handed a report that already did.
 */
class RankComputer {
public:
    explicit RankComputer(const IndexedTrs& trs);
    RankComputer(const IndexedTrs& trs, const LayeringReport& report);

    int rank(const Term& t);
    /// max over the bindings; 0 for the empty substitution.
    int rank(const Substitution& s);

private:
    IndexedTrs trs_;
    std::vector<Term> patterns_;  // linearized left-hand sides
    std::map<Term, int, TermLess> memo_;

    void init();
    int compute(const Term& t);
};

/// Convenience wrapper; checks layering on every call.
int rank(const Term& t, const IndexedTrs& trs);

struct RankCheckFailure {
    int rule = 0;       // 0-based ordinal of the rule whose rhs misbehaves
    int condition = 1;  // 1: nested redexes below a rhs redex; 2: rhs builds
                        //    an unsubsumed redex context
    std::string detail;
};

struct RankCheckReport {
    bool ok = true;
    bool assumed = false;  // set by callers that skip the check on request
    std::vector<RankCheckFailure> failures;
};

/**
 * Decidable sufficient condition for rank non-increasingness of a layered
 * system. For every rule g -> d it checks:
 *
 *  (i) no ground instance of d carries a redex at p and another redex at a
 *      position q strictly inside the substitution part of the first
 *      pattern (q = p.o with o outside the pattern's non-variable
 *      positions);
 * (ii) whenever d can equal (on some ground instance) the proper subterm at
 *      p of a left-hand side l, the context l with p replaced by a fresh
 *      variable is an instance of some left-hand side.
 *
 * The condition is sufficient, not necessary: systems can be rank
 * non-increasing while failing it.
 */
RankCheckReport check_rank_nonincreasing(const IndexedTrs& trs);

} // namespace confl
