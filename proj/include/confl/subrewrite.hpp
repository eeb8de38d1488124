#pragma once

#include "confl/layering.hpp"
#include "confl/trs.hpp"

#include <utility>
#include <vector>

namespace confl {

/// A plain rewrite step with its label: the rank of the redex (or -1 when
/// rank labels are unavailable) and the index of the rule.
struct LabelledStep {
    Position pos;
    int rule = 0;   // 0-based offset into trs.rules
    int rank = -1;
    int index = 1;
    Term result;    // the whole term after the step
};

/**
 * One sub-rewriting step at position p with a rule l -> r: the linearized
 * left-hand side matches u at p by theta, and the copies of each repeated
 * variable are equalized by ordinary rewriting (strictly below the pattern)
 * to a common reduct sigma(x) before the rule fires.
 */
struct SubRewriteStep {
    Position pos;
    int rule = 0;
    Substitution theta;   // bindings of the linearized variable copies
    Substitution sigma;   // the equalized binding per original variable
    std::vector<LabelledStep> equalization;  // u ->* equalized, plain steps
    Term equalized;       // u with every variable copy rewritten to sigma
    Term result;          // equalized with the rule fired at pos
    int label_rank = -1;  // rank of u|_pos, when a rank computer was given
    int label_index = 1;
};

/**
 * All sub-rewriting steps of u with the given rule at position p whose
 * equalizations stay within `eq_depth` rewrite steps per variable copy.
 * Pass a RankComputer to fill in rank labels. Deterministic order; capped
 * at a fixed number of steps for non-linear rules with many common reducts.
 */
std::vector<SubRewriteStep> sub_rewrite(const Term& u, const IndexedTrs& trs, int rule,
                                        const Position& p, int eq_depth,
                                        RankComputer* rc = nullptr);

/// The redex decomposition carried by a step: the match of the linearized
/// pattern and the equalizer it was completed to.
std::pair<Substitution, Substitution> decompose_redex(const SubRewriteStep& step);

} // namespace confl
