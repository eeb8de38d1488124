#pragma once

#include "confl/term.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace confl {

/**
 * Rewrite rule lhs -> rhs with an integer label index (several rules may
 * share an index). Invariants, enforced at parse/construction time: the lhs
 * is not a variable and every rhs variable occurs in the lhs.
 */
struct Rule {
    Term lhs;
    Term rhs;
    int index = 1;
};

struct IndexedTrs {
    std::vector<Rule> rules;
    std::map<Symbol, int> signature;  // function symbol -> arity, inferred
    std::set<Symbol> variables;       // declared variable names

    bool collapsing() const;          // some rhs is a variable
};

struct SourceLoc {
    int line = 0;
    int col = 0;
};

/// Parse/validation failure; `kind` is one of syntax-error, ill-formed-rule,
/// arity-conflict, unsupported-section.
struct TrsError : std::runtime_error {
    TrsError(std::string kind_, SourceLoc loc_, const std::string& msg)
        : std::runtime_error(msg), kind(std::move(kind_)), loc(loc_) {}
    std::string kind;
    SourceLoc loc;
};

/// Parses the COPS-style format: (VAR x y) (RULES l -> r  l ->2 r ...)
/// with optional (SIG (f 2) ...) and ignored (COMMENT ...) blocks.
IndexedTrs parse_trs(const std::string& text);

/// Parses a single term; names in `vars` become variables, everything else
/// a function symbol. Arities may be checked against `trs` when given.
Term parse_term(const std::string& text, const std::set<Symbol>& vars,
                const IndexedTrs* trs = nullptr);

std::string print_trs(const IndexedTrs& trs);

// ---- plain rewriting ----

/// Applies the rule at the given position, or nothing if the lhs does not
/// match there.
std::optional<Term> rewrite_step(const Term& t, const Rule& rule, const Position& p);

struct StepRef {
    Position pos;
    int rule;  // 0-based offset into trs.rules
    Term result;
};

/// All one-step reducts, ordered by (position, rule) for determinism.
std::vector<StepRef> one_step_reducts(const Term& t, const IndexedTrs& trs);

struct ReachResult {
    TermSet terms;   // includes the start term
    bool complete;   // true iff every reachable term was expanded within bounds
};

/// Breadth-first reachability with a depth bound (BFS layers) and a node
/// budget; `complete` reports whether the whole reachable set was explored.
ReachResult reachable(const Term& t, const IndexedTrs& trs, int depth_bound,
                      std::size_t node_bound);

struct NormalFormResult {
    std::vector<Term> normal_forms;  // sorted, deduplicated
    bool complete;                   // exploration exhausted the reachable set
};

NormalFormResult normal_forms(const Term& t, const IndexedTrs& trs,
                              int depth_bound = 12, std::size_t node_bound = 50000);

/// Reachability that also remembers how each term was first reached, so a
/// concrete derivation can be replayed from the start term.
struct PathMap {
    TermSet terms;
    bool complete = true;
    std::map<Term, std::pair<Term, StepRef>, TermLess> parent;  // absent for the start
};

PathMap reachable_paths(const Term& t, const IndexedTrs& trs, int depth_bound,
                        std::size_t node_bound);

/// The recorded derivation start ->* target; empty when target == start.
/// Requires target to be in the map.
std::vector<StepRef> replay_path(const PathMap& pm, const Term& start, const Term& target);

} // namespace confl
