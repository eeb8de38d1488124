#pragma once

#include "confl/unify.hpp"

#include <optional>
#include <string>
#include <vector>

namespace confl {

/**
 * The rewrite system carried by a cyclic unifier: rules y -> v where y is a
 * variable treated as a constant. For systems read off a solved form the
 * left-hand sides are pairwise distinct, which makes the system orthogonal
 * and hence Church-Rosser.
 */
struct CyclicRewriteSystem {
    std::vector<Equation> rules;  // lhs is always a variable

    bool empty() const { return rules.empty(); }
    std::set<Symbol> lhs_vars() const;
    /// Same rules regardless of order.
    bool same_rules(const CyclicRewriteSystem& other) const;
};

/// Left-hand sides are distinct variables (constants), so there are no
/// critical pairs; returns false when that shape is violated.
bool crs_church_rosser_check(const CyclicRewriteSystem& crs);

/**
 * A cyclic unifier <eta, R>: a finite substitution together with a rewrite
 * system whose equational theory absorbs the cyclic equations. Terms s and t
 * are unified when s eta and t eta are convertible under R eta.
 */
struct CyclicUnifier {
    Substitution eta;
    CyclicRewriteSystem crs;
};

/// Reads the canonical cyclic unifier off a solved form: eta binds the
/// finite equations, the rewrite system is the cyclic block read as rules.
CyclicUnifier canonical_cyclic_unifier(const SolvedForm& sf);

/**
 * Congruence closure: are u and v equal in the equational theory of eqs,
 * with variables treated as constants? Complete for the subterm-closed
 * universe of u, v and the equations.
 */
bool congruent(const Term& u, const Term& v, const std::vector<Equation>& eqs);

struct VerifyResult {
    bool ok = false;
    std::vector<std::string> failures;
    /// The solution-set comparison between the problem alone and the problem
    /// extended with the rewrite rules is only refuted, never fully
    /// certified; this note says what was actually checked.
    std::string note;
};

/// Checks a claimed cyclic unifier of a problem: domain/range disciplines,
/// every equation closed under the congruence, and a refutation-only pass on
/// the solution-set condition.
VerifyResult verify_cyclic_unifier(const CyclicUnifier& cu, const UnifProblem& problem);

/**
 * Is `candidate` an instance of the canonical unifier of `basis`, i.e. does
 * some substitution rho on the parameters and cyclic variables turn the
 * canonical unifier into the candidate? Returns rho, or nothing. Both
 * unifiers must carry the same rewrite system.
 */
std::optional<Substitution> instance_of(const CyclicUnifier& candidate,
                                        const CyclicUnifier& canonical,
                                        const SolvedForm& basis);

} // namespace confl
