#pragma once

#include "confl/term.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace confl {

struct Equation {
    Term lhs;
    Term rhs;
    bool operator==(const Equation&) const = default;
};

std::string to_string(const Equation& e);

/**
 * A unification problem: a queue of equations plus the set of names that are
 * variables. `bottom` marks the failed problem (no solutions at all, finite
 * or infinite).
 */
struct UnifProblem {
    std::vector<Equation> eqs;
    std::set<Symbol> vars;
    bool bottom = false;

    std::set<Symbol> var_names_used() const;  // variables occurring in eqs
};

/**
 * The nine transformation rules, listed in the strategy's priority order
 * (Merep is a last resort by its own side condition). Solving never needs an
 * occur-check failure rule: equations like x = c(x) are solutions over
 * infinite trees and end up in the cyclic part of the solved form.
 */
enum class UnifRule {
    Remove,    // s = s, P            => P
    Decomp,    // f(s..) = f(t..), P  => s1 = t1, ..., sn = tn, P
    Conflict,  // f(..) = g(..), P    => bottom                  (f != g)
    Coalesce,  // x = y, P            => x = y, P{x->y}          (x,y in Var(P))
    Merge,     // x = s, x = t, P     => x = s, s = t, P         (s,t not vars, |s| <= |t|)
    Replace,   // x = s, P            => x = s, P{x->s}          (x in Var(P) \ Var(s), s not var)
    Choose,    // y = x, P            => x = y, P                (x not in Var(P), y in Var(P))
    Swap,      // u = x, P            => x = u, P                (u not a var)
    Merep,     // y = x, x = s, P     => y = s, x = s, P         (x in Var(s), s not var,
               //                                                 y not in Var(s,P); last resort)
};

const char* rule_name(UnifRule r);

/// Where a rule fires: the primary equation index, and for the two-equation
/// rules (Merge, Merep) a secondary index.
struct RuleSite {
    UnifRule rule;
    std::size_t eq = 0;
    std::size_t eq2 = static_cast<std::size_t>(-1);
};

/// First place the rule applies under the deterministic scan (equations in
/// queue order, pairs lexicographically), or nothing.
std::optional<RuleSite> find_rule_site(const UnifProblem& p, UnifRule r);

/// Highest-priority applicable rule, or nothing if p is a normal form.
std::optional<RuleSite> find_any_site(const UnifProblem& p);

struct NotApplicable : std::runtime_error {
    explicit NotApplicable(const std::string& msg) : std::runtime_error(msg) {}
};

UnifProblem apply_rule_at(const UnifProblem& p, const RuleSite& site);

/// Applies the rule at its first applicable site; throws NotApplicable.
UnifProblem apply_rule(const UnifProblem& p, UnifRule r);

/**
 * Termination measure: <unsolved variables, equation sizes, var-rhs count,
 * var-lhs count>, ordered lexicographically with the multiset extension on
 * the sizes component. Every rule application except Merep strictly
 * decreases it; Merep strictly decreases the number of var=var equations
 * and shuts out every other rule.
 */
struct UnifMeasure {
    std::size_t nu = 0;              // unsolved variables
    std::vector<int> sizes;          // max(|s|,|t|) per equation, sorted descending
    std::size_t nvre = 0;            // rhs is a var, lhs is not
    std::size_t nvle = 0;            // lhs is a var, rhs is not
};

UnifMeasure measure(const UnifProblem& p);
bool measure_less(const UnifMeasure& a, const UnifMeasure& b);

/// var = var equations; the Merep phase decreases exactly this.
std::size_t var_var_count(const UnifProblem& p);

/**
 * Normal form split per the solved-form definition. The finite equations
 * x = u are the maximal set with Var(u) inside the parameters; every other
 * equation y = v has a non-variable v touching the cyclic left-hand sides.
 * A tree solved form has no cyclic equations; otherwise the form is cyclic
 * ("omega") and the problem has no finite solutions.
 */
struct SolvedForm {
    bool bottom = false;
    UnifProblem normal_form;
    std::vector<Equation> finite_eqs;
    std::vector<Equation> cyclic_eqs;
    std::set<Symbol> parameters;

    bool omega() const { return !cyclic_eqs.empty(); }
    std::set<Symbol> finite_lhs() const;
    std::set<Symbol> cyclic_lhs() const;
};

/// Splits an already-normal problem; throws std::logic_error if it is not a
/// solved form (lhs not all distinct variables, or a clause fails).
SolvedForm classify(const UnifProblem& normal_form);

struct SolveTrace {
    UnifProblem initial;
    std::vector<std::pair<RuleSite, UnifProblem>> steps;
};

/// Runs the deterministic strategy to the normal form and classifies it.
SolvedForm solve(UnifProblem p, SolveTrace* trace = nullptr);

} // namespace confl
