#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace confl {

using Symbol = std::string;

/**
 * First-order term: a variable leaf or an application of a function symbol
 * to argument terms (constants are zero-ary applications). Plain value
 * semantics; terms at the scale of rewrite rules are small, so structural
 * copies are cheaper than the bookkeeping of a shared store.
 */
struct Term {
    Symbol head;
    bool var = false;
    std::vector<Term> args;

    static Term mk_var(Symbol name) { return Term{std::move(name), true, {}}; }
    static Term mk_app(Symbol fn, std::vector<Term> as = {}) {
        return Term{std::move(fn), false, std::move(as)};
    }

    bool operator==(const Term&) const = default;
};

/// Path from the root: 1-based child indexes; the empty path is the root.
using Position = std::vector<int>;

/// Finite substitution; only non-identity bindings are stored, so the key
/// set is exactly the domain.
using Substitution = std::map<Symbol, Term>;

/// Total order on terms (vars before applications, then head, then args);
/// used everywhere a deterministic iteration order is needed.
bool term_less(const Term& a, const Term& b);

struct TermLess {
    bool operator()(const Term& a, const Term& b) const { return term_less(a, b); }
};
using TermSet = std::set<Term, TermLess>;

std::string to_string(const Term& t);
std::string to_string(const Position& p);
std::optional<Position> parse_position(const std::string& text);

/// Node count, variables included.
int term_size(const Term& t);
int term_depth(const Term& t);
std::set<Symbol> term_vars(const Term& t);
bool contains_var(const Term& t, const Symbol& v);

/// Subterm at a position, or nullptr when the position does not exist.
const Term* subterm_at(const Term& t, const Position& p);

/// Replaces the subterm at p; requires p to exist in t.
Term replace_at(const Term& t, const Position& p, const Term& sub);

/// Non-variable positions, in preorder (root first, children left to right).
std::vector<Position> fpos(const Term& t);

/// Positions of the given variable, in preorder.
std::vector<Position> var_positions(const Term& t, const Symbol& v);

bool position_leq(const Position& above, const Position& below);   // prefix order
bool position_lt(const Position& above, const Position& below);    // proper prefix
bool positions_disjoint(const Position& p, const Position& q);

Term apply_subst(const Term& t, const Substitution& s);

/**
 * One-sided matching: find s with pattern·s == subject. Subject variables
 * are treated as rigid constants; repeated pattern variables must bind
 * consistently.
 */
std::optional<Substitution> match(const Term& pattern, const Term& subject);

/**
 * A linear copy of a term in which the k-th occurrence (preorder) of each
 * variable x is renamed to a fresh variable x#k (or x#<salt>.k for a nonzero
 * salt); '#' is not valid in parsed identifiers, so fresh names cannot
 * collide with user input.
 */
struct LinearizedTerm {
    Term term;
    std::map<Symbol, Symbol> origin;                 // fresh name -> original
    std::map<Symbol, std::vector<Symbol>> occurrences; // original -> fresh names, preorder

    /// Maps every fresh variable back to its original, recovering the term.
    Term restore() const;
};

LinearizedTerm linearize(const Term& t, unsigned salt = 0);

} // namespace confl
