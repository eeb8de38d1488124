#include "confl/cyclic.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace confl {

std::set<Symbol> CyclicRewriteSystem::lhs_vars() const {
    std::set<Symbol> out;
    for (const auto& r : rules) out.insert(r.lhs.head);
    return out;
}

bool CyclicRewriteSystem::same_rules(const CyclicRewriteSystem& other) const {
    auto key = [](const Equation& e) { return to_string(e); };
    std::vector<std::string> a, b;
    for (const auto& r : rules) a.push_back(key(r));
    for (const auto& r : other.rules) b.push_back(key(r));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

bool crs_church_rosser_check(const CyclicRewriteSystem& crs) {
    std::set<Symbol> seen;
    for (const auto& r : crs.rules) {
        if (!r.lhs.var) return false;
        if (!seen.insert(r.lhs.head).second) return false;
    }
    // Left-hand sides are pairwise distinct constants, so no left-hand side
    // overlaps another: the system is orthogonal, hence Church-Rosser.
    return true;
}

CyclicUnifier canonical_cyclic_unifier(const SolvedForm& sf) {
    CyclicUnifier cu;
    for (const auto& e : sf.finite_eqs)
        if (!(e.rhs.var && e.rhs.head == e.lhs.head)) cu.eta[e.lhs.head] = e.rhs;
    cu.crs.rules = sf.cyclic_eqs;
    return cu;
}

namespace {

struct CongruenceUniverse {
    std::vector<Term> terms;
    std::map<Term, int, TermLess> index;
    std::vector<int> parent;

    int add(const Term& t) {
        auto it = index.find(t);
        if (it != index.end()) return it->second;
        for (const auto& a : t.args) add(a);
        int id = static_cast<int>(terms.size());
        terms.push_back(t);
        index.emplace(t, id);
        parent.push_back(id);
        return id;
    }

    int find(int a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }

    void unite(int a, int b) { parent[find(a)] = find(b); }
};

} // namespace

bool congruent(const Term& u, const Term& v, const std::vector<Equation>& eqs) {
    CongruenceUniverse uni;
    int iu = uni.add(u);
    int iv = uni.add(v);
    for (const auto& e : eqs) uni.unite(uni.add(e.lhs), uni.add(e.rhs));
    // Precompute argument ids per term, then close under congruence.
    const int n = static_cast<int>(uni.terms.size());
    std::vector<std::vector<int>> argids(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (const auto& a : uni.terms[static_cast<std::size_t>(i)].args)
            argids[static_cast<std::size_t>(i)].push_back(uni.index.at(a));
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < n; ++i) {
            const Term& s = uni.terms[static_cast<std::size_t>(i)];
            if (s.var || s.args.empty()) continue;
            for (int j = i + 1; j < n; ++j) {
                if (uni.find(i) == uni.find(j)) continue;
                const Term& t = uni.terms[static_cast<std::size_t>(j)];
                if (t.var || t.head != s.head || t.args.size() != s.args.size()) continue;
                bool all = true;
                for (std::size_t k = 0; k < s.args.size() && all; ++k)
                    all = uni.find(argids[static_cast<std::size_t>(i)][k]) ==
                          uni.find(argids[static_cast<std::size_t>(j)][k]);
                if (all) {
                    uni.unite(i, j);
                    changed = true;
                }
            }
        }
    }
    return uni.find(iu) == uni.find(iv);
}

VerifyResult verify_cyclic_unifier(const CyclicUnifier& cu, const UnifProblem& problem) {
    VerifyResult res;
    res.note =
        "solution-set condition checked in the refuting direction only: adding the rules "
        "must not strip a finitely solvable problem of all solutions; full equivalence of "
        "the solution sets is not certified";
    const auto ybar = cu.crs.lhs_vars();
    const auto pvars = problem.var_names_used();
    for (const auto& r : cu.crs.rules)
        if (!r.lhs.var)
            res.failures.push_back("rewrite rule with non-variable left-hand side: " +
                                   to_string(r));
    if (!crs_church_rosser_check(cu.crs))
        res.failures.push_back("rewrite system is not orthogonal: duplicate left-hand sides");
    for (const auto& [x, t] : cu.eta) {
        if (ybar.count(x))
            res.failures.push_back("substitution binds rewrite-system variable " + x);
        if (!pvars.count(x))
            res.failures.push_back("substitution binds variable " + x + " outside the problem");
        for (const auto& v : term_vars(t)) {
            if (cu.eta.count(v))
                res.failures.push_back("substitution is not idempotent: " + v +
                                       " is bound and occurs in the binding of " + x);
            if (ybar.count(v))
                res.failures.push_back("binding of " + x + " mentions rewrite-system variable " +
                                       v);
        }
    }
    // Every equation of the problem must be closed under the congruence of
    // the instantiated rewrite system.
    std::vector<Equation> crs_eta;
    for (const auto& r : cu.crs.rules)
        crs_eta.push_back({r.lhs, apply_subst(r.rhs, cu.eta)});
    for (const auto& e : problem.eqs) {
        Term l = apply_subst(e.lhs, cu.eta);
        Term r = apply_subst(e.rhs, cu.eta);
        if (!congruent(l, r, crs_eta))
            res.failures.push_back("equation not closed under the congruence: " + to_string(e));
    }
    // Refuting pass on the solution sets: if the problem alone has a tree
    // solved form (finite solutions) but conjoined with the rules it fails,
    // the rules changed the solution set.
    if (!problem.bottom) {
        SolvedForm alone = solve(problem);
        if (!alone.bottom && !alone.omega()) {
            UnifProblem extended = problem;
            for (const auto& r : cu.crs.rules) {
                extended.eqs.push_back(r);
                for (const auto& v : term_vars(r.lhs)) extended.vars.insert(v);
                for (const auto& v : term_vars(r.rhs)) extended.vars.insert(v);
            }
            if (solve(extended).bottom)
                res.failures.push_back(
                    "the problem has finite solutions but conjoining the rules leaves none");
        }
    }
    res.ok = res.failures.empty();
    return res;
}

namespace {

// Matches pat against subj extending rho; identity bindings are kept during
// matching for consistency and stripped by the caller.
bool match_extend(const Term& pat, const Term& subj, Substitution& rho) {
    if (pat.var) {
        auto it = rho.find(pat.head);
        if (it != rho.end()) return it->second == subj;
        rho.emplace(pat.head, subj);
        return true;
    }
    if (subj.var || subj.head != pat.head || subj.args.size() != pat.args.size()) return false;
    for (std::size_t i = 0; i < pat.args.size(); ++i)
        if (!match_extend(pat.args[i], subj.args[i], rho)) return false;
    return true;
}

} // namespace

std::optional<Substitution> instance_of(const CyclicUnifier& candidate,
                                        const CyclicUnifier& canonical,
                                        const SolvedForm& basis) {
    if (!candidate.crs.same_rules(canonical.crs)) return std::nullopt;
    const auto xbar = basis.finite_lhs();
    Substitution rho;
    for (const auto& [k, t] : candidate.eta)
        if (!xbar.count(k)) rho[k] = t;
    for (const auto& e : basis.finite_eqs) {
        const Symbol& x = e.lhs.head;
        Term target = candidate.eta.count(x) ? candidate.eta.at(x) : Term::mk_var(x);
        if (!match_extend(e.rhs, target, rho)) return std::nullopt;
    }
    for (auto it = rho.begin(); it != rho.end();) {
        if (it->second.var && it->second.head == it->first)
            it = rho.erase(it);
        else
            ++it;
    }
    return rho;
}

} // namespace confl
