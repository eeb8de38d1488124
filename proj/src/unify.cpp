#include "confl/unify.hpp"

#include <algorithm>
#include <sstream>

namespace confl {

std::string to_string(const Equation& e) {
    return to_string(e.lhs) + " = " + to_string(e.rhs);
}

std::set<Symbol> UnifProblem::var_names_used() const {
    std::set<Symbol> out;
    for (const auto& e : eqs) {
        for (const auto& v : term_vars(e.lhs)) out.insert(v);
        for (const auto& v : term_vars(e.rhs)) out.insert(v);
    }
    return out;
}

const char* rule_name(UnifRule r) {
    switch (r) {
        case UnifRule::Remove: return "Remove";
        case UnifRule::Decomp: return "Decomp";
        case UnifRule::Conflict: return "Conflict";
        case UnifRule::Coalesce: return "Coalesce";
        case UnifRule::Merge: return "Merge";
        case UnifRule::Replace: return "Replace";
        case UnifRule::Choose: return "Choose";
        case UnifRule::Swap: return "Swap";
        case UnifRule::Merep: return "Merep";
    }
    return "?";
}

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

// Variables of every equation except the ones at the skipped indices.
std::set<Symbol> vars_of_rest(const UnifProblem& p, std::size_t skip1, std::size_t skip2 = npos) {
    std::set<Symbol> out;
    for (std::size_t i = 0; i < p.eqs.size(); ++i) {
        if (i == skip1 || i == skip2) continue;
        for (const auto& v : term_vars(p.eqs[i].lhs)) out.insert(v);
        for (const auto& v : term_vars(p.eqs[i].rhs)) out.insert(v);
    }
    return out;
}

bool occurs(const Symbol& x, const Term& t) { return contains_var(t, x); }

// The priority order used by the deterministic strategy.
constexpr UnifRule kPriority[] = {
    UnifRule::Remove,  UnifRule::Decomp, UnifRule::Conflict,
    UnifRule::Coalesce, UnifRule::Merge, UnifRule::Replace,
    UnifRule::Choose,  UnifRule::Swap,   UnifRule::Merep,
};

std::optional<RuleSite> find_site_basic(const UnifProblem& p, UnifRule r) {
    const auto& eqs = p.eqs;
    switch (r) {
        case UnifRule::Remove:
            for (std::size_t i = 0; i < eqs.size(); ++i)
                if (eqs[i].lhs == eqs[i].rhs) return RuleSite{r, i};
            return std::nullopt;
        case UnifRule::Decomp:
            for (std::size_t i = 0; i < eqs.size(); ++i)
                if (!eqs[i].lhs.var && !eqs[i].rhs.var && eqs[i].lhs.head == eqs[i].rhs.head)
                    return RuleSite{r, i};
            return std::nullopt;
        case UnifRule::Conflict:
            for (std::size_t i = 0; i < eqs.size(); ++i)
                if (!eqs[i].lhs.var && !eqs[i].rhs.var && eqs[i].lhs.head != eqs[i].rhs.head)
                    return RuleSite{r, i};
            return std::nullopt;
        case UnifRule::Coalesce:
            for (std::size_t i = 0; i < eqs.size(); ++i) {
                const auto& e = eqs[i];
                if (!e.lhs.var || !e.rhs.var || e.lhs == e.rhs) continue;
                auto rest = vars_of_rest(p, i);
                if (rest.count(e.lhs.head) && rest.count(e.rhs.head)) return RuleSite{r, i};
            }
            return std::nullopt;
        case UnifRule::Merge:
            for (std::size_t i = 0; i < eqs.size(); ++i) {
                if (!eqs[i].lhs.var || eqs[i].rhs.var) continue;
                for (std::size_t j = i + 1; j < eqs.size(); ++j) {
                    if (!eqs[j].lhs.var || eqs[j].rhs.var) continue;
                    if (eqs[i].lhs == eqs[j].lhs) return RuleSite{r, i, j};
                }
            }
            return std::nullopt;
        case UnifRule::Replace:
            for (std::size_t i = 0; i < eqs.size(); ++i) {
                const auto& e = eqs[i];
                if (!e.lhs.var || e.rhs.var) continue;
                if (occurs(e.lhs.head, e.rhs)) continue;
                if (vars_of_rest(p, i).count(e.lhs.head)) return RuleSite{r, i};
            }
            return std::nullopt;
        case UnifRule::Choose:
            for (std::size_t i = 0; i < eqs.size(); ++i) {
                const auto& e = eqs[i];
                if (!e.lhs.var || !e.rhs.var) continue;
                auto rest = vars_of_rest(p, i);
                if (!rest.count(e.rhs.head) && rest.count(e.lhs.head)) return RuleSite{r, i};
            }
            return std::nullopt;
        case UnifRule::Swap:
            for (std::size_t i = 0; i < eqs.size(); ++i)
                if (!eqs[i].lhs.var && eqs[i].rhs.var) return RuleSite{r, i};
            return std::nullopt;
        case UnifRule::Merep:
            for (std::size_t i = 0; i < eqs.size(); ++i) {
                const auto& ei = eqs[i];
                if (!ei.lhs.var || !ei.rhs.var) continue;
                for (std::size_t j = 0; j < eqs.size(); ++j) {
                    if (j == i) continue;
                    const auto& ej = eqs[j];
                    if (!ej.lhs.var || ej.rhs.var) continue;
                    if (!(ej.lhs == ei.rhs)) continue;
                    if (!occurs(ej.lhs.head, ej.rhs)) continue;
                    const Symbol& y = ei.lhs.head;
                    if (occurs(y, ej.rhs)) continue;
                    if (vars_of_rest(p, i, j).count(y)) continue;
                    return RuleSite{r, i, j};
                }
            }
            return std::nullopt;
    }
    return std::nullopt;
}

} // namespace

std::optional<RuleSite> find_rule_site(const UnifProblem& p, UnifRule r) {
    if (p.bottom) return std::nullopt;
    if (r == UnifRule::Merep) {
        // Last resort by its own side condition: only applicable when no
        // other rule is.
        for (UnifRule other : kPriority)
            if (other != UnifRule::Merep && find_site_basic(p, other)) return std::nullopt;
    }
    return find_site_basic(p, r);
}

std::optional<RuleSite> find_any_site(const UnifProblem& p) {
    if (p.bottom) return std::nullopt;
    for (UnifRule r : kPriority)
        if (auto site = find_site_basic(p, r)) return site;
    return std::nullopt;
}

UnifProblem apply_rule_at(const UnifProblem& p, const RuleSite& site) {
    UnifProblem q = p;
    auto& eqs = q.eqs;
    const std::size_t i = site.eq;
    switch (site.rule) {
        case UnifRule::Remove:
            eqs.erase(eqs.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        case UnifRule::Decomp: {
            Equation e = eqs[i];
            std::vector<Equation> sub;
            for (std::size_t k = 0; k < e.lhs.args.size(); ++k)
                sub.push_back({e.lhs.args[k], e.rhs.args[k]});
            eqs.erase(eqs.begin() + static_cast<std::ptrdiff_t>(i));
            eqs.insert(eqs.begin() + static_cast<std::ptrdiff_t>(i), sub.begin(), sub.end());
            break;
        }
        case UnifRule::Conflict:
            q.eqs.clear();
            q.bottom = true;
            break;
        case UnifRule::Coalesce: {
            Substitution s{{eqs[i].lhs.head, eqs[i].rhs}};
            for (std::size_t k = 0; k < eqs.size(); ++k) {
                if (k == i) continue;
                eqs[k].lhs = apply_subst(eqs[k].lhs, s);
                eqs[k].rhs = apply_subst(eqs[k].rhs, s);
            }
            break;
        }
        case UnifRule::Merge: {
            // Keep the smaller right-hand side as the binding; the equation
            // holding the larger one turns into smaller = larger in place.
            const std::size_t j = site.eq2;
            const Term& a = eqs[i].rhs;
            const Term& b = eqs[j].rhs;
            bool a_small = term_size(a) < term_size(b) ||
                           (term_size(a) == term_size(b) && !term_less(b, a));
            const Term s = a_small ? a : b;
            const Term t = a_small ? b : a;
            const std::size_t keep = a_small ? i : j;
            const std::size_t turn = a_small ? j : i;
            eqs[turn] = Equation{s, t};
            (void)keep;
            break;
        }
        case UnifRule::Replace: {
            Substitution s{{eqs[i].lhs.head, eqs[i].rhs}};
            for (std::size_t k = 0; k < eqs.size(); ++k) {
                if (k == i) continue;
                eqs[k].lhs = apply_subst(eqs[k].lhs, s);
                eqs[k].rhs = apply_subst(eqs[k].rhs, s);
            }
            break;
        }
        case UnifRule::Choose:
        case UnifRule::Swap:
            std::swap(eqs[i].lhs, eqs[i].rhs);
            break;
        case UnifRule::Merep:
            eqs[i].rhs = eqs[site.eq2].rhs;
            break;
    }
    return q;
}

UnifProblem apply_rule(const UnifProblem& p, UnifRule r) {
    auto site = find_rule_site(p, r);
    if (!site) throw NotApplicable(std::string(rule_name(r)) + " is not applicable");
    return apply_rule_at(p, *site);
}

UnifMeasure measure(const UnifProblem& p) {
    UnifMeasure m;
    if (p.bottom) return m;  // the failed problem is minimal
    auto all = p.var_names_used();
    std::size_t solved = 0;
    for (const auto& x : all) {
        for (std::size_t i = 0; i < p.eqs.size(); ++i) {
            const auto& e = p.eqs[i];
            if (!e.lhs.var || e.lhs.head != x) continue;
            if (occurs(x, e.rhs)) continue;
            if (!vars_of_rest(p, i).count(x)) {
                ++solved;
                break;
            }
        }
    }
    m.nu = all.size() - solved;
    for (const auto& e : p.eqs)
        m.sizes.push_back(std::max(term_size(e.lhs), term_size(e.rhs)));
    std::sort(m.sizes.begin(), m.sizes.end(), std::greater<int>());
    for (const auto& e : p.eqs) {
        if (e.rhs.var && !e.lhs.var) ++m.nvre;
        if (e.lhs.var && !e.rhs.var) ++m.nvle;
    }
    return m;
}

bool measure_less(const UnifMeasure& a, const UnifMeasure& b) {
    if (a.nu != b.nu) return a.nu < b.nu;
    // The multiset extension of < on sizes coincides with lexicographic
    // comparison of the descending-sorted sequences, shorter prefix smaller.
    if (a.sizes != b.sizes)
        return std::lexicographical_compare(a.sizes.begin(), a.sizes.end(),
                                            b.sizes.begin(), b.sizes.end());
    if (a.nvre != b.nvre) return a.nvre < b.nvre;
    return a.nvle < b.nvle;
}

std::size_t var_var_count(const UnifProblem& p) {
    std::size_t n = 0;
    for (const auto& e : p.eqs)
        if (e.lhs.var && e.rhs.var) ++n;
    return n;
}

std::set<Symbol> SolvedForm::finite_lhs() const {
    std::set<Symbol> out;
    for (const auto& e : finite_eqs) out.insert(e.lhs.head);
    return out;
}

std::set<Symbol> SolvedForm::cyclic_lhs() const {
    std::set<Symbol> out;
    for (const auto& e : cyclic_eqs) out.insert(e.lhs.head);
    return out;
}

SolvedForm classify(const UnifProblem& nf) {
    SolvedForm sf;
    sf.normal_form = nf;
    if (nf.bottom) {
        sf.bottom = true;
        return sf;
    }
    std::set<Symbol> lhs_set;
    for (const auto& e : nf.eqs) {
        if (!e.lhs.var)
            throw std::logic_error("not a solved form: non-variable left-hand side in " +
                                   to_string(e));
        if (!lhs_set.insert(e.lhs.head).second)
            throw std::logic_error("not a solved form: duplicate left-hand side " + e.lhs.head);
    }
    auto all = nf.var_names_used();
    for (const auto& v : all)
        if (!lhs_set.count(v)) sf.parameters.insert(v);
    for (const auto& e : nf.eqs) {
        bool finite = true;
        for (const auto& v : term_vars(e.rhs))
            if (lhs_set.count(v)) finite = false;
        if (finite)
            sf.finite_eqs.push_back(e);
        else
            sf.cyclic_eqs.push_back(e);
    }
    // Sanity for the cyclic block: right-hand sides are non-variables over
    // parameters and cyclic left-hand sides, and touch the latter.
    auto ylhs = sf.cyclic_lhs();
    for (const auto& e : sf.cyclic_eqs) {
        if (e.rhs.var)
            throw std::logic_error("solved form: cyclic equation with variable rhs " +
                                   to_string(e));
        bool touches = false;
        for (const auto& v : term_vars(e.rhs)) {
            if (ylhs.count(v)) touches = true;
            else if (!sf.parameters.count(v))
                throw std::logic_error("solved form: cyclic rhs uses finite variable in " +
                                       to_string(e));
        }
        if (!touches)
            throw std::logic_error("solved form: cyclic equation does not reach the cycle in " +
                                   to_string(e));
    }
    return sf;
}

SolvedForm solve(UnifProblem p, SolveTrace* trace) {
    if (trace) {
        trace->initial = p;
        trace->steps.clear();
    }
    while (auto site = find_any_site(p)) {
        p = apply_rule_at(p, *site);
        if (trace) trace->steps.push_back({*site, p});
    }
    return classify(p);
}

} // namespace confl
