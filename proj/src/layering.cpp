#include "confl/layering.hpp"

#include "confl/unify.hpp"

#include <algorithm>

namespace confl {

namespace {

bool overlap_walk(const Term& u, const Term& g, Substitution& out) {
    if (u.var) {
        auto it = out.find(u.head);
        if (it != out.end()) return it->second == g;
        out.emplace(u.head, g);
        return true;
    }
    if (g.var) {
        auto it = out.find(g.head);
        if (it != out.end()) return it->second == u;
        out.emplace(g.head, u);
        return true;
    }
    if (u.head != g.head || u.args.size() != g.args.size()) return false;
    for (std::size_t i = 0; i < u.args.size(); ++i)
        if (!overlap_walk(u.args[i], g.args[i], out)) return false;
    return true;
}

} // namespace

std::optional<Substitution> linear_overlap(const Term& u, const Term& g) {
    Substitution s;
    if (!overlap_walk(u, g, s)) return std::nullopt;
    for (auto it = s.begin(); it != s.end();) {
        if (it->second.var && it->second.head == it->first)
            it = s.erase(it);
        else
            ++it;
    }
    return s;
}

namespace {

// Salts keep the two linearizations variable-disjoint.
constexpr unsigned kHostSalt = 1;
constexpr unsigned kGuestSalt = 2;

struct OfFailure {
    Position pos;    // position of the offending subterm inside v
    int rule = 0;    // 0-based ordinal of the overlapped left-hand side
};

std::optional<OfFailure> of_failure(const Term& v, const IndexedTrs& trs) {
    Term lv = linearize(v, kHostSalt).term;
    for (const auto& o : fpos(lv)) {
        const Term* sub = subterm_at(lv, o);
        for (std::size_t k = 0; k < trs.rules.size(); ++k) {
            Term lg = linearize(trs.rules[k].lhs, kGuestSalt).term;
            if (linear_overlap(*sub, lg)) return OfFailure{o, static_cast<int>(k)};
        }
    }
    return std::nullopt;
}

std::optional<std::string> sof_witness(const Term& u, const IndexedTrs& trs) {
    for (const auto& q : fpos(u)) {
        if (q.empty()) continue;
        const Term* sub = subterm_at(u, q);
        if (auto fail = of_failure(*sub, trs)) {
            const Term* inner = subterm_at(*sub, fail->pos);
            return "SOF(" + to_string(u) + ") fails: subterm " + to_string(*inner) +
                   " at position " + to_string(fail->pos) + " of " + to_string(*sub) +
                   " overlaps the left-hand side of rule " + std::to_string(fail->rule + 1);
        }
    }
    return std::nullopt;
}

} // namespace

bool is_of(const Term& v, const IndexedTrs& trs) { return !of_failure(v, trs); }

bool is_sof(const Term& u, const IndexedTrs& trs) { return !sof_witness(u, trs); }

LayeringReport check_dlo(const IndexedTrs& trs) {
    LayeringReport rep;
    for (std::size_t li = 0; li < trs.rules.size(); ++li) {
        Term host = linearize(trs.rules[li].lhs, kHostSalt).term;
        for (const auto& p : fpos(host)) {
            for (std::size_t gi = 0; gi < trs.rules.size(); ++gi) {
                if (li == gi && p.empty()) continue;  // a rule renames itself at the root
                Term guest = linearize(trs.rules[gi].lhs, kGuestSalt).term;
                if (!linear_overlap(*subterm_at(host, p), guest)) continue;
                OverlapSite site{static_cast<int>(li), p, static_cast<int>(gi)};
                rep.overlaps.push_back(site);
                if (!p.empty()) rep.overlay = false;
                const Term* host_sub = subterm_at(trs.rules[li].lhs, p);
                if (auto w = sof_witness(*host_sub, trs)) {
                    rep.layered = false;
                    rep.violations.push_back({site, *w});
                }
                if (auto w = sof_witness(trs.rules[gi].lhs, trs)) {
                    rep.layered = false;
                    rep.violations.push_back({site, *w});
                }
            }
        }
    }
    return rep;
}

RankComputer::RankComputer(const IndexedTrs& trs) : trs_(trs) {
    LayeringReport rep = check_dlo(trs_);
    if (!rep.layered) throw NotLayered(std::move(rep));
    init();
}

RankComputer::RankComputer(const IndexedTrs& trs, const LayeringReport& report) : trs_(trs) {
    if (!report.layered) throw NotLayered(report);
    init();
}

void RankComputer::init() {
    for (const auto& r : trs_.rules) patterns_.push_back(linearize(r.lhs).term);
}

int RankComputer::rank(const Term& t) { return compute(t); }

int RankComputer::rank(const Substitution& s) {
    int best = 0;
    for (const auto& [x, t] : s) best = std::max(best, compute(t));
    return best;
}

int RankComputer::compute(const Term& t) {
    if (t.var) return 0;
    auto it = memo_.find(t);
    if (it != memo_.end()) return it->second;
    int over = -1;
    for (const auto& pat : patterns_) {
        auto s = match(pat, t);
        if (!s) continue;
        int rs = 0;
        for (const auto& [x, b] : *s) rs = std::max(rs, compute(b));
        over = std::max(over, rs);
    }
    int result = 0;
    if (over >= 0) {
        result = 1 + over;
    } else {
        for (const auto& a : t.args) result = std::max(result, compute(a));
    }
    memo_.emplace(t, result);
    return result;
}

int rank(const Term& t, const IndexedTrs& trs) {
    RankComputer rc(trs);
    return rc.rank(t);
}

namespace {

// Strips the prefix `p` from `q`; callers guarantee p <= q.
Position strip_prefix(const Position& p, const Position& q) {
    return Position(q.begin() + static_cast<std::ptrdiff_t>(p.size()), q.end());
}

UnifProblem problem_with(std::vector<Equation> eqs) {
    UnifProblem prob;
    prob.eqs = std::move(eqs);
    prob.vars = prob.var_names_used();
    return prob;
}

} // namespace

RankCheckReport check_rank_nonincreasing(const IndexedTrs& trs) {
    RankCheckReport rep;
    const auto& rules = trs.rules;
    for (std::size_t gi = 0; gi < rules.size(); ++gi) {
        const Term& d = rules[gi].rhs;
        auto dpos = fpos(d);
        // (i) two redexes in an instance of d, the inner one strictly inside
        // the substitution part of the outer pattern.
        for (const auto& p : dpos) {
            for (std::size_t li = 0; li < rules.size(); ++li) {
                Term outer = linearize(rules[li].lhs, 101).term;
                auto outer_pos = fpos(outer);
                for (const auto& q : dpos) {
                    if (!position_lt(p, q)) continue;
                    Position o = strip_prefix(p, q);
                    if (std::find(outer_pos.begin(), outer_pos.end(), o) != outer_pos.end())
                        continue;  // q still inside the rigid pattern, not its substitution
                    for (std::size_t l2 = 0; l2 < rules.size(); ++l2) {
                        Term inner = linearize(rules[l2].lhs, 202).term;
                        SolvedForm sf = solve(problem_with(
                            {{*subterm_at(d, p), outer}, {*subterm_at(d, q), inner}}));
                        if (sf.bottom || sf.omega()) continue;
                        rep.ok = false;
                        rep.failures.push_back(
                            {static_cast<int>(gi), 1,
                             "an instance of the right-hand side carries a rule-" +
                                 std::to_string(li + 1) + " redex at position " + to_string(p) +
                                 " with a rule-" + std::to_string(l2 + 1) +
                                 " redex at position " + to_string(q) +
                                 " inside its substitution part"});
                        goto next_rule_i;  // one witness per rule is enough
                    }
                }
            }
        }
    next_rule_i:;
        // (ii) d can equal a proper subterm of a left-hand side l; then l
        // with that subterm generalized away must still be an instance of
        // some left-hand side.
        for (std::size_t li = 0; li < rules.size(); ++li) {
            Term host = linearize(rules[li].lhs, 303).term;
            for (const auto& p : fpos(host)) {
                if (p.empty()) continue;
                SolvedForm sf = solve(problem_with({{d, *subterm_at(host, p)}}));
                if (sf.bottom || sf.omega()) continue;
                Term holed = replace_at(host, p, Term::mk_var("x#hole"));
                bool subsumed = false;
                for (std::size_t l2 = 0; l2 < rules.size() && !subsumed; ++l2)
                    if (match(linearize(rules[l2].lhs, 404).term, holed)) subsumed = true;
                if (!subsumed) {
                    rep.ok = false;
                    Term display = replace_at(rules[li].lhs, p, Term::mk_var("_"));
                    rep.failures.push_back(
                        {static_cast<int>(gi), 2,
                         "an instance of the right-hand side equals the subterm at position " +
                             to_string(p) + " of the left-hand side of rule " +
                             std::to_string(li + 1) + ", and " + to_string(display) +
                             " is not an instance of any left-hand side"});
                }
            }
        }
    }
    return rep;
}

} // namespace confl
