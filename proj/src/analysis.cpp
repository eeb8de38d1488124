#include "confl/analysis.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

namespace confl {

const char* to_string(RealizabilityStatus s) {
    switch (s) {
        case RealizabilityStatus::Realizable: return "realizable";
        case RealizabilityStatus::Unrealizable: return "unrealizable";
        case RealizabilityStatus::Unknown: return "unknown";
    }
    return "?";
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Confluent: return "CONFLUENT";
        case Verdict::NonConfluent: return "NON-CONFLUENT";
        case Verdict::Maybe: return "MAYBE";
    }
    return "?";
}

int verdict_exit_code(Verdict v) {
    switch (v) {
        case Verdict::Confluent: return 0;
        case Verdict::NonConfluent: return 1;
        case Verdict::Maybe: return 2;
    }
    return 2;
}

namespace {

Rule rename_apart(const Rule& inner, const std::set<Symbol>& avoid) {
    std::set<Symbol> taken = avoid;
    for (const auto& v : term_vars(inner.lhs)) taken.insert(v);
    Substitution ren;
    for (const auto& v : term_vars(inner.lhs)) {
        if (!avoid.count(v)) continue;
        Symbol fresh = v;
        do fresh += "'";
        while (taken.count(fresh));
        taken.insert(fresh);
        ren[v] = Term::mk_var(fresh);
    }
    Rule out = inner;
    out.lhs = apply_subst(inner.lhs, ren);
    out.rhs = apply_subst(inner.rhs, ren);
    return out;
}

bool has_vars_outside(const Term& l, const Position& p) {
    for (const auto& v : term_vars(l))
        for (const auto& vp : var_positions(l, v))
            if (!position_leq(p, vp)) return true;
    return false;
}

// The unifier's rules with eta applied to right-hand sides (a no-op for
// canonical unifiers, kept for instantiated ones).
std::vector<Equation> crs_equations(const CyclicUnifier& cu) {
    std::vector<Equation> eqs;
    for (const auto& r : cu.crs.rules) eqs.push_back({r.lhs, apply_subst(r.rhs, cu.eta)});
    return eqs;
}

} // namespace

std::vector<CyclicCriticalPeak> cyclic_critical_pairs(const IndexedTrs& trs) {
    std::vector<CyclicCriticalPeak> out;
    for (std::size_t li = 0; li < trs.rules.size(); ++li) {
        const Rule& outer = trs.rules[li];
        auto outer_vars = term_vars(outer.lhs);
        for (const Position& p : fpos(outer.lhs)) {
            for (std::size_t gi = 0; gi < trs.rules.size(); ++gi) {
                if (p.empty()) {
                    if (li == gi) continue;  // a rule root-overlapping itself is a renaming
                    if (gi < li) continue;   // mirror of an already-produced root overlap
                }
                Rule inner = rename_apart(trs.rules[gi], outer_vars);
                UnifProblem prob;
                prob.eqs = {{*subterm_at(outer.lhs, p), inner.lhs}};
                prob.vars = prob.var_names_used();
                SolvedForm sf = solve(prob);
                if (sf.bottom) continue;
                CyclicCriticalPeak peak;
                peak.outer_rule = static_cast<int>(li);
                peak.inner_rule = static_cast<int>(gi);
                peak.pos = p;
                peak.solved = sf;
                peak.unifier = canonical_cyclic_unifier(sf);
                const Substitution& eta = peak.unifier.eta;
                peak.left = apply_subst(outer.rhs, eta);
                peak.left_source = apply_subst(outer.lhs, eta);
                peak.right_source = apply_subst(replace_at(outer.lhs, p, inner.lhs), eta);
                peak.right = apply_subst(replace_at(outer.lhs, p, inner.rhs), eta);
                peak.context_has_vars = has_vars_outside(outer.lhs, p);
                peak.label_i = outer.index;
                peak.label_j = trs.rules[gi].index;
                out.push_back(std::move(peak));
            }
        }
    }
    return out;
}

namespace {

constexpr std::size_t kSearchNodes = 2000;

void ground_subterms(const Term& t, TermSet& out) {
    if (!t.var && term_vars(t).empty()) out.insert(t);
    for (const auto& a : t.args) ground_subterms(a, out);
}

// Cycle guarded by inert symbols: if no rule side is headed by any symbol on
// the path from the root of v down to an occurrence of y, and the system is
// non-collapsing, then the inert top of a term never changes under
// rewriting, so no instance of y can ever be joined with the corresponding
// instance of v (the joint reduct would need two different inert tops).
std::optional<std::string> inert_cycle_reason(const std::vector<Equation>& rules_eta,
                                              const IndexedTrs& trs) {
    if (trs.collapsing()) return std::nullopt;
    std::set<Symbol> active;
    for (const auto& r : trs.rules) {
        active.insert(r.lhs.head);
        active.insert(r.rhs.head);
    }
    for (const auto& r : rules_eta) {
        if (!r.lhs.var) continue;
        const Symbol& y = r.lhs.head;
        for (const Position& q : var_positions(r.rhs, y)) {
            bool guarded = true;
            Symbol sample;
            const Term* cur = &r.rhs;
            for (std::size_t k = 0; k < q.size() && guarded; ++k) {
                if (active.count(cur->head))
                    guarded = false;
                else
                    sample = cur->head;
                cur = &cur->args[static_cast<std::size_t>(q[k] - 1)];
            }
            if (guarded)
                return "the cycle " + y + " -> " + to_string(r.rhs) +
                       " is not realizable: no term is joinable with itself planted under " +
                       sample +
                       ", which heads no rule side in a non-collapsing system, so the inert "
                       "top of a term is invariant under rewriting";
        }
    }
    return std::nullopt;
}

std::vector<LabelledStep> label_steps(const std::vector<StepRef>& steps, const IndexedTrs& trs) {
    std::vector<LabelledStep> out;
    for (const auto& sr : steps) {
        LabelledStep ls;
        ls.pos = sr.pos;
        ls.rule = sr.rule;
        ls.index = trs.rules[static_cast<std::size_t>(sr.rule)].index;
        ls.result = sr.result;
        out.push_back(std::move(ls));
    }
    return out;
}

} // namespace

RealizabilityReport check_realizability(const CyclicCriticalPeak& peak, const IndexedTrs& trs,
                                        const AnalysisConfig& cfg) {
    RealizabilityReport rep;
    if (peak.unifier.crs.empty()) {
        rep.status = RealizabilityStatus::Realizable;
        rep.reason = "no cyclic equations: the identity substitution realizes the pair";
        return rep;
    }
    std::vector<Equation> rules_eta = crs_equations(peak.unifier);
    if (auto reason = inert_cycle_reason(rules_eta, trs)) {
        rep.status = RealizabilityStatus::Unrealizable;
        rep.reason = *reason;
        return rep;
    }

    // bounded search: candidates are the ground subterms of the rules plus a
    // fresh constant, closed under rewriting, smallest first
    std::set<Symbol> vars;
    for (const auto& r : rules_eta) {
        vars.insert(r.lhs.head);
        for (const auto& v : term_vars(r.rhs)) vars.insert(v);
    }
    TermSet base;
    for (const auto& r : trs.rules) {
        ground_subterms(r.lhs, base);
        ground_subterms(r.rhs, base);
    }
    Symbol freshc = "u0";
    while (trs.signature.count(freshc) || trs.variables.count(freshc)) freshc += "'";
    base.insert(Term::mk_app(freshc));
    TermSet poolset;
    for (const auto& t : base) {
        auto r = reachable(t, trs, cfg.realizer_depth, kSearchNodes);
        poolset.insert(r.terms.begin(), r.terms.end());
    }
    std::vector<Term> pool(poolset.begin(), poolset.end());
    std::stable_sort(pool.begin(), pool.end(), [](const Term& a, const Term& b) {
        int sa = term_size(a), sb = term_size(b);
        return sa != sb ? sa < sb : term_less(a, b);
    });
    if (pool.size() > cfg.realizer_candidates) pool.resize(cfg.realizer_candidates);

    std::map<Term, TermSet, TermLess> reach_memo;
    auto reach_of = [&](const Term& t) -> const TermSet& {
        auto it = reach_memo.find(t);
        if (it == reach_memo.end())
            it = reach_memo.emplace(t, reachable(t, trs, cfg.realizer_depth, kSearchNodes).terms)
                     .first;
        return it->second;
    };
    long budget = 20000;
    auto joinable = [&](const Term& a, const Term& b) {
        --budget;
        const TermSet& ra = reach_of(a);
        const TermSet& rb = reach_of(b);
        for (const Term& t : ra)
            if (rb.count(t)) return true;
        return false;
    };

    // Variables with a self-contained cycle first: their domains shrink the
    // most, cutting the product early.
    std::vector<Symbol> order(vars.begin(), vars.end());
    auto self_ruled = [&](const Symbol& z) {
        for (const auto& r : rules_eta) {
            if (r.lhs.head != z) continue;
            auto rv = term_vars(r.rhs);
            rv.erase(z);
            if (rv.empty()) return true;
        }
        return false;
    };
    std::stable_sort(order.begin(), order.end(), [&](const Symbol& a, const Symbol& b) {
        bool sa = self_ruled(a), sb = self_ruled(b);
        return sa != sb ? sa : a < b;
    });
    std::map<Symbol, std::vector<Term>> domain;
    for (const auto& z : order) {
        std::vector<Term> dom;
        for (const Term& cand : pool) {
            bool ok = true;
            for (const auto& r : rules_eta) {
                if (r.lhs.head != z) continue;
                auto rv = term_vars(r.rhs);
                rv.erase(z);
                if (!rv.empty()) continue;  // involves other variables, checked later
                if (!joinable(cand, apply_subst(r.rhs, {{z, cand}}))) {
                    ok = false;
                    break;
                }
            }
            if (ok) dom.push_back(cand);
            if (budget <= 0) break;
        }
        domain[z] = std::move(dom);
    }

    Substitution assign;
    std::function<bool(std::size_t)> go = [&](std::size_t k) -> bool {
        if (budget <= 0) return false;
        if (k == order.size()) return true;
        const Symbol& z = order[k];
        for (const Term& cand : domain[z]) {
            assign[z] = cand;
            bool ok = true;
            for (const auto& r : rules_eta) {
                auto rv = term_vars(r.rhs);
                rv.insert(r.lhs.head);
                if (!rv.count(z)) continue;  // unaffected by this assignment
                bool ready = true;
                for (const auto& v : rv)
                    if (!assign.count(v)) ready = false;
                if (!ready) continue;
                if (rv.size() == 1 && *rv.begin() == z) continue;  // prefiltered above
                if (!joinable(assign.at(r.lhs.head), apply_subst(r.rhs, assign))) {
                    ok = false;
                    break;
                }
            }
            if (ok && go(k + 1)) return true;
            if (budget <= 0) break;
        }
        assign.erase(z);
        return false;
    };
    if (go(0)) {
        rep.status = RealizabilityStatus::Realizable;
        rep.realizer = assign;
        rep.reason = "bounded search found a realizer";
        for (const auto& r : rules_eta) {
            JoinEvidence je;
            je.var = r.lhs.head;
            je.lhs_inst = assign.at(r.lhs.head);
            je.rhs_inst = apply_subst(r.rhs, assign);
            PathMap pl = reachable_paths(je.lhs_inst, trs, cfg.realizer_depth, kSearchNodes);
            PathMap pr = reachable_paths(je.rhs_inst, trs, cfg.realizer_depth, kSearchNodes);
            bool found = false;
            for (const Term& t : pl.terms) {
                if (!pr.terms.count(t)) continue;
                if (found && !(term_size(t) < term_size(je.meet) ||
                               (term_size(t) == term_size(je.meet) && term_less(t, je.meet))))
                    continue;
                je.meet = t;
                found = true;
            }
            if (found) {
                je.lhs_steps = label_steps(replay_path(pl, je.lhs_inst, je.meet), trs);
                je.rhs_steps = label_steps(replay_path(pr, je.rhs_inst, je.meet), trs);
            } else {  // bounds shifted between search and replay; be honest
                rep.status = RealizabilityStatus::Unknown;
                rep.reason = "realizer found but join replay failed within bounds";
                rep.realizer.clear();
                rep.joins.clear();
                return rep;
            }
            rep.joins.push_back(std::move(je));
        }
        return rep;
    }
    rep.status = RealizabilityStatus::Unknown;
    rep.reason = budget <= 0 ? "bounded realizer search ran out of budget"
                             : "bounded realizer search exhausted " +
                                   std::to_string(pool.size()) + " candidates at depth " +
                                   std::to_string(cfg.realizer_depth);
    return rep;
}

namespace {

bool side_ok(const std::vector<int>& seq, int mine, int other) {
    std::size_t pos = 0;
    while (pos < seq.size() && seq[pos] < mine) ++pos;
    if (pos < seq.size() && seq[pos] == other) ++pos;  // the facing step
    while (pos < seq.size() && (seq[pos] < mine || seq[pos] < other)) ++pos;
    return pos == seq.size();
}

} // namespace

bool check_decreasing(const std::vector<int>& I, const std::vector<int>& J, int i, int j,
                      bool context_has_vars) {
    if (context_has_vars) {
        for (int k : I)
            if (k >= i) return false;
        for (int k : J)
            if (k >= i) return false;
    }
    return side_ok(I, i, j) && side_ok(J, j, i);
}

namespace {

// Sound pruning for congruence tests: closure only ever merges the root
// classes related by the equations themselves, so terms whose root tokens
// fall in different classes cannot be congruent.
struct TokenClasses {
    std::map<std::string, std::string> parent;

    static std::string token(const Term& t) { return (t.var ? "v:" : "f:") + t.head; }

    std::string find(std::string x) {
        parent.emplace(x, x);
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }

    void unite(const std::string& a, const std::string& b) { parent[find(a)] = find(b); }

    bool compatible(const Term& a, const Term& b) { return find(token(a)) == find(token(b)); }
};

struct DiagramNode {
    Term term;
    std::vector<LabelledStep> steps;
    std::vector<int> I;
    int depth = 0;
};

constexpr std::size_t kDiagramNodes = 4000;

std::vector<DiagramNode> expand_side(const Term& start, const IndexedTrs& trs,
                                     const AnalysisConfig& cfg, RankComputer* rc) {
    std::vector<DiagramNode> nodes{{start, {}, {}, 0}};
    TermSet seen{start};
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        if (nodes[q].depth >= cfg.diagram_depth) continue;
        DiagramNode cur = nodes[q];  // copy; the vector reallocates while growing
        for (StepRef& sr : one_step_reducts(cur.term, trs)) {
            if (seen.count(sr.result)) continue;
            if (nodes.size() >= kDiagramNodes) return nodes;
            LabelledStep ls;
            ls.pos = sr.pos;
            ls.rule = sr.rule;
            ls.index = trs.rules[static_cast<std::size_t>(sr.rule)].index;
            if (rc) ls.rank = rc->rank(*subterm_at(cur.term, sr.pos));
            ls.result = sr.result;
            DiagramNode nx;
            nx.term = sr.result;
            nx.steps = cur.steps;
            nx.steps.push_back(ls);
            nx.I = cur.I;
            nx.I.push_back(ls.index);
            nx.depth = cur.depth + 1;
            seen.insert(sr.result);
            nodes.push_back(std::move(nx));
        }
    }
    return nodes;
}

} // namespace

std::optional<DiagramEvidence> find_diagram(const CyclicCriticalPeak& peak,
                                            const IndexedTrs& trs, const AnalysisConfig& cfg,
                                            RankComputer* rc) {
    std::vector<Equation> eqs = crs_equations(peak.unifier);
    TokenClasses classes;
    for (const auto& e : eqs) classes.unite(TokenClasses::token(e.lhs), TokenClasses::token(e.rhs));
    auto lnodes = expand_side(peak.left, trs, cfg, rc);
    auto rnodes = expand_side(peak.right, trs, cfg, rc);
    std::vector<std::vector<const DiagramNode*>> lb(static_cast<std::size_t>(cfg.diagram_depth) + 1),
        rb(static_cast<std::size_t>(cfg.diagram_depth) + 1);
    for (const auto& n : lnodes) lb[static_cast<std::size_t>(n.depth)].push_back(&n);
    for (const auto& n : rnodes) rb[static_cast<std::size_t>(n.depth)].push_back(&n);
    for (int total = 0; total <= 2 * cfg.diagram_depth; ++total) {
        for (int dl = 0; dl <= total; ++dl) {
            int dr = total - dl;
            if (dl > cfg.diagram_depth || dr > cfg.diagram_depth) continue;
            for (const DiagramNode* ln : lb[static_cast<std::size_t>(dl)]) {
                for (const DiagramNode* rn : rb[static_cast<std::size_t>(dr)]) {
                    if (!classes.compatible(ln->term, rn->term)) continue;
                    if (!check_decreasing(ln->I, rn->I, peak.label_i, peak.label_j,
                                          peak.context_has_vars))
                        continue;
                    if (!congruent(ln->term, rn->term, eqs)) continue;
                    DiagramEvidence ev;
                    ev.left_steps = ln->steps;
                    ev.right_steps = rn->steps;
                    ev.middle_left = ln->term;
                    ev.middle_right = rn->term;
                    ev.I = ln->I;
                    ev.J = rn->I;
                    return ev;
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<WitnessEvidence> witness_nonconfluence(const CyclicCriticalPeak& peak,
                                                     const RealizabilityReport& real,
                                                     const IndexedTrs& trs,
                                                     const AnalysisConfig& cfg) {
    if (real.status != RealizabilityStatus::Realizable) return std::nullopt;
    Term a = apply_subst(peak.left_source, real.realizer);
    Term b = apply_subst(peak.right_source, real.realizer);
    std::vector<Term> starts{a};
    if (!(b == a)) starts.push_back(b);
    for (const Term& start : starts) {
        PathMap pm;
        pm.terms.insert(start);
        std::deque<std::pair<Term, int>> queue;
        queue.emplace_back(start, 0);
        std::vector<Term> nfs;
        while (!queue.empty() && nfs.size() < 2) {
            auto [cur, depth] = queue.front();
            queue.pop_front();
            auto steps = one_step_reducts(cur, trs);
            if (steps.empty()) {
                nfs.push_back(cur);
                continue;
            }
            if (depth >= cfg.nf_depth) continue;
            for (StepRef& sr : steps) {
                if (pm.terms.count(sr.result)) continue;
                if (pm.terms.size() >= cfg.nf_nodes) break;
                pm.terms.insert(sr.result);
                pm.parent.emplace(sr.result, std::make_pair(cur, sr));
                queue.emplace_back(std::move(sr.result), depth + 1);
            }
        }
        if (nfs.size() < 2) continue;
        WitnessEvidence ev;
        ev.start = start;
        ev.nf_left = nfs[0];
        ev.nf_right = nfs[1];
        ev.to_left = label_steps(replay_path(pm, start, ev.nf_left), trs);
        ev.to_right = label_steps(replay_path(pm, start, ev.nf_right), trs);
        auto ra = reachable(ev.nf_left, trs, cfg.nf_depth, cfg.nf_nodes);
        auto rb = reachable(ev.nf_right, trs, cfg.nf_depth, cfg.nf_nodes);
        bool disjoint = true;
        for (const Term& t : ra.terms)
            if (rb.terms.count(t)) disjoint = false;
        ev.verified = ra.complete && rb.complete && disjoint;
        if (ev.verified) return ev;
    }
    return std::nullopt;
}

namespace {

std::string pair_tag(const PairAnalysis& pa) {
    return "pair (" + std::to_string(pa.peak.outer_rule + 1) + "," +
           std::to_string(pa.peak.inner_rule + 1) + ") at " + to_string(pa.peak.pos);
}

} // namespace

AnalysisResult analyze(const IndexedTrs& trs, const AnalysisConfig& cfg) {
    AnalysisResult res;
    res.layering = check_dlo(trs);
    if (res.layering.layered) {
        if (cfg.assume_rank_nonincreasing) {
            res.rank_check.ok = true;
            res.rank_check.assumed = true;
        } else {
            res.rank_check = check_rank_nonincreasing(trs);
        }
    } else {
        res.rank_check.ok = false;  // rank is undefined without layering
    }
    std::optional<RankComputer> rc;
    if (res.layering.layered) rc.emplace(trs, res.layering);

    for (auto& peak : cyclic_critical_pairs(trs)) {
        PairAnalysis pa;
        pa.peak = std::move(peak);
        pa.realizability = check_realizability(pa.peak, trs, cfg);
        pa.diagram = find_diagram(pa.peak, trs, cfg, rc ? &*rc : nullptr);
        pa.discharged = pa.diagram.has_value() ||
                        pa.realizability.status == RealizabilityStatus::Unrealizable;
        if (!pa.discharged && pa.realizability.status == RealizabilityStatus::Realizable)
            pa.witness = witness_nonconfluence(pa.peak, pa.realizability, trs, cfg);
        if (!pa.discharged) {
            pa.obligation = "no decreasing diagram within depth " +
                            std::to_string(cfg.diagram_depth) + "; realizability " +
                            std::string(to_string(pa.realizability.status)) +
                            (pa.witness ? "; non-confluence witness found"
                                        : "; no non-confluence witness within bounds");
        }
        res.pairs.push_back(std::move(pa));
    }

    bool witnessed = false;
    for (const auto& pa : res.pairs)
        if (pa.witness && pa.witness->verified) witnessed = true;
    bool all_discharged = true;
    for (const auto& pa : res.pairs)
        if (!pa.discharged) all_discharged = false;

    if (witnessed) {
        res.verdict = Verdict::NonConfluent;
    } else if (res.layering.layered && res.rank_check.ok && all_discharged) {
        res.verdict = Verdict::Confluent;
    } else {
        res.verdict = Verdict::Maybe;
        if (!res.layering.layered) {
            res.first_failure =
                "not layered: " + (res.layering.violations.empty()
                                       ? std::string("overlap structure violates layering")
                                       : res.layering.violations.front().witness);
        } else if (!res.rank_check.ok) {
            if (res.rank_check.failures.empty()) {
                res.first_failure = "rank non-increase could not be established";
            } else {
                const auto& f = res.rank_check.failures.front();
                res.first_failure = "rank non-increase check failed for rule " +
                                    std::to_string(f.rule + 1) + ", condition (" +
                                    (f.condition == 1 ? "i" : "ii") + "): " + f.detail;
            }
        } else {
            for (const auto& pa : res.pairs) {
                if (pa.discharged) continue;
                res.first_failure = pair_tag(pa) + ": " + pa.obligation;
                break;
            }
        }
    }
    return res;
}

namespace {

void expect(RevalidationResult& out, bool cond, const std::string& what) {
    if (!cond) {
        out.ok = false;
        out.failures.push_back(what);
    }
}

bool replay_labelled(RevalidationResult& out, const std::string& tag, const Term& start,
                     const std::vector<LabelledStep>& steps, const IndexedTrs& trs,
                     RankComputer* rc, const Term& expected_end) {
    Term cur = start;
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const auto& ls = steps[k];
        if (ls.rule < 0 || static_cast<std::size_t>(ls.rule) >= trs.rules.size()) {
            expect(out, false, tag + ": step " + std::to_string(k + 1) + " names no rule");
            return false;
        }
        const Rule& rule = trs.rules[static_cast<std::size_t>(ls.rule)];
        if (ls.index != rule.index) {
            expect(out, false, tag + ": step " + std::to_string(k + 1) + " carries index " +
                                   std::to_string(ls.index) + " but the rule has " +
                                   std::to_string(rule.index));
            return false;
        }
        if (ls.rank >= 0 && rc) {
            const Term* sub = subterm_at(cur, ls.pos);
            if (!sub || rc->rank(*sub) != ls.rank) {
                expect(out, false,
                       tag + ": step " + std::to_string(k + 1) + " has a wrong rank label");
                return false;
            }
        }
        auto next = rewrite_step(cur, rule, ls.pos);
        if (!next || !(*next == ls.result)) {
            expect(out, false, tag + ": step " + std::to_string(k + 1) + " does not replay");
            return false;
        }
        cur = *next;
    }
    if (!(cur == expected_end)) {
        expect(out, false, tag + ": derivation ends at " + to_string(cur) + ", not " +
                               to_string(expected_end));
        return false;
    }
    return true;
}

} // namespace

RevalidationResult revalidate(const AnalysisResult& result, const IndexedTrs& trs,
                              const AnalysisConfig& cfg) {
    RevalidationResult out;
    LayeringReport lay = check_dlo(trs);
    expect(out, lay.layered == result.layering.layered, "layering flag does not recompute");
    expect(out, lay.overlay == result.layering.overlay, "overlay flag does not recompute");
    expect(out, lay.overlaps.size() == result.layering.overlaps.size(),
           "overlap count does not recompute");
    if (!result.rank_check.assumed && lay.layered) {
        RankCheckReport rk = check_rank_nonincreasing(trs);
        expect(out, rk.ok == result.rank_check.ok, "rank check flag does not recompute");
    }
    std::optional<RankComputer> rc;
    if (lay.layered) rc.emplace(trs, lay);

    auto peaks = cyclic_critical_pairs(trs);
    expect(out, peaks.size() == result.pairs.size(), "critical pair count does not recompute");
    for (std::size_t k = 0; k < result.pairs.size() && k < peaks.size(); ++k) {
        const PairAnalysis& pa = result.pairs[k];
        const CyclicCriticalPeak& fresh = peaks[k];
        std::string tag = pair_tag(pa);
        expect(out,
               pa.peak.outer_rule == fresh.outer_rule && pa.peak.inner_rule == fresh.inner_rule &&
                   pa.peak.pos == fresh.pos && pa.peak.left == fresh.left &&
                   pa.peak.right == fresh.right && pa.peak.left_source == fresh.left_source &&
                   pa.peak.right_source == fresh.right_source &&
                   pa.peak.unifier.crs.same_rules(fresh.unifier.crs) &&
                   pa.peak.unifier.eta == fresh.unifier.eta &&
                   pa.peak.context_has_vars == fresh.context_has_vars &&
                   pa.peak.label_i == fresh.label_i && pa.peak.label_j == fresh.label_j,
               tag + ": peak does not recompute");
        std::vector<Equation> eqs = crs_equations(pa.peak.unifier);
        if (pa.diagram) {
            const DiagramEvidence& ev = *pa.diagram;
            std::vector<int> I, J;
            for (const auto& s : ev.left_steps) I.push_back(s.index);
            for (const auto& s : ev.right_steps) J.push_back(s.index);
            expect(out, I == ev.I && J == ev.J, tag + ": label sequences do not match the steps");
            expect(out,
                   check_decreasing(ev.I, ev.J, pa.peak.label_i, pa.peak.label_j,
                                    pa.peak.context_has_vars),
                   tag + ": diagram labels are not decreasing");
            if (replay_labelled(out, tag + " left", pa.peak.left, ev.left_steps, trs,
                                rc ? &*rc : nullptr, ev.middle_left) &&
                replay_labelled(out, tag + " right", pa.peak.right, ev.right_steps, trs,
                                rc ? &*rc : nullptr, ev.middle_right)) {
                expect(out, congruent(ev.middle_left, ev.middle_right, eqs),
                       tag + ": middle terms are not congruent");
            }
        }
        const RealizabilityReport& rr = pa.realizability;
        if (rr.status == RealizabilityStatus::Unrealizable) {
            expect(out, inert_cycle_reason(eqs, trs).has_value(),
                   tag + ": unrealizability does not recompute");
        }
        if (rr.status == RealizabilityStatus::Realizable && !pa.peak.unifier.crs.empty()) {
            expect(out, rr.joins.size() == eqs.size(), tag + ": missing join evidence");
            for (std::size_t ji = 0; ji < rr.joins.size() && ji < eqs.size(); ++ji) {
                const JoinEvidence& je = rr.joins[ji];
                const Equation& rule = eqs[ji];
                expect(out, je.var == rule.lhs.head, tag + ": join names the wrong variable");
                Term want_lhs = apply_subst(rule.lhs, rr.realizer);
                Term want_rhs = apply_subst(rule.rhs, rr.realizer);
                expect(out, je.lhs_inst == want_lhs && je.rhs_inst == want_rhs,
                       tag + ": join instances do not match the realizer");
                replay_labelled(out, tag + " join lhs", je.lhs_inst, je.lhs_steps, trs, nullptr,
                                je.meet);
                replay_labelled(out, tag + " join rhs", je.rhs_inst, je.rhs_steps, trs, nullptr,
                                je.meet);
            }
        }
        if (pa.witness) {
            const WitnessEvidence& w = *pa.witness;
            expect(out, !(w.nf_left == w.nf_right), tag + ": witness normal forms coincide");
            replay_labelled(out, tag + " witness left", w.start, w.to_left, trs, nullptr,
                            w.nf_left);
            replay_labelled(out, tag + " witness right", w.start, w.to_right, trs, nullptr,
                            w.nf_right);
            auto ra = reachable(w.nf_left, trs, cfg.nf_depth, cfg.nf_nodes);
            auto rb = reachable(w.nf_right, trs, cfg.nf_depth, cfg.nf_nodes);
            bool disjoint = true;
            for (const Term& t : ra.terms)
                if (rb.terms.count(t)) disjoint = false;
            expect(out, ra.complete && rb.complete && disjoint,
                   tag + ": witness reachable sets are not complete and disjoint");
            expect(out, w.verified, tag + ": witness was recorded unverified");
        }
    }

    bool witnessed = false;
    for (const auto& pa : result.pairs)
        if (pa.witness && pa.witness->verified) witnessed = true;
    bool all_discharged = true;
    for (const auto& pa : result.pairs)
        if (!pa.discharged) all_discharged = false;
    switch (result.verdict) {
        case Verdict::NonConfluent:
            expect(out, witnessed, "NON-CONFLUENT verdict lacks a verified witness");
            break;
        case Verdict::Confluent:
            expect(out,
                   result.layering.layered && result.rank_check.ok && all_discharged,
                   "CONFLUENT verdict lacks a met obligation");
            break;
        case Verdict::Maybe:
            expect(out, !witnessed, "MAYBE verdict despite a verified witness");
            expect(out,
                   !(result.layering.layered && result.rank_check.ok && all_discharged),
                   "MAYBE verdict although every obligation is met");
            break;
    }
    return out;
}

} // namespace confl
