#include "confl/subrewrite.hpp"

#include <algorithm>

namespace confl {

namespace {

constexpr unsigned kPatternSalt = 9;
constexpr std::size_t kEqualizationNodes = 4000;
constexpr std::size_t kMaxSteps = 64;

Position join_positions(const Position& a, const Position& b, const Position& c = {}) {
    Position out = a;
    out.insert(out.end(), b.begin(), b.end());
    out.insert(out.end(), c.begin(), c.end());
    return out;
}

} // namespace

std::vector<SubRewriteStep> sub_rewrite(const Term& u, const IndexedTrs& trs, int rule,
                                        const Position& p, int eq_depth, RankComputer* rc) {
    std::vector<SubRewriteStep> out;
    if (rule < 0 || static_cast<std::size_t>(rule) >= trs.rules.size()) return out;
    const Rule& rl = trs.rules[static_cast<std::size_t>(rule)];
    const Term* sub = subterm_at(u, p);
    if (!sub) return out;
    LinearizedTerm lin = linearize(rl.lhs, kPatternSalt);
    auto theta = match(lin.term, *sub);
    if (!theta) return out;
    auto binding_of = [&](const Symbol& fresh) -> Term {
        auto it = theta->find(fresh);
        return it != theta->end() ? it->second : Term::mk_var(fresh);
    };

    // For every original variable, the candidate equalized values are the
    // common reducts of all its copies' bindings, within the depth bound.
    struct VarPlan {
        Symbol name;
        std::vector<Symbol> copies;
        std::vector<Position> copy_pos;           // position of each copy in the pattern
        std::vector<PathMap> paths;               // reachability per copy
        std::vector<Term> candidates;             // common reducts, sorted
    };
    std::vector<VarPlan> plans;
    for (const auto& [orig, copies] : lin.occurrences) {
        VarPlan plan;
        plan.name = orig;
        plan.copies = copies;
        for (const auto& c : copies) plan.copy_pos.push_back(var_positions(lin.term, c).at(0));
        TermSet common;
        for (std::size_t i = 0; i < copies.size(); ++i) {
            plan.paths.push_back(
                reachable_paths(binding_of(copies[i]), trs, eq_depth, kEqualizationNodes));
            if (i == 0)
                common = plan.paths[0].terms;
            else {
                TermSet keep;
                for (const Term& t : common)
                    if (plan.paths[i].terms.count(t)) keep.insert(t);
                common = std::move(keep);
            }
        }
        plan.candidates.assign(common.begin(), common.end());
        std::sort(plan.candidates.begin(), plan.candidates.end(),
                  [](const Term& a, const Term& b) {
                      int sa = term_size(a), sb = term_size(b);
                      if (sa != sb) return sa < sb;
                      return term_less(a, b);
                  });
        if (plan.candidates.empty()) return out;  // copies cannot be equalized
        // When the copies already agree, surface the zero-step choice first
        // so a plain redex yields the plain step before any proper ones.
        bool uniform = true;
        for (const auto& c : plan.copies)
            if (!(binding_of(c) == binding_of(plan.copies[0]))) uniform = false;
        if (uniform) {
            auto it = std::find(plan.candidates.begin(), plan.candidates.end(),
                                binding_of(plan.copies[0]));
            if (it != plan.candidates.end())
                std::rotate(plan.candidates.begin(), it, it + 1);
        }
        plans.push_back(std::move(plan));
    }

    int label_rank = rc ? rc->rank(*sub) : -1;

    // Walk the cartesian product of candidate choices in lexicographic
    // order, building the explicit derivation for each choice.
    std::vector<std::size_t> choice(plans.size(), 0);
    while (out.size() < kMaxSteps) {
        SubRewriteStep step;
        step.pos = p;
        step.rule = rule;
        step.theta = *theta;
        step.label_rank = label_rank;
        step.label_index = rl.index;
        Term cur = u;
        for (std::size_t vi = 0; vi < plans.size(); ++vi) {
            const VarPlan& plan = plans[vi];
            const Term& target = plan.candidates[choice[vi]];
            step.sigma[plan.name] = target;
            for (std::size_t ci = 0; ci < plan.copies.size(); ++ci) {
                Term local = binding_of(plan.copies[ci]);
                for (const StepRef& sr : replay_path(plan.paths[ci], local, target)) {
                    Position global = join_positions(p, plan.copy_pos[ci], sr.pos);
                    LabelledStep ls;
                    ls.pos = global;
                    ls.rule = sr.rule;
                    ls.index = trs.rules[static_cast<std::size_t>(sr.rule)].index;
                    if (rc) ls.rank = rc->rank(*subterm_at(cur, global));
                    cur = replace_at(cur, join_positions(p, plan.copy_pos[ci]), sr.result);
                    ls.result = cur;
                    step.equalization.push_back(std::move(ls));
                }
            }
        }
        for (auto it = step.sigma.begin(); it != step.sigma.end();) {
            if (it->second.var && it->second.head == it->first)
                it = step.sigma.erase(it);
            else
                ++it;
        }
        step.equalized = cur;
        step.result = replace_at(cur, p, apply_subst(rl.rhs, step.sigma));
        out.push_back(std::move(step));
        // Advance the product; stop after the last combination.
        std::size_t vi = plans.size();
        while (vi > 0) {
            --vi;
            if (++choice[vi] < plans[vi].candidates.size()) break;
            choice[vi] = 0;
            if (vi == 0) return out;
        }
        if (plans.empty()) break;  // ground pattern: single combination
    }
    return out;
}

std::pair<Substitution, Substitution> decompose_redex(const SubRewriteStep& step) {
    return {step.theta, step.sigma};
}

} // namespace confl
