#include "confl/trs.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace confl {

std::optional<Term> rewrite_step(const Term& t, const Rule& rule, const Position& p) {
    const Term* sub = subterm_at(t, p);
    if (!sub) return std::nullopt;
    auto m = match(rule.lhs, *sub);
    if (!m) return std::nullopt;
    return replace_at(t, p, apply_subst(rule.rhs, *m));
}

static void reducts_walk(const Term& whole, const Term& here, Position& pos,
                         const IndexedTrs& trs, std::vector<StepRef>& out) {
    for (std::size_t ri = 0; ri < trs.rules.size(); ++ri) {
        auto m = match(trs.rules[ri].lhs, here);
        if (m)
            out.push_back(StepRef{pos, static_cast<int>(ri),
                                  replace_at(whole, pos,
                                             apply_subst(trs.rules[ri].rhs, *m))});
    }
    for (std::size_t i = 0; i < here.args.size(); ++i) {
        pos.push_back(static_cast<int>(i + 1));
        reducts_walk(whole, here.args[i], pos, trs, out);
        pos.pop_back();
    }
}

std::vector<StepRef> one_step_reducts(const Term& t, const IndexedTrs& trs) {
    std::vector<StepRef> out;
    Position pos;
    reducts_walk(t, t, pos, trs, out);
    return out;
}

ReachResult reachable(const Term& t, const IndexedTrs& trs, int depth_bound,
                      std::size_t node_bound) {
    ReachResult res;
    res.complete = true;
    res.terms.insert(t);
    std::deque<std::pair<Term, int>> queue;
    queue.emplace_back(t, 0);
    std::vector<Term> frontier;  // nodes the depth bound stopped us from expanding
    while (!queue.empty()) {
        auto [cur, depth] = queue.front();
        queue.pop_front();
        if (depth >= depth_bound) {
            frontier.push_back(std::move(cur));
            continue;
        }
        for (StepRef& step : one_step_reducts(cur, trs)) {
            if (res.terms.count(step.result)) continue;
            if (res.terms.size() >= node_bound) {
                res.complete = false;
                return res;
            }
            res.terms.insert(step.result);
            queue.emplace_back(std::move(step.result), depth + 1);
        }
    }
    // The set is complete only if no frontier node can escape it.
    for (const Term& u : frontier) {
        for (const StepRef& step : one_step_reducts(u, trs))
            if (!res.terms.count(step.result)) {
                res.complete = false;
                return res;
            }
    }
    return res;
}

PathMap reachable_paths(const Term& t, const IndexedTrs& trs, int depth_bound,
                        std::size_t node_bound) {
    PathMap res;
    res.terms.insert(t);
    std::deque<std::pair<Term, int>> queue;
    queue.emplace_back(t, 0);
    std::vector<Term> frontier;
    while (!queue.empty()) {
        auto [cur, depth] = queue.front();
        queue.pop_front();
        if (depth >= depth_bound) {
            frontier.push_back(std::move(cur));
            continue;
        }
        for (StepRef& step : one_step_reducts(cur, trs)) {
            if (res.terms.count(step.result)) continue;
            if (res.terms.size() >= node_bound) {
                res.complete = false;
                return res;
            }
            res.terms.insert(step.result);
            res.parent.emplace(step.result, std::make_pair(cur, step));
            queue.emplace_back(std::move(step.result), depth + 1);
        }
    }
    for (const Term& u : frontier) {
        for (const StepRef& step : one_step_reducts(u, trs))
            if (!res.terms.count(step.result)) {
                res.complete = false;
                return res;
            }
    }
    return res;
}

std::vector<StepRef> replay_path(const PathMap& pm, const Term& start, const Term& target) {
    std::vector<StepRef> steps;
    Term cur = target;
    while (!(cur == start)) {
        auto it = pm.parent.find(cur);
        if (it == pm.parent.end())
            throw std::logic_error("replay_path: no recorded derivation to " + to_string(cur));
        steps.push_back(it->second.second);
        cur = it->second.first;
    }
    std::reverse(steps.begin(), steps.end());
    return steps;
}

NormalFormResult normal_forms(const Term& t, const IndexedTrs& trs, int depth_bound,
                              std::size_t node_bound) {
    ReachResult reach = reachable(t, trs, depth_bound, node_bound);
    NormalFormResult out;
    out.complete = reach.complete;
    for (const Term& u : reach.terms)
        if (one_step_reducts(u, trs).empty()) out.normal_forms.push_back(u);
    return out;
}

} // namespace confl
