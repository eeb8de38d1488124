#include "confl/report.hpp"

#include <sstream>

namespace confl {

namespace {

const char* yn(bool b) { return b ? "yes" : "no"; }

std::string subst_text(const Substitution& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& [v, t] : s) {
        if (!first) out += ", ";
        first = false;
        out += v + " -> " + to_string(t);
    }
    return out + "}";
}

std::string eq_list(const std::vector<Equation>& eqs) {
    if (eqs.empty()) return "(none)";
    std::string out;
    for (std::size_t k = 0; k < eqs.size(); ++k) {
        if (k) out += ", ";
        out += to_string(eqs[k]);
    }
    return out;
}

std::string rules_list(const std::vector<Equation>& rules) {
    if (rules.empty()) return "(none)";
    std::string out;
    for (std::size_t k = 0; k < rules.size(); ++k) {
        if (k) out += ", ";
        out += to_string(rules[k].lhs) + " -> " + to_string(rules[k].rhs);
    }
    return out;
}

std::string param_list(const std::set<Symbol>& ps) {
    if (ps.empty()) return "(none)";
    std::string out;
    bool first = true;
    for (const auto& p : ps) {
        if (!first) out += ", ";
        first = false;
        out += p;
    }
    return out;
}

std::string steps_text(const std::vector<LabelledStep>& steps) {
    if (steps.empty()) return "(empty derivation)";
    std::string out;
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const auto& s = steps[k];
        if (k) out += ", ";
        out += "-[rule " + std::to_string(s.rule + 1) + " at " + to_string(s.pos);
        if (s.rank >= 0) out += ", label <" + std::to_string(s.rank) + "," +
                                 std::to_string(s.index) + ">";
        out += "]-> " + to_string(s.result);
    }
    return out;
}

} // namespace

std::string report_text(const AnalysisResult& res, const IndexedTrs& trs) {
    std::ostringstream out;
    out << "verdict: " << to_string(res.verdict) << "\n";
    out << "rules:\n";
    for (std::size_t k = 0; k < trs.rules.size(); ++k) {
        const Rule& r = trs.rules[k];
        out << "  " << (k + 1) << ": " << to_string(r.lhs) << " -> " << to_string(r.rhs)
            << " [index " << r.index << "]\n";
    }
    out << "layered: " << yn(res.layering.layered);
    if (res.layering.layered) out << " (overlay: " << yn(res.layering.overlay) << ")";
    out << "\n";
    for (const auto& v : res.layering.violations)
        out << "  violation: rule " << (v.site.outer_rule + 1) << " at " << to_string(v.site.pos)
            << " vs rule " << (v.site.inner_rule + 1) << ": " << v.witness << "\n";
    if (!res.layering.layered) {
        out << "rank nonincreasing: not applicable\n";
    } else if (res.rank_check.assumed) {
        out << "rank nonincreasing: ASSUMED ON REQUEST (not checked)\n";
    } else {
        out << "rank nonincreasing: " << yn(res.rank_check.ok) << "\n";
        for (const auto& f : res.rank_check.failures)
            out << "  rule " << (f.rule + 1) << ", condition (" << (f.condition == 1 ? "i" : "ii")
                << "): " << f.detail << "\n";
    }
    out << "cyclic critical pairs: " << res.pairs.size() << "\n";
    for (std::size_t k = 0; k < res.pairs.size(); ++k) {
        const PairAnalysis& pa = res.pairs[k];
        const CyclicCriticalPeak& pk = pa.peak;
        out << "pair " << (k + 1) << ": rule " << (pk.inner_rule + 1) << " into rule "
            << (pk.outer_rule + 1) << " at " << to_string(pk.pos) << "\n";
        out << "  pair: <" << to_string(pk.left) << ", " << to_string(pk.right) << ">\n";
        out << "  sources: " << to_string(pk.left_source) << " and "
            << to_string(pk.right_source) << "\n";
        out << "  solved form: finite " << eq_list(pk.solved.finite_eqs) << "; cyclic "
            << eq_list(pk.solved.cyclic_eqs) << "; parameters " << param_list(pk.solved.parameters)
            << "\n";
        out << "  unifier: eta " << subst_text(pk.unifier.eta) << "; rules "
            << rules_list(pk.unifier.crs.rules) << "\n";
        out << "  rule indexes: i=" << pk.label_i << ", j=" << pk.label_j
            << "; context has variables: " << yn(pk.context_has_vars) << "\n";
        out << "  realizability: " << to_string(pa.realizability.status) << " ("
            << pa.realizability.reason << ")\n";
        if (pa.realizability.status == RealizabilityStatus::Realizable) {
            out << "    realizer: " << subst_text(pa.realizability.realizer) << "\n";
            for (const auto& je : pa.realizability.joins)
                out << "    join " << je.var << ": " << to_string(je.lhs_inst) << " and "
                    << to_string(je.rhs_inst) << " meet at " << to_string(je.meet) << "\n";
        }
        if (pa.diagram) {
            const DiagramEvidence& ev = *pa.diagram;
            out << "  diagram: found\n";
            out << "    left:  " << to_string(pk.left) << " " << steps_text(ev.left_steps)
                << "\n";
            out << "    right: " << to_string(pk.right) << " " << steps_text(ev.right_steps)
                << "\n";
            out << "    middles: " << to_string(ev.middle_left) << " ~ "
                << to_string(ev.middle_right) << " (congruent modulo the unifier rules)\n";
        } else {
            out << "  diagram: not found\n";
        }
        if (pa.witness) {
            const WitnessEvidence& w = *pa.witness;
            out << "  witness: " << to_string(w.start) << " reaches distinct normal forms "
                << to_string(w.nf_left) << " and " << to_string(w.nf_right)
                << (w.verified ? " (verified)" : " (UNVERIFIED)") << "\n";
            out << "    to " << to_string(w.nf_left) << ": " << steps_text(w.to_left) << "\n";
            out << "    to " << to_string(w.nf_right) << ": " << steps_text(w.to_right) << "\n";
        }
        out << "  discharged: " << yn(pa.discharged) << "\n";
    }
    if (!res.first_failure.empty()) out << "first failure: " << res.first_failure << "\n";
    return out.str();
}

nlohmann::ordered_json subst_json(const Substitution& s) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [v, t] : s) j[v] = to_string(t);
    return j;
}

nlohmann::ordered_json step_json(const LabelledStep& s) {
    nlohmann::ordered_json j;
    j["position"] = to_string(s.pos);
    j["rule"] = s.rule + 1;
    j["rank"] = s.rank;
    j["index"] = s.index;
    j["result"] = to_string(s.result);
    return j;
}

namespace {

nlohmann::ordered_json steps_json(const std::vector<LabelledStep>& steps) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& s : steps) arr.push_back(step_json(s));
    return arr;
}

nlohmann::ordered_json eqs_json(const std::vector<Equation>& eqs) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& e : eqs) arr.push_back(to_string(e));
    return arr;
}

nlohmann::ordered_json rules_json(const std::vector<Equation>& rules) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rules) arr.push_back(to_string(r.lhs) + " -> " + to_string(r.rhs));
    return arr;
}

} // namespace

nlohmann::ordered_json report_json(const AnalysisResult& res, const IndexedTrs& trs) {
    nlohmann::ordered_json j;
    j["verdict"] = to_string(res.verdict);
    j["exit_code"] = verdict_exit_code(res.verdict);
    nlohmann::ordered_json rules = nlohmann::ordered_json::array();
    for (const auto& r : trs.rules) {
        nlohmann::ordered_json rj;
        rj["lhs"] = to_string(r.lhs);
        rj["rhs"] = to_string(r.rhs);
        rj["index"] = r.index;
        rules.push_back(rj);
    }
    j["rules"] = rules;
    nlohmann::ordered_json lay;
    lay["layered"] = res.layering.layered;
    lay["overlay"] = res.layering.overlay;
    nlohmann::ordered_json overlaps = nlohmann::ordered_json::array();
    for (const auto& o : res.layering.overlaps) {
        nlohmann::ordered_json oj;
        oj["outer_rule"] = o.outer_rule + 1;
        oj["position"] = to_string(o.pos);
        oj["inner_rule"] = o.inner_rule + 1;
        overlaps.push_back(oj);
    }
    lay["overlaps"] = overlaps;
    nlohmann::ordered_json viols = nlohmann::ordered_json::array();
    for (const auto& v : res.layering.violations) {
        nlohmann::ordered_json vj;
        vj["outer_rule"] = v.site.outer_rule + 1;
        vj["position"] = to_string(v.site.pos);
        vj["inner_rule"] = v.site.inner_rule + 1;
        vj["witness"] = v.witness;
        viols.push_back(vj);
    }
    lay["violations"] = viols;
    j["layering"] = lay;
    nlohmann::ordered_json rank;
    rank["ok"] = res.rank_check.ok;
    rank["assumed"] = res.rank_check.assumed;
    nlohmann::ordered_json fails = nlohmann::ordered_json::array();
    for (const auto& f : res.rank_check.failures) {
        nlohmann::ordered_json fj;
        fj["rule"] = f.rule + 1;
        fj["condition"] = f.condition == 1 ? "i" : "ii";
        fj["detail"] = f.detail;
        fails.push_back(fj);
    }
    rank["failures"] = fails;
    j["rank_check"] = rank;
    nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
    for (const auto& pa : res.pairs) {
        const CyclicCriticalPeak& pk = pa.peak;
        nlohmann::ordered_json pj;
        pj["outer_rule"] = pk.outer_rule + 1;
        pj["inner_rule"] = pk.inner_rule + 1;
        pj["position"] = to_string(pk.pos);
        pj["left"] = to_string(pk.left);
        pj["right"] = to_string(pk.right);
        pj["left_source"] = to_string(pk.left_source);
        pj["right_source"] = to_string(pk.right_source);
        nlohmann::ordered_json sf;
        sf["finite"] = eqs_json(pk.solved.finite_eqs);
        sf["cyclic"] = eqs_json(pk.solved.cyclic_eqs);
        nlohmann::ordered_json params = nlohmann::ordered_json::array();
        for (const auto& p : pk.solved.parameters) params.push_back(p);
        sf["parameters"] = params;
        pj["solved_form"] = sf;
        nlohmann::ordered_json un;
        un["eta"] = subst_json(pk.unifier.eta);
        un["rules"] = rules_json(pk.unifier.crs.rules);
        pj["unifier"] = un;
        pj["label_i"] = pk.label_i;
        pj["label_j"] = pk.label_j;
        pj["context_has_vars"] = pk.context_has_vars;
        nlohmann::ordered_json rz;
        rz["status"] = to_string(pa.realizability.status);
        rz["reason"] = pa.realizability.reason;
        if (pa.realizability.status == RealizabilityStatus::Realizable) {
            rz["realizer"] = subst_json(pa.realizability.realizer);
            nlohmann::ordered_json joins = nlohmann::ordered_json::array();
            for (const auto& je : pa.realizability.joins) {
                nlohmann::ordered_json jj;
                jj["var"] = je.var;
                jj["lhs"] = to_string(je.lhs_inst);
                jj["rhs"] = to_string(je.rhs_inst);
                jj["meet"] = to_string(je.meet);
                jj["lhs_steps"] = steps_json(je.lhs_steps);
                jj["rhs_steps"] = steps_json(je.rhs_steps);
                joins.push_back(jj);
            }
            rz["joins"] = joins;
        }
        pj["realizability"] = rz;
        if (pa.diagram) {
            const DiagramEvidence& ev = *pa.diagram;
            nlohmann::ordered_json dj;
            dj["left_steps"] = steps_json(ev.left_steps);
            dj["right_steps"] = steps_json(ev.right_steps);
            dj["middle_left"] = to_string(ev.middle_left);
            dj["middle_right"] = to_string(ev.middle_right);
            dj["I"] = ev.I;
            dj["J"] = ev.J;
            pj["diagram"] = dj;
        } else {
            pj["diagram"] = nullptr;
        }
        if (pa.witness) {
            const WitnessEvidence& w = *pa.witness;
            nlohmann::ordered_json wj;
            wj["start"] = to_string(w.start);
            wj["nf_left"] = to_string(w.nf_left);
            wj["nf_right"] = to_string(w.nf_right);
            wj["to_left"] = steps_json(w.to_left);
            wj["to_right"] = steps_json(w.to_right);
            wj["verified"] = w.verified;
            pj["witness"] = wj;
        } else {
            pj["witness"] = nullptr;
        }
        pj["discharged"] = pa.discharged;
        pj["obligation"] = pa.obligation;
        pairs.push_back(pj);
    }
    j["pairs"] = pairs;
    j["first_failure"] = res.first_failure;
    return j;
}

} // namespace confl
