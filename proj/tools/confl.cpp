#include "confl/analysis.hpp"
#include "confl/report.hpp"
#include "confl/subrewrite.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

using namespace confl;
using nlohmann::ordered_json;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::set<Symbol> split_names(const std::string& csv) {
    std::set<Symbol> out;
    std::string cur;
    for (char ch : csv) {
        if (ch == ',' || ch == ' ') {
            if (!cur.empty()) out.insert(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.insert(cur);
    return out;
}

struct Opts {
    std::string file;
    std::string term;
    std::string term2;
    std::string vars;
    std::string eqs_file;
    std::string pos;
    std::string format = "text";
    int pair = 1;
    int jobs = 1;
    bool trace = false;
    AnalysisConfig cfg;
};

bool json_out(const Opts& o) { return o.format == "json"; }

ordered_json peak_json(const CyclicCriticalPeak& pk) {
    ordered_json pj;
    pj["outer_rule"] = pk.outer_rule + 1;
    pj["inner_rule"] = pk.inner_rule + 1;
    pj["position"] = to_string(pk.pos);
    pj["left"] = to_string(pk.left);
    pj["right"] = to_string(pk.right);
    pj["left_source"] = to_string(pk.left_source);
    pj["right_source"] = to_string(pk.right_source);
    ordered_json finite = ordered_json::array(), cyclic = ordered_json::array(),
                 params = ordered_json::array(), rules = ordered_json::array();
    for (const auto& e : pk.solved.finite_eqs) finite.push_back(to_string(e));
    for (const auto& e : pk.solved.cyclic_eqs) cyclic.push_back(to_string(e));
    for (const auto& p : pk.solved.parameters) params.push_back(p);
    for (const auto& r : pk.unifier.crs.rules)
        rules.push_back(to_string(r.lhs) + " -> " + to_string(r.rhs));
    pj["solved_form"] = {{"finite", finite}, {"cyclic", cyclic}, {"parameters", params}};
    pj["unifier"] = {{"eta", subst_json(pk.unifier.eta)}, {"rules", rules}};
    pj["label_i"] = pk.label_i;
    pj["label_j"] = pk.label_j;
    pj["context_has_vars"] = pk.context_has_vars;
    return pj;
}

void peak_text(std::ostream& out, const CyclicCriticalPeak& pk, std::size_t n) {
    out << "pair " << n << ": rule " << (pk.inner_rule + 1) << " into rule "
        << (pk.outer_rule + 1) << " at " << to_string(pk.pos) << "\n";
    out << "  pair: <" << to_string(pk.left) << ", " << to_string(pk.right) << ">\n";
    out << "  sources: " << to_string(pk.left_source) << " and " << to_string(pk.right_source)
        << "\n";
    out << "  unifier: eta {";
    bool first = true;
    for (const auto& [v, t] : pk.unifier.eta) {
        if (!first) out << ", ";
        first = false;
        out << v << " -> " << to_string(t);
    }
    out << "}; rules ";
    if (pk.unifier.crs.rules.empty()) out << "(none)";
    for (std::size_t k = 0; k < pk.unifier.crs.rules.size(); ++k) {
        const auto& r = pk.unifier.crs.rules[k];
        out << (k ? ", " : "") << to_string(r.lhs) << " -> " << to_string(r.rhs);
    }
    out << "\n";
}

int run_check(const Opts& o) {
    IndexedTrs trs = parse_trs(slurp(o.file));
    AnalysisResult res = analyze(trs, o.cfg);
    if (json_out(o))
        std::cout << report_json(res, trs).dump(2) << "\n";
    else
        std::cout << report_text(res, trs);
    return verdict_exit_code(res.verdict);
}

int run_layered(const Opts& o) {
    IndexedTrs trs = parse_trs(slurp(o.file));
    LayeringReport rep = check_dlo(trs);
    if (json_out(o)) {
        ordered_json j;
        j["layered"] = rep.layered;
        j["overlay"] = rep.overlay;
        ordered_json viols = ordered_json::array();
        for (const auto& v : rep.violations) {
            ordered_json vj;
            vj["outer_rule"] = v.site.outer_rule + 1;
            vj["position"] = to_string(v.site.pos);
            vj["inner_rule"] = v.site.inner_rule + 1;
            vj["witness"] = v.witness;
            viols.push_back(vj);
        }
        j["violations"] = viols;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "layered: " << (rep.layered ? "yes" : "no") << "\n";
        std::cout << "overlay: " << (rep.overlay ? "yes" : "no") << "\n";
        for (const auto& v : rep.violations)
            std::cout << "violation: rule " << (v.site.outer_rule + 1) << " at "
                      << to_string(v.site.pos) << " vs rule " << (v.site.inner_rule + 1) << ": "
                      << v.witness << "\n";
    }
    return rep.layered ? 0 : 1;
}

int run_rank(const Opts& o) {
    IndexedTrs trs = parse_trs(slurp(o.file));
    Term t = parse_term(o.term, trs.variables, &trs);
    LayeringReport rep = check_dlo(trs);
    if (!rep.layered) {
        std::cerr << "error: rank is undefined, the system is not layered\n";
        return 3;
    }
    RankComputer rc(trs, rep);
    std::cout << rc.rank(t) << "\n";
    return 0;
}

int run_rankcheck(const Opts& o) {
    IndexedTrs trs = parse_trs(slurp(o.file));
    RankCheckReport rep = check_rank_nonincreasing(trs);
    if (json_out(o)) {
        ordered_json j;
        j["ok"] = rep.ok;
        ordered_json fails = ordered_json::array();
        for (const auto& f : rep.failures) {
            ordered_json fj;
            fj["rule"] = f.rule + 1;
            fj["condition"] = f.condition == 1 ? "i" : "ii";
            fj["detail"] = f.detail;
            fails.push_back(fj);
        }
        j["failures"] = fails;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "rank nonincreasing: " << (rep.ok ? "yes" : "no") << "\n";
        for (const auto& f : rep.failures)
            std::cout << "rule " << (f.rule + 1) << ", condition ("
                      << (f.condition == 1 ? "i" : "ii") << "): " << f.detail << "\n";
    }
    return rep.ok ? 0 : 1;
}

int run_unify(const Opts& o) {
    UnifProblem p;
    p.vars = split_names(o.vars);
    Term lhs = parse_term(o.term, p.vars);
    Term rhs = parse_term(o.term2, p.vars);
    p.eqs.push_back({lhs, rhs});
    p.vars = p.var_names_used();
    SolveTrace trace;
    SolvedForm sf = solve(p, o.trace ? &trace : nullptr);
    if (o.trace) {
        std::cout << "initial: ";
        for (std::size_t k = 0; k < trace.initial.eqs.size(); ++k)
            std::cout << (k ? " & " : "") << to_string(trace.initial.eqs[k]);
        std::cout << "\n";
        for (const auto& [site, after] : trace.steps) {
            std::cout << rule_name(site.rule) << " at equation " << (site.eq + 1);
            if (site.eq2 != static_cast<std::size_t>(-1))
                std::cout << " with equation " << (site.eq2 + 1);
            std::cout << ": ";
            if (after.bottom) {
                std::cout << "bottom";
            } else {
                for (std::size_t k = 0; k < after.eqs.size(); ++k)
                    std::cout << (k ? " & " : "") << to_string(after.eqs[k]);
            }
            std::cout << "\n";
        }
    }
    if (sf.bottom) {
        std::cout << "unsolvable (bottom)\n";
        return 1;
    }
    std::cout << "solved form: " << (sf.omega() ? "omega (cyclic)" : "tree (finite)") << "\n";
    std::cout << "finite:";
    if (sf.finite_eqs.empty()) std::cout << " (none)";
    for (const auto& e : sf.finite_eqs) std::cout << " " << to_string(e) << ";";
    std::cout << "\ncyclic:";
    if (sf.cyclic_eqs.empty()) std::cout << " (none)";
    for (const auto& e : sf.cyclic_eqs) std::cout << " " << to_string(e) << ";";
    std::cout << "\nparameters:";
    if (sf.parameters.empty()) std::cout << " (none)";
    for (const auto& v : sf.parameters) std::cout << " " << v;
    std::cout << "\n";
    CyclicUnifier cu = canonical_cyclic_unifier(sf);
    std::cout << "canonical unifier: eta {";
    bool first = true;
    for (const auto& [v, t] : cu.eta) {
        if (!first) std::cout << ", ";
        first = false;
        std::cout << v << " -> " << to_string(t);
    }
    std::cout << "}; rules ";
    if (cu.crs.rules.empty()) std::cout << "(none)";
    for (std::size_t k = 0; k < cu.crs.rules.size(); ++k)
        std::cout << (k ? ", " : "") << to_string(cu.crs.rules[k].lhs) << " -> "
                  << to_string(cu.crs.rules[k].rhs);
    std::cout << "\n";
    return 0;
}

int run_congruent(const Opts& o) {
    std::set<Symbol> vars = split_names(o.vars);
    Term u = parse_term(o.term, vars);
    Term v = parse_term(o.term2, vars);
    std::vector<Equation> eqs;
    std::istringstream in(slurp(o.eqs_file));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string trimmed;
        for (char ch : line)
            if (!isspace(static_cast<unsigned char>(ch)) || !trimmed.empty()) trimmed += ch;
        while (!trimmed.empty() && isspace(static_cast<unsigned char>(trimmed.back())))
            trimmed.pop_back();
        if (trimmed.empty() || trimmed[0] == '#') continue;
        auto eqpos = trimmed.find('=');
        if (eqpos == std::string::npos)
            throw std::runtime_error(o.eqs_file + ":" + std::to_string(lineno) +
                                     ": expected 'lhs = rhs'");
        eqs.push_back({parse_term(trimmed.substr(0, eqpos), vars),
                       parse_term(trimmed.substr(eqpos + 1), vars)});
    }
    bool yes = congruent(u, v, eqs);
    std::cout << "congruent: " << (yes ? "yes" : "no") << "\n";
    return yes ? 0 : 1;
}

int run_ccp(const Opts& o) {
    IndexedTrs trs = parse_trs(slurp(o.file));
    auto peaks = cyclic_critical_pairs(trs);
    if (json_out(o)) {
        ordered_json arr = ordered_json::array();
        for (const auto& pk : peaks) arr.push_back(peak_json(pk));
        std::cout << arr.dump(2) << "\n";
    } else {
        std::cout << "cyclic critical pairs: " << peaks.size() << "\n";
        for (std::size_t k = 0; k < peaks.size(); ++k) {
            peak_text(std::cout, peaks[k], k + 1);
            const auto& sf = peaks[k].solved;
            std::cout << "  solved form: finite";
            if (sf.finite_eqs.empty()) std::cout << " (none)";
            for (const auto& e : sf.finite_eqs) std::cout << " " << to_string(e) << ";";
            std::cout << " cyclic";
            if (sf.cyclic_eqs.empty()) std::cout << " (none)";
            for (const auto& e : sf.cyclic_eqs) std::cout << " " << to_string(e) << ";";
            std::cout << " parameters";
            if (sf.parameters.empty()) std::cout << " (none)";
            for (const auto& v : sf.parameters) std::cout << " " << v;
            std::cout << "\n";
        }
    }
    return 0;
}

int run_diagram(const Opts& o) {
    IndexedTrs trs = parse_trs(slurp(o.file));
    auto peaks = cyclic_critical_pairs(trs);
    if (o.pair < 1 || static_cast<std::size_t>(o.pair) > peaks.size()) {
        std::cerr << "error: --pair must be between 1 and " << peaks.size() << "\n";
        return 3;
    }
    const auto& pk = peaks[static_cast<std::size_t>(o.pair - 1)];
    LayeringReport lay = check_dlo(trs);
    std::optional<RankComputer> rc;
    if (lay.layered) rc.emplace(trs, lay);
    auto ev = find_diagram(pk, trs, o.cfg, rc ? &*rc : nullptr);
    if (json_out(o)) {
        ordered_json j;
        j["peak"] = peak_json(pk);
        if (ev) {
            ordered_json dj;
            ordered_json ls = ordered_json::array(), rs = ordered_json::array();
            for (const auto& s : ev->left_steps) ls.push_back(step_json(s));
            for (const auto& s : ev->right_steps) rs.push_back(step_json(s));
            dj["left_steps"] = ls;
            dj["right_steps"] = rs;
            dj["middle_left"] = to_string(ev->middle_left);
            dj["middle_right"] = to_string(ev->middle_right);
            dj["I"] = ev->I;
            dj["J"] = ev->J;
            j["diagram"] = dj;
        } else {
            j["diagram"] = nullptr;
        }
        std::cout << j.dump(2) << "\n";
    } else {
        peak_text(std::cout, pk, static_cast<std::size_t>(o.pair));
        if (ev) {
            auto show = [&](const char* side, const Term& start,
                            const std::vector<LabelledStep>& steps) {
                std::cout << "  " << side << ": " << to_string(start);
                for (const auto& s : steps) {
                    std::cout << " -[rule " << (s.rule + 1) << " at " << to_string(s.pos);
                    if (s.rank >= 0) std::cout << ", label <" << s.rank << "," << s.index << ">";
                    std::cout << "]-> " << to_string(s.result);
                }
                std::cout << "\n";
            };
            std::cout << "diagram: found\n";
            show("left ", pk.left, ev->left_steps);
            show("right", pk.right, ev->right_steps);
            std::cout << "  middles congruent: " << to_string(ev->middle_left) << " ~ "
                      << to_string(ev->middle_right) << "\n";
        } else {
            std::cout << "diagram: not found within depth " << o.cfg.diagram_depth << "\n";
        }
    }
    return ev ? 0 : 1;
}

int run_subrewrite(const Opts& o) {
    IndexedTrs trs = parse_trs(slurp(o.file));
    Term u = parse_term(o.term, trs.variables, &trs);
    LayeringReport lay = check_dlo(trs);
    std::optional<RankComputer> rc;
    if (lay.layered) rc.emplace(trs, lay);
    std::vector<Position> positions;
    if (!o.pos.empty()) {
        auto p = parse_position(o.pos);
        if (!p || !subterm_at(u, *p)) {
            std::cerr << "error: invalid position " << o.pos << "\n";
            return 3;
        }
        positions.push_back(*p);
    } else {
        positions = fpos(u);
    }
    std::size_t count = 0;
    for (std::size_t ri = 0; ri < trs.rules.size(); ++ri) {
        for (const Position& p : positions) {
            for (const SubRewriteStep& st :
                 sub_rewrite(u, trs, static_cast<int>(ri), p, o.cfg.eq_depth,
                             rc ? &*rc : nullptr)) {
                ++count;
                std::cout << "rule " << (ri + 1) << " at " << to_string(p);
                if (st.label_rank >= 0)
                    std::cout << " label <" << st.label_rank << "," << st.label_index << ">";
                std::cout << "\n";
                std::cout << "  sigma {";
                bool first = true;
                for (const auto& [v, t] : st.sigma) {
                    if (!first) std::cout << ", ";
                    first = false;
                    std::cout << v << " -> " << to_string(t);
                }
                std::cout << "}\n";
                if (!st.equalization.empty()) {
                    std::cout << "  equalize: " << to_string(u);
                    for (const auto& s : st.equalization)
                        std::cout << " -[rule " << (s.rule + 1) << " at " << to_string(s.pos)
                                  << "]-> " << to_string(s.result);
                    std::cout << "\n";
                }
                std::cout << "  result: " << to_string(st.result) << "\n";
            }
        }
    }
    if (count == 0) {
        std::cout << "no sub-rewriting steps\n";
        return 1;
    }
    return 0;
}

struct CorpusRow {
    std::string name;
    std::string verdict;
    std::size_t pairs = 0;
    bool revalidated = false;
    std::string error;
    long long ms = 0;
};

int run_corpus(const Opts& o) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    {
        std::error_code ec;
        fs::directory_iterator it(o.file, ec);
        if (ec) {
            std::cerr << "error: cannot read directory " << o.file << "\n";
            return 3;
        }
        for (const auto& entry : it)
            if (entry.path().extension() == ".trs") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        std::cerr << "error: no .trs files in " << o.file << "\n";
        return 3;
    }
    std::vector<CorpusRow> rows(files.size());
    auto work = [&](std::size_t k) {
        CorpusRow& row = rows[k];
        row.name = files[k].filename().string();
        auto t0 = std::chrono::steady_clock::now();
        try {
            IndexedTrs trs = parse_trs(slurp(files[k].string()));
            AnalysisResult res = analyze(trs, o.cfg);
            row.verdict = to_string(res.verdict);
            row.pairs = res.pairs.size();
            row.revalidated = revalidate(res, trs, o.cfg).ok;
        } catch (const std::exception& e) {
            row.verdict = "ERROR";
            row.error = e.what();
        }
        auto t1 = std::chrono::steady_clock::now();
        row.ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    };
    if (o.jobs > 1) {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int j = 0; j < o.jobs; ++j)
            pool.emplace_back([&] {
                for (std::size_t k = next.fetch_add(1); k < files.size(); k = next.fetch_add(1))
                    work(k);
            });
        for (auto& th : pool) th.join();
    } else {
        for (std::size_t k = 0; k < files.size(); ++k) work(k);
    }
    if (json_out(o)) {
        // no timing in the structured output, so equal corpora print equal bytes
        ordered_json arr = ordered_json::array();
        for (const auto& row : rows) {
            ordered_json rj;
            rj["file"] = row.name;
            rj["verdict"] = row.verdict;
            rj["pairs"] = row.pairs;
            rj["revalidated"] = row.revalidated;
            if (!row.error.empty()) rj["error"] = row.error;
            arr.push_back(rj);
        }
        std::cout << arr.dump(2) << "\n";
    } else {
        std::size_t wname = 4;
        for (const auto& row : rows) wname = std::max(wname, row.name.size());
        std::cout << std::left << std::setw(static_cast<int>(wname) + 2) << "file"
                  << std::setw(15) << "verdict" << std::setw(7) << "pairs" << std::setw(13)
                  << "revalidated" << "time(ms)\n";
        for (const auto& row : rows) {
            std::cout << std::left << std::setw(static_cast<int>(wname) + 2) << row.name
                      << std::setw(15) << row.verdict << std::setw(7) << row.pairs
                      << std::setw(13) << (row.revalidated ? "yes" : "no") << row.ms << "\n";
            if (!row.error.empty()) std::cout << "  error: " << row.error << "\n";
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    Opts o;
    CLI::App app{"confluence analyzer for first-order term rewriting systems"};
    app.require_subcommand(1);

    auto add_bounds = [&](CLI::App* sub) {
        sub->add_option("--eq-depth", o.cfg.eq_depth, "equalization depth per variable copy");
        sub->add_option("--diagram-depth", o.cfg.diagram_depth, "search depth per diagram side");
        sub->add_option("--realizer-depth", o.cfg.realizer_depth,
                        "rewrite closure depth for realizer candidates");
        sub->add_option("--nf-depth", o.cfg.nf_depth, "witness normal-form search depth");
        sub->add_option("--nf-nodes", o.cfg.nf_nodes, "witness search node bound");
    };
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", o.format, "output format")
            ->check(CLI::IsMember({"text", "json"}));
    };

    CLI::App* check = app.add_subcommand("check", "full confluence analysis of a .trs file");
    check->add_option("file", o.file, "system file")->required();
    add_bounds(check);
    add_format(check);
    check->add_flag("--assume-rank-nonincreasing", o.cfg.assume_rank_nonincreasing,
                    "skip the rank check and trust the property (flagged in the report)");

    CLI::App* layered = app.add_subcommand("layered", "layering check only");
    layered->add_option("file", o.file, "system file")->required();
    add_format(layered);

    CLI::App* rank = app.add_subcommand("rank", "rank of a term in a layered system");
    rank->add_option("file", o.file, "system file")->required();
    rank->add_option("term", o.term, "term, using the file's variables")->required();

    CLI::App* rankcheck = app.add_subcommand("rankcheck", "rank non-increase check only");
    rankcheck->add_option("file", o.file, "system file")->required();
    add_format(rankcheck);

    CLI::App* unify = app.add_subcommand("unify", "solve one equation over infinite trees");
    unify->add_option("lhs", o.term, "left term")->required();
    unify->add_option("rhs", o.term2, "right term")->required();
    unify->add_option("--vars", o.vars, "comma-separated variable names");
    unify->add_flag("--trace", o.trace, "print every strategy step");

    CLI::App* congr = app.add_subcommand("congruent", "congruence of two terms modulo equations");
    congr->add_option("lhs", o.term, "left term")->required();
    congr->add_option("rhs", o.term2, "right term")->required();
    congr->add_option("--eqs", o.eqs_file, "file with one 'lhs = rhs' equation per line")
        ->required();
    congr->add_option("--vars", o.vars, "comma-separated variable names");

    CLI::App* ccp = app.add_subcommand("ccp", "list cyclic critical pairs");
    ccp->add_option("file", o.file, "system file")->required();
    add_format(ccp);

    CLI::App* diagram = app.add_subcommand("diagram", "search a diagram for one pair");
    diagram->add_option("file", o.file, "system file")->required();
    diagram->add_option("--pair", o.pair, "1-based pair number")->required();
    add_bounds(diagram);
    add_format(diagram);

    CLI::App* subrw = app.add_subcommand("subrewrite", "list sub-rewriting steps of a term");
    subrw->add_option("file", o.file, "system file")->required();
    subrw->add_option("term", o.term, "term, using the file's variables")->required();
    subrw->add_option("--pos", o.pos, "restrict to one position, e.g. L or 1.2");
    subrw->add_option("--depth,--eq-depth", o.cfg.eq_depth, "equalization depth");

    CLI::App* corpus = app.add_subcommand("corpus", "run every .trs file in a directory");
    corpus->add_option("dir", o.file, "directory of .trs files")->required();
    corpus->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    add_bounds(corpus);
    add_format(corpus);
    corpus->add_flag("--assume-rank-nonincreasing", o.cfg.assume_rank_nonincreasing,
                     "skip the rank check and trust the property");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    try {
        if (check->parsed()) return run_check(o);
        if (layered->parsed()) return run_layered(o);
        if (rank->parsed()) return run_rank(o);
        if (rankcheck->parsed()) return run_rankcheck(o);
        if (unify->parsed()) return run_unify(o);
        if (congr->parsed()) return run_congruent(o);
        if (ccp->parsed()) return run_ccp(o);
        if (diagram->parsed()) return run_diagram(o);
        if (subrw->parsed()) return run_subrewrite(o);
        if (corpus->parsed()) return run_corpus(o);
    } catch (const TrsError& e) {
        std::cerr << "error (" << e.kind << ") at line " << e.loc.line << ", column "
                  << e.loc.col << ": " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 3;
}
