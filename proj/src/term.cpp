#include "confl/term.hpp"

#include <sstream>
#include <stdexcept>

namespace confl {

bool term_less(const Term& a, const Term& b) {
    if (a.var != b.var) return a.var && !b.var;
    if (a.head != b.head) return a.head < b.head;
    if (a.args.size() != b.args.size()) return a.args.size() < b.args.size();
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (term_less(a.args[i], b.args[i])) return true;
        if (term_less(b.args[i], a.args[i])) return false;
    }
    return false;
}

std::string to_string(const Term& t) {
    if (t.var || t.args.empty()) return t.head;
    std::string out = t.head;
    out += '(';
    for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) out += ',';
        out += to_string(t.args[i]);
    }
    out += ')';
    return out;
}

std::string to_string(const Position& p) {
    if (p.empty()) return "L";
    std::string out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out += '.';
        out += std::to_string(p[i]);
    }
    return out;
}

std::optional<Position> parse_position(const std::string& text) {
    if (text.empty() || text == "L") return Position{};
    Position p;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, '.')) {
        if (part.empty()) return std::nullopt;
        for (char c : part)
            if (c < '0' || c > '9') return std::nullopt;
        int k = std::stoi(part);
        if (k < 1) return std::nullopt;
        p.push_back(k);
    }
    return p;
}

int term_size(const Term& t) {
    int n = 1;
    for (const Term& a : t.args) n += term_size(a);
    return n;
}

int term_depth(const Term& t) {
    int d = 0;
    for (const Term& a : t.args) d = std::max(d, term_depth(a));
    return d + 1;
}

static void collect_vars(const Term& t, std::set<Symbol>& out) {
    if (t.var) {
        out.insert(t.head);
        return;
    }
    for (const Term& a : t.args) collect_vars(a, out);
}

std::set<Symbol> term_vars(const Term& t) {
    std::set<Symbol> out;
    collect_vars(t, out);
    return out;
}

bool contains_var(const Term& t, const Symbol& v) {
    if (t.var) return t.head == v;
    for (const Term& a : t.args)
        if (contains_var(a, v)) return true;
    return false;
}

const Term* subterm_at(const Term& t, const Position& p) {
    const Term* cur = &t;
    for (int k : p) {
        if (k < 1 || static_cast<std::size_t>(k) > cur->args.size()) return nullptr;
        cur = &cur->args[k - 1];
    }
    return cur;
}

Term replace_at(const Term& t, const Position& p, const Term& sub) {
    if (p.empty()) return sub;
    int k = p.front();
    if (k < 1 || static_cast<std::size_t>(k) > t.args.size())
        throw std::invalid_argument("replace_at: position " + to_string(p) +
                                    " not in " + to_string(t));
    Term out = t;
    out.args[k - 1] =
        replace_at(t.args[k - 1], Position(p.begin() + 1, p.end()), sub);
    return out;
}

static void collect_fpos(const Term& t, Position& here, std::vector<Position>& out) {
    if (t.var) return;
    out.push_back(here);
    for (std::size_t i = 0; i < t.args.size(); ++i) {
        here.push_back(static_cast<int>(i + 1));
        collect_fpos(t.args[i], here, out);
        here.pop_back();
    }
}

std::vector<Position> fpos(const Term& t) {
    std::vector<Position> out;
    Position here;
    collect_fpos(t, here, out);
    return out;
}

static void collect_var_pos(const Term& t, const Symbol& v, Position& here,
                            std::vector<Position>& out) {
    if (t.var) {
        if (t.head == v) out.push_back(here);
        return;
    }
    for (std::size_t i = 0; i < t.args.size(); ++i) {
        here.push_back(static_cast<int>(i + 1));
        collect_var_pos(t.args[i], v, here, out);
        here.pop_back();
    }
}

std::vector<Position> var_positions(const Term& t, const Symbol& v) {
    std::vector<Position> out;
    Position here;
    collect_var_pos(t, v, here, out);
    return out;
}

bool position_leq(const Position& above, const Position& below) {
    if (above.size() > below.size()) return false;
    return std::equal(above.begin(), above.end(), below.begin());
}

bool position_lt(const Position& above, const Position& below) {
    return above.size() < below.size() && position_leq(above, below);
}

bool positions_disjoint(const Position& p, const Position& q) {
    return !position_leq(p, q) && !position_leq(q, p);
}

Term apply_subst(const Term& t, const Substitution& s) {
    if (t.var) {
        auto it = s.find(t.head);
        return it == s.end() ? t : it->second;
    }
    Term out = t;
    for (Term& a : out.args) a = apply_subst(a, s);
    return out;
}

static bool match_into(const Term& pattern, const Term& subject, Substitution& s) {
    if (pattern.var) {
        auto it = s.find(pattern.head);
        if (it != s.end()) return it->second == subject;
        s.emplace(pattern.head, subject);
        return true;
    }
    if (subject.var || pattern.head != subject.head ||
        pattern.args.size() != subject.args.size())
        return false;
    for (std::size_t i = 0; i < pattern.args.size(); ++i)
        if (!match_into(pattern.args[i], subject.args[i], s)) return false;
    return true;
}

std::optional<Substitution> match(const Term& pattern, const Term& subject) {
    Substitution s;
    if (!match_into(pattern, subject, s)) return std::nullopt;
    // Identity bindings would make the stored domain larger than the real one.
    for (auto it = s.begin(); it != s.end();) {
        if (it->second.var && it->second.head == it->first)
            it = s.erase(it);
        else
            ++it;
    }
    return s;
}

Term LinearizedTerm::restore() const {
    Substitution back;
    for (const auto& [fresh, orig] : origin) back.emplace(fresh, Term::mk_var(orig));
    return apply_subst(term, back);
}

static Term linearize_walk(const Term& t, unsigned salt, LinearizedTerm& out) {
    if (t.var) {
        auto& occ = out.occurrences[t.head];
        Symbol fresh = t.head + "#";
        if (salt != 0) fresh += std::to_string(salt) + ".";
        fresh += std::to_string(occ.size() + 1);
        occ.push_back(fresh);
        out.origin.emplace(fresh, t.head);
        return Term::mk_var(fresh);
    }
    Term copy = t;
    for (Term& a : copy.args) a = linearize_walk(a, salt, out);
    return copy;
}

LinearizedTerm linearize(const Term& t, unsigned salt) {
    LinearizedTerm out;
    out.term = linearize_walk(t, salt, out);
    return out;
}

} // namespace confl
