#include "confl/trs.hpp"

#include <cctype>
#include <sstream>

namespace confl {

bool IndexedTrs::collapsing() const {
    for (const Rule& r : rules)
        if (r.rhs.var) return true;
    return false;
}

namespace {

struct Token {
    enum Kind { LParen, RParen, Comma, Arrow, Ident, End } kind;
    std::string text;   // identifier text
    int index = 1;      // arrow label index
    SourceLoc loc;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Lexer {
public:
    explicit Lexer(const std::string& text) : src_(text) {}

    Token next() {
        skip_ws();
        Token t;
        t.loc = {line_, col_};
        if (pos_ >= src_.size()) {
            t.kind = Token::End;
            return t;
        }
        char c = src_[pos_];
        if (c == '(') { advance(); t.kind = Token::LParen; return t; }
        if (c == ')') { advance(); t.kind = Token::RParen; return t; }
        if (c == ',') { advance(); t.kind = Token::Comma; return t; }
        if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
            advance(); advance();
            t.kind = Token::Arrow;
            std::string digits;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                digits += src_[pos_];
                advance();
            }
            if (!digits.empty()) t.index = std::stoi(digits);
            return t;
        }
        if (ident_start(c)) {
            t.kind = Token::Ident;
            while (pos_ < src_.size() && ident_char(src_[pos_])) {
                t.text += src_[pos_];
                advance();
            }
            return t;
        }
        throw TrsError("syntax-error", t.loc,
                       std::string("unexpected character '") + c + "'");
    }

    /// Consume raw characters through the ')' matching an already-consumed
    /// '('. Comment bodies are free text, so they never reach the tokenizer.
    void skip_raw_section() {
        int depth = 1;
        while (pos_ < src_.size() && depth > 0) {
            char c = src_[pos_];
            if (c == '(') ++depth;
            if (c == ')') --depth;
            advance();
        }
        if (depth > 0)
            throw TrsError("syntax-error", {line_, col_}, "unterminated COMMENT section");
    }

private:
    void advance() {
        if (src_[pos_] == '\n') { ++line_; col_ = 1; } else { ++col_; }
        ++pos_;
    }
    void skip_ws() {
        while (pos_ < src_.size() &&
               std::isspace(static_cast<unsigned char>(src_[pos_])))
            advance();
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) { shift(); }

    IndexedTrs parse_file() {
        while (cur_.kind != Token::End) {
            expect(Token::LParen, "expected '(' starting a section");
            if (cur_.kind == Token::Ident && cur_.text == "COMMENT") {
                lex_.skip_raw_section();  // body is free text; do not tokenize it
                shift();
                continue;
            }
            Token name = expect(Token::Ident, "expected section name");
            if (name.text == "VAR") {
                parse_var_section();
            } else if (name.text == "RULES") {
                parse_rules_section();
            } else if (name.text == "SIG") {
                parse_sig_section();
            } else if (name.text == "CONDITION" || name.text == "CONDITIONTYPE" ||
                       name.text == "STRATEGY" || name.text == "THEORY") {
                throw TrsError("unsupported-section", name.loc,
                               "section " + name.text +
                                   " is not supported: only plain first-order "
                                   "rules are analyzed");
            } else {
                throw TrsError("syntax-error", name.loc,
                               "unknown section " + name.text);
            }
        }
        validate();
        return std::move(trs_);
    }

    Term parse_single_term(const std::set<Symbol>& vars, const IndexedTrs* sig) {
        trs_.variables = vars;
        if (sig) trs_.signature = sig->signature;
        Term t = parse_term_node();
        if (cur_.kind != Token::End)
            throw TrsError("syntax-error", cur_.loc, "trailing input after term");
        return t;
    }

private:
    void shift() { cur_ = lex_.next(); }

    Token expect(Token::Kind k, const std::string& what) {
        if (cur_.kind != k)
            throw TrsError("syntax-error", cur_.loc, what);
        Token t = cur_;
        shift();
        return t;
    }

    void parse_var_section() {
        while (cur_.kind == Token::Ident) {
            trs_.variables.insert(cur_.text);
            shift();
        }
        expect(Token::RParen, "expected ')' closing VAR section");
    }

    void parse_sig_section() {
        while (cur_.kind == Token::LParen) {
            shift();
            Token f = expect(Token::Ident, "expected symbol name in SIG");
            Token n = expect(Token::Ident, "expected arity in SIG");
            int arity = 0;
            for (char c : n.text) {
                if (!std::isdigit(static_cast<unsigned char>(c)))
                    throw TrsError("syntax-error", n.loc, "arity must be a number");
                arity = arity * 10 + (c - '0');
            }
            note_arity(f.text, arity, f.loc);
            expect(Token::RParen, "expected ')' closing SIG entry");
        }
        expect(Token::RParen, "expected ')' closing SIG section");
    }

    void parse_rules_section() {
        while (cur_.kind != Token::RParen) {
            SourceLoc loc = cur_.loc;
            Term lhs = parse_term_node();
            Token arrow = expect(Token::Arrow, "expected '->' in rule");
            Term rhs = parse_term_node();
            check_rule(lhs, rhs, loc);
            trs_.rules.push_back(Rule{std::move(lhs), std::move(rhs), arrow.index});
        }
        shift();
    }

    Term parse_term_node() {
        Token id = expect(Token::Ident, "expected a term");
        bool is_var = trs_.variables.count(id.text) > 0;
        if (cur_.kind != Token::LParen) {
            if (is_var) return Term::mk_var(id.text);
            note_arity(id.text, 0, id.loc);
            return Term::mk_app(id.text);
        }
        if (is_var)
            throw TrsError("syntax-error", id.loc,
                           "variable " + id.text + " cannot take arguments");
        shift();
        std::vector<Term> args;
        args.push_back(parse_term_node());
        while (cur_.kind == Token::Comma) {
            shift();
            args.push_back(parse_term_node());
        }
        expect(Token::RParen, "expected ')' closing argument list");
        note_arity(id.text, static_cast<int>(args.size()), id.loc);
        return Term::mk_app(id.text, std::move(args));
    }

    void note_arity(const Symbol& f, int arity, SourceLoc loc) {
        if (trs_.variables.count(f))
            throw TrsError("syntax-error", loc,
                           "name " + f + " is declared as a variable");
        auto [it, fresh] = trs_.signature.emplace(f, arity);
        if (!fresh && it->second != arity)
            throw TrsError("arity-conflict", loc,
                           "symbol " + f + " used with arity " + std::to_string(arity) +
                               " but previously with " + std::to_string(it->second));
    }

    void check_rule(const Term& lhs, const Term& rhs, SourceLoc loc) {
        if (lhs.var)
            throw TrsError("ill-formed-rule", loc,
                           "left-hand side of a rule cannot be a variable");
        std::set<Symbol> lv = term_vars(lhs);
        for (const Symbol& v : term_vars(rhs))
            if (!lv.count(v))
                throw TrsError("ill-formed-rule", loc,
                               "right-hand side variable " + v +
                                   " does not occur in the left-hand side");
    }

    void validate() {
        // Rules were checked as they were parsed; nothing global remains.
    }

    Lexer lex_;
    Token cur_;
    IndexedTrs trs_;
};

} // namespace

IndexedTrs parse_trs(const std::string& text) {
    return Parser(text).parse_file();
}

Term parse_term(const std::string& text, const std::set<Symbol>& vars,
                const IndexedTrs* trs) {
    return Parser(text).parse_single_term(vars, trs);
}

std::string print_trs(const IndexedTrs& trs) {
    std::ostringstream out;
    out << "(VAR";
    for (const Symbol& v : trs.variables) out << ' ' << v;
    out << ")\n(RULES\n";
    for (const Rule& r : trs.rules) {
        out << "  " << to_string(r.lhs) << " ->";
        if (r.index != 1) out << r.index;
        out << ' ' << to_string(r.rhs) << '\n';
    }
    out << ")\n";
    return out.str();
}

} // namespace confl
