#include "confl/term.hpp"

#include <doctest.h>

#include <algorithm>

using namespace confl;

namespace {

Term V(const Symbol& s) { return Term::mk_var(s); }
Term A(const Symbol& h, std::vector<Term> args = {}) { return Term::mk_app(h, std::move(args)); }

} // namespace

TEST_CASE("term printing") {
    CHECK(to_string(V("x")) == "x");
    CHECK(to_string(A("a")) == "a");
    CHECK(to_string(A("f", {V("x"), A("c", {V("x")})})) == "f(x,c(x))");
}

TEST_CASE("position printing and parsing") {
    CHECK(to_string(Position{}) == "L");
    CHECK(to_string(Position{1, 2}) == "1.2");
    CHECK(*parse_position("L") == Position{});
    CHECK(*parse_position("1.2") == Position{1, 2});
    CHECK(!parse_position("1.x").has_value());
    CHECK(!parse_position("0").has_value());
}

TEST_CASE("size, depth, vars") {
    Term t = A("f", {V("x"), A("c", {V("x")})});
    CHECK(term_size(t) == 4);
    CHECK(term_depth(t) == 3);
    CHECK(term_vars(t) == std::set<Symbol>{"x"});
    CHECK(contains_var(t, "x"));
    CHECK(!contains_var(t, "y"));
}

TEST_CASE("subterm and replacement") {
    Term t = A("f", {V("x"), A("c", {V("y")})});
    REQUIRE(subterm_at(t, {2}) != nullptr);
    CHECK(*subterm_at(t, {2}) == A("c", {V("y")}));
    CHECK(*subterm_at(t, {2, 1}) == V("y"));
    CHECK(subterm_at(t, {3}) == nullptr);
    CHECK(subterm_at(t, {1, 1}) == nullptr);
    Term r = replace_at(t, {2}, A("a"));
    CHECK(to_string(r) == "f(x,a)");
    CHECK_THROWS(replace_at(t, {5}, A("a")));
}

TEST_CASE("fpos walks function positions in preorder") {
    Term t = A("f", {A("g", {V("x")}), A("c", {A("a")})});
    std::vector<Position> ps = fpos(t);
    REQUIRE(ps.size() == 4);
    CHECK(ps[0] == Position{});
    CHECK(ps[1] == Position{1});
    CHECK(ps[2] == Position{2});
    CHECK(ps[3] == Position{2, 1});
}

TEST_CASE("position predicates") {
    CHECK(position_leq({}, {1, 2}));
    CHECK(position_leq({1}, {1, 2}));
    CHECK(!position_leq({1, 2}, {1}));
    CHECK(position_lt({1}, {1, 2}));
    CHECK(!position_lt({1}, {1}));
    CHECK(positions_disjoint({1}, {2, 1}));
    CHECK(!positions_disjoint({1}, {1, 1}));
}

TEST_CASE("var_positions finds every occurrence") {
    Term t = A("f", {V("x"), A("c", {V("x")}), V("y")});
    auto xs = var_positions(t, "x");
    REQUIRE(xs.size() == 2);
    CHECK(xs[0] == Position{1});
    CHECK(xs[1] == Position{2, 1});
    CHECK(var_positions(t, "z").empty());
}

TEST_CASE("substitution application") {
    Term t = A("f", {V("x"), A("c", {V("x")})});
    Substitution s{{"x", A("g")}};
    CHECK(to_string(apply_subst(t, s)) == "f(g,c(g))");
    CHECK(apply_subst(V("y"), s) == V("y"));
}

TEST_CASE("matching binds pattern variables only") {
    Term pat = A("f", {V("x"), A("c", {V("x")})});
    Term good = A("f", {A("g"), A("c", {A("g")})});
    auto m = match(pat, good);
    REQUIRE(m.has_value());
    CHECK(m->at("x") == A("g"));
    Term bad = A("f", {A("g"), A("c", {A("a")})});
    CHECK(!match(pat, bad).has_value());
}

TEST_CASE("matching treats subject variables as rigid") {
    // x in the subject only matches a pattern variable, never a structure
    CHECK(match(A("c", {V("x")}), A("c", {V("x")})).has_value());
    CHECK(!match(A("c", {A("a")}), A("c", {V("x")})).has_value());
    auto m = match(V("y"), V("x"));
    REQUIRE(m.has_value());
    CHECK(m->at("y") == V("x"));
}

TEST_CASE("matching drops identity bindings") {
    auto m = match(A("f", {V("x"), V("y")}), A("f", {V("x"), A("a")}));
    REQUIRE(m.has_value());
    CHECK(m->count("x") == 0);
    CHECK(m->at("y") == A("a"));
}

TEST_CASE("linearization renames repeated variables apart") {
    Term t = A("f", {V("x"), A("c", {V("x")})});
    LinearizedTerm lin = linearize(t);
    auto vs = term_vars(lin.term);
    CHECK(vs.size() == 2);
    // every copy records which original it came from
    for (const auto& v : vs) CHECK(lin.origin.at(v) == "x");
    CHECK(lin.restore() == t);
    // distinct salts keep two linearizations variable-disjoint
    LinearizedTerm other = linearize(t, 7);
    for (const auto& v : term_vars(other.term)) CHECK(!vs.count(v));
}

TEST_CASE("term_less is a strict total order on samples") {
    std::vector<Term> ts = {V("x"),
                            V("y"),
                            A("a"),
                            A("g"),
                            A("c", {V("x")}),
                            A("c", {A("a")}),
                            A("f", {V("x"), V("y")}),
                            A("f", {V("x"), A("c", {V("x")})})};
    for (const auto& a : ts) CHECK(!term_less(a, a));
    for (const auto& a : ts)
        for (const auto& b : ts) {
            if (a == b) continue;
            CHECK(term_less(a, b) != term_less(b, a));
            CHECK((a == b) == (!term_less(a, b) && !term_less(b, a)));
        }
    std::sort(ts.begin(), ts.end(), TermLess{});
    CHECK(std::adjacent_find(ts.begin(), ts.end()) == ts.end());
}
