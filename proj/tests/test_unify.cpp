#include "confl/unify.hpp"

#include <doctest.h>

#include <random>

using namespace confl;

namespace {

Term V(const Symbol& s) { return Term::mk_var(s); }
Term A(const Symbol& h, std::vector<Term> args = {}) { return Term::mk_app(h, std::move(args)); }

UnifProblem prob(std::vector<Equation> eqs) {
    UnifProblem p;
    p.eqs = std::move(eqs);
    p.vars = p.var_names_used();
    return p;
}

// random terms over f/2, c/1, g/0, a/0 and the variables x, y, z, w
Term random_term(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 5 : 7);
    switch (pick(rng)) {
        case 0: return V("x");
        case 1: return V("y");
        case 2: return V("z");
        case 3: return V("w");
        case 4: return A("g");
        case 5: return A("a");
        case 6: return A("c", {random_term(rng, depth - 1)});
        default: return A("f", {random_term(rng, depth - 1), random_term(rng, depth - 1)});
    }
}

} // namespace

TEST_CASE("trivial problems") {
    SolvedForm sf = solve(prob({{V("x"), V("x")}}));
    CHECK(!sf.bottom);
    CHECK(!sf.omega());
    CHECK(sf.finite_eqs.empty());

    sf = solve(prob({{A("a"), A("b")}}));
    CHECK(sf.bottom);

    sf = solve(prob({{V("x"), A("a")}}));
    REQUIRE(sf.finite_eqs.size() == 1);
    CHECK(to_string(sf.finite_eqs[0]) == "x = a");
}

TEST_CASE("occur equations become cyclic, not failures") {
    SolvedForm sf = solve(prob({{V("x"), A("c", {V("x")})}}));
    CHECK(!sf.bottom);
    REQUIRE(sf.omega());
    REQUIRE(sf.cyclic_eqs.size() == 1);
    CHECK(to_string(sf.cyclic_eqs[0]) == "x = c(x)");
    CHECK(sf.parameters.empty());
}

TEST_CASE("the nkh-style overlap equation solves to the double cycle") {
    UnifProblem p = prob({{A("f", {V("x"), V("x")}), A("f", {V("x'"), A("c", {V("x'")})})}});
    SolveTrace trace;
    SolvedForm sf = solve(p, &trace);
    REQUIRE(trace.steps.size() == 3);
    CHECK(trace.steps[0].first.rule == UnifRule::Decomp);
    CHECK(trace.steps[1].first.rule == UnifRule::Coalesce);
    CHECK(trace.steps[2].first.rule == UnifRule::Merep);
    REQUIRE(sf.omega());
    REQUIRE(sf.cyclic_eqs.size() == 2);
    CHECK(to_string(sf.cyclic_eqs[0]) == "x = c(x')");
    CHECK(to_string(sf.cyclic_eqs[1]) == "x' = c(x')");
    CHECK(sf.finite_eqs.empty());
    CHECK(sf.parameters.empty());
}

TEST_CASE("three-argument example yields one finite and two cyclic equations") {
    // f(x,z,z) = f(a,y,c(y))
    UnifProblem p = prob({{A("f", {V("x"), V("z"), V("z")}),
                           A("f", {A("a"), V("y"), A("c", {V("y")})})}});
    SolvedForm sf = solve(p);
    REQUIRE(sf.finite_eqs.size() == 1);
    CHECK(to_string(sf.finite_eqs[0]) == "x = a");
    REQUIRE(sf.cyclic_eqs.size() == 2);
    CHECK(to_string(sf.cyclic_eqs[0]) == "z = c(y)");
    CHECK(to_string(sf.cyclic_eqs[1]) == "y = c(y)");
    CHECK(sf.parameters.empty());
}

TEST_CASE("parameters are the untouched variables") {
    SolvedForm sf = solve(prob({{V("x"), A("c", {V("y")})}}));
    CHECK(sf.parameters == std::set<Symbol>{"y"});
    REQUIRE(sf.finite_eqs.size() == 1);
    CHECK(to_string(sf.finite_eqs[0]) == "x = c(y)");
}

TEST_CASE("individual rules fire exactly under their side conditions") {
    SUBCASE("Remove") {
        UnifProblem p = prob({{A("a"), A("a")}, {V("x"), A("b")}});
        auto site = find_rule_site(p, UnifRule::Remove);
        REQUIRE(site.has_value());
        CHECK(site->eq == 0);
        UnifProblem q = apply_rule_at(p, *site);
        REQUIRE(q.eqs.size() == 1);
        CHECK(to_string(q.eqs[0]) == "x = b");
    }
    SUBCASE("Decomp splices argument equations in place") {
        UnifProblem p = prob({{A("f", {V("x"), A("a")}), A("f", {A("b"), V("y")})},
                              {V("z"), A("g")}});
        UnifProblem q = apply_rule(p, UnifRule::Decomp);
        REQUIRE(q.eqs.size() == 3);
        CHECK(to_string(q.eqs[0]) == "x = b");
        CHECK(to_string(q.eqs[1]) == "a = y");
        CHECK(to_string(q.eqs[2]) == "z = g");
    }
    SUBCASE("Conflict bottoms out") {
        UnifProblem p = prob({{A("a"), A("b")}});
        CHECK(apply_rule(p, UnifRule::Conflict).bottom);
    }
    SUBCASE("Coalesce needs both variables in the rest") {
        UnifProblem p = prob({{V("x"), V("y")}, {A("c", {V("x")}), A("c", {V("y")})}});
        auto site = find_rule_site(p, UnifRule::Coalesce);
        REQUIRE(site.has_value());
        UnifProblem q = apply_rule_at(p, *site);
        CHECK(to_string(q.eqs[0]) == "x = y");
        CHECK(to_string(q.eqs[1]) == "c(y) = c(y)");
        // no occurrence in the rest: Coalesce must not fire
        UnifProblem solo = prob({{V("x"), V("y")}});
        CHECK(!find_rule_site(solo, UnifRule::Coalesce).has_value());
        CHECK_THROWS_AS(apply_rule(solo, UnifRule::Coalesce), NotApplicable);
    }
    SUBCASE("Merge keeps the smaller side and rewrites the other equation") {
        UnifProblem p = prob({{V("x"), A("c", {A("c", {A("a")})})},
                              {V("x"), A("c", {V("y")})}});
        auto site = find_rule_site(p, UnifRule::Merge);
        REQUIRE(site.has_value());
        UnifProblem q = apply_rule_at(p, *site);
        REQUIRE(q.eqs.size() == 2);
        // the smaller right-hand side c(y) survives; the larger equation
        // turns into c(y) = c(c(a)) in place
        CHECK(to_string(q.eqs[0]) == "c(y) = c(c(a))");
        CHECK(to_string(q.eqs[1]) == "x = c(y)");
    }
    SUBCASE("Replace substitutes a non-variable binding without occurrence") {
        UnifProblem p = prob({{V("x"), A("c", {V("y")})}, {A("f", {V("x"), V("x")}), V("z")}});
        auto site = find_rule_site(p, UnifRule::Replace);
        REQUIRE(site.has_value());
        UnifProblem q = apply_rule_at(p, *site);
        CHECK(to_string(q.eqs[0]) == "x = c(y)");
        CHECK(to_string(q.eqs[1]) == "f(c(y),c(y)) = z");
        // occurrence of x in its own binding blocks Replace
        UnifProblem occ = prob({{V("x"), A("c", {V("x")})}, {V("x"), V("z")}});
        CHECK(!find_rule_site(occ, UnifRule::Replace).has_value());
    }
    SUBCASE("Choose orients an isolated left variable towards the shared one") {
        UnifProblem p = prob({{V("y"), V("x")}, {A("c", {V("y")}), A("a")}});
        auto site = find_rule_site(p, UnifRule::Choose);
        REQUIRE(site.has_value());
        UnifProblem q = apply_rule_at(p, *site);
        CHECK(to_string(q.eqs[0]) == "x = y");
    }
    SUBCASE("Swap moves the variable to the left") {
        UnifProblem p = prob({{A("c", {V("y")}), V("x")}});
        UnifProblem q = apply_rule(p, UnifRule::Swap);
        CHECK(to_string(q.eqs[0]) == "x = c(y)");
    }
    SUBCASE("Merep rewrites the variable chain into the cycle") {
        // y = x and x = c(x): x occurs in c(x), y occurs nowhere else
        UnifProblem p = prob({{V("y"), V("x")}, {V("x"), A("c", {V("x")})}});
        auto site = find_rule_site(p, UnifRule::Merep);
        REQUIRE(site.has_value());
        CHECK(site->eq == 0);
        CHECK(site->eq2 == 1);
        UnifProblem q = apply_rule_at(p, *site);
        CHECK(to_string(q.eqs[0]) == "y = c(x)");
        CHECK(to_string(q.eqs[1]) == "x = c(x)");
        // if y occurs elsewhere the side condition fails
        UnifProblem busy = prob({{V("y"), V("x")}, {V("x"), A("c", {V("x")})},
                                 {V("y"), A("a")}});
        CHECK(!find_rule_site(busy, UnifRule::Merep).has_value());
        // if x does not occur in s, Replace handles it and Merep stays out
        UnifProblem plain = prob({{V("y"), V("x")}, {V("x"), A("c", {V("z")})}});
        CHECK(!find_rule_site(plain, UnifRule::Merep).has_value());
    }
}

TEST_CASE("merep applies only when nothing else does") {
    UnifProblem p = prob({{V("y"), V("x")}, {V("x"), A("c", {V("x")})}});
    auto any = find_any_site(p);
    REQUIRE(any.has_value());
    CHECK(any->rule == UnifRule::Merep);
}

TEST_CASE("solved forms are strategy independent for the overlap equation") {
    UnifProblem p = prob({{A("f", {V("x"), V("x")}), A("f", {V("x'"), A("c", {V("x'")})})}});
    SolvedForm canonical = solve(p);

    // alternative legal derivation: Decomp, then Replace on the second
    // equation, then Swap
    UnifProblem q = apply_rule_at(p, {UnifRule::Decomp, 0});
    REQUIRE(q.eqs.size() == 2);
    auto rep = find_rule_site(q, UnifRule::Replace);
    REQUIRE(rep.has_value());
    CHECK(rep->eq == 1);
    q = apply_rule_at(q, *rep);
    q = apply_rule_at(q, {UnifRule::Swap, 0});
    CHECK(!find_any_site(q).has_value());
    SolvedForm alt = classify(q);
    REQUIRE(alt.omega());
    CHECK(alt.parameters == canonical.parameters);
    // same equations up to order
    std::multiset<std::string> a, b;
    for (const auto& e : alt.cyclic_eqs) a.insert(to_string(e));
    for (const auto& e : canonical.cyclic_eqs) b.insert(to_string(e));
    CHECK(a == b);
    CHECK(alt.finite_eqs == canonical.finite_eqs);
}

TEST_CASE("classify rejects problems that are not solved forms") {
    CHECK_THROWS_AS(classify(prob({{A("a"), V("x")}})), std::logic_error);
    CHECK_THROWS_AS(classify(prob({{V("x"), A("a")}, {V("x"), A("b")}})), std::logic_error);
}

TEST_CASE("property: the strategy terminates with a decreasing measure") {
    std::mt19937 rng(20240811);
    int omega_seen = 0, bottom_seen = 0, tree_seen = 0;
    for (int iter = 0; iter < 1200; ++iter) {
        UnifProblem p;
        std::uniform_int_distribution<int> neq(1, 3);
        int n = neq(rng);
        for (int k = 0; k < n; ++k)
            p.eqs.push_back({random_term(rng, 3), random_term(rng, 3)});
        p.vars = p.var_names_used();

        SolveTrace trace;
        SolvedForm sf = solve(p, &trace);

        UnifProblem prev = trace.initial;
        bool merep_phase = false;
        for (const auto& [site, after] : trace.steps) {
            if (after.bottom) break;
            if (site.rule == UnifRule::Merep) {
                // strictly fewer var = var equations; shuts out the other rules
                CHECK(var_var_count(after) < var_var_count(prev));
                merep_phase = true;
            } else {
                CHECK(!merep_phase);
                CHECK(measure_less(measure(after), measure(prev)));
            }
            prev = after;
        }

        if (sf.bottom) {
            ++bottom_seen;
            continue;
        }
        if (sf.omega())
            ++omega_seen;
        else
            ++tree_seen;

        // solved-form clauses, straight from the definition
        std::set<Symbol> lhs_seen;
        for (const auto& e : sf.normal_form.eqs) {
            REQUIRE(e.lhs.var);
            CHECK(lhs_seen.insert(e.lhs.head).second);
        }
        const auto params = sf.parameters;
        const auto ybar = sf.cyclic_lhs();
        for (const auto& e : sf.finite_eqs)
            for (const auto& v : term_vars(e.rhs)) CHECK(params.count(v) == 1);
        for (const auto& e : sf.cyclic_eqs) {
            CHECK(!e.rhs.var);
            bool touches_cycle = false;
            for (const auto& v : term_vars(e.rhs)) {
                CHECK((params.count(v) || ybar.count(v)));
                if (ybar.count(v)) touches_cycle = true;
            }
            CHECK(touches_cycle);
        }
        // solved variables never appear in finite right-hand sides
        for (const auto& e : sf.finite_eqs)
            for (const auto& v : term_vars(e.rhs)) {
                CHECK(sf.finite_lhs().count(v) == 0);
                CHECK(ybar.count(v) == 0);
            }
    }
    // the generator must exercise all three outcomes
    CHECK(omega_seen > 50);
    CHECK(bottom_seen > 50);
    CHECK(tree_seen > 50);
}
