#include <array>
#include <random>
#include <set>

#include "doctest.h"
#include "pgroup/maxclass.hpp"
#include "pgroup/pcgroup.hpp"

using namespace pg;

namespace {
using M3 = std::array<int, 9>;
M3 mm(const M3& a, const M3& b) {
    M3 c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int s = 0;
            for (int k = 0; k < 3; ++k) s += a[3 * i + k] * b[3 * k + j];
            c[3 * i + j] = s % 5;
        }
    return c;
}
M3 mpow(M3 a, int e) {
    M3 r{1, 0, 0, 0, 1, 0, 0, 0, 1};
    while (e--) r = mm(r, a);
    return r;
}

PcGroup extraspecial(int z, int w) { return blackburn_group({5, 3, z, w, {}}); }

// the group of order p^n with every relation trivial
PcGroup elementary(int p, int n) { return PcGroup(PcPresentation(p, n)); }
}  // namespace

TEST_CASE("collection in G_0^3(0,0) matches unitriangular matrices") {
    PcGroup g = extraspecial(0, 0);
    REQUIRE(check_consistency(g.pres()).empty());
    CHECK(g.collect({2, 1}) == Vec{1, 1, 1});
    CHECK(g.collect({}) == g.id());

    // normal form x^a y^b s^c  ->  X^a Y^b S^c is a homomorphism
    M3 X{1, 1, 0, 0, 1, 0, 0, 0, 1}, Y{1, 0, 0, 0, 1, 1, 0, 0, 1};
    M3 Xi = mpow(X, 4), Yi = mpow(Y, 4);
    M3 S = mm(mm(mm(Yi, Xi), Y), X);
    auto phi = [&](const Vec& v) { return mm(mm(mpow(X, v[0]), mpow(Y, v[1])), mpow(S, v[2])); };
    std::mt19937 rng(3);
    for (int it = 0; it < 300; ++it) {
        std::vector<int> word;
        M3 prod{1, 0, 0, 0, 1, 0, 0, 0, 1};
        int len = rng() % 12;
        for (int i = 0; i < len; ++i) {
            int gsel = 1 + rng() % 3, sgn = rng() % 2 ? 1 : -1;
            word.push_back(sgn * gsel);
            M3 m = gsel == 1 ? X : gsel == 2 ? Y : S;
            prod = mm(prod, sgn > 0 ? m : mpow(m, 4));
        }
        CHECK(phi(g.collect(word)) == prod);
    }
}

TEST_CASE("group axioms on normal forms") {
    PcGroup g = tower_group(373);
    std::mt19937 rng(5);
    auto rnd = [&] {
        Vec v(g.n());
        for (auto& e : v) e = rng() % 5;
        return v;
    };
    for (int it = 0; it < 200; ++it) {
        Vec a = rnd(), b = rnd(), c = rnd();
        CHECK(g.mul(a, g.inv(a)) == g.id());
        CHECK(g.mul(g.inv(a), a) == g.id());
        CHECK(g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c)));
        CHECK(g.pow(a, 7) == g.mul(g.pow(a, 3), g.pow(a, 4)));
        CHECK(g.comm(a, b) == g.mul(g.inv(g.mul(b, a)), g.mul(a, b)));
    }
}

TEST_CASE("powers in the extraspecial groups") {
    PcGroup g0 = extraspecial(0, 0);
    CHECK(g0.pow(g0.gen(1), 5) == g0.id());
    PcGroup g1 = extraspecial(0, 1);
    CHECK(g1.pow(g1.gen(0), 5) == g1.gen(2));
}

TEST_CASE("consistency of the order 5^7 presentations") {
    for (int n : {361, 373, 374, 385, 386, 635}) {
        PcGroup g = tower_group(n);
        CHECK_MESSAGE(check_consistency(g.pres()).empty(), n);
        CHECK(g.weighted());
    }
    PcGroup g = tower_group(361);
    Vec x5 = g.pow(g.gen(0), 5);
    CHECK(x5 == Vec{0, 0, 0, 0, 0, 1, 0});

    PcPresentation bad = g.pres();
    bad.power[1] = Vec{0, 0, 0, 0, 1, 0, 0};  // y^5 = s4
    auto v = check_consistency(bad);
    CHECK(!v.empty());
}

TEST_CASE("derived from inconsistency: order drops below p^n") {
    // oracle: the subgroup generated by x, y in the faulty presentation's
    // collector is smaller than the nominal order p^7
    PcPresentation bad = tower_group(361).pres();
    bad.power[1] = Vec{0, 0, 0, 0, 1, 0, 0};
    CHECK(!check_consistency(bad).empty());
    PcPresentation ok = tower_group(361).pres();
    CHECK(check_consistency(ok).empty());
}

TEST_CASE("series of the basic groups") {
    PcGroup ab = elementary(5, 2);
    auto lcs = lower_central_series(ab);
    CHECK(lcs.size() == 2);
    CHECK(ab.nilpotency_class() == 1);
    CHECK(centre(ab).log_order() == 2);
    CHECK(ab.derived_length() == 1);

    PcGroup m = blackburn_group({5, 6, 0, 1, {}});
    lcs = lower_central_series(m);
    CHECK(lcs.size() == 6);
    for (size_t j = 1; j + 1 < lcs.size(); ++j) CHECK(lcs[j].log_order() - lcs[j + 1].log_order() == 1);
    CHECK(m.derived_length() == 2);

    PcGroup g = tower_group(361);
    lcs = lower_central_series(g);
    CHECK(g.nilpotency_class() == 5);
    CHECK(g.coclass() == 2);
    CHECK(lcs[4].log_order() == 2);
    CHECK(lcs[4].contains(g.gen(5)));
    CHECK(lcs[4].contains(g.gen(6)));
    CHECK(g.derived_length() == 3);
    auto ds = derived_series(g);
    CHECK(ds[2].log_order() == 1);
    CHECK(ds[2].contains(g.gen(6)));
}

TEST_CASE("upper central series and centre") {
    PcGroup g = tower_group(373);
    auto ucs = upper_central_series(g);
    auto lcs = lower_central_series(g);
    CHECK(ucs.back().log_order() == 7);
    // the top of the upper series below G is the commutator subgroup
    CHECK(ucs[4] == lcs[1]);
    PcGroup e = extraspecial(0, 0);
    CHECK(centre(e).log_order() == 1);
    CHECK(centre(e).contains(e.gen(2)));
}

TEST_CASE("centre against brute force") {
    for (int n : {361, 635}) {
        PcGroup g = tower_group(n);
        std::vector<Vec> cen;
        for_each_element(g, [&](const Vec& x) {
            for (int i = 0; i < g.n(); ++i)
                if (g.comm(x, g.gen(i)) != g.id()) return;
            cen.push_back(x);
        });
        Subgroup z = centre(g);
        CHECK(int(cen.size()) == [&] { int r = 1; for (int i = 0; i < z.log_order(); ++i) r *= 5; return r; }());
        for (auto& x : cen) CHECK(z.contains(x));
    }
}

TEST_CASE("two-step centralizer and defect") {
    for (int m = 3; m <= 6; ++m) CHECK(defect(blackburn_group({5, m, 0, 0, {}})) == 0);
    PcGroup g = blackburn_group({5, 6, 0, 1, {}});
    auto chi = two_step_centralizer(g);
    CHECK(chi.log_order() == 5);
    CHECK(chi.contains(g.gen(1)));
    CHECK(!chi.contains(g.gen(0)));
    CHECK_THROWS(two_step_centralizer(elementary(5, 2)));
    CHECK(defect(blackburn_group({5, 6, 0, 0, {1}})) == 1);
    CHECK(defect(blackburn_group({5, 7, 0, 0, {1, 0}})) == 2);
}

TEST_CASE("quotients and parents") {
    PcGroup g4 = blackburn_group({5, 4, 0, 0, {}});
    PcGroup par = parent(g4);
    CHECK(par.n() == 3);
    CHECK(check_consistency(par.pres()).empty());
    CHECK(par.nilpotency_class() == 2);
    CHECK(parent(elementary(5, 2)).n() == 0);

    PcGroup g = tower_group(361);
    auto mb = metabelianization(g);
    CHECK(mb.n() == 6);
    CHECK(mb.derived_length() == 2);
    CHECK(check_consistency(mb.pres()).empty());
    CHECK(mb.pres().alias[0] == "x");

    // projection is a homomorphism
    Quotient q(g, derived_series(g)[2]);
    std::mt19937 rng(9);
    for (int it = 0; it < 100; ++it) {
        Vec a(7), b(7);
        for (auto& e : a) e = rng() % 5;
        for (auto& e : b) e = rng() % 5;
        CHECK(q.project(g.mul(a, b)) == q.group().mul(q.project(a), q.project(b)));
        CHECK(q.project(q.lift_element(q.project(a))) == q.project(a));
    }
}

TEST_CASE("standardize keeps the group") {
    PcGroup g = tower_group(386);
    PcGroup s = standardize(g);
    CHECK(s.n() == 7);
    CHECK(s.weighted());
    CHECK(check_consistency(s.pres()).empty());
    CHECK(s.nilpotency_class() == 5);
    CHECK(s.derived_length() == 3);
}

TEST_CASE("element enumeration") {
    CHECK(element_enumeration(elementary(5, 2)).size() == 25);
    CHECK(element_enumeration(extraspecial(0, 0)).size() == 125);
    int count = 0;
    for_each_element(tower_group(361), [&](const Vec&) { ++count; });
    CHECK(count == 78125);
    CHECK_THROWS(element_enumeration(elementary(5, 9)));
}

TEST_CASE("order equals the number of distinct products of generators") {
    // closure of the generators under multiplication reaches all p^n normal forms
    for (int n : {635}) {
        PcGroup g = tower_group(n);
        std::set<Vec> seen{g.id()};
        std::vector<Vec> todo{g.id()};
        while (!todo.empty()) {
            Vec x = todo.back();
            todo.pop_back();
            for (int i = 0; i < 2; ++i) {
                Vec y = g.mul(x, g.gen(i));
                if (seen.insert(y).second) todo.push_back(y);
            }
        }
        CHECK(seen.size() == 15625);
    }
}

TEST_CASE("text format round trip") {
    for (int n : {361, 373, 635}) {
        PcPresentation p = tower_group(n).pres();
        std::string t = print_presentation(p);
        PcPresentation q = parse_presentation(t);
        CHECK(q == p);
        CHECK(print_presentation(q) == t);
    }
    PcPresentation s = standardize(tower_group(374)).pres();
    CHECK(parse_presentation(print_presentation(s)) == s);

    auto triv = parse_presentation("prime 5\ngens 0\n");
    CHECK(triv.n == 0);
    CHECK(PcGroup(triv).log_order() == 0);

    auto q = parse_presentation("# comment\nprime 5\ngens 3\nalias x y s2\na3 = [y,x]  # def\nx^5 = s2\n");
    CHECK(q.power[0] == Vec{0, 0, 1});
    CHECK(q.def[2].kind == Definition::Comm);
}

TEST_CASE("parse errors carry line numbers") {
    try {
        parse_presentation("prime 5\ngens 2\n[a2,a1] = a3\n");
        FAIL("expected error");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).rfind("line 3", 0) == 0);
    }
    CHECK_THROWS(parse_presentation("prime 4\ngens 2\na1^4 = 1\n"));
    CHECK_THROWS(parse_presentation("prime 5\ngens 2\na2^5 = a1\n"));
}
