#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "pgroup/artin.hpp"
#include "pgroup/maxclass.hpp"
#include "pgroup/verify.hpp"

using namespace pg;

namespace {
AbelianType T(int p, std::vector<int> e) { return AbelianType{p, std::move(e)}; }
PcGroup elementary(int p, int n) { return PcGroup(PcPresentation(p, n)); }

PcGroup cyclic25() {
    PcPresentation pres(5, 2);
    pres.power[0] = Vec{0, 1};
    pres.infer_definitions();
    return PcGroup(pres);
}

// is there a surjection from the abelian group of type a onto that of type b?
// generators of a go to elements of b whose order divides theirs
bool surjects(const AbelianType& a, const AbelianType& b) {
    const int p = a.p;
    std::vector<int> mod;
    for (int e : b.e) {
        int m = 1;
        for (int i = 0; i < e; ++i) m *= p;
        mod.push_back(m);
    }
    std::vector<std::vector<int>> elts{{}};
    for (int m : mod) {
        std::vector<std::vector<int>> next;
        for (auto& v : elts)
            for (int x = 0; x < m; ++x) {
                auto w = v;
                w.push_back(x);
                next.push_back(w);
            }
        elts = next;
    }
    const size_t order = elts.size();
    auto order_of = [&](const std::vector<int>& v) {
        int k = 1;
        std::vector<int> s = v;
        while (std::any_of(s.begin(), s.end(), [](int x) { return x; })) {
            for (size_t i = 0; i < s.size(); ++i) s[i] = (s[i] + v[i]) % mod[i];
            ++k;
        }
        return k;
    };
    std::vector<int> gen_order;
    for (int e : a.e) {
        int m = 1;
        for (int i = 0; i < e; ++i) m *= p;
        gen_order.push_back(m);
    }
    std::vector<size_t> pick(a.e.size(), 0);
    while (true) {
        bool ok = true;
        for (size_t i = 0; i < pick.size() && ok; ++i) ok = gen_order[i] % order_of(elts[pick[i]]) == 0;
        if (ok) {
            std::set<std::vector<int>> span{std::vector<int>(mod.size(), 0)};
            std::vector<std::vector<int>> queue(span.begin(), span.end());
            for (size_t q = 0; q < queue.size(); ++q)
                for (size_t pi : pick) {
                    auto w = queue[q];
                    for (size_t i = 0; i < w.size(); ++i) w[i] = (w[i] + elts[pi][i]) % mod[i];
                    if (span.insert(w).second) queue.push_back(w);
                }
            if (span.size() == order) return true;
        }
        size_t i = 0;
        while (i < pick.size() && ++pick[i] == order) pick[i++] = 0;
        if (i == pick.size()) return false;
    }
}
}  // namespace

TEST_CASE("maximal subgroups") {
    auto ms = maximal_subgroups(elementary(5, 2));
    REQUIRE(ms.size() == 6);
    for (const auto& m : ms) CHECK(m.sub.log_order() == 1);
    CHECK_THROWS_AS(maximal_subgroups(cyclic25()), std::domain_error);
    CHECK_THROWS(ttt(cyclic25()));
    CHECK(maximal_subgroups(elementary(3, 3)).size() == 13);
}

TEST_CASE("standard ordering on a coclass-1 group") {
    PcGroup g = blackburn_group({5, 6, 0, 1, {}});
    CHECK(ordering_of(g) == Ordering::Standard);
    auto ms = maximal_subgroups(g);
    REQUIRE(ms.size() == 6);
    CHECK(ms[0].sub == two_step_centralizer(g));
    Subgroup der = commutator_subgroup(Subgroup::whole(g), Subgroup::whole(g));
    for (int i = 1; i < 6; ++i) {
        Vec xy = g.mul(g.gen(0), g.pow(g.gen(1), i - 1));
        CHECK(ms[i].sub.contains(xy));
        CHECK(ms[i].sub.contains(der));
    }
}

TEST_CASE("transfers of small groups") {
    // abelian of exponent p: every transfer is trivial
    auto ap = artin_pattern(elementary(5, 2));
    CHECK(ap.ttt == std::vector<AbelianType>(6, T(5, {1})));
    CHECK(ap.tkt_str() == "(0,0,0,0,0,0)");

    auto ex0 = artin_pattern(blackburn_group({5, 3, 0, 0, {}}));
    CHECK(ex0.ttt == std::vector<AbelianType>(6, T(5, {1, 1})));
    CHECK(ex0.tkt_str() == "(0,0,0,0,0,0)");

    // exponent p^2: every kernel is the line of the exponent-p maximal subgroup
    PcGroup g = blackburn_group({5, 3, 0, 1, {}});
    auto ms = maximal_subgroups(g);
    auto k = tkt(g);
    REQUIRE(k.size() == 6);
    for (const auto& c : k) {
        REQUIRE(c.kind == KernelCode::Line);
        CHECK(c.line == k[0].line);
    }
    for (const Vec& x : ms[k[0].line].sub.elements()) CHECK(g.pow(x, 5) == g.id());

    // the order 5^6 metabelian group: fixed point at M1
    auto k6 = tkt(blackburn_group({5, 6, 0, 1, {}}));
    CHECK(k6[0].kind == KernelCode::Line);
    CHECK(k6[0].line == 0);
    for (int i = 1; i < 6; ++i) CHECK(k6[i].kind == KernelCode::Full);
}

TEST_CASE("transfer does not depend on the transversal") {
    std::mt19937 rng(11);
    for (PcGroup g : {blackburn_group({5, 6, 0, 1, {}}), blackburn_group({5, 7, 1, 0, {1, 2}}), tower_group(373)}) {
        for (const auto& m : maximal_subgroups(g)) {
            Transfer a = artin_transfer(g, m);
            for (int it = 0; it < 3; ++it) {
                Vec h = m.sub.gens()[rng() % m.sub.gens().size()];
                Vec t = g.mul(g.pow(m.outside, 1 + rng() % 4), h);
                Transfer b = artin_transfer(g, m, t);
                CHECK(a.kernel == b.kernel);
                CHECK(a.matrix == b.matrix);
            }
        }
    }
}

TEST_CASE("induced computation agrees with element enumeration") {
    std::vector<PcGroup> gs{elementary(5, 2), blackburn_group({5, 3, 0, 1, {}}), blackburn_group({5, 4, 1, 2, {}}),
                            blackburn_group({5, 5, 0, 1, {1}}), blackburn_group({3, 5, 1, 1, {2}}),
                            blackburn_group({3, 4, 1, 0, {}})};
    for (const auto& g : gs) CHECK(oracle_mismatches(g).empty());
}

TEST_CASE("type order against a surjection search") {
    CHECK(compare_types(T(5, {1}), T(5, {1, 1})) == Cmp::Less);
    CHECK(compare_types(T(5, {1, 1}), T(5, {2, 1, 1, 1})) == Cmp::Less);
    CHECK(compare_types(T(5, {2}), T(5, {1, 1})) == Cmp::Incomparable);
    CHECK(compare_types(T(5, {2, 1}), T(5, {2, 1})) == Cmp::Equal);

    std::vector<AbelianType> ts{T(5, {}), T(5, {1}), T(5, {2}), T(5, {1, 1}), T(5, {3}), T(5, {2, 1}), T(5, {1, 1, 1})};
    for (const auto& a : ts)
        for (const auto& b : ts) {
            if (b.log_order() > 2) continue;
            CAPTURE(a.str());
            CAPTURE(b.str());
            Cmp c = compare_types(a, b);
            bool ge = c == Cmp::Greater || c == Cmp::Equal;
            CHECK(ge == surjects(a, b));
        }
}

TEST_CASE("canonical patterns") {
    std::vector<AbelianType> flat(6, T(5, {1, 1}));
    CHECK(canonicalize(make_pattern(5, flat, {0, 0, 3, 0, 0, 0})).tkt_str() == "(1,0,0,0,0,0)");
    CHECK(canonicalize(make_pattern(5, flat, {2, 0, 0, 0, 0, 0})).tkt_str() == "(2,0,0,0,0,0)");
    CHECK(canonicalize(make_pattern(5, flat, {0, 0, 0, 0, 0, 0})).tkt_str() == "(0,0,0,0,0,0)");

    // relabeling invariance and fixed-point counts
    std::mt19937 rng(5);
    for (int it = 0; it < 40; ++it) {
        std::vector<int> kappa(6);
        std::vector<AbelianType> t;
        for (int i = 0; i < 6; ++i) {
            kappa[i] = rng() % 3 ? 0 : 1 + int(rng() % 6);
            t.push_back(rng() % 2 ? T(5, {1, 1}) : T(5, {2, 1}));
        }
        ArtinPattern ap = make_pattern(5, t, kappa);
        ArtinPattern c = canonicalize(ap);
        CHECK(canonicalize(c).same(c));
        std::vector<int> perm{0, 1, 2, 3, 4, 5};
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<int> inv(6), k2(6);
        std::vector<AbelianType> t2(6);
        for (int i = 0; i < 6; ++i) inv[perm[i]] = i;
        for (int i = 0; i < 6; ++i) {
            t2[i] = t[perm[i]];
            k2[i] = kappa[perm[i]] ? inv[kappa[perm[i]] - 1] + 1 : 0;
        }
        CHECK(canonicalize(make_pattern(5, t2, k2)).same(c));
        auto fixed = [](const ArtinPattern& p) {
            int f = 0;
            for (size_t i = 0; i < p.tkt.size(); ++i) f += p.tkt[i].kind == KernelCode::Line && p.tkt[i].line == int(i);
            return f;
        };
        CHECK(fixed(c) == fixed(ap));
    }
}

TEST_CASE("pattern text form") {
    auto t = parse_ttt("[[25,5,5,5],[5,5],[5,5],[5,5],[5,5],[5,5]]", 5);
    REQUIRE(t.size() == 6);
    CHECK(t[0] == T(5, {2, 1, 1, 1}));
    CHECK(parse_kappa("(1,0,0,0,0,0)") == std::vector<int>{1, 0, 0, 0, 0, 0});
    ArtinPattern ap = make_pattern(5, t, parse_kappa("(1,0,0,0,0,0)"));
    CHECK(ap.str() == "tau=[[25,5,5,5],[5,5],[5,5],[5,5],[5,5],[5,5]] kappa=(1,0,0,0,0,0)");
    CHECK_THROWS(parse_ttt("[[25,5", 5));
    CHECK_THROWS(make_pattern(5, t, {1, 0}));
}

TEST_CASE("presets share the pattern of their metabelianization") {
    ArtinPattern target = canonicalize(make_pattern(5, parse_ttt("[[25,5,5,5],[5,5],[5,5],[5,5],[5,5],[5,5]]", 5),
                                                    {1, 0, 0, 0, 0, 0}));
    for (int n : tower_group_ids()) {
        PcGroup g = tower_group(n);
        ArtinPattern a = canonicalize(artin_pattern(g));
        CHECK(a.same(target));
        CHECK(a.same(canonicalize(artin_pattern(metabelianization(g)))));
    }
}

TEST_CASE("positive defect: pattern stabilizes along the coclass-1 edge") {
    for (BlackburnParams bp : {BlackburnParams{5, 6, 0, 1, {1}}, BlackburnParams{5, 7, 0, 0, {1, 0}},
                               BlackburnParams{5, 7, 1, 0, {2, 3}}, BlackburnParams{3, 6, 0, 1, {1}}}) {
        CAPTURE(bp.str());
        PcGroup g = blackburn_group(bp);
        PcGroup q = parent(g);
        CHECK(canonicalize(artin_pattern(g)).same(canonicalize(artin_pattern(q))));
        CHECK(edge_monotony(g).monotone);
    }
}
