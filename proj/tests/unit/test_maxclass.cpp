#include <map>
#include <stdexcept>

#include "doctest.h"
#include "pgroup/artin.hpp"
#include "pgroup/maxclass.hpp"
#include "pgroup/pgen.hpp"

using namespace pg;

namespace {
AbelianType T(int p, std::vector<int> e) { return AbelianType{p, std::move(e)}; }
}  // namespace

TEST_CASE("nearly homocyclic types") {
    CHECK(nearly_homocyclic(5, 5) == T(5, {2, 1, 1, 1}));
    CHECK(nearly_homocyclic(5, 0).rank() == 0);
    CHECK(nearly_homocyclic(5, 2) == T(5, {1, 1}));
    CHECK(nearly_homocyclic(5, 8) == T(5, {2, 2, 2, 2}));
    CHECK(nearly_homocyclic(3, 5) == T(3, {3, 2}));
    // order p^e and invariants differing by at most one
    for (int p : {3, 5, 7})
        for (int e = 0; e < 20; ++e) {
            AbelianType a = nearly_homocyclic(p, e);
            CHECK(a.log_order() == e);
            if (a.rank()) CHECK(a.e.front() - a.e.back() <= 1);
            if (e >= p - 1) CHECK(a.rank() == p - 1);
        }
}

TEST_CASE("predicted types") {
    auto t = predicted_ttt(5, 5, 0);
    REQUIRE(t.size() == 6);
    CHECK(t[0] == T(5, {2, 1, 1, 1}));
    for (int i = 1; i < 6; ++i) CHECK(t[i] == T(5, {1, 1}));

    auto x = predicted_ttt(5, 2, 0, Exceptional::Extraspecial);
    CHECK(x[0] == T(5, {1, 1}));
    for (int i = 1; i < 6; ++i) CHECK(x[i] == T(5, {2}));

    auto k1 = predicted_ttt(5, 4, 1);
    CHECK(k1[0] == T(5, {1, 1, 1}));
    CHECK(k1[0].log_order() == 5 - 1 - 1);  // m = c + 1

    auto syl = predicted_ttt(3, 3, 0, Exceptional::SylowAlternating);
    CHECK(syl[0] == T(3, {1, 1, 1}));
}

TEST_CASE("parameter checks and parsing") {
    BlackburnParams bp = parse_blackburn("p=5,m=6,z=0,w=1");
    CHECK(bp.p == 5);
    CHECK(bp.m == 6);
    CHECK(bp.w == 1);
    CHECK(bp.k() == 0);
    CHECK(parse_blackburn("p=5,m=7,z=0,w=0", "1,2").a == std::vector<int>{1, 2});

    CHECK_THROWS_AS(check_blackburn_params({5, 4, 0, 0, {1}}), std::invalid_argument);    // k = 0 for m <= 4
    CHECK_THROWS_AS(check_blackburn_params({5, 6, 0, 0, {1, 0, 0}}), std::invalid_argument);  // k > m-4
    CHECK_THROWS_AS(check_blackburn_params({5, 9, 0, 0, {1, 0, 0, 0}}), std::invalid_argument);  // k > p-2
    CHECK_THROWS_AS(check_blackburn_params({5, 6, 0, 0, {0}}), std::invalid_argument);  // leading zero
    CHECK_THROWS_AS(check_blackburn_params({5, 6, 5, 0, {}}), std::invalid_argument);
    CHECK_THROWS(check_blackburn_params(parse_blackburn("p=4,m=6,z=0,w=0")));
    CHECK_THROWS(parse_blackburn("p=5,z=0"));

    CHECK(defect_bound(5, 4) == 0);
    CHECK(defect_bound(5, 6) == 2);
    CHECK(defect_bound(5, 9) == 3);
    CHECK(defect_bound(7, 9) == 5);
    // the bounds disagree for m >= p+1
    CHECK_FALSE(check_blackburn_params({5, 9, 0, 0, {}}).empty());
    CHECK(check_blackburn_params({5, 6, 0, 0, {}}).empty());
}

TEST_CASE("parameter enumeration counts") {
    // p^2 choices of (z,w), and p^b families of length at most b with a nonzero lead
    for (int p : {3, 5, 7})
        for (int m = 3; m <= 8; ++m) {
            size_t n = 0;
            std::map<int, size_t> by_k;
            for_each_params(p, m, [&](const BlackburnParams& bp) {
                ++n;
                ++by_k[bp.k()];
                if (bp.k()) CHECK(bp.a.front() != 0);
            });
            size_t expect = 1;
            for (int i = 0; i < 2 + defect_bound(p, m); ++i) expect *= p;
            CHECK(n == expect);
            CHECK(by_k[0] == size_t(p) * p);
        }
}

TEST_CASE("constructed groups: order, class, coclass, defect, first target order") {
    for (int p : {3, 5})
        for (int m = 3; m <= (p == 3 ? 7 : 6); ++m)
            for_each_params(p, m, [&](const BlackburnParams& bp) {
                if (bp.z + bp.w > 2) return;  // sample small (z,w)
                PcGroup g = blackburn_group(bp);
                CAPTURE(bp.str());
                REQUIRE(check_consistency(g.pres()).empty());
                CHECK(g.log_order() == m);
                CHECK(g.nilpotency_class() == m - 1);
                CHECK(g.coclass() == 1);
                if (m >= 4) CHECK(defect(g) == bp.k());
                if (exceptional_kind(bp) == Exceptional::None) CHECK(ttt(g)[0].log_order() == m - bp.k() - 1);
            });
}

TEST_CASE("exceptional groups") {
    BlackburnParams x{5, 3, 0, 1, {}};
    CHECK(exceptional_kind(x) == Exceptional::Extraspecial);
    auto tx = ttt(blackburn_group(x));
    CHECK(tx == predicted_ttt(5, 2, 0, Exceptional::Extraspecial));

    BlackburnParams s{3, 4, 1, 0, {}};
    CHECK(exceptional_kind(s) == Exceptional::SylowAlternating);
    PcGroup g = blackburn_group(s);
    CHECK(g.log_order() == 4);
    CHECK(ttt(g)[0] == T(3, {1, 1, 1}));

    CHECK(exceptional_kind({5, 3, 0, 0, {}}) == Exceptional::None);
    CHECK(ttt(blackburn_group({5, 3, 0, 0, {}})) == std::vector<AbelianType>(6, T(5, {1, 1})));
}

TEST_CASE("the order 5^6 metabelian group") {
    PcGroup g = blackburn_group({5, 6, 0, 1, {}});
    ArtinPattern ap = canonicalize(artin_pattern(g));
    CHECK(ap.same(canonicalize(make_pattern(5, predicted_ttt(5, 5, 0), {1, 0, 0, 0, 0, 0}))));
    PcGroup root = PcGroup(PcPresentation(5, 2));
    std::string a = identify(g, root);
    CHECK(a == identify(tower_metabelian_group(1), root));
    CHECK(a == identify(tower_metabelian_group(2), root));
}

TEST_CASE("order 5^7 presets") {
    for (int n : tower_group_ids()) {
        PcGroup g = tower_group(n);
        CAPTURE(n);
        CHECK(check_consistency(g.pres()).empty());
        CHECK(g.log_order() == 7);
        CHECK(g.nilpotency_class() == 5);
        CHECK(g.derived_length() == 3);
    }
    CHECK_THROWS(tower_group(360));
}
