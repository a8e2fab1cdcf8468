#include <numeric>

#include "doctest.h"
#include "pgroup/maxclass.hpp"
#include "pgroup/pgen.hpp"

using namespace pg;

namespace {
PcGroup elementary(int p, int n) { return PcGroup(PcPresentation(p, n)); }
}  // namespace

TEST_CASE("covering group of [5,5]") {
    CoveringData cov = p_covering_group(elementary(5, 2));
    CHECK(cov.multiplicator_rank() == 3);
    CHECK(cov.nuclear_rank(Generation::ExponentP) == 3);
    // the tails of x^p and y^p do not raise the class, so only [y,x] survives
    CHECK(cov.nuclear_rank(Generation::LowerCentral) == 1);
    CHECK(cov.cover.log_order() == 5);
    CHECK(check_consistency(cov.cover.pres()).empty());
}

TEST_CASE("relation ranks") {
    CHECK(multiplicator_rank(tower_metabelian_group(1)) == 4);
    for (int n : tower_group_ids()) CHECK(multiplicator_rank(tower_group(n)) == 3);
    CHECK(multiplicator_rank(PcGroup::trivial(5)) == 0);
    CHECK(nuclear_rank(PcGroup::trivial(5)) == 0);
    CHECK_FALSE(is_capable(PcGroup::trivial(5)));
    CHECK(is_capable(elementary(5, 2)));
    for (int n : tower_group_ids()) CHECK(nuclear_rank(tower_group(n)) == 0);
}

TEST_CASE("allowable subgroups and orbits") {
    TreeWalker w(5, 2);
    for (const char* label : {"root", "root-#1;1"}) {
        const Expansion& ex = w.expansion(label);
        for (int s = 1; s <= ex.nuclear_rank(); ++s) {
            auto pts = allowable_subgroups(ex.covering(), s);
            const OrbitPartition& op = ex.orbits(s);
            CHECK(std::accumulate(op.size.begin(), op.size.end(), uint64_t(0)) == pts.size());
            for (const auto& u : pts) CHECK(op.find(u) >= 0);
        }
        CHECK(allowable_subgroups(ex.covering(), ex.nuclear_rank() + 1).empty());
    }
    CHECK(w.expansion("root").orbits(1).rep.size() == 2);
    CHECK(w.expansion("root-#1;1").orbits(1).rep.size() == 4);
    CHECK(w.expansion("root-#1;1").orbits(2).rep.size() == 12);
}

TEST_CASE("children: consistency, order, class, coclass, automorphisms") {
    TreeWalker w(5, 2);
    const Expansion& ex = w.expansion("root-#1;1");
    const PcGroup& g = ex.group();
    int capable = 0;
    for (int s = 1; s <= 2; ++s) {
        DescendantBatch b = ex.descendants(s);
        for (size_t i = 0; i < b.children.size(); ++i) {
            const Child& c = b.children[i];
            CHECK(c.counter == int(i) + 1);
            CHECK(check_consistency(c.group.pres()).empty());
            CHECK(c.group.log_order() == g.log_order() + s);
            CHECK(c.group.nilpotency_class() == g.nilpotency_class() + 1);
            CHECK(c.group.coclass() == g.coclass() + s - 1);
            AutGroup a = ex.child_automorphisms(c);
            for (const auto& x : a.gens()) CHECK(is_automorphism(c.group, x));
            CHECK(a.order() == ex.expected_child_aut_order(c));
            if (s == 2) capable += is_capable(c.group);
        }
    }
    CHECK(capable == 6);
}

TEST_CASE("automorphism arithmetic") {
    TreeWalker w(5, 2);
    REQUIRE(path_label(w.identify(blackburn_group({5, 3, 0, 0, {}}))) == "root-#1;1");
    const AutGroup& a = w.automorphisms("root-#1;1");
    const PcGroup& g = a.group();
    REQUIRE(a.gens().size() >= 2);
    Automorphism x = a.gens()[0], y = a.gens()[1];
    Automorphism xy = compose(g, x, y);
    CHECK(is_automorphism(g, xy));
    CHECK(a.contains(xy));
    CHECK(compose(g, x, aut_inverse(g, x)) == identity_aut(g));
    for (const Vec& v : element_enumeration(g)) CHECK(apply(g, xy, v) == apply(g, y, apply(g, x, v)));
    // extraspecial of exponent p: inner automorphisms p^2, outer GL(2,p)
    CHECK(a.order() == Order(25) * 480);
}

TEST_CASE("identify round trip") {
    TreeWalker w(5, 2);
    for (const char* label : {"root-#1;1", "root-#1;2", "root-#1;1-#1;3", "root-#1;1-#2;4", "root-#1;1-#1;1-#1;2"}) {
        CAPTURE(label);
        PcGroup g = w.group(label);
        TreeWalker fresh(5, 2);
        CHECK(path_label(fresh.identify(g)) == label);
        // recomputed presentation of the same group
        CHECK(path_label(fresh.identify(standardize(g))) == label);
    }
    CHECK(parse_label("root-#1;1-#2;3") == std::vector<PathStep>{{1, 1}, {2, 3}});
    CHECK(path_label({}) == "root");
    CHECK_THROWS(w.identify(PcGroup(PcPresentation(5, 3))));
}

TEST_CASE("preset labels") {
    TreeWalker w(5, 2);
    std::vector<std::string> labels;
    for (int n : tower_group_ids()) labels.push_back(path_label(w.identify(tower_group(n))));
    std::sort(labels.begin(), labels.end());
    CHECK(std::unique(labels.begin(), labels.end()) == labels.end());
    for (const auto& l : labels) {
        auto path = parse_label(l);
        CHECK(path.back().step == 2);
        CHECK(l.substr(0, l.rfind('-')) == labels[0].substr(0, labels[0].rfind('-')));
    }
}

TEST_CASE("sigma groups") {
    PcGroup ab = elementary(5, 2);
    CHECK(is_sigma_group(ab, AutGroup::general_linear(ab)));
    TreeWalker w(5, 2);
    std::string x = path_label(w.identify(blackburn_group({5, 3, 0, 1, {}})));
    CHECK_FALSE(is_sigma_group(w.group(x), w.automorphisms(x)));
    std::string e = path_label(w.identify(blackburn_group({5, 3, 0, 0, {}})));
    CHECK(is_sigma_group(w.group(e), w.automorphisms(e)));
    for (int n : tower_group_ids()) {
        std::string l = path_label(w.identify(tower_group(n)));
        CHECK(is_sigma_group(w.group(l), w.automorphisms(l)));
    }
}
