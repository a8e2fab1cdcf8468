#include <map>
#include <set>

#include <json.hpp>

#include "doctest.h"
#include "pgroup/maxclass.hpp"
#include "pgroup/tower.hpp"

using namespace pg;
using json = nlohmann::json;

namespace {
AbelianType T(int p, std::vector<int> e) { return AbelianType{p, std::move(e)}; }

const TreeReport& default_report() {
    static const TreeReport r = search_tree(SearchConfig{});
    return r;
}

TreeNode node_with(const std::vector<AbelianType>& t, const std::vector<int>& kappa, int defect = 0) {
    TreeNode n;
    n.inv.pattern = canonicalize(make_pattern(5, t, kappa));
    n.inv.defect = defect;
    return n;
}

std::vector<std::string> labels_of(const TreeReport& r) {
    std::vector<std::string> v;
    for (const auto& n : r.nodes) v.push_back(n.label);
    return v;
}

const StepCount* step(const TreeNode* n, int s) {
    for (const auto& c : n->counts)
        if (c.step == s) return &c;
    return nullptr;
}
}  // namespace

TEST_CASE("prune filter") {
    SearchConfig cfg;
    std::vector<AbelianType> five(6, T(5, {1, 1}));
    CHECK(prune_filter(node_with(std::vector<AbelianType>(6, T(5, {1, 1, 1})), {0, 0, 0, 0, 0, 0}), cfg) ==
          "ttt_exceeds_ceiling");
    CHECK(prune_filter(node_with(five, {2, 0, 0, 0, 0, 0}), cfg) == "forbidden_tkt");
    CHECK(prune_filter(node_with(five, {1, 0, 0, 0, 0, 0}), cfg) == "");
    CHECK(prune_filter(node_with(five, {1, 0, 0, 0, 0, 0}, 1), cfg) == "positive_defect");
    auto big = five;
    big[0] = T(5, {2, 2, 1, 1});
    CHECK(prune_filter(node_with(big, {1, 0, 0, 0, 0, 0}), cfg) == "ttt_exceeds_ceiling");
    cfg.sigma_filter = true;
    CHECK(prune_filter(node_with(five, {0, 0, 0, 0, 0, 0}), cfg) == "not_sigma");

    PcGroup g = blackburn_group({5, 6, 0, 1, {}});
    TreeWalker w(5, 2);
    std::string l = path_label(w.identify(g));
    TreeNode n;
    n.inv = node_invariants(w.group(l), w.automorphisms(l));
    CHECK(prune_filter(n, SearchConfig{}) == "");
    CHECK(n.inv.pattern.same(canonicalize(SearchConfig{}.target())));
}

TEST_CASE("default search: partitions and hits") {
    const TreeReport& r = default_report();
    CHECK_FALSE(r.incomplete);
    const TreeNode* root = r.find("root");
    REQUIRE(root);
    REQUIRE(step(root, 1));
    CHECK(step(root, 1)->total == 2);
    CHECK(step(root, 1)->capable == 1);

    // the two step order 5^5 parent and the order 5^7 capable roots
    int two_step = 0, tails = 0;
    for (const auto& n : r.nodes) {
        if (n.inv.log_order == 5 && n.counts.size() == 2) {
            ++two_step;
            auto* a = step(&n, 1);
            auto* b = step(&n, 2);
            CHECK(a->total == 21);
            CHECK(a->capable == 2);
            CHECK((std::vector<int>{a->kappa0, a->kappa1, a->kappa2, a->positive}) == std::vector<int>{1, 1, 4, 15});
            CHECK(b->total == 115);
            CHECK(b->capable == 13);
            CHECK((std::vector<int>{b->kappa0, b->kappa1, b->kappa2, b->positive}) == std::vector<int>{3, 5, 32, 75});
        }
        if (n.inv.log_order == 7 && n.expanded) {
            ++tails;
            for (const auto& c : r.nodes)
                if (c.parent == n.label) CHECK(c.status == NodeStatus::Pruned);
        }
    }
    CHECK(two_step == 1);
    CHECK(tails == 3);

    int meta = 0, non_meta = 0;
    for (const auto& h : r.hits) {
        const TreeNode* n = r.find(h);
        if (n->inv.derived_length == 2) {
            ++meta;
            CHECK(n->inv.log_order == 6);
            CHECK(n->inv.d2 == 4);
        } else {
            ++non_meta;
            CHECK(n->inv.log_order == 7);
            CHECK(n->inv.coclass == 2);
            CHECK(n->inv.derived_length == 3);
            CHECK(n->inv.d2 == 3);
            CHECK(n->inv.sigma);
        }
    }
    CHECK(meta == 1);
    CHECK(non_meta == 5);

    // pruned nodes are never expanded; statuses partition the nodes
    for (const auto& n : r.nodes) {
        if (n.status == NodeStatus::Pruned) {
            CHECK_FALSE(n.expanded);
            CHECK_FALSE(n.reason.empty());
        }
        if (!n.parent.empty()) REQUIRE(r.find(n.parent));
    }
}

TEST_CASE("presets identify to hits") {
    const TreeReport& r = default_report();
    std::set<std::string> hits(r.hits.begin(), r.hits.end());
    TreeWalker w(5, 2);
    for (int n : tower_group_ids()) CHECK(hits.count(path_label(w.identify(tower_group(n)))) == 1);
    CHECK(hits.count(path_label(w.identify(tower_metabelian_group(1)))) == 1);
}

TEST_CASE("reruns under changed options") {
    const TreeReport& r = default_report();
    SearchConfig sig;
    sig.sigma_filter = true;
    CHECK(search_tree(sig).hits == r.hits);

    SearchConfig low;
    low.ttt_ceiling = {T(5, {1, 1, 1, 1}), T(5, {1, 1})};
    CHECK(search_tree(low).hits.empty());

    SearchConfig k0;
    k0.admissible_kappa = {"(0,0,0,0,0,0)"};
    CHECK(search_tree(k0).hits.empty());

    SearchConfig jobs;
    jobs.jobs = 2;
    CHECK(report_to_json(search_tree(jobs)) == report_to_json(r));
}

TEST_CASE("order bound truncates and resumes") {
    SearchConfig cfg;
    cfg.max_order = 5;
    TreeReport part = search_tree(cfg);
    CHECK(part.incomplete);
    bool truncated = false;
    for (const auto& n : part.nodes) {
        CHECK(n.inv.log_order <= 5);
        truncated = truncated || n.truncated;
    }
    CHECK(truncated);
    CHECK(part.hits.empty());

    TreeReport full = search_tree(SearchConfig{}, {}, &part);
    CHECK_FALSE(full.incomplete);
    CHECK(full.hits == default_report().hits);
    std::map<std::string, std::string> a, b;
    for (const auto& n : full.nodes) a[n.label] = status_name(n.status) + n.inv.pattern.str();
    for (const auto& n : default_report().nodes) b[n.label] = status_name(n.status) + n.inv.pattern.str();
    CHECK(a == b);

    SearchConfig tiny;
    tiny.max_nodes = 30;
    TreeReport bounded = search_tree(tiny);
    CHECK(bounded.incomplete);
    CHECK(bounded.node_limit);
}

TEST_CASE("level hook sees growing reports") {
    SearchConfig cfg;
    cfg.max_order = 6;
    std::vector<size_t> sizes;
    search_tree(cfg, [&](const TreeReport& r) { sizes.push_back(r.nodes.size()); });
    REQUIRE(sizes.size() >= 3);
    for (size_t i = 1; i < sizes.size(); ++i) CHECK(sizes[i] > sizes[i - 1]);
}

TEST_CASE("store round trip, manifest recount and DOT") {
    const TreeReport& r = default_report();
    std::string text = report_to_json(r);
    TreeReport back = report_from_json(text);
    CHECK(report_to_json(back) == text);
    CHECK(labels_of(back) == labels_of(r));
    for (size_t i = 0; i < r.nodes.size(); ++i) {
        CHECK(back.nodes[i].status == r.nodes[i].status);
        CHECK(back.nodes[i].inv.pattern.same(r.nodes[i].inv.pattern));
        CHECK(back.nodes[i].inv.d2 == r.nodes[i].inv.d2);
    }

    // manifest totals against a recount from the store text
    json store = json::parse(text);
    std::map<int, std::map<std::string, int>> recount;
    for (const auto& n : store["nodes"]) recount[n["invariants"]["log_order"]][n["status"]]++;
    json man = json::parse(run_manifest(r, "t0", "t1", {{"x", true}}));
    CHECK(man["store_version"] == kStoreVersion);
    CHECK(man["nodes"] == store["nodes"].size());
    size_t seen = 0;
    for (const auto& lv : man["levels"]) {
        int lo = lv["log_order"];
        int total = 0;
        for (const auto& [st, k] : recount[lo]) {
            CHECK(lv[st] == k);
            total += k;
        }
        CHECK(lv["total"] == total);
        ++seen;
    }
    CHECK(seen == recount.size());

    std::string dot = report_to_dot(r);
    CHECK(dot.rfind("digraph", 0) == 0);
    CHECK(dot.find("doublecircle") != std::string::npos);

    // malformed stores
    json bad = store;
    bad["version"] = "pgroup-tree/0";
    CHECK_THROWS(report_from_json(bad.dump()));
    bad = store;
    bad["nodes"].push_back(store["nodes"][1]);
    CHECK_THROWS(report_from_json(bad.dump()));
    bad = store;
    bad["nodes"][3]["parent"] = "root-#9;9";
    CHECK_THROWS(report_from_json(bad.dump()));
    CHECK_THROWS(report_from_json("{"));
}

TEST_CASE("cover and Shafarevich cover") {
    TreeWalker w(5, 2);
    PcGroup m = tower_metabelian_group(1);
    CoverResult c = cover(m, 8, &w);
    CHECK_FALSE(c.incomplete);
    REQUIRE(c.members.size() == 6);
    ArtinPattern target = canonicalize(artin_pattern(m));
    int meta = 0;
    for (const auto& n : c.members) {
        CHECK(n.inv.pattern.same(target));
        meta += n.inv.derived_length == 2;
    }
    CHECK(meta == 1);

    CoverResult s = shafarevich_filter(c, {2, 1, 0});
    CHECK(s.members.size() == 5);
    for (const auto& n : s.members) CHECK(n.inv.d2 == 3);
    CHECK(shafarevich_filter(c, {2, 2, 0}).members.size() == 6);
    CHECK(shafarevich_filter(c, {5, 1, 0}).members.empty());
    CHECK_THROWS(shafarevich_filter(c, {0, 1, 0}));
    CHECK_THROWS(shafarevich_filter(c, {2, 1, 2}));
    CHECK(shafarevich_cover(m, {2, 1, 0}, 8, &w).members.size() == 5);

    CoverResult ab = cover(PcGroup(PcPresentation(5, 2)), 4, &w);
    CHECK(ab.members.size() == 1);
    // the metabelian member is capable and stays unexpanded at this bound
    CoverResult cut = cover(m, 6, &w);
    CHECK(cut.incomplete);
    CHECK(cut.members.size() == 1);
}

TEST_CASE("normal lattices") {
    auto names_at = [](const NormalLattice& L) {
        std::map<std::string, int> at;
        for (size_t i = 0; i < L.nodes.size(); ++i)
            for (const auto& n : L.nodes[i].names) at[n] = int(i);
        return at;
    };

    NormalLattice ab = normal_lattice_report(PcGroup(PcPresentation(5, 2)));
    CHECK(ab.nodes.size() == 8);

    // order 125, exponent 5: brute-force normality over all two-generator subgroups
    PcGroup g = blackburn_group({5, 3, 0, 0, {}});
    auto elts = element_enumeration(g);
    std::set<std::vector<Vec>> normal;
    for (const auto& a : elts)
        for (const auto& b : elts) {
            Subgroup h = Subgroup::generated(g, {a, b});
            bool is_normal = true;
            for (const auto& x : h.gens())
                for (const auto& y : {g.gen(0), g.gen(1)}) is_normal = is_normal && h.contains(g.conj(x, y));
            if (is_normal) {
                auto e = h.elements();
                std::sort(e.begin(), e.end());
                normal.insert(e);
            }
        }
    NormalLattice ex = normal_lattice_report(g);
    CHECK(ex.nodes.size() == normal.size());
    CHECK(ex.nodes.size() == 9);

    NormalLattice L = normal_lattice_report(tower_group(361));
    auto at = names_at(L);
    REQUIRE(at.count("gamma2"));
    REQUIRE(at.count("zeta4"));
    CHECK(at["gamma2"] == at["zeta4"]);
    for (int i = 1; i <= 6; ++i) {
        std::string m = "M" + std::to_string(i);
        REQUIRE(at.count(m));
        CHECK(L.nodes[at[m]].log_order == 6);
    }
    REQUIRE(at.count("G''"));
    CHECK(L.nodes[at["G''"]].log_order == 1);
    // index-p edges only
    for (auto [a, b] : L.edges) CHECK(L.nodes[b].log_order == L.nodes[a].log_order + 1);
    CHECK(L.dot().rfind("graph", 0) == 0);
}
