#include "pgroup/tower.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "pgroup/maxclass.hpp"

namespace pg {

const char* const kStoreVersion = "pgroup-tree/1";
const char* const kToolVersion = "0.1.0";

NodeInvariants node_invariants(const PcGroup& g, const AutGroup& aut) {
    NodeInvariants inv;
    inv.log_order = g.n();
    inv.nilpotency_class = g.nilpotency_class();
    inv.coclass = g.coclass();
    inv.derived_length = g.derived_length();
    inv.defect = inv.nilpotency_class >= 2 ? defect(g) : 0;
    auto cov = p_covering_group(g);
    inv.d2 = cov.multiplicator_rank();
    inv.nu = cov.nuclear_rank(Generation::LowerCentral);
    inv.sigma = is_sigma_group(g, aut);
    inv.pattern = canonicalize(artin_pattern(g));
    return inv;
}

std::string status_name(NodeStatus s) {
    switch (s) {
    case NodeStatus::Capable: return "capable";
    case NodeStatus::Terminal: return "terminal";
    case NodeStatus::Pruned: return "pruned";
    case NodeStatus::Hit: return "hit";
    }
    return "?";
}

NodeStatus parse_status(const std::string& s) {
    if (s == "capable") return NodeStatus::Capable;
    if (s == "terminal") return NodeStatus::Terminal;
    if (s == "pruned") return NodeStatus::Pruned;
    if (s == "hit") return NodeStatus::Hit;
    throw std::invalid_argument("unknown status " + s);
}

namespace {

bool below(const AbelianType& a, const AbelianType& ceiling) {
    Cmp c = compare_types(a, ceiling);
    return c == Cmp::Less || c == Cmp::Equal;
}

// some component may take the polarized ceiling, all others the plain one
bool within_ceiling(const std::vector<AbelianType>& t, const std::vector<AbelianType>& ceiling) {
    if (ceiling.empty()) return true;
    const AbelianType& rest = ceiling.size() > 1 ? ceiling[1] : ceiling[0];
    int over = 0;
    for (const auto& a : t)
        if (!below(a, rest)) ++over;
    if (over == 0) return true;
    if (over > 1) return false;
    for (const auto& a : t)
        if (!below(a, rest)) return below(a, ceiling[0]);
    return false;
}

void count_child(StepCount& sc, const NodeInvariants& inv) {
    ++sc.total;
    if (inv.nu >= 1) ++sc.capable;
    const std::string k = inv.pattern.tkt_str();
    if (inv.defect >= 1)
        ++sc.positive;
    else if (k == "(0,0,0,0,0,0)")
        ++sc.kappa0;
    else if (k == "(1,0,0,0,0,0)")
        ++sc.kappa1;
    else if (k == "(2,0,0,0,0,0)")
        ++sc.kappa2;
    else
        ++sc.other;
}

NodeStatus classify(TreeNode& node, const SearchConfig& cfg, const ArtinPattern& target) {
    node.reason = prune_filter(node, cfg);
    if (!node.reason.empty()) return NodeStatus::Pruned;
    if (node.inv.pattern.same(target)) return NodeStatus::Hit;
    return node.inv.nu >= 1 ? NodeStatus::Capable : NodeStatus::Terminal;
}

struct ChildWork {
    Child child;
    std::string label;
    NodeInvariants inv;
    AutGroup aut;
    std::string error;
};

// independent per-child work, spread over jobs threads; output order is fixed by index
void compute_children(const Expansion& ex, std::vector<ChildWork>& work, int jobs) {
    std::atomic<size_t> next{0};
    auto run = [&] {
        for (size_t i = next++; i < work.size(); i = next++) {
            try {
                work[i].aut = ex.child_automorphisms(work[i].child);
                work[i].inv = node_invariants(work[i].child.group, work[i].aut);
            } catch (const std::exception& e) {
                work[i].error = e.what();
            }
        }
    };
    jobs = std::max(1, std::min<int>(jobs, int(work.size())));
    if (jobs == 1) {
        run();
    } else {
        std::vector<std::thread> th;
        for (int t = 0; t < jobs; ++t) th.emplace_back(run);
        for (auto& t : th) t.join();
    }
    for (auto& w : work)
        if (!w.error.empty()) throw std::runtime_error(w.label + ": " + w.error);
}

bool expandable(const TreeNode& n) {
    return n.status == NodeStatus::Capable || n.status == NodeStatus::Hit;
}

}  // namespace

std::string prune_filter(const TreeNode& node, const SearchConfig& cfg) {
    const auto& inv = node.inv;
    if (!cfg.admissible_kappa.empty()) {
        const std::string k = inv.pattern.tkt_str();
        if (std::find(cfg.admissible_kappa.begin(), cfg.admissible_kappa.end(), k) == cfg.admissible_kappa.end())
            return "forbidden_tkt";
    }
    if (!within_ceiling(inv.pattern.ttt, cfg.ttt_ceiling)) return "ttt_exceeds_ceiling";
    if (cfg.defect_filter && inv.defect >= 1) return "positive_defect";
    if (cfg.sigma_filter && !inv.sigma) return "not_sigma";
    return "";
}

const TreeNode* TreeReport::find(const std::string& label) const {
    for (const auto& n : nodes)
        if (n.label == label) return &n;
    return nullptr;
}

TreeReport search_tree(const SearchConfig& cfg, const LevelHook& hook, const TreeReport* resume) {
    TreeWalker walker(cfg.p, cfg.d);
    const ArtinPattern target = canonicalize(cfg.target());
    TreeReport rep;
    rep.cfg = cfg;

    if (resume) {
        rep.nodes = resume->nodes;
    } else {
        TreeNode root;
        root.label = "root";
        root.inv = node_invariants(walker.group("root"), walker.automorphisms("root"));
        root.status = classify(root, cfg, target);
        root.presentation = print_presentation(walker.group("root").pres());
        rep.nodes.push_back(std::move(root));
    }

    // step sizes still to be done for n within the order bound; a resumed
    // node may have been expanded only partially
    auto todo = [&](const TreeNode& n) {
        std::vector<int> v;
        if (!expandable(n)) return v;
        for (int s = 1; s <= n.inv.nu && n.inv.log_order + s <= cfg.max_order; ++s) {
            if (!cfg.steps.empty() && std::find(cfg.steps.begin(), cfg.steps.end(), s) == cfg.steps.end()) continue;
            bool done = std::any_of(n.counts.begin(), n.counts.end(), [&](const StepCount& c) { return c.step == s; });
            if (!done) v.push_back(s);
        }
        return v;
    };
    auto pending = [&] {
        std::vector<size_t> f;
        for (size_t i = 0; i < rep.nodes.size(); ++i)
            if (!todo(rep.nodes[i]).empty()) f.push_back(i);
        return f;
    };

    for (auto frontier = pending(); !frontier.empty(); frontier = pending()) {
        std::vector<TreeNode> born;
        for (size_t idx : frontier) {
            TreeNode& parent = rep.nodes[idx];
            const Expansion& ex = walker.expansion(parent.label);
            for (int s : todo(parent)) {
                DescendantBatch batch = ex.descendants(s);
                std::vector<ChildWork> work(batch.children.size());
                for (size_t i = 0; i < work.size(); ++i) {
                    work[i].child = std::move(batch.children[i]);
                    work[i].label = parent.label + "-#" + std::to_string(s) + ";" + std::to_string(work[i].child.counter);
                }
                compute_children(ex, work, cfg.jobs);
                StepCount sc;
                sc.step = s;
                sc.allowable = batch.allowable_count;
                for (auto& w : work) {
                    count_child(sc, w.inv);
                    TreeNode n;
                    n.label = w.label;
                    n.parent = parent.label;
                    n.step = s;
                    n.inv = w.inv;
                    n.status = classify(n, cfg, target);
                    n.presentation = print_presentation(w.child.group.pres());
                    if (expandable(n)) walker.adopt(n.label, w.child.group, w.aut);
                    born.push_back(std::move(n));
                }
                parent.counts.push_back(sc);
            }
            std::sort(parent.counts.begin(), parent.counts.end(),
                      [](const StepCount& a, const StepCount& b) { return a.step < b.step; });
            parent.expanded = true;
            // the parent's covering data is no longer needed
            if (parent.label != "root") walker.forget(parent.label);
        }
        for (auto& n : born) rep.nodes.push_back(std::move(n));
        if (rep.nodes.size() > cfg.max_nodes) {
            rep.incomplete = true;
            rep.node_limit = true;
            break;
        }
        if (hook) hook(rep);
    }

    rep.hits.clear();
    for (auto& n : rep.nodes) {
        if (n.status == NodeStatus::Hit) rep.hits.push_back(n.label);
        // capable with some step skipped for the order bound
        n.truncated = false;
        if (expandable(n))
            for (int s = 1; s <= n.inv.nu && !n.truncated; ++s) {
                if (!cfg.steps.empty() && std::find(cfg.steps.begin(), cfg.steps.end(), s) == cfg.steps.end()) continue;
                n.truncated = std::none_of(n.counts.begin(), n.counts.end(),
                                           [&](const StepCount& c) { return c.step == s; });
            }
        if (n.truncated) rep.incomplete = true;
    }
    return rep;
}

// ---------------------------------------------------------------- covers

namespace {

bool metabelian(const PcGroup& g) { return g.derived_length() <= 2; }

}  // namespace

CoverResult cover(const PcGroup& m, int max_order, TreeWalker* walker) {
    if (!metabelian(m)) throw std::invalid_argument("cover: group is not metabelian");
    std::unique_ptr<TreeWalker> own;
    if (!walker) {
        own = std::make_unique<TreeWalker>(m.p(), 2);
        walker = own.get();
    }
    const auto target = walker->identify(m);

    // a class-j quotient of a member has metabelianization m / gamma_{j+1}, whose label is a prefix
    auto wanted = [&](const PcGroup& h) {
        const int j = h.nilpotency_class();
        const size_t len = std::min<size_t>(target.size(), size_t(std::max(0, j - 1)));
        PcGroup mh = metabelianization(h);
        if (mh.nilpotency_class() != std::min<int>(j, m.nilpotency_class())) return false;
        auto path = walker->identify(mh);
        return path.size() == len && std::equal(path.begin(), path.end(), target.begin());
    };

    CoverResult out;
    std::deque<std::string> queue{"root"};
    auto visit = [&](const std::string& label) {
        const PcGroup& h = walker->group(label);
        if (h.nilpotency_class() >= m.nilpotency_class() && metabelianization(h).n() == m.n()) {
            TreeNode n;
            n.label = label;
            auto path = parse_label(label);
            n.step = path.empty() ? 0 : path.back().step;
            if (!path.empty()) {
                path.pop_back();
                n.parent = path_label(path);
            }
            n.inv = node_invariants(h, walker->automorphisms(label));
            n.status = n.inv.nu >= 1 ? NodeStatus::Capable : NodeStatus::Terminal;
            n.presentation = print_presentation(h.pres());
            out.members.push_back(std::move(n));
        }
    };
    visit("root");
    if (m.n() == 2 && m.nilpotency_class() == 1) return out;

    while (!queue.empty()) {
        std::string label = queue.front();
        queue.pop_front();
        const Expansion& ex = walker->expansion(label);
        const int n0 = ex.group().n();
        for (int s = 1; s <= ex.nuclear_rank(); ++s) {
            if (n0 + s > max_order) {
                out.incomplete = true;
                continue;
            }
            for (const auto& c : ex.descendants(s).children) {
                if (!wanted(c.group)) continue;
                std::string cl = label + "-#" + std::to_string(s) + ";" + std::to_string(c.counter);
                walker->adopt(cl, c.group, ex.child_automorphisms(c));
                visit(cl);
                if (is_capable(c.group)) {
                    if (c.group.n() < max_order)
                        queue.push_back(cl);
                    else
                        out.incomplete = true;
                }
            }
        }
    }
    return out;
}

CoverResult shafarevich_filter(const CoverResult& c, const FieldParams& fp) {
    if (fp.rho < 1 || fp.r < 0 || fp.theta < 0 || fp.theta > 1)
        throw std::invalid_argument("field parameters out of range");
    CoverResult out;
    out.incomplete = c.incomplete;
    for (const auto& n : c.members)
        if (n.inv.d2 >= fp.rho && n.inv.d2 <= fp.rho + fp.r + fp.theta) out.members.push_back(n);
    return out;
}

CoverResult shafarevich_cover(const PcGroup& m, const FieldParams& fp, int max_order, TreeWalker* walker) {
    return shafarevich_filter(cover(m, max_order, walker), fp);
}

// ---------------------------------------------------------------- normal lattice

namespace {

// fully reduced induced sequence: zero above every other leading position
std::vector<Vec> reduced_igs(const PcGroup& g, const Subgroup& s) {
    std::vector<Vec> gens = s.gens();
    const auto& dep = s.depths();
    for (size_t i = 0; i < gens.size(); ++i)
        for (size_t j = i + 1; j < gens.size(); ++j) {
            int e = gens[i][dep[j]];
            if (e) gens[i] = g.mul(gens[i], g.pow(gens[j], g.p() - e));
        }
    return gens;
}

std::string subgroup_key(const PcGroup& g, const Subgroup& s) {
    std::string k;
    for (const auto& v : reduced_igs(g, s)) {
        k.append(v.begin(), v.end());
        k.push_back('|');
    }
    return k;
}

}  // namespace

NormalLattice normal_lattice_report(const PcGroup& g, int max_log) {
    if (g.n() > max_log) throw std::runtime_error("normal lattice: group order above the bound");
    const int p = g.p();
    std::map<std::string, int> index;
    NormalLattice L;
    std::vector<std::pair<int, int>> raw_edges;
    auto add = [&](const Subgroup& s) {
        auto k = subgroup_key(g, s);
        auto it = index.find(k);
        if (it != index.end()) return std::make_pair(it->second, false);
        int id = int(L.nodes.size());
        index[k] = id;
        L.nodes.push_back({s, s.log_order(), {}});
        return std::make_pair(id, true);
    };
    std::deque<int> queue{add(Subgroup(g)).first};
    while (!queue.empty()) {
        const int id = queue.front();
        queue.pop_front();
        Subgroup n = L.nodes[id].sub;
        if (n.log_order() == g.n()) continue;
        // minimal normal subgroups of G/N are the order-p subgroups of its centre
        Quotient Q(g, n);
        const PcGroup& T = Q.group();
        Subgroup z = centre(T);
        std::vector<Vec> socle;
        for (const auto& x : z.elements())
            if (x != T.id() && T.pow(x, p) == T.id()) socle.push_back(x);
        std::set<std::string> seen_lines;
        for (const auto& x : socle) {
            Subgroup line = Subgroup::generated(T, {x});
            if (!seen_lines.insert(subgroup_key(T, line)).second) continue;
            Subgroup up = Subgroup::generated(g, {Q.lift_element(x)}, true, &n);
            auto [uid, fresh] = add(up);
            raw_edges.push_back({id, uid});
            if (fresh) queue.push_back(uid);
        }
    }

    // relabel by order, then key
    std::vector<int> perm(L.nodes.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::string> keys(L.nodes.size());
    for (const auto& [k, i] : index) keys[i] = k;
    std::sort(perm.begin(), perm.end(), [&](int a, int b) {
        if (L.nodes[a].log_order != L.nodes[b].log_order) return L.nodes[a].log_order < L.nodes[b].log_order;
        return keys[a] < keys[b];
    });
    std::vector<int> where(perm.size());
    std::vector<LatticeNode> sorted;
    for (size_t i = 0; i < perm.size(); ++i) {
        where[perm[i]] = int(i);
        sorted.push_back(L.nodes[perm[i]]);
    }
    L.nodes = std::move(sorted);
    for (auto& [a, b] : raw_edges) L.edges.push_back({where[a], where[b]});
    std::sort(L.edges.begin(), L.edges.end());
    L.edges.erase(std::unique(L.edges.begin(), L.edges.end()), L.edges.end());
    std::map<std::string, int> by_key;
    for (size_t i = 0; i < L.nodes.size(); ++i) by_key[subgroup_key(g, L.nodes[i].sub)] = int(i);

    auto name = [&](const Subgroup& s, const std::string& label) {
        auto it = by_key.find(subgroup_key(g, s));
        if (it == by_key.end()) throw std::logic_error("normal lattice: series term missing");
        L.nodes[it->second].names.push_back(label);
    };
    auto lcs = lower_central_series(g);
    for (size_t j = 0; j < lcs.size(); ++j) name(lcs[j], "gamma" + std::to_string(j + 1));
    auto ucs = upper_central_series(g);
    for (size_t j = 1; j < ucs.size(); ++j) name(ucs[j], "zeta" + std::to_string(j));
    auto ds = derived_series(g);
    if (ds.size() > 2) name(ds[2], "G''");
    if (g.n() >= 2 && frattini_data(g).basis.size() >= 2) {
        auto ms = maximal_subgroups(g);
        for (const auto& m : ms) name(m.sub, "M" + std::to_string(m.index + 1));
    }
    return L;
}

std::string NormalLattice::dot() const {
    std::ostringstream os;
    os << "graph normal_lattice {\n  rankdir=BT;\n";
    for (size_t i = 0; i < nodes.size(); ++i) {
        std::string lab = "|N|=p^" + std::to_string(nodes[i].log_order);
        for (const auto& s : nodes[i].names) lab += "\\n" + s;
        os << "  n" << i << " [label=\"" << lab << "\"];\n";
    }
    for (auto [a, b] : edges) os << "  n" << a << " -- n" << b << ";\n";
    os << "}\n";
    return os.str();
}

// ---------------------------------------------------------------- store

namespace {

using nlohmann::json;

json types_json(const std::vector<AbelianType>& t) {
    json a = json::array();
    for (const auto& x : t) a.push_back(x.str());
    return a;
}

std::vector<AbelianType> types_from(const json& a, int p) {
    std::vector<AbelianType> t;
    for (const auto& x : a) t.push_back(parse_abelian_type(x.get<std::string>(), p));
    return t;
}

json config_json(const SearchConfig& c) {
    return {{"p", c.p},
            {"d", c.d},
            {"admissible_kappa", c.admissible_kappa},
            {"ttt_ceiling", types_json(c.ttt_ceiling)},
            {"defect_filter", c.defect_filter},
            {"sigma_filter", c.sigma_filter},
            {"max_order", c.max_order},
            {"steps", c.steps},
            {"target_ttt", types_json(c.target_ttt)},
            {"target_kappa", c.target_kappa},
            {"max_nodes", c.max_nodes}};
}

SearchConfig config_from(const json& j) {
    SearchConfig c;
    c.p = j.at("p");
    c.d = j.at("d");
    c.admissible_kappa = j.at("admissible_kappa").get<std::vector<std::string>>();
    c.ttt_ceiling = types_from(j.at("ttt_ceiling"), c.p);
    c.defect_filter = j.at("defect_filter");
    c.sigma_filter = j.at("sigma_filter");
    c.max_order = j.at("max_order");
    c.steps = j.at("steps").get<std::vector<int>>();
    c.target_ttt = types_from(j.at("target_ttt"), c.p);
    c.target_kappa = j.at("target_kappa").get<std::vector<int>>();
    c.max_nodes = j.at("max_nodes");
    return c;
}

json counts_json(const StepCount& s) {
    return {{"step", s.step},         {"total", s.total},   {"capable", s.capable},
            {"kappa0", s.kappa0},     {"kappa1", s.kappa1}, {"kappa2", s.kappa2},
            {"positive", s.positive}, {"other", s.other},   {"allowable", s.allowable}};
}

}  // namespace

std::string report_to_json(const TreeReport& r) {
    json nodes = json::array();
    for (const auto& n : r.nodes) {
        const auto& v = n.inv;
        json counts = json::array();
        for (const auto& s : n.counts) counts.push_back(counts_json(s));
        nodes.push_back({{"label", n.label},
                         {"parent", n.parent},
                         {"step", n.step},
                         {"status", status_name(n.status)},
                         {"reason", n.reason},
                         {"expanded", n.expanded},
                         {"truncated", n.truncated},
                         {"invariants",
                          {{"log_order", v.log_order},
                           {"class", v.nilpotency_class},
                           {"coclass", v.coclass},
                           {"defect", v.defect},
                           {"derived_length", v.derived_length},
                           {"d2", v.d2},
                           {"nu", v.nu},
                           {"sigma", v.sigma},
                           {"ttt", v.pattern.ttt_str()},
                           {"tkt", v.pattern.tkt_str()}}},
                         {"counts", counts},
                         {"presentation", n.presentation}});
    }
    json j = {{"version", kStoreVersion},
              {"config", config_json(r.cfg)},
              {"incomplete", r.incomplete},
              {"node_limit", r.node_limit},
              {"hits", r.hits},
              {"nodes", nodes}};
    return j.dump(1);
}

TreeReport report_from_json(const std::string& text) {
    json j = json::parse(text);
    if (!j.contains("version") || j["version"] != kStoreVersion)
        throw std::runtime_error("store version mismatch");
    TreeReport r;
    r.cfg = config_from(j.at("config"));
    r.incomplete = j.at("incomplete");
    r.node_limit = j.value("node_limit", false);
    r.hits = j.at("hits").get<std::vector<std::string>>();
    std::set<std::string> labels;
    for (const auto& e : j.at("nodes")) {
        TreeNode n;
        n.label = e.at("label");
        n.parent = e.at("parent");
        if (!labels.insert(n.label).second) throw std::runtime_error("store: duplicate label " + n.label);
        if (!n.parent.empty() && !labels.count(n.parent))
            throw std::runtime_error("store: unresolved parent of " + n.label);
        n.step = e.at("step");
        n.status = parse_status(e.at("status"));
        n.reason = e.at("reason");
        n.expanded = e.at("expanded");
        n.truncated = e.at("truncated");
        const auto& v = e.at("invariants");
        n.inv.log_order = v.at("log_order");
        n.inv.nilpotency_class = v.at("class");
        n.inv.coclass = v.at("coclass");
        n.inv.defect = v.at("defect");
        n.inv.derived_length = v.at("derived_length");
        n.inv.d2 = v.at("d2");
        n.inv.nu = v.at("nu");
        n.inv.sigma = v.at("sigma");
        auto t = parse_ttt(v.at("ttt").get<std::string>(), r.cfg.p);
        auto k = parse_kappa(v.at("tkt").get<std::string>());
        n.inv.pattern = make_pattern(r.cfg.p, t, k);
        n.inv.pattern.canonical = true;
        for (const auto& c : e.at("counts")) {
            StepCount s;
            s.step = c.at("step");
            s.total = c.at("total");
            s.capable = c.at("capable");
            s.kappa0 = c.at("kappa0");
            s.kappa1 = c.at("kappa1");
            s.kappa2 = c.at("kappa2");
            s.positive = c.at("positive");
            s.other = c.at("other");
            s.allowable = c.at("allowable");
            n.counts.push_back(s);
        }
        n.presentation = e.at("presentation");
        r.nodes.push_back(std::move(n));
    }
    return r;
}

std::map<int, std::map<std::string, int>> level_totals(const TreeReport& r) {
    std::map<int, std::map<std::string, int>> t;
    for (const auto& n : r.nodes) ++t[n.inv.log_order][status_name(n.status)];
    return t;
}

std::string run_manifest(const TreeReport& r, const std::string& started, const std::string& finished,
                         const std::vector<Outcome>& acceptance) {
    json levels = json::array();
    for (const auto& [lo, by] : level_totals(r)) {
        json e = {{"log_order", lo}};
        int all = 0;
        for (const auto& [st, k] : by) {
            e[st] = k;
            all += k;
        }
        e["total"] = all;
        levels.push_back(e);
    }
    json acc = json::array();
    for (const auto& o : acceptance) acc.push_back({{"criterion", o.name}, {"pass", o.pass}});
    json j = {{"tool_version", kToolVersion},
              {"store_version", kStoreVersion},
              {"config", config_json(r.cfg)},
              {"started", started},
              {"finished", finished},
              {"nodes", r.nodes.size()},
              {"incomplete", r.incomplete},
              {"hits", r.hits},
              {"levels", levels},
              {"acceptance", acc}};
    return j.dump(1);
}

std::string report_to_dot(const TreeReport& r) {
    std::ostringstream os;
    os << "digraph descendants {\n  rankdir=TB;\n  node [fontsize=10];\n";
    for (const auto& n : r.nodes) {
        std::string shape = "circle", style = "solid";
        switch (n.status) {
        case NodeStatus::Capable: style = "filled"; break;
        case NodeStatus::Terminal: break;
        case NodeStatus::Pruned: shape = "box"; style = "dashed"; break;
        case NodeStatus::Hit: shape = "doublecircle"; style = "filled"; break;
        }
        std::string lab = n.label == "root" ? "root" : n.label.substr(n.label.rfind('-') + 1);
        os << "  \"" << n.label << "\" [label=\"" << lab << "\\n" << r.cfg.p << "^" << n.inv.log_order << "\", shape=" << shape
           << ", style=" << style << ", tooltip=\"" << n.inv.pattern.str() << "\"];\n";
        if (!n.parent.empty()) os << "  \"" << n.parent << "\" -> \"" << n.label << "\";\n";
        if (n.truncated) {
            os << "  \"" << n.label << "_more\" [label=\"...\", shape=plaintext];\n";
            os << "  \"" << n.label << "\" -> \"" << n.label << "_more\" [style=dotted];\n";
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace pg
