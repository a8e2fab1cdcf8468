#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pgroup/artin.hpp"
#include "pgroup/maxclass.hpp"
#include "pgroup/pcgroup.hpp"
#include "pgroup/pgen.hpp"
#include "pgroup/tower.hpp"
#include "pgroup/verify.hpp"

using namespace pg;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

enum Exit { kPass = 0, kMismatch = 1, kUsage = 2, kResource = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string now_utc() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// write through a temporary so a killed run never leaves a torn store
void write_file(const fs::path& path, const std::string& text) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw UsageError("cannot write " + path.string());
        out << text;
        if (!text.empty() && text.back() != '\n') out << '\n';
    }
    fs::rename(tmp, path);
}

std::vector<int> orders(const std::vector<Subgroup>& series) {
    std::vector<int> v;
    for (const auto& s : series) v.push_back(s.log_order());
    return v;
}

std::string join(const std::vector<int>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

// ---------------------------------------------------------------- group

struct GroupArgs {
    std::string file;
    std::string blackburn;
    std::string a;
    std::string preset;
    bool as_json = false;
    bool lattice = false;
    std::string dot;
    bool no_identify = false;
};

struct Built {
    PcGroup g;
    std::string source;
    std::string note;
};

Built build_group(const GroupArgs& a) {
    int sources = !a.file.empty() + !a.blackburn.empty() + !a.preset.empty();
    if (sources != 1) throw UsageError("give exactly one of a presentation file, --blackburn, --paper-group");
    if (!a.a.empty() && a.blackburn.empty()) throw UsageError("--a needs --blackburn");
    Built b;
    if (!a.file.empty()) {
        PcPresentation pres;
        try {
            pres = parse_presentation(read_file(a.file));
        } catch (const UsageError&) {
            throw;
        } catch (const std::exception& e) {
            throw UsageError(a.file + ": " + e.what());
        }
        auto bad = check_consistency(pres);
        if (!bad.empty()) {
            std::string msg = a.file + ": inconsistent presentation, " + std::to_string(bad.size()) + " failing test word(s)";
            for (size_t i = 0; i < std::min<size_t>(bad.size(), 5); ++i)
                msg += "\n  " + bad[i].overlap + ": " + format_vec(pres, bad[i].left) + " vs " +
                       format_vec(pres, bad[i].right);
            throw UsageError(msg);
        }
        b.g = PcGroup(pres);
        b.source = a.file;
        return b;
    }
    if (!a.blackburn.empty()) {
        BlackburnParams bp;
        try {
            bp = parse_blackburn(a.blackburn, a.a);
            for (const auto& w : check_blackburn_params(bp)) std::cerr << "warning: " << w << "\n";
        } catch (const std::exception& e) {
            throw UsageError(std::string("--blackburn: ") + e.what());
        }
        b.g = blackburn_group(bp);
        b.source = bp.str();
        if (bp.m == 3) b.note = exceptional_kind(bp) == Exceptional::Extraspecial ? "extraspecial, exponent p^2"
                                                                                 : "extraspecial, exponent p";
        if (exceptional_kind(bp) == Exceptional::SylowAlternating)
            b.note = "Sylow subgroup of the alternating group on p^2 points";
        return b;
    }
    std::string s = a.preset;
    if (s.rfind("n=", 0) == 0) s = s.substr(2);
    int n = 0;
    try {
        size_t used = 0;
        n = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument("");
        b.g = tower_group(n);
    } catch (const std::exception&) {
        throw UsageError("--paper-group expects n=361|373|374|385|386|635");
    }
    b.source = "G_" + std::to_string(n);
    return b;
}

json group_report(const Built& b, const GroupArgs& a) {
    const PcGroup& g = b.g;
    json j;
    j["source"] = b.source;
    if (!b.note.empty()) j["note"] = b.note;
    j["p"] = g.p();
    j["log_order"] = g.n();
    j["class"] = g.nilpotency_class();
    j["coclass"] = g.coclass();
    j["derived_length"] = g.derived_length();
    j["series"] = {{"lower_central", orders(lower_central_series(g))},
                   {"exponent_p_central", orders(exponent_p_central_series(g))},
                   {"derived", orders(derived_series(g))},
                   {"upper_central", orders(upper_central_series(g))}};
    if (g.n() == 0) return j;
    j["d2"] = multiplicator_rank(g);
    j["nuclear_rank"] = nuclear_rank(g);
    try {
        j["defect"] = defect(g);
    } catch (const std::exception&) {
    }
    try {
        ArtinPattern raw = artin_pattern(g);
        ArtinPattern can = canonicalize(raw);
        j["pattern"] = raw.str();
        j["canonical_pattern"] = can.str();
        j["ordering"] = raw.ordering == Ordering::Standard ? "standard" : "echelon";
    } catch (const std::exception& e) {
        j["pattern_error"] = e.what();
    }
    if (!a.no_identify) {
        try {
            TreeWalker w(g.p(), int(frattini_data(g).basis.size()));
            std::string label = path_label(w.identify(g));
            j["label"] = label;
            j["sigma"] = is_sigma_group(w.group(label), w.automorphisms(label));
        } catch (const std::exception& e) {
            j["label_error"] = e.what();
        }
    }
    if (a.lattice) {
        NormalLattice L = normal_lattice_report(g);
        json nodes = json::array();
        for (const auto& n : L.nodes) nodes.push_back({{"log_order", n.log_order}, {"names", n.names}});
        j["normal_lattice"] = {{"nodes", nodes}, {"edges", L.edges}};
        if (!a.dot.empty()) write_file(a.dot, L.dot());
    }
    return j;
}

void print_group(const json& j, std::ostream& os) {
    os << "group " << j["source"].get<std::string>();
    if (j.contains("note")) os << " (" << j["note"].get<std::string>() << ")";
    os << "\n";
    int p = j["p"], n = j["log_order"];
    os << "  order          " << (n == 0 ? std::string("1") : std::to_string(p) + "^" + std::to_string(n)) << "\n";
    os << "  class          " << j["class"] << "\n";
    os << "  coclass        " << j["coclass"] << "\n";
    os << "  derived length " << j["derived_length"] << "\n";
    for (const char* k : {"d2", "nuclear_rank", "defect"})
        if (j.contains(k)) os << "  " << std::left << std::setw(15) << k << j[k] << "\n";
    const auto& s = j["series"];
    os << "  lower central  " << join(s["lower_central"]) << "\n";
    os << "  derived        " << join(s["derived"]) << "\n";
    os << "  upper central  " << join(s["upper_central"]) << "\n";
    if (j.contains("pattern")) {
        os << "  pattern        " << j["pattern"].get<std::string>() << " (" << j["ordering"].get<std::string>()
           << ")\n";
        os << "  canonical      " << j["canonical_pattern"].get<std::string>() << "\n";
    } else if (j.contains("pattern_error")) {
        os << "  pattern        n/a: " << j["pattern_error"].get<std::string>() << "\n";
    }
    if (j.contains("label")) {
        os << "  label          " << j["label"].get<std::string>() << "\n";
        os << "  sigma          " << (j["sigma"].get<bool>() ? "yes" : "no") << "\n";
    } else if (j.contains("label_error")) {
        os << "  label          n/a: " << j["label_error"].get<std::string>() << "\n";
    }
    if (j.contains("normal_lattice")) {
        const auto& L = j["normal_lattice"];
        os << "  normal lattice " << L["nodes"].size() << " subgroups, " << L["edges"].size() << " index-p edges\n";
        for (const auto& nd : L["nodes"]) {
            if (nd["names"].empty()) continue;
            os << "    order p^" << nd["log_order"] << ":";
            for (const auto& nm : nd["names"]) os << " " << nm.get<std::string>();
            os << "\n";
        }
    }
}

int cmd_group(const GroupArgs& a) {
    Built b = build_group(a);
    json j = group_report(b, a);
    if (a.as_json)
        std::cout << j.dump(1) << "\n";
    else
        print_group(j, std::cout);
    return kPass;
}

// ---------------------------------------------------------------- tree

struct TreeArgs {
    int max_order = 8;
    std::vector<std::string> kappa;
    std::string ceiling;
    std::string target_ttt, target_kappa;
    bool real_quadratic = false;
    bool no_defect_filter = false;
    std::string resume;
    std::string store;
    std::string out = "tree-out";
    bool verify = false;
    int jobs = 1;
    size_t max_nodes = 100000;
    bool quiet = false;
};

SearchConfig tree_config(const TreeArgs& a) {
    SearchConfig c;
    c.max_order = a.max_order;
    c.jobs = a.jobs;
    c.max_nodes = a.max_nodes;
    c.sigma_filter = a.real_quadratic;
    c.defect_filter = !a.no_defect_filter;
    try {
        if (!a.kappa.empty()) {
            c.admissible_kappa.clear();
            for (const auto& arg : a.kappa) {
                std::stringstream ss(arg);
                std::string item;
                while (std::getline(ss, item, ';')) {
                    if (item.empty()) continue;
                    // round-trip through the parser to get the canonical spelling
                    auto k = parse_kappa(item);
                    std::string s = "(";
                    for (size_t i = 0; i < k.size(); ++i) s += (i ? "," : "") + std::to_string(k[i]);
                    c.admissible_kappa.push_back(s + ")");
                }
            }
        }
        if (!a.ceiling.empty()) {
            c.ttt_ceiling = parse_ttt(a.ceiling, c.p);
            if (c.ttt_ceiling.size() != 2) throw std::invalid_argument("expected [first,other]");
        }
        if (!a.target_ttt.empty()) c.target_ttt = parse_ttt(a.target_ttt, c.p);
        if (!a.target_kappa.empty()) c.target_kappa = parse_kappa(a.target_kappa);
        (void)c.target();
    } catch (const std::exception& e) {
        throw UsageError(std::string("bad search option: ") + e.what());
    }
    if (c.max_order < 2 || c.max_order > 12) throw UsageError("--max-order must lie in [2,12]");
    if (c.jobs < 1) throw UsageError("--jobs must be positive");
    return c;
}

// the part of the config that has to agree when resuming
json resume_key(const SearchConfig& c) {
    TreeReport empty;
    empty.cfg = c;
    json j = json::parse(report_to_json(empty))["config"];
    for (const char* k : {"jobs", "max_order", "max_nodes"}) j.erase(k);
    return j;
}

int cmd_tree(const TreeArgs& a) {
    SearchConfig cfg = tree_config(a);
    fs::path out(a.out);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw UsageError("cannot create " + a.out + ": " + ec.message());
    fs::path store = a.store.empty() ? out / "tree.json" : fs::path(a.store);
    if (const char* env = std::getenv("PGROUP_STORE"); env && *env) store = env;

    TreeReport prior;
    bool resuming = !a.resume.empty();
    if (resuming) {
        try {
            prior = report_from_json(read_file(a.resume));
        } catch (const UsageError&) {
            throw;
        } catch (const std::exception& e) {
            throw UsageError("cannot resume from " + a.resume + ": " + e.what());
        }
        if (resume_key(prior.cfg) != resume_key(cfg))
            throw UsageError("cannot resume from " + a.resume + ": stored search options differ");
    }

    std::string started = now_utc();
    auto checkpoint = [&](const TreeReport& r) {
        write_file(store, report_to_json(r));
        if (!a.quiet) {
            int top = 0;
            for (const auto& n : r.nodes) top = std::max(top, n.inv.log_order);
            std::cerr << "  checkpoint: " << r.nodes.size() << " nodes up to order " << cfg.p << "^" << top << "\n";
        }
    };
    TreeReport r = search_tree(cfg, checkpoint, resuming ? &prior : nullptr);
    write_file(store, report_to_json(r));
    write_file(out / "tree.dot", report_to_dot(r));

    std::vector<Outcome> acc;
    bool ok = true;
    if (a.verify) {
        for (const Criterion& c : {criterion_table(r), criterion_hits(r)}) {
            std::cout << format_criterion(c) << "\n";
            for (const auto& n : c.notes) std::cout << "    " << n << "\n";
            acc.push_back({c.name, c.pass});
            ok = ok && c.pass;
        }
    }
    write_file(out / "manifest.json", run_manifest(r, started, now_utc(), acc));

    std::cout << "nodes " << r.nodes.size() << ", hits " << r.hits.size() << (r.incomplete ? ", incomplete" : "")
              << "\n";
    for (const auto& h : r.hits) {
        const TreeNode* n = r.find(h);
        std::cout << "  hit " << h << " order " << cfg.p << "^" << n->inv.log_order << " class "
                  << n->inv.nilpotency_class << " dl " << n->inv.derived_length << " d2 " << n->inv.d2 << "\n";
    }
    std::cout << "store " << store.string() << "\n";
    if (r.node_limit) {
        std::cerr << "error: node limit " << cfg.max_nodes << " reached\n";
        return kResource;
    }
    return ok ? kPass : kMismatch;
}

// ---------------------------------------------------------------- verify-paper

struct VerifyArgs {
    int jobs = 1;
    bool quick = false;
};

int cmd_verify(const VerifyArgs& a) {
    VerifyContext ctx;
    ctx.jobs = a.jobs;
    ctx.log = &std::cerr;
    if (a.quick) {
        ctx.sweep_primes = {3, 5};
        ctx.sweep_max_m = 7;
    }
    bool ok = true;
    verify_all(ctx, [&](const Criterion& c) {
        std::cout << format_criterion(c) << "\n";
        for (const auto& n : c.notes) std::cout << "    " << n << "\n";
        std::cout.flush();
        ok = ok && c.pass;
    });

    // reruns under changed filters
    SearchConfig base;
    base.jobs = a.jobs;
    TreeReport r0 = search_tree(base);
    SearchConfig sig = base;
    sig.sigma_filter = true;
    TreeReport r1 = search_tree(sig);
    bool same = r0.hits == r1.hits;
    std::cout << (same ? "PASS" : "FAIL") << " [rerun] sigma filter on: " << r1.hits.size() << " hits, "
              << (same ? "identical" : "different") << " to the default run\n";
    SearchConfig low = base;
    low.ttt_ceiling = {{5, {1, 1, 1, 1}}, {5, {1, 1}}};
    TreeReport r2 = search_tree(low);
    std::cout << (r2.hits.empty() ? "PASS" : "FAIL") << " [rerun] ceiling [5,5,5,5]: " << r2.hits.size()
              << " hits (expected 0)\n";
    ok = ok && same && r2.hits.empty();
    return ok ? kPass : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite p-groups by power-commutator presentations, transfer patterns and descendant trees"};
    app.set_version_flag("--version", pg::kToolVersion);
    app.require_subcommand(1);

    GroupArgs ga;
    auto* group = app.add_subcommand("group", "Build a group and print its invariants and transfer pattern");
    group->add_option("file", ga.file, "Presentation file");
    group->add_option("--blackburn", ga.blackburn, "Maximal class parameters, e.g. p=5,m=6,z=0,w=1");
    group->add_option("--a", ga.a, "Family a(m-k),...,a(m-1) for --blackburn, e.g. 0,1");
    group->add_option("--paper-group", ga.preset, "Order 5^7 preset n=361|373|374|385|386, or n=635");
    group->add_flag("--json", ga.as_json, "Print the report as JSON");
    group->add_flag("--lattice", ga.lattice, "Include the lattice of normal subgroups");
    group->add_option("--dot", ga.dot, "Write the normal lattice as DOT (with --lattice)");
    group->add_flag("--no-identify", ga.no_identify, "Skip locating the group in the descendant tree");

    TreeArgs ta;
    auto* tree = app.add_subcommand("tree", "Search the descendant tree and write store, DOT and manifest");
    tree->add_option("--max-order", ta.max_order, "Largest exponent n of p^n to expand to")->capture_default_str();
    tree->add_option("--admissible-kappa", ta.kappa, "Admissible canonical kernel types; repeat or separate by ';'");
    tree->add_option("--ttt-ceiling", ta.ceiling, "Ceiling [first,other], e.g. [[25,5,5,5],[5,5]]");
    tree->add_option("--target-ttt", ta.target_ttt, "Target transfer target type");
    tree->add_option("--target-kappa", ta.target_kappa, "Target transfer kernel type");
    tree->add_flag("--real-quadratic", ta.real_quadratic, "Keep only sigma-groups");
    tree->add_flag("--no-defect-filter", ta.no_defect_filter, "Keep children of positive defect");
    tree->add_option("--resume", ta.resume, "Continue from a store written by an earlier run");
    tree->add_option("--store", ta.store, "Store path (default OUT/tree.json; PGROUP_STORE overrides)");
    tree->add_option("--out", ta.out, "Output directory")->capture_default_str();
    tree->add_flag("--verify", ta.verify, "Check the table and the hit set; exit 1 on mismatch");
    tree->add_option("--jobs", ta.jobs, "Worker threads")->capture_default_str();
    tree->add_option("--max-nodes", ta.max_nodes, "Stop with exit code 3 beyond this many nodes")
        ->capture_default_str();
    tree->add_flag("--quiet", ta.quiet, "No checkpoint messages");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify-paper", "Run every acceptance check and print one line per check");
    verify->add_option("--jobs", va.jobs, "Worker threads")->capture_default_str();
    verify->add_flag("--quick", va.quick, "Sweep only p in {3,5} and m <= 7");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kUsage;
    }
    try {
        if (*group) return cmd_group(ga);
        if (*tree) return cmd_tree(ta);
        if (*verify) return cmd_verify(va);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
