#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pgroup/artin.hpp"
#include "pgroup/pcgroup.hpp"
#include "pgroup/pgen.hpp"

namespace pg {

struct SearchConfig {
    int p = 5;
    int d = 2;
    // canonical kernel strings
    std::vector<std::string> admissible_kappa{"(1,0,0,0,0,0)", "(0,0,0,0,0,0)"};
    // first (polarized) component, then every other component
    std::vector<AbelianType> ttt_ceiling{{5, {2, 1, 1, 1}}, {5, {1, 1}}};
    bool defect_filter = true;
    bool sigma_filter = false;
    int max_order = 8;       // exponent
    std::vector<int> steps;  // empty: every step size up to the nuclear rank
    // a hit has exactly this canonical pattern
    std::vector<AbelianType> target_ttt{{5, {2, 1, 1, 1}}, {5, {1, 1}}, {5, {1, 1}},
                                        {5, {1, 1}},       {5, {1, 1}}, {5, {1, 1}}};
    std::vector<int> target_kappa{1, 0, 0, 0, 0, 0};
    int jobs = 1;
    size_t max_nodes = 100000;

    ArtinPattern target() const { return make_pattern(p, target_ttt, target_kappa); }
};

struct NodeInvariants {
    int log_order = 0;
    int nilpotency_class = 0;
    int coclass = 0;
    int defect = 0;
    int derived_length = 0;
    int d2 = 0;  // multiplicator rank
    int nu = 0;  // nuclear rank
    bool sigma = false;
    ArtinPattern pattern;  // canonical
};

NodeInvariants node_invariants(const PcGroup& g, const AutGroup& aut);

enum class NodeStatus { Capable, Terminal, Pruned, Hit };
std::string status_name(NodeStatus s);
NodeStatus parse_status(const std::string& s);

// children of one step, partitioned by kernel type and defect
struct StepCount {
    int step = 0;
    int total = 0;
    int capable = 0;
    int kappa0 = 0;     // (0^6), k = 0
    int kappa1 = 0;     // (1,0^5), k = 0
    int kappa2 = 0;     // (2,0^5), k = 0
    int positive = 0;   // k >= 1
    int other = 0;      // k = 0 with any other kernel type
    uint64_t allowable = 0;
};

struct TreeNode {
    std::string label;
    std::string parent;  // empty for the root
    int step = 0;
    NodeInvariants inv;
    NodeStatus status = NodeStatus::Terminal;
    std::string reason;   // prune reason
    bool expanded = false;
    bool truncated = false;  // kept and capable but beyond the order bound
    std::vector<StepCount> counts;
    std::string presentation;
};

// empty string = keep
std::string prune_filter(const TreeNode& node, const SearchConfig& cfg);

struct TreeReport {
    SearchConfig cfg;
    std::vector<TreeNode> nodes;
    bool incomplete = false;
    bool node_limit = false;  // stopped at max_nodes
    std::vector<std::string> hits;  // labels
    const TreeNode* find(const std::string& label) const;
};

// progress callback: invoked after every level with the report so far
using LevelHook = std::function<void(const TreeReport&)>;
TreeReport search_tree(const SearchConfig& cfg, const LevelHook& hook = {},
                       const TreeReport* resume = nullptr);

struct CoverResult {
    std::vector<TreeNode> members;
    bool incomplete = false;
};
// every G up to order p^max_order with G/G'' isomorphic to the metabelian group m
CoverResult cover(const PcGroup& m, int max_order, TreeWalker* walker = nullptr);

struct FieldParams {
    int rho = 2;    // p-class rank
    int r = 1;      // torsionfree unit rank
    int theta = 0;  // 1 if the p-th roots of unity lie in the field
};
CoverResult shafarevich_cover(const PcGroup& m, const FieldParams& fp, int max_order,
                              TreeWalker* walker = nullptr);
CoverResult shafarevich_filter(const CoverResult& c, const FieldParams& fp);

struct LatticeNode {
    Subgroup sub;
    int log_order = 0;
    std::vector<std::string> names;  // series terms and maximal subgroups it equals
};
struct NormalLattice {
    std::vector<LatticeNode> nodes;         // sorted by order, then key
    std::vector<std::pair<int, int>> edges;  // (smaller, larger), index p
    std::string dot() const;
};
NormalLattice normal_lattice_report(const PcGroup& g, int max_log = 8);

// JSON store and DOT export
std::string report_to_json(const TreeReport& r);
TreeReport report_from_json(const std::string& text);
std::string report_to_dot(const TreeReport& r);
extern const char* const kStoreVersion;
extern const char* const kToolVersion;

// node counts by log order and status
std::map<int, std::map<std::string, int>> level_totals(const TreeReport& r);
struct Outcome {
    std::string name;
    bool pass = false;
};
std::string run_manifest(const TreeReport& r, const std::string& started, const std::string& finished,
                         const std::vector<Outcome>& acceptance);

}  // namespace pg
