#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "pgroup/artin.hpp"
#include "pgroup/tower.hpp"

namespace pg {

struct Criterion {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string measured;
    std::string expected;
    std::vector<std::string> notes;
};

// element-level recomputation of targets and kernels, for small groups
struct BruteMaximal {
    std::vector<char> member;  // per element of element_enumeration(g)
    AbelianType target;
    std::vector<char> kernel;  // per element
};
std::vector<BruteMaximal> brute_artin(const PcGroup& g, int max_log = 5);
// empty when the induced computation agrees with brute_artin
std::vector<std::string> oracle_mismatches(const PcGroup& g, int max_log = 5);

struct EdgeCheck {
    bool monotone = true;
    std::vector<std::string> failures;
};
// compares the pattern of g with that of its last lower central quotient,
// aligning maximal subgroups through the projection
EdgeCheck edge_monotony(const PcGroup& g);

struct SweepResult {
    int p = 0, m = 0;
    size_t groups = 0;
    size_t mismatches = 0;
    size_t low_z = 0;  // mismatches with m <= p, k = 0, z != 0
    std::vector<std::string> examples;  // first few mismatching parameter sets
};
SweepResult ttt_sweep(int p, int m, size_t max_examples = 4);

// expected descendant counts, matched against the expanded nodes of a report
struct TableRow {
    std::string what;
    int log_order = 0;
    int step = 0;
    int total = 0, capable = 0;
    int kappa0 = 0, kappa1 = 0, kappa2 = 0, positive = 0;
};
const std::vector<TableRow>& table_rows();

struct VerifyContext {
    std::ostream* log = nullptr;
    int jobs = 1;
    std::vector<int> sweep_primes{3, 5, 7};
    int sweep_max_m = 9;
};

Criterion criterion_table(const TreeReport& r);
Criterion criterion_hits(const TreeReport& r);
Criterion criterion_presets(TreeWalker& w, const TreeReport& r);
Criterion criterion_cover(TreeWalker& w);
Criterion criterion_sweep(const VerifyContext& ctx);
Criterion criterion_monotony(const TreeReport& r);
Criterion criterion_inheritance(const TreeReport& r);
Criterion criterion_oracle(const TreeReport& r);

// runs the default search and every criterion; report receives each criterion as it finishes
std::vector<Criterion> verify_all(const VerifyContext& ctx,
                                  const std::function<void(const Criterion&)>& report = {});
std::string format_criterion(const Criterion& c);

}  // namespace pg
