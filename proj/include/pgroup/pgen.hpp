#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pgroup/fp.hpp"
#include "pgroup/pcgroup.hpp"

namespace pg {

// which central series the descendants refine; the lower central one gives
// the coclass-style trees, the exponent-p one is the textbook algorithm
enum class Generation { LowerCentral, ExponentP };

// images of all generators under the homomorphism fixed by the images of the
// defining generators (those without a definition, in order)
std::vector<Vec> extend_images(const PcGroup& g, const PcGroup& target, const std::vector<Vec>& top);
// product of img[i]^v[i]
Vec evaluate(const PcGroup& target, const std::vector<Vec>& img, const Vec& v);
// true iff the images satisfy every relation of g
bool respects_relations(const PcGroup& g, const PcGroup& target, const std::vector<Vec>& img);

struct CoveringData {
    PcGroup base;
    PcGroup cover;  // generators of base first, then q tails
    int d = 0;      // generator rank
    struct TailSource {
        int j = -1, i = -1;  // relation a_j^p (i < 0) or [a_j, a_i]
    };
    std::vector<TailSource> tails;
    Subspace nucleus;      // exponent-p nucleus inside F_p^q
    Subspace lcs_nucleus;  // image of the matching lower central term

    int multiplicator_rank() const { return int(tails.size()); }
    int nuclear_rank(Generation gen = Generation::LowerCentral) const {
        return (gen == Generation::LowerCentral ? lcs_nucleus : nucleus).dim();
    }
    const Subspace& nucleus_of(Generation gen) const {
        return gen == Generation::LowerCentral ? lcs_nucleus : nucleus;
    }
    // images in target of every cover generator, from images of the defining ones
    std::vector<Vec> images(const PcGroup& target, const std::vector<Vec>& top) const;
    Vec tail_vector(const Subspace& u, int row) const;  // basis row of u as an element of cover
    Subgroup subgroup(const Subspace& u) const;         // u as a central subgroup of cover
};

// requires a definition for every generator beyond the first d (as after standardize)
CoveringData p_covering_group(const PcGroup& g);
int multiplicator_rank(const PcGroup& g);
int nuclear_rank(const PcGroup& g, Generation gen = Generation::LowerCentral);

// automorphism stored by the images of all generators; products act on the
// right: (a*b)(x) = b(a(x))
struct Automorphism {
    std::vector<Vec> img;
    bool operator==(const Automorphism& o) const { return img == o.img; }
};

Automorphism identity_aut(const PcGroup& g);
Automorphism aut_from_top(const PcGroup& g, const std::vector<Vec>& top);
Vec apply(const PcGroup& g, const Automorphism& a, const Vec& v);
Automorphism compose(const PcGroup& g, const Automorphism& a, const Automorphism& b);
Automorphism aut_power(const PcGroup& g, const Automorphism& a, uint64_t k);
Automorphism aut_inverse(const PcGroup& g, const Automorphism& a);
bool is_automorphism(const PcGroup& g, const Automorphism& a);
// action on G/Phi (rows: images of the defining generators)
FpMatrix top_matrix(const PcGroup& g, const Automorphism& a);
// action on the multiplicator, rows indexed by the tails
FpMatrix multiplicator_action(const CoveringData& cov, const Automorphism& a);

using Order = unsigned __int128;
std::string order_str(Order o);

// subgroup of Aut(G) for weighted G, with exact membership: the image in
// GL(d,p) is kept by closure, the kernel by an echelon basis on every layer
class AutGroup {
public:
    AutGroup() = default;
    explicit AutGroup(PcGroup g);
    AutGroup(PcGroup g, const std::vector<Automorphism>& gens);
    // GL(d,p) on an elementary abelian group of rank d
    static AutGroup general_linear(const PcGroup& g);

    const PcGroup& group() const { return g_; }
    const std::vector<Automorphism>& gens() const { return gens_; }
    const std::vector<Automorphism>& gens_inverse() const { return gens_inv_; }
    uint64_t top_order() const { return top_.size(); }
    int kernel_log() const;
    Order order() const;
    bool contains(const Automorphism& a) const;
    bool add(const Automorphism& a);  // true if the group grew
    // some element acting as m on G/Phi
    std::optional<Automorphism> top_element(const FpMatrix& m) const;

private:
    PcGroup g_;
    int p_ = 2, d_ = 0;
    std::vector<Automorphism> gens_;
    std::vector<Automorphism> gens_inv_;
    struct Top {
        FpMatrix mat;
        Automorphism rep, rep_inv;
    };
    std::vector<Top> top_;
    std::unordered_map<std::string, int> top_index_;
    struct Level {
        std::vector<int> pos;  // generator positions of this weight
        std::vector<std::vector<int>> rows;
        std::vector<int> pivot;
        std::vector<Automorphism> elt, elt_inv;
    };
    std::vector<Level> levels_;  // index w-2 for weight w

    std::string key_of(const FpMatrix& m) const;
    int top_lookup(const Automorphism& a) const;
    std::vector<int> level_vector(const Automorphism& a, size_t lv) const;
    // reduces a in the kernel; returns the first level with a nonzero residue
    int sift_kernel(Automorphism& a, std::vector<int>& residue) const;
    void insert_kernel(Automorphism a);
};

// every codimension-s subspace u of F_p^q with u + nucleus = F_p^q
std::vector<Subspace> allowable_subgroups(const CoveringData& cov, int s,
                                          Generation gen = Generation::LowerCentral);

struct OrbitPartition {
    std::vector<Subspace> points;
    std::vector<int> orbit_of;      // per point
    std::vector<int> rep;           // per orbit, index into points (least member)
    std::vector<uint64_t> size;     // per orbit
    int find(const Subspace& u) const;  // index of u among points, or -1
    std::unordered_map<std::string, int> index;
};
OrbitPartition orbit_partition(std::vector<Subspace> points, const std::vector<FpMatrix>& mats);

struct Stabilizer {
    AutGroup group;
    uint64_t orbit_size = 0;
};
// stabilizer of u under aut acting through mats (one per generator of aut)
Stabilizer stabilizer(const AutGroup& aut, const std::vector<FpMatrix>& mats, const Subspace& u);
// element t of aut with u * t = v, if any
std::optional<Automorphism> transporter(const AutGroup& aut, const std::vector<FpMatrix>& mats,
                                        const Subspace& u, const Subspace& v);

struct Child {
    int step = 0;
    int counter = 0;  // 1-based among the children of this step
    Subspace allowable;
    uint64_t orbit_size = 0;
    PcGroup group;
    std::shared_ptr<const Quotient> projection;  // from the covering group
};

struct DescendantBatch {
    int step = 0;
    uint64_t allowable_count = 0;
    std::vector<Child> children;
};

// a parent prepared for expansion: covering group, automorphisms and their
// action on the multiplicator
class Expansion {
public:
    Expansion(const PcGroup& g, AutGroup aut, Generation gen = Generation::LowerCentral);
    const PcGroup& group() const { return g_; }
    const AutGroup& aut() const { return aut_; }
    const CoveringData& covering() const { return cov_; }
    const std::vector<FpMatrix>& matrices() const { return mats_; }
    Generation generation() const { return gen_; }
    int nuclear_rank() const { return cov_.nuclear_rank(gen_); }

    const OrbitPartition& orbits(int s) const;
    DescendantBatch descendants(int s) const;
    Child child(int s, int counter) const;
    // automorphism group of a child, from the stabilizer and the central automorphisms
    AutGroup child_automorphisms(const Child& c) const;
    Order expected_child_aut_order(const Child& c) const;

private:
    PcGroup g_;
    AutGroup aut_;
    Generation gen_;
    CoveringData cov_;
    std::vector<FpMatrix> mats_;
    mutable std::unordered_map<int, std::shared_ptr<OrbitPartition>> orbits_;
    Child make_child(int s, int counter, const OrbitPartition& op, int orbit) const;
};

DescendantBatch descendants(const PcGroup& g, const AutGroup& aut, int s,
                            Generation gen = Generation::LowerCentral);

bool is_capable(const PcGroup& g, Generation gen = Generation::LowerCentral);
// some automorphism in aut inverts G/G'
bool is_sigma_group(const PcGroup& g, const AutGroup& aut);

struct PathStep {
    int step = 0, counter = 0;
    bool operator==(const PathStep& o) const { return step == o.step && counter == o.counter; }
};
std::string path_label(const std::vector<PathStep>& path);  // root-#1;1-#2;3
std::vector<PathStep> parse_label(const std::string& label);

// walks the tree above an elementary abelian root of rank d, one lower
// central layer at a time; caches expansions by label
class TreeWalker {
public:
    TreeWalker(int p, int d, Generation gen = Generation::LowerCentral);
    int p() const { return p_; }
    const Expansion& expansion(const std::string& label);
    const PcGroup& group(const std::string& label);
    const AutGroup& automorphisms(const std::string& label);
    // throws std::runtime_error("not in tree") when h does not sit above the root
    std::vector<PathStep> identify(const PcGroup& h);
    // register a node computed elsewhere (a child and its automorphism group)
    void adopt(const std::string& label, const PcGroup& g, const AutGroup& aut);
    bool has(const std::string& label) const { return nodes_.count(label) != 0; }
    void forget(const std::string& label) { nodes_.erase(label); }

private:
    int p_, d_;
    Generation gen_;
    struct Entry {
        PcGroup g;
        std::shared_ptr<AutGroup> aut;
        std::shared_ptr<Expansion> exp;
    };
    std::unordered_map<std::string, Entry> nodes_;
    Entry& entry(const std::string& label);
};

std::string identify(const PcGroup& h, const PcGroup& root);

}  // namespace pg
