#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pgroup/fp.hpp"

namespace pg {

// normal form a_1^{e_1} ... a_n^{e_n}, entries in [0,p)
using Vec = std::vector<uint8_t>;

struct Definition {
    enum Kind : uint8_t { None, Power, Comm };
    Kind kind = None;
    int j = -1, i = -1;  // a_k = a_j^p  or  a_k = [a_j, a_i]
    bool operator==(const Definition& o) const { return kind == o.kind && j == o.j && i == o.i; }
};

// power-commutator presentation, generators indexed from 0
struct PcPresentation {
    int p = 2;
    int n = 0;
    std::vector<std::string> alias;      // empty string = no alias
    std::vector<int> weight;             // empty = unweighted
    std::vector<Vec> power;              // a_i^p
    std::vector<std::vector<Vec>> comm;  // comm[j][i] = [a_j, a_i], j > i
    std::vector<Definition> def;

    PcPresentation() = default;
    PcPresentation(int p, int n);  // all relations trivial
    Vec zero() const { return Vec(n, 0); }
    std::string name(int i) const;
    bool operator==(const PcPresentation& o) const;
    // throws if some right-hand side is not supported on later generators
    void check_triangular() const;
    // fill in missing definitions from relations whose right-hand side is a
    // single later generator, preferring the weight-compatible one
    void infer_definitions();
};

// collection from the left
class Collector {
public:
    explicit Collector(const PcPresentation& pres);
    int p() const { return p_; }
    int n() const { return n_; }

    void mul_gen(Vec& v, int g, int e = 1) const;  // v <- v * a_g^e
    void mul(Vec& v, const Vec& w) const;          // v <- v * w
    Vec product(const Vec& a, const Vec& b) const;
    Vec inverse(const Vec& a) const;
    Vec power(const Vec& a, int64_t k) const;
    Vec comm(const Vec& a, const Vec& b) const;  // a^-1 b^-1 a b
    Vec conj(const Vec& a, const Vec& b) const;  // b^-1 a b
    // signed 1-based generator indices, negative = inverse
    Vec collect(const std::vector<int>& word) const;

private:
    using Letters = std::vector<std::pair<int, int>>;
    int p_, n_;
    std::vector<Letters> pow_;
    std::vector<std::vector<Letters>> conj_;  // conj_[j][i] = a_j^{a_i}, j > i
    // cpow_[j][i][e] = normal form of (a_j^e)^{a_i}, filled from the bottom up
    std::vector<std::vector<std::vector<Letters>>> cpow_;
    std::vector<int> last_noncomm_;           // largest j > g with [a_j,a_g] != 1, or -1
    std::vector<std::vector<uint8_t>> commute_;
    void run(Vec& v, std::vector<std::pair<int, int>>& st) const;
};

struct Violation {
    std::string overlap;  // e.g. "(a3 a2) a1"
    Vec left, right;
};

// every consistency test word; empty iff the presentation defines a group of order p^n
std::vector<Violation> check_consistency(const PcPresentation& pres);

struct Invariants {
    int log_order = 0;
    int nilpotency_class = 0;
    int coclass = 0;
    int derived_length = 0;
};

class PcGroup {
public:
    PcGroup();  // trivial group over p = 2
    explicit PcGroup(PcPresentation pres);
    static PcGroup trivial(int p);

    const PcPresentation& pres() const { return pres_; }
    const Collector& col() const { return *col_; }
    const std::shared_ptr<const Collector>& col_ptr() const { return col_; }
    int p() const { return pres_.p; }
    int n() const { return pres_.n; }
    // number of weight-1 generators when weighted, else -1
    int rank_weighted() const;
    bool weighted() const;  // weights refine the lower exponent-p central series

    Vec id() const { return Vec(pres_.n, 0); }
    Vec gen(int i) const;
    Vec mul(const Vec& a, const Vec& b) const { return col_->product(a, b); }
    Vec inv(const Vec& a) const { return col_->inverse(a); }
    Vec pow(const Vec& a, int64_t k) const { return col_->power(a, k); }
    Vec comm(const Vec& a, const Vec& b) const { return col_->comm(a, b); }
    Vec conj(const Vec& a, const Vec& b) const { return col_->conj(a, b); }
    Vec collect(const std::vector<int>& w) const { return col_->collect(w); }

    // cached on first use (thread-safe)
    const Invariants& invariants() const;
    int log_order() const { return pres_.n; }
    int nilpotency_class() const { return invariants().nilpotency_class; }
    int coclass() const { return invariants().coclass; }
    int derived_length() const { return invariants().derived_length; }

private:
    PcPresentation pres_;
    std::shared_ptr<const Collector> col_;
    struct Cache {
        std::once_flag once;
        Invariants inv;
        std::once_flag wonce;
        bool weighted = false;
    };
    std::shared_ptr<Cache> cache_;
};

// subgroup stored as an induced generating sequence: distinct depths,
// leading exponent 1, sorted by depth
class Subgroup {
public:
    Subgroup() = default;
    explicit Subgroup(const PcGroup& g);  // trivial subgroup
    static Subgroup whole(const PcGroup& g);
    // subgroup generated by gens; if base is given its sequence is kept as a prefix
    // of the new one (so base depths are preserved); normal = close under conjugation
    static Subgroup generated(const PcGroup& g, const std::vector<Vec>& gens, bool normal = false,
                              const Subgroup* base = nullptr);
    static Subgroup generated(std::shared_ptr<const Collector> col, const std::vector<Vec>& gens,
                              bool normal = false, const Subgroup* base = nullptr);
    // trusted induced sequence: distinct depths, leading exponents 1, closed
    static Subgroup from_igs(std::shared_ptr<const Collector> col, std::vector<Vec> gens);
    // <a_u, ..., a_n>
    static Subgroup tail(std::shared_ptr<const Collector> col, int u);

    int log_order() const { return int(gens_.size()); }
    bool trivial() const { return gens_.empty(); }
    const std::vector<Vec>& gens() const { return gens_; }
    const std::vector<int>& depths() const { return depth_; }
    bool contains(const Vec& x) const;
    bool contains(const Subgroup& h) const;
    bool operator==(const Subgroup& o) const {
        return log_order() == o.log_order() && contains(o);
    }
    // exponents e with x = prod gens_i^{e_i}; nullopt if not a member
    std::optional<std::vector<int>> sift(const Vec& x) const;
    std::vector<Vec> elements() const;  // materialized, for small groups
    // canonical representative of the coset x*H (zero at every depth of H); H normal
    Vec reduce(const Vec& x) const;

    const std::shared_ptr<const Collector>& collector() const { return col_; }
    // every a_k with k >= unit_from() lies in the subgroup and appears as a unit vector
    int unit_from() const { return unit_; }

private:
    explicit Subgroup(std::shared_ptr<const Collector> col);
    std::shared_ptr<const Collector> col_;
    int p_ = 2, n_ = 0;
    std::vector<Vec> gens_;
    std::vector<int> depth_;
    std::vector<int> pos_;               // depth -> index, or -1
    int unit_ = 0;                       // first depth of the unit tail (n_ if none)
    std::vector<std::vector<Vec>> pw_;   // pw_[k][e] = gens_k^e, empty on the unit tail
    std::vector<std::vector<Vec>> ipw_;  // ipw_[k][e] = gens_k^-e, empty on the unit tail
    void insert_at(Vec x, std::vector<Vec>& queue, bool normal);
    void add_tables(size_t k);
    void normalize_tail(bool rewrite);
};

Subgroup commutator_subgroup(const Subgroup& a, const Subgroup& b);
std::vector<Subgroup> lower_central_series(const PcGroup& g);
std::vector<Subgroup> exponent_p_central_series(const PcGroup& g);
std::vector<Subgroup> derived_series(const PcGroup& g);
std::vector<Subgroup> upper_central_series(const PcGroup& g);
Subgroup centre(const PcGroup& g);
// {x in G : [x, a] in n for every a in a}; a and n normal
Subgroup centralizer_mod(const PcGroup& g, const Subgroup& a, const Subgroup& n);
Subgroup two_step_centralizer(const PcGroup& g);
int defect(const PcGroup& g);

// weighted presentation of G/N refining the lower exponent-p central series,
// together with the projection G -> G/N
class Quotient {
public:
    Quotient(const PcGroup& g, const Subgroup& n);
    const PcGroup& group() const { return q_; }
    Vec project(const Vec& x) const;
    const Vec& lift(int k) const { return lift_[k]; }
    Vec lift_element(const Vec& y) const;

private:
    PcGroup g_;
    PcGroup q_;
    std::vector<Vec> lift_;
    struct Layer {
        Subgroup top;             // P_{j-1}, extending P_j
        std::vector<int> coords;  // positions in top not belonging to P_j
        FpMatrix inv;             // inverse of the coordinate matrix of the layer generators
        std::vector<int> gens;    // indices of new generators
    };
    std::vector<Layer> layers_;
    std::vector<int> layer_coords(const Layer& L, const Vec& x) const;
    friend PcGroup standardize(const PcGroup&);
};

PcGroup quotient(const PcGroup& g, const Subgroup& n);
PcGroup standardize(const PcGroup& g);  // weighted presentation of g itself
PcGroup parent(const PcGroup& g);
PcGroup metabelianization(const PcGroup& g);

// calls f on every element; throws if |G| > p^max_log
void for_each_element(const PcGroup& g, const std::function<void(const Vec&)>& f, int max_log = 8);
std::vector<Vec> element_enumeration(const PcGroup& g, int max_log = 8);

// text format
std::string format_vec(const PcPresentation& pres, const Vec& v);
std::string print_presentation(const PcPresentation& pres);
PcPresentation parse_presentation(const std::string& text);

}  // namespace pg
