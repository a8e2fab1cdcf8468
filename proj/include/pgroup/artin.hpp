#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pgroup/fp.hpp"
#include "pgroup/pcgroup.hpp"

namespace pg {

// maximal subgroups correspond to hyperplanes of G/Phi(G); index is 0-based
struct MaximalSubgroup {
    int index = 0;
    Subspace hyperplane;  // inside G/Phi in the coordinates of frattini_basis()
    Subgroup sub;
    Vec outside;          // an element of G not in sub
};

enum class Ordering { Standard, Echelon };

struct FrattiniData {
    Subgroup phi;
    std::vector<Vec> basis;  // elements whose images form a basis of G/Phi
    Subgroup top;            // igs of G extending that of Phi
    std::vector<int> coords; // positions in top outside Phi
    std::vector<int> coordinates(const Vec& x) const;  // image in G/Phi
};
FrattiniData frattini_data(const PcGroup& g);

// in echelon-lex order of the hyperplanes; for rank 2 this is <a2>, <a1>,
// <a1 a2>, ..., <a1 a2^(p-1)>, which is the standard order y, x, xy, ...
std::vector<MaximalSubgroup> maximal_subgroups(const PcGroup& g);
// standard when a2 generates the two-step centralizer modulo G' for a
// coclass-1 metabelianization, echelon otherwise
Ordering ordering_of(const PcGroup& g);

// abelianization of a subgroup together with its coordinate map
struct SubgroupAbelianization {
    Subgroup sub;
    AbelianQuotient ab;
    std::vector<int64_t> coords(const Vec& x) const;  // integer coordinates on sub's igs
};
SubgroupAbelianization abelianization(const PcGroup& g, const Subgroup& m);

struct Transfer {
    int target = 0;
    // row i: image of frattini basis element i in the socle of M/M', as F_p coordinates
    FpMatrix matrix;
    Subspace kernel;  // inside G/G' = G/Phi
};
// transversal 1, t, ..., t^(p-1) with t outside m (defaults to m.outside)
Transfer artin_transfer(const PcGroup& g, const MaximalSubgroup& m, const std::optional<Vec>& t = std::nullopt);
// same, reusing precomputed pieces
Transfer artin_transfer(const PcGroup& g, const FrattiniData& fd, const MaximalSubgroup& m,
                        const SubgroupAbelianization& ab, const Vec& t);

struct KernelCode {
    enum Kind : uint8_t { Full, Line, Trivial, Other };
    Kind kind = Full;
    int line = -1;  // 0-based when kind == Line
    Subspace space;
    std::string str() const;  // 0, i (1-based), "⊥", or the echelon basis
    bool operator==(const KernelCode& o) const { return kind == o.kind && line == o.line && space == o.space; }
};

struct ArtinPattern {
    std::vector<AbelianType> ttt;
    std::vector<KernelCode> tkt;
    Ordering ordering = Ordering::Echelon;
    bool canonical = false;
    std::string ttt_str() const;
    std::string tkt_str() const;
    std::string str() const;  // tau=[...] kappa=(...)
    bool same(const ArtinPattern& o) const { return ttt == o.ttt && tkt == o.tkt; }
};

std::vector<AbelianType> ttt(const PcGroup& g);
std::vector<KernelCode> tkt(const PcGroup& g);
ArtinPattern artin_pattern(const PcGroup& g);
// lexicographically least relabeling of the maximal subgroups
ArtinPattern canonicalize(const ArtinPattern& ap);
// build a pattern from the text form used on the command line, e.g.
// ttt "[[25,5,5,5],[5,5],...]" and kappa "(1,0,0,0,0,0)"; only rank 2
ArtinPattern make_pattern(int p, const std::vector<AbelianType>& ttt, const std::vector<int>& kappa);
std::vector<int> parse_kappa(const std::string& s);
std::vector<AbelianType> parse_ttt(const std::string& s, int p);

enum class Cmp { Less, Equal, Greater, Incomparable };
// epimorphic image order
Cmp compare_types(const AbelianType& a, const AbelianType& b);
struct PatternVerdict {
    bool monotone = true;
    std::vector<std::string> failures;
};
// child index i corresponds to parent index alignment[i]
PatternVerdict compare_patterns(const ArtinPattern& child, const ArtinPattern& parent,
                                const std::vector<int>& alignment);

}  // namespace pg
