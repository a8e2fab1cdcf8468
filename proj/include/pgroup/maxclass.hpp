#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pgroup/fp.hpp"
#include "pgroup/pcgroup.hpp"

namespace pg {

// metabelian p-group of maximal class G_a^m(z,w) on x, y, s2, ..., s_{m-1}
struct BlackburnParams {
    int p = 5;
    int m = 3;
    int z = 0, w = 0;
    std::vector<int> a;  // a(m-k), ..., a(m-1)
    int k() const { return int(a.size()); }
    std::string str() const;
};

// throws std::invalid_argument on out-of-range parameters; returns warnings
// about overlapping bounds on k
std::vector<std::string> check_blackburn_params(const BlackburnParams& bp);
PcGroup blackburn_group(const BlackburnParams& bp);
// "p=5,m=6,z=0,w=1" plus optional family "0,1"
BlackburnParams parse_blackburn(const std::string& spec, const std::string& family = "");

// every admissible (z, w, a) for fixed p and m, a in lexicographic order
void for_each_params(int p, int m, const std::function<void(const BlackburnParams&)>& f);
int defect_bound(int p, int m);

enum class Exceptional { None, Extraspecial, SylowAlternating };
// G_0^3(0,1) (any m = 3 group with (z,w) != 0) or G_0^{p+1}(1,w)
Exceptional exceptional_kind(const BlackburnParams& bp);

AbelianType nearly_homocyclic(int p, int e);
std::vector<AbelianType> predicted_ttt(int p, int c, int k, Exceptional ex = Exceptional::None);

// order 5^7 groups on x,y,s2,s3,s4,s5,u5 (n in 361,373,374,385,386) and
// their metabelian quotient (n = 635)
PcGroup tower_group(int n);
// the six-generator quotient by u5 with x^5 = s5^w, w in {1,2}
PcGroup tower_metabelian_group(int w);
const std::vector<int>& tower_group_ids();

}  // namespace pg
