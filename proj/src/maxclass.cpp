#include "pgroup/maxclass.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace pg {

std::string BlackburnParams::str() const {
    std::ostringstream o;
    o << "p=" << p << ",m=" << m << ",z=" << z << ",w=" << w;
    if (!a.empty()) {
        o << ",a=(";
        for (size_t i = 0; i < a.size(); ++i) o << (i ? "," : "") << a[i];
        o << ")";
    }
    return o.str();
}

int defect_bound(int p, int m) {
    if (m <= 4) return 0;
    if (m >= p + 1) return std::min(m - 4, p - 2);
    return m - 4;
}

void for_each_params(int p, int m, const std::function<void(const BlackburnParams&)>& f) {
    BlackburnParams bp;
    bp.p = p;
    bp.m = m;
    const int kmax = defect_bound(p, m);
    for (int z = 0; z < p; ++z)
        for (int w = 0; w < p; ++w)
            for (int k = 0; k <= kmax; ++k) {
                bp.z = z;
                bp.w = w;
                bp.a.assign(k, 0);
                if (k) bp.a[0] = 1;
                while (true) {
                    f(bp);
                    // odometer over a, leading entry in [1,p)
                    int i = k - 1;
                    while (i >= 0 && bp.a[i] == p - 1) {
                        bp.a[i] = i == 0 ? 1 : 0;
                        --i;
                    }
                    if (i < 0) break;
                    ++bp.a[i];
                }
            }
}

std::vector<std::string> check_blackburn_params(const BlackburnParams& bp) {
    std::vector<std::string> warn;
    if (!is_prime(bp.p) || bp.p < 3) throw std::invalid_argument("blackburn: p must be an odd prime");
    if (bp.m < 3) throw std::invalid_argument("blackburn: m must be at least 3");
    if (bp.z < 0 || bp.z >= bp.p || bp.w < 0 || bp.w >= bp.p)
        throw std::invalid_argument("blackburn: z, w must lie in [0,p)");
    for (int x : bp.a)
        if (x < 0 || x >= bp.p) throw std::invalid_argument("blackburn: a entries must lie in [0,p)");
    const int k = bp.k();
    if (k > 0 && bp.a[0] == 0) throw std::invalid_argument("blackburn: leading a(m-k) must be nonzero");
    const int bound = defect_bound(bp.p, bp.m);
    if (bp.m >= 5 && bound < bp.m - 4)
        warn.push_back("k bounds overlap for m=" + std::to_string(bp.m) + ": using min(m-4,p-2)=" +
                       std::to_string(bound));
    if (k > bound)
        throw std::invalid_argument("blackburn: defect k=" + std::to_string(k) + " exceeds bound " +
                                    std::to_string(bound));
    return warn;
}

namespace {
int64_t binom(int n, int r) {
    int64_t b = 1;
    for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
    return b;
}
int64_t fdiv(int64_t a, int64_t b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
}  // namespace

PcGroup blackburn_group(const BlackburnParams& bp) {
    check_blackburn_params(bp);
    const int p = bp.p, m = bp.m, k = bp.k();
    // a1 = x, a2 = y, a_{j+1} = s_j
    auto S = [](int j) { return j; };  // 0-based index of s_j
    PcPresentation pres(p, m);
    pres.alias[0] = "x";
    pres.alias[1] = "y";
    pres.weight.assign(m, 1);
    for (int j = 2; j <= m - 1; ++j) {
        pres.alias[S(j)] = "s" + std::to_string(j);
        pres.weight[S(j)] = j;
    }

    // s_j^p inside the abelian G', as integer vectors reduced from the top down
    std::vector<std::vector<int64_t>> spow(m + 1);
    auto reduce = [&](std::vector<int64_t> e) {
        for (int i = 2; i <= m - 1; ++i) {
            int64_t q = fdiv(e[i], p);
            if (!q) continue;
            e[i] -= q * p;
            for (int t = i + 1; t <= m - 1; ++t) e[t] += q * spow[i][t];
        }
        return e;
    };
    auto to_vec = [&](const std::vector<int64_t>& e) {
        Vec v(m, 0);
        for (int i = 2; i <= m - 1; ++i) v[S(i)] = uint8_t(e[i]);
        return v;
    };
    for (int j = m - 1; j >= 2; --j) {
        std::vector<int64_t> e(m + 1, 0);
        for (int l = 2; l <= p; ++l)
            if (j - 1 + l <= m - 1) e[j - 1 + l] -= binom(p, l);
        spow[j] = reduce(e);
        pres.power[S(j)] = to_vec(spow[j]);
    }
    {
        std::vector<int64_t> e(m + 1, 0);
        e[m - 1] += bp.w;
        pres.power[0] = to_vec(reduce(e));
    }
    {
        std::vector<int64_t> e(m + 1, 0);
        e[m - 1] += bp.z;
        for (int l = 2; l <= p; ++l)
            if (l <= m - 1) e[l] -= binom(p, l);
        pres.power[1] = to_vec(reduce(e));
    }
    // [y,x] = s2, [s_j,x] = s_{j+1}
    pres.comm[1][0][S(2)] = 1;
    pres.def[S(2)] = {Definition::Comm, 1, 0};
    for (int j = 2; j + 1 <= m - 1; ++j) {
        pres.comm[S(j)][0][S(j + 1)] = 1;
        pres.def[S(j + 1)] = {Definition::Comm, S(j), 0};
    }
    // [s_j,y] = prod_{l=1}^{k-j+2} s_{m-l}^{a(m-j+2-l)} for 2 <= j <= k+1
    auto A = [&](int t) { return bp.a[t - (m - k)]; };
    for (int j = 2; j <= k + 1 && j <= m - 1; ++j) {
        std::vector<int64_t> e(m + 1, 0);
        for (int l = 1; l <= k - j + 2; ++l) e[m - l] += A(m - j + 2 - l);
        pres.comm[S(j)][1] = to_vec(reduce(e));
    }
    return PcGroup(std::move(pres));
}

BlackburnParams parse_blackburn(const std::string& spec, const std::string& family) {
    BlackburnParams bp;
    bool have_p = false, have_m = false;
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("blackburn: expected key=value, got '" + item + "'");
        std::string key = item.substr(0, eq);
        int val;
        try {
            val = std::stoi(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("blackburn: bad value in '" + item + "'");
        }
        if (key == "p") bp.p = val, have_p = true;
        else if (key == "m") bp.m = val, have_m = true;
        else if (key == "z") bp.z = val;
        else if (key == "w") bp.w = val;
        else throw std::invalid_argument("blackburn: unknown key '" + key + "'");
    }
    if (!have_p || !have_m) throw std::invalid_argument("blackburn: p and m are required");
    if (!family.empty()) {
        std::string f = family;
        if (f.front() == '(' && f.back() == ')') f = f.substr(1, f.size() - 2);
        std::istringstream fs(f);
        while (std::getline(fs, item, ',')) {
            try {
                bp.a.push_back(std::stoi(item));
            } catch (const std::exception&) {
                throw std::invalid_argument("blackburn: bad family entry '" + item + "'");
            }
        }
    }
    return bp;
}

Exceptional exceptional_kind(const BlackburnParams& bp) {
    if (bp.m == 3 && (bp.z || bp.w)) return Exceptional::Extraspecial;
    if (bp.m == bp.p + 1 && bp.k() == 0 && bp.z == 1) return Exceptional::SylowAlternating;
    return Exceptional::None;
}

AbelianType nearly_homocyclic(int p, int e) {
    AbelianType t{p, {}};
    if (e <= 0) return t;
    if (e < p - 1) {
        t.e.assign(e, 1);
        return t;
    }
    int q = e / (p - 1), r = e % (p - 1);
    t.e.assign(r, q + 1);
    t.e.insert(t.e.end(), p - 1 - r, q);
    return t;
}

std::vector<AbelianType> predicted_ttt(int p, int c, int k, Exceptional ex) {
    AbelianType pp{p, {1, 1}};
    std::vector<AbelianType> t;
    switch (ex) {
    case Exceptional::Extraspecial:
        t.push_back(pp);
        t.insert(t.end(), p, AbelianType{p, {2}});
        return t;
    case Exceptional::SylowAlternating:
        t.push_back(AbelianType{p, std::vector<int>(p, 1)});
        break;
    case Exceptional::None:
        t.push_back(nearly_homocyclic(p, c - k));
        break;
    }
    t.insert(t.end(), p, pp);
    return t;
}

const std::vector<int>& tower_group_ids() {
    static const std::vector<int> ids{361, 373, 374, 385, 386};
    return ids;
}

PcGroup tower_group(int n) {
    if (n == 635) return tower_metabelian_group(1);
    // x, y, s2, s3, s4, s5, u5
    const int p = 5;
    int ws = 0, wu = 0;
    switch (n) {
    case 361: ws = 1, wu = 0; break;
    case 373: ws = 1, wu = 1; break;
    case 374: ws = 2, wu = 1; break;
    case 385: ws = 1, wu = 2; break;
    case 386: ws = 2, wu = 2; break;
    default: throw std::invalid_argument("tower group: n must be one of 361,373,374,385,386,635");
    }
    const int N = 7;
    PcPresentation pres(p, N);
    const char* names[] = {"x", "y", "s2", "s3", "s4", "s5", "u5"};
    const int w[] = {1, 1, 2, 3, 4, 5, 5};
    for (int i = 0; i < N; ++i) {
        pres.alias[i] = names[i];
        pres.weight.push_back(w[i]);
    }
    enum { X, Y, S2, S3, S4, S5, U5 };
    pres.comm[Y][X][S2] = 1;
    pres.def[S2] = {Definition::Comm, Y, X};
    for (int j = S2; j < S5; ++j) {
        pres.comm[j][X][j + 1] = 1;
        pres.def[j + 1] = {Definition::Comm, j, X};
    }
    pres.power[X][S5] = uint8_t(ws);
    pres.power[Y][S5] = 4;
    pres.power[X][U5] = uint8_t(wu);
    pres.comm[S3][Y][U5] = 1;
    pres.comm[S4][Y][U5] = 1;
    pres.def[U5] = {Definition::Comm, S4, Y};
    pres.comm[S3][S2][U5] = 4;
    return PcGroup(std::move(pres));
}

PcGroup tower_metabelian_group(int w) {
    if (w != 1 && w != 2) throw std::invalid_argument("tower metabelian group: exponent must be 1 or 2");
    PcPresentation pres = tower_group(361).pres();
    pres.n = 6;
    pres.alias.resize(6);
    pres.weight.resize(6);
    pres.def.resize(6);
    pres.power.resize(6);
    pres.comm.resize(6);
    for (auto& v : pres.power) v.resize(6);
    for (auto& row : pres.comm) {
        row.resize(std::min<size_t>(row.size(), 6));
        for (auto& v : row) v.resize(6);
    }
    pres.power[0][5] = uint8_t(w);
    return PcGroup(std::move(pres));
}

}  // namespace pg
