#include "pgroup/artin.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace pg {

std::vector<int> FrattiniData::coordinates(const Vec& x) const {
    auto e = top.sift(x);
    std::vector<int> v;
    for (int k : coords) v.push_back((*e)[k]);
    return v;
}

namespace {
// number d of leading generators when the relations never involve a_1..a_d and
// every later generator is defined, so that Phi = <a_{d+1}, ..., a_n>
int frattini_tail(const PcPresentation& pr) {
    int d = pr.n;
    auto lead = [&](const Vec& v) {
        for (int t = 0; t < pr.n; ++t)
            if (v[t]) return t;
        return pr.n;
    };
    int lo = pr.n;
    for (int i = 0; i < pr.n; ++i) {
        lo = std::min(lo, lead(pr.power[i]));
        for (int j = 0; j < i; ++j) lo = std::min(lo, lead(pr.comm[i][j]));
    }
    d = lo;
    for (int k = d; k < pr.n; ++k) {
        const auto& df = pr.def[k];
        if (df.kind == Definition::None) return -1;
        const Vec& rhs = df.kind == Definition::Power ? pr.power[df.j] : pr.comm[df.j][df.i];
        if (lead(rhs) != k || rhs[k] != 1 || std::count_if(rhs.begin(), rhs.end(), [](uint8_t e) { return e; }) != 1)
            return -1;
    }
    return d;
}
}  // namespace

FrattiniData frattini_data(const PcGroup& g) {
    FrattiniData fd;
    if (int d = frattini_tail(g.pres()); d >= 0) {
        fd.phi = Subgroup::tail(g.col_ptr(), d);
        fd.top = Subgroup::whole(g);
        for (int k = 0; k < d; ++k) {
            fd.coords.push_back(k);
            fd.basis.push_back(g.gen(k));
        }
        return fd;
    }
    std::vector<Vec> gens;
    for (int i = 0; i < g.n(); ++i) {
        gens.push_back(g.pow(g.gen(i), g.p()));
        for (int j = 0; j < i; ++j) gens.push_back(g.comm(g.gen(i), g.gen(j)));
    }
    fd.phi = Subgroup::generated(g, gens, true);
    std::vector<Vec> all;
    for (int i = 0; i < g.n(); ++i) all.push_back(g.gen(i));
    fd.top = Subgroup::generated(g, all, false, &fd.phi);
    std::vector<char> low(g.n(), 0);
    for (int d : fd.phi.depths()) low[d] = 1;
    for (int k = 0; k < fd.top.log_order(); ++k)
        if (!low[fd.top.depths()[k]]) {
            fd.coords.push_back(k);
            fd.basis.push_back(fd.top.gens()[k]);
        }
    return fd;
}

namespace {
Vec combine(const PcGroup& g, const std::vector<Vec>& basis, const std::vector<int>& c) {
    Vec x = g.id();
    for (size_t i = 0; i < basis.size(); ++i)
        if (c[i]) x = g.mul(x, g.pow(basis[i], c[i]));
    return x;
}

std::vector<MaximalSubgroup> maximal_subgroups(const PcGroup& g, const FrattiniData& fd) {
    const int d = int(fd.basis.size());
    if (d < 2) throw std::domain_error("maximal subgroups: abelianization has rank below 2");
    std::vector<MaximalSubgroup> out;
    int idx = 0;
    for (const auto& h : enumerate_subspaces(d, 1, g.p())) {
        MaximalSubgroup m;
        m.index = idx++;
        m.hyperplane = h;
        std::vector<Vec> gens;
        for (int r = 0; r < h.dim(); ++r) gens.push_back(combine(g, fd.basis, h.basis.row(r)));
        if (fd.phi.unit_from() == g.n() - fd.phi.log_order() && fd.top.unit_from() == 0) {
            // hyperplane rows are already normal forms with distinct leading entries
            for (int k = fd.phi.unit_from(); k < g.n(); ++k) gens.push_back(g.gen(k));
            m.sub = Subgroup::from_igs(g.col_ptr(), gens);
        } else {
            m.sub = Subgroup::generated(g, gens, false, &fd.phi);
        }
        for (int i = 0; i < d; ++i) {
            std::vector<int> e(d, 0);
            e[i] = 1;
            if (!h.contains(e)) {
                m.outside = fd.basis[i];
                break;
            }
        }
        out.push_back(std::move(m));
    }
    return out;
}
}  // namespace

std::vector<MaximalSubgroup> maximal_subgroups(const PcGroup& g) {
    return maximal_subgroups(g, frattini_data(g));
}

Ordering ordering_of(const PcGroup& g) {
    if (!g.weighted() || g.rank_weighted() != 2) return Ordering::Echelon;
    PcGroup mb = g.derived_length() <= 2 ? g : metabelianization(g);
    if (mb.nilpotency_class() < 2 || mb.coclass() != 1) return Ordering::Echelon;
    if (mb.nilpotency_class() == 2) return Ordering::Standard;
    Subgroup chi = two_step_centralizer(mb);
    return chi.contains(mb.gen(1)) && !chi.contains(mb.gen(0)) ? Ordering::Standard : Ordering::Echelon;
}

std::vector<int64_t> SubgroupAbelianization::coords(const Vec& x) const {
    auto e = sub.sift(x);
    if (!e) throw std::logic_error("abelianization: element outside subgroup");
    return std::vector<int64_t>(e->begin(), e->end());
}

SubgroupAbelianization abelianization(const PcGroup& g, const Subgroup& m) {
    const auto& b = m.gens();
    const int s = int(b.size()), p = g.p();
    IntMatrix rel(0, s);
    auto sift = [&](const Vec& x) {
        auto e = m.sift(x);
        return std::vector<int64_t>(e->begin(), e->end());
    };
    const int u = m.unit_from();
    const auto& pr = g.pres();
    auto unit_index = [&](int i) { return m.depths()[i] >= u ? m.depths()[i] : -1; };
    for (int i = 0; i < s; ++i) {
        int ui = unit_index(i);
        auto r = sift(ui >= 0 ? pr.power[ui] : g.pow(b[i], p));
        for (auto& x : r) x = -x;
        r[i] += p;
        rel.add_row(r);
    }
    for (int j = 0; j < s; ++j)
        for (int i = 0; i < j; ++i) {
            int uj = unit_index(j), ui = unit_index(i);
            auto r = sift(uj >= 0 && ui >= 0 ? pr.comm[uj][ui] : g.comm(b[j], b[i]));
            if (std::any_of(r.begin(), r.end(), [](int64_t x) { return x; })) rel.add_row(r);
        }
    return SubgroupAbelianization{m, AbelianQuotient(rel, p, s)};
}

Transfer artin_transfer(const PcGroup& g, const FrattiniData& fd, const MaximalSubgroup& m,
                        const SubgroupAbelianization& ab, const Vec& t) {
    if (m.sub.contains(t)) throw std::invalid_argument("transfer: transversal element lies in the subgroup");
    const int p = g.p(), d = int(fd.basis.size());
    Transfer tr;
    tr.target = m.index;
    std::vector<std::vector<int>> rows;
    Vec ti = g.inv(t);
    for (const auto& h : fd.basis) {
        std::vector<int64_t> v;
        if (!m.sub.contains(h)) {
            v = ab.coords(g.pow(h, p));
        } else {
            v.assign(m.sub.log_order(), 0);
            Vec c = h;  // t^-i h t^i
            for (int i = 0; i < p; ++i) {
                auto e = ab.coords(c);
                for (size_t k = 0; k < v.size(); ++k) v[k] += e[k];
                c = g.mul(ti, g.mul(c, t));
            }
        }
        rows.push_back(ab.ab.socle_coords(v));
    }
    int r = rows.empty() ? 0 : int(rows[0].size());
    tr.matrix = FpMatrix(p, d, r);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < r; ++j) tr.matrix.at(i, j) = uint16_t(rows[i][j]);
    tr.kernel = left_nullspace(tr.matrix);
    return tr;
}

namespace {
void require_elementary(const PcGroup& g, const FrattiniData& fd) {
    Subgroup G = Subgroup::whole(g);
    if (commutator_subgroup(G, G).log_order() != fd.phi.log_order())
        throw std::domain_error("transfer kernels need an elementary abelianization");
}
}  // namespace

Transfer artin_transfer(const PcGroup& g, const MaximalSubgroup& m, const std::optional<Vec>& t) {
    FrattiniData fd = frattini_data(g);
    require_elementary(g, fd);
    return artin_transfer(g, fd, m, abelianization(g, m.sub), t ? *t : m.outside);
}

std::string KernelCode::str() const {
    switch (kind) {
    case Full: return "0";
    case Line: return std::to_string(line + 1);
    case Trivial: return "⊥";
    case Other: break;
    }
    std::string s = "<";
    for (int r = 0; r < space.dim(); ++r) {
        if (r) s += ";";
        auto row = space.basis.row(r);
        for (size_t c = 0; c < row.size(); ++c) s += (c ? "," : "") + std::to_string(row[c]);
    }
    return s + ">";
}

std::string ArtinPattern::ttt_str() const {
    std::string s = "[";
    for (size_t i = 0; i < ttt.size(); ++i) s += (i ? "," : "") + ttt[i].str();
    return s + "]";
}

std::string ArtinPattern::tkt_str() const {
    std::string s = "(";
    for (size_t i = 0; i < tkt.size(); ++i) s += (i ? "," : "") + tkt[i].str();
    return s + ")";
}

std::string ArtinPattern::str() const { return "tau=" + ttt_str() + " kappa=" + tkt_str(); }

namespace {
KernelCode code_of(const Subspace& k, const std::vector<MaximalSubgroup>& ms) {
    KernelCode c;
    c.space = k;
    if (k.dim() == k.n) {
        c.kind = KernelCode::Full;
    } else if (k.dim() == 0) {
        c.kind = KernelCode::Trivial;
    } else {
        c.kind = KernelCode::Other;
        if (k.n == 2)
            for (const auto& m : ms)
                if (m.hyperplane == k) {
                    c.kind = KernelCode::Line;
                    c.line = m.index;
                }
    }
    return c;
}
}  // namespace

std::vector<AbelianType> ttt(const PcGroup& g) {
    std::vector<AbelianType> out;
    for (const auto& m : maximal_subgroups(g)) out.push_back(abelianization(g, m.sub).ab.type());
    return out;
}

ArtinPattern artin_pattern(const PcGroup& g) {
    FrattiniData fd = frattini_data(g);
    auto ms = maximal_subgroups(g, fd);
    require_elementary(g, fd);
    ArtinPattern ap;
    for (const auto& m : ms) {
        auto ab = abelianization(g, m.sub);
        ap.ttt.push_back(ab.ab.type());
        ap.tkt.push_back(code_of(artin_transfer(g, fd, m, ab, m.outside).kernel, ms));
    }
    ap.ordering = ordering_of(g);
    return ap;
}

std::vector<KernelCode> tkt(const PcGroup& g) { return artin_pattern(g).tkt; }

namespace {
int kernel_key(const KernelCode& c, int p) {
    switch (c.kind) {
    case KernelCode::Line: return c.line + 1;
    case KernelCode::Full: return p + 2;
    case KernelCode::Trivial: return p + 3;
    case KernelCode::Other: return p + 4;
    }
    return p + 5;
}
}  // namespace

ArtinPattern canonicalize(const ArtinPattern& ap) {
    const int N = int(ap.tkt.size());
    if (N == 0) return ap;
    const int p = N - 1;
    const auto lines = enumerate_subspaces(2, 1, p);
    if (int(lines.size()) != N) throw std::invalid_argument("canonicalize: rank-2 patterns only");
    std::vector<int> perm(N), inv(N);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best_k;
    std::vector<const AbelianType*> best_t;
    std::vector<int> best_perm;
    std::vector<int> key(N);
    std::vector<const AbelianType*> tk(N);
    do {
        // perm[new] = old
        for (int i = 0; i < N; ++i) inv[perm[i]] = i;
        for (int i = 0; i < N; ++i) {
            const auto& c = ap.tkt[perm[i]];
            key[i] = c.kind == KernelCode::Line ? inv[c.line] + 1 : kernel_key(c, p);
            tk[i] = &ap.ttt[perm[i]];
        }
        bool better = best_perm.empty();
        if (!better) {
            if (key != best_k) {
                better = key < best_k;
            } else {
                for (int i = 0; i < N; ++i) {
                    if (*tk[i] == *best_t[i]) continue;
                    better = *best_t[i] < *tk[i];  // larger types first
                    break;
                }
            }
        }
        if (better) {
            best_k = key;
            best_t = tk;
            best_perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (int i = 0; i < N; ++i) inv[best_perm[i]] = i;
    ArtinPattern out;
    out.ordering = ap.ordering;
    out.canonical = true;
    for (int i = 0; i < N; ++i) {
        out.ttt.push_back(ap.ttt[best_perm[i]]);
        KernelCode c = ap.tkt[best_perm[i]];
        if (c.kind == KernelCode::Line) {
            c.line = inv[c.line];
            c.space = lines[c.line];
        }
        out.tkt.push_back(c);
    }
    return out;
}

ArtinPattern make_pattern(int p, const std::vector<AbelianType>& t, const std::vector<int>& kappa) {
    const auto lines = enumerate_subspaces(2, 1, p);
    if (int(t.size()) != p + 1 || int(kappa.size()) != p + 1)
        throw std::invalid_argument("pattern: need p+1 entries");
    ArtinPattern ap;
    ap.ttt = t;
    for (int k : kappa) {
        KernelCode c;
        if (k == 0) {
            c.kind = KernelCode::Full;
            c.space = Subspace::full(p, 2);
        } else if (k > 0 && k <= p + 1) {
            c.kind = KernelCode::Line;
            c.line = k - 1;
            c.space = lines[k - 1];
        } else if (k < 0) {
            c.kind = KernelCode::Trivial;
            c.space = Subspace(p, 2);
        } else {
            throw std::invalid_argument("pattern: kernel code out of range");
        }
        ap.tkt.push_back(c);
    }
    return ap;
}

std::vector<int> parse_kappa(const std::string& s) {
    std::string body;
    for (char c : s)
        if (c != '(' && c != ')' && c != ' ') body += c;
    std::vector<int> out;
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "⊥" || tok == "T") {
            out.push_back(-1);
            continue;
        }
        auto hat = tok.find('^');
        int rep = 1;
        try {
            if (hat != std::string::npos) rep = std::stoi(tok.substr(hat + 1));
            int v = std::stoi(tok.substr(0, hat));
            out.insert(out.end(), rep, v);
        } catch (const std::exception&) {
            throw std::invalid_argument("kappa: bad entry '" + tok + "'");
        }
    }
    return out;
}

std::vector<AbelianType> parse_ttt(const std::string& s, int p) {
    std::vector<AbelianType> out;
    size_t i = s.find('[');
    if (i == std::string::npos) throw std::invalid_argument("ttt: expected '['");
    ++i;
    while (true) {
        size_t a = s.find('[', i);
        if (a == std::string::npos) break;
        size_t b = s.find(']', a);
        if (b == std::string::npos) throw std::invalid_argument("ttt: unbalanced brackets");
        AbelianType t = parse_abelian_type(s.substr(a, b - a + 1), p);
        int rep = 1;
        if (b + 1 < s.size() && s[b + 1] == '^') rep = std::stoi(s.substr(b + 2));
        out.insert(out.end(), rep, t);
        i = b + 1;
    }
    return out;
}

Cmp compare_types(const AbelianType& a, const AbelianType& b) {
    size_t n = std::max(a.e.size(), b.e.size());
    bool le = true, ge = true;
    for (size_t i = 0; i < n; ++i) {
        int x = i < a.e.size() ? a.e[i] : 0, y = i < b.e.size() ? b.e[i] : 0;
        if (x > y) le = false;
        if (x < y) ge = false;
    }
    if (le && ge) return Cmp::Equal;
    if (le) return Cmp::Less;
    if (ge) return Cmp::Greater;
    return Cmp::Incomparable;
}

PatternVerdict compare_patterns(const ArtinPattern& child, const ArtinPattern& parent,
                                const std::vector<int>& alignment) {
    const size_t N = child.ttt.size();
    if (alignment.size() != N || parent.ttt.size() != N) throw std::invalid_argument("alignment: size mismatch");
    std::vector<char> hit(N, 0);
    for (int a : alignment) {
        if (a < 0 || size_t(a) >= N || hit[a]) throw std::invalid_argument("alignment: not a bijection");
        hit[a] = 1;
    }
    PatternVerdict v;
    for (size_t i = 0; i < N; ++i) {
        const int j = alignment[i];
        Cmp c = compare_types(child.ttt[i], parent.ttt[j]);
        if (c != Cmp::Greater && c != Cmp::Equal) {
            v.monotone = false;
            v.failures.push_back("tau " + std::to_string(i + 1) + ": " + child.ttt[i].str() + " vs " +
                                 parent.ttt[j].str());
        }
        {
            const auto& kc = child.tkt[i].space;
            const auto& kp = parent.tkt[j].space;
            if (kc.n != kp.n || !kp.contains(kc)) {
                v.monotone = false;
                v.failures.push_back("kappa " + std::to_string(i + 1) + ": " + child.tkt[i].str() + " vs " +
                                     parent.tkt[j].str());
            }
        }
    }
    return v;
}

}  // namespace pg
