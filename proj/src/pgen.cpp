#include "pgroup/pgen.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace pg {

namespace {

std::vector<int> defining_positions(const PcPresentation& pr) {
    std::vector<int> pos;
    for (int k = 0; k < pr.n; ++k)
        if (pr.def[k].kind == Definition::None) pos.push_back(k);
    return pos;
}

Vec extend(const Vec& v, int n) {
    Vec w(n, 0);
    std::copy(v.begin(), v.end(), w.begin());
    return w;
}

const PcGroup& weighted_or(const PcGroup& g, PcGroup& store) {
    if (g.weighted()) return g;
    store = standardize(g);
    return store;
}

}  // namespace

std::vector<Vec> extend_images(const PcGroup& g, const PcGroup& target, const std::vector<Vec>& top) {
    const auto& pr = g.pres();
    std::vector<Vec> img(pr.n);
    size_t t = 0;
    for (int k = 0; k < pr.n; ++k) {
        const auto& d = pr.def[k];
        switch (d.kind) {
            case Definition::None:
                if (t >= top.size()) throw std::invalid_argument("extend_images: too few images");
                img[k] = top[t++];
                break;
            case Definition::Power:
                img[k] = target.pow(img[d.j], pr.p);
                break;
            case Definition::Comm:
                img[k] = target.comm(img[d.j], img[d.i]);
                break;
        }
    }
    if (t != top.size()) throw std::invalid_argument("extend_images: too many images");
    return img;
}

Vec evaluate(const PcGroup& target, const std::vector<Vec>& img, const Vec& v) {
    Vec r = target.id();
    for (size_t i = 0; i < v.size(); ++i)
        if (v[i]) target.col().mul(r, v[i] == 1 ? img[i] : target.pow(img[i], v[i]));
    return r;
}

bool respects_relations(const PcGroup& g, const PcGroup& target, const std::vector<Vec>& img) {
    const auto& pr = g.pres();
    for (int i = 0; i < pr.n; ++i)
        if (target.pow(img[i], pr.p) != evaluate(target, img, pr.power[i])) return false;
    for (int j = 0; j < pr.n; ++j)
        for (int i = 0; i < j; ++i)
            if (target.comm(img[j], img[i]) != evaluate(target, img, pr.comm[j][i])) return false;
    return true;
}

// ---------------------------------------------------------------- covering group

std::vector<Vec> CoveringData::images(const PcGroup& target, const std::vector<Vec>& top) const {
    auto img = extend_images(base, target, top);
    const auto& pr = base.pres();
    for (const auto& t : tails) {
        Vec lhs = t.i < 0 ? target.pow(img[t.j], pr.p) : target.comm(img[t.j], img[t.i]);
        const Vec& w = t.i < 0 ? pr.power[t.j] : pr.comm[t.j][t.i];
        img.push_back(target.mul(target.inv(evaluate(target, img, w)), lhs));
    }
    return img;
}

Vec CoveringData::tail_vector(const Subspace& u, int row) const {
    Vec v = cover.id();
    for (int c = 0; c < u.n; ++c) v[base.n() + c] = uint8_t(u.basis.at(row, c));
    return v;
}

Subgroup CoveringData::subgroup(const Subspace& u) const {
    std::vector<Vec> gens;
    for (int r = 0; r < u.dim(); ++r) gens.push_back(tail_vector(u, r));
    return Subgroup::from_igs(cover.col_ptr(), std::move(gens));
}

CoveringData p_covering_group(const PcGroup& g) {
    const auto& pr = g.pres();
    const int n = pr.n, p = pr.p;
    CoveringData cd;
    cd.base = g;
    cd.d = int(defining_positions(pr).size());

    std::vector<CoveringData::TailSource> rels;
    std::vector<std::vector<char>> is_def(n, std::vector<char>(n + 1, 0));
    for (int k = 0; k < n; ++k) {
        const auto& d = pr.def[k];
        if (d.kind == Definition::Power) is_def[d.j][n] = 1;
        if (d.kind == Definition::Comm) is_def[d.j][d.i] = 1;
    }
    for (int j = 0; j < n; ++j) {
        if (!is_def[j][n]) rels.push_back({j, -1});
        for (int i = 0; i < j; ++i)
            if (!is_def[j][i]) rels.push_back({j, i});
    }
    const int q0 = int(rels.size());

    PcPresentation t(p, n + q0);
    t.alias = pr.alias;
    t.alias.resize(n + q0);
    t.def = pr.def;
    t.def.resize(n + q0);
    for (int i = 0; i < n; ++i) t.power[i] = extend(pr.power[i], n + q0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < j; ++i) t.comm[j][i] = extend(pr.comm[j][i], n + q0);
    for (int r = 0; r < q0; ++r) {
        Vec& v = rels[r].i < 0 ? t.power[rels[r].j] : t.comm[rels[r].j][rels[r].i];
        v[n + r] = 1;
    }

    std::vector<std::vector<int>> deps;
    for (const auto& viol : check_consistency(t)) {
        for (int k = 0; k < n; ++k)
            if (viol.left[k] != viol.right[k])
                throw std::logic_error("p_covering_group: base presentation inconsistent");
        std::vector<int> row(q0);
        for (int r = 0; r < q0; ++r) row[r] = (viol.right[n + r] - viol.left[n + r] + p) % p;
        deps.push_back(std::move(row));
    }
    std::vector<int> newidx(q0, -1);
    Rref rr;
    std::vector<int> pivot_row(q0, -1);
    if (!deps.empty()) {
        rr = rref(FpMatrix::from_rows(p, deps));
        for (size_t r = 0; r < rr.pivots.size(); ++r) pivot_row[rr.pivots[r]] = int(r);
    }
    int q = 0;
    for (int r = 0; r < q0; ++r)
        if (pivot_row[r] < 0) {
            newidx[r] = q++;
            cd.tails.push_back(rels[r]);
        }

    PcPresentation c(p, n + q);
    c.alias = pr.alias;
    c.alias.resize(n + q);
    c.def = pr.def;
    c.def.resize(n + q);
    for (int i = 0; i < n; ++i) c.power[i] = extend(pr.power[i], n + q);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < j; ++i) c.comm[j][i] = extend(pr.comm[j][i], n + q);
    for (int r = 0; r < q0; ++r) {
        Vec& v = rels[r].i < 0 ? c.power[rels[r].j] : c.comm[rels[r].j][rels[r].i];
        if (newidx[r] >= 0) {
            v[n + newidx[r]] = 1;
        } else {
            const int row = pivot_row[r];
            for (int s = 0; s < q0; ++s)
                if (newidx[s] >= 0 && rr.m.at(row, s)) v[n + newidx[s]] = uint8_t((p - rr.m.at(row, s)) % p);
        }
    }
    cd.cover = PcGroup(std::move(c));

    auto to_space = [&](const Subgroup& s) {
        std::vector<std::vector<int>> rows;
        for (const auto& x : s.gens()) {
            for (int k = 0; k < n; ++k)
                if (x[k]) throw std::logic_error("p_covering_group: nucleus outside multiplicator");
            rows.emplace_back(x.begin() + n, x.end());
        }
        if (rows.empty()) return Subspace(p, q);
        return Subspace::span(FpMatrix::from_rows(p, rows));
    };
    const int cp = int(exponent_p_central_series(g).size()) - 1;
    const int cl = int(lower_central_series(g).size()) - 1;
    auto ep = exponent_p_central_series(cd.cover);
    auto lc = lower_central_series(cd.cover);
    cd.nucleus = cp < int(ep.size()) ? to_space(ep[cp]) : Subspace(p, q);
    cd.lcs_nucleus = cl < int(lc.size()) ? to_space(lc[cl]) : Subspace(p, q);
    return cd;
}

int multiplicator_rank(const PcGroup& g) {
    PcGroup store;
    return p_covering_group(weighted_or(g, store)).multiplicator_rank();
}

int nuclear_rank(const PcGroup& g, Generation gen) {
    PcGroup store;
    return p_covering_group(weighted_or(g, store)).nuclear_rank(gen);
}

// ---------------------------------------------------------------- automorphisms

Automorphism identity_aut(const PcGroup& g) {
    Automorphism a;
    for (int k = 0; k < g.n(); ++k) a.img.push_back(g.gen(k));
    return a;
}

Automorphism aut_from_top(const PcGroup& g, const std::vector<Vec>& top) {
    return {extend_images(g, g, top)};
}

Vec apply(const PcGroup& g, const Automorphism& a, const Vec& v) { return evaluate(g, a.img, v); }

Automorphism compose(const PcGroup& g, const Automorphism& a, const Automorphism& b) {
    Automorphism r;
    r.img.reserve(a.img.size());
    for (const auto& x : a.img) r.img.push_back(apply(g, b, x));
    return r;
}

Automorphism aut_power(const PcGroup& g, const Automorphism& a, uint64_t k) {
    Automorphism r = identity_aut(g), b = a;
    while (k) {
        if (k & 1) r = compose(g, r, b);
        k >>= 1;
        if (k) b = compose(g, b, b);
    }
    return r;
}

FpMatrix top_matrix(const PcGroup& g, const Automorphism& a) {
    auto pos = defining_positions(g.pres());
    const int d = int(pos.size());
    FpMatrix m(g.p(), d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) m.at(r, c) = a.img[pos[r]][pos[c]];
    return m;
}

Automorphism aut_inverse(const PcGroup& g, const Automorphism& a) {
    FpMatrix m = top_matrix(g, a);
    const FpMatrix one = FpMatrix::identity(g.p(), m.rows);
    uint64_t ord = 1;
    for (FpMatrix x = m; !(x == one); x = mul(x, m)) ++ord;
    Automorphism b = aut_power(g, a, ord);
    const Automorphism id = identity_aut(g);
    while (!(b == id)) {
        b = aut_power(g, b, uint64_t(g.p()));
        ord *= uint64_t(g.p());
    }
    return aut_power(g, a, ord - 1);
}

bool is_automorphism(const PcGroup& g, const Automorphism& a) {
    if (int(a.img.size()) != g.n()) return false;
    if (!respects_relations(g, g, a.img)) return false;
    return rank(top_matrix(g, a)) == int(defining_positions(g.pres()).size());
}

FpMatrix multiplicator_action(const CoveringData& cov, const Automorphism& a) {
    const int n = cov.base.n(), q = cov.multiplicator_rank();
    std::vector<Vec> top;
    for (int k : defining_positions(cov.base.pres())) top.push_back(extend(a.img[k], n + q));
    auto img = cov.images(cov.cover, top);
    FpMatrix m(cov.base.p(), q, q);
    for (int t = 0; t < q; ++t) {
        const Vec& v = img[n + t];
        for (int k = 0; k < n; ++k)
            if (v[k]) throw std::logic_error("multiplicator_action: tail image outside multiplicator");
        for (int c = 0; c < q; ++c) m.at(t, c) = v[n + c];
    }
    return m;
}

std::string order_str(Order o) {
    if (o == 0) return "0";
    std::string s;
    while (o) {
        s.push_back(char('0' + int(o % 10)));
        o /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

// ---------------------------------------------------------------- AutGroup

AutGroup::AutGroup(PcGroup g) : g_(std::move(g)), p_(g_.p()) {
    const auto& pr = g_.pres();
    d_ = int(defining_positions(pr).size());
    if (!pr.weight.empty()) {
        const int wmax = pr.n ? pr.weight.back() : 1;
        for (int w = 2; w <= wmax; ++w) {
            Level lv;
            for (int k = 0; k < pr.n; ++k)
                if (pr.weight[k] == w) lv.pos.push_back(k);
            levels_.push_back(std::move(lv));
        }
    } else if (pr.n > d_) {
        throw std::invalid_argument("AutGroup: group needs a weighted presentation");
    }
    Automorphism id = identity_aut(g_);
    top_.push_back({FpMatrix::identity(p_, d_), id, id});
    top_index_[key_of(top_[0].mat)] = 0;
}

AutGroup::AutGroup(PcGroup g, const std::vector<Automorphism>& gens) : AutGroup(std::move(g)) {
    for (const auto& a : gens) add(a);
}

AutGroup AutGroup::general_linear(const PcGroup& g) {
    const int p = g.p(), d = g.n();
    for (int k = 0; k < d; ++k)
        if (g.pres().def[k].kind != Definition::None)
            throw std::invalid_argument("general_linear: group is not elementary abelian");
    int prim = 1;
    for (int r = 2; r < p; ++r) {
        int o = 1;
        for (int x = r; x != 1; x = x * r % p) ++o;
        if (o == p - 1) {
            prim = r;
            break;
        }
    }
    if (p == 2) prim = 1;
    std::vector<std::vector<Vec>> mats;
    auto unit = [&](int i) { return g.gen(i); };
    if (d >= 1 && prim != 1) {
        std::vector<Vec> t;
        for (int i = 0; i < d; ++i) t.push_back(unit(i));
        t[0][0] = uint8_t(prim);
        mats.push_back(t);
    }
    if (d >= 2) {
        std::vector<Vec> t;
        for (int i = 0; i < d; ++i) t.push_back(unit(i));
        t[0][1] = 1;
        mats.push_back(t);
        std::vector<Vec> c;
        for (int i = 0; i < d; ++i) c.push_back(unit((i + 1) % d));
        mats.push_back(c);
        if (d > 2) {
            std::vector<Vec> s;
            for (int i = 0; i < d; ++i) s.push_back(unit(i < 2 ? 1 - i : i));
            mats.push_back(s);
        }
    }
    std::vector<Automorphism> gens;
    for (const auto& t : mats) gens.push_back({t});
    return AutGroup(g, gens);
}

std::string AutGroup::key_of(const FpMatrix& m) const {
    return std::string(m.a.begin(), m.a.end());
}

int AutGroup::top_lookup(const Automorphism& a) const {
    auto it = top_index_.find(key_of(top_matrix(g_, a)));
    return it == top_index_.end() ? -1 : it->second;
}

int AutGroup::kernel_log() const {
    int s = 0;
    for (const auto& lv : levels_) s += int(lv.rows.size());
    return s;
}

Order AutGroup::order() const {
    Order o = top_.size();
    for (int i = 0; i < kernel_log(); ++i) o *= Order(p_);
    return o;
}

std::optional<Automorphism> AutGroup::top_element(const FpMatrix& m) const {
    auto it = top_index_.find(key_of(m));
    if (it == top_index_.end()) return std::nullopt;
    return top_[it->second].rep;
}

std::vector<int> AutGroup::level_vector(const Automorphism& a, size_t lv) const {
    const auto& pos = levels_[lv].pos;
    std::vector<int> v;
    v.reserve(size_t(d_) * pos.size());
    for (int i = 0; i < d_; ++i) {
        Vec delta = g_.mul(g_.inv(g_.gen(i)), a.img[i]);
        for (int k : pos) v.push_back(delta[k]);
    }
    return v;
}

int AutGroup::sift_kernel(Automorphism& a, std::vector<int>& residue) const {
    for (size_t l = 0; l < levels_.size(); ++l) {
        const auto& lv = levels_[l];
        auto v = level_vector(a, l);
        for (size_t r = 0; r < lv.rows.size(); ++r) {
            const int c = v[lv.pivot[r]];
            if (!c) continue;
            a = compose(g_, a, aut_power(g_, lv.elt_inv[r], uint64_t(c)));
            for (size_t k = 0; k < v.size(); ++k) v[k] = (v[k] + (p_ - c) * lv.rows[r][k]) % p_;
        }
        if (std::any_of(v.begin(), v.end(), [](int x) { return x != 0; })) {
            residue = std::move(v);
            return int(l);
        }
    }
    if (!(a == identity_aut(g_))) throw std::logic_error("AutGroup: kernel sift left a nontrivial element");
    return -1;
}

void AutGroup::insert_kernel(Automorphism a0) {
    std::deque<Automorphism> queue{std::move(a0)};
    while (!queue.empty()) {
        Automorphism x = std::move(queue.front());
        queue.pop_front();
        std::vector<int> res;
        const int l = sift_kernel(x, res);
        if (l < 0) continue;
        size_t piv = 0;
        while (res[piv] == 0) ++piv;
        const int s = inv_mod(res[piv], p_);
        if (s != 1) {
            x = aut_power(g_, x, uint64_t(s));
            for (auto& e : res) e = e * s % p_;
        }
        Automorphism xi = aut_inverse(g_, x);
        queue.push_back(aut_power(g_, x, uint64_t(p_)));
        for (const auto& lv : levels_)
            for (size_t r = 0; r < lv.elt.size(); ++r)
                queue.push_back(compose(g_, compose(g_, xi, lv.elt_inv[r]), compose(g_, x, lv.elt[r])));
        auto& lv = levels_[l];
        lv.rows.push_back(std::move(res));
        lv.pivot.push_back(int(piv));
        lv.elt.push_back(std::move(x));
        lv.elt_inv.push_back(std::move(xi));
    }
}

bool AutGroup::contains(const Automorphism& a) const {
    const int t = top_lookup(a);
    if (t < 0) return false;
    Automorphism x = compose(g_, a, top_[t].rep_inv);
    std::vector<int> res;
    return sift_kernel(x, res) < 0;
}

bool AutGroup::add(const Automorphism& a) {
    if (contains(a)) return false;
    const size_t old_top = top_.size();
    gens_.push_back(a);
    gens_inv_.push_back(aut_inverse(g_, a));
    if (top_lookup(a) < 0) {
        // extend the closure in GL(d,p), breadth first over all generators
        for (size_t t = 0; t < top_.size(); ++t)
            for (size_t k = 0; k < gens_.size(); ++k) {
                FpMatrix m = mul(top_[t].mat, top_matrix(g_, gens_[k]));
                auto key = key_of(m);
                if (top_index_.count(key)) continue;
                top_index_[key] = int(top_.size());
                Top nt{m, compose(g_, top_[t].rep, gens_[k]), compose(g_, gens_inv_[k], top_[t].rep_inv)};
                top_.push_back(std::move(nt));
            }
    }
    // Schreier generators for the new coset representatives and the new generator
    for (size_t t = 0; t < top_.size(); ++t)
        for (size_t k = 0; k < gens_.size(); ++k) {
            if (t < old_top && k + 1 < gens_.size()) continue;
            Automorphism x = compose(g_, top_[t].rep, gens_[k]);
            const int u = top_lookup(x);
            insert_kernel(compose(g_, x, top_[u].rep_inv));
        }
    return true;
}

// ---------------------------------------------------------------- orbits

std::vector<Subspace> allowable_subgroups(const CoveringData& cov, int s, Generation gen) {
    const auto& nuc = cov.nucleus_of(gen);
    const int q = cov.multiplicator_rank();
    std::vector<Subspace> out;
    if (s < 1 || s > nuc.dim()) return out;
    for (auto& u : enumerate_subspaces(q, s, cov.base.p()))
        if (u.sum(nuc).dim() == q) out.push_back(std::move(u));
    return out;
}

int OrbitPartition::find(const Subspace& u) const {
    auto it = index.find(u.key());
    return it == index.end() ? -1 : it->second;
}

OrbitPartition orbit_partition(std::vector<Subspace> points, const std::vector<FpMatrix>& mats0) {
    OrbitPartition op;
    op.points = std::move(points);
    const int np = int(op.points.size());
    for (int i = 0; i < np; ++i) op.index[op.points[i].key()] = i;
    std::vector<FpMatrix> mats;
    for (const auto& m : mats0) {
        if (m == FpMatrix::identity(m.p, m.rows)) continue;
        if (std::find(mats.begin(), mats.end(), m) == mats.end()) mats.push_back(m);
    }
    op.orbit_of.assign(np, -1);
    std::vector<int> queue;
    for (int i = 0; i < np; ++i) {
        if (op.orbit_of[i] >= 0) continue;
        const int o = int(op.rep.size());
        op.rep.push_back(i);
        op.orbit_of[i] = o;
        queue.assign(1, i);
        for (size_t h = 0; h < queue.size(); ++h) {
            for (const auto& m : mats) {
                int j = op.find(op.points[queue[h]].image(m));
                if (j < 0) throw std::logic_error("orbit_partition: point set not invariant");
                if (op.orbit_of[j] < 0) {
                    op.orbit_of[j] = o;
                    queue.push_back(j);
                }
            }
        }
        op.size.push_back(queue.size());
    }
    return op;
}

namespace {

struct TransversalOrbit {
    std::vector<Subspace> pts;
    std::vector<Automorphism> t, tinv;
    std::unordered_map<std::string, int> idx;
};

// orbit of u with coset representatives; stops early once stop is reached
TransversalOrbit orbit_with_transversal(const AutGroup& aut, const std::vector<FpMatrix>& mats,
                                        const Subspace& u, const Subspace* stop = nullptr) {
    const auto& g = aut.group();
    TransversalOrbit o;
    o.pts.push_back(u);
    o.t.push_back(identity_aut(g));
    o.tinv.push_back(identity_aut(g));
    o.idx[u.key()] = 0;
    if (stop && *stop == u) return o;
    const auto& ginv = aut.gens_inverse();
    for (size_t h = 0; h < o.pts.size(); ++h)
        for (size_t k = 0; k < mats.size(); ++k) {
            Subspace w = o.pts[h].image(mats[k]);
            auto key = w.key();
            if (o.idx.count(key)) continue;
            o.idx[key] = int(o.pts.size());
            o.t.push_back(compose(g, o.t[h], aut.gens()[k]));
            o.tinv.push_back(compose(g, ginv[k], o.tinv[h]));
            o.pts.push_back(std::move(w));
            if (stop && o.pts.back() == *stop) return o;
        }
    return o;
}

}  // namespace

Stabilizer stabilizer(const AutGroup& aut, const std::vector<FpMatrix>& mats, const Subspace& u) {
    const auto& g = aut.group();
    auto o = orbit_with_transversal(aut, mats, u);
    Stabilizer st;
    st.orbit_size = o.pts.size();
    const Order target = aut.order() / Order(st.orbit_size);
    if (target * Order(st.orbit_size) != aut.order()) throw std::logic_error("stabilizer: orbit size does not divide");
    st.group = AutGroup(g);
    const Automorphism id = identity_aut(g);
    for (size_t h = 0; h < o.pts.size() && st.group.order() < target; ++h)
        for (size_t k = 0; k < mats.size() && st.group.order() < target; ++k) {
            int j = o.idx.at(o.pts[h].image(mats[k]).key());
            Automorphism s = compose(g, compose(g, o.t[h], aut.gens()[k]), o.tinv[j]);
            if (s == id) continue;
            st.group.add(s);
        }
    if (st.group.order() != target) throw std::logic_error("stabilizer: order mismatch");
    return st;
}

std::optional<Automorphism> transporter(const AutGroup& aut, const std::vector<FpMatrix>& mats,
                                        const Subspace& u, const Subspace& v) {
    auto o = orbit_with_transversal(aut, mats, u, &v);
    auto it = o.idx.find(v.key());
    if (it == o.idx.end()) return std::nullopt;
    return o.t[it->second];
}

// ---------------------------------------------------------------- descendants

Expansion::Expansion(const PcGroup& g, AutGroup aut, Generation gen)
    : g_(g), aut_(std::move(aut)), gen_(gen), cov_(p_covering_group(g)) {
    for (const auto& a : aut_.gens()) mats_.push_back(multiplicator_action(cov_, a));
}

const OrbitPartition& Expansion::orbits(int s) const {
    auto it = orbits_.find(s);
    if (it != orbits_.end()) return *it->second;
    auto op = std::make_shared<OrbitPartition>(orbit_partition(allowable_subgroups(cov_, s, gen_), mats_));
    orbits_[s] = op;
    return *op;
}

Child Expansion::make_child(int s, int counter, const OrbitPartition& op, int orbit) const {
    Child c;
    c.step = s;
    c.counter = counter;
    c.allowable = op.points[op.rep[orbit]];
    c.orbit_size = op.size[orbit];
    auto q = std::make_shared<Quotient>(cov_.cover, cov_.subgroup(c.allowable));
    c.group = q->group();
    c.projection = std::move(q);
    return c;
}

DescendantBatch Expansion::descendants(int s) const {
    DescendantBatch b;
    b.step = s;
    const auto& op = orbits(s);
    b.allowable_count = op.points.size();
    for (size_t o = 0; o < op.rep.size(); ++o) b.children.push_back(make_child(s, int(o) + 1, op, int(o)));
    return b;
}

Child Expansion::child(int s, int counter) const {
    const auto& op = orbits(s);
    if (counter < 1 || counter > int(op.rep.size())) throw std::out_of_range("Expansion::child: no such child");
    return make_child(s, counter, op, counter - 1);
}

Order Expansion::expected_child_aut_order(const Child& c) const {
    Order o = aut_.order() / Order(c.orbit_size);
    for (int i = 0; i < cov_.d * c.step; ++i) o *= Order(g_.p());
    return o;
}

AutGroup Expansion::child_automorphisms(const Child& c) const {
    const auto& G = c.group;
    const auto& Q = *c.projection;
    const int n = g_.n(), q = cov_.multiplicator_rank();
    auto pos = defining_positions(g_.pres());
    auto st = stabilizer(aut_, mats_, c.allowable);
    std::vector<Automorphism> gens;
    for (const auto& s : st.group.gens()) {
        std::vector<Vec> top;
        for (int k : pos) top.push_back(Q.project(extend(s.img[k], n + q)));
        gens.push_back(aut_from_top(G, top));
    }
    std::vector<Vec> tails;
    for (int t = 0; t < q; ++t) tails.push_back(Q.project(cov_.cover.gen(n + t)));
    Subgroup layer = Subgroup::generated(G, tails, true);
    auto gpos = defining_positions(G.pres());
    for (size_t i = 0; i < gpos.size(); ++i)
        for (const auto& z : layer.gens()) {
            std::vector<Vec> top;
            for (size_t j = 0; j < gpos.size(); ++j) top.push_back(G.gen(gpos[j]));
            top[i] = G.mul(top[i], z);
            gens.push_back(aut_from_top(G, top));
        }
    AutGroup a(G, gens);
    if (a.order() != expected_child_aut_order(c))
        throw std::logic_error("child_automorphisms: order " + order_str(a.order()) + " expected " +
                               order_str(expected_child_aut_order(c)));
    return a;
}

DescendantBatch descendants(const PcGroup& g, const AutGroup& aut, int s, Generation gen) {
    return Expansion(g, aut, gen).descendants(s);
}

bool is_capable(const PcGroup& g, Generation gen) {
    if (g.n() == 0) return false;
    return nuclear_rank(g, gen) >= 1;
}

bool is_sigma_group(const PcGroup& g, const AutGroup& aut) {
    const int p = g.p(), d = int(defining_positions(g.pres()).size());
    FpMatrix minus(p, d, d);
    for (int i = 0; i < d; ++i) minus.at(i, i) = uint16_t(p - 1);
    auto rep = aut.top_element(minus);
    if (!rep) return false;
    Subgroup der = commutator_subgroup(Subgroup::whole(g), Subgroup::whole(g));
    if (der.log_order() == g.n() - d) return true;
    // G/G' is bigger than G/Phi: search the image of aut in Aut(G/G')
    Quotient ab(g, der);
    const PcGroup& A = ab.group();
    auto apos = defining_positions(A.pres());
    std::vector<Vec> agen;
    for (int k : apos) agen.push_back(A.gen(k));
    auto act = [&](const Automorphism& a, const std::vector<Vec>& tuple) {
        std::vector<Vec> out;
        for (int k : apos) {
            Vec x = ab.project(apply(g, a, ab.lift_element(A.gen(k))));
            out.push_back(x);
        }
        // compose: tuple holds images of the generators of A, apply a's action after it
        std::vector<Vec> res;
        auto img = extend_images(A, A, out);
        for (const auto& t : tuple) res.push_back(evaluate(A, img, t));
        return res;
    };
    std::vector<Vec> target;
    for (const auto& x : agen) target.push_back(A.inv(x));
    std::vector<std::vector<Vec>> seen{agen};
    std::unordered_map<std::string, int> idx;
    auto key = [](const std::vector<Vec>& t) {
        std::string s;
        for (const auto& v : t) s.append(v.begin(), v.end());
        return s;
    };
    idx[key(agen)] = 0;
    for (size_t h = 0; h < seen.size(); ++h) {
        if (seen[h] == target) return true;
        for (const auto& a : aut.gens()) {
            auto nx = act(a, seen[h]);
            auto k = key(nx);
            if (idx.count(k)) continue;
            if (seen.size() > 2000000) throw std::runtime_error("is_sigma_group: image too large");
            idx[k] = int(seen.size());
            seen.push_back(std::move(nx));
        }
    }
    return false;
}

// ---------------------------------------------------------------- labels and identification

std::string path_label(const std::vector<PathStep>& path) {
    std::string s = "root";
    for (const auto& st : path) s += "-#" + std::to_string(st.step) + ";" + std::to_string(st.counter);
    return s;
}

std::vector<PathStep> parse_label(const std::string& label) {
    if (label.rfind("root", 0) != 0) throw std::invalid_argument("bad label: " + label);
    std::vector<PathStep> out;
    size_t i = 4;
    while (i < label.size()) {
        if (label.compare(i, 2, "-#") != 0) throw std::invalid_argument("bad label: " + label);
        size_t semi = label.find(';', i);
        size_t next = label.find('-', i + 1);
        if (semi == std::string::npos || (next != std::string::npos && semi > next))
            throw std::invalid_argument("bad label: " + label);
        PathStep st;
        st.step = std::stoi(label.substr(i + 2, semi - i - 2));
        st.counter = std::stoi(label.substr(semi + 1, next == std::string::npos ? std::string::npos : next - semi - 1));
        out.push_back(st);
        i = next == std::string::npos ? label.size() : next;
    }
    return out;
}

TreeWalker::TreeWalker(int p, int d, Generation gen) : p_(p), d_(d), gen_(gen) {}

TreeWalker::Entry& TreeWalker::entry(const std::string& label) {
    auto it = nodes_.find(label);
    if (it != nodes_.end()) return it->second;
    Entry e;
    if (label == "root") {
        PcPresentation pr(p_, d_);
        pr.weight.assign(d_, 1);
        e.g = PcGroup(pr);
        e.aut = std::make_shared<AutGroup>(AutGroup::general_linear(e.g));
    } else {
        auto path = parse_label(label);
        auto last = path.back();
        path.pop_back();
        const Expansion& ex = expansion(path_label(path));
        Child c = ex.child(last.step, last.counter);
        e.g = c.group;
        e.aut = std::make_shared<AutGroup>(ex.child_automorphisms(c));
    }
    return nodes_.emplace(label, std::move(e)).first->second;
}

void TreeWalker::adopt(const std::string& label, const PcGroup& g, const AutGroup& aut) {
    if (nodes_.count(label)) return;
    Entry e;
    e.g = g;
    e.aut = std::make_shared<AutGroup>(aut);
    nodes_.emplace(label, std::move(e));
}

const PcGroup& TreeWalker::group(const std::string& label) { return entry(label).g; }
const AutGroup& TreeWalker::automorphisms(const std::string& label) { return *entry(label).aut; }

const Expansion& TreeWalker::expansion(const std::string& label) {
    Entry& e = entry(label);
    if (!e.exp) e.exp = std::make_shared<Expansion>(e.g, *e.aut, gen_);
    return *e.exp;
}

std::vector<PathStep> TreeWalker::identify(const PcGroup& h) {
    if (h.p() != p_) throw std::runtime_error("not in tree: wrong prime");
    auto series = gen_ == Generation::LowerCentral ? lower_central_series(h) : exponent_p_central_series(h);
    const int cls = int(series.size()) - 1;
    if (cls < 1) throw std::runtime_error("not in tree: trivial group");
    if (series[1].log_order() != h.n() - d_) throw std::runtime_error("not in tree: top does not match the root");
    {
        // the first layer must be the Frattini quotient
        std::vector<Vec> pw;
        for (int k = 0; k < h.n(); ++k) pw.push_back(h.pow(h.gen(k), p_));
        Subgroup phi = Subgroup::generated(h, pw, true, &series[1]);
        if (phi.log_order() != series[1].log_order()) throw std::runtime_error("not in tree: top not elementary");
    }
    // images of the root generators: a basis of h modulo its first layer
    std::vector<Vec> phi_img;
    {
        std::vector<std::vector<int>> rows;
        for (int k = 0; k < h.n() && int(phi_img.size()) < d_; ++k) {
            std::vector<Vec> trial = phi_img;
            trial.push_back(h.gen(k));
            if (Subgroup::generated(h, trial, false, &series[1]).log_order() ==
                series[1].log_order() + int(trial.size()))
                phi_img = trial;
        }
    }
    std::vector<PathStep> path;
    std::string label = "root";
    for (int c = 1; c < cls; ++c) {
        const Expansion& ex = expansion(label);
        const auto& cov = ex.covering();
        const int n = cov.base.n(), q = cov.multiplicator_rank();
        Quotient Q(h, series[c + 1]);
        const PcGroup& T = Q.group();
        std::vector<Vec> top;
        for (const auto& x : phi_img) top.push_back(Q.project(x));
        auto img = cov.images(T, top);
        Subgroup layer = Subgroup::generated(T, [&] {
            std::vector<Vec> v;
            for (const auto& x : series[c].gens()) v.push_back(Q.project(x));
            return v;
        }(), true);
        const int s = layer.log_order();
        FpMatrix m(p_, q, s);
        for (int t = 0; t < q; ++t) {
            auto e = layer.sift(img[n + t]);
            if (!e) throw std::runtime_error("not in tree: tail image outside the last layer");
            for (int k = 0; k < s; ++k) m.at(t, k) = uint16_t((*e)[k]);
        }
        if (rank(m) != s) throw std::runtime_error("not in tree: layer not covered");
        Subspace uh = left_nullspace(m);
        const int idx = ex.orbits(s).find(uh);
        if (idx < 0) throw std::runtime_error("not in tree: kernel is not allowable");
        const auto& op = ex.orbits(s);
        const int orbit = op.orbit_of[idx];
        const Subspace& rep = op.points[op.rep[orbit]];
        auto alpha = transporter(ex.aut(), ex.matrices(), rep, uh);
        if (!alpha) throw std::logic_error("identify: transporter failed");
        std::vector<Vec> next;
        for (int k = 0; k < d_; ++k) next.push_back(Q.lift_element(evaluate(T, img, extend(alpha->img[k], n + q))));
        phi_img = std::move(next);
        path.push_back({s, orbit + 1});
        label = path_label(path);
    }
    return path;
}

std::string identify(const PcGroup& h, const PcGroup& root) {
    for (int k = 0; k < root.n(); ++k)
        if (root.pres().def[k].kind != Definition::None || root.pres().power[k] != root.id())
            throw std::invalid_argument("identify: root must be elementary abelian");
    TreeWalker w(root.p(), root.n());
    return path_label(w.identify(h));
}

}  // namespace pg
