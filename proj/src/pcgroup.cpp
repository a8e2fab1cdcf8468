#include "pgroup/pcgroup.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace pg {

PcPresentation::PcPresentation(int p_, int n_)
    : p(p_), n(n_), alias(n_), power(n_, Vec(n_, 0)), comm(n_), def(n_) {
    if (!is_prime(p)) throw std::invalid_argument("PcPresentation: p not prime");
    for (int j = 0; j < n; ++j) comm[j].assign(j, Vec(n, 0));
}

std::string PcPresentation::name(int i) const {
    return "a" + std::to_string(i + 1);
}

bool PcPresentation::operator==(const PcPresentation& o) const {
    return p == o.p && n == o.n && alias == o.alias && weight == o.weight && power == o.power &&
           comm == o.comm && def == o.def;
}

void PcPresentation::check_triangular() const {
    auto bad = [&](const Vec& v, int upto) {
        if (int(v.size()) != n) return true;
        for (int t = 0; t < n; ++t) {
            if (v[t] >= p) return true;
            if (t <= upto && v[t]) return true;
        }
        return false;
    };
    for (int i = 0; i < n; ++i)
        if (bad(power[i], i)) throw std::invalid_argument("relation " + name(i) + "^p not triangular");
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < j; ++i)
            if (bad(comm[j][i], j))
                throw std::invalid_argument("relation [" + name(j) + "," + name(i) + "] not triangular");
    if (!weight.empty() && int(weight.size()) != n) throw std::invalid_argument("weights: wrong length");
}

namespace {
int single_gen(const Vec& v) {
    int g = -1;
    for (int t = 0; t < int(v.size()); ++t) {
        if (!v[t]) continue;
        if (v[t] != 1 || g >= 0) return -1;
        g = t;
    }
    return g;
}
}  // namespace

void PcPresentation::infer_definitions() {
    for (int k = 0; k < n; ++k) {
        if (def[k].kind != Definition::None) continue;
        Definition best;
        bool best_ok = false;
        auto consider = [&](Definition d, int wsum) {
            bool ok = weight.empty() || weight[k] == wsum;
            if (best.kind == Definition::None || (ok && !best_ok)) {
                best = d;
                best_ok = ok;
            }
        };
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < j; ++i)
                if (single_gen(comm[j][i]) == k)
                    consider({Definition::Comm, j, i},
                             weight.empty() ? 0 : weight[j] + (weight[i] == 1 ? 1 : 1000));
        for (int j = 0; j < k; ++j)
            if (single_gen(power[j]) == k) consider({Definition::Power, j, -1}, weight.empty() ? 0 : weight[j] + 1);
        def[k] = best;
    }
}

Collector::Collector(const PcPresentation& pres) : p_(pres.p), n_(pres.n) {
    pres.check_triangular();
    pow_.resize(n_);
    conj_.resize(n_);
    commute_.assign(n_, std::vector<uint8_t>(n_, 1));
    last_noncomm_.assign(n_, -1);
    for (int i = 0; i < n_; ++i)
        for (int t = 0; t < n_; ++t)
            if (pres.power[i][t]) pow_[i].push_back({t, pres.power[i][t]});
    for (int j = 0; j < n_; ++j) {
        conj_[j].resize(j);
        for (int i = 0; i < j; ++i) {
            const Vec& c = pres.comm[j][i];
            Letters w{{j, 1}};
            bool triv = true;
            for (int t = 0; t < n_; ++t)
                if (c[t]) { w.push_back({t, c[t]}); triv = false; }
            conj_[j][i] = w;
            if (!triv) {
                commute_[j][i] = commute_[i][j] = 0;
                last_noncomm_[i] = std::max(last_noncomm_[i], j);
            }
        }
    }
    // conjugates by a_g only involve generators above g, so fill g downwards
    cpow_.assign(n_, {});
    for (int j = 0; j < n_; ++j) cpow_[j].resize(j);
    for (int g = n_ - 1; g >= 0; --g)
        for (int j = g + 1; j < n_; ++j) {
            if (commute_[j][g]) continue;
            auto& tab = cpow_[j][g];
            tab.resize(p_);
            Vec v(n_, 0);
            std::vector<std::pair<int, int>> st;
            for (int e = 1; e < p_; ++e) {
                st.assign(conj_[j][g].rbegin(), conj_[j][g].rend());
                run(v, st);
                for (int t = 0; t < n_; ++t)
                    if (v[t]) tab[e].push_back({t, v[t]});
            }
        }
}

namespace {
thread_local std::vector<std::pair<int, int>> t_tail;
}

void Collector::run(Vec& v, std::vector<std::pair<int, int>>& st) const {
    auto& tail = t_tail;
    while (!st.empty()) {
        auto [g, e] = st.back();
        st.pop_back();
        int last = last_noncomm_[g];
        bool clash = false;
        for (int j = g + 1; j <= last; ++j)
            if (v[j] && !commute_[j][g]) { clash = true; break; }
        if (!clash) {
            int s = v[g] + e;
            if (s < p_) { v[g] = uint8_t(s); continue; }
            v[g] = uint8_t(s - p_);
            for (int j = n_ - 1; j > g; --j)
                if (v[j]) { st.push_back({j, v[j]}); v[j] = 0; }
            for (auto it = pow_[g].rbegin(); it != pow_[g].rend(); ++it) st.push_back(*it);
            continue;
        }
        // v = w a_g^{v_g} T  and  T a_g^e = a_g^e T^{a_g^e}; move one a_g at a time
        if (e > 1) st.push_back({g, e - 1});
        tail.clear();
        for (int j = g + 1; j < n_; ++j)
            if (v[j]) { tail.push_back({j, v[j]}); v[j] = 0; }
        for (auto it = tail.rbegin(); it != tail.rend(); ++it) {
            int j = it->first;
            if (commute_[j][g]) { st.push_back(*it); continue; }
            const Letters& w = cpow_[j][g][it->second];
            for (auto wt = w.rbegin(); wt != w.rend(); ++wt) st.push_back(*wt);
        }
        if (++v[g] == p_) {
            v[g] = 0;
            for (auto it = pow_[g].rbegin(); it != pow_[g].rend(); ++it) st.push_back(*it);
        }
    }
}

namespace {
thread_local std::vector<std::pair<int, int>> t_stack;
}

void Collector::mul_gen(Vec& v, int g, int e) const {
    e %= p_;
    if (!e) return;
    std::vector<std::pair<int, int>> st;
    st.swap(t_stack);
    st.clear();
    st.push_back({g, e});
    run(v, st);
    st.swap(t_stack);
}

void Collector::mul(Vec& v, const Vec& w) const {
    std::vector<std::pair<int, int>> st;
    st.swap(t_stack);
    st.clear();
    for (int t = n_ - 1; t >= 0; --t)
        if (w[t]) st.push_back({t, w[t]});
    run(v, st);
    st.swap(t_stack);
}

Vec Collector::product(const Vec& a, const Vec& b) const {
    Vec v(a);
    mul(v, b);
    return v;
}

Vec Collector::inverse(const Vec& a) const {
    Vec x(a), u(n_, 0);
    for (int i = 0; i < n_; ++i) {
        if (!x[i]) continue;
        int c = p_ - x[i];
        mul_gen(x, i, c);
        u[i] = uint8_t(c);
    }
    return u;
}

Vec Collector::power(const Vec& a, int64_t k) const {
    if (k < 0) return power(inverse(a), -k);
    Vec r(n_, 0), b(a);
    while (k) {
        if (k & 1) mul(r, b);
        k >>= 1;
        if (k) b = product(b, b);
    }
    return r;
}

Vec Collector::comm(const Vec& a, const Vec& b) const {
    Vec ba = product(b, a);
    Vec x = inverse(ba);
    mul(x, a);
    mul(x, b);
    return x;
}

Vec Collector::conj(const Vec& a, const Vec& b) const {
    Vec x = inverse(b);
    mul(x, a);
    mul(x, b);
    return x;
}

Vec Collector::collect(const std::vector<int>& word) const {
    Vec v(n_, 0);
    for (int w : word) {
        int g = std::abs(w) - 1;
        if (w == 0 || g >= n_) throw std::out_of_range("collect: bad generator index");
        if (w > 0) {
            mul_gen(v, g, 1);
        } else {
            Vec e(n_, 0);
            e[g] = 1;
            mul(v, inverse(e));
        }
    }
    return v;
}

std::vector<Violation> check_consistency(const PcPresentation& pres) {
    Collector c(pres);
    const int n = pres.n, p = pres.p;
    std::vector<Violation> out;
    auto unit = [&](int i, int e = 1) {
        Vec v(n, 0);
        v[i] = uint8_t(e);
        return v;
    };
    auto nm = [&](int i) { return pres.name(i); };
    auto report = [&](const std::string& what, const Vec& l, const Vec& r) {
        if (l != r) out.push_back({what, l, r});
    };
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < j; ++i) {
                Vec l = unit(k);
                c.mul_gen(l, j);
                c.mul_gen(l, i);
                Vec t = unit(j);
                c.mul_gen(t, i);
                Vec r = unit(k);
                c.mul(r, t);
                report("(" + nm(k) + " " + nm(j) + ") " + nm(i), l, r);
            }
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < j; ++i) {
            Vec l = pres.power[j];
            c.mul_gen(l, i);
            Vec t = unit(j);
            c.mul_gen(t, i);
            Vec r = unit(j, p - 1);
            c.mul(r, t);
            report(nm(j) + "^p " + nm(i), l, r);

            Vec l2 = unit(j);
            c.mul(l2, pres.power[i]);
            Vec r2 = unit(j);
            c.mul_gen(r2, i);
            c.mul_gen(r2, i, p - 1);
            report(nm(j) + " " + nm(i) + "^p", l2, r2);
        }
    for (int i = 0; i < n; ++i) {
        Vec l = pres.power[i];
        c.mul_gen(l, i);
        Vec r = unit(i);
        c.mul(r, pres.power[i]);
        report(nm(i) + "^p " + nm(i), l, r);
    }
    return out;
}

PcGroup::PcGroup() : PcGroup(PcPresentation(2, 0)) {}

PcGroup::PcGroup(PcPresentation pres)
    : pres_(std::move(pres)),
      col_(std::make_shared<Collector>(pres_)),
      cache_(std::make_shared<Cache>()) {}

PcGroup PcGroup::trivial(int p) { return PcGroup(PcPresentation(p, 0)); }

Vec PcGroup::gen(int i) const {
    Vec v(pres_.n, 0);
    v.at(i) = 1;
    return v;
}

bool PcGroup::weighted() const {
    std::call_once(cache_->wonce, [&] {
        const auto& w = pres_.weight;
        bool ok = int(w.size()) == pres_.n;
        for (int i = 0; ok && i < pres_.n; ++i) {
            if (w[i] < 1 || (i && w[i] < w[i - 1])) ok = false;
            if (w[i] > 1 && pres_.def[i].kind == Definition::None) ok = false;
            if (w[i] == 1 && pres_.def[i].kind != Definition::None) ok = false;
        }
        if (ok && pres_.n) {
            auto ser = exponent_p_central_series(*this);
            for (size_t j = 0; ok && j < ser.size(); ++j) {
                int cnt = 0;
                for (int i = 0; i < pres_.n; ++i)
                    if (w[i] > int(j)) {
                        ++cnt;
                        if (!ser[j].contains(gen(i))) ok = false;
                    }
                if (cnt != ser[j].log_order()) ok = false;
            }
            if (ok && w.back() != int(ser.size()) - 1) ok = false;
        }
        cache_->weighted = ok;
    });
    return cache_->weighted;
}

int PcGroup::rank_weighted() const {
    if (!weighted()) return -1;
    return int(std::count(pres_.weight.begin(), pres_.weight.end(), 1));
}

const Invariants& PcGroup::invariants() const {
    std::call_once(cache_->once, [&] {
        Invariants iv;
        iv.log_order = pres_.n;
        iv.nilpotency_class = int(lower_central_series(*this).size()) - 1;
        iv.coclass = iv.log_order - iv.nilpotency_class;
        iv.derived_length = int(derived_series(*this).size()) - 1;
        cache_->inv = iv;
    });
    return cache_->inv;
}

// ---------------------------------------------------------------- subgroups

Subgroup::Subgroup(std::shared_ptr<const Collector> col)
    : col_(std::move(col)), p_(col_->p()), n_(col_->n()), pos_(n_, -1), unit_(n_) {}

Subgroup::Subgroup(const PcGroup& g) : Subgroup(g.col_ptr()) {}

Subgroup Subgroup::whole(const PcGroup& g) { return tail(g.col_ptr(), 0); }

Subgroup Subgroup::tail(std::shared_ptr<const Collector> col, int u) {
    Subgroup s(std::move(col));
    if (u < 0 || u > s.n_) throw std::out_of_range("Subgroup::tail");
    for (int k = u; k < s.n_; ++k) {
        Vec x(s.n_, 0);
        x[k] = 1;
        s.pos_[k] = int(s.gens_.size());
        s.gens_.push_back(std::move(x));
        s.depth_.push_back(k);
        s.pw_.emplace_back();
        s.ipw_.emplace_back();
    }
    s.unit_ = u;
    return s;
}

namespace {
int depth_of(const Vec& x) {
    for (int t = 0; t < int(x.size()); ++t)
        if (x[t]) return t;
    return int(x.size());
}
}  // namespace

void Subgroup::add_tables(size_t k) {
    const Collector& c = *col_;
    const Vec& x = gens_[k];
    std::vector<Vec> pw(p_), ipw(p_);
    pw[0] = ipw[0] = Vec(n_, 0);
    Vec xi = c.inverse(x);
    for (int e = 1; e < p_; ++e) {
        pw[e] = c.product(pw[e - 1], x);
        ipw[e] = c.product(ipw[e - 1], xi);
    }
    pw_[k] = std::move(pw);
    ipw_[k] = std::move(ipw);
}

Subgroup Subgroup::from_igs(std::shared_ptr<const Collector> col, std::vector<Vec> gens) {
    Subgroup s(std::move(col));
    std::sort(gens.begin(), gens.end(), [](const Vec& a, const Vec& b) { return depth_of(a) < depth_of(b); });
    for (auto& x : gens) {
        int d = depth_of(x);
        if (d == s.n_ || x[d] != 1 || s.pos_[d] >= 0) throw std::invalid_argument("from_igs: not an induced sequence");
        s.pos_[d] = int(s.gens_.size());
        s.gens_.push_back(std::move(x));
        s.depth_.push_back(d);
    }
    s.pw_.resize(s.gens_.size());
    s.ipw_.resize(s.gens_.size());
    s.normalize_tail(true);
    for (size_t k = 0; k < s.gens_.size(); ++k)
        if (s.depth_[k] < s.unit_) s.add_tables(k);
    return s;
}

void Subgroup::normalize_tail(bool rewrite) {
    auto is_unit = [&](int d) {
        const Vec& x = gens_[pos_[d]];
        for (int t = d + 1; t < n_; ++t)
            if (x[t]) return false;
        return true;
    };
    int u = n_;
    while (u > 0 && pos_[u - 1] >= 0 && (rewrite || is_unit(u - 1))) --u;
    for (int d = u; d < n_; ++d) {
        int k = pos_[d];
        std::fill(gens_[k].begin(), gens_[k].end(), 0);
        gens_[k][d] = 1;
        pw_[k].clear();
        ipw_[k].clear();
    }
    unit_ = u;
}

void Subgroup::insert_at(Vec x, std::vector<Vec>& queue, bool normal) {
    const Collector& c = *col_;
    while (true) {
        int d = depth_of(x);
        if (d >= unit_) return;
        int k = pos_[d];
        if (k >= 0) {
            c.mul(x, pw_[k][p_ - x[d]]);
            continue;
        }
        if (x[d] != 1) x = c.power(x, inv_mod(x[d], p_));
        size_t at = std::lower_bound(depth_.begin(), depth_.end(), d) - depth_.begin();
        for (const auto& y : gens_) queue.push_back(c.comm(x, y));
        if (normal)
            for (int t = 0; t < n_; ++t) {
                Vec a(n_, 0);
                a[t] = 1;
                queue.push_back(c.comm(x, a));
            }
        gens_.insert(gens_.begin() + at, x);
        depth_.insert(depth_.begin() + at, d);
        pw_.insert(pw_.begin() + at, std::vector<Vec>());
        ipw_.insert(ipw_.begin() + at, std::vector<Vec>());
        add_tables(at);
        queue.push_back(c.product(pw_[at][p_ - 1], x));
        std::fill(pos_.begin(), pos_.end(), -1);
        for (size_t i = 0; i < depth_.size(); ++i) pos_[depth_[i]] = int(i);
        return;
    }
}

Subgroup Subgroup::generated(const PcGroup& g, const std::vector<Vec>& gens, bool normal,
                             const Subgroup* base) {
    return generated(g.col_ptr(), gens, normal, base);
}

Subgroup Subgroup::generated(std::shared_ptr<const Collector> col, const std::vector<Vec>& gens,
                             bool normal, const Subgroup* base) {
    Subgroup s = base ? *base : Subgroup(col);
    std::vector<Vec> queue(gens.rbegin(), gens.rend());
    while (!queue.empty()) {
        Vec x = std::move(queue.back());
        queue.pop_back();
        s.insert_at(std::move(x), queue, normal);
    }
    // a given base sequence must survive as a prefix, so only rewrite our own
    s.normalize_tail(base == nullptr);
    return s;
}

std::optional<std::vector<int>> Subgroup::sift(const Vec& x0) const {
    std::vector<int> ex(gens_.size(), 0);
    Vec x(x0);
    for (int t = 0; t < n_; ++t) {
        if (!x[t]) continue;
        int k = pos_[t];
        if (k < 0) return std::nullopt;
        if (t >= unit_) {
            for (int r = t; r < n_; ++r) ex[pos_[r]] = x[r];
            break;
        }
        int e = x[t];
        ex[k] = e;
        x = col_->product(ipw_[k][e], x);
    }
    return ex;
}

bool Subgroup::contains(const Vec& x0) const {
    Vec x(x0);
    for (int t = 0; t < unit_; ++t) {
        if (!x[t]) continue;
        int k = pos_[t];
        if (k < 0) return false;
        col_->mul(x, pw_[k][p_ - x[t]]);
    }
    return true;
}

bool Subgroup::contains(const Subgroup& h) const {
    for (const auto& x : h.gens_)
        if (!contains(x)) return false;
    return true;
}

std::vector<Vec> Subgroup::elements() const {
    std::vector<Vec> out{Vec(n_, 0)};
    for (int k = int(gens_.size()) - 1; k >= 0; --k) {
        std::vector<Vec> next;
        next.reserve(out.size() * p_);
        for (int e = 0; e < p_; ++e) {
            Vec ge = depth_[k] >= unit_ ? col_->power(gens_[k], e) : pw_[k][e];
            for (const auto& r : out) next.push_back(col_->product(ge, r));
        }
        out.swap(next);
    }
    return out;
}

Vec Subgroup::reduce(const Vec& x0) const {
    Vec x(x0);
    for (int t = 0; t < unit_; ++t) {
        if (!x[t]) continue;
        int k = pos_[t];
        if (k >= 0) col_->mul(x, pw_[k][p_ - x[t]]);
    }
    for (int t = unit_; t < n_; ++t) x[t] = 0;
    return x;
}

Subgroup commutator_subgroup(const Subgroup& a, const Subgroup& b) {
    // both arguments normal, so the normal closure is just the subgroup
    const Collector& c = *a.collector();
    std::vector<Vec> gens;
    for (const auto& x : a.gens())
        for (const auto& y : b.gens()) gens.push_back(c.comm(x, y));
    return Subgroup::generated(a.collector(), gens, true);
}

namespace {
std::vector<Vec> with_gens(const PcGroup& g) {
    std::vector<Vec> v;
    for (int i = 0; i < g.n(); ++i) v.push_back(g.gen(i));
    return v;
}

template <class Next>
std::vector<Subgroup> descend(const PcGroup& g, Next next) {
    std::vector<Subgroup> s{Subgroup::whole(g)};
    while (!s.back().trivial()) {
        Subgroup t = next(s.back());
        if (t.log_order() == s.back().log_order()) throw std::logic_error("series does not descend");
        s.push_back(std::move(t));
    }
    return s;
}
}  // namespace

std::vector<Subgroup> lower_central_series(const PcGroup& g) {
    auto G = with_gens(g);
    return descend(g, [&](const Subgroup& h) {
        std::vector<Vec> gens;
        for (const auto& x : h.gens())
            for (const auto& a : G) gens.push_back(g.comm(x, a));
        return Subgroup::generated(g, gens, true);
    });
}

std::vector<Subgroup> exponent_p_central_series(const PcGroup& g) {
    auto G = with_gens(g);
    return descend(g, [&](const Subgroup& h) {
        std::vector<Vec> gens;
        for (const auto& x : h.gens()) {
            gens.push_back(g.pow(x, g.p()));
            for (const auto& a : G) gens.push_back(g.comm(x, a));
        }
        return Subgroup::generated(g, gens, true);
    });
}

std::vector<Subgroup> derived_series(const PcGroup& g) {
    std::vector<Subgroup> s{Subgroup::whole(g)};
    while (!s.back().trivial()) {
        Subgroup t = commutator_subgroup(s.back(), s.back());
        if (t.log_order() == s.back().log_order()) throw std::logic_error("derived series stalls");
        s.push_back(std::move(t));
    }
    return s;
}

Subgroup centralizer_mod(const PcGroup& g, const Subgroup& a, const Subgroup& nsub) {
    const int n = g.n(), p = g.p();
    std::vector<char> in_n(n, 0);
    for (int d : nsub.depths()) in_n[d] = 1;
    Subgroup c = Subgroup::whole(g);
    const auto& A = a.gens();
    for (int j = 0; j < n && !A.empty(); ++j) {
        if (in_n[j]) continue;
        // [x,a] lies in <a_j..>N for x in c; read off the a_j coordinate
        const auto& B = c.gens();
        FpMatrix m(p, int(B.size()), int(A.size()));
        for (size_t r = 0; r < B.size(); ++r)
            for (size_t s = 0; s < A.size(); ++s) {
                Vec z = nsub.reduce(g.comm(B[r], A[s]));
                m.at(int(r), int(s)) = z[j];
            }
        if (m.is_zero()) continue;
        Subspace ker = left_nullspace(m);
        std::vector<Vec> gens;
        for (int r = 0; r < ker.dim(); ++r) {
            Vec x = g.id();
            for (size_t i = 0; i < B.size(); ++i) {
                int e = ker.basis.at(r, int(i));
                if (e) x = g.mul(x, g.pow(B[i], e));
            }
            gens.push_back(x);
        }
        for (size_t i = 0; i < B.size(); ++i) {
            gens.push_back(g.pow(B[i], p));
            for (size_t l = 0; l < i; ++l) gens.push_back(g.comm(B[i], B[l]));
        }
        for (const auto& x : nsub.gens()) gens.push_back(x);
        c = Subgroup::generated(g, gens, true);
    }
    return c;
}

Subgroup centre(const PcGroup& g) {
    return centralizer_mod(g, Subgroup::whole(g), Subgroup(g));
}

std::vector<Subgroup> upper_central_series(const PcGroup& g) {
    std::vector<Subgroup> s{Subgroup(g)};
    Subgroup G = Subgroup::whole(g);
    while (s.back().log_order() < g.n()) {
        Subgroup z = centralizer_mod(g, G, s.back());
        if (z.log_order() == s.back().log_order()) throw std::logic_error("upper central series stalls");
        s.push_back(std::move(z));
    }
    return s;
}

Subgroup two_step_centralizer(const PcGroup& g) {
    auto lcs = lower_central_series(g);
    if (lcs.size() < 3) throw std::domain_error("two-step centralizer needs class at least 2");
    Subgroup g4 = lcs.size() > 3 ? lcs[3] : Subgroup(g);
    return centralizer_mod(g, lcs[1], g4);
}

namespace {
int direct_defect(const PcGroup& g) {
    auto lcs = lower_central_series(g);
    if (lcs.size() < 3) throw std::domain_error("defect needs class at least 2");
    return commutator_subgroup(lcs[1], two_step_centralizer(g)).log_order();
}
}  // namespace

int defect(const PcGroup& g) {
    if (g.nilpotency_class() < 2) throw std::domain_error("defect needs class at least 2");
    if (g.coclass() == 1) return direct_defect(g);
    PcGroup m = metabelianization(g);
    if (m.nilpotency_class() >= 2 && m.coclass() == 1) return direct_defect(m);
    return direct_defect(g);
}

// ---------------------------------------------------------------- quotients

std::vector<int> Quotient::layer_coords(const Layer& L, const Vec& x) const {
    auto e = L.top.sift(x);
    if (!e) throw std::logic_error("layer coordinates: element outside layer");
    std::vector<int> v;
    v.reserve(L.coords.size());
    for (int k : L.coords) v.push_back((*e)[k]);
    return v;
}

Quotient::Quotient(const PcGroup& g, const Subgroup& nsub) : g_(g) {
    const int p = g.p();
    auto G = with_gens(g);

    // exponent-p central series of G/N, pulled back to G
    std::vector<Subgroup> P{Subgroup::whole(g)};
    while (P.back().log_order() > nsub.log_order()) {
        std::vector<Vec> gens;
        for (const auto& x : P.back().gens()) {
            gens.push_back(g.pow(x, p));
            for (const auto& a : G) gens.push_back(g.comm(x, a));
        }
        Subgroup t = Subgroup::generated(g, gens, true, &nsub);
        if (t.log_order() == P.back().log_order()) throw std::logic_error("quotient series stalls");
        P.push_back(std::move(t));
    }
    const int c = int(P.size()) - 1;
    // rebuild so that every term's sequence extends the next one
    std::vector<Subgroup> R(c + 1);
    R[c] = nsub;
    for (int j = c - 1; j >= 0; --j) R[j] = Subgroup::generated(g, P[j].gens(), false, &R[j + 1]);

    std::vector<int> weight;
    std::vector<Definition> defs;
    std::vector<std::string> alias;
    for (int j = 1; j <= c; ++j) {
        Layer L;
        L.top = R[j - 1];
        std::vector<char> low(g.n(), 0);
        for (int d : R[j].depths()) low[d] = 1;
        for (int k = 0; k < L.top.log_order(); ++k)
            if (!low[L.top.depths()[k]]) L.coords.push_back(k);
        const int dim = int(L.coords.size());

        struct Cand {
            Vec x;
            Definition d;
        };
        std::vector<Cand> cands;
        if (j == 1) {
            for (int i = 0; i < g.n(); ++i) cands.push_back({g.gen(i), {}});
        } else {
            const auto& prev = layers_[j - 2].gens;
            const auto& first = layers_[0].gens;
            for (int k : prev)
                for (int i : first)
                    if (k > i) cands.push_back({g.comm(lift_[k], lift_[i]), {Definition::Comm, k, i}});
            for (int k : prev) cands.push_back({g.pow(lift_[k], p), {Definition::Power, k, -1}});
        }
        std::vector<std::vector<int>> rows;
        for (auto& cd : cands) {
            if (int(rows.size()) == dim) break;
            auto v = layer_coords(L, cd.x);
            auto trial = rows;
            trial.push_back(v);
            if (rank(FpMatrix::from_rows(p, trial)) == int(trial.size())) {
                rows = std::move(trial);
                L.gens.push_back(int(lift_.size()));
                lift_.push_back(cd.x);
                weight.push_back(j);
                defs.push_back(cd.d);
                std::string al;
                for (int t = 0; t < g.n(); ++t)
                    if (cd.x == g.gen(t)) al = g.pres().alias[t];
                alias.push_back(al);
            }
        }
        if (int(rows.size()) != dim) throw std::logic_error("quotient: layer not spanned by candidates");
        L.inv = inverse(FpMatrix::from_rows(p, rows));
        layers_.push_back(std::move(L));
    }

    const int m = int(lift_.size());
    PcPresentation q(p, m);
    q.weight = weight;
    q.def = defs;
    q.alias = alias;
    for (int i = 0; i < m; ++i) q.power[i] = project(g.pow(lift_[i], p));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < a; ++b) q.comm[a][b] = project(g.comm(lift_[a], lift_[b]));
    q_ = PcGroup(std::move(q));
}

Vec Quotient::project(const Vec& x0) const {
    const int m = int(lift_.size());
    Vec y(m, 0), x(x0);
    for (const auto& L : layers_) {
        auto v = layer_coords(L, x);
        const int d = int(L.gens.size());
        Vec part = g_.id();
        for (int k = 0; k < d; ++k) {
            int e = 0;
            for (int r = 0; r < d; ++r) e += v[r] * L.inv.at(r, k);
            e %= g_.p();
            y[L.gens[k]] = uint8_t(e);
            if (e) part = g_.mul(part, g_.pow(lift_[L.gens[k]], e));
        }
        x = g_.mul(g_.inv(part), x);
    }
    return y;
}

Vec Quotient::lift_element(const Vec& y) const {
    Vec x = g_.id();
    for (size_t k = 0; k < lift_.size(); ++k)
        if (y[k]) x = g_.mul(x, g_.pow(lift_[k], y[k]));
    return x;
}

PcGroup quotient(const PcGroup& g, const Subgroup& n) { return Quotient(g, n).group(); }

PcGroup standardize(const PcGroup& g) { return Quotient(g, Subgroup(g)).group(); }

PcGroup parent(const PcGroup& g) {
    auto lcs = lower_central_series(g);
    if (lcs.size() <= 2) return PcGroup::trivial(g.p());
    return quotient(g, lcs[lcs.size() - 2]);
}

PcGroup metabelianization(const PcGroup& g) {
    auto ds = derived_series(g);
    if (ds.size() <= 3) return standardize(g);
    return quotient(g, ds[2]);
}

// ---------------------------------------------------------------- enumeration

void for_each_element(const PcGroup& g, const std::function<void(const Vec&)>& f, int max_log) {
    if (g.n() > max_log) throw std::length_error("element enumeration: group too large");
    Vec v(g.n(), 0);
    while (true) {
        f(v);
        int t = g.n() - 1;
        while (t >= 0 && ++v[t] == g.p()) v[t--] = 0;
        if (t < 0) return;
    }
}

std::vector<Vec> element_enumeration(const PcGroup& g, int max_log) {
    std::vector<Vec> out;
    for_each_element(g, [&](const Vec& v) { out.push_back(v); }, max_log);
    return out;
}

// ---------------------------------------------------------------- text format

std::string format_vec(const PcPresentation& pres, const Vec& v) {
    std::string s;
    for (int t = 0; t < int(v.size()); ++t) {
        if (!v[t]) continue;
        if (!s.empty()) s += '*';
        s += pres.name(t);
        if (v[t] != 1) s += '^' + std::to_string(v[t]);
    }
    return s.empty() ? "1" : s;
}

std::string print_presentation(const PcPresentation& pres) {
    std::ostringstream o;
    o << "prime " << pres.p << "\n";
    o << "gens " << pres.n << "\n";
    bool any_alias = std::any_of(pres.alias.begin(), pres.alias.end(), [](auto& a) { return !a.empty(); });
    if (any_alias) {
        o << "alias";
        for (const auto& a : pres.alias) o << ' ' << (a.empty() ? "-" : a);
        o << "\n";
    }
    if (!pres.weight.empty()) {
        o << "weights";
        for (int w : pres.weight) o << ' ' << w;
        o << "\n";
    }
    std::vector<std::vector<char>> is_def(pres.n, std::vector<char>(pres.n + 1, 0));
    for (int k = 0; k < pres.n; ++k) {
        const auto& d = pres.def[k];
        if (d.kind == Definition::Comm) {
            o << pres.name(k) << " = [" << pres.name(d.j) << "," << pres.name(d.i) << "]\n";
            is_def[d.j][d.i] = 1;
        } else if (d.kind == Definition::Power) {
            o << pres.name(k) << " = " << pres.name(d.j) << "^" << pres.p << "\n";
            is_def[d.j][pres.n] = 1;
        }
    }
    for (int i = 0; i < pres.n; ++i) {
        if (is_def[i][pres.n]) continue;
        if (std::any_of(pres.power[i].begin(), pres.power[i].end(), [](uint8_t e) { return e; }))
            o << pres.name(i) << "^" << pres.p << " = " << format_vec(pres, pres.power[i]) << "\n";
    }
    for (int j = 0; j < pres.n; ++j)
        for (int i = 0; i < j; ++i) {
            if (is_def[j][i]) continue;
            const Vec& c = pres.comm[j][i];
            if (std::any_of(c.begin(), c.end(), [](uint8_t e) { return e; }))
                o << "[" << pres.name(j) << "," << pres.name(i) << "] = " << format_vec(pres, c) << "\n";
        }
    return o.str();
}

namespace {
struct ParseError : std::runtime_error {
    ParseError(int line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg) {}
};

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string strip_spaces(const std::string& s) {
    std::string r;
    for (char ch : s)
        if (ch != ' ' && ch != '\t' && ch != '\r') r += ch;
    return r;
}

struct Names {
    int n = 0;
    std::vector<std::string> alias;
    int lookup(const std::string& s, int line) const {
        if (s.size() > 1 && s[0] == 'a' &&
            std::all_of(s.begin() + 1, s.end(), [](char ch) { return std::isdigit((unsigned char)ch); })) {
            int i = std::stoi(s.substr(1)) - 1;
            if (i >= 0 && i < n) return i;
        }
        for (int i = 0; i < n; ++i)
            if (!alias[i].empty() && alias[i] == s) return i;
        throw ParseError(line, "unknown generator '" + s + "'");
    }
};

Vec parse_word(const std::string& w, const Names& nm, int p, int line) {
    Vec v(nm.n, 0);
    if (w == "1") return v;
    if (w.empty()) throw ParseError(line, "empty word");
    int last = -1;
    size_t pos = 0;
    while (pos <= w.size()) {
        size_t star = w.find('*', pos);
        std::string f = w.substr(pos, star == std::string::npos ? std::string::npos : star - pos);
        int e = 1;
        size_t hat = f.find('^');
        std::string g = f.substr(0, hat);
        if (hat != std::string::npos) {
            try {
                size_t used = 0;
                e = std::stoi(f.substr(hat + 1), &used);
                if (used != f.size() - hat - 1) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw ParseError(line, "bad exponent in '" + f + "'");
            }
        }
        int i = nm.lookup(g, line);
        if (i <= last) throw ParseError(line, "word not in normal form order");
        last = i;
        v[i] = uint8_t(((e % p) + p) % p);
        if (star == std::string::npos) break;
        pos = star + 1;
    }
    return v;
}

std::pair<int, int> parse_comm(const std::string& s, const Names& nm, int line) {
    if (s.size() < 5 || s.front() != '[' || s.back() != ']') throw ParseError(line, "expected [x,y]");
    size_t comma = s.find(',');
    if (comma == std::string::npos) throw ParseError(line, "expected [x,y]");
    int j = nm.lookup(s.substr(1, comma - 1), line);
    int i = nm.lookup(s.substr(comma + 1, s.size() - comma - 2), line);
    if (j <= i) throw ParseError(line, "commutator [aj,ai] needs j > i");
    return {j, i};
}
}  // namespace

PcPresentation parse_presentation(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line = 0, p = 0, n = -1;
    PcPresentation pres;
    Names nm;
    bool have_pres = false;
    auto need_pres = [&] {
        if (have_pres) return;
        if (p == 0 || n < 0) throw ParseError(line, "'prime' and 'gens' must come first");
        try {
            pres = PcPresentation(p, n);
        } catch (const std::exception& e) {
            throw ParseError(line, e.what());
        }
        nm.n = n;
        nm.alias = pres.alias;
        have_pres = true;
    };
    std::vector<std::vector<char>> seen_c;
    std::vector<char> seen_p;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw.substr(0, raw.find('#'));
        s = trim(s);
        if (s.empty()) continue;
        std::istringstream ls(s);
        std::string kw;
        ls >> kw;
        if (kw == "prime") {
            if (!(ls >> p)) throw ParseError(line, "bad prime");
            continue;
        }
        if (kw == "gens") {
            if (!(ls >> n) || n < 0 || n > 255) throw ParseError(line, "bad generator count");
            continue;
        }
        if (kw == "alias") {
            need_pres();
            for (int i = 0; i < n; ++i) {
                std::string a;
                if (!(ls >> a)) throw ParseError(line, "alias needs one entry per generator");
                pres.alias[i] = a == "-" ? "" : a;
            }
            nm.alias = pres.alias;
            continue;
        }
        if (kw == "weights") {
            need_pres();
            pres.weight.assign(n, 0);
            for (int i = 0; i < n; ++i)
                if (!(ls >> pres.weight[i]) || pres.weight[i] < 1)
                    throw ParseError(line, "weights needs one positive entry per generator");
            continue;
        }
        need_pres();
        if (seen_p.empty()) {
            seen_p.assign(n, 0);
            seen_c.assign(n, std::vector<char>(n, 0));
        }
        size_t eq = s.find('=');
        if (eq == std::string::npos) throw ParseError(line, "expected '='");
        std::string lhs = strip_spaces(s.substr(0, eq)), rhs = strip_spaces(s.substr(eq + 1));
        auto set_power = [&](int i, const Vec& v) {
            if (seen_p[i]) throw ParseError(line, "duplicate power relation");
            seen_p[i] = 1;
            pres.power[i] = v;
        };
        auto set_comm = [&](int j, int i, const Vec& v) {
            if (seen_c[j][i]) throw ParseError(line, "duplicate commutator relation");
            seen_c[j][i] = 1;
            pres.comm[j][i] = v;
        };
        if (lhs.front() == '[') {
            auto [j, i] = parse_comm(lhs, nm, line);
            set_comm(j, i, parse_word(rhs, nm, p, line));
            continue;
        }
        size_t hat = lhs.find('^');
        if (hat != std::string::npos) {
            int i = nm.lookup(lhs.substr(0, hat), line);
            if (lhs.substr(hat + 1) != std::to_string(p)) throw ParseError(line, "power relation must use exponent p");
            set_power(i, parse_word(rhs, nm, p, line));
            continue;
        }
        // definition  ak = [aj,ai]  or  ak = aj^p
        int k = nm.lookup(lhs, line);
        if (pres.def[k].kind != Definition::None) throw ParseError(line, "generator defined twice");
        Vec unit(n, 0);
        unit[k] = 1;
        if (!rhs.empty() && rhs.front() == '[') {
            auto [j, i] = parse_comm(rhs, nm, line);
            set_comm(j, i, unit);
            pres.def[k] = {Definition::Comm, j, i};
        } else {
            size_t h2 = rhs.find('^');
            if (h2 == std::string::npos || rhs.substr(h2 + 1) != std::to_string(p))
                throw ParseError(line, "definition must be [aj,ai] or aj^p");
            int j = nm.lookup(rhs.substr(0, h2), line);
            set_power(j, unit);
            pres.def[k] = {Definition::Power, j, -1};
        }
    }
    need_pres();
    try {
        pres.check_triangular();
    } catch (const std::exception& e) {
        throw ParseError(line, e.what());
    }
    return pres;
}

}  // namespace pg
