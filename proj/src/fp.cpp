#include "pgroup/fp.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace pg {

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

int inv_mod(int a, int p) {
    int64_t t = 0, nt = 1, r = p, nr = ((a % p) + p) % p;
    while (nr) {
        int64_t q = r / nr;
        std::swap(t, nt); nt -= q * t;
        std::swap(r, nr); nr -= q * r;
    }
    if (r != 1) throw std::domain_error("inv_mod: not invertible");
    return int((t % p + p) % p);
}

FpMatrix::FpMatrix(int p_, int r, int c) : p(p_), rows(r), cols(c), a(size_t(r) * c, 0) {
    if (!is_prime(p)) throw std::invalid_argument("FpMatrix: modulus not prime");
}

FpMatrix FpMatrix::identity(int p, int n) {
    FpMatrix m(p, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

FpMatrix FpMatrix::from_rows(int p, const std::vector<std::vector<int>>& r) {
    int c = r.empty() ? 0 : int(r[0].size());
    FpMatrix m(p, int(r.size()), c);
    for (int i = 0; i < m.rows; ++i) {
        if (int(r[i].size()) != c) throw std::invalid_argument("from_rows: ragged");
        for (int j = 0; j < c; ++j) m.at(i, j) = uint16_t(((r[i][j] % p) + p) % p);
    }
    return m;
}

std::vector<int> FpMatrix::row(int r) const {
    std::vector<int> v(cols);
    for (int j = 0; j < cols; ++j) v[j] = at(r, j);
    return v;
}

bool FpMatrix::is_zero() const {
    return std::all_of(a.begin(), a.end(), [](uint16_t x) { return x == 0; });
}

FpMatrix mul(const FpMatrix& x, const FpMatrix& y) {
    if (x.cols != y.rows || x.p != y.p) throw std::invalid_argument("mul: shape");
    FpMatrix z(x.p, x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            uint32_t c = x.at(i, k);
            if (!c) continue;
            for (int j = 0; j < y.cols; ++j)
                z.at(i, j) = uint16_t((z.at(i, j) + c * y.at(k, j)) % x.p);
        }
    return z;
}

Rref rref(const FpMatrix& m) {
    Rref r{m, {}};
    FpMatrix& a = r.m;
    const int p = a.p;
    int row = 0;
    for (int c = 0; c < a.cols && row < a.rows; ++c) {
        int piv = -1;
        for (int i = row; i < a.rows; ++i)
            if (a.at(i, c)) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != row)
            for (int j = 0; j < a.cols; ++j) std::swap(a.at(piv, j), a.at(row, j));
        uint32_t iv = inv_mod(a.at(row, c), p);
        for (int j = c; j < a.cols; ++j) a.at(row, j) = uint16_t(a.at(row, j) * iv % p);
        for (int i = 0; i < a.rows; ++i) {
            if (i == row || !a.at(i, c)) continue;
            uint32_t f = p - a.at(i, c);
            for (int j = c; j < a.cols; ++j)
                a.at(i, j) = uint16_t((a.at(i, j) + f * a.at(row, j)) % p);
        }
        r.pivots.push_back(c);
        ++row;
    }
    return r;
}

int rank(const FpMatrix& m) { return int(rref(m).pivots.size()); }

FpMatrix inverse(const FpMatrix& m) {
    if (m.rows != m.cols) throw std::invalid_argument("inverse: not square");
    int n = m.rows;
    FpMatrix aug(m.p, n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, n + i) = 1;
    }
    Rref r = rref(aug);
    if (int(r.pivots.size()) < n || (n && r.pivots[n - 1] != n - 1))
        throw std::domain_error("inverse: singular");
    FpMatrix out(m.p, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.at(i, j) = r.m.at(i, n + j);
    return out;
}

Subspace::Subspace(int p_, int n_) : p(p_), n(n_), basis(p_, 0, n_) {}

Subspace Subspace::span(const FpMatrix& rows) {
    Rref r = rref(rows);
    Subspace s(rows.p, rows.cols);
    int k = int(r.pivots.size());
    s.basis = FpMatrix(rows.p, k, rows.cols);
    std::copy(r.m.a.begin(), r.m.a.begin() + size_t(k) * rows.cols, s.basis.a.begin());
    s.pivots = r.pivots;
    return s;
}

Subspace Subspace::full(int p, int n) { return span(FpMatrix::identity(p, n)); }

bool Subspace::contains(const std::vector<int>& v) const {
    std::vector<int> w(v);
    for (int r = 0; r < dim(); ++r) {
        int c = pivots[r];
        int f = ((w[c] % p) + p) % p;
        if (!f) continue;
        for (int j = 0; j < n; ++j) w[j] = int((w[j] - int64_t(f) * basis.at(r, j)) % p);
    }
    for (int x : w)
        if (x % p) return false;
    return true;
}

bool Subspace::contains(const Subspace& o) const {
    for (int r = 0; r < o.dim(); ++r)
        if (!contains(o.basis.row(r))) return false;
    return true;
}

Subspace Subspace::sum(const Subspace& o) const {
    FpMatrix m(p, dim() + o.dim(), n);
    std::copy(basis.a.begin(), basis.a.end(), m.a.begin());
    std::copy(o.basis.a.begin(), o.basis.a.end(), m.a.begin() + basis.a.size());
    return span(m);
}

Subspace Subspace::intersect(const Subspace& o) const {
    // v = x*B1 = y*B2  <=>  (x, -y) in left kernel of [B1; B2]
    int d1 = dim(), d2 = o.dim();
    FpMatrix st(p, d1 + d2, n);
    std::copy(basis.a.begin(), basis.a.end(), st.a.begin());
    std::copy(o.basis.a.begin(), o.basis.a.end(), st.a.begin() + basis.a.size());
    Subspace k = left_nullspace(st);
    FpMatrix vs(p, k.dim(), n);
    for (int r = 0; r < k.dim(); ++r)
        for (int i = 0; i < d1; ++i) {
            uint32_t c = k.basis.at(r, i);
            if (!c) continue;
            for (int j = 0; j < n; ++j)
                vs.at(r, j) = uint16_t((vs.at(r, j) + c * basis.at(i, j)) % p);
        }
    return span(vs);
}

Subspace Subspace::image(const FpMatrix& m) const { return span(mul(basis, m)); }

std::string Subspace::key() const {
    std::string k;
    k.reserve(basis.a.size() + 1);
    k.push_back(char(dim()));
    for (auto x : basis.a) k.push_back(char(x));
    return k;
}

bool Subspace::operator<(const Subspace& o) const {
    if (dim() != o.dim()) return dim() < o.dim();
    return basis.a < o.basis.a;
}

Subspace nullspace(const FpMatrix& m) {
    Rref r = rref(m);
    const int p = m.p, n = m.cols;
    std::vector<bool> is_piv(n, false);
    for (int c : r.pivots) is_piv[c] = true;
    std::vector<std::vector<int>> vecs;
    for (int f = 0; f < n; ++f) {
        if (is_piv[f]) continue;
        std::vector<int> v(n, 0);
        v[f] = 1;
        for (size_t i = 0; i < r.pivots.size(); ++i)
            v[r.pivots[i]] = (p - r.m.at(int(i), f)) % p;
        vecs.push_back(v);
    }
    if (vecs.empty()) return Subspace(p, n);
    return Subspace::span(FpMatrix::from_rows(p, vecs));
}

Subspace left_nullspace(const FpMatrix& m) {
    FpMatrix t(m.p, m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
    return nullspace(t);
}

uint64_t gaussian_binomial(int n, int k, int p) {
    if (k < 0 || k > n) return 0;
    // product formula, exact in integers for the sizes used here
    unsigned __int128 num = 1, den = 1;
    for (int i = 0; i < k; ++i) {
        unsigned __int128 a = 1, b = 1;
        for (int j = 0; j < n - i; ++j) a *= p;
        for (int j = 0; j < i + 1; ++j) b *= p;
        num *= (a - 1);
        den *= (b - 1);
    }
    return uint64_t(num / den);
}

std::vector<Subspace> enumerate_subspaces(int n, int s, int p) {
    if (s < 0 || s > n) throw std::invalid_argument("enumerate_subspaces: bad codim");
    if (!is_prime(p)) throw std::invalid_argument("enumerate_subspaces: p not prime");
    int k = n - s;
    std::vector<Subspace> out;
    std::vector<int> piv(k);
    for (int i = 0; i < k; ++i) piv[i] = i;
    while (true) {
        std::vector<std::pair<int, int>> freepos;
        for (int r = 0; r < k; ++r)
            for (int c = piv[r] + 1; c < n; ++c)
                if (std::find(piv.begin(), piv.end(), c) == piv.end()) freepos.push_back({r, c});
        FpMatrix m(p, k, n);
        for (int r = 0; r < k; ++r) m.at(r, piv[r]) = 1;
        std::vector<int> digit(freepos.size(), 0);
        while (true) {
            for (size_t t = 0; t < freepos.size(); ++t)
                m.at(freepos[t].first, freepos[t].second) = uint16_t(digit[t]);
            Subspace sp(p, n);
            sp.basis = m;
            sp.pivots = piv;
            out.push_back(std::move(sp));
            size_t t = 0;
            while (t < digit.size() && ++digit[t] == p) digit[t++] = 0;
            if (t == digit.size()) break;
        }
        int i = k - 1;
        while (i >= 0 && piv[i] == n - k + i) --i;
        if (i < 0) break;
        ++piv[i];
        for (int j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
    }
    std::sort(out.begin(), out.end(),
              [](const Subspace& a, const Subspace& b) { return a.basis.a < b.basis.a; });
    return out;
}

void for_each_subspace(int n, int s, int p, const std::function<void(const Subspace&)>& f) {
    for (const auto& sp : enumerate_subspaces(n, s, p)) f(sp);
}

void IntMatrix::add_row(const std::vector<int64_t>& r) {
    if (rows == 0 && cols == 0) cols = int(r.size());
    if (int(r.size()) != cols) throw std::invalid_argument("IntMatrix: row length");
    a.insert(a.end(), r.begin(), r.end());
    ++rows;
}

int AbelianType::log_order() const {
    int s = 0;
    for (int x : e) s += x;
    return s;
}

std::string AbelianType::str() const {
    std::ostringstream os;
    os << '[';
    for (size_t i = 0; i < e.size(); ++i) {
        int64_t v = 1;
        for (int j = 0; j < e[i]; ++j) v *= p;
        os << (i ? "," : "") << v;
    }
    os << ']';
    return os.str();
}

bool AbelianType::operator<(const AbelianType& o) const {
    if (e.size() != o.e.size()) return e.size() < o.e.size();
    return e < o.e;
}

AbelianType parse_abelian_type(const std::string& s, int p) {
    AbelianType t{p, {}};
    std::string body;
    for (char c : s)
        if (c != '[' && c != ']' && c != ' ') body.push_back(c);
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        int64_t v = std::stoll(tok);
        if (v == 1) continue;
        int lg = 0;
        while (v > 1 && v % p == 0) { v /= p; ++lg; }
        if (v != 1) throw std::invalid_argument("abelian type: not a power of p: " + tok);
        t.e.push_back(lg);
    }
    std::sort(t.e.rbegin(), t.e.rend());
    return t;
}

namespace {
int valuation(int64_t x, int p, int B) {
    if (x == 0) return B;
    int v = 0;
    while (x % p == 0) { x /= p; ++v; }
    return v;
}

int64_t inv_mod64(int64_t a, int64_t q) {
    __int128 t = 0, nt = 1, r = q, nr = a % q;
    while (nr) {
        __int128 qq = r / nr;
        __int128 tmp = t - qq * nt; t = nt; nt = tmp;
        tmp = r - qq * nr; r = nr; nr = tmp;
    }
    if (r != 1) throw std::domain_error("not a unit");
    return int64_t((t % q + q) % q);
}
}  // namespace

AbelianQuotient::AbelianQuotient(const IntMatrix& rel, int p_, int n_, int B_) : p(p_), n(n_), B(B_) {
    if (!is_prime(p)) throw std::invalid_argument("abelian_invariants: p not prime");
    if (rel.rows && rel.cols != n) throw std::invalid_argument("abelian_invariants: width");
    q = 1;
    for (int i = 0; i < B; ++i) {
        q *= p;
        if (q > (int64_t(1) << 40)) throw std::overflow_error("abelian_invariants: p^B too large");
    }
    const int R = rel.rows;
    std::vector<int64_t> a(size_t(R) * n);
    for (size_t i = 0; i < a.size(); ++i) a[i] = ((rel.a[i] % q) + q) % q;
    auto at = [&](int i, int j) -> int64_t& { return a[size_t(i) * n + j]; };
    auto mulq = [&](int64_t x, int64_t y) { return int64_t((__int128)x * y % q); };
    transform.assign(size_t(n) * n, 0);
    auto T = [&](int i, int j) -> int64_t& { return transform[size_t(i) * n + j]; };
    for (int i = 0; i < n; ++i) T(i, i) = 1;

    for (int t = 0; t < n; ++t) {
        int bi = -1, bj = -1, bv = B;
        for (int i = t; i < R && bv > 0; ++i)
            for (int j = t; j < n; ++j) {
                int v = valuation(at(i, j), p, B);
                if (v < bv) {
                    bv = v, bi = i, bj = j;
                    if (!v) break;
                }
            }
        if (bi < 0) throw std::domain_error("abelian_invariants: quotient infinite or exponent exceeds p^B");
        if (bi != t)
            for (int j = 0; j < n; ++j) std::swap(at(bi, j), at(t, j));
        if (bj != t) {
            for (int i = 0; i < R; ++i) std::swap(at(i, bj), at(i, t));
            for (int i = 0; i < n; ++i) std::swap(T(i, bj), T(i, t));
        }
        int64_t pv = 1;
        for (int k = 0; k < bv; ++k) pv *= p;
        int64_t u = inv_mod64(at(t, t) / pv, q);
        for (int j = t; j < n; ++j) at(t, j) = mulq(at(t, j), u);
        for (int i = 0; i < R; ++i) {
            if (i == t || at(i, t) == 0) continue;
            int64_t f = at(i, t) / pv;
            for (int j = t; j < n; ++j) at(i, j) = ((at(i, j) - mulq(f, at(t, j))) % q + q) % q;
        }
        // clear the rest of row t by column operations
        for (int j = t + 1; j < n; ++j) {
            if (!at(t, j)) continue;
            int64_t f = at(t, j) / pv;
            for (int i = 0; i < n; ++i) T(i, j) = ((T(i, j) - mulq(f, T(i, t))) % q + q) % q;
            at(t, j) = 0;
        }
        diag.push_back(bv);
    }
}

AbelianType AbelianQuotient::type() const {
    AbelianType out{p, {}};
    for (int v : diag)
        if (v > 0) out.e.push_back(v);
    std::sort(out.e.rbegin(), out.e.rend());
    return out;
}

std::vector<int64_t> AbelianQuotient::coords(const std::vector<int64_t>& x) const {
    std::vector<int64_t> y(n, 0);
    for (int j = 0; j < n; ++j) {
        __int128 s = 0;
        for (int i = 0; i < n; ++i) s += (__int128)(((x[i] % q) + q) % q) * transform[size_t(i) * n + j];
        int64_t m = 1;
        for (int k = 0; k < diag[j]; ++k) m *= p;
        y[j] = int64_t(s % m);
    }
    return y;
}

bool AbelianQuotient::is_zero(const std::vector<int64_t>& x) const {
    for (int64_t c : coords(x))
        if (c) return false;
    return true;
}

std::vector<int> AbelianQuotient::socle_coords(const std::vector<int64_t>& x) const {
    auto y = coords(x);
    std::vector<int> z;
    for (int j = 0; j < n; ++j) {
        if (!diag[j]) continue;
        int64_t m = 1;
        for (int k = 1; k < diag[j]; ++k) m *= p;
        if (y[j] % m) throw std::domain_error("socle_coords: element of order greater than p");
        z.push_back(int(y[j] / m));
    }
    return z;
}

AbelianType abelian_invariants(const IntMatrix& rel, int p, int n, int B) {
    return AbelianQuotient(rel, p, n, B).type();
}

}  // namespace pg
