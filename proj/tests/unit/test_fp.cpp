#include <random>
#include <set>

#include "doctest.h"
#include "pgroup/fp.hpp"

using namespace pg;

TEST_CASE("rref examples") {
    auto r = rref(FpMatrix::identity(5, 2));
    CHECK(r.m == FpMatrix::identity(5, 2));
    CHECK(r.pivots == std::vector<int>{0, 1});

    r = rref(FpMatrix::from_rows(5, {{2, 4}, {1, 2}}));
    CHECK(r.m == FpMatrix::from_rows(5, {{1, 2}, {0, 0}}));
    CHECK(r.pivots == std::vector<int>{0});

    FpMatrix z(5, 3, 3);
    r = rref(z);
    CHECK(r.m == z);
    CHECK(r.pivots.empty());

    FpMatrix e(5, 0, 0);
    CHECK(rref(e).m == e);
}

TEST_CASE("nullspace examples") {
    CHECK(nullspace(FpMatrix::identity(5, 2)).dim() == 0);
    CHECK(nullspace(FpMatrix(5, 1, 3)).dim() == 3);
    auto ns = nullspace(FpMatrix::from_rows(5, {{1, 2}}));
    REQUIRE(ns.dim() == 1);
    // every solution of x + 2y = 0 by exhaustion
    int sols = 0;
    for (int x = 0; x < 5; ++x)
        for (int y = 0; y < 5; ++y)
            if ((x + 2 * y) % 5 == 0) {
                ++sols;
                CHECK(ns.contains(std::vector<int>{x, y}));
            }
    CHECK(sols == 5);
    CHECK(ns.contains(std::vector<int>{3, 1}));
}

TEST_CASE("rref idempotent and rank-nullity on random matrices") {
    std::mt19937 rng(7);
    for (int p : {2, 3, 5, 7}) {
        for (int it = 0; it < 200; ++it) {
            int r = rng() % 6, c = rng() % 6;
            FpMatrix m(p, r, c);
            for (auto& x : m.a) x = rng() % p;
            auto a = rref(m);
            CHECK(rref(a.m).m == a.m);
            CHECK(rank(m) + nullspace(m).dim() == c);
            auto ns = nullspace(m);
            for (int i = 0; i < ns.dim(); ++i)
                for (int row = 0; row < r; ++row) {
                    int s = 0;
                    for (int j = 0; j < c; ++j) s += m.at(row, j) * ns.basis.at(i, j);
                    CHECK(s % p == 0);
                }
        }
    }
}

TEST_CASE("enumerate_subspaces counts") {
    CHECK(enumerate_subspaces(2, 1, 5).size() == 6);
    CHECK(enumerate_subspaces(2, 0, 5).size() == 1);
    CHECK(enumerate_subspaces(3, 1, 5).size() == 31);
    CHECK((125 - 1) / (5 - 1) == 31);
}

TEST_CASE("enumerate_subspaces against brute force") {
    // brute force: span every tuple of vectors and collect distinct spaces
    for (int p : {2, 3, 5}) {
        for (int n = 1; n <= 4; ++n) {
            if (p == 5 && n > 3) continue;
            int total = 1;
            for (int i = 0; i < n; ++i) total *= p;
            std::vector<std::vector<int>> vecs;
            for (int x = 0; x < total; ++x) {
                std::vector<int> v(n);
                int y = x;
                for (int i = 0; i < n; ++i) v[i] = y % p, y /= p;
                vecs.push_back(v);
            }
            for (int s = 0; s <= n; ++s) {
                int d = n - s;
                std::set<std::string> seen;
                std::vector<int> idx(d, 0);
                std::function<void(int)> rec = [&](int at) {
                    if (at == d) {
                        std::vector<std::vector<int>> rows;
                        for (int i : idx) rows.push_back(vecs[i]);
                        auto sp = Subspace::span(d ? FpMatrix::from_rows(p, rows) : FpMatrix(p, 0, n));
                        if (sp.dim() == d) seen.insert(sp.key());
                        return;
                    }
                    for (int i = at ? idx[at - 1] + 1 : 0; i < total; ++i) {
                        idx[at] = i;
                        rec(at + 1);
                    }
                };
                rec(0);
                auto en = enumerate_subspaces(n, s, p);
                CHECK(en.size() == seen.size());
                CHECK(en.size() == gaussian_binomial(n, d, p));
                std::set<std::string> got;
                for (auto& sp : en) got.insert(sp.key());
                CHECK(got == seen);
                CHECK(std::is_sorted(en.begin(), en.end()));
            }
        }
    }
}

TEST_CASE("subspace sum and intersection") {
    auto a = Subspace::span(FpMatrix::from_rows(5, {{1, 0, 0}, {0, 1, 0}}));
    auto b = Subspace::span(FpMatrix::from_rows(5, {{0, 1, 0}, {0, 0, 1}}));
    CHECK(a.sum(b).dim() == 3);
    auto c = a.intersect(b);
    CHECK(c.dim() == 1);
    CHECK(c.contains(std::vector<int>{0, 3, 0}));
}

namespace {
// type of (Z/p^B)^n / <rows> by counting elements killed by p^j
AbelianType brute_type(const std::vector<std::vector<int>>& rows, int p, int n, int B) {
    int q = 1;
    for (int i = 0; i < B; ++i) q *= p;
    int total = 1;
    for (int i = 0; i < n; ++i) total *= q;
    auto enc = [&](const std::vector<int>& v) {
        int x = 0;
        for (int i = n - 1; i >= 0; --i) x = x * q + ((v[i] % q) + q) % q;
        return x;
    };
    auto dec = [&](int x) {
        std::vector<int> v(n);
        for (int i = 0; i < n; ++i) v[i] = x % q, x /= q;
        return v;
    };
    std::vector<char> in(total, 0);
    std::vector<int> elems{0};
    in[0] = 1;
    for (size_t at = 0; at < elems.size(); ++at) {
        auto v = dec(elems[at]);
        for (const auto& r : rows) {
            std::vector<int> w(n);
            for (int i = 0; i < n; ++i) w[i] = v[i] + r[i];
            int x = enc(w);
            if (!in[x]) in[x] = 1, elems.push_back(x);
        }
    }
    int H = int(elems.size());
    std::vector<int> omega;  // log_p |Omega_j|
    for (int j = 0; j <= B; ++j) {
        int pj = 1;
        for (int i = 0; i < j; ++i) pj *= p;
        int cnt = 0;
        for (int x = 0; x < total; ++x) {
            auto v = dec(x);
            for (auto& e : v) e *= pj;
            if (in[enc(v)]) ++cnt;
        }
        int ratio = cnt / H, lg = 0;
        while (ratio > 1) ratio /= p, ++lg;
        omega.push_back(lg);
    }
    // number of cyclic factors of exponent >= j is omega_j - omega_{j-1}
    AbelianType t{p, {}};
    for (int j = B; j >= 1; --j) {
        int ge = omega[j] - omega[j - 1];
        int ge_next = j < B ? omega[j + 1] - omega[j] : 0;
        for (int c = 0; c < ge - ge_next; ++c) t.e.push_back(j);
    }
    return t;
}
}  // namespace

TEST_CASE("abelian_invariants examples") {
    IntMatrix none(0, 2);
    IntMatrix rel(0, 2);
    rel.add_row({5, 0});
    rel.add_row({0, 5});
    CHECK(abelian_invariants(rel, 5, 2).str() == "[5,5]");
    IntMatrix one(0, 1);
    one.add_row({25});
    CHECK(abelian_invariants(one, 5, 1).str() == "[25]");
    CHECK_THROWS(abelian_invariants(none, 5, 2));
}

TEST_CASE("abelian_invariants against order-counting oracle") {
    std::mt19937 rng(11);
    for (int it = 0; it < 150; ++it) {
        int p = it % 2 ? 3 : 5;
        int n = 1 + rng() % 3, B = 2;
        if (p == 5 && n == 3) B = 1;
        int q = p == 5 ? (B == 2 ? 25 : 5) : 9;
        std::vector<std::vector<int>> rows;
        IntMatrix rel(0, n);
        for (int i = 0; i < n; ++i) {
            std::vector<int> r(n, 0);
            r[i] = q;
            rows.push_back(r);
        }
        int extra = rng() % 3;
        for (int e = 0; e < extra; ++e) {
            std::vector<int> r(n);
            for (auto& x : r) x = int(rng() % q) - q / 2;
            rows.push_back(r);
        }
        for (auto& r : rows) rel.add_row(std::vector<int64_t>(r.begin(), r.end()));
        CHECK(abelian_invariants(rel, p, n) == brute_type(rows, p, n, B));
    }
}

TEST_CASE("abelian type order and parsing") {
    auto a = parse_abelian_type("[25,5,5,5]", 5);
    CHECK(a.e == std::vector<int>{2, 1, 1, 1});
    CHECK(a.str() == "[25,5,5,5]");
    CHECK(parse_abelian_type("[5]", 5).log_order() == 1);
    CHECK(parse_abelian_type("1", 5).e.empty());
}
