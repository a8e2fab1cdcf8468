#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace pg {

bool is_prime(int p);
int inv_mod(int a, int p);

// dense matrix over F_p, row-major
struct FpMatrix {
    int p = 2;
    int rows = 0, cols = 0;
    std::vector<uint16_t> a;

    FpMatrix() = default;
    FpMatrix(int p, int rows, int cols);
    static FpMatrix identity(int p, int n);
    static FpMatrix from_rows(int p, const std::vector<std::vector<int>>& r);

    uint16_t& at(int r, int c) { return a[size_t(r) * cols + c]; }
    uint16_t at(int r, int c) const { return a[size_t(r) * cols + c]; }
    std::vector<int> row(int r) const;
    bool is_zero() const;
    bool operator==(const FpMatrix& o) const {
        return p == o.p && rows == o.rows && cols == o.cols && a == o.a;
    }
};

FpMatrix mul(const FpMatrix& x, const FpMatrix& y);

struct Rref {
    FpMatrix m;
    std::vector<int> pivots;
};

Rref rref(const FpMatrix& m);
int rank(const FpMatrix& m);
// inverse of a square invertible matrix; throws otherwise
FpMatrix inverse(const FpMatrix& m);

// subspace of F_p^n given by an rref basis (rows)
struct Subspace {
    int p = 2;
    int n = 0;
    FpMatrix basis;  // dim x n, reduced echelon, no zero rows
    std::vector<int> pivots;

    Subspace() = default;
    Subspace(int p, int n);  // zero subspace
    static Subspace span(const FpMatrix& rows);
    static Subspace full(int p, int n);

    int dim() const { return basis.rows; }
    bool contains(const std::vector<int>& v) const;
    bool contains(const Subspace& o) const;
    Subspace sum(const Subspace& o) const;
    Subspace intersect(const Subspace& o) const;
    // image under right multiplication by a matrix (rows * m)
    Subspace image(const FpMatrix& m) const;
    std::string key() const;
    bool operator==(const Subspace& o) const { return basis == o.basis; }
    bool operator<(const Subspace& o) const;
};

// {v : m * v = 0}, v a column vector
Subspace nullspace(const FpMatrix& m);
// {v : v * m = 0}, v a row vector
Subspace left_nullspace(const FpMatrix& m);

// every subspace of codimension s in F_p^n, in lexicographic order of
// the flattened echelon matrices
std::vector<Subspace> enumerate_subspaces(int n, int s, int p);
void for_each_subspace(int n, int s, int p,
                       const std::function<void(const Subspace&)>& f);
uint64_t gaussian_binomial(int n, int k, int p);

// integer relation matrix, one relation per row
struct IntMatrix {
    int rows = 0, cols = 0;
    std::vector<int64_t> a;
    IntMatrix() = default;
    IntMatrix(int r, int c) : rows(r), cols(c), a(size_t(r) * c, 0) {}
    int64_t& at(int r, int c) { return a[size_t(r) * cols + c]; }
    int64_t at(int r, int c) const { return a[size_t(r) * cols + c]; }
    void add_row(const std::vector<int64_t>& r);
};

// abelian p-group type: descending exponent list, group = prod C_{p^e_i}
struct AbelianType {
    int p = 2;
    std::vector<int> e;

    int log_order() const;
    int rank() const { return int(e.size()); }
    std::string str() const;  // e.g. [25,5,5,5]
    bool operator==(const AbelianType& o) const { return p == o.p && e == o.e; }
    bool operator!=(const AbelianType& o) const { return !(*this == o); }
    bool operator<(const AbelianType& o) const;
};

AbelianType parse_abelian_type(const std::string& s, int p);


// Z^n / rowspace(rel) diagonalized modulo p^B; coords() maps an integer vector to
// its coordinates in the cyclic decomposition (entry j taken mod p^diag[j])
constexpr int kDefaultPrecision = 7;

struct AbelianQuotient {
    int p = 2, n = 0, B = 0;
    int64_t q = 1;
    std::vector<int> diag;           // valuations of the diagonal, one per column
    std::vector<int64_t> transform;  // n x n column transform mod p^B

    AbelianQuotient(const IntMatrix& rel, int p, int n, int B = 7);
    AbelianType type() const;
    std::vector<int64_t> coords(const std::vector<int64_t>& x) const;
    bool is_zero(const std::vector<int64_t>& x) const;
    // for x of order dividing p: F_p coordinates in the socle, one per nontrivial factor
    std::vector<int> socle_coords(const std::vector<int64_t>& x) const;
};

// abelian invariants of Z^n / rowspace(rel), assumed a finite p-group of
// exponent below p^B; arithmetic is done modulo p^B
AbelianType abelian_invariants(const IntMatrix& rel, int p, int n,
                               int B = kDefaultPrecision);

}  // namespace pg
