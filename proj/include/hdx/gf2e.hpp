#ifndef HDX_GF2E_HPP
#define HDX_GF2E_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "hdx/errors.hpp"

namespace hdx {

using felem = std::uint16_t; // element of GF(2^e), e <= 16

// GF(2^e) with log/antilog multiplication tables and a verified self-dual
// basis (trace-orthonormal), so that binary expansion of a matrix commutes
// with transposition.
class Field {
  public:
    explicit Field(int e);

    int e() const { return e_; }
    std::uint32_t q() const { return q_; }
    std::uint32_t modulus() const { return mod_; }

    felem add(felem a, felem b) const { return a ^ b; }
    felem mul(felem a, felem b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }
    felem inv(felem a) const {
        if (a == 0) throw Error("inverse of zero");
        return exp_[q_ - 1 - log_[a]];
    }
    felem pow(felem a, std::uint64_t k) const;
    int trace(felem a) const { return tr_[a]; }

    const std::vector<felem>& selfdual_basis() const { return sdb_; }
    // coordinates of v in the self-dual basis (bit k = Tr(v * b_k))
    std::uint32_t coords(felem v) const;
    felem from_coords(std::uint32_t bits) const;

  private:
    int e_;
    std::uint32_t q_, mod_;
    std::vector<felem> exp_, log_;
    std::vector<std::uint8_t> tr_;
    std::vector<felem> sdb_;
};

class Vec {
  public:
    Vec() = default;
    explicit Vec(std::size_t n) : v_(n, 0) {}
    Vec(std::initializer_list<felem> il) : v_(il) {}

    std::size_t size() const { return v_.size(); }
    felem operator[](std::size_t i) const { return v_[i]; }
    felem& operator[](std::size_t i) { return v_[i]; }

    bool is_zero() const;
    std::size_t hamming_weight() const;
    void add_inplace(const Vec& o); // char 2: entrywise xor of field elements
    void add_scaled(const Field& F, const Vec& o, felem c);
    bool operator==(const Vec& o) const { return v_ == o.v_; }

    const std::vector<felem>& data() const { return v_; }
    std::vector<felem>& data() { return v_; }

  private:
    std::vector<felem> v_;
};

// Dense matrix over GF(2^e). Desk-scale sizes only; products skip zero
// entries so sparse operator assemblies stay cheap.
class Mat {
  public:
    Mat() : rows_(0), cols_(0) {}
    Mat(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c, 0) {}

    static Mat identity(std::size_t n);
    static Mat zero(std::size_t r, std::size_t c) { return Mat(r, c); }
    static Mat random(const Field& F, std::size_t r, std::size_t c, std::mt19937_64& rng);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    felem at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, felem v) { a_[r * cols_ + c] = v; }
    void add_at(std::size_t r, std::size_t c, felem v) { a_[r * cols_ + c] ^= v; }

    Mat transpose() const;
    Mat mul(const Field& F, const Mat& B) const;
    Vec apply(const Field& F, const Vec& x) const;      // M x
    Vec apply_transpose(const Field& F, const Vec& x) const; // M^T x
    bool is_zero() const;
    bool operator==(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }
    std::size_t nnz() const;

    const felem* row_ptr(std::size_t r) const { return a_.data() + r * cols_; }
    felem* row_ptr(std::size_t r) { return a_.data() + r * cols_; }

  private:
    std::size_t rows_, cols_;
    std::vector<felem> a_;
};

std::size_t rank(const Field& F, Mat M);
// Basis of the right kernel {x : Mx = 0}; deterministic (free variables in
// ascending column order, each set to 1 with zeros elsewhere).
std::vector<Vec> kernel_basis(const Field& F, const Mat& M);
// Some particular solution of Mx = b (free variables zero), or nullopt.
std::optional<Vec> solve_linear(const Field& F, const Mat& M, const Vec& b);
// Right inverse R with M R = I for a full-row-rank M.
Mat right_inverse(const Field& F, const Mat& M);

// Row echelon basis of the row space (for span-membership tests).
class RowSpan {
  public:
    RowSpan(const Field& F, std::size_t width) : F_(&F), width_(width) {}
    // returns true if v was independent of the span (and got added)
    bool add(Vec v);
    // like add, but hands back the normalized reduced row that was inserted
    std::optional<Vec> add_reduced(Vec v);
    bool contains(Vec v) const;
    // reduce v modulo the span (in place), returns the reduced vector
    Vec reduce(Vec v) const;
    std::size_t dim() const { return rows_.size(); }
    std::size_t width() const { return width_; }
    const std::vector<Vec>& rows() const { return rows_; }

  private:
    const Field* F_;
    std::size_t width_;
    std::vector<Vec> rows_;           // echelon rows, pivot normalized to 1
    std::vector<std::size_t> pivots_; // pivot column per row, increasing
};

// Binary expansion: each entry a of M becomes the e x e matrix of
// multiplication-by-a written in the self-dual basis. Functorial and
// transpose-compatible.
Mat f2_expand(const Field& F, const Mat& M);
// Expansion in an arbitrary basis (test hook; only the self-dual basis
// preserves transposes).
Mat f2_expand_with_basis(const Field& F, const Mat& M, const std::vector<felem>& basis);
Vec f2_expand_vec(const Field& F, const Vec& v);

// Iterate the span of `basis` with one vector add per step (mixed-radix
// odometer). Visits q^basis.size() elements starting from zero.
class SpanIter {
  public:
    SpanIter(const Field& F, std::vector<Vec> basis, std::size_t width);
    const Vec& current() const { return cur_; }
    std::uint64_t count() const { return total_; }
    bool next(); // advance; false after the last element
    void reset();

  private:
    const Field* F_;
    std::vector<Vec> basis_;
    std::vector<std::uint32_t> digits_;
    Vec cur_;
    std::uint64_t total_, visited_;
};

} // namespace hdx

#endif
