#include "hdx/gf2e.hpp"

#include <algorithm>
#include <array>
#include <cassert>

namespace hdx {

namespace {

// carry-less polynomial multiply over GF(2)
std::uint64_t polmul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    while (b) {
        if (b & 1) r ^= a;
        a <<= 1;
        b >>= 1;
    }
    return r;
}

int poldeg(std::uint64_t p) {
    int d = -1;
    while (p) { ++d; p >>= 1; }
    return d;
}

std::uint64_t polmod(std::uint64_t a, std::uint64_t m) {
    int dm = poldeg(m);
    int da = poldeg(a);
    while (da >= dm) {
        a ^= m << (da - dm);
        da = poldeg(a);
    }
    return a;
}

bool divides(std::uint64_t d, std::uint64_t p) { return polmod(p, d) == 0; }

bool is_irreducible(std::uint32_t p, int e) {
    // trial division by every polynomial of degree 1..e/2
    for (int d = 1; 2 * d <= e; ++d) {
        for (std::uint32_t q = (1u << d); q < (2u << d); ++q) {
            if (divides(q, p)) return false;
        }
    }
    return true;
}

std::vector<std::uint32_t> prime_factors(std::uint32_t n) {
    std::vector<std::uint32_t> ps;
    for (std::uint32_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

} // namespace

Field::Field(int e) : e_(e) {
    if (e < 1 || e > 16) throw DegreeOutOfRange("extension degree must be in [1,16], got " + std::to_string(e));
    q_ = 1u << e;

    // smallest irreducible monic polynomial of degree e
    mod_ = 0;
    for (std::uint32_t p = (1u << e) | 1u; p < (2u << e); p += 2) {
        if (is_irreducible(p, e)) { mod_ = p; break; }
    }
    if (mod_ == 0) throw Error("no irreducible modulus found"); // cannot happen

    auto mulraw = [&](std::uint32_t a, std::uint32_t b) {
        return static_cast<std::uint32_t>(polmod(polmul(a, b), mod_));
    };
    auto powraw = [&](std::uint32_t a, std::uint32_t k) {
        std::uint32_t r = 1;
        while (k) {
            if (k & 1) r = mulraw(r, a);
            a = mulraw(a, a);
            k >>= 1;
        }
        return r;
    };

    // find a multiplicative generator; start from x
    std::uint32_t gen = 0;
    auto factors = prime_factors(q_ - 1);
    for (std::uint32_t c = 2; c < q_; ++c) {
        bool ok = true;
        for (auto p : factors) {
            if (powraw(c, (q_ - 1) / p) == 1) { ok = false; break; }
        }
        if (ok) { gen = c; break; }
    }
    if (e == 1) gen = 1;

    exp_.assign(2 * (q_ - 1), 0);
    log_.assign(q_, 0);
    std::uint32_t cur = 1;
    for (std::uint32_t i = 0; i < q_ - 1; ++i) {
        exp_[i] = static_cast<felem>(cur);
        exp_[i + (q_ - 1)] = static_cast<felem>(cur);
        log_[cur] = static_cast<felem>(i);
        cur = mulraw(cur, gen);
    }
    if (cur != 1) throw Error("generator order mismatch");

    tr_.assign(q_, 0);
    for (std::uint32_t a = 0; a < q_; ++a) {
        std::uint32_t s = 0, x = a;
        for (int i = 0; i < e_; ++i) {
            s ^= x;
            x = mulraw(x, x);
        }
        if (s != 0 && s != 1) throw Error("trace not in base field");
        tr_[a] = static_cast<std::uint8_t>(s);
    }

    // Self-dual basis: find P with P G P^T = I for the trace Gram matrix G
    // of the polynomial basis. The quadratic form v -> Tr(v^2) is GF(2)-linear
    // in v, so an orthonormal basis exists and the greedy split below, with a
    // hyperbolic-pair fixup, always terminates.
    std::vector<std::uint32_t> polyb(e_);
    for (int i = 0; i < e_; ++i) polyb[i] = powraw(2, i);
    auto tr_of = [&](std::uint32_t v) { return static_cast<int>(tr_[v]); };
    auto B = [&](std::uint32_t u, std::uint32_t v) { return tr_of(mulraw(u, v)); };

    std::vector<std::uint32_t> pool = polyb;
    std::vector<std::uint32_t> ortho;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> hyper;
    auto project_out = [&](std::uint32_t v, std::vector<std::uint32_t>& vecs) {
        std::vector<std::uint32_t> out;
        for (auto u : vecs) {
            if (B(u, v)) u ^= v;
            if (u) out.push_back(u);
        }
        // drop linear dependencies (gaussian over GF(2) on field-element bitmasks)
        std::vector<std::uint32_t> basis;
        for (auto u : out) {
            for (auto b : basis) u = std::min(u, u ^ b);
            if (u) basis.push_back(u);
        }
        vecs = basis;
    };
    while (!pool.empty()) {
        std::uint32_t diag = 0;
        for (auto v : pool) if (B(v, v)) { diag = v; break; }
        if (diag) {
            ortho.push_back(diag);
            auto rest = pool;
            rest.erase(std::find(rest.begin(), rest.end(), diag));
            project_out(diag, rest);
            pool = rest;
        } else {
            // alternating on the remaining span: peel a hyperbolic pair
            std::uint32_t a = 0, b = 0;
            for (std::size_t i = 0; i < pool.size() && !a; ++i)
                for (std::size_t j = i + 1; j < pool.size(); ++j)
                    if (B(pool[i], pool[j])) { a = pool[i]; b = pool[j]; break; }
            if (!a) throw Error("degenerate trace form");
            std::vector<std::uint32_t> rest;
            for (auto u : pool) if (u != a && u != b) rest.push_back(u);
            std::vector<std::uint32_t> adj;
            for (auto u : rest) {
                if (B(u, b)) u ^= a;
                if (B(u, a)) u ^= b;
                if (u) adj.push_back(u);
            }
            std::vector<std::uint32_t> basis;
            for (auto u : adj) {
                for (auto w : basis) u = std::min(u, u ^ w);
                if (u) basis.push_back(u);
            }
            pool = basis;
            hyper.emplace_back(a, b);
        }
    }
    // Convert each hyperbolic pair using one orthonormal vector:
    // {v,a,b} -> {v+a, v+b, v+a+b}, all of unit length and pairwise orthogonal.
    while (!hyper.empty()) {
        if (ortho.empty()) throw Error("trace form fixup failed");
        auto [a, b] = hyper.back();
        hyper.pop_back();
        std::uint32_t v = ortho.back();
        ortho.pop_back();
        ortho.push_back(v ^ a);
        ortho.push_back(v ^ b);
        ortho.push_back(v ^ a ^ b);
    }
    if (static_cast<int>(ortho.size()) != e_) throw Error("self-dual basis size mismatch");
    for (int i = 0; i < e_; ++i)
        for (int j = 0; j < e_; ++j)
            if (B(ortho[i], ortho[j]) != (i == j ? 1 : 0)) throw Error("self-dual basis verification failed");
    sdb_.assign(ortho.begin(), ortho.end());
    std::sort(sdb_.begin(), sdb_.end());
}

felem Field::pow(felem a, std::uint64_t k) const {
    if (a == 0) return k == 0 ? 1 : 0;
    std::uint64_t l = (static_cast<std::uint64_t>(log_[a]) * (k % (q_ - 1))) % (q_ - 1);
    return exp_[l];
}

std::uint32_t Field::coords(felem v) const {
    std::uint32_t bits = 0;
    for (int k = 0; k < e_; ++k)
        if (trace(mul(v, sdb_[k]))) bits |= (1u << k);
    return bits;
}

felem Field::from_coords(std::uint32_t bits) const {
    felem v = 0;
    for (int k = 0; k < e_; ++k)
        if (bits & (1u << k)) v ^= sdb_[k];
    return v;
}

bool Vec::is_zero() const {
    for (auto x : v_) if (x) return false;
    return true;
}

std::size_t Vec::hamming_weight() const {
    std::size_t w = 0;
    for (auto x : v_) if (x) ++w;
    return w;
}

void Vec::add_inplace(const Vec& o) {
    if (o.size() != size()) throw DimensionMismatch("vector add size mismatch");
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] ^= o.v_[i];
}

void Vec::add_scaled(const Field& F, const Vec& o, felem c) {
    if (o.size() != size()) throw DimensionMismatch("vector add size mismatch");
    if (c == 0) return;
    for (std::size_t i = 0; i < v_.size(); ++i)
        if (o.v_[i]) v_[i] ^= F.mul(o.v_[i], c);
}

Mat Mat::identity(std::size_t n) {
    Mat I(n, n);
    for (std::size_t i = 0; i < n; ++i) I.set(i, i, 1);
    return I;
}

Mat Mat::random(const Field& F, std::size_t r, std::size_t c, std::mt19937_64& rng) {
    Mat M(r, c);
    std::uniform_int_distribution<std::uint32_t> d(0, F.q() - 1);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            M.set(i, j, static_cast<felem>(d(rng)));
    return M;
}

Mat Mat::transpose() const {
    Mat T(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            T.set(j, i, at(i, j));
    return T;
}

Mat Mat::mul(const Field& F, const Mat& B) const {
    if (cols_ != B.rows_) throw DimensionMismatch("matrix product shape mismatch");
    Mat C(rows_, B.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        const felem* ai = row_ptr(i);
        felem* ci = C.row_ptr(i);
        for (std::size_t k = 0; k < cols_; ++k) {
            felem a = ai[k];
            if (!a) continue;
            const felem* bk = B.row_ptr(k);
            for (std::size_t j = 0; j < B.cols_; ++j)
                if (bk[j]) ci[j] ^= F.mul(a, bk[j]);
        }
    }
    return C;
}

Vec Mat::apply(const Field& F, const Vec& x) const {
    if (x.size() != cols_) throw DimensionMismatch("matrix apply shape mismatch");
    Vec y(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        const felem* ai = row_ptr(i);
        felem s = 0;
        for (std::size_t j = 0; j < cols_; ++j)
            if (ai[j] && x[j]) s ^= F.mul(ai[j], x[j]);
        y[i] = s;
    }
    return y;
}

Vec Mat::apply_transpose(const Field& F, const Vec& x) const {
    if (x.size() != rows_) throw DimensionMismatch("matrix apply shape mismatch");
    Vec y(cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        if (!x[i]) continue;
        const felem* ai = row_ptr(i);
        for (std::size_t j = 0; j < cols_; ++j)
            if (ai[j]) y[j] ^= F.mul(ai[j], x[i]);
    }
    return y;
}

bool Mat::is_zero() const {
    for (auto x : a_) if (x) return false;
    return true;
}

std::size_t Mat::nnz() const {
    std::size_t n = 0;
    for (auto x : a_) if (x) ++n;
    return n;
}

namespace {

// In-place row echelon reduction; pivoting by first nonzero entry in
// ascending column order (deterministic). Returns pivot columns.
std::vector<std::size_t> echelonize(const Field& F, Mat& M) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < M.cols() && r < M.rows(); ++c) {
        std::size_t p = r;
        while (p < M.rows() && M.at(p, c) == 0) ++p;
        if (p == M.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < M.cols(); ++j) {
                felem t = M.at(r, j);
                M.set(r, j, M.at(p, j));
                M.set(p, j, t);
            }
        felem iv = F.inv(M.at(r, c));
        for (std::size_t j = c; j < M.cols(); ++j)
            if (M.at(r, j)) M.set(r, j, F.mul(M.at(r, j), iv));
        for (std::size_t i = 0; i < M.rows(); ++i) {
            if (i == r) continue;
            felem f = M.at(i, c);
            if (!f) continue;
            for (std::size_t j = c; j < M.cols(); ++j)
                if (M.at(r, j)) M.add_at(i, j, F.mul(f, M.at(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

} // namespace

std::size_t rank(const Field& F, Mat M) { return echelonize(F, M).size(); }

std::vector<Vec> kernel_basis(const Field& F, const Mat& M) {
    Mat E = M;
    auto pivots = echelonize(F, E);
    std::vector<bool> is_pivot(M.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<Vec> basis;
    for (std::size_t fc = 0; fc < M.cols(); ++fc) {
        if (is_pivot[fc]) continue;
        Vec v(M.cols());
        v[fc] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = E.at(r, fc); // char 2: -x = x
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<Vec> solve_linear(const Field& F, const Mat& M, const Vec& b) {
    if (b.size() != M.rows()) throw DimensionMismatch("solve rhs size mismatch");
    Mat A(M.rows(), M.cols() + 1);
    for (std::size_t i = 0; i < M.rows(); ++i) {
        for (std::size_t j = 0; j < M.cols(); ++j) A.set(i, j, M.at(i, j));
        A.set(i, M.cols(), b[i]);
    }
    auto pivots = echelonize(F, A);
    if (!pivots.empty() && pivots.back() == M.cols()) return std::nullopt;
    Vec x(M.cols());
    for (std::size_t r = 0; r < pivots.size(); ++r)
        x[pivots[r]] = A.at(r, M.cols());
    return x;
}

Mat right_inverse(const Field& F, const Mat& M) {
    Mat R(M.cols(), M.rows());
    for (std::size_t i = 0; i < M.rows(); ++i) {
        Vec e(M.rows());
        e[i] = 1;
        auto x = solve_linear(F, M, e);
        if (!x) throw Error("right_inverse: matrix does not have full row rank");
        for (std::size_t j = 0; j < M.cols(); ++j) R.set(j, i, (*x)[j]);
    }
    return R;
}

bool RowSpan::add(Vec v) { return add_reduced(std::move(v)).has_value(); }

std::optional<Vec> RowSpan::add_reduced(Vec v) {
    v = reduce(std::move(v));
    std::size_t p = 0;
    while (p < width_ && v[p] == 0) ++p;
    if (p == width_) return std::nullopt;
    felem iv = F_->inv(v[p]);
    for (std::size_t j = p; j < width_; ++j)
        if (v[j]) v[j] = F_->mul(v[j], iv);
    Vec out = v;
    auto it = std::lower_bound(pivots_.begin(), pivots_.end(), p);
    std::size_t pos = static_cast<std::size_t>(it - pivots_.begin());
    pivots_.insert(it, p);
    rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(v));
    return out;
}

Vec RowSpan::reduce(Vec v) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        felem c = v[pivots_[r]];
        if (c) v.add_scaled(*F_, rows_[r], c);
    }
    return v;
}

bool RowSpan::contains(Vec v) const { return reduce(std::move(v)).is_zero(); }

Mat f2_expand_with_basis(const Field& F, const Mat& M, const std::vector<felem>& basis) {
    const int e = F.e();
    if (static_cast<int>(basis.size()) != e) throw DimensionMismatch("expansion basis size mismatch");
    // dual basis d with Tr(d_i b_j) = delta_ij, so coordinates in `basis`
    // are v |-> Tr(d_i v); for a self-dual basis d = basis.
    Mat G(e, e);
    for (int i = 0; i < e; ++i)
        for (int j = 0; j < e; ++j)
            G.set(i, j, static_cast<felem>(F.trace(F.mul(basis[i], basis[j]))));
    Mat Ginv = right_inverse(F, G);
    std::vector<felem> dual(e, 0);
    for (int i = 0; i < e; ++i)
        for (int j = 0; j < e; ++j)
            if (Ginv.at(i, j)) dual[i] ^= F.mul(Ginv.at(i, j), basis[j]);

    Mat B(M.rows() * e, M.cols() * e);
    for (std::size_t r = 0; r < M.rows(); ++r)
        for (std::size_t c = 0; c < M.cols(); ++c) {
            felem a = M.at(r, c);
            if (!a) continue;
            for (int i = 0; i < e; ++i)
                for (int j = 0; j < e; ++j) {
                    // (i,j) entry of multiplication-by-a: coord_i(a * b_j)
                    if (F.trace(F.mul(dual[i], F.mul(a, basis[j]))))
                        B.set(r * e + i, c * e + j, 1);
                }
        }
    return B;
}

Mat f2_expand(const Field& F, const Mat& M) { return f2_expand_with_basis(F, M, F.selfdual_basis()); }

Vec f2_expand_vec(const Field& F, const Vec& v) {
    const int e = F.e();
    Vec out(v.size() * e);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i]) continue;
        std::uint32_t bits = F.coords(v[i]);
        for (int k = 0; k < e; ++k)
            if (bits & (1u << k)) out[i * e + k] = 1;
    }
    return out;
}

SpanIter::SpanIter(const Field& F, std::vector<Vec> basis, std::size_t width)
    : F_(&F), basis_(std::move(basis)), digits_(basis_.size(), 0), cur_(width), visited_(0) {
    total_ = 1;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        if (total_ > (std::uint64_t(1) << 62) / F.q()) throw BudgetExceeded("span too large to iterate");
        total_ *= F.q();
    }
}

void SpanIter::reset() {
    std::fill(digits_.begin(), digits_.end(), 0);
    cur_ = Vec(cur_.size());
    visited_ = 0;
}

bool SpanIter::next() {
    ++visited_;
    if (visited_ >= total_) return false;
    const std::uint32_t q = F_->q();
    for (std::size_t i = 0; i < digits_.size(); ++i) {
        std::uint32_t old = digits_[i];
        std::uint32_t nw = old + 1;
        if (nw == q) {
            digits_[i] = 0;
            // delta = old elem + 0
            cur_.add_scaled(*F_, basis_[i], static_cast<felem>(old));
        } else {
            digits_[i] = nw;
            cur_.add_scaled(*F_, basis_[i], static_cast<felem>(old ^ nw));
            return true;
        }
    }
    return false;
}

} // namespace hdx
