#ifndef HDX_WALKS_HPP
#define HDX_WALKS_HPP

#include <boost/rational.hpp>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "hdx/builders.hpp"
#include "hdx/geometry.hpp"
#include "hdx/report.hpp"

namespace hdx {

using Rat = boost::rational<long long>;

// sparse rational matrix; rows keep (col, value) pairs sorted by column
class RatMat {
  public:
    RatMat() : rows_(0), cols_(0) {}
    RatMat(std::size_t r, std::size_t c) : rows_(r), cols_(c), row_(r) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const std::vector<std::pair<std::size_t, Rat>>& row(std::size_t r) const { return row_[r]; }

    void add(std::size_t r, std::size_t c, const Rat& v);
    Rat at(std::size_t r, std::size_t c) const;
    RatMat mul(const RatMat& B) const;
    RatMat scaled(const Rat& s) const;
    bool is_symmetric() const;
    bool rows_sum_to(const Rat& target) const;
    bool is_integral() const;
    std::size_t nnz() const;

    // <1_A, M 1_A> for an indicator over columns/rows
    Rat quad_form(const std::vector<char>& in_set) const;
    std::vector<double> apply(const std::vector<double>& x) const;

  private:
    std::size_t rows_, cols_;
    std::vector<std::vector<std::pair<std::size_t, Rat>>> row_;
};

// averaging operators between adjacent levels:
//   down_op(X, l):  functions on X(l+1) -> functions on X(l)   (average over covers_up)
//   up_op(X, l):    functions on X(l-1) -> functions on X(l)   (average over covers_down)
RatMat down_op(const Complex& X, int l);
RatMat up_op(const Complex& X, int l);

// the parallel-step operator at level l: pick a free direction and a
// generator uniformly, move g and flip the direction bit
RatMat step_op(const Complex& X, int l);

struct NeighborhoodSets {
    std::vector<std::uint64_t> link; // X_{>=v}(k)
    std::vector<std::uint64_t> nb;   // meet v but do not contain it
    std::vector<std::uint64_t> op;   // disjoint from v
    bool partition_ok = false;       // the three classes exhaust (d o u) X_{>=v}(k)
};

NeighborhoodSets neighborhoods(const Complex& X, const Face& v, int k);

// exact maximization of the neighbor-covering multiplicity over all face
// triples; always <= 2^t
std::uint64_t a_coeff(const Complex& X, int k, int l);

struct WalkOperator {
    int k = 0, l = 0;
    std::optional<RatMat> matrix;                 // explicit mode
    std::uint64_t normalization = 0;              // adjacency form = normalization * matrix
    const Complex* X = nullptr;
    bool opposite = false;                        // step into Op_v(k) instead of the parallel step

    std::uint64_t sample_step(std::uint64_t fidx, std::mt19937_64& rng,
                              std::map<std::uint64_t, std::vector<std::uint64_t>>* op_cache = nullptr) const;
};

WalkOperator walk_W(const Complex& X, int k, int l, std::uint64_t explicit_limit = 20000);
WalkOperator walk_Op(const Complex& X, int k, int l, std::uint64_t explicit_limit = 20000);

// integer matrix counting pairs (v <= f) with f' in Op_v(k)
RatMat op_adjacency(const Complex& X, int k, int l);

struct QuadFormResult {
    double lhs = 0.0, bound = 0.0;
    bool pass = false;
    bool monte_carlo = false;
    double ci_low = 0.0, ci_high = 0.0; // 99% Wilson interval on the hit rate (MC mode)
    std::uint64_t samples = 0;
};

// checks <1_A, W 1_A> <= lambda |A| + C(t,l) 2^(t-l-1) n^l |A|^2 / (r |X(k)|),
// exactly in matrix mode, by sampling otherwise
QuadFormResult quad_form_check(const Complex& X, const WalkOperator& W, const std::vector<char>& A, double lambda,
                               double r, std::uint64_t seed = 1);

// per-direction double covers: spectral data that feeds the walk bound
struct WalkSpectralData {
    double lambda = 0.0;       // max over directions/components of the cover
    double r = 1.0;            // min cover component size / (2N)
    std::uint64_t min_component = 0;
};
WalkSpectralData walk_spectral_data(const Complex& X);

// component-wise mixing bound <x, Mx> <= lambda ||x||^2 + ||x||_1^2 / |V|
// for the step operator, on random vectors
Report step_component_check(const Complex& X, int l, std::uint64_t seed, int samples = 100);

// multiset covering property of the proper-neighbor sets: for every k-face,
// the neighbor multiset over its (l+1)-subfaces is dominated by a_{k,l}
// copies of the link multiset over its l-subfaces
bool nb_multiset_check(const Complex& X, int k, int l, std::uint64_t a_kl);

} // namespace hdx

#endif
