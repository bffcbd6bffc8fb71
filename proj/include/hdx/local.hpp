#ifndef HDX_LOCAL_HPP
#define HDX_LOCAL_HPP

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hdx/report.hpp"
#include "hdx/sheaf.hpp"

namespace hdx {

// The product complex on a direction subset S: level-k faces are pairs
// (T, a_T) with T subset of S, |T| = k, a_T in prod_{i in T} A_i; the
// coefficient space of a type-T face is F_q^{prod_{i in S-T} m_i}. This is
// the local view of the sheaf complex from any face of complementary type.
class LocalComplex {
  public:
    LocalComplex(LocalCodes codes, std::vector<int> S);

    const LocalCodes& codes() const { return codes_; }
    const Field& field() const { return codes_.F; }
    const std::vector<int>& S() const { return S_; }
    int ell() const { return static_cast<int>(S_.size()); }
    std::size_t n() const { return codes_.n; }

    std::size_t dim(int k) const;
    std::size_t face_count(int k) const;
    std::size_t coeff_dim(int k, std::size_t face) const;
    std::size_t face_offset(int k, std::size_t face) const;
    std::size_t block_weight(int k, const Vec& x) const;

    const Mat& delta(int k) const;   // C^k -> C^{k+1}, 0 <= k < ell
    const Mat& partial(int k) const; // C_k -> C_{k-1}, 1 <= k <= ell

    // type (as index list into S_) and generator tuple of a face
    std::pair<std::vector<int>, std::vector<int>> face_decode(int k, std::size_t face) const;

    Report self_check() const;

  private:
    LocalCodes codes_;
    std::vector<int> S_;
    std::vector<std::vector<std::vector<int>>> types_; // per level: subsets of S_ (actual directions)
    std::vector<Mat> delta_, partial_;
    std::vector<std::size_t> dims_;
    void assemble();
};

Report exactness_check(const LocalComplex& L);

// basis of ker(partial) at the top level; equals the tensor product of the
// per-direction kernels (checked by span equality in tests)
std::vector<Vec> tensor_kernel_basis(const LocalComplex& L);

// exact minimality of a level-k cochain by coset minimization over
// x + im(delta_{k-1}); nullopt when the coset space exceeds the budget
std::optional<bool> is_minimal(const LocalComplex& L, int k, const Vec& x, std::uint64_t budget = (1ull << 24));

constexpr double kInfRobust = std::numeric_limits<double>::infinity();

struct RobustnessEstimate {
    int k = 0;
    double lower = 0.0, upper = kInfRobust;
    std::string method; // exhaustive | weight-capped | vacuous
    std::optional<Vec> witness;
    std::size_t witness_weight = 0, witness_boundary_weight = 0;
    bool exact() const { return method == "exhaustive" || method == "vacuous"; }
    double value() const { return upper; }
};

// kappa at level k: min over minimal x != 0 of |delta(x)| / (n |x|),
// exhaustive when q^dim C^k fits the budget
RobustnessEstimate robustness(const LocalComplex& L, int k, std::uint64_t budget = (1ull << 24));

// robustness of L_S at its top level |S|-1 (the product-expansion figure)
RobustnessEstimate product_expansion(const LocalCodes& codes, const std::vector<int>& S,
                                     std::uint64_t budget = (1ull << 24));

struct TwoWayCell {
    std::vector<int> S;
    int k = 0;
    bool dual = false;
    RobustnessEstimate est;
};

struct TwoWayReport {
    std::vector<TwoWayCell> cells;
    double kappa = kInfRobust; // min over non-vacuous cells
    bool all_exact = true;
    json to_json() const;
};

TwoWayReport two_way_robustness(const LocalCodes& codes, std::uint64_t budget = (1ull << 24), int jobs = 1);

struct SearchResult {
    std::vector<Mat> best_h;
    double kappa = -1.0;
    bool exhaustive = false;
    std::uint64_t tuples_scored = 0;
    std::uint64_t seed = 0;
    std::vector<std::pair<double, std::uint64_t>> census; // kappa value -> count
};

// samples (or exhausts, when the space fits in `trials`) full-row-rank
// tuples over GF(2^e) and returns the two-way-robustness argmax
SearchResult search_robust_tuple(int t, int n, const std::vector<int>& m, int e, std::uint64_t trials,
                                 std::uint64_t budget, std::uint64_t seed, int jobs = 1);

} // namespace hdx

#endif
