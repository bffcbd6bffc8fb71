#ifndef HDX_SHEAF_HPP
#define HDX_SHEAF_HPP

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "hdx/geometry.hpp"
#include "hdx/gf2e.hpp"
#include "hdx/report.hpp"

namespace hdx {

// The t local parity check matrices h_i (m_i x n, full row rank) together
// with derived duals h_i^perp ((n - m_i) x n, h_i^perp h_i^T = 0).
struct LocalCodes {
    Field F;
    std::vector<Mat> h;
    std::vector<Mat> hperp;
    std::vector<std::size_t> m;
    std::size_t n = 0;

    explicit LocalCodes(Field f) : F(std::move(f)) {}
    int t() const { return static_cast<int>(h.size()); }
};

LocalCodes make_codes(const Field& F, std::vector<Mat> h, bool validate = true);
// swaps the role of h and h^perp (coefficient dimensions become n - m_i)
LocalCodes dual_codes(const LocalCodes& c);

// Coefficient dimension of a face whose type has mask `mask`:
// prod over directions j outside the type of m_j.
std::size_t coeff_dim_mask(const LocalCodes& c, std::uint32_t mask);

// The chain/cochain complex over X with the local coefficient system:
// level-k space has one block per k-face, of dimension prod_{j not in
// type} m_j, coordinates ordered lexicographically over the free
// directions. Boundary and coboundary are assembled independently and
// cached; all queries are pure.
class SheafComplex {
  public:
    SheafComplex(Complex X, LocalCodes codes);

    const Complex& X() const { return X_; }
    const LocalCodes& codes() const { return codes_; }
    const Field& field() const { return codes_.F; }
    int t() const { return X_.t(); }

    std::size_t dim(int k) const;
    std::size_t coeff_dim(int k, std::uint64_t face_idx) const;
    std::size_t offset(int k, std::uint64_t face_idx) const;
    // index arithmetic for the coordinate within a face block
    std::size_t coord_rank(std::uint32_t type_mask, const std::vector<int>& digits) const;
    std::vector<int> coord_digits(std::uint32_t type_mask, std::size_t rank) const;

    const Mat& delta(int i) const;   // C^i -> C^{i+1}, 0 <= i <= t-1
    const Mat& partial(int i) const; // C_i -> C_{i-1}, 1 <= i <= t

    std::vector<std::size_t> chain_dims_formula() const;
    std::size_t block_weight(int k, const Vec& x) const;
    std::vector<std::uint64_t> support_faces(int k, const Vec& x) const;

    // exact verification: chain conditions, adjointness, dimension formulas,
    // restriction path independence, weight bounds, binary expansion
    Report verify_chain(std::uint64_t seed, int sample_pairs = 1000) const;

  private:
    Complex X_;
    LocalCodes codes_;
    std::vector<std::size_t> dims_;
    mutable std::mutex cache_mu_;
    mutable std::vector<std::optional<Mat>> delta_cache_, partial_cache_;

    Mat assemble_delta(int i) const;
    Mat assemble_partial(int i) const;
};

// single-step and composed (co)restriction maps between comparable faces
Vec co_restrict(const SheafComplex& S, Vec z, const Face& from, const Face& to);
Vec restrict_to(const SheafComplex& S, Vec z, const Face& from, const Face& to);

felem inner(const Field& F, const Vec& a, const Vec& b);

// The sub-complex above a face: faces of X_{>=f} at local level l are the
// global faces of level dim(f)+l, enumerated in the product order (types
// ascending over the free directions of f, then generator tuples). These
// helpers realize the identification with the product complex on the free
// directions.
std::vector<int> free_directions(const Complex& X, const Face& f);
// local face = (T subset of free dirs as index list, generator tuple)
Face link_face_to_global(const Complex& X, const Face& f, const std::vector<int>& T, const std::vector<int>& gens);
std::size_t link_space_dim(const SheafComplex& S, const Face& f, int local_level);
// coboundary / boundary of C(X_{>=f}) in the local enumeration
Mat link_delta(const SheafComplex& S, const Face& f, int local_level);
Mat link_partial(const SheafComplex& S, const Face& f, int local_level);
// scatter/gather between the local enumeration and global chain coordinates
Vec link_gather(const SheafComplex& S, const Face& f, int local_level, const Vec& global_chain);

} // namespace hdx

#endif
