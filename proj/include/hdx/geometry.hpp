#ifndef HDX_GEOMETRY_HPP
#define HDX_GEOMETRY_HPP

#include <array>
#include <cstdint>
#include <mutex>
#include <optional>
#include <vector>

#include "hdx/errors.hpp"
#include "hdx/report.hpp"

namespace hdx {

inline constexpr int kMaxT = 8;

// Inverse-closed set of commuting-by-contract permutations for one direction.
struct PermSet {
    // perms[a][g] = image of g under generator a; all of equal group size
    std::vector<std::vector<std::uint32_t>> perms;
    std::vector<std::vector<std::uint32_t>> inv;   // filled by Complex::build
    std::vector<int> inverse_index;                // a -> a' with perm[a'] = perm[a]^{-1}
};

// A face [g; labels]: labels[j] < 2 is a bit, labels[j] = 2 + a marks
// generator a of direction j. Dimension = #generator labels.
struct Face {
    std::uint32_t g = 0;
    std::array<std::int16_t, kMaxT> lab{};

    bool operator==(const Face& o) const { return g == o.g && lab == o.lab; }
    bool is_gen(int j) const { return lab[j] >= 2; }
    int gen(int j) const { return lab[j] - 2; }
    int bit(int j) const { return lab[j]; }
};

struct Cover {
    Face face;
    int dir;
};

// The graded incidence poset X(G; {A_i}): typed cubical faces over a set G
// acted on by t pairwise-commuting inverse-closed permutation sets.
class Complex {
  public:
    // Verifies sizes, bijectivity, inverse closure and all cross-direction
    // commutation relations; throws on violation.
    static Complex build(std::uint32_t N, std::vector<PermSet> sets);

    int t() const { return t_; }
    std::uint32_t group_size() const { return N_; }
    int degree() const { return n_; } // n = |A_i|
    bool has_identity_generator() const { return has_identity_; }

    std::uint64_t level_size(int k) const;
    std::uint64_t type_block_size(int k) const; // |X(S)| = N n^k 2^(t-k), equal for all types of a level

    const std::vector<std::vector<int>>& types_at(int k) const; // canonical type order

    // canonical face <-> (level, index) correspondence
    std::uint64_t index_of(const Face& f) const;
    Face face_at(int k, std::uint64_t idx) const;
    int level_of(const Face& f) const;
    std::uint32_t type_mask(const Face& f) const;

    std::uint32_t apply(int dir, int a, std::uint32_t g) const { return sets_[dir].perms[a][g]; }
    std::uint32_t apply_inv(int dir, int a, std::uint32_t g) const { return sets_[dir].inv[a][g]; }

    std::vector<Cover> covers_down(const Face& f) const;
    std::vector<Cover> covers_up(const Face& f) const;

    // X_{>=v}(k) and X_{<=v}(l), in canonical enumeration order
    std::vector<Face> link_up(const Face& v, int k) const;
    std::vector<Face> link_down(const Face& v, int l) const;

    bool leq(const Face& lo, const Face& hi) const; // lo <= hi in the partial order

    // vertex set of a face per the cube parameterization, as level-0 indices
    std::vector<std::uint64_t> face_vertices(const Face& f) const;

    // exhaustive verification of every counting identity (level sizes,
    // up/down degrees, link sizes) against enumeration
    Report count_check() const;

  private:
    Complex() = default;
    int t_ = 0, n_ = 0;
    std::uint32_t N_ = 0;
    bool has_identity_ = false;
    std::vector<PermSet> sets_;
    std::vector<std::vector<std::vector<int>>> types_; // per level, canonical order
    std::vector<std::uint64_t> level_sizes_;
};

std::uint64_t binom(int n, int k);

} // namespace hdx

#endif
