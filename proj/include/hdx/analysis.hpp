#ifndef HDX_ANALYSIS_HPP
#define HDX_ANALYSIS_HPP

#include <map>
#include <optional>
#include <string>

#include "hdx/sheaf.hpp"

namespace hdx {

// ---- brute-force distances ----

struct DistanceValue {
    bool infinite = false; // trivial homology (or empty kernel)
    std::size_t value = 0;
    bool exact = true;
    std::size_t upper = SIZE_MAX; // when !exact: best weight found
    std::optional<Vec> witness;
    json to_json() const;
};

// minimum block weight of a (co)cycle that is not a (co)boundary, by
// enumeration of the kernel decomposed against the image
DistanceValue brute_mu(const SheafComplex& S, int k, bool cosystolic, std::uint64_t budget = (1ull << 22));

// minimum block weight of a nonzero locally co-minimal co-cycle; local
// co-minimality is decided exactly per vertex
DistanceValue d_coloc(const SheafComplex& S, int k, std::uint64_t budget = (1ull << 22));

struct ExpansionValue {
    bool defined = false; // false when every element lies in the kernel
    double value = 0.0;
    bool exact = true;
    std::size_t witness_boundary = 0, witness_dist = 0;
    std::optional<Vec> witness;
    json to_json() const;
};

// min over x outside the kernel of |map(x)| / dist(x, ker), full scan with
// syndrome bucketing
ExpansionValue expansion(const SheafComplex& S, int k, bool cocycle, std::uint64_t budget = (1ull << 22));

// same geometry, dual local codes
SheafComplex dual_complex(const SheafComplex& S);

// ---- local-view double complex ----

// A cochain at level `level` valued in the k-face view sheaf: each
// level-face f carries a partial assignment u -> V_u over u in X_{>=f}(k).
struct LocalView {
    int level = 0;
    int k = 0;
    std::vector<std::map<std::uint64_t, Vec>> vals;

    bool is_zero() const;
    std::size_t block_weight() const; // number of level-faces with a nonzero view
    void prune();                     // drop zero entries
    void add(const LocalView& o);
    bool operator==(const LocalView& o) const { return level == o.level && k == o.k && vals == o.vals; }
};

LocalView zero_view(const SheafComplex& S, int level, int k);
// restrict a global k-chain to every vertex's view
LocalView local_views(const SheafComplex& S, int k, const Vec& x);
// inconsistency coboundary: sums views of the faces below each (level+1)-face
LocalView view_delta(const SheafComplex& S, const LocalView& y);
// per-face boundary map within each view (coefficient level k -> k-1)
LocalView view_partial(const SheafComplex& S, const LocalView& y);
// preimage under view_delta at level >= 1, solved per k-face over the cube
// below it; throws NotACocycle when view_delta(y) != 0
LocalView view_delta_solve(const SheafComplex& S, const LocalView& y);
// glue consistent level-0 views into a global chain; throws
// InconsistentViews when two vertices of a face disagree
Vec stitch(const SheafComplex& S, const LocalView& z);

// ---- constructive cycle filling ----

struct FillResult {
    bool filled = false;
    Vec z; // partial(k+1) z = x when filled
    bool obstruction = false;
    Vec obstruction_witness; // dual-complex cocycle with no fill
    std::string path;        // "zero" | "agreement" | "decode"
    int stages = 0;
    std::size_t weight = 0;
    double weight_bound = 0.0; // logged, not enforced
};

FillResult fill_cycle(const SheafComplex& S, int k, const Vec& x, std::uint64_t budget = (1ull << 22));

// ---- small-set flip decoding ----

struct DecodeResult {
    bool success = false;
    Vec correction; // delta_k(correction) = syndrome on success
    Vec residual;
    std::size_t iterations = 0;
};

DecodeResult small_set_flip_decode(const SheafComplex& S, int k, const Vec& syndrome, std::size_t max_iters,
                                   std::uint64_t local_budget = (1ull << 16));

} // namespace hdx

#endif
