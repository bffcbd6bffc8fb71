#ifndef HDX_BUILDERS_HPP
#define HDX_BUILDERS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "hdx/geometry.hpp"

namespace hdx {

// ---- instantiations of (G, {A_i}) ----

// Cyclic group Z_N with additive shifts per direction (shifts must be
// inverse-closed mod N, checked by Complex::build).
std::vector<PermSet> cyclic_perms(std::uint32_t N, const std::vector<std::vector<std::uint32_t>>& shifts);

// (Z/2Z)^m with XOR-translation generators; every generator is an involution
// so inverse closure is automatic. Throws DuplicateGenerator on repeats
// within one direction.
std::pair<std::uint32_t, std::vector<PermSet>> group_z2e(int m, const std::vector<std::vector<std::uint32_t>>& gens);

std::vector<std::vector<std::uint32_t>> random_z2e_generators(int m, int t, int n, std::uint64_t seed);

// finite abelian group given by invariant factors
struct AbelianGroup {
    std::vector<std::uint32_t> factors;
    std::uint32_t size() const {
        std::uint32_t s = 1;
        for (auto f : factors) s *= f;
        return s;
    }
    std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t neg(std::uint32_t a) const;
    std::uint32_t from_tuple(const std::vector<std::int64_t>& v) const;
};

struct BaseEdge {
    std::uint32_t u, v;
    int factor; // 1-factor index in [0, n)
    std::vector<std::int64_t> label;                     // H element on orientation u -> v
    std::optional<std::vector<std::int64_t>> label_rev;  // defaults to -label
};

// n-regular base graph with a 1-factorization (each vertex has exactly one
// incident edge per factor) and H-labels respecting orientation inverses.
struct BaseGraphSpec {
    int n = 0;
    std::uint32_t vertices = 0;
    std::vector<BaseEdge> edges;
};

// The t-fold lifted product: permutations of G = H x V0^t where direction j
// acts on (h, v_j) through the factor-i edge at v_j and its H-label. The
// complex's own per-direction bits supply the double-cover coordinate.
std::pair<std::uint32_t, std::vector<PermSet>> abelian_lift_product(const AbelianGroup& H, const BaseGraphSpec& base,
                                                                    int t);

// ---- spectral expansion ----

struct ComponentStat {
    std::uint64_t size = 0;
    double lambda = 0.0; // |second largest eigenvalue| of the normalized adjacency
};

struct ExpansionReport {
    std::vector<ComponentStat> components;
    double lambda_max = 0.0;
    double r = 1.0; // min component size / N
    std::uint64_t min_component = 0;
    bool stochastic_ok = false; // symmetric + doubly stochastic Markov operator
};

// Decomposes Cay(G, A) into connected components and measures per-component
// spectral expansion: dense symmetric eigensolve up to `dense_limit`
// vertices, power iteration with all-ones deflation beyond (tolerance 1e-9,
// at most 1e5 iterations).
ExpansionReport estimate_expansion(std::uint32_t N, const std::vector<std::vector<std::uint32_t>>& perms,
                                   std::size_t dense_limit = 2000);

// Vertex set G x {0,1}; generator a sends (g, b) to (a(g), 1-b).
std::vector<std::vector<std::uint32_t>> double_cover_perms(std::uint32_t N,
                                                           const std::vector<std::vector<std::uint32_t>>& perms);

} // namespace hdx

#endif
