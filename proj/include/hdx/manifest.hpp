#ifndef HDX_MANIFEST_HPP
#define HDX_MANIFEST_HPP

#include <string>

#include "hdx/css.hpp"
#include "hdx/local.hpp"
#include "hdx/sheaf.hpp"
#include "hdx/walks.hpp"

namespace hdx {

// Manifest schema (version 1):
// {
//   "schema": 1, "t": 2, "field": {"e": 1},
//   "group": {"kind": "z2e" | "cyclic" | "abelian_lift_product", ...},
//   "codes": {"matrices": [[[...]], ...]} | {"search": {...}},
//   "budgets": {"coset_log2": 22, "flip_local_log2": 16},
//   "seed": 7
// }
struct Manifest {
    int schema = 1;
    int t = 1;
    int e = 1;
    json group;
    json codes;
    std::uint64_t seed = 1;
    std::uint64_t coset_budget = 1ull << 22;
    std::uint64_t flip_budget = 1ull << 16;
    json raw;
    std::string hash;
};

Manifest parse_manifest(const json& j);
Manifest load_manifest(const std::string& path);

std::string fnv1a_hex(const std::string& data);

// (N, permutation sets) from the group stanza
std::pair<std::uint32_t, std::vector<PermSet>> build_group(const Manifest& mf);
LocalCodes build_local_codes(const Manifest& mf);

struct Instance {
    Manifest mf;
    SheafComplex S;
};

Instance build_instance(const Manifest& mf);

// ---- bundle I/O ----
// A bundle directory holds manifest.json, instance.json, the assembled
// boundary/coboundary matrices in the .hxm container and the build report.

void write_matrix_hxm(const Mat& M, int e, const std::string& path);
Mat read_matrix_hxm(const std::string& path, int* e_out = nullptr);

void write_bundle(const Instance& inst, const std::string& dir, const Report& build_report);
Manifest read_bundle_manifest(const std::string& dir);

// ---- verification suites ----

Report suite_chain(const Instance& inst, const std::string& bundle_dir);
Report suite_local(const Instance& inst, int jobs);
Report suite_walks(const Instance& inst, int jobs);
Report suite_distance(const Instance& inst, int jobs);

} // namespace hdx

#endif
