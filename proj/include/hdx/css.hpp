#ifndef HDX_CSS_HPP
#define HDX_CSS_HPP

#include <iosfwd>
#include <string>

#include "hdx/analysis.hpp"
#include "hdx/sheaf.hpp"

namespace hdx {

// Binary parity-check pair extracted at one chain level: Hx from the
// boundary, Hz from the coboundary, both expanded over GF(2) in the
// self-dual basis so that Hx Hz^T = 0 survives the expansion.
struct CssCode {
    Mat Hx, Hz;
    std::size_t qubits = 0; // e * D_i
    int level = 0;
    int field_degree = 1;
    std::size_t D_below = 0, D_at = 0, D_above = 0; // F_q chain dimensions
    std::size_t max_block = 0;                      // largest coefficient dimension at the level
};

CssCode build_css(const SheafComplex& S, int i);
// test hook: expansion in an arbitrary basis; throws Error when the CSS
// orthogonality check fails (any non-self-dual basis will)
CssCode build_css_with_basis(const SheafComplex& S, int i, const std::vector<felem>& basis);

struct DistBound {
    bool exact = false;
    std::size_t value = 0;     // exact minimum distance
    std::size_t upper = 0;     // lightest logical found (when !exact)
    std::size_t lower = 1;
    bool trivial = false;      // no logical operators at all
};

struct CodeParams {
    std::size_t n = 0;
    std::size_t k = 0;          // rank-identity route
    std::size_t k_kernel = 0;   // kernel-dimension route; must agree
    DistBound dx, dz;
    json to_json() const;
};

CodeParams code_params(const CssCode& C, std::uint64_t budget = (1ull << 22), std::uint64_t probe_seed = 1,
                       int probes = 2000);

struct SoundnessResult {
    bool certified = false;
    double rho = 0.0;
    std::size_t witness_syndrome = 0, witness_dist = 0;
    json to_json() const;
};

// soundness of the natural tester of ker H: the minimum over x outside the
// code of (|Hx|/m) / (d(x,C)/n); exact by full scan when 2^cols fits the
// budget, otherwise a flagged non-certified sampling estimate
SoundnessResult soundness_scan(const Mat& H, std::uint64_t budget = (1ull << 22), std::uint64_t seed = 1);

// qLTC soundness lower bound from measured expansion figures
double soundness_lower_bound(const CssCode& C, double eps_cyc, double eps_cocyc);

struct LdpcProfile {
    std::map<std::size_t, std::size_t> row_hist_x, row_hist_z, col_hist_x, col_hist_z;
    std::size_t max_row = 0, max_col = 0;
    bool weight_bound_ok = false; // max row weight <= e * 2t * n * max_j m_j
    json to_json() const;
};

LdpcProfile ldpc_profile(const SheafComplex& S, const CssCode& C);

// ---- matrix file formats (bit-exact round trips) ----

void export_alist(const Mat& H, std::ostream& os);
Mat import_alist(std::istream& is);
void export_mtx(const Mat& H, std::ostream& os);
Mat import_mtx(std::istream& is);
void export_json_matrix(const Mat& H, std::ostream& os);
Mat import_json_matrix(std::istream& is);

void write_matrix_file(const Mat& H, const std::string& path, const std::string& format);
Mat read_matrix_file(const std::string& path, const std::string& format);

} // namespace hdx

#endif
