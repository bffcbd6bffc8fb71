#include "hdx/css.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace hdx {

json CodeParams::to_json() const {
    auto dist = [](const DistBound& d) {
        if (d.trivial) return json{{"trivial", true}};
        if (d.exact) return json{{"exact", true}, {"value", d.value}};
        return json{{"exact", false}, {"lower", d.lower}, {"upper", d.upper}};
    };
    return json{{"n", n}, {"k", k}, {"k_kernel_route", k_kernel}, {"d_x", dist(dx)}, {"d_z", dist(dz)}};
}

json SoundnessResult::to_json() const {
    return json{{"rho", rho},
                {"certified", certified},
                {"witness_syndrome", witness_syndrome},
                {"witness_dist", witness_dist}};
}

json LdpcProfile::to_json() const {
    auto hist = [](const std::map<std::size_t, std::size_t>& h) {
        json o = json::object();
        for (auto& [w, c] : h) o[std::to_string(w)] = c;
        return o;
    };
    return json{{"row_hist_x", hist(row_hist_x)}, {"row_hist_z", hist(row_hist_z)},
                {"col_hist_x", hist(col_hist_x)}, {"col_hist_z", hist(col_hist_z)},
                {"max_row", max_row},             {"max_col", max_col},
                {"weight_bound_ok", weight_bound_ok}};
}

CssCode build_css_with_basis(const SheafComplex& S, int i, const std::vector<felem>& basis) {
    if (i < 1 || i > S.t() - 1) throw LevelOutOfRange("css level must be interior");
    const Field& F = S.field();
    CssCode C;
    C.level = i;
    C.field_degree = F.e();
    C.Hx = f2_expand_with_basis(F, S.partial(i), basis);
    C.Hz = f2_expand_with_basis(F, S.delta(i), basis);
    C.qubits = static_cast<std::size_t>(F.e()) * S.dim(i);
    C.D_below = S.dim(i - 1);
    C.D_at = S.dim(i);
    C.D_above = S.dim(i + 1);
    C.max_block = 0;
    for (std::uint64_t fi = 0; fi < S.X().level_size(i); ++fi)
        C.max_block = std::max(C.max_block, S.coeff_dim(i, fi));
    Field F2(1);
    if (!C.Hx.mul(F2, C.Hz.transpose()).is_zero())
        throw Error("CSS orthogonality failed after binary expansion");
    return C;
}

CssCode build_css(const SheafComplex& S, int i) {
    return build_css_with_basis(S, i, S.field().selfdual_basis());
}

namespace {

// minimum Hamming weight over ker(ker_mat) minus rowspace(im_rows)
DistBound min_logical_weight(const Mat& ker_mat, const Mat& im_rows, std::uint64_t budget, std::uint64_t seed,
                             int probes) {
    Field F(1);
    DistBound out;
    auto kb = kernel_basis(F, ker_mat);
    RowSpan imspan(F, ker_mat.cols());
    for (std::size_t r = 0; r < im_rows.rows(); ++r) {
        Vec v(im_rows.cols());
        for (std::size_t c = 0; c < im_rows.cols(); ++c) v[c] = im_rows.at(r, c);
        imspan.add(std::move(v));
    }
    std::vector<Vec> comp, imb(imspan.rows().begin(), imspan.rows().end());
    {
        RowSpan full(F, ker_mat.cols());
        for (auto& v : imspan.rows()) full.add(v);
        for (auto& v : kb) {
            auto red = full.add_reduced(v);
            if (red) comp.push_back(std::move(*red));
        }
    }
    if (comp.empty()) {
        out.trivial = true;
        out.exact = true;
        return out;
    }
    std::uint64_t total = 1;
    bool fits = true;
    for (std::size_t i = 0; i < comp.size() + imb.size(); ++i) {
        total *= 2;
        if (total > budget) {
            fits = false;
            break;
        }
    }
    if (fits) {
        out.exact = true;
        std::size_t best = SIZE_MAX;
        SpanIter cit(F, comp, ker_mat.cols());
        bool first = true;
        do {
            if (first) {
                first = false;
                continue;
            }
            if (cit.current().is_zero()) continue;
            SpanIter sit(F, imb, ker_mat.cols());
            do {
                Vec x = cit.current();
                x.add_inplace(sit.current());
                best = std::min(best, x.hamming_weight());
            } while (sit.next());
        } while (cit.next());
        out.value = best;
        return out;
    }
    // random information-set style probing gives an upper bound only
    out.exact = false;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> bit(0, 1);
    std::size_t best = SIZE_MAX;
    for (int it = 0; it < probes; ++it) {
        Vec x(ker_mat.cols());
        bool nz = false;
        for (auto& b : comp) {
            if (bit(rng)) {
                x.add_inplace(b);
                nz = true;
            }
        }
        if (!nz) continue;
        // greedy reduction by image rows
        std::size_t w = x.hamming_weight();
        bool improved = true;
        while (improved) {
            improved = false;
            for (auto& b : imb) {
                Vec y = x;
                y.add_inplace(b);
                std::size_t wy = y.hamming_weight();
                if (wy < w) {
                    x = std::move(y);
                    w = wy;
                    improved = true;
                }
            }
        }
        best = std::min(best, w);
    }
    out.upper = best;
    out.lower = 1;
    return out;
}

} // namespace

CodeParams code_params(const CssCode& C, std::uint64_t budget, std::uint64_t probe_seed, int probes) {
    Field F(1);
    CodeParams P;
    if (C.Hx.cols() != C.Hz.cols()) throw DimensionMismatch("CSS column counts disagree");
    P.n = C.Hx.cols();
    std::size_t rx = rank(F, C.Hx), rz = rank(F, C.Hz);
    P.k = P.n - rx - rz;
    P.k_kernel = kernel_basis(F, C.Hz).size() - rx; // dim ker Hz - dim im Hx^T
    P.dx = min_logical_weight(C.Hz, C.Hx, budget, probe_seed, probes);
    P.dz = min_logical_weight(C.Hx, C.Hz, budget, probe_seed + 1, probes);
    return P;
}

SoundnessResult soundness_scan(const Mat& H, std::uint64_t budget, std::uint64_t seed) {
    Field F(1);
    SoundnessResult out;
    const std::size_t n = H.cols(), m = H.rows();
    if (m == 0 || n == 0) throw DimensionMismatch("empty parity check matrix");
    std::uint64_t total = 1;
    bool fits = true;
    for (std::size_t i = 0; i < n; ++i) {
        total *= 2;
        if (total > budget) {
            fits = false;
            break;
        }
    }
    if (fits) {
        out.certified = true;
        struct Bucket {
            std::size_t minw = SIZE_MAX;
            std::size_t sw = 0;
        };
        std::unordered_map<std::string, Bucket> buckets;
        std::vector<Vec> unit;
        for (std::size_t c = 0; c < n; ++c) {
            Vec e(n);
            e[c] = 1;
            unit.push_back(std::move(e));
        }
        SpanIter it(F, unit, n);
        do {
            Vec s = H.apply(F, it.current());
            std::string key(reinterpret_cast<const char*>(s.data().data()), s.size() * sizeof(felem));
            auto& b = buckets[key];
            std::size_t w = it.current().hamming_weight();
            if (w < b.minw) {
                b.minw = w;
                b.sw = s.hamming_weight();
            }
        } while (it.next());
        double best = 1e300;
        for (auto& [key, b] : buckets) {
            (void)key;
            if (b.sw == 0) continue;
            double ratio = (static_cast<double>(b.sw) / static_cast<double>(m)) /
                           (static_cast<double>(b.minw) / static_cast<double>(n));
            if (ratio < best) {
                best = ratio;
                out.witness_syndrome = b.sw;
                out.witness_dist = b.minw;
            }
        }
        out.rho = (best == 1e300) ? 0.0 : best;
        return out;
    }
    // non-certified estimate: planted errors of modest weight
    out.certified = false;
    std::mt19937_64 rng(seed);
    auto kb = kernel_basis(F, H);
    std::uniform_int_distribution<std::size_t> pc(0, n - 1);
    double best = 1e300;
    for (int it = 0; it < 5000; ++it) {
        Vec x(n);
        std::size_t w = 1 + (it % std::max<std::size_t>(1, n / 8));
        for (std::size_t i = 0; i < w; ++i) x[pc(rng)] ^= 1;
        Vec s = H.apply(F, x);
        if (s.is_zero()) continue;
        double ratio = (static_cast<double>(s.hamming_weight()) / static_cast<double>(m)) /
                       (static_cast<double>(x.hamming_weight()) / static_cast<double>(n));
        best = std::min(best, ratio);
    }
    out.rho = (best == 1e300) ? 0.0 : best;
    return out;
}

double soundness_lower_bound(const CssCode& C, double eps_cyc, double eps_cocyc) {
    double di = static_cast<double>(C.D_at);
    double mi = static_cast<double>(C.max_block);
    double a = di / static_cast<double>(C.D_below) * eps_cyc / mi;
    double b = di / static_cast<double>(C.D_above) * eps_cocyc / mi;
    return std::min(a, b) / static_cast<double>(C.field_degree == 0 ? 1 : C.field_degree);
}

LdpcProfile ldpc_profile(const SheafComplex& S, const CssCode& C) {
    LdpcProfile P;
    auto scan = [&](const Mat& H, std::map<std::size_t, std::size_t>& rows,
                    std::map<std::size_t, std::size_t>& cols) {
        std::vector<std::size_t> colw(H.cols(), 0);
        for (std::size_t r = 0; r < H.rows(); ++r) {
            std::size_t w = 0;
            for (std::size_t c = 0; c < H.cols(); ++c)
                if (H.at(r, c)) {
                    ++w;
                    ++colw[c];
                }
            rows[w]++;
            P.max_row = std::max(P.max_row, w);
        }
        for (auto w : colw) {
            cols[w]++;
            P.max_col = std::max(P.max_col, w);
        }
    };
    scan(C.Hx, P.row_hist_x, P.col_hist_x);
    scan(C.Hz, P.row_hist_z, P.col_hist_z);
    std::size_t mmax = *std::max_element(S.codes().m.begin(), S.codes().m.end());
    std::size_t bound = static_cast<std::size_t>(S.field().e()) * 2 * static_cast<std::size_t>(S.t()) *
                        static_cast<std::size_t>(S.X().degree()) * mmax;
    P.weight_bound_ok = P.max_row <= bound;
    return P;
}

// ---- file formats ----

void export_alist(const Mat& H, std::ostream& os) {
    const std::size_t n = H.cols(), m = H.rows();
    std::vector<std::vector<std::size_t>> col_idx(n), row_idx(m);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (H.at(r, c)) {
                col_idx[c].push_back(r + 1);
                row_idx[r].push_back(c + 1);
            }
    std::size_t maxc = 0, maxr = 0;
    for (auto& v : col_idx) maxc = std::max(maxc, v.size());
    for (auto& v : row_idx) maxr = std::max(maxr, v.size());
    os << n << " " << m << "\n";
    os << maxc << " " << maxr << "\n";
    for (std::size_t c = 0; c < n; ++c) os << col_idx[c].size() << (c + 1 < n ? " " : "\n");
    if (n == 0) os << "\n";
    for (std::size_t r = 0; r < m; ++r) os << row_idx[r].size() << (r + 1 < m ? " " : "\n");
    if (m == 0) os << "\n";
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t i = 0; i < maxc; ++i)
            os << (i < col_idx[c].size() ? col_idx[c][i] : 0) << (i + 1 < maxc ? " " : "");
        os << "\n";
    }
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t i = 0; i < maxr; ++i)
            os << (i < row_idx[r].size() ? row_idx[r][i] : 0) << (i + 1 < maxr ? " " : "");
        os << "\n";
    }
}

Mat import_alist(std::istream& is) {
    std::size_t n, m, maxc, maxr;
    if (!(is >> n >> m >> maxc >> maxr)) throw IoFailure("alist header parse failure");
    std::vector<std::size_t> cdeg(n), rdeg(m);
    for (auto& d : cdeg) is >> d;
    for (auto& d : rdeg) is >> d;
    Mat H(m, n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t i = 0; i < maxc; ++i) {
            std::size_t r;
            if (!(is >> r)) throw IoFailure("alist truncated");
            if (r) H.set(r - 1, c, 1);
        }
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t i = 0; i < maxr; ++i) {
            std::size_t c;
            if (!(is >> c)) throw IoFailure("alist truncated");
            if (c && !H.at(r, c - 1)) throw IoFailure("alist row/column lists disagree");
        }
    return H;
}

void export_mtx(const Mat& H, std::ostream& os) {
    os << "%%MatrixMarket matrix coordinate pattern general\n";
    os << H.rows() << " " << H.cols() << " " << H.nnz() << "\n";
    for (std::size_t r = 0; r < H.rows(); ++r)
        for (std::size_t c = 0; c < H.cols(); ++c)
            if (H.at(r, c)) os << (r + 1) << " " << (c + 1) << "\n";
}

Mat import_mtx(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("%%MatrixMarket", 0) != 0) throw IoFailure("missing MatrixMarket header");
    while (std::getline(is, line)) {
        if (!line.empty() && line[0] != '%') break;
    }
    std::istringstream hdr(line);
    std::size_t m, n, nnz;
    if (!(hdr >> m >> n >> nnz)) throw IoFailure("mtx size line parse failure");
    Mat H(m, n);
    for (std::size_t i = 0; i < nnz; ++i) {
        std::size_t r, c;
        if (!(is >> r >> c)) throw IoFailure("mtx truncated");
        H.set(r - 1, c - 1, 1);
    }
    return H;
}

void export_json_matrix(const Mat& H, std::ostream& os) {
    json entries = json::array();
    for (std::size_t r = 0; r < H.rows(); ++r)
        for (std::size_t c = 0; c < H.cols(); ++c)
            if (H.at(r, c)) entries.push_back(json::array({r, c}));
    json o{{"rows", H.rows()}, {"cols", H.cols()}, {"entries", entries}};
    os << o.dump() << "\n";
}

Mat import_json_matrix(std::istream& is) {
    json o = json::parse(is);
    Mat H(o.at("rows").get<std::size_t>(), o.at("cols").get<std::size_t>());
    for (auto& e : o.at("entries")) H.set(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(), 1);
    return H;
}

void write_matrix_file(const Mat& H, const std::string& path, const std::string& format) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoFailure("cannot open " + path);
    if (format == "alist")
        export_alist(H, os);
    else if (format == "mtx")
        export_mtx(H, os);
    else if (format == "json")
        export_json_matrix(H, os);
    else
        throw IoFailure("unknown matrix format " + format);
    if (!os) throw IoFailure("write failure on " + path);
}

Mat read_matrix_file(const std::string& path, const std::string& format) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoFailure("cannot open " + path);
    if (format == "alist") return import_alist(is);
    if (format == "mtx") return import_mtx(is);
    if (format == "json") return import_json_matrix(is);
    throw IoFailure("unknown matrix format " + format);
}

} // namespace hdx
