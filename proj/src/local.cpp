#include "hdx/local.hpp"

#include <algorithm>
#include <map>

#include "hdx/parallel.hpp"

namespace hdx {

namespace {

std::vector<std::vector<int>> subsets_of(const std::vector<int>& S, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, std::size_t start) -> void {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (std::size_t i = start; i < S.size(); ++i) {
            cur.push_back(S[i]);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

std::uint64_t ipow64(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

} // namespace

LocalComplex::LocalComplex(LocalCodes codes, std::vector<int> S) : codes_(std::move(codes)), S_(std::move(S)) {
    if (S_.empty()) throw SizeMismatch("direction subset must be nonempty");
    std::sort(S_.begin(), S_.end());
    for (int j : S_)
        if (j < 0 || j >= codes_.t()) throw SizeMismatch("direction out of range");
    types_.resize(S_.size() + 1);
    dims_.resize(S_.size() + 1);
    for (int k = 0; k <= ell(); ++k) {
        types_[static_cast<std::size_t>(k)] = subsets_of(S_, k);
        std::size_t d = 0;
        for (auto& T : types_[static_cast<std::size_t>(k)]) {
            std::size_t cd = 1;
            for (int j : S_)
                if (std::find(T.begin(), T.end(), j) == T.end()) cd *= codes_.m[static_cast<std::size_t>(j)];
            d += ipow64(codes_.n, k) * cd;
        }
        dims_[static_cast<std::size_t>(k)] = d;
    }
    assemble();
}

std::size_t LocalComplex::dim(int k) const {
    if (k < 0 || k > ell()) throw LevelOutOfRange("local level " + std::to_string(k));
    return dims_[static_cast<std::size_t>(k)];
}

std::size_t LocalComplex::face_count(int k) const {
    return types_[static_cast<std::size_t>(k)].size() * ipow64(codes_.n, k);
}

std::size_t LocalComplex::coeff_dim(int k, std::size_t face) const {
    std::size_t block = ipow64(codes_.n, k);
    const auto& T = types_[static_cast<std::size_t>(k)][face / block];
    std::size_t cd = 1;
    for (int j : S_)
        if (std::find(T.begin(), T.end(), j) == T.end()) cd *= codes_.m[static_cast<std::size_t>(j)];
    return cd;
}

std::size_t LocalComplex::face_offset(int k, std::size_t face) const {
    std::size_t block = ipow64(codes_.n, k);
    std::size_t ti = face / block;
    std::size_t off = 0;
    for (std::size_t s = 0; s < ti; ++s) {
        const auto& T = types_[static_cast<std::size_t>(k)][s];
        std::size_t cd = 1;
        for (int j : S_)
            if (std::find(T.begin(), T.end(), j) == T.end()) cd *= codes_.m[static_cast<std::size_t>(j)];
        off += block * cd;
    }
    return off + (face % block) * coeff_dim(k, face);
}

std::pair<std::vector<int>, std::vector<int>> LocalComplex::face_decode(int k, std::size_t face) const {
    std::size_t block = ipow64(codes_.n, k);
    const auto& T = types_[static_cast<std::size_t>(k)][face / block];
    std::size_t a = face % block;
    std::vector<int> gens(T.size());
    for (int i = static_cast<int>(T.size()) - 1; i >= 0; --i) {
        gens[static_cast<std::size_t>(i)] = static_cast<int>(a % codes_.n);
        a /= codes_.n;
    }
    return {T, gens};
}

std::size_t LocalComplex::block_weight(int k, const Vec& x) const {
    if (x.size() != dim(k)) throw DimensionMismatch("block_weight size mismatch");
    std::size_t w = 0;
    for (std::size_t f = 0; f < face_count(k); ++f) {
        std::size_t off = face_offset(k, f), d = coeff_dim(k, f);
        for (std::size_t c = 0; c < d; ++c)
            if (x[off + c]) {
                ++w;
                break;
            }
    }
    return w;
}

void LocalComplex::assemble() {
    const auto& F = codes_.F;
    const int L = ell();
    delta_.clear();
    partial_.clear();
    // delta(k): for each level-k face (T, a) and each j in S-T, a_j in A_j:
    // entry h_j[c_j, a_j] from coord c to the target coord with c_j removed
    for (int k = 0; k < L; ++k) {
        Mat D(dim(k + 1), dim(k));
        for (std::size_t f = 0; f < face_count(k); ++f) {
            auto [T, gens] = face_decode(k, f);
            std::size_t off = face_offset(k, f), d = coeff_dim(k, f);
            // free directions of T within S, ascending
            std::vector<int> freeT;
            for (int j : S_)
                if (std::find(T.begin(), T.end(), j) == T.end()) freeT.push_back(j);
            for (int j : freeT) {
                const Mat& hj = codes_.h[static_cast<std::size_t>(j)];
                // target type T u {j}
                std::vector<int> T2 = T;
                T2.insert(std::upper_bound(T2.begin(), T2.end(), j), j);
                std::size_t t2i = 0;
                const auto& ts = types_[static_cast<std::size_t>(k + 1)];
                while (ts[t2i] != T2) ++t2i;
                std::size_t jpos_inT2 = static_cast<std::size_t>(
                    std::find(T2.begin(), T2.end(), j) - T2.begin());
                std::size_t jpos_free = static_cast<std::size_t>(
                    std::find(freeT.begin(), freeT.end(), j) - freeT.begin());
                for (std::size_t aj = 0; aj < codes_.n; ++aj) {
                    // face index of (T2, gens with aj inserted)
                    std::vector<int> g2 = gens;
                    g2.insert(g2.begin() + static_cast<std::ptrdiff_t>(jpos_inT2), static_cast<int>(aj));
                    std::size_t fidx = 0;
                    for (auto g : g2) fidx = fidx * codes_.n + static_cast<std::size_t>(g);
                    fidx += t2i * ipow64(codes_.n, k + 1);
                    std::size_t off2 = face_offset(k + 1, fidx);
                    for (std::size_t c = 0; c < d; ++c) {
                        // decode c over freeT
                        std::size_t rest = c;
                        std::vector<int> digits(freeT.size());
                        for (int i = static_cast<int>(freeT.size()) - 1; i >= 0; --i) {
                            auto mj = codes_.m[static_cast<std::size_t>(freeT[static_cast<std::size_t>(i)])];
                            digits[static_cast<std::size_t>(i)] = static_cast<int>(rest % mj);
                            rest /= mj;
                        }
                        felem v = hj.at(static_cast<std::size_t>(digits[jpos_free]), aj);
                        if (!v) continue;
                        std::size_t r2 = 0;
                        for (std::size_t i = 0; i < freeT.size(); ++i) {
                            if (i == jpos_free) continue;
                            r2 = r2 * codes_.m[static_cast<std::size_t>(freeT[i])] +
                                 static_cast<std::size_t>(digits[i]);
                        }
                        D.add_at(off2 + r2, off + c, v);
                    }
                }
            }
        }
        delta_.push_back(std::move(D));
    }
    // partial(k) = delta(k-1)^T entry-wise by the pairing; assembled
    // independently from the restriction maps
    for (int k = 1; k <= L; ++k) {
        Mat P(dim(k - 1), dim(k));
        for (std::size_t f = 0; f < face_count(k); ++f) {
            auto [T, gens] = face_decode(k, f);
            std::size_t off = face_offset(k, f), d = coeff_dim(k, f);
            std::vector<int> freeT;
            for (int j : S_)
                if (std::find(T.begin(), T.end(), j) == T.end()) freeT.push_back(j);
            for (std::size_t jp = 0; jp < T.size(); ++jp) {
                int j = T[jp];
                int aj = gens[jp];
                const Mat& hj = codes_.h[static_cast<std::size_t>(j)];
                std::vector<int> T2 = T;
                T2.erase(T2.begin() + static_cast<std::ptrdiff_t>(jp));
                std::size_t t2i = 0;
                const auto& ts = types_[static_cast<std::size_t>(k - 1)];
                while (ts[t2i] != T2) ++t2i;
                std::vector<int> g2 = gens;
                g2.erase(g2.begin() + static_cast<std::ptrdiff_t>(jp));
                std::size_t fidx = 0;
                for (auto g : g2) fidx = fidx * codes_.n + static_cast<std::size_t>(g);
                fidx += t2i * ipow64(codes_.n, k - 1);
                std::size_t off2 = face_offset(k - 1, fidx);
                // j's position among free directions of T2
                std::vector<int> freeT2;
                for (int l : S_)
                    if (std::find(T2.begin(), T2.end(), l) == T2.end()) freeT2.push_back(l);
                std::size_t jpos2 = static_cast<std::size_t>(
                    std::find(freeT2.begin(), freeT2.end(), j) - freeT2.begin());
                for (std::size_t c = 0; c < d; ++c) {
                    std::size_t rest = c;
                    std::vector<int> digits(freeT.size());
                    for (int i = static_cast<int>(freeT.size()) - 1; i >= 0; --i) {
                        auto mj = codes_.m[static_cast<std::size_t>(freeT[static_cast<std::size_t>(i)])];
                        digits[static_cast<std::size_t>(i)] = static_cast<int>(rest % mj);
                        rest /= mj;
                    }
                    for (std::size_t cj = 0; cj < codes_.m[static_cast<std::size_t>(j)]; ++cj) {
                        felem v = hj.at(cj, static_cast<std::size_t>(aj));
                        if (!v) continue;
                        std::vector<int> full = digits;
                        full.insert(full.begin() + static_cast<std::ptrdiff_t>(jpos2), static_cast<int>(cj));
                        std::size_t r2 = 0;
                        for (std::size_t i = 0; i < freeT2.size(); ++i)
                            r2 = r2 * codes_.m[static_cast<std::size_t>(freeT2[i])] +
                                 static_cast<std::size_t>(full[i]);
                        P.add_at(off2 + r2, off + c, v);
                    }
                }
            }
        }
        partial_.push_back(std::move(P));
    }
}

const Mat& LocalComplex::delta(int k) const {
    if (k < 0 || k >= ell()) throw LevelOutOfRange("local delta level " + std::to_string(k));
    return delta_[static_cast<std::size_t>(k)];
}

const Mat& LocalComplex::partial(int k) const {
    if (k < 1 || k > ell()) throw LevelOutOfRange("local partial level " + std::to_string(k));
    return partial_[static_cast<std::size_t>(k - 1)];
}

Report LocalComplex::self_check() const {
    Report rep;
    rep.suite = "local-complex";
    const auto& F = codes_.F;
    for (int k = 0; k + 1 < ell(); ++k)
        rep.add("dd-zero-" + std::to_string(k), "local/delta-delta-zero",
                delta(k + 1).mul(F, delta(k)).is_zero(), {{"k", k}});
    for (int k = 2; k <= ell(); ++k)
        rep.add("pp-zero-" + std::to_string(k), "local/partial-partial-zero",
                partial(k - 1).mul(F, partial(k)).is_zero(), {{"k", k}});
    for (int k = 0; k < ell(); ++k)
        rep.add("transpose-dual-" + std::to_string(k), "local/adjoint-matrices",
                delta(k) == partial(k + 1).transpose(), {{"k", k}});
    // endpoint spaces
    std::size_t c0 = 1, ctop = 1;
    for (int j : S_) {
        c0 *= codes_.m[static_cast<std::size_t>(j)];
        ctop *= codes_.n;
    }
    rep.add("c0-dim", "local/c0-dim", dim(0) == c0, {{"dim", dim(0)}, {"expect", c0}});
    rep.add("ctop-dim", "local/ctop-dim", dim(ell()) == ctop, {{"dim", dim(ell())}, {"expect", ctop}});
    return rep;
}

Report exactness_check(const LocalComplex& L) {
    Report rep;
    rep.suite = "local-exactness";
    const auto& F = L.field();
    for (int i = 0; i < L.ell(); ++i) {
        std::size_t kerdim =
            (i == 0) ? L.dim(0) : L.dim(i) - rank(F, L.partial(i));
        std::size_t imdim = rank(F, L.partial(i + 1));
        rep.add("exact-" + std::to_string(i), "local/exactness", kerdim == imdim,
                {{"i", i}, {"ker", kerdim}, {"im", imdim}});
    }
    // top homology = tensor code dimension
    std::size_t top_ker = L.dim(L.ell()) - rank(F, L.partial(L.ell()));
    std::size_t expect = 1;
    for (int j : L.S()) expect *= (L.codes().n - L.codes().m[static_cast<std::size_t>(j)]);
    rep.add("top-kernel-dim", "local/tensor-code-dim", top_ker == expect,
            {{"ker", top_ker}, {"tensor", expect}});
    return rep;
}

std::vector<Vec> tensor_kernel_basis(const LocalComplex& L) {
    return kernel_basis(L.field(), L.partial(L.ell()));
}

namespace {

// column-space basis and complement coordinates of im(delta_{k-1}) in C^k
struct CosetSpace {
    RowSpan image;            // echelon basis of the image subspace
    std::vector<Vec> im_basis;
    std::vector<std::size_t> free_coords; // non-pivot coordinates
    CosetSpace(const Field& F, std::size_t width) : image(F, width) {}
};

CosetSpace coset_space(const LocalComplex& L, int k) {
    const auto& F = L.field();
    CosetSpace cs(F, L.dim(k));
    if (k >= 1) {
        const Mat& A = L.delta(k - 1);
        for (std::size_t c = 0; c < A.cols(); ++c) {
            Vec col(A.rows());
            for (std::size_t r = 0; r < A.rows(); ++r) col[r] = A.at(r, c);
            cs.image.add(std::move(col));
        }
    }
    for (auto& v : cs.image.rows()) cs.im_basis.push_back(v);
    std::vector<bool> pivot(L.dim(k), false);
    for (auto& v : cs.image.rows()) {
        std::size_t p = 0;
        while (p < v.size() && v[p] == 0) ++p;
        pivot[p] = true;
    }
    for (std::size_t c = 0; c < L.dim(k); ++c)
        if (!pivot[c]) cs.free_coords.push_back(c);
    return cs;
}

} // namespace

std::optional<bool> is_minimal(const LocalComplex& L, int k, const Vec& x, std::uint64_t budget) {
    if (x.size() != L.dim(k)) throw DimensionMismatch("is_minimal size mismatch");
    auto cs = coset_space(L, k);
    std::uint64_t points = 1;
    for (std::size_t i = 0; i < cs.im_basis.size(); ++i) {
        points *= L.field().q();
        if (points > budget) return std::nullopt;
    }
    std::size_t w = L.block_weight(k, x);
    Vec cur = x;
    SpanIter it(L.field(), cs.im_basis, L.dim(k));
    std::size_t best = w;
    do {
        Vec cand = cur;
        cand.add_inplace(it.current());
        best = std::min(best, L.block_weight(k, cand));
        if (best < w) return false;
    } while (it.next());
    return best == w;
}

RobustnessEstimate robustness(const LocalComplex& L, int k, std::uint64_t budget) {
    if (k < 0 || k >= L.ell()) throw LevelOutOfRange("robustness level " + std::to_string(k));
    RobustnessEstimate est;
    est.k = k;
    const auto& F = L.field();
    const std::size_t dimk = L.dim(k);
    if (dimk == 0 || L.dim(k + 1) == 0) {
        est.method = "vacuous";
        est.lower = est.upper = kInfRobust;
        return est;
    }
    std::uint64_t points = 1;
    bool fits = true;
    for (std::size_t i = 0; i < dimk; ++i) {
        points *= F.q();
        if (points > budget) {
            fits = false;
            break;
        }
    }
    const Mat& D = L.delta(k);
    auto cs = coset_space(L, k);

    if (fits) {
        est.method = "exhaustive";
        double best = kInfRobust;
        // iterate cosets: free-coordinate combinations are representatives
        std::vector<Vec> comp_basis;
        for (auto c : cs.free_coords) {
            Vec e(dimk);
            e[c] = 1;
            comp_basis.push_back(std::move(e));
        }
        SpanIter reps(F, comp_basis, dimk);
        bool first = true;
        do {
            if (first) { // skip the zero coset
                first = false;
                continue;
            }
            const Vec& rep = reps.current();
            if (rep.is_zero()) continue;
            Vec drep = D.apply(F, rep);
            std::size_t dw = L.block_weight(k + 1, drep);
            // coset minimum weight and the first minimizer
            std::size_t minw = SIZE_MAX;
            Vec argmin;
            SpanIter shifts(F, cs.im_basis, dimk);
            do {
                Vec cand = rep;
                cand.add_inplace(shifts.current());
                std::size_t w = L.block_weight(k, cand);
                if (w < minw) {
                    minw = w;
                    argmin = cand;
                }
            } while (shifts.next());
            if (minw == 0) continue; // coset of the image itself
            double ratio = static_cast<double>(dw) / (static_cast<double>(L.n()) * static_cast<double>(minw));
            if (ratio < best) {
                best = ratio;
                est.witness = argmin;
                est.witness_weight = minw;
                est.witness_boundary_weight = dw;
            }
        } while (reps.next());
        est.lower = est.upper = best;
        if (best == kInfRobust) est.method = "vacuous";
        return est;
    }

    // weight-capped fallback: support-limited search gives an upper bound only
    est.method = "weight-capped";
    est.lower = 0.0;
    double bestseen = kInfRobust;
    const std::size_t faces = L.face_count(k);
    std::uint64_t tried = 0;
    for (std::size_t f = 0; f < faces && tried < budget; ++f) {
        std::size_t off = L.face_offset(k, f), d = L.coeff_dim(k, f);
        std::uint64_t vals = 1;
        for (std::size_t i = 0; i < d; ++i) vals *= F.q();
        for (std::uint64_t v = 1; v < vals && tried < budget; ++v) {
            ++tried;
            Vec x(dimk);
            std::uint64_t rest = v;
            for (std::size_t c = 0; c < d; ++c) {
                x[off + c] = static_cast<felem>(rest % F.q());
                rest /= F.q();
            }
            auto mm = is_minimal(L, k, x, budget);
            if (!mm.has_value() || !*mm) continue;
            Vec dx = D.apply(F, x);
            double ratio = static_cast<double>(L.block_weight(k + 1, dx)) / static_cast<double>(L.n());
            if (ratio < bestseen) {
                bestseen = ratio;
                est.witness = x;
                est.witness_weight = 1;
                est.witness_boundary_weight = L.block_weight(k + 1, dx);
            }
        }
    }
    est.upper = bestseen;
    return est;
}

RobustnessEstimate product_expansion(const LocalCodes& codes, const std::vector<int>& S, std::uint64_t budget) {
    LocalComplex L(codes, S);
    return robustness(L, L.ell() - 1, budget);
}

json TwoWayReport::to_json() const {
    json cellsj = json::array();
    for (auto& c : cells) {
        json e{{"S", c.S},
               {"k", c.k},
               {"side", c.dual ? "dual" : "primal"},
               {"method", c.est.method},
               {"upper", c.est.upper == kInfRobust ? json("inf") : json(c.est.upper)},
               {"lower", c.est.lower == kInfRobust ? json("inf") : json(c.est.lower)}};
        cellsj.push_back(e);
    }
    return json{{"kappa", kappa == kInfRobust ? json("inf") : json(kappa)},
                {"all_exact", all_exact},
                {"cells", cellsj}};
}

TwoWayReport two_way_robustness(const LocalCodes& codes, std::uint64_t budget, int jobs) {
    TwoWayReport rep;
    const int t = codes.t();
    // enumerate cells first, then fill them (possibly in parallel)
    struct CellSpec {
        std::vector<int> S;
        int k;
        bool dual;
    };
    std::vector<CellSpec> specs;
    for (std::uint32_t mask = 1; mask < (1u << t); ++mask) {
        std::vector<int> S;
        for (int j = 0; j < t; ++j)
            if (mask & (1u << j)) S.push_back(j);
        for (int k = 0; k < static_cast<int>(S.size()); ++k) {
            specs.push_back({S, k, false});
            specs.push_back({S, k, true});
        }
    }
    rep.cells.resize(specs.size());
    LocalCodes dual = dual_codes(codes);
    parallel_for(specs.size(), jobs, [&](std::size_t i) {
        const auto& sp = specs[i];
        LocalComplex L(sp.dual ? dual : codes, sp.S);
        TwoWayCell cell;
        cell.S = sp.S;
        cell.k = sp.k;
        cell.dual = sp.dual;
        cell.est = robustness(L, sp.k, budget);
        rep.cells[i] = std::move(cell);
    });
    for (auto& c : rep.cells) {
        if (c.est.method == "vacuous") continue;
        if (!c.est.exact()) rep.all_exact = false;
        rep.kappa = std::min(rep.kappa, c.est.upper);
    }
    return rep;
}

namespace {

// all full-row-rank m x n matrices over F, in ascending encoding order
std::vector<Mat> all_full_rank(const Field& F, int m, int n, std::uint64_t limit) {
    std::vector<Mat> out;
    std::uint64_t total = 1;
    for (int i = 0; i < m * n; ++i) {
        total *= F.q();
        if (total > limit) throw BudgetExceeded("matrix space too large to exhaust");
    }
    for (std::uint64_t enc = 0; enc < total; ++enc) {
        Mat M(static_cast<std::size_t>(m), static_cast<std::size_t>(n));
        std::uint64_t rest = enc;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) {
                M.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j), static_cast<felem>(rest % F.q()));
                rest /= F.q();
            }
        if (rank(F, M) == static_cast<std::size_t>(m)) out.push_back(std::move(M));
    }
    return out;
}

} // namespace

SearchResult search_robust_tuple(int t, int n, const std::vector<int>& m, int e, std::uint64_t trials,
                                 std::uint64_t budget, std::uint64_t seed, int jobs) {
    if (static_cast<int>(m.size()) != t) throw SizeMismatch("one m per direction required");
    for (int mi : m)
        if (mi > n || mi < 1) throw NoFullRankTuple("m_i must satisfy 1 <= m_i <= n");
    Field F(e);
    SearchResult res;
    res.seed = seed;
    if (trials == 0) return res;

    // count full-rank matrices per direction: prod_{i<m}(q^n - q^i)
    auto count_fr = [&](int mi) {
        long double c = 1;
        for (int i = 0; i < mi; ++i)
            c *= (std::pow(static_cast<long double>(F.q()), n) - std::pow(static_cast<long double>(F.q()), i));
        return c;
    };
    long double total = 1;
    for (int mi : m) total *= count_fr(mi);

    std::vector<std::vector<Mat>> tuples;
    if (total <= static_cast<long double>(trials)) {
        res.exhaustive = true;
        std::map<int, std::vector<Mat>> by_m;
        for (int mi : m)
            if (!by_m.count(mi)) by_m[mi] = all_full_rank(F, mi, n, 1ull << 28);
        // odometer over the t candidate lists
        std::vector<std::size_t> idx(static_cast<std::size_t>(t), 0);
        while (true) {
            std::vector<Mat> tup;
            for (int j = 0; j < t; ++j) tup.push_back(by_m[m[static_cast<std::size_t>(j)]][idx[static_cast<std::size_t>(j)]]);
            tuples.push_back(std::move(tup));
            int p = t - 1;
            while (p >= 0 && idx[static_cast<std::size_t>(p)] + 1 == by_m[m[static_cast<std::size_t>(p)]].size())
                idx[static_cast<std::size_t>(p--)] = 0;
            if (p < 0) break;
            ++idx[static_cast<std::size_t>(p)];
        }
    } else {
        std::mt19937_64 rng(seed);
        for (std::uint64_t it = 0; it < trials; ++it) {
            std::vector<Mat> tup;
            for (int j = 0; j < t; ++j) {
                Mat M(1, 1);
                do {
                    M = Mat::random(F, static_cast<std::size_t>(m[static_cast<std::size_t>(j)]),
                                    static_cast<std::size_t>(n), rng);
                } while (rank(F, M) != static_cast<std::size_t>(m[static_cast<std::size_t>(j)]));
                tup.push_back(std::move(M));
            }
            tuples.push_back(std::move(tup));
        }
    }

    std::vector<double> scores(tuples.size(), -1.0);
    parallel_for(tuples.size(), jobs, [&](std::size_t i) {
        auto codes = make_codes(F, tuples[i]);
        auto tw = two_way_robustness(codes, budget, 1);
        scores[i] = (tw.kappa == kInfRobust) ? -1.0 : tw.kappa;
    });

    std::map<double, std::uint64_t> census;
    std::size_t besti = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        census[scores[i]]++;
        if (scores[i] > scores[besti]) besti = i;
    }
    res.tuples_scored = tuples.size();
    res.best_h = tuples[besti];
    res.kappa = scores[besti];
    for (auto& [k, c] : census) res.census.emplace_back(k, c);
    return res;
}

} // namespace hdx
