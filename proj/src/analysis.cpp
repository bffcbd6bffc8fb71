#include "hdx/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

namespace hdx {

json DistanceValue::to_json() const {
    if (infinite) return json{{"value", "inf"}, {"exact", true}};
    if (exact) return json{{"value", value}, {"exact", true}};
    return json{{"upper", upper == SIZE_MAX ? json("none") : json(upper)}, {"exact", false}};
}

json ExpansionValue::to_json() const {
    if (!defined) return json{{"value", "undefined"}};
    return json{{"value", value},
                {"exact", exact},
                {"witness_boundary", witness_boundary},
                {"witness_dist", witness_dist}};
}

namespace {

// kernel of `ker_map` decomposed as image-part + complement; the map with
// zero rows stands for the missing (co)boundary at the chain ends
struct HomologySplit {
    std::vector<Vec> image_basis;      // echelon basis of the image inside the kernel
    std::vector<Vec> complement_basis; // kernel vectors independent of the image
};

HomologySplit homology_split(const Field& F, const Mat& ker_map, const Mat* im_map, std::size_t width) {
    HomologySplit out;
    RowSpan imspan(F, width);
    if (im_map) {
        for (std::size_t c = 0; c < im_map->cols(); ++c) {
            Vec col(im_map->rows());
            for (std::size_t r = 0; r < im_map->rows(); ++r) col[r] = im_map->at(r, c);
            imspan.add(std::move(col));
        }
    }
    out.image_basis.assign(imspan.rows().begin(), imspan.rows().end());
    std::vector<Vec> kb;
    if (ker_map.rows() == 0) {
        for (std::size_t c = 0; c < width; ++c) {
            Vec e(width);
            e[c] = 1;
            kb.push_back(std::move(e));
        }
    } else {
        kb = kernel_basis(F, ker_map);
    }
    RowSpan full(F, width);
    for (auto& v : imspan.rows()) full.add(v);
    for (auto& v : kb) {
        auto red = full.add_reduced(v);
        if (red) out.complement_basis.push_back(std::move(*red));
    }
    return out;
}

std::uint64_t pow_checked(std::uint64_t q, std::size_t e, std::uint64_t cap) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < e; ++i) {
        if (r > cap / q) return cap + 1;
        r *= q;
    }
    return r;
}

} // namespace

DistanceValue brute_mu(const SheafComplex& S, int k, bool cosystolic, std::uint64_t budget) {
    const Field& F = S.field();
    DistanceValue out;
    const Mat* ker_map = nullptr;
    const Mat* im_map = nullptr;
    Mat empty(0, S.dim(k));
    if (cosystolic) {
        ker_map = (k <= S.t() - 1) ? &S.delta(k) : &empty;
        im_map = (k >= 1) ? &S.delta(k - 1) : nullptr;
    } else {
        ker_map = (k >= 1) ? &S.partial(k) : &empty;
        im_map = (k <= S.t() - 1) ? &S.partial(k + 1) : nullptr;
    }
    auto split = homology_split(F, *ker_map, im_map, S.dim(k));
    if (split.complement_basis.empty()) {
        out.infinite = true;
        return out;
    }
    std::uint64_t total = pow_checked(F.q(), split.image_basis.size() + split.complement_basis.size(), budget);
    if (total > budget) {
        // sampled upper bound only
        out.exact = false;
        std::mt19937_64 rng(1234);
        std::uniform_int_distribution<std::uint32_t> dq(0, F.q() - 1);
        std::size_t best = SIZE_MAX;
        for (int it = 0; it < 2000; ++it) {
            Vec x(S.dim(k));
            bool nonzero = false;
            for (auto& b : split.complement_basis) {
                felem c = static_cast<felem>(dq(rng));
                if (c) nonzero = true;
                x.add_scaled(F, b, c);
            }
            if (!nonzero) continue;
            for (auto& b : split.image_basis) x.add_scaled(F, b, static_cast<felem>(dq(rng)));
            best = std::min(best, S.block_weight(k, x));
        }
        out.upper = best;
        return out;
    }
    std::size_t best = SIZE_MAX;
    SpanIter comp(F, split.complement_basis, S.dim(k));
    bool first = true;
    do {
        if (first) {
            first = false;
            continue; // skip the zero class
        }
        if (comp.current().is_zero()) continue;
        SpanIter shift(F, split.image_basis, S.dim(k));
        do {
            Vec x = comp.current();
            x.add_inplace(shift.current());
            std::size_t w = S.block_weight(k, x);
            if (w < best) {
                best = w;
                out.witness = x;
            }
        } while (shift.next());
    } while (comp.next());
    out.value = best;
    return out;
}

DistanceValue d_coloc(const SheafComplex& S, int k, std::uint64_t budget) {
    const Field& F = S.field();
    const Complex& X = S.X();
    DistanceValue out;
    if (k > S.t() - 1) throw LevelOutOfRange("d_coloc level");
    const Mat& D = S.delta(k);
    auto kb = kernel_basis(F, D);
    if (kb.empty()) {
        out.infinite = true;
        return out;
    }

    // per-vertex local coboundary shift data (k >= 1 only)
    struct VertexShift {
        std::vector<Vec> cols;                 // columns of delta_{k-1} above v
        std::vector<std::uint64_t> affected;   // k-faces whose block can change
    };
    std::vector<VertexShift> shifts;
    if (k >= 1) {
        const Mat& Dm1 = S.delta(k - 1);
        shifts.resize(X.level_size(0));
        for (std::uint64_t vi = 0; vi < X.level_size(0); ++vi) {
            Face v = X.face_at(0, vi);
            VertexShift vs;
            std::set<std::uint64_t> aff;
            for (auto& f : X.link_up(v, k - 1)) {
                std::uint64_t fi = X.index_of(f);
                std::size_t off = S.offset(k - 1, fi), d = S.coeff_dim(k - 1, fi);
                for (std::size_t c = 0; c < d; ++c) {
                    Vec col(Dm1.rows());
                    for (std::size_t r = 0; r < Dm1.rows(); ++r) col[r] = Dm1.at(r, off + c);
                    vs.cols.push_back(std::move(col));
                }
                for (auto& up : X.link_up(f, k)) aff.insert(X.index_of(up));
            }
            vs.affected.assign(aff.begin(), aff.end());
            shifts[vi] = std::move(vs);
        }
    }

    auto locally_cominimal = [&](const Vec& x, std::size_t xw) {
        if (k == 0) return true;
        auto faces = S.support_faces(k, x);
        std::set<std::uint64_t> supp(faces.begin(), faces.end());
        for (std::uint64_t vi = 0; vi < X.level_size(0); ++vi) {
            const auto& vs = shifts[vi];
            bool touches = false;
            for (auto f : vs.affected)
                if (supp.count(f)) {
                    touches = true;
                    break;
                }
            if (!touches) continue; // disjoint shifts cannot lower the weight
            SpanIter it(F, vs.cols, S.dim(k));
            while (it.next()) {
                Vec cand = x;
                cand.add_inplace(it.current());
                if (S.block_weight(k, cand) < xw) return false;
            }
        }
        return true;
    };

    std::uint64_t total = pow_checked(F.q(), kb.size(), budget);
    if (total > budget) {
        out.exact = false;
        std::mt19937_64 rng(99);
        std::uniform_int_distribution<std::uint32_t> dq(0, F.q() - 1);
        std::size_t best = SIZE_MAX;
        for (int it = 0; it < 500; ++it) {
            Vec x(S.dim(k));
            bool nz = false;
            for (auto& b : kb) {
                felem c = static_cast<felem>(dq(rng));
                if (c) nz = true;
                x.add_scaled(F, b, c);
            }
            if (!nz) continue;
            std::size_t w = S.block_weight(k, x);
            if (w < best && locally_cominimal(x, w)) {
                best = w;
                out.witness = x;
            }
        }
        out.upper = best;
        return out;
    }

    std::size_t best = SIZE_MAX;
    SpanIter it(F, kb, S.dim(k));
    while (it.next()) {
        const Vec& x = it.current();
        std::size_t w = S.block_weight(k, x);
        if (w == 0 || w >= best) continue;
        if (locally_cominimal(x, w)) {
            best = w;
            out.witness = x;
        }
    }
    if (best == SIZE_MAX) {
        out.infinite = true;
        return out;
    }
    out.value = best;
    return out;
}

ExpansionValue expansion(const SheafComplex& S, int k, bool cocycle, std::uint64_t budget) {
    const Field& F = S.field();
    ExpansionValue out;
    const Mat& M = cocycle ? S.delta(k) : S.partial(k);
    int target_level = cocycle ? k + 1 : k - 1;
    std::uint64_t total = pow_checked(F.q(), S.dim(k), budget);
    if (total > budget) throw BudgetExceeded("expansion scan too large");
    // bucket every x by its syndrome; per bucket track the minimum weight
    struct Bucket {
        std::size_t minw = SIZE_MAX;
        std::size_t sweight = 0;
        Vec argmin;
    };
    std::unordered_map<std::string, Bucket> buckets;
    std::vector<Vec> unit;
    for (std::size_t c = 0; c < S.dim(k); ++c) {
        Vec e(S.dim(k));
        e[c] = 1;
        unit.push_back(std::move(e));
    }
    SpanIter it(F, unit, S.dim(k));
    do {
        const Vec& x = it.current();
        Vec s = M.apply(F, x);
        std::string key(reinterpret_cast<const char*>(s.data().data()), s.size() * sizeof(felem));
        auto& b = buckets[key];
        std::size_t w = S.block_weight(k, x);
        if (w < b.minw) {
            b.minw = w;
            b.argmin = x;
            b.sweight = S.block_weight(target_level, s);
        }
    } while (it.next());
    double best = 1e300;
    for (auto& [key, b] : buckets) {
        (void)key;
        if (b.sweight == 0) continue; // inside the kernel
        double ratio = static_cast<double>(b.sweight) / static_cast<double>(b.minw);
        if (ratio < best) {
            best = ratio;
            out.witness = b.argmin;
            out.witness_boundary = b.sweight;
            out.witness_dist = b.minw;
        }
    }
    if (best == 1e300) return out; // undefined: everything in the kernel
    out.defined = true;
    out.value = best;
    return out;
}

SheafComplex dual_complex(const SheafComplex& S) { return SheafComplex(S.X(), dual_codes(S.codes())); }

// ---- local views ----

bool LocalView::is_zero() const {
    for (auto& m : vals)
        for (auto& [u, v] : m)
            if (!v.is_zero()) return false;
    return true;
}

std::size_t LocalView::block_weight() const {
    std::size_t w = 0;
    for (auto& m : vals) {
        for (auto& [u, v] : m)
            if (!v.is_zero()) {
                ++w;
                break;
            }
    }
    return w;
}

void LocalView::prune() {
    for (auto& m : vals) {
        for (auto it = m.begin(); it != m.end();) {
            if (it->second.is_zero())
                it = m.erase(it);
            else
                ++it;
        }
    }
}

void LocalView::add(const LocalView& o) {
    if (o.level != level || o.k != k || o.vals.size() != vals.size())
        throw ShapeMismatch("local view addition shape mismatch");
    for (std::size_t f = 0; f < vals.size(); ++f)
        for (auto& [u, v] : o.vals[f]) {
            auto it = vals[f].find(u);
            if (it == vals[f].end())
                vals[f].emplace(u, v);
            else
                it->second.add_inplace(v);
        }
    prune();
}

LocalView zero_view(const SheafComplex& S, int level, int k) {
    LocalView o;
    o.level = level;
    o.k = k;
    o.vals.resize(S.X().level_size(level));
    return o;
}

LocalView local_views(const SheafComplex& S, int k, const Vec& x) {
    const Complex& X = S.X();
    LocalView o = zero_view(S, 0, k);
    auto supp = S.support_faces(k, x);
    for (auto ui : supp) {
        Face u = X.face_at(k, ui);
        std::size_t off = S.offset(k, ui), d = S.coeff_dim(k, ui);
        Vec block(d);
        for (std::size_t c = 0; c < d; ++c) block[c] = x[off + c];
        for (auto vidx : X.face_vertices(u)) o.vals[vidx][ui] = block;
    }
    return o;
}

LocalView view_delta(const SheafComplex& S, const LocalView& y) {
    const Complex& X = S.X();
    LocalView o = zero_view(S, y.level + 1, y.k);
    if (y.level + 1 > y.k) return o; // views vanish above the coefficient level
    for (std::uint64_t fi = 0; fi < X.level_size(y.level); ++fi) {
        if (y.vals[fi].empty()) continue;
        Face f = X.face_at(y.level, fi);
        for (auto& cov : X.covers_up(f)) {
            std::uint64_t gi = X.index_of(cov.face);
            for (auto& [u, v] : y.vals[fi]) {
                if (!X.leq(cov.face, X.face_at(y.k, u))) continue;
                auto it = o.vals[gi].find(u);
                if (it == o.vals[gi].end())
                    o.vals[gi].emplace(u, v);
                else
                    it->second.add_inplace(v);
            }
        }
    }
    o.prune();
    return o;
}

LocalView view_partial(const SheafComplex& S, const LocalView& y) {
    const Complex& X = S.X();
    LocalView o = zero_view(S, y.level, y.k - 1);
    for (std::uint64_t fi = 0; fi < X.level_size(y.level); ++fi) {
        Face f = X.face_at(y.level, fi);
        for (auto& [ui, v] : y.vals[fi]) {
            Face u = X.face_at(y.k, ui);
            for (auto& cov : X.covers_down(u)) {
                if (!X.leq(f, cov.face)) continue;
                Vec r = restrict_to(S, v, u, cov.face);
                if (r.is_zero()) continue;
                std::uint64_t wi = X.index_of(cov.face);
                auto it = o.vals[fi].find(wi);
                if (it == o.vals[fi].end())
                    o.vals[fi].emplace(wi, std::move(r));
                else
                    it->second.add_inplace(r);
            }
        }
    }
    o.prune();
    return o;
}

LocalView view_delta_solve(const SheafComplex& S, const LocalView& y) {
    const Complex& X = S.X();
    if (y.level < 1) throw LevelOutOfRange("view_delta_solve needs level >= 1");
    LocalView z = zero_view(S, y.level - 1, y.k);
    const int i = y.level;
    const Field& F = S.field();
    // collect the per-k-face columns
    std::map<std::uint64_t, std::map<std::uint64_t, const Vec*>> per_u;
    for (std::uint64_t fi = 0; fi < X.level_size(i); ++fi)
        for (auto& [u, v] : y.vals[fi]) per_u[u][fi] = &v;
    for (auto& [ui, rows] : per_u) {
        Face u = X.face_at(y.k, ui);
        auto hi_faces = X.link_down(u, i);     // level-i faces below u
        auto lo_faces = X.link_down(u, i - 1); // level-(i-1) faces below u
        std::map<std::uint64_t, std::size_t> hi_pos, lo_pos;
        for (std::size_t p = 0; p < hi_faces.size(); ++p) hi_pos[X.index_of(hi_faces[p])] = p;
        for (std::size_t p = 0; p < lo_faces.size(); ++p) lo_pos[X.index_of(lo_faces[p])] = p;
        // cube coboundary with 0/1 entries
        Mat A(hi_faces.size(), lo_faces.size());
        for (std::size_t c = 0; c < lo_faces.size(); ++c)
            for (auto& cov : X.covers_up(lo_faces[c])) {
                auto it = hi_pos.find(X.index_of(cov.face));
                if (it != hi_pos.end()) A.set(it->second, c, 1);
            }
        std::size_t vdim = S.coeff_dim(y.k, ui);
        // solve coordinate-wise over V_u
        std::vector<Vec> sols;
        for (std::size_t coord = 0; coord < vdim; ++coord) {
            Vec rhs(hi_faces.size());
            bool any = false;
            for (auto& [fi, vp] : rows) {
                rhs[hi_pos[fi]] = (*vp)[coord];
                if ((*vp)[coord]) any = true;
            }
            if (!any) {
                sols.emplace_back(lo_faces.size());
                continue;
            }
            auto sol = solve_linear(F, A, rhs);
            if (!sol) throw NotACocycle("no preimage under the view coboundary");
            sols.push_back(std::move(*sol));
        }
        for (std::size_t p = 0; p < lo_faces.size(); ++p) {
            Vec val(vdim);
            bool nz = false;
            for (std::size_t coord = 0; coord < vdim; ++coord) {
                val[coord] = sols[coord][p];
                if (val[coord]) nz = true;
            }
            if (nz) z.vals[X.index_of(lo_faces[p])][ui] = std::move(val);
        }
    }
    z.prune();
    return z;
}

Vec stitch(const SheafComplex& S, const LocalView& z) {
    const Complex& X = S.X();
    if (z.level != 0) throw ShapeMismatch("stitch expects vertex-level views");
    Vec out(S.dim(z.k));
    // group opinions by k-face
    std::map<std::uint64_t, std::vector<std::pair<std::uint64_t, const Vec*>>> per_u;
    for (std::uint64_t vi = 0; vi < X.level_size(0); ++vi)
        for (auto& [u, v] : z.vals[vi]) per_u[u].emplace_back(vi, &v);
    for (auto& [ui, opinions] : per_u) {
        Face u = X.face_at(z.k, ui);
        auto verts = X.face_vertices(u);
        // unanimity across every vertex of u (missing entries are zero)
        const Vec* val = nullptr;
        for (auto& [vi, vp] : opinions) {
            (void)vi;
            if (!vp->is_zero()) {
                val = vp;
                break;
            }
        }
        if (!val) continue;
        if (opinions.size() != verts.size()) throw InconsistentViews("a vertex of the face has no opinion");
        for (auto& [vi, vp] : opinions) {
            (void)vi;
            if (!(*vp == *val)) throw InconsistentViews("vertices disagree on a face value");
        }
        std::size_t off = S.offset(z.k, ui);
        for (std::size_t c = 0; c < val->size(); ++c) out[off + c] = (*val)[c];
    }
    return out;
}

// ---- cycle filling ----

namespace {

// view block <-> link-local vector conversions at a face f
Vec view_to_linkvec(const SheafComplex& S, const Face& f, int local_level,
                    const std::map<std::uint64_t, Vec>& block) {
    const Complex& X = S.X();
    int base = X.level_of(f);
    Vec out(link_space_dim(S, f, local_level));
    std::size_t pos = 0;
    for (auto& g : X.link_up(f, base + local_level)) {
        std::uint64_t idx = X.index_of(g);
        std::size_t d = S.coeff_dim(base + local_level, idx);
        auto it = block.find(idx);
        if (it != block.end())
            for (std::size_t c = 0; c < d; ++c) out[pos + c] = it->second[c];
        pos += d;
    }
    return out;
}

std::map<std::uint64_t, Vec> linkvec_to_view(const SheafComplex& S, const Face& f, int local_level, const Vec& in) {
    const Complex& X = S.X();
    int base = X.level_of(f);
    std::map<std::uint64_t, Vec> out;
    std::size_t pos = 0;
    for (auto& g : X.link_up(f, base + local_level)) {
        std::uint64_t idx = X.index_of(g);
        std::size_t d = S.coeff_dim(base + local_level, idx);
        Vec v(d);
        bool nz = false;
        for (std::size_t c = 0; c < d; ++c) {
            v[c] = in[pos + c];
            if (v[c]) nz = true;
        }
        if (nz) out.emplace(idx, std::move(v));
        pos += d;
    }
    return out;
}

} // namespace

FillResult fill_cycle(const SheafComplex& S, int k, const Vec& x, std::uint64_t budget) {
    (void)budget;
    const Complex& X = S.X();
    const Field& F = S.field();
    const int t = S.t();
    FillResult res;
    if (k >= 1 && !S.partial(k).apply(F, x).is_zero()) throw NotACocycle("fill_cycle input is not a cycle");
    if (x.is_zero()) {
        res.filled = true;
        res.path = "zero";
        res.z = Vec(k + 1 <= t ? S.dim(k + 1) : 0);
        return res;
    }
    if (k == t) {
        // the top level has no faces above; a nonzero cycle is never a boundary
        res.obstruction = true;
        res.path = "decode";
        res.obstruction_witness = x;
        return res;
    }

    // stage 0: per-vertex local preimages
    LocalView x0 = local_views(S, k, x);
    std::vector<LocalView> zs; // zs[r] in level r, coefficient k+r+1
    LocalView xr = x0;
    int r = 0;
    bool agreed = false;
    for (;; ++r) {
        // solve the local boundary at every nonzero face of xr
        LocalView zr = zero_view(S, r, k + r + 1);
        for (std::uint64_t fi = 0; fi < X.level_size(r); ++fi) {
            if (xr.vals[fi].empty()) continue;
            Face f = X.face_at(r, fi);
            Vec rhs = view_to_linkvec(S, f, k, xr.vals[fi]);
            Mat P = link_partial(S, f, k + 1); // local level k+1 -> k above f
            auto sol = solve_linear(F, P, rhs);
            if (!sol) throw Error("local exactness violated during fill");
            zr.vals[fi] = linkvec_to_view(S, f, k + 1, *sol);
        }
        zr.prune();
        zs.push_back(zr);
        LocalView xnext = view_delta(S, zr); // level r+1, coefficient k+r+1
        if (xnext.is_zero()) {
            agreed = true;
            break;
        }
        if (r == t - k - 1) {
            // all stages used and the views still disagree: decode the top
            // tensor codewords into the dual complex and fill there
            xr = xnext; // level t-k, coefficient t
            break;
        }
        xr = xnext;
    }

    if (!agreed) {
        res.path = "decode";
        SheafComplex dual = dual_complex(S);
        const auto& codes = S.codes();
        // left inverses of the dual encoders per direction
        std::vector<Mat> linv;
        for (int j = 0; j < t; ++j) {
            const Mat& hp = codes.hperp[static_cast<std::size_t>(j)];
            if (hp.rows() == 0) {
                linv.emplace_back(0, codes.n);
                continue;
            }
            linv.push_back(right_inverse(F, hp).transpose()); // L (h^perp)^T = I
        }
        const int lev = t - k;
        Vec xtil(dual.dim(lev));
        for (std::uint64_t fi = 0; fi < X.level_size(lev); ++fi) {
            if (xr.vals[fi].empty()) continue;
            Face f = X.face_at(lev, fi);
            auto freeD = free_directions(X, f);
            // gather the top-face tensor over prod A_j
            std::vector<std::size_t> radix_in(freeD.size(), codes.n);
            std::size_t in_size = 1;
            for (auto rdx : radix_in) in_size *= rdx;
            Vec tensor(in_size);
            {
                std::size_t pos = 0;
                for (auto& g : X.link_up(f, t)) {
                    auto it = xr.vals[fi].find(X.index_of(g));
                    tensor[pos] = (it == xr.vals[fi].end()) ? 0 : it->second[0];
                    ++pos;
                }
            }
            // contract each axis with the left inverse of (h_j^perp)^T
            std::vector<std::size_t> shape = radix_in;
            for (std::size_t ax = 0; ax < freeD.size(); ++ax) {
                const Mat& L = linv[static_cast<std::size_t>(freeD[ax])];
                std::size_t before = 1, after = 1;
                for (std::size_t i = 0; i < ax; ++i) before *= shape[i];
                for (std::size_t i = ax + 1; i < shape.size(); ++i) after *= shape[i];
                Vec next(before * L.rows() * after);
                for (std::size_t b = 0; b < before; ++b)
                    for (std::size_t rr = 0; rr < L.rows(); ++rr)
                        for (std::size_t a = 0; a < after; ++a) {
                            felem acc = 0;
                            for (std::size_t c = 0; c < L.cols(); ++c) {
                                felem lv = L.at(rr, c);
                                felem tv = tensor[(b * shape[ax] + c) * after + a];
                                if (lv && tv) acc ^= F.mul(lv, tv);
                            }
                            next[(b * L.rows() + rr) * after + a] = acc;
                        }
                tensor = std::move(next);
                shape[ax] = L.rows();
            }
            std::size_t off = dual.offset(lev, fi);
            for (std::size_t c = 0; c < tensor.size(); ++c) xtil[off + c] = tensor[c];
        }
        // fill in the dual complex: solve dual delta(lev-1) u = xtil
        if (lev == 0) {
            res.obstruction = true;
            res.obstruction_witness = xtil;
            return res;
        }
        auto usol = solve_linear(F, dual.delta(lev - 1), xtil);
        if (!usol) {
            res.obstruction = true;
            res.obstruction_witness = xtil;
            return res;
        }
        // re-encode into a level-(t-k-1) view with coefficient t
        LocalView ucor = zero_view(S, lev - 1, t);
        for (std::uint64_t fi = 0; fi < X.level_size(lev - 1); ++fi) {
            Face f = X.face_at(lev - 1, fi);
            std::size_t off = dual.offset(lev - 1, fi), d = dual.coeff_dim(lev - 1, fi);
            Vec coeff(d);
            bool nz = false;
            for (std::size_t c = 0; c < d; ++c) {
                coeff[c] = (*usol)[off + c];
                if (coeff[c]) nz = true;
            }
            if (!nz) continue;
            auto freeD = free_directions(X, f);
            std::vector<std::size_t> shape;
            for (int j : freeD) shape.push_back(codes.hperp[static_cast<std::size_t>(j)].rows());
            Vec tensor = coeff;
            for (std::size_t ax = 0; ax < freeD.size(); ++ax) {
                const Mat E = codes.hperp[static_cast<std::size_t>(freeD[ax])].transpose(); // encoder
                std::size_t before = 1, after = 1;
                for (std::size_t i = 0; i < ax; ++i) before *= shape[i];
                for (std::size_t i = ax + 1; i < shape.size(); ++i) after *= shape[i];
                Vec next(before * E.rows() * after);
                for (std::size_t b = 0; b < before; ++b)
                    for (std::size_t rr = 0; rr < E.rows(); ++rr)
                        for (std::size_t a = 0; a < after; ++a) {
                            felem acc = 0;
                            for (std::size_t c = 0; c < E.cols(); ++c) {
                                felem lv = E.at(rr, c);
                                felem tv = tensor[(b * shape[ax] + c) * after + a];
                                if (lv && tv) acc ^= F.mul(lv, tv);
                            }
                            next[(b * E.rows() + rr) * after + a] = acc;
                        }
                tensor = std::move(next);
                shape[ax] = E.rows();
            }
            std::size_t pos = 0;
            for (auto& g : X.link_up(f, t)) {
                if (tensor[pos]) {
                    Vec one(1);
                    one[0] = tensor[pos];
                    ucor.vals[fi][X.index_of(g)] = std::move(one);
                }
                ++pos;
            }
        }
        zs[static_cast<std::size_t>(lev - 1)].add(ucor);
        r = lev - 1;
    } else {
        res.path = "agreement";
    }

    // back-propagation: z[r] satisfies view_delta(z[r]) = 0
    while (r >= 1) {
        LocalView u = view_delta_solve(S, zs[static_cast<std::size_t>(r)]);
        LocalView w = view_partial(S, u);
        zs[static_cast<std::size_t>(r - 1)].add(w);
        --r;
    }
    Vec z = stitch(S, zs[0]);
    if (!(S.partial(k + 1).apply(F, z) == x)) throw Error("fill verification failed");
    res.filled = true;
    if (res.path.empty()) res.path = "agreement";
    res.z = z;
    res.weight = S.block_weight(k + 1, z);
    double n = static_cast<double>(X.degree());
    res.weight_bound = std::pow(static_cast<double>(t) * std::pow(2.0, 2 * t) * std::pow(n, t + 1),
                                static_cast<double>(t)) *
                       static_cast<double>(S.block_weight(k, x));
    res.stages = static_cast<int>(zs.size());
    return res;
}

// ---- decoding ----

DecodeResult small_set_flip_decode(const SheafComplex& S, int k, const Vec& syndrome, std::size_t max_iters,
                                   std::uint64_t local_budget) {
    const Complex& X = S.X();
    const Field& F = S.field();
    const Mat& D = S.delta(k);
    if (syndrome.size() != S.dim(k + 1)) throw DimensionMismatch("syndrome lives at level k+1");

    // sparse columns of delta for incremental syndrome updates
    std::vector<std::vector<std::pair<std::size_t, felem>>> cols(D.cols());
    for (std::size_t r = 0; r < D.rows(); ++r)
        for (std::size_t c = 0; c < D.cols(); ++c)
            if (D.at(r, c)) cols[c].emplace_back(r, D.at(r, c));

    Vec z = syndrome;
    Vec xhat(S.dim(k));
    DecodeResult res;

    // per candidate region: the level-k coordinates above a face v
    struct Region {
        std::vector<std::size_t> coords;
        std::vector<std::uint64_t> affected; // level-(k+1) faces
    };
    std::vector<std::vector<Region>> regions(static_cast<std::size_t>(k) + 1);
    for (int l = 0; l <= k; ++l) {
        regions[static_cast<std::size_t>(l)].resize(X.level_size(l));
        for (std::uint64_t vi = 0; vi < X.level_size(l); ++vi) {
            Face v = X.face_at(l, vi);
            Region reg;
            for (auto& f : X.link_up(v, k)) {
                std::uint64_t fi = X.index_of(f);
                std::size_t off = S.offset(k, fi), d = S.coeff_dim(k, fi);
                for (std::size_t c = 0; c < d; ++c) reg.coords.push_back(off + c);
            }
            std::set<std::uint64_t> aff;
            for (auto& f : X.link_up(v, k + 1)) aff.insert(X.index_of(f));
            reg.affected.assign(aff.begin(), aff.end());
            regions[static_cast<std::size_t>(l)][vi] = std::move(reg);
        }
    }

    auto weight_of = [&](const Vec& s) { return S.block_weight(k + 1, s); };
    std::size_t zw = weight_of(z);

    auto try_flip = [&](const Region& reg) -> std::optional<Vec> {
        // does any syndrome face touch this region?
        bool touches = false;
        for (auto fi : reg.affected) {
            std::size_t off = S.offset(k + 1, fi), d = S.coeff_dim(k + 1, fi);
            for (std::size_t c = 0; c < d && !touches; ++c)
                if (z[off + c]) touches = true;
            if (touches) break;
        }
        if (!touches) return std::nullopt;
        std::uint64_t space = 1;
        bool full = true;
        for (std::size_t i = 0; i < reg.coords.size(); ++i) {
            space *= F.q();
            if (space > local_budget) {
                full = false;
                break;
            }
        }
        auto eval = [&](const Vec& y) -> std::optional<Vec> {
            Vec znew = z;
            for (std::size_t i = 0; i < reg.coords.size(); ++i) {
                if (!y[i]) continue;
                for (auto& [rr, vv] : cols[reg.coords[i]]) znew[rr] ^= F.mul(vv, y[i]);
            }
            if (weight_of(znew) < zw) return znew;
            return std::nullopt;
        };
        if (full) {
            std::vector<Vec> unit;
            for (std::size_t i = 0; i < reg.coords.size(); ++i) {
                Vec e(reg.coords.size());
                e[i] = 1;
                unit.push_back(std::move(e));
            }
            SpanIter it(F, unit, reg.coords.size());
            while (it.next()) {
                auto zn = eval(it.current());
                if (zn) {
                    Vec y = it.current();
                    // apply
                    for (std::size_t i = 0; i < reg.coords.size(); ++i)
                        if (y[i]) xhat[reg.coords[i]] ^= y[i];
                    z = std::move(*zn);
                    zw = weight_of(z);
                    return y;
                }
            }
        } else {
            for (std::size_t i = 0; i < reg.coords.size(); ++i)
                for (std::uint32_t a = 1; a < F.q(); ++a) {
                    Vec y(reg.coords.size());
                    y[i] = static_cast<felem>(a);
                    auto zn = eval(y);
                    if (zn) {
                        xhat[reg.coords[i]] ^= static_cast<felem>(a);
                        z = std::move(*zn);
                        zw = weight_of(z);
                        return y;
                    }
                }
        }
        return std::nullopt;
    };

    while (res.iterations < max_iters) {
        if (zw == 0) {
            res.success = true;
            res.correction = xhat;
            res.residual = z;
            return res;
        }
        bool improved = false;
        for (int l = 0; l <= k && !improved; ++l)
            for (std::uint64_t vi = 0; vi < X.level_size(l) && !improved; ++vi)
                if (try_flip(regions[static_cast<std::size_t>(l)][vi])) improved = true;
        if (!improved) break;
        ++res.iterations;
    }
    res.success = (zw == 0);
    res.correction = xhat;
    res.residual = z;
    return res;
}

} // namespace hdx
