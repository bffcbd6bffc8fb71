#include "hdx/geometry.hpp"

#include <algorithm>
#include <set>

namespace hdx {

std::uint64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 0; i < k; ++i) r = r * static_cast<std::uint64_t>(n - i) / static_cast<std::uint64_t>(i + 1);
    return r;
}

namespace {

std::uint64_t ipow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// all k-subsets of {0..t-1} in lexicographic order of the sorted tuple
std::vector<std::vector<int>> subsets_of_size(int t, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    // recursive lexicographic enumeration
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int j = start; j < t; ++j) {
            cur.push_back(j);
            self(self, j + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

} // namespace

Complex Complex::build(std::uint32_t N, std::vector<PermSet> sets) {
    Complex X;
    X.N_ = N;
    X.t_ = static_cast<int>(sets.size());
    if (X.t_ < 1 || X.t_ > kMaxT) throw SizeMismatch("number of directions must be in [1," + std::to_string(kMaxT) + "]");
    X.n_ = static_cast<int>(sets[0].perms.size());
    if (X.n_ < 1) throw SizeMismatch("empty permutation set");

    for (int j = 0; j < X.t_; ++j) {
        auto& S = sets[j];
        if (static_cast<int>(S.perms.size()) != X.n_)
            throw SizeMismatch("permutation sets must have equal size");
        S.inv.assign(S.perms.size(), {});
        S.inverse_index.assign(S.perms.size(), -1);
        for (int a = 0; a < X.n_; ++a) {
            auto& p = S.perms[a];
            if (p.size() != N) throw SizeMismatch("permutation length differs from group size");
            std::vector<std::uint32_t> inv(N, UINT32_MAX);
            for (std::uint32_t g = 0; g < N; ++g) {
                if (p[g] >= N || inv[p[g]] != UINT32_MAX)
                    throw SizeMismatch("not a bijection in direction " + std::to_string(j));
                inv[p[g]] = g;
            }
            S.inv[a] = std::move(inv);
        }
        // inverse closure: for each a, some member equals the inverse array
        for (int a = 0; a < X.n_; ++a) {
            int found = -1;
            for (int b = 0; b < X.n_ && found < 0; ++b)
                if (S.perms[b] == S.inv[a]) found = b;
            if (found < 0) throw NotInverseClosed(j, a);
            S.inverse_index[a] = found;
        }
        for (int a = 0; a < X.n_; ++a) {
            bool ident = true;
            for (std::uint32_t g = 0; g < N && ident; ++g)
                if (S.perms[a][g] != g) ident = false;
            if (ident) X.has_identity_ = true;
        }
    }

    // cross-direction commutation, all t*(t-1)/2 * n^2 * N triples
    for (int j = 0; j < X.t_; ++j)
        for (int jp = j + 1; jp < X.t_; ++jp)
            for (int a = 0; a < X.n_; ++a)
                for (int b = 0; b < X.n_; ++b)
                    for (std::uint32_t g = 0; g < N; ++g)
                        if (sets[j].perms[a][sets[jp].perms[b][g]] != sets[jp].perms[b][sets[j].perms[a][g]])
                            throw CommutationViolation(j, jp, a, b, g);

    X.sets_ = std::move(sets);
    X.types_.resize(X.t_ + 1);
    X.level_sizes_.resize(X.t_ + 1);
    for (int k = 0; k <= X.t_; ++k) {
        X.types_[k] = subsets_of_size(X.t_, k);
        X.level_sizes_[k] = binom(X.t_, k) * ipow(2, X.t_ - k) * ipow(static_cast<std::uint64_t>(X.n_), k) * N;
    }
    return X;
}

std::uint64_t Complex::level_size(int k) const {
    if (k < 0 || k > t_) throw LevelOutOfRange("level " + std::to_string(k));
    return level_sizes_[k];
}

std::uint64_t Complex::type_block_size(int k) const {
    return static_cast<std::uint64_t>(N_) * ipow(static_cast<std::uint64_t>(n_), k) * ipow(2, t_ - k);
}

const std::vector<std::vector<int>>& Complex::types_at(int k) const {
    if (k < 0 || k > t_) throw LevelOutOfRange("level " + std::to_string(k));
    return types_[k];
}

std::uint32_t Complex::type_mask(const Face& f) const {
    std::uint32_t m = 0;
    for (int j = 0; j < t_; ++j)
        if (f.is_gen(j)) m |= (1u << j);
    return m;
}

int Complex::level_of(const Face& f) const {
    int k = 0;
    for (int j = 0; j < t_; ++j)
        if (f.is_gen(j)) ++k;
    return k;
}

std::uint64_t Complex::index_of(const Face& f) const {
    int k = level_of(f);
    const auto& types = types_[k];
    std::vector<int> S;
    for (int j = 0; j < t_; ++j)
        if (f.is_gen(j)) S.push_back(j);
    std::size_t ti = 0;
    while (ti < types.size() && types[ti] != S) ++ti;
    if (ti == types.size()) throw Error("face type not found");
    std::uint64_t idx = ti * type_block_size(k);
    std::uint64_t acc = f.g;
    for (int j = 0; j < t_; ++j) {
        if (f.is_gen(j))
            acc = acc * static_cast<std::uint64_t>(n_) + static_cast<std::uint64_t>(f.gen(j));
        else
            acc = acc * 2 + static_cast<std::uint64_t>(f.bit(j));
    }
    return idx + acc;
}

Face Complex::face_at(int k, std::uint64_t idx) const {
    if (k < 0 || k > t_) throw LevelOutOfRange("level " + std::to_string(k));
    std::uint64_t block = type_block_size(k);
    std::size_t ti = static_cast<std::size_t>(idx / block);
    std::uint64_t acc = idx % block;
    const auto& S = types_[k][ti];
    Face f{};
    std::vector<int> digits(t_);
    for (int j = t_ - 1; j >= 0; --j) {
        bool gen = std::find(S.begin(), S.end(), j) != S.end();
        std::uint64_t radix = gen ? static_cast<std::uint64_t>(n_) : 2;
        digits[j] = static_cast<int>(acc % radix);
        acc /= radix;
    }
    f.g = static_cast<std::uint32_t>(acc);
    for (int j = 0; j < t_; ++j) {
        bool gen = std::find(S.begin(), S.end(), j) != S.end();
        f.lab[j] = static_cast<std::int16_t>(gen ? 2 + digits[j] : digits[j]);
    }
    return f;
}

std::vector<Cover> Complex::covers_down(const Face& f) const {
    std::vector<Cover> out;
    for (int j = 0; j < t_; ++j) {
        if (!f.is_gen(j)) continue;
        int a = f.gen(j);
        for (int b = 0; b < 2; ++b) {
            Face lo = f;
            lo.lab[j] = static_cast<std::int16_t>(b);
            lo.g = (b == 0) ? f.g : apply(j, a, f.g);
            out.push_back({lo, j});
        }
    }
    return out;
}

std::vector<Cover> Complex::covers_up(const Face& f) const {
    std::vector<Cover> out;
    for (int j = 0; j < t_; ++j) {
        if (f.is_gen(j)) continue;
        int b = f.bit(j);
        for (int a = 0; a < n_; ++a) {
            Face hi = f;
            hi.lab[j] = static_cast<std::int16_t>(2 + a);
            hi.g = (b == 0) ? f.g : apply_inv(j, a, f.g);
            out.push_back({hi, j});
        }
    }
    return out;
}

bool Complex::leq(const Face& lo, const Face& hi) const {
    std::uint32_t g = hi.g;
    for (int j = 0; j < t_; ++j) {
        if (lo.is_gen(j)) {
            if (!hi.is_gen(j) || lo.gen(j) != hi.gen(j)) return false;
        } else if (hi.is_gen(j)) {
            if (lo.bit(j) == 1) g = apply(j, hi.gen(j), g);
        } else {
            if (lo.bit(j) != hi.bit(j)) return false;
        }
    }
    return g == lo.g;
}

std::vector<Face> Complex::link_up(const Face& v, int k) const {
    int l = level_of(v);
    if (k < l || k > t_) throw LevelOutOfRange("link level " + std::to_string(k));
    std::vector<int> comp;
    for (int j = 0; j < t_; ++j)
        if (!v.is_gen(j)) comp.push_back(j);
    std::vector<Face> out;
    for (const auto& Trel : subsets_of_size(static_cast<int>(comp.size()), k - l)) {
        std::vector<int> T;
        for (int idx : Trel) T.push_back(comp[static_cast<std::size_t>(idx)]);
        // odometer over generator assignments on T
        std::vector<int> a(T.size(), 0);
        while (true) {
            Face F = v;
            std::uint32_t g = v.g;
            for (std::size_t i = 0; i < T.size(); ++i) {
                F.lab[T[i]] = static_cast<std::int16_t>(2 + a[i]);
                if (v.bit(T[i]) == 1) g = apply_inv(T[i], a[i], g);
            }
            F.g = g;
            out.push_back(F);
            int p = static_cast<int>(T.size()) - 1;
            while (p >= 0 && a[static_cast<std::size_t>(p)] == n_ - 1) a[static_cast<std::size_t>(p--)] = 0;
            if (p < 0) break;
            ++a[static_cast<std::size_t>(p)];
        }
    }
    return out;
}

std::vector<Face> Complex::link_down(const Face& v, int l) const {
    int i = level_of(v);
    if (l < 0 || l > i) throw LevelOutOfRange("link level " + std::to_string(l));
    std::vector<int> S;
    for (int j = 0; j < t_; ++j)
        if (v.is_gen(j)) S.push_back(j);
    std::vector<Face> out;
    for (const auto& keep_rel : subsets_of_size(static_cast<int>(S.size()), l)) {
        std::set<int> keep;
        for (int idx : keep_rel) keep.insert(S[static_cast<std::size_t>(idx)]);
        std::vector<int> drop;
        for (int j : S)
            if (!keep.count(j)) drop.push_back(j);
        std::vector<int> c(drop.size(), 0);
        while (true) {
            Face f = v;
            std::uint32_t g = v.g;
            for (std::size_t i2 = 0; i2 < drop.size(); ++i2) {
                f.lab[drop[i2]] = static_cast<std::int16_t>(c[i2]);
                if (c[i2] == 1) g = apply(drop[i2], v.gen(drop[i2]), g);
            }
            f.g = g;
            out.push_back(f);
            int p = static_cast<int>(drop.size()) - 1;
            while (p >= 0 && c[static_cast<std::size_t>(p)] == 1) c[static_cast<std::size_t>(p--)] = 0;
            if (p < 0) break;
            ++c[static_cast<std::size_t>(p)];
        }
    }
    return out;
}

std::vector<std::uint64_t> Complex::face_vertices(const Face& f) const {
    std::vector<int> S;
    for (int j = 0; j < t_; ++j)
        if (f.is_gen(j)) S.push_back(j);
    std::vector<std::uint64_t> out;
    for (std::uint32_t bits = 0; bits < (1u << S.size()); ++bits) {
        Face v = f;
        std::uint32_t g = f.g;
        for (std::size_t i = 0; i < S.size(); ++i) {
            int b = (bits >> i) & 1;
            v.lab[S[i]] = static_cast<std::int16_t>(b);
            if (b) g = apply(S[i], f.gen(S[i]), g);
        }
        v.g = g;
        out.push_back(index_of(v));
    }
    std::sort(out.begin(), out.end());
    return out;
}

Report Complex::count_check() const {
    Report rep;
    rep.suite = "geometry-count";
    for (int k = 0; k <= t_; ++k) {
        std::uint64_t expect = binom(t_, k) * ipow(2, t_ - k) * ipow(static_cast<std::uint64_t>(n_), k) * N_;
        // enumerate and verify the index round trip
        std::uint64_t count = 0;
        bool roundtrip = true;
        for (std::uint64_t i = 0; i < level_size(k); ++i) {
            Face f = face_at(k, i);
            if (index_of(f) != i || level_of(f) != k) roundtrip = false;
            ++count;
        }
        rep.add("level-size-" + std::to_string(k), "geom/count/level-sizes", count == expect && count == level_size(k),
                {{"k", k}, {"enumerated", count}, {"formula", expect}});
        rep.add("face-index-roundtrip-" + std::to_string(k), "geom/count/index-bijection", roundtrip, {{"k", k}});
    }
    // per-face degree and link identities
    for (int k = 0; k <= t_; ++k) {
        bool down_ok = true, up_ok = true, linkup_ok = true, linkdown_ok = true;
        for (std::uint64_t i = 0; i < level_size(k); ++i) {
            Face f = face_at(k, i);
            if (covers_down(f).size() != static_cast<std::size_t>(2 * k)) down_ok = false;
            if (covers_up(f).size() != static_cast<std::size_t>((t_ - k) * n_)) up_ok = false;
            for (int kk = k; kk <= t_; ++kk) {
                std::uint64_t expect = binom(t_ - k, kk - k) * ipow(static_cast<std::uint64_t>(n_), kk - k);
                if (link_up(f, kk).size() != expect) linkup_ok = false;
            }
            for (int ll = 0; ll <= k; ++ll) {
                std::uint64_t expect = binom(k, ll) * ipow(2, k - ll);
                if (link_down(f, ll).size() != expect) linkdown_ok = false;
            }
        }
        rep.add("down-degree-" + std::to_string(k), "geom/count/down-degree", down_ok, {{"k", k}});
        rep.add("up-degree-" + std::to_string(k), "geom/count/up-degree", up_ok, {{"k", k}});
        rep.add("link-up-size-" + std::to_string(k), "geom/count/link-up", linkup_ok, {{"k", k}});
        rep.add("link-down-size-" + std::to_string(k), "geom/count/link-down", linkdown_ok, {{"k", k}});
    }
    return rep;
}

} // namespace hdx
