#include "hdx/walks.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

namespace hdx {

void RatMat::add(std::size_t r, std::size_t c, const Rat& v) {
    if (v == Rat(0)) return;
    auto& row = row_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const auto& e, std::size_t col) { return e.first < col; });
    if (it != row.end() && it->first == c) {
        it->second += v;
        if (it->second == Rat(0)) row.erase(it);
    } else {
        row.insert(it, {c, v});
    }
}

Rat RatMat::at(std::size_t r, std::size_t c) const {
    const auto& row = row_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const auto& e, std::size_t col) { return e.first < col; });
    if (it != row.end() && it->first == c) return it->second;
    return Rat(0);
}

RatMat RatMat::mul(const RatMat& B) const {
    if (cols_ != B.rows_) throw DimensionMismatch("rational matrix product shape mismatch");
    RatMat C(rows_, B.cols_);
    std::vector<Rat> acc(B.cols_, Rat(0));
    std::vector<std::size_t> touched;
    for (std::size_t i = 0; i < rows_; ++i) {
        touched.clear();
        for (auto& [k, v] : row_[i])
            for (auto& [j, w] : B.row_[k]) {
                if (acc[j] == Rat(0)) touched.push_back(j);
                acc[j] += v * w;
            }
        std::sort(touched.begin(), touched.end());
        for (auto j : touched) {
            if (acc[j] != Rat(0)) C.row_[i].emplace_back(j, acc[j]);
            acc[j] = Rat(0);
        }
    }
    return C;
}

RatMat RatMat::scaled(const Rat& s) const {
    RatMat C(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (auto& [j, v] : row_[i]) C.row_[i].emplace_back(j, v * s);
    return C;
}

bool RatMat::is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (auto& [j, v] : row_[i])
            if (at(j, i) != v) return false;
    return true;
}

bool RatMat::rows_sum_to(const Rat& target) const {
    for (std::size_t i = 0; i < rows_; ++i) {
        Rat s(0);
        for (auto& [j, v] : row_[i]) s += v;
        if (s != target) return false;
    }
    return true;
}

bool RatMat::is_integral() const {
    for (std::size_t i = 0; i < rows_; ++i)
        for (auto& [j, v] : row_[i])
            if (v.denominator() != 1) return false;
    return true;
}

std::size_t RatMat::nnz() const {
    std::size_t n = 0;
    for (auto& r : row_) n += r.size();
    return n;
}

Rat RatMat::quad_form(const std::vector<char>& in_set) const {
    Rat s(0);
    for (std::size_t i = 0; i < rows_; ++i) {
        if (!in_set[i]) continue;
        for (auto& [j, v] : row_[i])
            if (in_set[j]) s += v;
    }
    return s;
}

std::vector<double> RatMat::apply(const std::vector<double>& x) const {
    std::vector<double> y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
        for (auto& [j, v] : row_[i]) y[i] += boost::rational_cast<double>(v) * x[j];
    return y;
}

RatMat down_op(const Complex& X, int l) {
    RatMat D(X.level_size(l), X.level_size(l + 1));
    Rat w(1, static_cast<long long>((X.t() - l) * X.degree()));
    for (std::uint64_t i = 0; i < X.level_size(l); ++i) {
        Face f = X.face_at(l, i);
        for (auto& c : X.covers_up(f)) D.add(i, X.index_of(c.face), w);
    }
    return D;
}

RatMat up_op(const Complex& X, int l) {
    RatMat U(X.level_size(l), X.level_size(l - 1));
    Rat w(1, static_cast<long long>(2 * l));
    for (std::uint64_t i = 0; i < X.level_size(l); ++i) {
        Face f = X.face_at(l, i);
        for (auto& c : X.covers_down(f)) U.add(i, X.index_of(c.face), w);
    }
    return U;
}

RatMat step_op(const Complex& X, int l) {
    RatMat M(X.level_size(l), X.level_size(l));
    Rat w(1, static_cast<long long>((X.t() - l) * X.degree()));
    for (std::uint64_t i = 0; i < X.level_size(l); ++i) {
        Face v = X.face_at(l, i);
        for (int j = 0; j < X.t(); ++j) {
            if (v.is_gen(j)) continue;
            for (int a = 0; a < X.degree(); ++a) {
                Face v2 = v;
                v2.g = X.apply(j, a, v.g);
                v2.lab[j] = static_cast<std::int16_t>(1 - v.bit(j));
                M.add(i, X.index_of(v2), w);
            }
        }
    }
    return M;
}

NeighborhoodSets neighborhoods(const Complex& X, const Face& v, int k) {
    int l = X.level_of(v);
    if (k < l || k >= X.t()) throw LevelOutOfRange("neighborhood level");
    NeighborhoodSets out;
    std::set<std::uint64_t> cand;
    for (auto& up : X.link_up(v, k + 1))
        for (auto& c : X.covers_down(up)) cand.insert(X.index_of(c.face));
    auto vverts = X.face_vertices(v);
    std::set<std::uint64_t> vset(vverts.begin(), vverts.end());
    for (auto idx : cand) {
        Face f = X.face_at(k, idx);
        if (X.leq(v, f)) {
            out.link.push_back(idx);
            continue;
        }
        auto fverts = X.face_vertices(f);
        bool meets = false;
        for (auto w : fverts)
            if (vset.count(w)) {
                meets = true;
                break;
            }
        (meets ? out.nb : out.op).push_back(idx);
    }
    // partition sanity: the link faces computed directly must all appear
    std::set<std::uint64_t> linkset(out.link.begin(), out.link.end());
    out.partition_ok = true;
    for (auto& f : X.link_up(v, k))
        if (!linkset.count(X.index_of(f))) out.partition_ok = false;
    if (out.link.size() + out.nb.size() + out.op.size() != cand.size()) out.partition_ok = false;
    return out;
}

std::uint64_t a_coeff(const Complex& X, int k, int l) {
    if (!(0 <= l && l < k && k < X.t())) throw LevelOutOfRange("a_coeff levels");
    std::uint64_t best = 0;
    std::map<std::uint64_t, std::set<std::uint64_t>> nb_cache; // v_{l+1} index -> Nb set at level k
    for (std::uint64_t vi = 0; vi < X.level_size(l); ++vi) {
        Face vl = X.face_at(l, vi);
        auto linkk = X.link_up(vl, k);
        auto linkl1 = X.link_up(vl, l + 1);
        for (auto& vk : linkk) {
            for (auto& vkp : linkk) {
                std::uint64_t count = 0;
                for (auto& vm : linkl1) {
                    if (!X.leq(vm, vk)) continue;
                    std::uint64_t vmidx = X.index_of(vm);
                    auto it = nb_cache.find(vmidx);
                    if (it == nb_cache.end()) {
                        auto ns = neighborhoods(X, vm, k);
                        it = nb_cache.emplace(vmidx, std::set<std::uint64_t>(ns.nb.begin(), ns.nb.end())).first;
                    }
                    if (it->second.count(X.index_of(vkp))) ++count;
                }
                best = std::max(best, count);
            }
        }
    }
    return best;
}

WalkOperator walk_W(const Complex& X, int k, int l, std::uint64_t explicit_limit) {
    if (!(0 <= l && l <= k && k <= X.t() - 1)) throw LevelOutOfRange("walk levels");
    WalkOperator W;
    W.k = k;
    W.l = l;
    W.X = &X;
    std::uint64_t npow = 1;
    for (int i = 0; i < k + 1 - l; ++i) npow *= static_cast<std::uint64_t>(X.degree());
    W.normalization = binom(k, l) * binom(X.t() - l, k - l) * static_cast<std::uint64_t>(X.t() - l) *
                      (1ull << (k - l)) * npow;
    if (X.level_size(k) <= explicit_limit) {
        RatMat M = step_op(X, l);
        for (int j = l; j <= k - 1; ++j) M = M.mul(down_op(X, j));
        for (int j = l + 1; j <= k; ++j) M = up_op(X, j).mul(M);
        W.matrix = std::move(M);
    }
    return W;
}

WalkOperator walk_Op(const Complex& X, int k, int l, std::uint64_t explicit_limit) {
    if (!(0 <= l && l <= k && k <= X.t() - 1)) throw LevelOutOfRange("walk levels");
    WalkOperator W;
    W.k = k;
    W.l = l;
    W.X = &X;
    W.opposite = true;
    if (X.level_size(k) <= explicit_limit) {
        RatMat M(X.level_size(k), X.level_size(k));
        Rat down(1, static_cast<long long>(binom(k, l) * (1ull << (k - l))));
        for (std::uint64_t fi = 0; fi < X.level_size(k); ++fi) {
            Face f = X.face_at(k, fi);
            for (auto& v : X.link_down(f, l)) {
                auto ns = neighborhoods(X, v, k);
                if (ns.op.empty()) throw Error("empty opposite neighborhood");
                Rat w = down / Rat(static_cast<long long>(ns.op.size()));
                for (auto idx : ns.op) M.add(fi, idx, w);
            }
        }
        W.matrix = std::move(M);
    }
    return W;
}

RatMat op_adjacency(const Complex& X, int k, int l) {
    RatMat M(X.level_size(k), X.level_size(k));
    for (std::uint64_t fi = 0; fi < X.level_size(k); ++fi) {
        Face f = X.face_at(k, fi);
        for (auto& v : X.link_down(f, l)) {
            auto ns = neighborhoods(X, v, k);
            for (auto idx : ns.op) M.add(fi, idx, Rat(1));
        }
    }
    return M;
}

std::uint64_t WalkOperator::sample_step(std::uint64_t fidx, std::mt19937_64& rng,
                                        std::map<std::uint64_t, std::vector<std::uint64_t>>* op_cache) const {
    Face f = X->face_at(k, fidx);
    auto downs = X->link_down(f, l);
    std::uniform_int_distribution<std::size_t> pd(0, downs.size() - 1);
    Face v = downs[pd(rng)];
    if (opposite) {
        std::vector<std::uint64_t>* ops = nullptr;
        std::vector<std::uint64_t> tmp;
        std::uint64_t vidx = X->index_of(v);
        if (op_cache) {
            auto it = op_cache->find(vidx);
            if (it == op_cache->end()) it = op_cache->emplace(vidx, neighborhoods(*X, v, k).op).first;
            ops = &it->second;
        } else {
            tmp = neighborhoods(*X, v, k).op;
            ops = &tmp;
        }
        std::uniform_int_distribution<std::size_t> po(0, ops->size() - 1);
        return (*ops)[po(rng)];
    }
    // parallel step, then up
    std::vector<int> freeD;
    for (int j = 0; j < X->t(); ++j)
        if (!v.is_gen(j)) freeD.push_back(j);
    std::uniform_int_distribution<std::size_t> pi(0, freeD.size() - 1);
    std::uniform_int_distribution<int> pa(0, X->degree() - 1);
    int j = freeD[pi(rng)];
    int a = pa(rng);
    Face v2 = v;
    v2.g = X->apply(j, a, v.g);
    v2.lab[j] = static_cast<std::int16_t>(1 - v.bit(j));
    auto ups = X->link_up(v2, k);
    std::uniform_int_distribution<std::size_t> pu(0, ups.size() - 1);
    return X->index_of(ups[pu(rng)]);
}

WalkSpectralData walk_spectral_data(const Complex& X) {
    WalkSpectralData out;
    out.lambda = 0.0;
    out.min_component = 2ull * X.group_size();
    for (int j = 0; j < X.t(); ++j) {
        std::vector<std::vector<std::uint32_t>> perms;
        for (int a = 0; a < X.degree(); ++a) {
            // rebuild the permutation array for generator a of direction j
            std::vector<std::uint32_t> p(X.group_size());
            for (std::uint32_t g = 0; g < X.group_size(); ++g) p[g] = X.apply(j, a, g);
            perms.push_back(std::move(p));
        }
        auto cover = double_cover_perms(X.group_size(), perms);
        auto rep = estimate_expansion(2 * X.group_size(), cover);
        out.lambda = std::max(out.lambda, rep.lambda_max);
        out.min_component = std::min(out.min_component, rep.min_component);
    }
    out.r = static_cast<double>(out.min_component) / (2.0 * static_cast<double>(X.group_size()));
    return out;
}

QuadFormResult quad_form_check(const Complex& X, const WalkOperator& W, const std::vector<char>& A, double lambda,
                               double r, std::uint64_t seed) {
    QuadFormResult res;
    std::uint64_t asize = 0;
    for (auto c : A)
        if (c) ++asize;
    double Xk = static_cast<double>(X.level_size(W.k));
    res.bound = lambda * static_cast<double>(asize) +
                static_cast<double>(binom(X.t(), W.l)) * std::pow(2.0, X.t() - W.l - 1) *
                    std::pow(static_cast<double>(X.degree()), W.l) * static_cast<double>(asize) *
                    static_cast<double>(asize) / (r * Xk);
    if (asize == 0) {
        res.lhs = 0.0;
        res.pass = true;
        return res;
    }
    if (W.matrix) {
        res.lhs = boost::rational_cast<double>(W.matrix->quad_form(A));
        res.pass = res.lhs <= res.bound + 1e-9;
        return res;
    }
    // Monte Carlo: hit rate of one walk step started uniformly inside A;
    // sample count chosen so the 99% Wilson interval is narrow next to the
    // normalized bound
    res.monte_carlo = true;
    double target = 0.05 * std::min(1.0, res.bound / static_cast<double>(asize));
    double z = 2.5758293035489004;
    std::uint64_t nsamp = static_cast<std::uint64_t>(std::min(1e7, std::max(1e4, z * z / (target * target * 4.0))));
    std::vector<std::uint64_t> members;
    for (std::size_t i = 0; i < A.size(); ++i)
        if (A[i]) members.push_back(i);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pm(0, members.size() - 1);
    std::map<std::uint64_t, std::vector<std::uint64_t>> cache;
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < nsamp; ++s) {
        std::uint64_t f = members[pm(rng)];
        std::uint64_t g = W.sample_step(f, rng, &cache);
        if (A[g]) ++hits;
    }
    double phat = static_cast<double>(hits) / static_cast<double>(nsamp);
    double denom = 1.0 + z * z / static_cast<double>(nsamp);
    double center = (phat + z * z / (2.0 * static_cast<double>(nsamp))) / denom;
    double half = z *
                  std::sqrt(phat * (1 - phat) / static_cast<double>(nsamp) +
                            z * z / (4.0 * static_cast<double>(nsamp) * static_cast<double>(nsamp))) /
                  denom;
    res.ci_low = center - half;
    res.ci_high = center + half;
    res.samples = nsamp;
    res.lhs = phat * static_cast<double>(asize);
    res.pass = res.ci_low * static_cast<double>(asize) <= res.bound;
    return res;
}

Report step_component_check(const Complex& X, int l, std::uint64_t seed, int samples) {
    Report rep;
    rep.suite = "walk-step-mixing";
    RatMat M = step_op(X, l);
    std::size_t nfaces = M.rows();
    // connected components of the step graph
    std::vector<std::size_t> parent(nfaces);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < nfaces; ++i)
        for (auto& [j, v] : M.row(i)) {
            (void)v;
            auto a = find(i), b = find(j);
            if (a != b) parent[a] = b;
        }
    std::map<std::size_t, std::vector<std::size_t>> comps;
    for (std::size_t i = 0; i < nfaces; ++i) comps[find(i)].push_back(i);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    bool all_ok = true;
    double worst_margin = 1e300;
    for (auto& [root, members] : comps) {
        (void)root;
        const std::size_t m = members.size();
        if (m < 2) continue;
        std::map<std::size_t, std::size_t> local;
        for (std::size_t i = 0; i < m; ++i) local[members[i]] = i;
        Eigen::MatrixXd Md = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
        for (std::size_t i = 0; i < m; ++i)
            for (auto& [j, v] : M.row(members[i]))
                Md(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(local[j])) +=
                    boost::rational_cast<double>(v);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Md, Eigen::EigenvaluesOnly);
        double lam = es.eigenvalues()(static_cast<Eigen::Index>(m) - 2);
        lam = std::max(lam, 0.0);
        for (int s = 0; s < samples; ++s) {
            Eigen::VectorXd x(static_cast<Eigen::Index>(m));
            for (std::size_t i = 0; i < m; ++i) x(static_cast<Eigen::Index>(i)) = nd(rng);
            double lhs = x.dot(Md * x);
            double rhs = lam * x.squaredNorm() +
                         std::pow(x.cwiseAbs().sum(), 2) / static_cast<double>(m);
            if (lhs > rhs + 1e-9) all_ok = false;
            worst_margin = std::min(worst_margin, rhs - lhs);
        }
    }
    rep.add("step-mixing-l" + std::to_string(l), "walks/step-mixing", all_ok,
            {{"l", l}, {"worst_margin", worst_margin}});
    return rep;
}

bool nb_multiset_check(const Complex& X, int k, int l, std::uint64_t a_kl) {
    if (!(0 <= l && l < k && k < X.t())) throw LevelOutOfRange("nb_multiset_check levels");
    std::map<std::uint64_t, std::vector<std::uint64_t>> nb_cache;
    for (std::uint64_t fi = 0; fi < X.level_size(k); ++fi) {
        Face vk = X.face_at(k, fi);
        std::map<std::uint64_t, std::uint64_t> lhs, rhs;
        for (auto& vm : X.link_down(vk, l + 1)) {
            std::uint64_t vmid = X.index_of(vm);
            auto it = nb_cache.find(vmid);
            if (it == nb_cache.end()) it = nb_cache.emplace(vmid, neighborhoods(X, vm, k).nb).first;
            for (auto f : it->second) lhs[f]++;
        }
        for (auto& vl : X.link_down(vk, l))
            for (auto& f : X.link_up(vl, k)) rhs[X.index_of(f)] += a_kl;
        for (auto& [f, c] : lhs) {
            auto it = rhs.find(f);
            if (it == rhs.end() || it->second < c) return false;
        }
    }
    return true;
}

} // namespace hdx
