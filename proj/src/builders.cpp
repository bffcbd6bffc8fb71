#include "hdx/builders.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace hdx {

std::vector<PermSet> cyclic_perms(std::uint32_t N, const std::vector<std::vector<std::uint32_t>>& shifts) {
    std::vector<PermSet> sets;
    for (auto& dir : shifts) {
        PermSet S;
        for (auto s : dir) {
            std::vector<std::uint32_t> p(N);
            for (std::uint32_t g = 0; g < N; ++g) p[g] = (g + s) % N;
            S.perms.push_back(std::move(p));
        }
        sets.push_back(std::move(S));
    }
    return sets;
}

std::pair<std::uint32_t, std::vector<PermSet>> group_z2e(int m, const std::vector<std::vector<std::uint32_t>>& gens) {
    if (m < 1 || m > 25) throw SizeMismatch("rank out of range");
    std::uint32_t N = 1u << m;
    std::vector<PermSet> sets;
    for (std::size_t j = 0; j < gens.size(); ++j) {
        std::set<std::uint32_t> seen;
        PermSet S;
        for (auto v : gens[j]) {
            if (v >= N) throw SizeMismatch("generator out of range");
            if (!seen.insert(v).second)
                throw DuplicateGenerator("duplicate generator in direction " + std::to_string(j));
            std::vector<std::uint32_t> p(N);
            for (std::uint32_t g = 0; g < N; ++g) p[g] = g ^ v;
            S.perms.push_back(std::move(p));
        }
        sets.push_back(std::move(S));
    }
    return {N, std::move(sets)};
}

std::vector<std::vector<std::uint32_t>> random_z2e_generators(int m, int t, int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> d(1, (1u << m) - 1);
    std::vector<std::vector<std::uint32_t>> out(static_cast<std::size_t>(t));
    for (auto& dir : out) {
        std::set<std::uint32_t> s;
        while (static_cast<int>(s.size()) < n) s.insert(d(rng));
        dir.assign(s.begin(), s.end());
    }
    return out;
}

std::uint32_t AbelianGroup::add(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t out = 0, mul = 1;
    for (auto f : factors) {
        std::uint32_t xa = a % f, xb = b % f;
        a /= f;
        b /= f;
        out += ((xa + xb) % f) * mul;
        mul *= f;
    }
    return out;
}

std::uint32_t AbelianGroup::neg(std::uint32_t a) const {
    std::uint32_t out = 0, mul = 1;
    for (auto f : factors) {
        std::uint32_t xa = a % f;
        a /= f;
        out += ((f - xa) % f) * mul;
        mul *= f;
    }
    return out;
}

std::uint32_t AbelianGroup::from_tuple(const std::vector<std::int64_t>& v) const {
    if (v.size() != factors.size()) throw SizeMismatch("H element arity mismatch");
    std::uint32_t out = 0, mul = 1;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        std::int64_t f = static_cast<std::int64_t>(factors[i]);
        std::int64_t x = ((v[i] % f) + f) % f;
        out += static_cast<std::uint32_t>(x) * mul;
        mul *= factors[i];
    }
    return out;
}

std::pair<std::uint32_t, std::vector<PermSet>> abelian_lift_product(const AbelianGroup& H, const BaseGraphSpec& base,
                                                                    int t) {
    const std::uint32_t V = base.vertices;
    const int n = base.n;
    if (V == 0 || n <= 0) throw BadBaseGraph("empty base graph");

    // matching partner and H-label per (vertex, factor)
    std::vector<std::vector<std::int64_t>> none;
    std::vector<std::vector<std::uint32_t>> partner(static_cast<std::size_t>(n),
                                                    std::vector<std::uint32_t>(V, UINT32_MAX));
    std::vector<std::vector<std::uint32_t>> hlab(static_cast<std::size_t>(n), std::vector<std::uint32_t>(V, 0));
    for (auto& e : base.edges) {
        if (e.u >= V || e.v >= V || e.u == e.v) throw BadBaseGraph("bad edge endpoints");
        if (e.factor < 0 || e.factor >= n) throw BadBaseGraph("factor index out of range");
        auto& P = partner[static_cast<std::size_t>(e.factor)];
        auto& L = hlab[static_cast<std::size_t>(e.factor)];
        if (P[e.u] != UINT32_MAX || P[e.v] != UINT32_MAX)
            throw NotRegular("vertex has two edges in factor " + std::to_string(e.factor));
        std::uint32_t s = H.from_tuple(e.label);
        std::uint32_t s_rev = e.label_rev ? H.from_tuple(*e.label_rev) : H.neg(s);
        if (s_rev != H.neg(s))
            throw LiftAssignmentMismatch("reverse label is not the inverse on edge (" + std::to_string(e.u) + "," +
                                         std::to_string(e.v) + ")");
        P[e.u] = e.v;
        P[e.v] = e.u;
        L[e.u] = s;     // label for orientation u -> v
        L[e.v] = s_rev; // label for orientation v -> u
    }
    for (int i = 0; i < n; ++i)
        for (std::uint32_t v = 0; v < V; ++v)
            if (partner[static_cast<std::size_t>(i)][v] == UINT32_MAX)
                throw NotRegular("vertex " + std::to_string(v) + " missing factor " + std::to_string(i));

    // connectivity of the base graph
    {
        std::vector<char> vis(V, 0);
        std::vector<std::uint32_t> stack{0};
        vis[0] = 1;
        std::uint32_t seen = 1;
        while (!stack.empty()) {
            auto u = stack.back();
            stack.pop_back();
            for (int i = 0; i < n; ++i) {
                auto w = partner[static_cast<std::size_t>(i)][u];
                if (!vis[w]) {
                    vis[w] = 1;
                    ++seen;
                    stack.push_back(w);
                }
            }
        }
        if (seen != V) throw BadBaseGraph("base graph is not connected");
    }

    // G = H x V0^t, index = h + |H| * (v_1 + V*(v_2 + ...))
    const std::uint32_t hs = H.size();
    std::uint64_t total = hs;
    for (int j = 0; j < t; ++j) {
        total *= V;
        if (total > (1ull << 31)) throw SizeMismatch("lifted group too large");
    }
    const std::uint32_t N = static_cast<std::uint32_t>(total);

    auto decode = [&](std::uint32_t g, std::uint32_t& h, std::vector<std::uint32_t>& vs) {
        h = g % hs;
        g /= hs;
        for (int j = 0; j < t; ++j) {
            vs[static_cast<std::size_t>(j)] = g % V;
            g /= V;
        }
    };
    auto encode = [&](std::uint32_t h, const std::vector<std::uint32_t>& vs) {
        std::uint32_t g = 0;
        for (int j = t - 1; j >= 0; --j) g = g * V + vs[static_cast<std::size_t>(j)];
        return g * hs + h;
    };

    std::vector<PermSet> sets(static_cast<std::size_t>(t));
    for (int j = 0; j < t; ++j) {
        for (int i = 0; i < n; ++i) {
            std::vector<std::uint32_t> p(N);
            std::vector<std::uint32_t> vs(static_cast<std::size_t>(t));
            for (std::uint32_t g = 0; g < N; ++g) {
                std::uint32_t h;
                decode(g, h, vs);
                std::uint32_t vj = vs[static_cast<std::size_t>(j)];
                std::uint32_t s = hlab[static_cast<std::size_t>(i)][vj];
                vs[static_cast<std::size_t>(j)] = partner[static_cast<std::size_t>(i)][vj];
                p[g] = encode(H.add(s, h), vs);
                vs[static_cast<std::size_t>(j)] = vj;
            }
            sets[static_cast<std::size_t>(j)].perms.push_back(std::move(p));
        }
    }
    return {N, std::move(sets)};
}

std::vector<std::vector<std::uint32_t>> double_cover_perms(std::uint32_t N,
                                                           const std::vector<std::vector<std::uint32_t>>& perms) {
    std::vector<std::vector<std::uint32_t>> out;
    for (auto& p : perms) {
        std::vector<std::uint32_t> q(2 * N);
        for (std::uint32_t g = 0; g < N; ++g) {
            q[g] = p[g] + N;
            q[g + N] = p[g];
        }
        out.push_back(std::move(q));
    }
    return out;
}

ExpansionReport estimate_expansion(std::uint32_t N, const std::vector<std::vector<std::uint32_t>>& perms,
                                   std::size_t dense_limit) {
    ExpansionReport rep;
    const std::size_t n = perms.size();
    if (n == 0 || N == 0) throw SizeMismatch("empty graph");

    // symmetric + doubly stochastic: the multiset of arcs must be symmetric
    {
        std::map<std::pair<std::uint32_t, std::uint32_t>, int> arc;
        for (auto& p : perms)
            for (std::uint32_t g = 0; g < N; ++g) arc[{g, p[g]}]++;
        rep.stochastic_ok = true;
        for (auto& [k, c] : arc) {
            auto it = arc.find({k.second, k.first});
            if (it == arc.end() || it->second != c) rep.stochastic_ok = false;
        }
    }

    // connected components (union-find)
    std::vector<std::uint32_t> parent(N);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto& p : perms)
        for (std::uint32_t g = 0; g < N; ++g) {
            auto a = find(g), b = find(p[g]);
            if (a != b) parent[a] = b;
        }
    std::map<std::uint32_t, std::vector<std::uint32_t>> comps;
    for (std::uint32_t g = 0; g < N; ++g) comps[find(g)].push_back(g);

    rep.lambda_max = 0.0;
    rep.min_component = N;
    for (auto& [root, members] : comps) {
        (void)root;
        ComponentStat st;
        st.size = members.size();
        rep.min_component = std::min<std::uint64_t>(rep.min_component, st.size);
        const std::size_t m = members.size();
        std::map<std::uint32_t, std::size_t> local;
        for (std::size_t i = 0; i < m; ++i) local[members[i]] = i;

        if (m == 1) {
            st.lambda = 0.0;
        } else if (m <= dense_limit) {
            Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
            for (auto& p : perms)
                for (std::size_t i = 0; i < m; ++i)
                    M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(local[p[members[i]]])) +=
                        1.0 / static_cast<double>(n);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
            auto ev = es.eigenvalues(); // ascending
            st.lambda = std::abs(ev(static_cast<Eigen::Index>(m) - 2));
        } else {
            // power iteration on (M+I)/2 with all-ones deflation; fixed point
            // is the second-largest signed eigenvalue of M
            std::vector<double> x(m), y(m);
            std::mt19937_64 rng(12345);
            std::normal_distribution<double> nd;
            for (auto& xi : x) xi = nd(rng);
            auto deflate = [&](std::vector<double>& v) {
                double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(m);
                for (auto& vi : v) vi -= mean;
            };
            auto norm2 = [&](const std::vector<double>& v) {
                double s = 0;
                for (auto vi : v) s += vi * vi;
                return std::sqrt(s);
            };
            deflate(x);
            double nx = norm2(x);
            for (auto& xi : x) xi /= nx;
            double lam = 0.0;
            bool converged = false;
            for (int it = 0; it < 100000; ++it) {
                std::fill(y.begin(), y.end(), 0.0);
                for (auto& p : perms)
                    for (std::size_t i = 0; i < m; ++i) y[local[p[members[i]]]] += x[i] / static_cast<double>(n);
                // shifted operator (M+I)/2 keeps the spectrum nonnegative
                for (std::size_t i = 0; i < m; ++i) y[i] = 0.5 * (y[i] + x[i]);
                deflate(y);
                double ny = norm2(y);
                if (ny < 1e-300) { lam = 0.0; converged = true; break; }
                for (auto& yi : y) yi /= ny;
                // Rayleigh residual for M at the implied eigenvalue
                double ray = 0.0;
                std::vector<double> Mx(m, 0.0);
                for (auto& p : perms)
                    for (std::size_t i = 0; i < m; ++i) Mx[local[p[members[i]]]] += y[i] / static_cast<double>(n);
                for (std::size_t i = 0; i < m; ++i) ray += y[i] * Mx[i];
                double resid = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    double d = Mx[i] - ray * y[i];
                    resid += d * d;
                }
                x = y;
                lam = ray;
                if (std::sqrt(resid) < 1e-9) { converged = true; break; }
            }
            if (!converged) throw ConvergenceFailure("power iteration did not reach tolerance");
            st.lambda = std::abs(lam);
        }
        rep.lambda_max = std::max(rep.lambda_max, st.lambda);
        rep.components.push_back(st);
    }
    rep.r = static_cast<double>(rep.min_component) / static_cast<double>(N);
    return rep;
}

} // namespace hdx
