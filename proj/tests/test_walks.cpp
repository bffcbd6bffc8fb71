#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "hdx/builders.hpp"
#include "hdx/walks.hpp"

using namespace hdx;
using doctest::Approx;

namespace {

Complex z4_line() { return Complex::build(4, cyclic_perms(4, {{1, 3, 2}})); }

Complex t2_n3_N4() {
    auto [N, sets] = group_z2e(2, {{1, 2, 3}, {1, 2, 3}});
    return Complex::build(N, std::move(sets));
}

Complex t3_n2_N8() {
    auto [N, sets] = group_z2e(3, {{1, 2}, {3, 4}, {5, 6}});
    return Complex::build(N, std::move(sets));
}

} // namespace

TEST_CASE("down/up averaging operators") {
    Complex X = t2_n3_N4();

    SUBCASE("down applied to constant gives constant") {
        RatMat D = down_op(X, 0);
        CHECK(D.rows_sum_to(Rat(1)));
        RatMat U = up_op(X, 1);
        CHECK(U.rows_sum_to(Rat(1)));
    }

    SUBCASE("adjointness under uniform measures on 100 random pairs") {
        std::mt19937_64 rng(5);
        std::normal_distribution<double> nd;
        RatMat D = down_op(X, 0); // functions on X(1) -> X(0)
        RatMat U = up_op(X, 1);   // functions on X(0) -> X(1)
        const std::size_t n0 = X.level_size(0), n1 = X.level_size(1);
        for (int it = 0; it < 100; ++it) {
            std::vector<double> phi(n1), psi(n0);
            for (auto& x : phi) x = nd(rng);
            for (auto& x : psi) x = nd(rng);
            auto Dphi = D.apply(phi);
            auto Upsi = U.apply(psi);
            double lhs = 0, rhs = 0;
            for (std::size_t i = 0; i < n0; ++i) lhs += psi[i] * Dphi[i];
            lhs /= static_cast<double>(n0);
            for (std::size_t i = 0; i < n1; ++i) rhs += Upsi[i] * phi[i];
            rhs /= static_cast<double>(n1);
            CHECK(lhs == Approx(rhs).epsilon(1e-12));
        }
    }

    SUBCASE("up on a vertex indicator puts 1/(2l) per covering slot") {
        RatMat U = up_op(X, 1);
        // each edge row has exactly two entries of 1/2
        for (std::size_t r = 0; r < U.rows(); ++r) {
            CHECK(U.row(r).size() == 2);
            for (auto& [c, v] : U.row(r)) {
                (void)c;
                CHECK(v == Rat(1, 2));
            }
        }
    }
}

TEST_CASE("neighborhood partition") {
    Complex X = t2_n3_N4();

    SUBCASE("t=1 vertex: opposite endpoints, no proper neighbors") {
        Complex L = z4_line();
        Face v{};
        v.g = 0;
        v.lab[0] = 0;
        auto ns = neighborhoods(L, v, 0);
        CHECK(ns.partition_ok);
        CHECK(ns.nb.empty());
        CHECK(!ns.op.empty());
        CHECK(ns.link.size() == 1);
    }

    SUBCASE("partition holds for every (v, k) pair on a t=2 instance") {
        for (int l = 0; l < 2; ++l)
            for (int k = l; k < 2; ++k)
                for (std::uint64_t vi = 0; vi < X.level_size(l); ++vi) {
                    auto ns = neighborhoods(X, X.face_at(l, vi), k);
                    CHECK(ns.partition_ok);
                }
    }

    SUBCASE("t=2 vertex at k=1: hand-counted opposite set size") {
        Face v{};
        v.g = 0;
        auto ns = neighborhoods(X, v, 1);
        // (d o u) X_{>=v}(1): edges of squares containing v; the parallel
        // edge of each square avoids v, direction-crossing ones meet it
        CHECK(ns.partition_ok);
        std::set<std::uint64_t> seen(ns.op.begin(), ns.op.end());
        CHECK(seen.size() == ns.op.size());
        // each of the 9 squares above v contributes its opposite edges;
        // explicit enumeration cross-check
        std::uint64_t byhand = 0;
        for (auto& sq : X.link_up(v, 2)) {
            for (auto& e : X.covers_down(sq)) {
                auto everts = X.face_vertices(e.face);
                auto vverts = X.face_vertices(v);
                bool meets = false;
                for (auto w : everts)
                    if (w == vverts[0]) meets = true;
                if (!meets && !X.leq(v, e.face)) ++byhand;
            }
        }
        // byhand counts with multiplicity across squares; op is a set
        CHECK(byhand >= seen.size());
    }
}

TEST_CASE("a_coeff") {
    SUBCASE("k=t-1 gives 1") {
        Complex X = t2_n3_N4();
        CHECK(a_coeff(X, 1, 0) == 1);
        Complex Y = t3_n2_N8();
        CHECK(a_coeff(Y, 2, 0) == 1);
        CHECK(a_coeff(Y, 2, 1) == 1);
    }

    SUBCASE("t=3 interior value bounded by 2^t") {
        Complex Y = t3_n2_N8();
        auto a10 = a_coeff(Y, 1, 0);
        CHECK(a10 >= 1);
        CHECK(a10 <= (1u << 3));
    }
}

TEST_CASE("walk operators") {
    Complex X = t2_n3_N4();

    SUBCASE("W is symmetric doubly stochastic, exact") {
        for (int k = 0; k < 2; ++k)
            for (int l = 0; l <= k; ++l) {
                auto W = walk_W(X, k, l);
                REQUIRE(W.matrix.has_value());
                CHECK(W.matrix->rows_sum_to(Rat(1)));
                CHECK(W.matrix->is_symmetric());
            }
    }

    SUBCASE("adjacency normalization is integral") {
        auto W = walk_W(X, 1, 0);
        RatMat adj = W.matrix->scaled(Rat(static_cast<long long>(W.normalization)));
        CHECK(adj.is_integral());
    }

    SUBCASE("k=l=0, t=1: walk spectrum matches the double cover spectrum") {
        Complex L = z4_line();
        auto W = walk_W(L, 0, 0);
        REQUIRE(W.matrix.has_value());
        CHECK(W.matrix->rows_sum_to(Rat(1)));
        CHECK(W.matrix->is_symmetric());
        // the walk IS the double cover walk: one step from (g;b) goes to
        // (a(g); 1-b); compare transition rows directly
        std::vector<std::vector<std::uint32_t>> perms;
        for (int a = 0; a < 3; ++a) {
            std::vector<std::uint32_t> p(4);
            for (std::uint32_t g = 0; g < 4; ++g) p[g] = L.apply(0, a, g);
            perms.push_back(std::move(p));
        }
        auto cover = double_cover_perms(4, perms);
        for (std::uint64_t vi = 0; vi < L.level_size(0); ++vi) {
            Face v = L.face_at(0, vi);
            std::uint32_t cv = v.g + (v.bit(0) ? 4 : 0);
            std::map<std::uint32_t, int> counts;
            for (auto& p : cover) counts[p[cv]]++;
            for (auto& [w, c] : counts) {
                Face wf{};
                wf.g = w % 4;
                wf.lab[0] = static_cast<std::int16_t>(w / 4);
                CHECK(W.matrix->at(vi, L.index_of(wf)) == Rat(c, 3));
            }
        }
    }

    SUBCASE("Op_adj <= W_adj entrywise and on indicator forms") {
        for (int k = 0; k < 2; ++k)
            for (int l = 0; l <= k; ++l) {
                auto W = walk_W(X, k, l);
                RatMat wadj = W.matrix->scaled(Rat(static_cast<long long>(W.normalization)));
                RatMat oadj = op_adjacency(X, k, l);
                bool le = true;
                for (std::size_t r = 0; r < oadj.rows(); ++r)
                    for (auto& [c, v] : oadj.row(r))
                        if (v > wadj.at(r, c)) le = false;
                CHECK(le);
                std::mt19937_64 rng(42);
                std::bernoulli_distribution half(0.3);
                for (int rep = 0; rep < 20; ++rep) {
                    std::vector<char> A(X.level_size(k));
                    for (auto& a : A) a = half(rng);
                    CHECK(oadj.quad_form(A) <= wadj.quad_form(A));
                }
            }
    }
}

TEST_CASE("walk expansion bound") {
    Complex X = t2_n3_N4();
    auto spec_data = walk_spectral_data(X);

    SUBCASE("empty set trivially passes") {
        auto W = walk_W(X, 1, 0);
        std::vector<char> A(X.level_size(1), 0);
        auto res = quad_form_check(X, W, A, spec_data.lambda, spec_data.r);
        CHECK(res.pass);
        CHECK(res.lhs == 0.0);
    }

    SUBCASE("full set passes") {
        auto W = walk_W(X, 1, 0);
        std::vector<char> A(X.level_size(1), 1);
        auto res = quad_form_check(X, W, A, spec_data.lambda, spec_data.r);
        CHECK(res.pass);
    }

    SUBCASE("random and adversarial link sets never violate the bound") {
        std::mt19937_64 rng(7);
        for (int k = 0; k < 2; ++k)
            for (int l = 0; l <= k; ++l) {
                auto W = walk_W(X, k, l);
                for (double dens : {0.05, 0.2, 0.5}) {
                    std::bernoulli_distribution b(dens);
                    for (int rep = 0; rep < 30; ++rep) {
                        std::vector<char> A(X.level_size(k));
                        for (auto& a : A) a = b(rng);
                        auto res = quad_form_check(X, W, A, spec_data.lambda, spec_data.r);
                        CHECK(res.pass);
                    }
                }
                // links of vertices as adversarial sets
                for (std::uint64_t vi = 0; vi < X.level_size(0); vi += 3) {
                    std::vector<char> A(X.level_size(k), 0);
                    for (auto& f : X.link_up(X.face_at(0, vi), k)) A[X.index_of(f)] = 1;
                    auto res = quad_form_check(X, W, A, spec_data.lambda, spec_data.r);
                    CHECK(res.pass);
                }
            }
    }

    SUBCASE("sampler mode agrees within its confidence interval") {
        auto Wm = walk_W(X, 1, 0);
        auto Ws = walk_W(X, 1, 0, /*explicit_limit=*/0);
        CHECK(!Ws.matrix.has_value());
        std::mt19937_64 rng(11);
        std::bernoulli_distribution b(0.3);
        std::vector<char> A(X.level_size(1));
        for (auto& a : A) a = b(rng);
        auto exact = quad_form_check(X, Wm, A, spec_data.lambda, spec_data.r);
        auto mc = quad_form_check(X, Ws, A, spec_data.lambda, spec_data.r, 99);
        CHECK(mc.monte_carlo);
        std::uint64_t asize = 0;
        for (auto c : A)
            if (c) ++asize;
        double truth = exact.lhs / static_cast<double>(asize);
        CHECK(mc.ci_low <= truth);
        CHECK(truth <= mc.ci_high);
        CHECK(mc.pass);
    }
}

TEST_CASE("step operator component mixing bound") {
    Complex X = t2_n3_N4();
    CHECK(step_component_check(X, 0, 3).all_pass());
    CHECK(step_component_check(X, 1, 4).all_pass());
    Complex Y = t3_n2_N8();
    CHECK(step_component_check(Y, 0, 5).all_pass());
}
