#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "hdx/gf2e.hpp"

using namespace hdx;

TEST_CASE("field construction basics") {
    Field F2(1);
    CHECK(F2.q() == 2);
    CHECK(F2.selfdual_basis() == std::vector<felem>{1});

    Field F4(2);
    CHECK(F4.q() == 4);
    CHECK(F4.modulus() == 0b111); // x^2 + x + 1

    CHECK_THROWS_AS(Field(17), DegreeOutOfRange);
    CHECK_THROWS_AS(Field(0), DegreeOutOfRange);
}

TEST_CASE("GF(4) self-dual basis matches exhaustive basis enumeration") {
    Field F(2);
    // enumerate all ordered bases (a,b) of GF(4) and keep the trace-orthonormal ones
    std::set<std::set<felem>> good;
    int ordered = 0;
    for (felem a = 1; a < 4; ++a)
        for (felem b = 1; b < 4; ++b) {
            if (a == b) continue;
            ++ordered;
            if (F.trace(F.mul(a, a)) == 1 && F.trace(F.mul(b, b)) == 1 && F.trace(F.mul(a, b)) == 0)
                good.insert({a, b});
        }
    CHECK(ordered == 6);
    REQUIRE(good.size() == 1);
    // the unique self-dual basis is {w, w^2} = {2, 3} with modulus x^2+x+1
    CHECK(*good.begin() == std::set<felem>{2, 3});
    std::set<felem> ours(F.selfdual_basis().begin(), F.selfdual_basis().end());
    CHECK(ours == *good.begin());
}

TEST_CASE("field axioms hold on random triples for every supported degree") {
    for (int e = 1; e <= 16; ++e) {
        Field F(e);
        std::mt19937_64 rng(42 + e);
        std::uniform_int_distribution<std::uint32_t> d(0, F.q() - 1);
        for (int it = 0; it < 1000; ++it) {
            felem a = static_cast<felem>(d(rng)), b = static_cast<felem>(d(rng)), c = static_cast<felem>(d(rng));
            CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
            CHECK(F.add(a, a) == 0);
            if (a != 0) CHECK(F.pow(a, F.q() - 1) == 1);
        }
        // self-dual property, exact
        auto& bs = F.selfdual_basis();
        for (int i = 0; i < e; ++i)
            for (int j = 0; j < e; ++j)
                CHECK(F.trace(F.mul(bs[i], bs[j])) == (i == j ? 1 : 0));
    }
}

TEST_CASE("kernel_basis oracle values") {
    Field F(1);

    SUBCASE("[1 1 1] has kernel of size 2, verified against full enumeration") {
        Mat M(1, 3);
        M.set(0, 0, 1); M.set(0, 1, 1); M.set(0, 2, 1);
        auto K = kernel_basis(F, M);
        CHECK(K.size() == 2);
        for (auto& v : K) CHECK(M.apply(F, v).is_zero());
        // oracle: enumerate all 8 vectors
        int in_kernel = 0;
        for (int bits = 0; bits < 8; ++bits) {
            Vec v(3);
            for (int i = 0; i < 3; ++i) v[i] = (bits >> i) & 1;
            if (M.apply(F, v).is_zero()) ++in_kernel;
        }
        CHECK(in_kernel == 4); // 2^dim
    }

    SUBCASE("identity has empty kernel") {
        auto K = kernel_basis(F, Mat::identity(3));
        CHECK(K.empty());
    }

    SUBCASE("zero 2x3 map has full kernel") {
        auto K = kernel_basis(F, Mat::zero(2, 3));
        CHECK(K.size() == 3);
    }
}

TEST_CASE("solve_linear oracle values") {
    Field F(1);

    SUBCASE("2x2 system, checked against 4-case enumeration") {
        Mat M(2, 2);
        M.set(0, 0, 1); M.set(0, 1, 1); M.set(1, 1, 1);
        Vec b{1, 1};
        auto x = solve_linear(F, M, b);
        REQUIRE(x.has_value());
        CHECK(M.apply(F, *x) == b);
        // enumeration says (0,1) is the unique solution
        CHECK((*x)[0] == 0);
        CHECK((*x)[1] == 1);
    }

    SUBCASE("zero rhs gives zero solution") {
        std::mt19937_64 rng(7);
        Field F4(2);
        Mat M = Mat::random(F4, 4, 6, rng);
        auto x = solve_linear(F4, M, Vec(4));
        REQUIRE(x.has_value());
        CHECK(x->is_zero());
    }

    SUBCASE("unsolvable system") {
        Mat M(1, 1); // [0]
        Vec b{1};
        CHECK(!solve_linear(F, M, b).has_value());
    }
}

TEST_CASE("rank + kernel dimension = column count") {
    std::mt19937_64 rng(19);
    for (int e : {1, 2, 3}) {
        Field F(e);
        for (int it = 0; it < 20; ++it) {
            std::uniform_int_distribution<std::size_t> dim(1, 12);
            Mat M = Mat::random(F, dim(rng), dim(rng), rng);
            CHECK(rank(F, M) + kernel_basis(F, M).size() == M.cols());
        }
    }
}

TEST_CASE("binary expansion") {
    SUBCASE("degree 1 leaves binary matrices unchanged") {
        Field F(1);
        std::mt19937_64 rng(3);
        Mat M = Mat::random(F, 4, 5, rng);
        CHECK(f2_expand(F, M) == M);
    }

    SUBCASE("multiplication-by-w over GF(4) gives B with B != I, B^3 = I") {
        Field F(2);
        Mat M(1, 1);
        M.set(0, 0, 2); // a generator of GF(4)*
        Mat B = f2_expand(F, M);
        CHECK(B.rows() == 2);
        CHECK(!(B == Mat::identity(2)));
        Mat B3 = B.mul(F, B).mul(F, B);
        CHECK(B3 == Mat::identity(2));
    }

    SUBCASE("transpose commutes with expansion on 100 random 4x5 GF(4) matrices") {
        Field F(2);
        std::mt19937_64 rng(11);
        for (int it = 0; it < 100; ++it) {
            Mat M = Mat::random(F, 4, 5, rng);
            CHECK(f2_expand(F, M.transpose()) == f2_expand(F, M).transpose());
        }
    }

    SUBCASE("expansion is functorial on random conformable products") {
        for (int e : {2, 3, 4}) {
            Field F(e);
            std::mt19937_64 rng(100 + e);
            for (int it = 0; it < 25; ++it) {
                Mat A = Mat::random(F, 3, 4, rng);
                Mat B = Mat::random(F, 4, 2, rng);
                Field F2(1);
                CHECK(f2_expand(F, A.mul(F, B)) == f2_expand(F, A).mul(F2, f2_expand(F, B)));
            }
        }
    }

    SUBCASE("a non-self-dual basis keeps functoriality but breaks transpose compatibility") {
        Field F(3);
        std::vector<felem> poly_basis{1, 2, 4}; // {1, x, x^2}, not trace-orthonormal
        Field F2(1);
        std::mt19937_64 rng(23);
        bool all_transpose_ok = true;
        for (int it = 0; it < 20; ++it) {
            Mat A = Mat::random(F, 2, 3, rng);
            Mat B = Mat::random(F, 3, 2, rng);
            CHECK(f2_expand_with_basis(F, A.mul(F, B), poly_basis) ==
                  f2_expand_with_basis(F, A, poly_basis).mul(F2, f2_expand_with_basis(F, B, poly_basis)));
            if (!(f2_expand_with_basis(F, A.transpose(), poly_basis) ==
                  f2_expand_with_basis(F, A, poly_basis).transpose()))
                all_transpose_ok = false;
        }
        CHECK(!all_transpose_ok);
    }
}

TEST_CASE("RowSpan membership") {
    Field F(2);
    std::mt19937_64 rng(5);
    Mat M = Mat::random(F, 4, 7, rng);
    RowSpan span(F, 7);
    for (std::size_t i = 0; i < 4; ++i) {
        Vec r(7);
        for (std::size_t j = 0; j < 7; ++j) r[j] = M.at(i, j);
        span.add(r);
    }
    CHECK(span.dim() == rank(F, M));
    // random combinations are members
    std::uniform_int_distribution<std::uint32_t> d(0, 3);
    for (int it = 0; it < 50; ++it) {
        Vec v(7);
        for (std::size_t i = 0; i < 4; ++i) {
            Vec r(7);
            for (std::size_t j = 0; j < 7; ++j) r[j] = M.at(i, j);
            v.add_scaled(F, r, static_cast<felem>(d(rng)));
        }
        CHECK(span.contains(v));
    }
}

TEST_CASE("SpanIter visits the whole span exactly once") {
    Field F(1);
    std::vector<Vec> basis;
    basis.push_back(Vec{1, 0, 1, 0});
    basis.push_back(Vec{0, 1, 1, 0});
    basis.push_back(Vec{0, 0, 0, 1});
    SpanIter it(F, basis, 4);
    std::set<std::vector<felem>> seen;
    do { seen.insert(it.current().data()); } while (it.next());
    CHECK(seen.size() == 8);

    Field F4(2);
    std::vector<Vec> b4;
    b4.push_back(Vec{1, 0});
    b4.push_back(Vec{0, 3});
    SpanIter it4(F4, b4, 2);
    std::set<std::vector<felem>> seen4;
    do { seen4.insert(it4.current().data()); } while (it4.next());
    CHECK(seen4.size() == 16);
}
