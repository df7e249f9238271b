#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qext/linalg.hpp"

using namespace qext;

namespace {

Mat fromInts(const FieldPtr& f, std::vector<std::vector<long>> rows) {
    Mat m;
    for (auto& r : rows) {
        Vec v;
        for (long x : r) v.push_back(f->integer(x));
        m.push_back(std::move(v));
    }
    return m;
}

}  // namespace

TEST_CASE("rank and kernel over rationals") {
    auto f = Field::create(1, {});
    Mat a = fromInts(f, {{1, 2, 3}, {2, 4, 6}, {1, 0, 1}});
    CHECK(matRank(a, f, 3) == 2);
    Mat k = kernelBasis(a, f, 3);
    REQUIRE(k.size() == 1);
    for (const auto& row : a) CHECK(dot(row, k[0]).isZero());
}

TEST_CASE("determinant and inverse") {
    auto f = Field::create(1, {});
    Mat a = fromInts(f, {{2, 1}, {5, 3}});
    CHECK(matDet(a, f) == f->one());
    auto inv = matInverse(a, f);
    REQUIRE(inv.has_value());
    CHECK(matEqual(matMul(a, *inv, f), matIdentity(f, 2)));
    Mat sing = fromInts(f, {{1, 2}, {2, 4}});
    CHECK(matDet(sing, f).isZero());
    CHECK_FALSE(matInverse(sing, f).has_value());
}

TEST_CASE("det with symbolic entries") {
    auto f = Field::create(1, {});
    Scalar q = f->uPow(1);
    // [[q, 1], [1, q^{-1}]] is singular
    Mat a{{q, f->one()}, {f->one(), q.inverse()}};
    CHECK(matDet(a, f).isZero());
    Mat b{{q, f->one()}, {f->one(), q}};
    CHECK(matDet(b, f) == q * q - f->one());
}

TEST_CASE("solve") {
    auto f = Field::create(1, {});
    Mat a = fromInts(f, {{1, 1}, {1, -1}});
    Vec b{f->integer(3), f->integer(1)};
    auto x = solve(a, b, f);
    REQUIRE(x.has_value());
    CHECK((*x)[0] == f->integer(2));
    CHECK((*x)[1] == f->one());
    // inconsistent system
    Mat c = fromInts(f, {{1, 1}, {2, 2}});
    Vec d{f->integer(1), f->integer(3)};
    CHECK_FALSE(solve(c, d, f).has_value());
    // underdetermined: any solution is fine, verify by substitution
    Mat u = fromInts(f, {{1, 2, 3}});
    Vec w{f->integer(6)};
    auto y = solve(u, w, f);
    REQUIRE(y.has_value());
    CHECK(dot(u[0], *y) == f->integer(6));
}

TEST_CASE("row span incremental basis with coefficients") {
    auto f = Field::create(1, {});
    RowSpan span(f, 3, true);
    Vec r0{f->integer(1), f->integer(2), f->integer(0)};
    Vec r1{f->integer(2), f->integer(4), f->integer(0)};  // dependent on r0
    Vec r2{f->integer(0), f->integer(1), f->integer(1)};
    CHECK(span.add(r0));
    CHECK_FALSE(span.add(r1));
    CHECK(span.add(r2));
    CHECK(span.rank() == 2);
    CHECK(span.contains(r1));
    Vec probe{f->integer(3), f->integer(7), f->integer(1)};  // 3*r0 + r2
    auto c = span.expressInAdded(probe);
    REQUIRE(c.has_value());
    REQUIRE(c->size() == 3);
    CHECK((*c)[0] == f->integer(3));
    CHECK((*c)[1].isZero());
    CHECK((*c)[2] == f->one());
    Vec outside{f->integer(0), f->integer(0), f->integer(0)};
    outside[0] = f->one();
    CHECK_FALSE(span.expressInAdded(outside).has_value());
}

TEST_CASE("randomized inverse round trip") {
    auto f = Field::create(2, {});
    std::mt19937_64 rng(424242);
    std::uniform_int_distribution<long> d(-3, 3);
    int successes = 0;
    for (int iter = 0; iter < 40; ++iter) {
        int n = 1 + iter % 4;
        Mat a;
        for (int i = 0; i < n; ++i) {
            Vec row;
            for (int j = 0; j < n; ++j) {
                Scalar s = f->integer(d(rng));
                if ((i + j) % 3 == 0) s += f->uPow(d(rng));
                row.push_back(s);
            }
            a.push_back(std::move(row));
        }
        Scalar det = matDet(a, f);
        auto inv = matInverse(a, f);
        CHECK(det.isZero() != inv.has_value());
        if (inv) {
            CHECK(matEqual(matMul(a, *inv, f), matIdentity(f, n)));
            CHECK(matEqual(matMul(*inv, a, f), matIdentity(f, n)));
            ++successes;
        }
    }
    CHECK(successes > 10);
}
