#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <tuple>

#include "qext/forms.hpp"
#include "qext/modules.hpp"
#include "qext/oracle.hpp"

using namespace qext;

namespace {

RootDataPtr rdOf(LieType t, int rank) { return std::make_shared<RootData>(t, rank); }

// one relation-free character generator per simple root, dual to them
FieldPtr symbolicWeightField(const RootData& rd) {
    std::vector<CharGen> gens;
    for (int i = 0; i < rd.rank(); ++i) {
        CharGen g;
        g.name = "z" + std::to_string(i + 1);
        g.vec = rd.dualSimple(i);
        gens.push_back(std::move(g));
    }
    return Field::create(rd.precisionM(), std::move(gens));
}

Weight fullySymbolicWeight(const RootData& rd) {
    return wMake(Ambient(static_cast<std::size_t>(rd.ambient()), mpq_class(0)),
                 std::vector<mpq_class>(static_cast<std::size_t>(rd.rank()), mpq_class(1)));
}

int totalDim(const Module& m) {
    int t = 0;
    for (int d : m.dims) t += d;
    return t;
}

}  // namespace

TEST_CASE("rank-one Verma over a symbolic weight") {
    auto rd = rdOf(LieType::A, 1);
    auto F = symbolicWeightField(*rd);
    auto V = buildVerma(rd, F, fullySymbolicWeight(*rd), 4);

    for (int sp = 0; sp < V->numSpaces(); ++sp) CHECK(V->dims[sp] == 1);
    CHECK(validateModule(*V).empty());

    // <f 1, f 1> = -q^{-(la,a)} [(la,a)]_{q_a} with q^{(la,a)} = z
    const long M = rd->precisionM();
    Scalar z = F->charPow(0, 1);
    Scalar q = F->uPow(M);
    Scalar expect = -z.inverse() * (z - z.inverse()) / (q - q.inverse());
    CHECK(V->gram(V->spaceAt({1}))[0][0] == expect);

    const Mat& G2 = V->gram(V->spaceAt({2}));
    CHECK_FALSE(matDet(G2, F).isZero());
}

TEST_CASE("Verma dimensions match the positive-root partition count") {
    for (auto [t, rank] : {std::pair{LieType::A, 2}, std::pair{LieType::B, 2}}) {
        auto rd = rdOf(t, rank);
        auto F = symbolicWeightField(*rd);
        auto V = buildVerma(rd, F, fullySymbolicWeight(*rd), 6);
        for (int sp = 0; sp < V->numSpaces(); ++sp)
            CHECK(static_cast<long>(V->dims[sp]) == kostantPartitions(*rd, V->drops[sp]));
        CHECK(validateModule(*V).empty());
    }
}

TEST_CASE("symbolic Gram matrices are symmetric and generically nondegenerate") {
    auto rd = rdOf(LieType::B, 2);
    auto F = symbolicWeightField(*rd);
    auto V = buildVerma(rd, F, fullySymbolicWeight(*rd), 4);
    for (int sp = 0; sp < V->numSpaces(); ++sp) {
        const Mat& G = V->gram(sp);
        for (std::size_t a = 0; a < G.size(); ++a)
            for (std::size_t b = a + 1; b < G.size(); ++b) CHECK(G[a][b] == G[b][a]);
        CHECK_FALSE(matDet(G, F).isZero());
    }
}

TEST_CASE("parabolic quotient of the rank-two B Verma") {
    auto rd = rdOf(LieType::B, 2);
    CharGen tg;
    tg.name = "t";
    tg.vec = rd->dualSimple(0);
    auto F = Field::create(rd->precisionM(), {tg});
    const Weight hw = wMake(Ambient(static_cast<std::size_t>(rd->ambient()), mpq_class(0)),
                            {mpq_class(1)});
    auto P = buildParabolicVerma(rd, F, hw, {1}, 5);

    CHECK(P->spaceAt({0, 1}) == -1);
    CHECK(P->dims[P->spaceAt({1, 0})] == 1);
    CHECK(P->dims[P->spaceAt({1, 1})] == 1);
    CHECK(P->dims[P->spaceAt({2, 1})] == 2);
    CHECK(P->dims[P->spaceAt({2, 2})] == 1);
    CHECK(P->dims[P->spaceAt({3, 2})] == 2);
    CHECK(validateModule(*P).empty());
}

TEST_CASE("irreducible quotients at dominant integral weights") {
    SUBCASE("rank one, highest weight 3") {
        auto rd = rdOf(LieType::A, 1);
        auto F = Field::create(rd->precisionM(), {});
        auto L = buildIrreducibleQuotient(rd, F, wMake(ambScale(rd->fundWeight(0), 3)), 5);
        CHECK(totalDim(*L) == 4);
        CHECK(L->spaceAt({4}) == -1);
        CHECK(L->complete);
        CHECK(validateModule(*L).empty());
    }
    SUBCASE("rank two A, first fundamental") {
        auto rd = rdOf(LieType::A, 2);
        auto F = Field::create(rd->precisionM(), {});
        auto L = buildIrreducibleQuotient(rd, F, wMake(rd->fundWeight(0)), 3);
        CHECK(totalDim(*L) == 3);
        CHECK(L->dims[L->spaceAt({1, 1})] == 1);
        CHECK(L->spaceAt({0, 1}) == -1);
        CHECK(L->complete);
    }
    SUBCASE("rank two A, adjoint") {
        auto rd = rdOf(LieType::A, 2);
        auto F = Field::create(rd->precisionM(), {});
        auto L = buildIrreducibleQuotient(
            rd, F, wMake(ambAdd(rd->fundWeight(0), rd->fundWeight(1))), 5);
        CHECK(totalDim(*L) == 8);
        CHECK(L->dims[L->spaceAt({1, 1})] == 2);
        CHECK(L->complete);
        CHECK(validateModule(*L).empty());
    }
    SUBCASE("rank two B, vector and spin") {
        auto rd = rdOf(LieType::B, 2);
        auto F = Field::create(rd->precisionM(), {});
        auto vec5 = buildIrreducibleQuotient(rd, F, wMake(rd->fundWeight(1)), 5);
        CHECK(totalDim(*vec5) == 5);
        CHECK(vec5->complete);
        auto spin = buildIrreducibleQuotient(rd, F, wMake(rd->fundWeight(0)), 4);
        CHECK(totalDim(*spin) == 4);
        CHECK(spin->dims[spin->spaceAt({2, 1})] == 1);
        CHECK(spin->complete);
        CHECK(validateModule(*spin).empty());
    }
}

TEST_CASE("sphere base module, rank one") {
    auto Z = buildSphereBase(1, 4);
    CHECK(Z->kind == ModuleKind::SphereBase);
    for (int sp = 0; sp < Z->numSpaces(); ++sp) CHECK(Z->dims[sp] == 1);
    CHECK(Z->numSpaces() == 5);
    CHECK(validateModule(*Z).empty());
    for (int sp = 1; sp < Z->numSpaces(); ++sp)
        CHECK_FALSE(Z->gram(sp)[0][0].isZero());
}

TEST_CASE("sphere base module, rank two") {
    const int depth = 6;
    auto Z = buildSphereBase(2, depth);
    CHECK(Z->kind == ModuleKind::SphereBase);

    // weights are multiplicity free: drop (a,b) survives exactly when a >= b
    for (int a = 0; a <= depth; ++a)
        for (int b = 0; a + b <= depth; ++b) {
            const int sp = Z->spaceAt({a, b});
            if (a >= b) {
                REQUIRE(sp >= 0);
                CHECK(Z->dims[sp] == 1);
            } else {
                CHECK(sp == -1);
            }
        }
    CHECK(validateModule(*Z).empty());

    // monomials in the two composite lowering operators stay nonzero and land
    // at drop (m1 + m2, m2), with nonzero self-pairing
    auto F = Z->field;
    const Scalar qb = F->uPow(-Z->rd->precisionM());
    const std::vector<std::pair<Scalar, std::vector<int>>> fe2 = {{F->one(), {0, 1}},
                                                                  {-qb, {1, 0}}};
    for (int m2 = 0; m2 <= 2; ++m2)
        for (int m1 = 0; m1 <= 2; ++m1) {
            int sp = 0;
            Vec v{F->one()};
            for (int k = 0; k < m2; ++k) {
                auto [nsp, nv] = applyFWordSum(*Z, fe2, sp, v);
                REQUIRE(nsp >= 0);
                sp = nsp;
                v = std::move(nv);
            }
            for (int k = 0; k < m1; ++k) {
                v = Z->applyF(0, sp, v, sp);
                REQUIRE(sp >= 0);
            }
            CHECK(Z->drops[sp] == Drop{m1 + m2, m2});
            CHECK_FALSE(vecIsZero(v));
            CHECK_FALSE(formValue(*Z, sp, v, v).isZero());
        }
}

TEST_CASE("tensor product with the coproduct action") {
    auto rd = rdOf(LieType::A, 1);
    auto F = symbolicWeightField(*rd);
    auto V = buildIrreducibleQuotient(rd, F, wMake(rd->fundWeight(0)), 2);
    CHECK(V->complete);
    CHECK(totalDim(*V) == 2);
    auto Z = buildVerma(rd, F, fullySymbolicWeight(*rd), 5);
    auto T = buildTensor(V, Z, 5);

    CHECK(T->dims[T->spaceAt({0})] == 1);
    for (int k = 1; k <= 5; ++k) CHECK(T->dims[T->spaceAt({k})] == 2);
    CHECK(validateModule(*T).empty());

    // the stored form on a tensor is the product form, zero across splits
    const Mat& G = T->gram(T->spaceAt({1}));
    CHECK(G[0][1].isZero());
    CHECK(G[1][0].isZero());
    CHECK(G[0][0] == Z->gram(Z->spaceAt({1}))[0][0]);
    CHECK(G[1][1] == V->gram(V->spaceAt({1}))[0][0]);
}

TEST_CASE("import into a wider field structure") {
    auto rd = rdOf(LieType::A, 1);
    auto Fp = Field::create(rd->precisionM(), {});
    auto V = buildVerma(rd, Fp, wMake(ambScale(rd->fundWeight(0), 3)), 4);

    const long M = rd->precisionM();
    Scalar expect = -Fp->uPow(-3 * M) * qnum(Fp, 3, M);
    CHECK(V->gram(V->spaceAt({1}))[0][0] == expect);

    auto Fz = symbolicWeightField(*rd);
    auto W = importModule(V, Fz);
    CHECK(validateModule(*W).empty());
    CHECK(W->gram(W->spaceAt({1}))[0][0] == expect.importInto(Fz));
}
