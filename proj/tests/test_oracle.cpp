#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qext/forms.hpp"
#include "qext/oracle.hpp"

using namespace qext;

namespace {

RootDataPtr rdOf(LieType t, int rank) { return std::make_shared<RootData>(t, rank); }

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

long charTotal(const CharacterVector& c) {
    long t = 0;
    for (const auto& [w, m] : c) t += m;
    return t;
}

}  // namespace

TEST_CASE("Weyl dimension formula") {
    auto a1 = rdOf(LieType::A, 1);
    CHECK(weylDim(*a1, ambScale(a1->fundWeight(0), 3)) == 4);
    auto a2 = rdOf(LieType::A, 2);
    CHECK(weylDim(*a2, a2->fundWeight(0)) == 3);
    CHECK(weylDim(*a2, ambAdd(a2->fundWeight(0), a2->fundWeight(1))) == 8);
    auto b2 = rdOf(LieType::B, 2);
    CHECK(weylDim(*b2, b2->fundWeight(0)) == 4);
    CHECK(weylDim(*b2, b2->fundWeight(1)) == 5);
    CHECK(weylDim(*b2, ambScale(b2->fundWeight(0), 2)) == 10);
    auto b3 = rdOf(LieType::B, 3);
    CHECK(weylDim(*b3, b3->fundWeight(2)) == 7);
    auto d4 = rdOf(LieType::D, 4);
    CHECK(weylDim(*d4, d4->fundWeight(3)) == 8);
}

TEST_CASE("Freudenthal weight multiplicities") {
    auto a2 = rdOf(LieType::A, 2);
    const Ambient adj = ambAdd(a2->fundWeight(0), a2->fundWeight(1));
    CharacterVector c = weylCharacter(*a2, adj);
    CHECK(charTotal(c) == 8);
    Ambient zero(static_cast<std::size_t>(a2->ambient()), mpq_class(0));
    CHECK(c.at(zero) == 2);

    auto b2 = rdOf(LieType::B, 2);
    CharacterVector cb = weylCharacter(*b2, ambScale(b2->fundWeight(0), 2));
    CHECK(charTotal(cb) == 10);
    Ambient zb(static_cast<std::size_t>(b2->ambient()), mpq_class(0));
    CHECK(cb.at(zb) == 2);
    CharacterVector cv = weylCharacter(*b2, b2->fundWeight(1));
    CHECK(charTotal(cv) == 5);
    CHECK(cv.at(zb) == 1);
}

TEST_CASE("tensor product decomposition by character stripping") {
    auto a2 = rdOf(LieType::A, 2);
    auto dec = tensorDecompose(*a2, a2->fundWeight(0), a2->fundWeight(0));
    REQUIRE(dec.size() == 2);
    long total = 0;
    for (const auto& [w, m] : dec) total += m * weylDim(*a2, w);
    CHECK(total == 9);
    bool sawSym = false, sawDual = false;
    for (const auto& [w, m] : dec) {
        if (ambEq(w, ambScale(a2->fundWeight(0), 2))) sawSym = m == 1;
        if (ambEq(w, a2->fundWeight(1))) sawDual = m == 1;
    }
    CHECK(sawSym);
    CHECK(sawDual);

    auto b2 = rdOf(LieType::B, 2);
    auto decb = tensorDecompose(*b2, b2->fundWeight(1), b2->fundWeight(1));
    CHECK(decb.size() == 3);
    long totalb = 0;
    for (const auto& [w, m] : decb) totalb += m * weylDim(*b2, w);
    CHECK(totalb == 25);

    Ambient zero(static_cast<std::size_t>(a2->ambient()), mpq_class(0));
    auto dect = tensorDecompose(*a2, a2->fundWeight(0), zero);
    REQUIRE(dect.size() == 1);
    CHECK(ambEq(dect[0].first, a2->fundWeight(0)));
    CHECK(dect[0].second == 1);

    auto a1 = rdOf(LieType::A, 1);
    auto deca = tensorDecompose(*a1, ambScale(a1->fundWeight(0), 3), a1->fundWeight(0));
    CHECK(deca.size() == 2);
}

TEST_CASE("normal-ordering form oracle agrees with the recursive Gram") {
    for (auto [t, rank] : {std::pair{LieType::A, 1}, std::pair{LieType::A, 2},
                           std::pair{LieType::B, 2}}) {
        auto rd = rdOf(t, rank);
        auto F = symbolicWeightField(*rd);
        const Weight hw = fullySymbolicWeight(*rd);
        auto V = buildVerma(rd, F, hw, 3);
        for (int sp = 0; sp < V->numSpaces(); ++sp) {
            const Mat& G = V->gram(sp);
            const auto& labels = V->labels[static_cast<std::size_t>(sp)];
            for (std::size_t a = 0; a < labels.size(); ++a)
                for (std::size_t b = a; b < labels.size(); ++b) {
                    Scalar direct = pFormValue(*rd, F, hw, pFWord(F, rank, labels[a]),
                                               pFWord(F, rank, labels[b]));
                    CHECK(G[a][b] == direct);
                }
        }
    }
}

TEST_CASE("form symmetry under the defining antiautomorphism") {
    auto rd = rdOf(LieType::B, 2);
    auto F = symbolicWeightField(*rd);
    const Weight hw = fullySymbolicWeight(*rd);
    const std::vector<std::vector<int>> words = {{0, 1}, {1, 0}, {0, 0, 1}, {1, 0, 0}};
    for (const auto& wa : words)
        for (const auto& wb : words) {
            Scalar ab = pFormValue(*rd, F, hw, pFWord(F, 2, wa), pFWord(F, 2, wb));
            Scalar ba = pFormValue(*rd, F, hw, pFWord(F, 2, wb), pFWord(F, 2, wa));
            CHECK(ab == ba);
        }
}

TEST_CASE("submodule span evidence") {
    SUBCASE("full coverage from the top of a finite irreducible") {
        auto rd = rdOf(LieType::A, 2);
        auto F = Field::create(rd->precisionM(), {});
        auto L = buildIrreducibleQuotient(rd, F, wMake(rd->fundWeight(0)), 3);
        auto rep = submoduleSpanEvidence(*L, {{0, Vec{F->one()}}});
        CHECK(rep.full);
    }
    SUBCASE("coverage gap below a proper submodule") {
        auto rd = rdOf(LieType::A, 1);
        auto F = Field::create(rd->precisionM(), {});
        auto V = buildVerma(rd, F, wMake(ambScale(rd->fundWeight(0), 3)), 6);
        int sp = 0;
        Vec v{F->one()};
        for (int k = 0; k < 4; ++k) v = V->applyF(0, sp, v, sp);
        auto rep = submoduleSpanEvidence(*V, {{sp, std::move(v)}});
        CHECK_FALSE(rep.full);
        for (int s = 0; s < V->numSpaces(); ++s) {
            const int expect = dropHeight(V->drops[static_cast<std::size_t>(s)]) >= 4 ? 1 : 0;
            CHECK(rep.covered[static_cast<std::size_t>(s)] == expect);
        }
    }
}
