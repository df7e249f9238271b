#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qext/rootdata.hpp"

using namespace qext;

namespace {

// normal ordering whose tail is exactly the Levi's positive roots
bool rd_check(const RootData& rd, const std::vector<int>& seq, const std::vector<int>& levi) {
    if (!rd.isNormalOrdering(seq)) return false;
    std::vector<bool> inLevi(static_cast<std::size_t>(rd.rank()), false);
    for (int i : levi) inLevi[static_cast<std::size_t>(i)] = true;
    std::vector<int> leviRoots;
    for (int r = 0; r < rd.numPositive(); ++r) {
        bool inside = true;
        for (int i = 0; i < rd.rank(); ++i)
            if (rd.positiveRootCoords(r)[static_cast<std::size_t>(i)] != 0 &&
                !inLevi[static_cast<std::size_t>(i)])
                inside = false;
        if (inside) leviRoots.push_back(r);
    }
    std::vector<int> tail(seq.end() - static_cast<long>(leviRoots.size()), seq.end());
    std::sort(tail.begin(), tail.end());
    return tail == leviRoots;
}

}  // namespace

TEST_CASE("positive root counts") {
    CHECK(RootData(LieType::A, 2).numPositive() == 3);
    CHECK(RootData(LieType::A, 4).numPositive() == 10);
    CHECK(RootData(LieType::B, 2).numPositive() == 4);
    CHECK(RootData(LieType::B, 4).numPositive() == 16);
    CHECK(RootData(LieType::C, 3).numPositive() == 9);
    CHECK(RootData(LieType::D, 4).numPositive() == 12);
    CHECK(RootData(LieType::B, 1).numPositive() == 1);
}

TEST_CASE("cartan matrices") {
    RootData a2(LieType::A, 2);
    CHECK(a2.cartan() == std::vector<std::vector<int>>{{2, -1}, {-1, 2}});
    RootData b2(LieType::B, 2);
    // alpha_1 short (eps_1), alpha_2 long (eps_2 - eps_1)
    CHECK(b2.cartan()[0][0] == 2);
    CHECK(b2.cartan()[0][1] == -2);
    CHECK(b2.cartan()[1][0] == -1);
    CHECK(b2.cartan()[1][1] == 2);
    RootData c2(LieType::C, 2);
    CHECK(c2.cartan()[0][1] == -1);
    CHECK(c2.cartan()[1][0] == -2);
}

TEST_CASE("inner product normalization") {
    RootData b2(LieType::B, 2);
    CHECK(b2.ip(b2.simpleRoot(0), b2.simpleRoot(0)) == 1);  // short
    CHECK(b2.ip(b2.simpleRoot(1), b2.simpleRoot(1)) == 2);  // long
    RootData a2(LieType::A, 2);
    CHECK(a2.ip(a2.simpleRoot(0), a2.simpleRoot(0)) == 2);
    RootData c2(LieType::C, 2);
    CHECK(c2.ip(c2.simpleRoot(1), c2.simpleRoot(1)) == 2);
    CHECK(c2.ip(c2.simpleRoot(0), c2.simpleRoot(0)) == 4);
}

TEST_CASE("precision clears weight pairings") {
    CHECK(RootData(LieType::A, 2).precisionM() == 2);
    CHECK(RootData(LieType::B, 2).precisionM() == 4);
    RootData b2(LieType::B, 2);
    for (int i = 0; i < b2.numPositive(); ++i) {
        mpq_class v = b2.normSqHalf(b2.positiveRoot(i)) * b2.precisionM();
        CHECK(v.get_den() == 1);
    }
}

TEST_CASE("rho pairs to one with simple coroots") {
    for (auto rd : {RootData(LieType::A, 3), RootData(LieType::B, 3), RootData(LieType::C, 2),
                    RootData(LieType::D, 4)}) {
        for (int i = 0; i < rd.rank(); ++i)
            CHECK(rd.pairCoroot(rd.rho(), rd.simpleRoot(i)) == 1);
    }
}

TEST_CASE("fundamental weights and duals") {
    RootData b2(LieType::B, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            CHECK(b2.pairCoroot(b2.fundWeight(i), b2.simpleRoot(j)) == (i == j ? 1 : 0));
            CHECK(b2.ip(b2.dualSimple(i), b2.simpleRoot(j)) == (i == j ? 1 : 0));
        }
}

TEST_CASE("longest element") {
    RootData b2(LieType::B, 2);
    auto w0 = b2.longest();
    CHECK(b2.wLength(w0) == 4);
    // -1 on the ambient space for B2
    for (int i = 0; i < b2.rank(); ++i) {
        Ambient img = b2.wApply(w0, b2.simpleRoot(i));
        CHECK(img == ambScale(b2.simpleRoot(i), -1));
    }
    RootData a2(LieType::A, 2);
    CHECK(a2.wLength(a2.longest()) == 3);
    CHECK(a2.diagramInvolution(0) == 1);
    CHECK(a2.diagramInvolution(1) == 0);
    CHECK(b2.diagramInvolution(0) == 0);
}

TEST_CASE("reduced words and mu sequences") {
    for (auto rd : {RootData(LieType::A, 2), RootData(LieType::B, 2), RootData(LieType::A, 3),
                    RootData(LieType::C, 3), RootData(LieType::D, 4), RootData(LieType::B, 4)}) {
        auto word = rd.longestWord();
        CHECK(static_cast<int>(word.size()) == rd.numPositive());
        auto seq = rd.muSequence(word);
        CHECK(rd.isNormalOrdering(seq));
    }
}

TEST_CASE("levi adapted orderings") {
    RootData b2(LieType::B, 2);
    for (std::vector<int> levi : {std::vector<int>{0}, std::vector<int>{1}}) {
        auto word = b2.leviAdaptedWord(levi);
        auto seq = b2.muSequence(word);
        REQUIRE(rd_check(b2, seq, levi));
    }
    RootData a3(LieType::A, 3);
    for (std::vector<int> levi :
         {std::vector<int>{0}, std::vector<int>{1}, std::vector<int>{0, 2}, std::vector<int>{1, 2}}) {
        auto word = a3.leviAdaptedWord(levi);
        auto seq = a3.muSequence(word);
        REQUIRE(rd_check(a3, seq, levi));
    }
}

TEST_CASE("weight pairing to q exponents") {
    RootData b2(LieType::B, 2);
    CharGen z{"x", b2.dualSimple(0), std::nullopt, std::nullopt};
    auto f0 = Field::create(b2.precisionM(), {z});
    auto f = f0->withShiftVecs({b2.rho()});
    Weight lam = wMake(Ambient(2, mpq_class(0)), {1}, {mpq_class(1, 1)});
    QExponent e = b2.pairWeight(lam, b2.simpleRoot(0), *f);
    CHECK(e.u == 0);
    CHECK(e.chars[0] == 1);           // dual pairing
    CHECK(e.shifts[0] == mpq_class(1, 2));  // (rho, alpha_1) in B2
    Scalar s = f->qexp(e);
    CHECK(s.isUnitMonomial());
    // subtracting a root changes only the base
    Weight mu = wAddBase(lam, b2.simpleRoot(1), -2);
    QExponent e2 = b2.pairWeight(mu, b2.simpleRoot(1), *f);
    CHECK(e2.u == -2 * b2.ip(b2.simpleRoot(1), b2.simpleRoot(1)));
    CHECK(e2.chars[0] == 0);
}
