#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "qext/oracle.hpp"
#include "qext/twist.hpp"

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

bool vecSame(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

}  // namespace

TEST_CASE("singular space dimensions match the character oracle") {
    auto rd = rdOf(LieType::A, 2);
    auto F = Field::create(rd->precisionM(), {});
    const Ambient w1 = rd->fundWeight(0);
    auto V = buildIrreducibleQuotient(rd, F, wMake(w1), 3);
    REQUIRE(V->complete);
    auto T = buildTensor(V, V, 4);

    auto parts = tensorDecompose(*rd, w1, w1);
    CHECK(parts.size() == 2);  // symmetric square + the dual of the defining module
    long total = 0;
    for (const auto& [nu, mult] : parts) {
        Ambient diff = ambSub(ambAdd(w1, w1), nu);
        auto coords = rd->simpleCoords(diff);
        Drop d;
        for (const auto& c : coords) d.push_back(static_cast<int>(c.get_num().get_si()));
        SingularSpace S = singularSpace(T, d);
        CHECK(static_cast<long>(S.basis.size()) == mult);
        total += mult * weylDim(*rd, nu);
    }
    CHECK(total == 9);
}

TEST_CASE("deltaBar inverts deltaOf on singular spaces") {
    auto rd = rdOf(LieType::A, 1);
    auto F = symbolicWeightField(*rd);
    auto V = buildIrreducibleQuotient(rd, F, wMake(ambScale(rd->fundWeight(0), 2)), 3);
    REQUIRE(V->complete);
    auto Z = buildVerma(rd, F, fullySymbolicWeight(*rd), 3);
    auto T = buildTensor(V, Z, 2);

    for (const Drop& d : {Drop{0}, Drop{1}, Drop{2}}) {
        SingularSpace S = singularSpace(T, d);
        REQUIRE(S.basis.size() == 1);
        int vsp = -1;
        Vec w = deltaBar(*T, S.space, S.basis[0], vsp);
        REQUIRE(vsp >= 0);
        CHECK(!vecIsZero(w));
        auto back = deltaOf(S, w);
        REQUIRE(back.has_value());
        CHECK(vecSame(*back, S.basis[0]));
    }
}

TEST_CASE("rank-one reducibility boundary is a single shifted bracket") {
    auto rd = rdOf(LieType::A, 1);
    const long M = rd->precisionM();
    auto F = symbolicWeightField(*rd);
    auto V = buildIrreducibleQuotient(rd, F, wMake(rd->fundWeight(0)), 2);
    REQUIRE(V->complete);
    auto Z = buildVerma(rd, F, fullySymbolicWeight(*rd), 3);

    ReducibilityReport R = reducibilityCheck(V, Z);
    REQUIRE(R.blocks.size() == 2);
    CHECK(R.blocks[0].dim == 1);
    CHECK(R.blocks[0].det.isOne());
    CHECK(R.blocks[1].dim == 1);
    CHECK(!R.blocks[1].det.isZero());
    CHECK(R.verdict == "completely reducible");

    // the determinant vanishes exactly where [la(h) + 1] does
    Weight zr = wAdd(wMake(rd->rho()), Z->highest);
    Scalar boundary = qbracket(F->qexp(rd->pairWeight(zr, rd->simpleRoot(0), *F)), M);
    REQUIRE(R.locus.size() == 1);
    CHECK(R.locus[0].first == boundary.str());
    CHECK(R.locus[0].second == 1);
    CHECK(R.residual.empty());
    // what is left after the boundary factor cannot vanish: its numerator is
    // a character monomial times a polynomial in u alone (so every term has
    // the same character degree; basis-scaling poles hide in the den)
    Scalar rest = R.blocks[1].det / boundary;
    REQUIRE(!rest.isZero());
    const Poly& rn = rest.numPoly();
    Expo mins = rn.minExponents();
    bool monomialChars = true;
    for (int v = 1; v < F->nvars(); ++v)
        if (rn.degree(v) != mins[static_cast<std::size_t>(v)]) monomialChars = false;
    CHECK(monomialChars);
}

TEST_CASE("twist routes are mutually inverse against a symbolic Verma factor") {
    for (auto [t, r, scale] : {std::tuple{LieType::A, 1, 2}, std::tuple{LieType::A, 2, 1}}) {
        auto rd = rdOf(t, r);
        auto F = symbolicWeightField(*rd);
        auto V = buildIrreducibleQuotient(rd, F, wMake(ambScale(rd->fundWeight(0), scale)),
                                          2 * r * scale + 2);
        REQUIRE(V->complete);
        auto Z = buildVerma(rd, F, fullySymbolicWeight(*rd), 2 * r * scale + 2);

        TwistResult direct = extremalTwistDirect(V, Z);
        TwistResult proj = extremalTwistProjector(V, Z);
        CHECK(direct.verdict == "completely reducible");
        CHECK(proj.note.empty());
        CHECK(twistInverses(direct, proj));

        // a Verma factor leaves the whole carrier extremal
        for (const TwistBlock& b : direct.blocks)
            CHECK(static_cast<int>(b.domain.size()) ==
                  V->dims[static_cast<std::size_t>(b.space)]);
    }
}

TEST_CASE("parabolic closed form agrees with the direct twist") {
    auto rd = rdOf(LieType::B, 2);
    // one character dual to alpha_1, so the highest weight stays integral on
    // the Levi coroot while fully symbolic transversally
    CharGen g;
    g.name = "z1";
    g.vec = rd->dualSimple(0);
    auto F = Field::create(rd->precisionM(), {g});
    auto V = buildIrreducibleQuotient(rd, F, wMake(rd->fundWeight(0)), 4);
    REQUIRE(V->complete);

    const Weight lam = wMake(Ambient(static_cast<std::size_t>(rd->ambient()), mpq_class(0)),
                             {mpq_class(1)});
    SUBCASE("scalar Levi action") {
        auto Z = buildParabolicVerma(rd, F, lam, {1}, 4);
        TwistResult direct = extremalTwistDirect(V, Z);
        TwistResult formula = parabolicTwistFormula(V, Z);
        CHECK(formula.note.empty());
        CHECK(twistRouteAgree(direct, formula));
    }
    SUBCASE("one fundamental on the Levi") {
        auto Z = buildParabolicVerma(rd, F, wAdd(lam, wMake(rd->fundWeight(1))), {1}, 4);
        TwistResult direct = extremalTwistDirect(V, Z);
        TwistResult formula = parabolicTwistFormula(V, Z);
        CHECK(formula.note.empty());
        CHECK(twistRouteAgree(direct, formula));
    }
}

TEST_CASE("fallback subspaces from singular spaces when the ideal is unknown") {
    auto rd = rdOf(LieType::A, 1);
    auto F = Field::create(rd->precisionM(), {});
    auto V = buildIrreducibleQuotient(rd, F, wMake(rd->fundWeight(0)), 2);
    REQUIRE(V->complete);
    auto B = buildTensor(V, V, 2);  // no raising-ideal catalog for this kind

    auto T = buildTensor(V, B, 1);
    ExtremalSubspaces sub = extremalSubspaces(V, B, T);
    CHECK(sub.fallback);

    TwistResult direct = extremalTwistDirect(V, B);
    CHECK(direct.note == "fallback parametrization");
    CHECK(direct.verdict == "completely reducible");
    long singTotal = 0;
    for (const TwistBlock& b : direct.blocks) singTotal += static_cast<long>(b.gram.size());
    // 2 (x) 2 (x) 2 carries one length-4 and two length-2 constituents
    CHECK(singTotal == 3);

    // without an annihilator catalog the operator route must refuse
    CHECK_THROWS_AS(extremalTwistProjector(V, B), std::invalid_argument);
}

TEST_CASE("sphere twist at rank one") {
    SphereTwist S = sphereTwist(1, {2});
    CHECK(S.monomials.size() == 3);
    CHECK(S.entriesNonzero);
    CHECK(S.phiMatch);
    CHECK(S.globalScale.isOne());
    CHECK(S.verdict == "completely reducible");
    CHECK(S.entries[0].isOne());
}

TEST_CASE("sphere twist at rank two") {
    SphereTwist S = sphereTwist(2, {1, 1});
    CHECK(S.monomials.size() == 4);
    CHECK(S.entriesNonzero);
    CHECK(S.phiMatch);
    CHECK(S.globalScale.isOne());
    CHECK(S.verdict == "completely reducible");

    // monomial weight spaces are lines, so the basis is orthogonal
    for (const auto& m : S.monomials) {
        auto [sp, v] = sphereMonomial(*S.Z, m);
        CHECK(S.Z->dims[static_cast<std::size_t>(sp)] == 1);
        CHECK(!vecIsZero(v));
    }
}
