#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qext/projector.hpp"

using namespace qext;

namespace {

RootDataPtr rdOf(LieType t, int rank) { return std::make_shared<RootData>(t, rank); }

FieldPtr symbolicWeightField(const RootData& rd, int numShifts = 0) {
    std::vector<CharGen> gens;
    for (int i = 0; i < rd.rank(); ++i) {
        CharGen g;
        g.name = "z" + std::to_string(i + 1);
        g.vec = rd.dualSimple(i);
        gens.push_back(std::move(g));
    }
    return Field::create(rd.precisionM(), std::move(gens), numShifts);
}

Weight fullySymbolicWeight(const RootData& rd) {
    return wMake(Ambient(static_cast<std::size_t>(rd.ambient()), mpq_class(0)),
                 std::vector<mpq_class>(static_cast<std::size_t>(rd.rank()), mpq_class(1)));
}

Weight zeroWeight(const RootData& rd) {
    return wMake(Ambient(static_cast<std::size_t>(rd.ambient()), mpq_class(0)));
}

bool isDominantSpace(const Module& m, int sp) {
    const Weight& w = m.weightOf[static_cast<std::size_t>(sp)];
    for (const auto& c : w.charCoeffs)
        if (c != 0) return false;
    for (int i = 0; i < m.rd->rank(); ++i)
        if (m.rd->pairCoroot(w.base, m.rd->simpleRoot(i)) < 0) return false;
    return true;
}

}  // namespace

TEST_CASE("one-root factor fixes the top vector") {
    auto rd = rdOf(LieType::A, 1);
    auto F = symbolicWeightField(*rd, 1);
    auto V = buildVerma(rd, F, fullySymbolicWeight(*rd), 4);
    auto rv = rootVectorOperators(V);
    Scalar S = F->shiftPow(0, rd->precisionM());  // symbolic q_alpha^t
    Mat top = projectorFactorBlock(rv, 0, S, V->spaceAt({0}));
    CHECK(matEqual(top, matIdentity(F, 1)));
}

TEST_CASE("rank-one factor closed form on the first lowered space") {
    auto rd = rdOf(LieType::A, 1);
    const long M = rd->precisionM();
    auto F = symbolicWeightField(*rd, 1);
    auto V = buildVerma(rd, F, fullySymbolicWeight(*rd), 4);
    auto rv = rootVectorOperators(V);
    Scalar z = F->charPow(0, 1);            // q^{(la, alpha)} = q_alpha^{la(h)}
    Scalar S = F->shiftPow(0, M);           // q_alpha^t
    Scalar qa1 = F->uPow(M);

    Mat blk = projectorFactorBlock(rv, 0, S, V->spaceAt({1}));
    // p(t) f 1_la = q^{-la(h)} [t-1] / [t+la(h)-1] f 1_la
    Scalar expect = z.inverse() * qbracket(S * qa1.inverse(), M) *
                    qbracket(S * z * qa1.inverse(), M).inverse();
    CHECK(blk[0][0] == expect);

    // extremal shift t = 1 kills the lowered space
    Mat killed = projectorFactorBlock(rv, 0, qa1, V->spaceAt({1}));
    CHECK(killed[0][0].isZero());
}

TEST_CASE("root vector normalizations are certified constants") {
    for (auto [t, r] : {std::pair{LieType::A, 2}, std::pair{LieType::B, 2}}) {
        auto rd = rdOf(t, r);
        auto F = symbolicWeightField(*rd);
        auto V = buildVerma(rd, F, fullySymbolicWeight(*rd), 4);
        auto orderings = rd->allNormalOrderings();
        CHECK(orderings.size() == 2);
        for (const auto& ord : orderings) {
            auto rv = rootVectorOperators(V, ord);
            for (std::size_t p = 0; p < ord.size(); ++p) {
                INFO("type ", lieTypeChar(t), " ordering position ", p);
                CHECK_FALSE(rv.norm[p].isZero());
                if (rd->rootHeight(ord[p]) == 1) CHECK(rv.norm[p].isOne());
                // the A2 composite constant is a plain monomial in q
                if (t == LieType::A && rd->rootHeight(ord[p]) > 1)
                    CHECK(rv.norm[p].isUnitMonomial());
            }
        }
    }
}

TEST_CASE("non-normal orderings are rejected") {
    auto rd = rdOf(LieType::A, 2);
    auto F = symbolicWeightField(*rd);
    auto V = buildVerma(rd, F, fullySymbolicWeight(*rd), 3);
    auto ord = rd->muSequence(rd->longestWord());
    std::swap(ord[0], ord[1]);
    CHECK_THROWS_AS(rootVectorOperators(V, ord), std::invalid_argument);
}

TEST_CASE("projector identities at zero shift on dominant weight spaces") {
    struct Inst {
        LieType t;
        int rank;
        std::vector<long> fw;  // fundamental-weight coefficients
        int depth;
    };
    for (const Inst& in : {Inst{LieType::A, 2, {1, 1}, 5}, Inst{LieType::B, 2, {0, 1}, 5}}) {
        auto rd = rdOf(in.t, in.rank);
        auto F = Field::create(rd->precisionM(), {});
        Ambient hw(static_cast<std::size_t>(rd->ambient()), 0);
        for (int i = 0; i < in.rank; ++i) hw = ambAdd(hw, ambScale(rd->fundWeight(i), in.fw[i]));
        auto V = buildIrreducibleQuotient(rd, F, wMake(hw), in.depth);
        REQUIRE(V->complete);
        auto rv = rootVectorOperators(V);
        Weight zero = zeroWeight(*rd);
        for (int sp = 0; sp < V->numSpaces(); ++sp) {
            if (!isDominantSpace(*V, sp)) continue;
            INFO("type ", lieTypeChar(in.t), " drop space ", sp);
            Mat P = shiftedProjectorBlock(rv, zero, sp);
            CHECK(matEqual(matMul(P, P, F), P));
            for (int g = 0; g < in.rank; ++g) {
                if (const Mat* E = V->eBlock(g, sp)) CHECK(matIsZero(matMul(*E, P, F)));
                Drop below = V->drops[static_cast<std::size_t>(sp)];
                below[static_cast<std::size_t>(g)] -= 1;
                int src = below[static_cast<std::size_t>(g)] >= 0 ? V->spaceAt(below) : -1;
                if (src >= 0)
                    if (const Mat* Fb = V->fBlock(g, src)) CHECK(matIsZero(matMul(P, *Fb, F)));
            }
            // self-adjointness for the contravariant form
            const Mat& G = V->gram(sp);
            CHECK(matEqual(matMul(matTranspose(P, F), G, F), matMul(G, P, F)));
        }
    }
}

TEST_CASE("ordering independence of the shifted projector") {
    for (auto [t, r] : {std::pair{LieType::A, 2}, std::pair{LieType::B, 2}}) {
        auto rd = rdOf(t, r);
        std::vector<std::vector<mpq_class>> vecs;
        for (int i = 0; i < r; ++i) vecs.push_back(rd->fundWeight(i));
        auto F = Field::create(rd->precisionM(), {})->withShiftVecs(vecs);
        // generic integral highest weight; the shift stays fully symbolic
        Ambient hw(static_cast<std::size_t>(rd->ambient()), 0);
        for (int i = 0; i < r; ++i)
            hw = ambAdd(hw, ambScale(rd->fundWeight(i), 2 + i));
        auto V = buildVerma(rd, F, wMake(hw), 3);
        Weight lambda = wMake(Ambient(static_cast<std::size_t>(rd->ambient()), 0), {},
                              std::vector<mpq_class>(static_cast<std::size_t>(r), 1));
        auto orderings = rd->allNormalOrderings();
        REQUIRE(orderings.size() == 2);
        auto rvA = rootVectorOperators(V, orderings[0]);
        auto rvB = rootVectorOperators(V, orderings[1]);
        for (int sp = 0; sp < V->numSpaces(); ++sp) {
            INFO("type ", lieTypeChar(t), " space ", sp);
            CHECK(matEqual(shiftedProjectorBlock(rvA, lambda, sp),
                           shiftedProjectorBlock(rvB, lambda, sp)));
        }
    }
}

TEST_CASE("rank-one eigenvalue law with a monomial prefactor") {
    auto rd = rdOf(LieType::A, 1);
    const long M = rd->precisionM();
    auto F = symbolicWeightField(*rd, 1);
    auto V = buildVerma(rd, F, fullySymbolicWeight(*rd), 7);
    auto rv = rootVectorOperators(V);
    Scalar z = F->charPow(0, 1);
    Scalar S = F->shiftPow(0, M);
    for (int l = 1; l <= 6; ++l) {
        Mat blk = projectorFactorBlock(rv, 0, S, V->spaceAt({l}));
        Scalar val = blk[0][0];
        // ratio prod_{k=1..l} [t-k]/[t+xi(h)+k] at xi = la - l*alpha
        Scalar ratio = F->one();
        for (int k = 1; k <= l; ++k) {
            ratio = ratio * qbracket(S * F->uPow(-k * M), M);
            ratio = ratio * qbracket(S * z * F->uPow((k - 2 * l) * M), M).inverse();
        }
        Scalar pref = val * ratio.inverse();
        INFO("l = ", l, ", measured prefactor ", pref.str());
        CHECK(pref.isUnitMonomial());
        if (l == 1) {
            CHECK(pref == z.inverse());  // q^{-la(h)}, matching the closed form
            // the printed eigenvalue-law prefactor q^{-xi(h)+2} differs; recorded only
            Scalar printed = (z * F->uPow(-2 * M)).inverse() * F->uPow(2 * M);
            MESSAGE("printed-law prefactor would be ", printed.str());
        }
    }
}

TEST_CASE("non-dominant spaces of a small finite module are not killed") {
    auto rd = rdOf(LieType::A, 1);
    const long M = rd->precisionM();
    auto F = Field::create(rd->precisionM(), {});
    auto V = buildIrreducibleQuotient(rd, F, wMake(ambScale(rd->fundWeight(0), 2)), 3);
    REQUIRE(V->complete);
    REQUIRE(V->numSpaces() == 3);
    int low = V->spaceAt({2});  // xi(h) = -2
    auto ord = rd->muSequence(rd->longestWord());
    auto reg = regularizedProjectorBlock(V, ord, zeroWeight(*rd), low);
    REQUIRE(reg.wellDefined);
    CHECK_FALSE(matIsZero(reg.value));
    CHECK(reg.value[0][0] == -F->uPow(-2 * M));
    // neither idempotent nor singular-valued there
    CHECK_FALSE(matEqual(matMul(reg.value, reg.value, F), reg.value));
    const Mat* E = V->eBlock(0, low);
    REQUIRE(E != nullptr);
    CHECK_FALSE(matIsZero(matMul(*E, reg.value, F)));
}

TEST_CASE("finite modules regularize at nonnegative integral shifts") {
    auto rd = rdOf(LieType::A, 1);
    auto F = Field::create(rd->precisionM(), {});
    auto V = buildIrreducibleQuotient(rd, F, wMake(ambScale(rd->fundWeight(0), 3)), 4);
    auto ord = rd->muSequence(rd->longestWord());
    auto rv = rootVectorOperators(V);
    for (int r = 1; r <= 3; ++r) {
        Weight lambda0 = wMake(ambScale(rd->fundWeight(0), r - 1));
        for (int sp = 0; sp < V->numSpaces(); ++sp) {
            INFO("shift ", r, " space ", sp);
            auto reg = regularizedProjectorBlock(V, ord, lambda0, sp);
            CHECK(reg.wellDefined);
            // where the direct series has no pole the limit must agree with it
            bool directOk = true;
            Mat direct;
            try {
                direct = shiftedProjectorBlock(rv, lambda0, sp);
            } catch (const PoleError&) {
                directOk = false;
            }
            if (directOk && reg.wellDefined) CHECK(matEqual(reg.value, direct));
        }
    }
}

TEST_CASE("a factor shifted onto a vanishing bracket has no regularization") {
    auto rd = rdOf(LieType::A, 1);
    auto F = Field::create(rd->precisionM(), {});
    auto V = buildVerma(rd, F, wMake(rd->fundWeight(0)), 3);  // la(h) = 1
    int sp = V->spaceAt({1});
    LambdaRecipe recipe = [&](const FieldPtr& pf, const Weight& lam) {
        ModulePtr m2 = importModule(V, pf);
        auto rv2 = rootVectorOperators(m2);
        // bare shift t = (lam, alpha^vee): hits [h+t+1] = [t] on this block
        Scalar S = pf->qexp(rd->pairWeight(lam, rd->simpleRoot(0), *pf));
        return projectorFactorBlock(rv2, 0, S, sp);
    };
    auto reg = regularize(F, *rd, zeroWeight(*rd), recipe);
    CHECK_FALSE(reg.wellDefined);
    REQUIRE(reg.probes.size() == 3);
    for (const auto& p : reg.probes) {
        CHECK_FALSE(p.finite);
        CHECK(p.note.find("order 1") != std::string::npos);
    }
}

TEST_CASE("default probe directions are deterministic integral weights") {
    for (auto [t, r] : {std::pair{LieType::A, 2}, std::pair{LieType::B, 2}}) {
        auto rd = rdOf(t, r);
        auto d = defaultDirections(*rd);
        REQUIRE(d.size() == 3);
        CHECK(ambEq(d[0], rd->rho()));
        auto again = defaultDirections(*rd);
        for (std::size_t i = 0; i < d.size(); ++i) CHECK(ambEq(d[i], again[i]));
        for (const auto& dir : d)
            for (int i = 0; i < r; ++i)
                CHECK(rd->pairCoroot(dir, rd->simpleRoot(i)).get_den() == 1);
    }
}
