#include "qext/twist.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace qext {

namespace {

bool vecEqual(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

Weight zeroWeight(const RootData& rd) {
    return wMake(Ambient(static_cast<std::size_t>(rd.ambient()), mpq_class(0)));
}

bool idealKnown(ModuleKind k) {
    return k == ModuleKind::Verma || k == ModuleKind::ParabolicVerma ||
           k == ModuleKind::IrreducibleQuotient || k == ModuleKind::SphereBase;
}

int maxDropHeight(const Module& M) {
    int h = 0;
    for (const Drop& d : M.drops) h = std::max(h, dropHeight(d));
    return h;
}

int maxPlusHeight(const Module& A, const ExtremalSubspaces& sub) {
    int h = 0;
    for (int sp = 0; sp < A.numSpaces(); ++sp)
        if (!sub.plus[static_cast<std::size_t>(sp)].empty())
            h = std::max(h, dropHeight(A.drops[static_cast<std::size_t>(sp)]));
    return h;
}

// x (x) 1_B as a vector of the tensor space sitting at the same drop as sp
Vec embedAgainstTop(const Module& T, int spT, int sp, const Vec& x) {
    Vec emb = vecZero(T.field, T.dims[static_cast<std::size_t>(spT)]);
    const auto& prs = T.pairs[static_cast<std::size_t>(spT)];
    for (std::size_t k = 0; k < prs.size(); ++k)
        if (prs[k][2] == 0) {
            if (prs[k][0] != sp)
                throw std::runtime_error("embedAgainstTop: factor space mismatch");
            emb[k] = x[static_cast<std::size_t>(prs[k][1])];
        }
    return emb;
}

}  // namespace

SingularSpace singularSpace(const ModulePtr& T, const Drop& drop) {
    SingularSpace S;
    S.T = T;
    S.drop = drop;
    S.space = T->spaceAt(drop);
    if (S.space < 0) {
        if (!T->complete && dropHeight(drop) > T->depth)
            throw std::runtime_error("singularSpace: drop height " +
                                     std::to_string(dropHeight(drop)) +
                                     " exceeds the stored depth " + std::to_string(T->depth));
        return S;
    }
    const int d = T->dims[static_cast<std::size_t>(S.space)];
    Mat stacked;
    for (int g = 0; g < T->rd->rank(); ++g)
        if (const Mat* B = T->eBlock(g, S.space))
            for (const Vec& row : *B) stacked.push_back(row);
    S.basis = stacked.empty() ? matIdentity(T->field, d) : kernelBasis(stacked, T->field, d);
    return S;
}

Vec deltaBar(const Module& T, int sp, const Vec& u, int& vsp) {
    if (T.kind != ModuleKind::Tensor) throw std::invalid_argument("deltaBar: tensor module required");
    const Drop& d = T.drops[static_cast<std::size_t>(sp)];
    vsp = T.factorV->spaceAt(d);
    if (vsp < 0) return {};
    Vec out = vecZero(T.field, T.factorV->dims[static_cast<std::size_t>(vsp)]);
    const auto& prs = T.pairs[static_cast<std::size_t>(sp)];
    for (std::size_t k = 0; k < prs.size(); ++k)
        if (prs[k][2] == 0) out[static_cast<std::size_t>(prs[k][1])] += u[k];
    return out;
}

std::optional<Vec> deltaOf(const SingularSpace& S, const Vec& w) {
    if (S.basis.empty()) return std::nullopt;
    const FieldPtr& f = S.T->field;
    int vsp = -1;
    Mat D;
    for (const Vec& row : S.basis) D.push_back(deltaBar(*S.T, S.space, row, vsp));
    if (vsp < 0) return std::nullopt;
    if (matRank(D, f, static_cast<int>(D[0].size())) != static_cast<int>(D.size()))
        throw std::runtime_error("deltaOf: deltaBar is not injective on the singular space");
    auto c = solve(matTranspose(D, f), w, f);
    if (!c) return std::nullopt;
    Vec out = vecZero(f, static_cast<int>(S.basis[0].size()));
    for (std::size_t i = 0; i < c->size(); ++i) vecAddScaled(out, (*c)[i], S.basis[i]);
    return out;
}

std::vector<GradedOperator> idealGenerators(const ModulePtr& A, const Module& B) {
    const RootData& rd = *B.rd;
    auto ePower = [&](int gen, long p) {
        GradedOperator g = gopGenE(A, gen);
        GradedOperator acc = g;
        for (long k = 1; k < p; ++k) acc = gopCompose(g, acc);
        return acc;
    };
    auto pairing = [&](int i) {
        mpq_class m = rd.pairCoroot(B.highest.base, rd.simpleRoot(i));
        if (m.get_den() != 1 || m < 0)
            throw std::invalid_argument(
                "idealGenerators: simple coroot pairing is not a nonnegative integer");
        return m.get_num().get_si();
    };
    switch (B.kind) {
        case ModuleKind::Verma:
            return {};
        case ModuleKind::ParabolicVerma: {
            std::vector<GradedOperator> gens;
            for (int i : B.leviSimples) gens.push_back(ePower(i, pairing(i) + 1));
            return gens;
        }
        case ModuleKind::IrreducibleQuotient: {
            std::vector<GradedOperator> gens;
            for (int i = 0; i < rd.rank(); ++i) gens.push_back(ePower(i, pairing(i) + 1));
            return gens;
        }
        case ModuleKind::SphereBase: {
            std::vector<GradedOperator> gens;
            const int n = rd.rank();
            for (int i = 1; i < n; ++i) gens.push_back(gopGenE(A, i));
            if (n >= 2) {
                const FieldPtr& f = A->field;
                const long M = rd.precisionM();
                GradedOperator e1 = gopGenE(A, 0), e2 = gopGenE(A, 1);
                GradedOperator t1 = gopCompose(e2, gopCompose(e1, e1));
                GradedOperator t2 = gopCompose(e1, gopCompose(e2, e1));
                GradedOperator t3 = gopCompose(e1, gopCompose(e1, e2));
                Scalar qq = f->uPow(M) + f->uPow(-M);
                gens.push_back(gopSub(gopSub(t1, gopScale(t2, qq)), gopScale(t3, -f->one())));
            }
            return gens;
        }
        default:
            throw std::invalid_argument("idealGenerators: no raising-ideal catalog for this kind");
    }
}

ExtremalSubspaces extremalSubspaces(const ModulePtr& A, const ModulePtr& B, const ModulePtr& T) {
    ExtremalSubspaces out;
    const FieldPtr& f = A->field;
    const int n = A->numSpaces();
    out.plus.resize(static_cast<std::size_t>(n));
    out.perp.resize(static_cast<std::size_t>(n));
    out.coplus.resize(static_cast<std::size_t>(n));

    std::vector<GradedOperator> gens;
    if (idealKnown(B->kind)) {
        gens = idealGenerators(A, *B);
    } else {
        if (!T) throw std::invalid_argument("extremalSubspaces: unknown ideal and no tensor given");
        out.fallback = true;
    }

    for (int sp = 0; sp < n; ++sp) {
        const int d = A->dims[static_cast<std::size_t>(sp)];
        Mat plus;
        if (!out.fallback) {
            Mat stacked;
            for (const auto& g : gens) {
                auto blk = gopBlock(g, sp);
                if (!blk) throw std::runtime_error("extremalSubspaces: unresolved raising block");
                for (const Vec& row : *blk) stacked.push_back(row);
            }
            plus = stacked.empty() ? matIdentity(f, d) : kernelBasis(stacked, f, d);
        } else {
            SingularSpace S = singularSpace(T, A->drops[static_cast<std::size_t>(sp)]);
            RowSpan span(f, d);
            for (const Vec& row : S.basis) {
                int vsp = -1;
                Vec w = deltaBar(*T, S.space, row, vsp);
                if (w.empty() || vecIsZero(w)) continue;
                Vec copy = w;
                if (span.add(std::move(w))) plus.push_back(std::move(copy));
            }
        }

        Mat perp;
        if (plus.empty()) {
            perp = matIdentity(f, d);
        } else {
            perp = kernelBasis(matMul(plus, A->gram(sp), f), f, d);
        }

        RowSpan span(f, d);
        for (const Vec& row : perp) span.add(Vec(row));
        Mat coplus;
        for (const Vec& row : plus)
            if (span.add(Vec(row))) coplus.push_back(row);
        for (int j = 0; j < d && span.rank() < d; ++j) {
            Vec e = vecZero(f, d);
            e[static_cast<std::size_t>(j)] = f->one();
            if (span.add(Vec(e))) coplus.push_back(std::move(e));
        }

        out.plus[static_cast<std::size_t>(sp)] = std::move(plus);
        out.perp[static_cast<std::size_t>(sp)] = std::move(perp);
        out.coplus[static_cast<std::size_t>(sp)] = std::move(coplus);
    }
    return out;
}

namespace {

// shared setup for the two tensor-backed routes
void twistSetup(const ModulePtr& A, const ModulePtr& B, int extraDepth, ExtremalSubspaces& sub,
                ModulePtr& T) {
    if (idealKnown(B->kind)) {
        sub = extremalSubspaces(A, B);
        T = buildTensor(A, B, maxPlusHeight(*A, sub) + extraDepth);
    } else {
        T = buildTensor(A, B, maxDropHeight(*A) + extraDepth);
        sub = extremalSubspaces(A, B, T);
    }
}

void settleVerdict(TwistResult& R) {
    if (!R.note.empty() || R.blocks.empty()) return;
    for (const TwistBlock& b : R.blocks)
        if (b.det.isZero()) {
            R.verdict = "degenerate";
            return;
        }
    R.verdict = "completely reducible";
}

// op rows via the coplus/plus pairing: row a of gram lists <image_a, plus_b>,
// so op = gram * P^{-1} with P[c][b] = <coplus_c, plus_b>
std::optional<Mat> opFromPairings(const Module& A, int sp, const Mat& gram, const Mat& plus,
                                  const Mat& coplus) {
    if (coplus.size() != plus.size()) return std::nullopt;
    const FieldPtr& f = A.field;
    Mat P = matMul(matMul(coplus, A.gram(sp), f), matTranspose(plus, f), f);
    auto Pinv = matInverse(P, f);
    if (!Pinv) throw std::runtime_error("twist: the plus/coplus pairing is singular");
    return matMul(gram, *Pinv, f);
}

}  // namespace

TwistResult extremalTwistDirect(const ModulePtr& A, const ModulePtr& B, int extraDepth) {
    TwistResult R;
    R.A = A;
    R.B = B;
    R.route = "direct";
    const FieldPtr& f = A->field;
    ExtremalSubspaces sub;
    ModulePtr T;
    twistSetup(A, B, extraDepth, sub, R.T);
    T = R.T;

    if (sub.fallback) {
        // no annihilator catalog for B, so delta-bar need not be injective
        // and the twist operator itself is ill-posed; report the form on the
        // singular spaces directly, one block per stored carrier drop
        for (int sp = 0; sp < A->numSpaces(); ++sp) {
            const Drop& drop = A->drops[static_cast<std::size_t>(sp)];
            SingularSpace S = singularSpace(T, drop);
            if (S.basis.empty()) continue;
            TwistBlock blk;
            blk.drop = drop;
            blk.space = sp;
            blk.domain = sub.plus[static_cast<std::size_t>(sp)];
            blk.gram = gramRestrict(*T, S.space, S.basis);
            blk.det = matDet(blk.gram, f);
            R.blocks.push_back(std::move(blk));
        }
        settleVerdict(R);
        R.note = "fallback parametrization";
        return R;
    }

    for (int sp = 0; sp < A->numSpaces(); ++sp) {
        const Mat& plus = sub.plus[static_cast<std::size_t>(sp)];
        if (plus.empty()) continue;
        const Mat& coplus = sub.coplus[static_cast<std::size_t>(sp)];
        const Drop& drop = A->drops[static_cast<std::size_t>(sp)];
        SingularSpace S = singularSpace(T, drop);
        Mat svecs;
        for (const Vec& row : plus) {
            auto s = deltaOf(S, row);
            if (!s)
                throw std::runtime_error("extremalTwistDirect: plus vector without a singular lift");
            svecs.push_back(std::move(*s));
        }
        TwistBlock blk;
        blk.drop = drop;
        blk.space = sp;
        blk.domain = plus;
        blk.codomain = coplus;
        blk.gram = gramRestrict(*T, S.space, svecs);
        blk.det = matDet(blk.gram, f);
        if (auto op = opFromPairings(*A, sp, blk.gram, plus, coplus)) blk.op = std::move(*op);
        R.blocks.push_back(std::move(blk));
    }
    settleVerdict(R);
    return R;
}

TwistResult extremalTwistProjector(const ModulePtr& A, const ModulePtr& B,
                                   const std::vector<int>& ordering, int extraDepth) {
    TwistResult R;
    R.A = A;
    R.B = B;
    R.route = "projector";
    if (!idealKnown(B->kind))
        throw std::invalid_argument(
            "extremalTwistProjector: second factor needs a recognized annihilator ideal");
    const FieldPtr& f = A->field;
    const RootData& rd = *A->rd;
    const std::vector<int> ord = ordering.empty() ? rd.muSequence(rd.longestWord()) : ordering;

    ExtremalSubspaces sub;
    ModulePtr T;
    twistSetup(A, B, extraDepth, sub, R.T);
    T = R.T;

    RootVectorSet rvA = rootVectorOperators(A, ord);
    RootVectorSet rvT = rootVectorOperators(T, ord);
    const Weight zero = zeroWeight(rd);

    for (int sp = 0; sp < A->numSpaces(); ++sp) {
        const Mat& plus = sub.plus[static_cast<std::size_t>(sp)];
        if (plus.empty()) continue;
        const Mat& coplus = sub.coplus[static_cast<std::size_t>(sp)];
        if (coplus.size() != plus.size()) {
            R.note = "carrier form degenerate on a plus space";
            R.blocks.clear();
            return R;
        }
        const Drop& drop = A->drops[static_cast<std::size_t>(sp)];
        int spT = T->spaceAt(drop);
        if (spT < 0) throw std::runtime_error("extremalTwistProjector: missing tensor space");

        // plain evaluation first; regularize only across an actual pole
        Mat proj;
        try {
            proj = shiftedProjectorBlock(rvT, zero, spT);
        } catch (const PoleError&) {
            RegularizedBlock reg = regularizedProjectorBlock(T, ord, zero, spT);
            for (const auto& p : reg.probes) R.probes.push_back(p);
            if (!reg.wellDefined) {
                R.note = "projector route unavailable";
                R.blocks.clear();
                return R;
            }
            proj = reg.value;
        }

        // reference for the cocycle: the same projector shifted by B's top
        // weight, acting on the carrier alone
        std::optional<Mat> side;
        try {
            side = shiftedProjectorBlock(rvA, B->highest, sp);
        } catch (const PoleError&) {
            side = std::nullopt;
        }

        Mat W;
        for (const Vec& x : coplus) {
            Vec emb = embedAgainstTop(*T, spT, sp, x);
            Vec img = matApply(proj, emb);
            int vsp = -1;
            Vec w = deltaBar(*T, spT, img, vsp);
            if (vsp < 0)
                throw std::runtime_error("extremalTwistProjector: image has no carrier space");
            if (side && !vecEqual(w, matApply(*side, x)))
                throw std::runtime_error("extremalTwistProjector: projector cocycle violated");
            W.push_back(std::move(w));
        }

        TwistBlock blk;
        blk.drop = drop;
        blk.space = sp;
        blk.domain = coplus;
        blk.codomain = plus;
        Mat plusT = matTranspose(plus, f);
        for (const Vec& w : W) {
            auto c = solve(plusT, w, f);
            if (!c) throw std::runtime_error("extremalTwistProjector: image leaves the plus space");
            blk.op.push_back(std::move(*c));
        }
        blk.gram = matMul(matMul(W, A->gram(sp), f), matTranspose(coplus, f), f);
        blk.det = matDet(blk.gram, f);
        R.blocks.push_back(std::move(blk));
    }
    settleVerdict(R);
    return R;
}

TwistResult parabolicTwistFormula(const ModulePtr& V, const ModulePtr& Z) {
    TwistResult R;
    R.A = V;
    R.B = Z;
    R.route = "parabolic-formula";
    if (Z->kind != ModuleKind::Verma && Z->kind != ModuleKind::ParabolicVerma)
        throw std::invalid_argument("parabolicTwistFormula: Verma-type second factor required");
    const RootData& rd = *V->rd;
    const FieldPtr& f = V->field;
    const std::vector<int>& levi = Z->leviSimples;

    const std::vector<int> word = levi.empty() ? rd.longestWord() : rd.leviAdaptedWord(levi);
    const std::vector<int> ord = rd.muSequence(word);
    std::vector<char> inLevi(static_cast<std::size_t>(rd.rank()), 0);
    for (int i : levi) inLevi[static_cast<std::size_t>(i)] = 1;
    std::vector<int> posK, posGK;
    for (int p = 0; p < static_cast<int>(ord.size()); ++p) {
        const auto& c = rd.positiveRootCoords(ord[static_cast<std::size_t>(p)]);
        bool leviRoot = true;
        for (int j = 0; j < rd.rank(); ++j)
            if (c[static_cast<std::size_t>(j)] != 0 && !inLevi[static_cast<std::size_t>(j)]) {
                leviRoot = false;
                break;
            }
        (leviRoot ? posK : posGK).push_back(p);
    }
    bool xiZero = true;
    for (int i : levi)
        if (rd.pairCoroot(Z->highest.base, rd.simpleRoot(i)) != 0) xiZero = false;

    ExtremalSubspaces sub = extremalSubspaces(V, Z);
    RootVectorSet rv = rootVectorOperators(V, ord);

    for (int sp = 0; sp < V->numSpaces(); ++sp) {
        const Mat& plus = sub.plus[static_cast<std::size_t>(sp)];
        if (plus.empty()) continue;
        const Mat& coplus = sub.coplus[static_cast<std::size_t>(sp)];
        try {
            Mat Pgk = shiftedProjectorBlockSubset(rv, Z->highest, posGK, sp);
            auto PgkInv = matInverse(Pgk, f);
            std::optional<Mat> PkInv;
            if (!xiZero) {
                Mat Pk = shiftedProjectorBlockSubset(rv, Z->highest, posK, sp);
                PkInv = matInverse(Pk, f);
            }
            if (!PgkInv || (!xiZero && !PkInv)) {
                R.note = "reducibility suspected";
                R.blocks.clear();
                return R;
            }
            Mat W;
            for (const Vec& v : plus) {
                Vec y = matApply(*PgkInv, v);
                if (!xiZero) y = matApply(*PkInv, y);
                W.push_back(std::move(y));
            }
            TwistBlock blk;
            blk.drop = V->drops[static_cast<std::size_t>(sp)];
            blk.space = sp;
            blk.domain = plus;
            blk.codomain = coplus;
            blk.gram = matMul(matMul(W, V->gram(sp), f), matTranspose(plus, f), f);
            blk.det = matDet(blk.gram, f);
            if (auto op = opFromPairings(*V, sp, blk.gram, plus, coplus)) blk.op = std::move(*op);
            R.blocks.push_back(std::move(blk));
        } catch (const PoleError&) {
            R.note = "reducibility suspected";
            R.blocks.clear();
            return R;
        }
    }
    settleVerdict(R);
    return R;
}

bool twistRouteAgree(const TwistResult& a, const TwistResult& b) {
    if (a.blocks.size() != b.blocks.size()) return false;
    for (std::size_t i = 0; i < a.blocks.size(); ++i) {
        const TwistBlock &x = a.blocks[i], &y = b.blocks[i];
        if (x.drop != y.drop) return false;
        if (!matEqual(x.domain, y.domain) || !matEqual(x.codomain, y.codomain)) return false;
        if (!matEqual(x.op, y.op) || !matEqual(x.gram, y.gram)) return false;
        if (x.det != y.det) return false;
    }
    return true;
}

bool twistInverses(const TwistResult& direct, const TwistResult& projector) {
    if (direct.blocks.size() != projector.blocks.size()) return false;
    if (!direct.A || direct.A != projector.A) return false;
    const FieldPtr& f = direct.A->field;
    for (std::size_t i = 0; i < direct.blocks.size(); ++i) {
        const TwistBlock &t = direct.blocks[i], &s = projector.blocks[i];
        if (t.drop != s.drop) return false;
        if (t.op.empty() || s.op.empty()) return false;
        if (!matEqual(t.domain, s.codomain) || !matEqual(t.codomain, s.domain)) return false;
        if (!matEqual(matMul(t.op, s.op, f), matIdentity(f, static_cast<int>(t.op.size()))))
            return false;
        if (!matEqual(matMul(s.op, t.op, f), matIdentity(f, static_cast<int>(s.op.size()))))
            return false;
    }
    return true;
}

ReducibilityReport reducibilityCheck(const ModulePtr& V, const ModulePtr& Z, int extraDepth) {
    if (!V->complete)
        throw std::invalid_argument("reducibilityCheck: the first factor must be complete");
    ReducibilityReport R;
    const FieldPtr& f = V->field;
    const RootData& rd = *V->rd;
    const int h = maxDropHeight(*V);
    ModulePtr T = buildTensor(V, Z, h + extraDepth);
    R.T = T;

    bool allNonzero = true;
    for (int sp = 0; sp < V->numSpaces(); ++sp) {
        const Drop& drop = V->drops[static_cast<std::size_t>(sp)];
        SingularSpace S = singularSpace(T, drop);
        ReducibilityBlock blk;
        blk.drop = drop;
        blk.dim = static_cast<int>(S.basis.size());
        blk.det = blk.dim ? matDet(gramRestrict(*T, S.space, S.basis), f) : f->one();
        blk.detStr = blk.det.str();
        if (blk.det.isZero()) allNonzero = false;
        R.blocks.push_back(std::move(blk));
    }
    R.verdict = allNonzero ? "completely reducible" : "degenerate";

    // peel shifted bracket factors [(top weight of Z + rho, root) + j] off the
    // product of determinant numerators; only parameter-bearing factors count
    Poly prod = Poly::constant(f->nvars(), 1);
    bool anyZero = false;
    for (const ReducibilityBlock& blk : R.blocks) {
        if (blk.det.isZero()) {
            anyZero = true;
            continue;
        }
        prod = prod * blk.det.numPoly();
    }
    const int J = h + extraDepth + 2;
    const Weight zr = wAdd(wMake(rd.rho()), Z->highest);
    std::set<std::string> seen;
    std::vector<std::pair<std::string, Poly>> cands;
    for (int idx = 0; idx < rd.numPositive(); ++idx) {
        const Ambient& a = rd.positiveRoot(idx);
        const long qa = rd.qaUnits(a);
        const Scalar X = f->qexp(rd.pairWeight(zr, a, *f));
        for (int j = -J; j <= J; ++j) {
            Scalar br = qbracket(X * f->uPow(j * qa), qa);
            if (br.isZero()) continue;
            bool param = false;
            for (int v = 1; v < f->nvars(); ++v)
                if (br.numPoly().degree(v) > 0) {
                    param = true;
                    break;
                }
            if (!param) continue;
            std::string key = br.str();
            if (seen.insert(key).second) cands.emplace_back(std::move(key), br.numPoly());
        }
    }
    for (const auto& [key, num] : cands) {
        int mult = 0;
        Poly q;
        while (Poly::divideExact(prod, num, q)) {
            prod = q;
            ++mult;
        }
        if (mult) R.locus.emplace_back(key, mult);
    }
    bool leftover = false;
    for (int v = 1; v < f->nvars(); ++v)
        if (prod.degree(v) > 0) leftover = true;
    if (anyZero)
        R.residual = "0";
    else if (leftover)
        R.residual = Scalar::make(f, 1, prod, Poly::constant(f->nvars(), 1)).str();
    return R;
}

std::pair<int, Vec> sphereMonomial(const Module& Z, const std::vector<int>& m) {
    if (Z.kind != ModuleKind::SphereBase)
        throw std::invalid_argument("sphereMonomial: sphere base module required");
    const FieldPtr& f = Z.field;
    const int n = Z.rd->rank();
    if (static_cast<int>(m.size()) != n)
        throw std::invalid_argument("sphereMonomial: one exponent per node");
    const long M = Z.rd->precisionM();

    // words for the orthogonal-coordinate lowerings, built by q-commutators
    // against the next simple generator
    std::vector<std::vector<std::pair<Scalar, std::vector<int>>>> feps(
        static_cast<std::size_t>(n));
    feps[0] = {{f->one(), {0}}};
    for (int k = 1; k < n; ++k) {
        std::vector<std::pair<Scalar, std::vector<int>>> cur;
        for (const auto& [c, w] : feps[static_cast<std::size_t>(k - 1)]) {
            std::vector<int> right = w;
            right.push_back(k);
            cur.emplace_back(c, std::move(right));
            std::vector<int> left;
            left.push_back(k);
            left.insert(left.end(), w.begin(), w.end());
            cur.emplace_back(-(c * f->uPow(-M)), std::move(left));
        }
        feps[static_cast<std::size_t>(k)] = std::move(cur);
    }

    int sp = 0;
    Vec v{f->one()};
    for (int k = n - 1; k >= 0; --k)
        for (int t = 0; t < m[static_cast<std::size_t>(k)]; ++t) {
            auto [nsp, nv] = applyFWordSum(Z, feps[static_cast<std::size_t>(k)], sp, v);
            if (nsp < 0) throw std::runtime_error("sphereMonomial: fell off the stored depth");
            sp = nsp;
            v = std::move(nv);
        }
    return {sp, std::move(v)};
}

SphereTwist sphereTwist(int n, const std::vector<int>& ell) {
    if (n < 1 || n > 4) throw std::invalid_argument("sphereTwist: rank must be 1..4");
    if (static_cast<int>(ell.size()) != n)
        throw std::invalid_argument("sphereTwist: one label per node");
    for (int l : ell)
        if (l < 0) throw std::invalid_argument("sphereTwist: labels must be nonnegative");

    SphereTwist S;
    S.n = n;
    S.ell = ell;
    int dT = 0;
    for (int i = 0; i < n; ++i) dT += (i + 1) * ell[static_cast<std::size_t>(i)];
    const int dZ = std::max(dT, n >= 2 ? 3 : 1);
    S.Z = buildSphereBase(n, dZ);
    const RootDataPtr& rd = S.Z->rd;
    const FieldPtr& f = S.Z->field;

    Ambient nu(static_cast<std::size_t>(rd->ambient()), mpq_class(0));
    for (int i = 0; i < n; ++i)
        nu = ambAdd(nu, ambScale(rd->fundWeight(i), ell[static_cast<std::size_t>(i)]));
    mpq_class hv = 0;
    for (const mpq_class& c : rd->simpleCoords(ambScale(nu, 2))) hv += c;
    const int depthV = static_cast<int>(hv.get_num().get_si()) + 1;
    S.V = buildIrreducibleQuotient(rd, f, wMake(nu), depthV);
    if (!S.V->complete) throw std::runtime_error("sphereTwist: finite factor not certified");
    S.T = buildTensor(S.Z, S.V, dT);

    std::vector<int> m(static_cast<std::size_t>(n), 0);
    while (true) {
        S.monomials.push_back(m);
        int k = n - 1;
        while (k >= 0 && m[static_cast<std::size_t>(k)] == ell[static_cast<std::size_t>(k)]) {
            m[static_cast<std::size_t>(k)] = 0;
            --k;
        }
        if (k < 0) break;
        ++m[static_cast<std::size_t>(k)];
    }

    const std::vector<int> ord = rd->muSequence(rd->longestWord());
    RootVectorSet rv = rootVectorOperators(S.Z, ord);

    // longest raising string e_mu^l w != 0, measured on the module itself
    auto stringLength = [&](int sp0, const Vec& w0, std::size_t pos) {
        const auto& c = rd->positiveRootCoords(ord[pos]);
        long l = 0;
        int csp = sp0;
        Vec cw = w0;
        while (true) {
            auto blk = gopBlock(rv.e[pos], csp);
            if (!blk || blk->empty()) break;
            Vec img = matApply(*blk, cw);
            if (vecIsZero(img)) break;
            Drop d = S.Z->drops[static_cast<std::size_t>(csp)];
            for (std::size_t i = 0; i < d.size(); ++i) d[i] -= c[i];
            csp = S.Z->spaceAt(d);
            if (csp < 0) throw std::runtime_error("sphereTwist: raising image has no space");
            cw = std::move(img);
            ++l;
        }
        return l;
    };

    const Weight nurho = wMake(ambAdd(nu, rd->rho()));
    bool nonzero = true;
    for (const auto& mm : S.monomials) {
        auto [spZ, w] = sphereMonomial(*S.Z, mm);
        Scalar nw = formValue(*S.Z, spZ, w, w);
        if (nw.isZero()) throw std::runtime_error("sphereTwist: monomial of zero norm");
        SingularSpace sing = singularSpace(S.T, S.Z->drops[static_cast<std::size_t>(spZ)]);
        if (sing.basis.size() != 1)
            throw std::runtime_error("sphereTwist: singular space is not a line");
        auto s = deltaOf(sing, w);
        if (!s) throw std::runtime_error("sphereTwist: monomial without a singular lift");
        Scalar entry = formValue(*S.T, sing.space, *s, *s) / nw;
        if (entry.isZero()) nonzero = false;
        S.entries.push_back(std::move(entry));

        Scalar phi = f->one();
        const Weight top = wAdd(nurho, S.Z->weightOf[static_cast<std::size_t>(spZ)]);
        for (std::size_t pos = 0; pos < ord.size(); ++pos) {
            const Ambient& a = rd->positiveRoot(ord[pos]);
            const long qa = rd->qaUnits(a);
            const long l = stringLength(spZ, w, pos);
            const Scalar Xn = f->qexp(rd->pairWeight(top, a, *f));
            const Scalar Xd = f->qexp(rd->pairWeight(nurho, a, *f));
            for (long k = 1; k <= l; ++k) {
                Scalar db = qbracket(Xd * f->uPow(-k * qa), qa);
                if (db.isZero()) throw std::runtime_error("sphereTwist: vanishing denominator bracket");
                phi *= qbracket(Xn * f->uPow(k * qa), qa) / db;
            }
        }
        S.phi.push_back(std::move(phi));
    }
    S.entriesNonzero = nonzero;

    // each diagonal entry agrees with its bracket product up to a unit
    // monomial in u and the extension character; the monomial varies with
    // the weight, so the comparison is per entry, not one overall scalar
    S.phiMatch = !S.entries.empty();
    for (std::size_t k = 0; k < S.entries.size() && S.phiMatch; ++k) {
        if (S.phi[k].isZero()) {
            S.phiMatch = false;
            break;
        }
        Scalar r = S.entries[k] / S.phi[k];
        if (r.isZero() || !r.isUnitMonomial()) S.phiMatch = false;
    }
    if (S.phiMatch) S.globalScale = S.entries[0] / S.phi[0];
    S.verdict = S.entriesNonzero ? "completely reducible" : "degenerate";
    return S;
}

}  // namespace qext
