#include "qext/projector.hpp"

#include <cassert>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qext {

namespace {

std::vector<int> dropShifted(const Drop& d, const std::vector<int>& shift) {
    std::vector<int> r(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) r[i] = d[i] + shift[i];
    return r;
}

bool dropValid(const std::vector<int>& d) {
    for (int x : d)
        if (x < 0) return false;
    return true;
}

int genOfSimpleRoot(const RootData& rd, int rootIdx) {
    for (int g = 0; g < rd.rank(); ++g)
        if (rd.simpleRootIndex(g) == rootIdx) return g;
    return -1;
}

std::string rootStr(const RootData& rd, int rootIdx) {
    const auto& c = rd.positiveRootCoords(rootIdx);
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
    os << ")";
    return os.str();
}

}  // namespace

GradedOperator gopGenF(const ModulePtr& M, int gen) {
    GradedOperator g;
    g.M = M;
    g.shift.assign(static_cast<std::size_t>(M->rd->rank()), 0);
    g.shift[static_cast<std::size_t>(gen)] = 1;
    g.blocks = M->fblk[static_cast<std::size_t>(gen)];
    return g;
}

GradedOperator gopGenE(const ModulePtr& M, int gen) {
    GradedOperator g;
    g.M = M;
    g.shift.assign(static_cast<std::size_t>(M->rd->rank()), 0);
    g.shift[static_cast<std::size_t>(gen)] = -1;
    g.blocks = M->eblk[static_cast<std::size_t>(gen)];
    return g;
}

std::optional<Mat> gopBlock(const GradedOperator& g, int sp) {
    const Module& M = *g.M;
    assert(sp >= 0 && sp < M.numSpaces());
    if (g.unresolved.count(sp)) return std::nullopt;
    auto it = g.blocks.find(sp);
    if (it != g.blocks.end()) return it->second;
    std::vector<int> td = dropShifted(M.drops[static_cast<std::size_t>(sp)], g.shift);
    if (!dropValid(td)) return Mat{};
    int t = M.spaceAt(td);
    if (t >= 0) return matZero(M.field, M.dims[static_cast<std::size_t>(t)],
                               M.dims[static_cast<std::size_t>(sp)]);
    if (dropHeight(td) <= M.depth || M.complete) return Mat{};  // dead space
    return std::nullopt;
}

GradedOperator gopCompose(const GradedOperator& a, const GradedOperator& b) {
    assert(a.M == b.M);
    const Module& M = *b.M;
    GradedOperator out;
    out.M = b.M;
    out.shift = dropShifted(a.shift, b.shift);
    for (int sp = 0; sp < M.numSpaces(); ++sp) {
        auto bb = gopBlock(b, sp);
        if (!bb) {
            out.unresolved.insert(sp);
            continue;
        }
        if (bb->empty() || matIsZero(*bb)) continue;
        int t1 = M.spaceAt(dropShifted(M.drops[static_cast<std::size_t>(sp)], b.shift));
        assert(t1 >= 0);  // a nonzero block lands in a stored space
        auto aa = gopBlock(a, t1);
        if (!aa) {
            out.unresolved.insert(sp);
            continue;
        }
        if (aa->empty()) continue;
        Mat prod = matMul(*aa, *bb, M.field);
        if (!matIsZero(prod)) out.blocks.emplace(sp, std::move(prod));
    }
    return out;
}

GradedOperator gopSub(const GradedOperator& a, const GradedOperator& b) {
    assert(a.M == b.M && a.shift == b.shift);
    const Module& M = *a.M;
    GradedOperator out;
    out.M = a.M;
    out.shift = a.shift;
    for (int sp = 0; sp < M.numSpaces(); ++sp) {
        if (a.unresolved.count(sp) || b.unresolved.count(sp)) {
            out.unresolved.insert(sp);
            continue;
        }
        if (!a.blocks.count(sp) && !b.blocks.count(sp)) continue;
        auto aa = gopBlock(a, sp);
        auto bb = gopBlock(b, sp);
        if (!aa || !bb) {
            out.unresolved.insert(sp);
            continue;
        }
        if (aa->empty() && bb->empty()) continue;
        Mat diff = aa->empty() ? matScale(*bb, -M.field->one())
                 : bb->empty() ? *aa
                               : matAdd(*aa, matScale(*bb, -M.field->one()));
        if (!matIsZero(diff)) out.blocks.emplace(sp, std::move(diff));
    }
    return out;
}

GradedOperator gopScale(const GradedOperator& a, const Scalar& c) {
    GradedOperator out;
    out.M = a.M;
    out.shift = a.shift;
    out.unresolved = a.unresolved;
    for (const auto& [sp, m] : a.blocks) {
        Mat s = matScale(m, c);
        if (!matIsZero(s)) out.blocks.emplace(sp, std::move(s));
    }
    return out;
}

namespace {

// position of each positive root in the ordering, -1 if absent
std::vector<int> orderingPositions(const RootData& rd, const std::vector<int>& ord) {
    std::vector<int> pos(static_cast<std::size_t>(rd.numPositive()), -1);
    for (std::size_t i = 0; i < ord.size(); ++i) pos[static_cast<std::size_t>(ord[i])] =
        static_cast<int>(i);
    return pos;
}

// mu = earlier + later with earlier strictly before and later strictly after
// mu in the ordering; the earliest admissible earlier wins
struct Split {
    int earlierPos, laterPos;
};

Split splitComposite(const RootData& rd, const std::vector<int>& ord, const std::vector<int>& pos,
                     int p) {
    const Ambient& mu = rd.positiveRoot(ord[static_cast<std::size_t>(p)]);
    for (int a = 0; a < p; ++a) {
        const Ambient& e = rd.positiveRoot(ord[static_cast<std::size_t>(a)]);
        int lidx = rd.findRoot(ambSub(mu, e));
        if (lidx < 0) continue;
        int lp = pos[static_cast<std::size_t>(lidx)];
        if (lp > p) return {a, lp};
    }
    throw std::runtime_error(
        "root vector construction: ordering/normalization mismatch (no admissible "
        "decomposition of root " +
        rootStr(rd, ord[static_cast<std::size_t>(p)]) + ")");
}

void buildRootOps(const ModulePtr& M, const std::vector<int>& ord,
                  std::vector<GradedOperator>& eops, std::vector<GradedOperator>& fops) {
    const RootData& rd = *M->rd;
    auto pos = orderingPositions(rd, ord);
    int n = static_cast<int>(ord.size());
    eops.assign(static_cast<std::size_t>(n), {});
    fops.assign(static_cast<std::size_t>(n), {});
    std::vector<char> done(static_cast<std::size_t>(n), 0);
    std::function<void(int)> build = [&](int p) {
        if (done[static_cast<std::size_t>(p)]) return;
        done[static_cast<std::size_t>(p)] = 1;  // safe: recursion descends in height
        int ridx = ord[static_cast<std::size_t>(p)];
        if (rd.rootHeight(ridx) == 1) {
            int g = genOfSimpleRoot(rd, ridx);
            eops[static_cast<std::size_t>(p)] = gopGenE(M, g);
            fops[static_cast<std::size_t>(p)] = gopGenF(M, g);
            return;
        }
        Split s = splitComposite(rd, ord, pos, p);
        build(s.earlierPos);
        build(s.laterPos);
        const Ambient& eRoot = rd.positiveRoot(ord[static_cast<std::size_t>(s.earlierPos)]);
        const Ambient& lRoot = rd.positiveRoot(ord[static_cast<std::size_t>(s.laterPos)]);
        mpq_class pairing = rd.ip(lRoot, eRoot);
        const auto& eL = eops[static_cast<std::size_t>(s.laterPos)];
        const auto& eE = eops[static_cast<std::size_t>(s.earlierPos)];
        const auto& fL = fops[static_cast<std::size_t>(s.laterPos)];
        const auto& fE = fops[static_cast<std::size_t>(s.earlierPos)];
        eops[static_cast<std::size_t>(p)] =
            gopSub(gopCompose(eL, eE), gopScale(gopCompose(eE, eL), M->field->qpow(-pairing)));
        fops[static_cast<std::size_t>(p)] =
            gopSub(gopCompose(fE, fL), gopScale(gopCompose(fL, fE), M->field->qpow(pairing)));
    };
    for (int p = 0; p < n; ++p) build(p);
}

// rebuild a char- and shift-free value over the bare field of the same
// precision (the normalization constants must be weight-independent)
Scalar toBareField(const Scalar& s, const FieldPtr& bare) {
    auto conv = [&](const Poly& p) {
        std::vector<Term> ts;
        ts.reserve(p.terms().size());
        for (const auto& t : p.terms()) {
            for (std::size_t v = 1; v < t.mon.size(); ++v)
                if (t.mon[v] != 0)
                    throw std::runtime_error(
                        "root vector construction: ordering/normalization mismatch "
                        "(weight-dependent normalization)");
            ts.push_back({Expo{t.mon[0]}, t.c});
        }
        return Poly::fromTerms(1, std::move(ts));
    };
    return Scalar::make(bare, s.scaleQ(), conv(s.numPoly()), conv(s.denPoly()));
}

std::string orderingKey(const RootData& rd, const std::vector<int>& ord) {
    std::ostringstream os;
    os << lieTypeChar(rd.type()) << rd.rank() << ":" << rd.ipScale().get_str() << ":";
    for (int r : ord) os << r << ",";
    return os.str();
}

// a_mu per ordering position, certified on an internal symbolic Verma
const std::vector<Scalar>& cachedNorms(const RootDataPtr& rd, const std::vector<int>& ord) {
    static std::map<std::string, std::vector<Scalar>> cache;
    std::string key = orderingKey(*rd, ord);
    auto hit = cache.find(key);
    if (hit != cache.end()) return hit->second;

    std::vector<CharGen> gens;
    for (int i = 0; i < rd->rank(); ++i)
        gens.push_back(CharGen{"w" + std::to_string(i + 1), rd->dualSimple(i), std::nullopt,
                               std::nullopt});
    FieldPtr fg = Field::create(rd->precisionM(), gens);
    int htmax = 0;
    for (int r : ord) htmax = std::max(htmax, rd->rootHeight(r));
    int depth = htmax + (rd->rank() <= 2 ? 2 : 1);
    Weight hw = wMake(Ambient(static_cast<std::size_t>(rd->ambient()), 0),
                      std::vector<mpq_class>(static_cast<std::size_t>(rd->rank()), 1));
    ModulePtr vg = buildVerma(rd, fg, hw, depth);

    std::vector<GradedOperator> eops, fops;
    buildRootOps(vg, ord, eops, fops);

    FieldPtr bare = Field::create(rd->precisionM(), {});
    std::vector<Scalar> norms;
    for (std::size_t p = 0; p < ord.size(); ++p) {
        int ridx = ord[p];
        const Ambient& mu = rd->positiveRoot(ridx);
        long qa = rd->qaUnits(mu);
        int htmu = rd->rootHeight(ridx);
        GradedOperator com = gopSub(gopCompose(eops[p], fops[p]), gopCompose(fops[p], eops[p]));
        auto expected = [&](int sp) {
            return qbracket(fg->qexp(rd->pairWeight(vg->weightOf[static_cast<std::size_t>(sp)],
                                                    mu, *fg)),
                            qa);
        };
        Mat top = *gopBlock(com, 0);
        Scalar a = top[0][0] * expected(0).inverse();
        if (a.isZero())
            throw std::runtime_error(
                "root vector construction: ordering/normalization mismatch (vanishing "
                "normalization for root " +
                rootStr(*rd, ridx) + ")");
        for (int sp = 0; sp < vg->numSpaces(); ++sp) {
            if (dropHeight(vg->drops[static_cast<std::size_t>(sp)]) + htmu > depth) continue;
            auto blk = gopBlock(com, sp);
            assert(blk);
            Mat want = matScale(matIdentity(fg, vg->dims[static_cast<std::size_t>(sp)]),
                                a * expected(sp));
            Mat got = blk->empty()
                          ? matZero(fg, vg->dims[static_cast<std::size_t>(sp)],
                                    vg->dims[static_cast<std::size_t>(sp)])
                          : *blk;
            if (!matEqual(got, want))
                throw std::runtime_error(
                    "root vector construction: ordering/normalization mismatch (non-scalar "
                    "commutator remainder for root " +
                    rootStr(*rd, ridx) + ")");
        }
        norms.push_back(toBareField(a, bare));
    }
    return cache.emplace(std::move(key), std::move(norms)).first->second;
}

}  // namespace

RootVectorSet rootVectorOperators(const ModulePtr& M, const std::vector<int>& ordering) {
    if (!M->rd->isNormalOrdering(ordering))
        throw std::invalid_argument("rootVectorOperators: not a normal ordering");
    RootVectorSet rv;
    rv.M = M;
    rv.ordering = ordering;
    buildRootOps(M, ordering, rv.e, rv.f);
    for (const Scalar& a : cachedNorms(M->rd, ordering)) rv.norm.push_back(a.importInto(M->field));
    return rv;
}

RootVectorSet rootVectorOperators(const ModulePtr& M) {
    return rootVectorOperators(M, M->rd->muSequence(M->rd->longestWord()));
}

Mat projectorFactorBlock(const RootVectorSet& rv, int pos, const Scalar& S, int sp) {
    const Module& M = *rv.M;
    const FieldPtr& F = M.field;
    const RootData& rd = *M.rd;
    int ridx = rv.ordering[static_cast<std::size_t>(pos)];
    const Ambient& mu = rd.positiveRoot(ridx);
    long qa = rd.qaUnits(mu);
    int dim = M.dims[static_cast<std::size_t>(sp)];
    Mat out = matIdentity(F, dim);
    Scalar X = F->qexp(rd.pairWeight(M.weightOf[static_cast<std::size_t>(sp)], mu, *F));
    Scalar aInv = rv.norm[static_cast<std::size_t>(pos)].inverse();
    Mat Ek = matIdentity(F, dim);
    Mat Fk = matIdentity(F, dim);
    int cur = sp;
    Scalar head = F->one();     // (-1)^k S^k q_mu^{-k} a_mu^{-k}
    Scalar denFact = F->one();  // [k]_{q_mu}!
    Scalar denBr = F->one();    // prod_{i<=k} [h_mu + t + i]_{q_mu} at the source weight
    for (int k = 1;; ++k) {
        auto eb = gopBlock(rv.e[static_cast<std::size_t>(pos)], cur);
        assert(eb);  // raising stays within the stored drops
        if (eb->empty()) break;
        Mat Enew = matMul(*eb, Ek, F);
        if (matIsZero(Enew)) break;
        int tcur = M.spaceAt(dropShifted(M.drops[static_cast<std::size_t>(cur)],
                                         rv.e[static_cast<std::size_t>(pos)].shift));
        assert(tcur >= 0);
        auto fb = gopBlock(rv.f[static_cast<std::size_t>(pos)], tcur);
        assert(fb && !fb->empty());  // descends back through stored spaces
        Fk = matMul(Fk, *fb, F);
        Ek = std::move(Enew);
        cur = tcur;
        Scalar br = qbracket(X * S * F->uPow(k * qa), qa);
        if (br.isZero())
            throw PoleError("extremal projector factor for root " + rootStr(rd, ridx) +
                                ": bracket [h+t+" + std::to_string(k) +
                                "] vanishes on the requested block",
                            k);
        head = -(head * S * F->uPow(-qa)) * aInv;
        denFact = denFact * qnum(F, k, qa);
        denBr = denBr * br;
        out = matAdd(out, matScale(matMul(Fk, Ek, F), head * (denFact * denBr).inverse()));
    }
    return out;
}

Mat shiftedProjectorBlockSubset(const RootVectorSet& rv, const Weight& lambda,
                                const std::vector<int>& positions, int sp) {
    const Module& M = *rv.M;
    const FieldPtr& F = M.field;
    Weight arg = wAdd(wMake(M.rd->rho()), lambda);
    Mat acc = matIdentity(F, M.dims[static_cast<std::size_t>(sp)]);
    for (auto it = positions.rbegin(); it != positions.rend(); ++it) {
        const Ambient& mu = M.rd->positiveRoot(rv.ordering[static_cast<std::size_t>(*it)]);
        Scalar S = F->qexp(M.rd->pairWeight(arg, mu, *F));
        acc = matMul(projectorFactorBlock(rv, *it, S, sp), acc, F);
    }
    return acc;
}

Mat shiftedProjectorBlock(const RootVectorSet& rv, const Weight& lambda, int sp) {
    std::vector<int> all(rv.ordering.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    return shiftedProjectorBlockSubset(rv, lambda, all, sp);
}

std::vector<Ambient> defaultDirections(const RootData& rd) {
    std::vector<Ambient> dirs;
    dirs.push_back(rd.rho());
    std::mt19937_64 rng(0x7e57d1aULL + static_cast<unsigned>(rd.rank()) * 131u +
                        static_cast<unsigned>(lieTypeChar(rd.type())));
    Ambient d1(static_cast<std::size_t>(rd.ambient()), 0);
    Ambient d2(static_cast<std::size_t>(rd.ambient()), 0);
    for (int i = 0; i < rd.rank(); ++i) {
        long c1 = 1 + static_cast<long>(rng() % 5);
        long c2 = static_cast<long>(rng() % 7) - 3;
        if (c2 == 0) c2 = 4;
        d1 = ambAdd(d1, ambScale(rd.fundWeight(i), c1));
        d2 = ambAdd(d2, ambScale(rd.fundWeight(i), c2));
    }
    dirs.push_back(d1);
    dirs.push_back(d2);
    return dirs;
}

RegularizedBlock regularize(const FieldPtr& base, const RootData& rd, const Weight& lambda0,
                            const LambdaRecipe& recipe, std::vector<Ambient> directions) {
    if (directions.empty()) directions = defaultDirections(rd);
    RegularizedBlock out;
    std::optional<Mat> agreed;
    bool disagree = false;
    for (const Ambient& eta : directions) {
        RegularizationProbe probe;
        probe.direction = eta;
        std::vector<std::vector<mpq_class>> vecs;
        for (int j = 0; j < base->numShifts(); ++j) vecs.push_back(base->shiftVec(j));
        vecs.push_back(eta);
        FieldPtr pf = base->withShiftVecs(std::move(vecs));
        int aux = pf->numShifts() - 1;
        Weight lam = lambda0;
        lam.shiftCoeffs.resize(static_cast<std::size_t>(base->numShifts()), 0);
        lam.shiftCoeffs.push_back(1);
        try {
            Mat block = recipe(pf, lam);
            Mat lim;
            lim.reserve(block.size());
            for (const auto& row : block) {
                Vec r;
                r.reserve(row.size());
                for (const auto& x : row) r.push_back(x.limitAtUnity(aux));
                lim.push_back(std::move(r));
            }
            probe.finite = true;
            if (!agreed)
                agreed = std::move(lim);
            else if (!matEqual(*agreed, lim))
                disagree = true;
        } catch (const PoleError& e) {
            probe.note = std::string(e.what()) + " [order " + std::to_string(e.order) + "]";
        }
        out.probes.push_back(std::move(probe));
    }
    if (agreed && !disagree) {
        out.wellDefined = true;
        for (const auto& row : *agreed) {
            Vec r;
            r.reserve(row.size());
            for (const auto& x : row) r.push_back(x.importInto(base));
            out.value.push_back(std::move(r));
        }
    }
    return out;
}

RegularizedBlock regularizedProjectorBlock(const ModulePtr& M, const std::vector<int>& ordering,
                                           const Weight& lambda0, int sp,
                                           std::vector<Ambient> directions) {
    LambdaRecipe recipe = [&](const FieldPtr& pf, const Weight& lam) {
        ModulePtr m2 = importModule(M, pf);
        RootVectorSet rv = rootVectorOperators(m2, ordering);
        return shiftedProjectorBlock(rv, lam, sp);
    };
    return regularize(M->field, *M->rd, lambda0, recipe, std::move(directions));
}

}  // namespace qext
