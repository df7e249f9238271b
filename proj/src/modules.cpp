#include "qext/modules.hpp"

#include "qext/oracle.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qext {

int dropHeight(const Drop& d) {
    int h = 0;
    for (int c : d) h += c;
    return h;
}

std::vector<Drop> dropsAtHeight(int rank, int h) {
    std::vector<Drop> out;
    Drop cur(static_cast<std::size_t>(rank), 0);
    std::function<void(int, int)> rec = [&](int pos, int rem) {
        if (pos == rank - 1) {
            cur[static_cast<std::size_t>(pos)] = rem;
            out.push_back(cur);
            return;
        }
        for (int v = 0; v <= rem; ++v) {
            cur[static_cast<std::size_t>(pos)] = v;
            rec(pos + 1, rem - v);
        }
    };
    rec(0, h);
    return out;
}

namespace {

Drop dropPlus(const Drop& d, int gen, int delta) {
    Drop r = d;
    r[static_cast<std::size_t>(gen)] += delta;
    return r;
}

bool dropValid(const Drop& d) {
    for (int c : d)
        if (c < 0) return false;
    return true;
}

Vec unitVec(const FieldPtr& f, int n, int i) {
    Vec v = vecZero(f, n);
    v[static_cast<std::size_t>(i)] = f->one();
    return v;
}

Ambient dropAmbient(const RootData& rd, const Drop& d) {
    Ambient a(static_cast<std::size_t>(rd.ambient()), mpq_class(0));
    for (int i = 0; i < rd.rank(); ++i)
        if (d[static_cast<std::size_t>(i)] != 0)
            a = ambAdd(a, ambScale(rd.simpleRoot(i), mpq_class(d[static_cast<std::size_t>(i)])));
    return a;
}

Vec matColumn(const FieldPtr& f, const Mat& m, int c) {
    Vec v = vecZero(f, static_cast<int>(m.size()));
    for (std::size_t r = 0; r < m.size(); ++r) v[r] = m[r][static_cast<std::size_t>(c)];
    return v;
}

// ---------------------------------------------------------------------------
// Straightening skeleton: the lowering-word combinatorics of a Verma module
// does not depend on the highest weight, so it is computed once per root
// system at the fixed regular weight -2*rho (every (lambda+rho, beta^vee) is a
// negative integer there, so the module is irreducible to any depth and the
// contravariant Gram matrix detects exactly the generic word dependencies).

struct SkelSpace {
    std::vector<std::vector<int>> labels;
    std::vector<std::pair<int, int>> parentOf;  // (gen, index one level up); (-1,-1) on top
    Mat gram;
};

struct Skeleton {
    FieldPtr field;
    Ambient lambda0;
    int depth = -1;
    std::map<Drop, SkelSpace> spaces;
    std::vector<std::map<Drop, Mat>> fblk, eblk;  // keyed by source drop
};

void buildSkelSpace(Skeleton& sk, const RootData& rd, const Drop& d) {
    const FieldPtr& F = sk.field;
    const int rank = rd.rank();

    struct Cand {
        int gen;
        int par;
        std::vector<int> word;
    };
    std::vector<Cand> cands;
    std::map<std::pair<int, int>, int> candIdx;
    std::vector<int> candGens;
    for (int i = 0; i < rank; ++i) {
        if (d[static_cast<std::size_t>(i)] == 0) continue;
        candGens.push_back(i);
        const SkelSpace& ps = sk.spaces.at(dropPlus(d, i, -1));
        for (int p = 0; p < static_cast<int>(ps.labels.size()); ++p) {
            std::vector<int> w;
            w.reserve(ps.labels[static_cast<std::size_t>(p)].size() + 1);
            w.push_back(i);
            const auto& pw = ps.labels[static_cast<std::size_t>(p)];
            w.insert(w.end(), pw.begin(), pw.end());
            candIdx.emplace(std::make_pair(i, p), static_cast<int>(cands.size()));
            cands.push_back({i, p, std::move(w)});
        }
    }
    const int nc = static_cast<int>(cands.size());
    assert(nc > 0);

    const Ambient xiD = ambSub(sk.lambda0, dropAmbient(rd, d));

    // e_i applied to each candidate f_j x_p, expressed in the kept basis one
    // level up: e_i f_j = f_j e_i + delta_ij * K-bracket
    std::vector<std::vector<Vec>> eOfCand(static_cast<std::size_t>(rank));
    for (int gi : candGens) {
        Drop td = dropPlus(d, gi, -1);
        const int tdim = static_cast<int>(sk.spaces.at(td).labels.size());
        auto& slot = eOfCand[static_cast<std::size_t>(gi)];
        slot.assign(static_cast<std::size_t>(nc), Vec{});
        for (int b = 0; b < nc; ++b) {
            const int j = cands[static_cast<std::size_t>(b)].gen;
            const int pb = cands[static_cast<std::size_t>(b)].par;
            const Drop pd = dropPlus(d, j, -1);
            Vec acc = vecZero(F, tdim);
            const Drop dd = dropPlus(pd, gi, -1);
            if (dropValid(dd)) {
                const Mat& E = sk.eblk[static_cast<std::size_t>(gi)].at(pd);
                Vec col = matColumn(F, E, pb);
                const Mat& FJ = sk.fblk[static_cast<std::size_t>(j)].at(dd);
                acc = vecAdd(acc, matApply(FJ, col));
            }
            if (gi == j) {
                const Ambient xiP = ambAdd(xiD, rd.simpleRoot(gi));
                Scalar X = F->qpow(rd.ip(xiP, rd.simpleRoot(gi)));
                acc[static_cast<std::size_t>(pb)] =
                    acc[static_cast<std::size_t>(pb)] + qbracket(X, rd.qaUnits(rd.simpleRoot(gi)));
            }
            slot[static_cast<std::size_t>(b)] = std::move(acc);
        }
    }

    // contravariant Gram over all candidates:
    // <f_i x, w> = -q^{-(xi+alpha_i, alpha_i)} <x, e_i w>, xi the weight here
    Mat G(static_cast<std::size_t>(nc), Vec(static_cast<std::size_t>(nc)));
    for (int a = 0; a < nc; ++a) {
        const int i = cands[static_cast<std::size_t>(a)].gen;
        const int pa = cands[static_cast<std::size_t>(a)].par;
        const Ambient ai = rd.simpleRoot(i);
        const Scalar pref = -F->qpow(-rd.ip(ambAdd(xiD, ai), ai));
        const Mat& lowG = sk.spaces.at(dropPlus(d, i, -1)).gram;
        const auto& ev = eOfCand[static_cast<std::size_t>(i)];
        for (int b = 0; b < nc; ++b) {
            Scalar s = F->zero();
            const Vec& col = ev[static_cast<std::size_t>(b)];
            for (std::size_t k = 0; k < col.size(); ++k)
                s += col[k] * lowG[static_cast<std::size_t>(pa)][k];
            G[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = pref * s;
        }
    }

    // decide the kept words by Gaussian elimination at a rational sample of u;
    // the Kostant dimension certifies that no generic dependency was missed
    const long want = kostantPartitions(rd, d);
    static const mpq_class u0list[] = {mpq_class(7, 5), mpq_class(11, 3), mpq_class(13, 7),
                                       mpq_class(3, 2), mpq_class(17, 2)};
    std::vector<int> kept;
    for (const mpq_class& u0 : u0list) {
        FieldPtr Fd = Field::create(rd.precisionM(), {}, 0, u0);
        RowSpan span(Fd, nc);
        std::vector<int> tryKept;
        for (int a = 0; a < nc; ++a) {
            Vec row(static_cast<std::size_t>(nc));
            for (int b = 0; b < nc; ++b)
                row[static_cast<std::size_t>(b)] =
                    G[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)].importInto(Fd);
            if (span.add(std::move(row))) tryKept.push_back(a);
        }
        if (static_cast<long>(tryKept.size()) == want) {
            kept = std::move(tryKept);
            break;
        }
    }
    if (static_cast<long>(kept.size()) != want)
        throw std::runtime_error("skeleton: kept-word count does not match the Kostant dimension");

    SkelSpace S;
    std::vector<int> candKept(static_cast<std::size_t>(nc), -1);
    for (int k = 0; k < static_cast<int>(kept.size()); ++k) {
        const Cand& c = cands[static_cast<std::size_t>(kept[static_cast<std::size_t>(k)])];
        S.labels.push_back(c.word);
        S.parentOf.emplace_back(c.gen, c.par);
        candKept[static_cast<std::size_t>(kept[static_cast<std::size_t>(k)])] = k;
    }
    const int dim = static_cast<int>(kept.size());
    S.gram = Mat(static_cast<std::size_t>(dim), Vec(static_cast<std::size_t>(dim)));
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
            S.gram[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
                G[static_cast<std::size_t>(kept[static_cast<std::size_t>(a)])]
                 [static_cast<std::size_t>(kept[static_cast<std::size_t>(b)])];

    // f blocks: kept candidates map to unit columns, dropped ones are
    // straightened exactly against the kept Gram block (valid since the kept
    // vectors are a basis and the form here is nondegenerate)
    std::optional<Mat> ginv;
    for (int gi : candGens) {
        const Drop pd = dropPlus(d, gi, -1);
        const int pdim = static_cast<int>(sk.spaces.at(pd).labels.size());
        Mat B = matZero(F, dim, pdim);
        for (int p = 0; p < pdim; ++p) {
            const int a = candIdx.at(std::make_pair(gi, p));
            if (candKept[static_cast<std::size_t>(a)] >= 0) {
                B[static_cast<std::size_t>(candKept[static_cast<std::size_t>(a)])]
                 [static_cast<std::size_t>(p)] = F->one();
                continue;
            }
            if (!ginv) {
                ginv = matInverse(S.gram, F);
                if (!ginv) throw std::runtime_error("skeleton: kept Gram block is singular");
            }
            Vec rhs(static_cast<std::size_t>(dim));
            for (int m = 0; m < dim; ++m)
                rhs[static_cast<std::size_t>(m)] =
                    G[static_cast<std::size_t>(a)]
                     [static_cast<std::size_t>(kept[static_cast<std::size_t>(m)])];
            Vec c = matApply(*ginv, rhs);
            for (int m = 0; m < dim; ++m)
                B[static_cast<std::size_t>(m)][static_cast<std::size_t>(p)] =
                    c[static_cast<std::size_t>(m)];
        }
        sk.fblk[static_cast<std::size_t>(gi)].emplace(pd, std::move(B));
    }

    for (int gi : candGens) {
        const Drop td = dropPlus(d, gi, -1);
        const int tdim = static_cast<int>(sk.spaces.at(td).labels.size());
        Mat E = matZero(F, tdim, dim);
        for (int k = 0; k < dim; ++k) {
            const Vec& ev = eOfCand[static_cast<std::size_t>(gi)]
                                   [static_cast<std::size_t>(kept[static_cast<std::size_t>(k)])];
            for (int r = 0; r < tdim; ++r)
                E[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] =
                    ev[static_cast<std::size_t>(r)];
        }
        sk.eblk[static_cast<std::size_t>(gi)].emplace(d, std::move(E));
    }

    sk.spaces.emplace(d, std::move(S));
}

void extendSkeleton(Skeleton& sk, const RootData& rd, int depth) {
    const int rank = rd.rank();
    if (sk.depth < 0) {
        sk.field = Field::create(rd.precisionM(), {});
        sk.lambda0 = ambScale(rd.rho(), mpq_class(-2));
        sk.fblk.assign(static_cast<std::size_t>(rank), {});
        sk.eblk.assign(static_cast<std::size_t>(rank), {});
        SkelSpace top;
        top.labels = {{}};
        top.parentOf = {{-1, -1}};
        top.gram = {{sk.field->one()}};
        sk.spaces.emplace(Drop(static_cast<std::size_t>(rank), 0), std::move(top));
        sk.depth = 0;
    }
    for (int h = sk.depth + 1; h <= depth; ++h)
        for (const Drop& d : dropsAtHeight(rank, h)) buildSkelSpace(sk, rd, d);
    sk.depth = std::max(sk.depth, depth);
}

std::string rdCacheKey(const RootData& rd) {
    std::ostringstream os;
    os << lieTypeChar(rd.type()) << rd.rank() << ":" << rd.ipScale() << ":" << rd.precisionM();
    return os.str();
}

const Skeleton& skeletonFor(const RootData& rd, int depth) {
    static std::map<std::string, Skeleton> cache;
    Skeleton& sk = cache[rdCacheKey(rd)];
    extendSkeleton(sk, rd, depth);
    return sk;
}

}  // namespace

// ---------------------------------------------------------------------------

int Module::spaceAt(const Drop& d) const {
    auto it = spaceIndex.find(d);
    return it == spaceIndex.end() ? -1 : it->second;
}

const Mat* Module::fBlock(int gen, int sp) const {
    const auto& m = fblk[static_cast<std::size_t>(gen)];
    auto it = m.find(sp);
    return it == m.end() ? nullptr : &it->second;
}

const Mat* Module::eBlock(int gen, int sp) const {
    const auto& m = eblk[static_cast<std::size_t>(gen)];
    auto it = m.find(sp);
    return it == m.end() ? nullptr : &it->second;
}

Scalar Module::kPow(int gen, int sp, int sign) const {
    Scalar X = field->qexp(
        rd->pairWeight(weightOf[static_cast<std::size_t>(sp)], rd->simpleRoot(gen), *field));
    return sign >= 0 ? X : X.inverse();
}

Vec Module::applyF(int gen, int sp, const Vec& v, int& tsp) const {
    if (const Mat* B = fBlock(gen, sp)) {
        tsp = spaceAt(dropPlus(drops[static_cast<std::size_t>(sp)], gen, +1));
        return matApply(*B, v);
    }
    if (!complete && dropHeight(drops[static_cast<std::size_t>(sp)]) + 1 > depth)
        throw std::runtime_error("applyF: image leaves the stored depth");
    tsp = -1;
    return {};
}

Vec Module::applyE(int gen, int sp, const Vec& v, int& tsp) const {
    if (const Mat* B = eBlock(gen, sp)) {
        tsp = spaceAt(dropPlus(drops[static_cast<std::size_t>(sp)], gen, -1));
        return matApply(*B, v);
    }
    tsp = -1;
    return {};
}

ModulePtr buildVerma(const RootDataPtr& rd, const FieldPtr& field, const Weight& highest,
                     int depth) {
    if (depth < 0) throw std::invalid_argument("buildVerma: negative depth");
    const Skeleton& sk = skeletonFor(*rd, depth);
    auto m = std::make_shared<Module>();
    m->kind = ModuleKind::Verma;
    m->rd = rd;
    m->field = field;
    m->highest = highest;
    m->depth = depth;
    const int rank = rd->rank();
    m->fblk.assign(static_cast<std::size_t>(rank), {});
    m->eblk.assign(static_cast<std::size_t>(rank), {});

    for (int h = 0; h <= depth; ++h)
        for (const Drop& d : dropsAtHeight(rank, h)) {
            const SkelSpace& ss = sk.spaces.at(d);
            const int sp = m->numSpaces();
            m->drops.push_back(d);
            m->spaceIndex.emplace(d, sp);
            m->dims.push_back(static_cast<int>(ss.labels.size()));
            m->weightOf.push_back(wAddBase(highest, dropAmbient(*rd, d), mpq_class(-1)));
            m->labels.push_back(ss.labels);
            m->parentOf.push_back(ss.parentOf);
        }
    m->gramCache.assign(static_cast<std::size_t>(m->numSpaces()), std::nullopt);

    for (int i = 0; i < rank; ++i)
        for (const auto& [srcDrop, B] : sk.fblk[static_cast<std::size_t>(i)]) {
            if (dropHeight(srcDrop) + 1 > depth) continue;
            Mat M2(B.size());
            for (std::size_t r = 0; r < B.size(); ++r) {
                M2[r].reserve(B[r].size());
                for (const Scalar& s : B[r]) M2[r].push_back(s.importInto(field));
            }
            m->fblk[static_cast<std::size_t>(i)].emplace(m->spaceAt(srcDrop), std::move(M2));
        }

    // raising blocks, by the same ladder recursion the skeleton used, now at
    // the requested highest weight
    for (int sp = 0; sp < m->numSpaces(); ++sp) {
        const Drop& d = m->drops[static_cast<std::size_t>(sp)];
        if (dropHeight(d) == 0) continue;
        for (int gi = 0; gi < rank; ++gi) {
            if (d[static_cast<std::size_t>(gi)] == 0) continue;
            const int tsp = m->spaceAt(dropPlus(d, gi, -1));
            Mat E = matZero(field, m->dims[static_cast<std::size_t>(tsp)],
                            m->dims[static_cast<std::size_t>(sp)]);
            for (int k = 0; k < m->dims[static_cast<std::size_t>(sp)]; ++k) {
                const auto [j, pb] = m->parentOf[static_cast<std::size_t>(sp)]
                                                [static_cast<std::size_t>(k)];
                const Drop pd = dropPlus(d, j, -1);
                const int psp = m->spaceAt(pd);
                const Drop dd = dropPlus(pd, gi, -1);
                if (dropValid(dd)) {
                    const Mat* Ep = m->eBlock(gi, psp);
                    Vec col = matColumn(field, *Ep, pb);
                    const Mat* Fj = m->fBlock(j, m->spaceAt(dd));
                    Vec moved = matApply(*Fj, col);
                    for (std::size_t r = 0; r < moved.size(); ++r)
                        E[r][static_cast<std::size_t>(k)] = moved[r];
                }
                if (gi == j) {
                    Scalar X = field->qexp(rd->pairWeight(
                        m->weightOf[static_cast<std::size_t>(psp)], rd->simpleRoot(gi), *field));
                    Scalar B = qbracket(X, rd->qaUnits(rd->simpleRoot(gi)));
                    E[static_cast<std::size_t>(pb)][static_cast<std::size_t>(k)] =
                        E[static_cast<std::size_t>(pb)][static_cast<std::size_t>(k)] + B;
                }
            }
            m->eblk[static_cast<std::size_t>(gi)].emplace(sp, std::move(E));
        }
    }
    return m;
}

namespace {

std::map<int, RowSpan> closureUnderF(const Module& M,
                                     const std::vector<std::pair<int, Vec>>& seeds) {
    std::map<int, RowSpan> spans;
    std::deque<std::pair<int, Vec>> queue(seeds.begin(), seeds.end());
    while (!queue.empty()) {
        auto [sp, v] = std::move(queue.front());
        queue.pop_front();
        if (v.empty() || vecIsZero(v)) continue;
        auto it = spans.find(sp);
        if (it == spans.end())
            it = spans.emplace(sp, RowSpan(M.field, M.dims[static_cast<std::size_t>(sp)])).first;
        if (!it->second.add(v)) continue;
        if (!M.complete && dropHeight(M.drops[static_cast<std::size_t>(sp)]) + 1 > M.depth)
            continue;  // images past the stored range are dropped with the truncation
        for (int g = 0; g < M.rd->rank(); ++g) {
            int tsp = -1;
            Vec img = M.applyF(g, sp, v, tsp);
            if (tsp >= 0 && !vecIsZero(img)) queue.emplace_back(tsp, std::move(img));
        }
    }
    return spans;
}

}  // namespace

ModulePtr quotientBySubmodule(const ModulePtr& Mp, ModuleKind kind,
                              const std::vector<std::pair<int, Vec>>& seeds) {
    const Module& M = *Mp;
    auto spans = closureUnderF(M, seeds);
    for (const auto& [sp, span] : spans)
        for (const Vec& row : span.rows())
            for (int g = 0; g < M.rd->rank(); ++g) {
                int tsp = -1;
                Vec img = M.applyE(g, sp, row, tsp);
                if (tsp < 0 || vecIsZero(img)) continue;
                auto jt = spans.find(tsp);
                if (jt == spans.end() || !jt->second.contains(img))
                    throw std::runtime_error(
                        "quotientBySubmodule: closure is not stable under raising operators");
            }

    auto q = std::make_shared<Module>();
    q->kind = kind;
    q->rd = M.rd;
    q->field = M.field;
    q->highest = M.highest;
    q->depth = M.depth;
    q->quotientOf = Mp;
    const int rank = M.rd->rank();
    q->fblk.assign(static_cast<std::size_t>(rank), {});
    q->eblk.assign(static_cast<std::size_t>(rank), {});

    std::vector<int> qspOf(static_cast<std::size_t>(M.numSpaces()), -1);
    std::vector<std::vector<int>> keptOf(static_cast<std::size_t>(M.numSpaces()));
    for (int sp = 0; sp < M.numSpaces(); ++sp) {
        std::vector<int> kept;
        auto it = spans.find(sp);
        if (it == spans.end()) {
            kept.resize(static_cast<std::size_t>(M.dims[static_cast<std::size_t>(sp)]));
            std::iota(kept.begin(), kept.end(), 0);
        } else {
            const auto& piv = it->second.pivots();
            std::size_t pi = 0;
            for (int c = 0; c < M.dims[static_cast<std::size_t>(sp)]; ++c) {
                if (pi < piv.size() && piv[pi] == c) {
                    ++pi;
                    continue;
                }
                kept.push_back(c);
            }
        }
        if (kept.empty()) continue;
        const int qsp = q->numSpaces();
        qspOf[static_cast<std::size_t>(sp)] = qsp;
        keptOf[static_cast<std::size_t>(sp)] = kept;
        q->drops.push_back(M.drops[static_cast<std::size_t>(sp)]);
        q->spaceIndex.emplace(M.drops[static_cast<std::size_t>(sp)], qsp);
        q->dims.push_back(static_cast<int>(kept.size()));
        q->weightOf.push_back(M.weightOf[static_cast<std::size_t>(sp)]);
        std::vector<std::vector<int>> labs;
        if (!M.labels[static_cast<std::size_t>(sp)].empty())
            for (int c : kept)
                labs.push_back(M.labels[static_cast<std::size_t>(sp)][static_cast<std::size_t>(c)]);
        q->labels.push_back(std::move(labs));
        q->parentSpace.push_back(sp);
        q->keptCols.push_back(std::move(kept));
    }
    q->parentOf.assign(static_cast<std::size_t>(q->numSpaces()), {});
    q->gramCache.assign(static_cast<std::size_t>(q->numSpaces()), std::nullopt);

    auto projectBlocks = [&](const std::vector<std::map<int, Mat>>& src,
                             std::vector<std::map<int, Mat>>& dst, int dir) {
        for (int g = 0; g < rank; ++g)
            for (const auto& [sp, B] : src[static_cast<std::size_t>(g)]) {
                if (qspOf[static_cast<std::size_t>(sp)] < 0) continue;
                const int tsp = M.spaceAt(dropPlus(M.drops[static_cast<std::size_t>(sp)], g, dir));
                if (qspOf[static_cast<std::size_t>(tsp)] < 0) continue;
                const auto& keptS = keptOf[static_cast<std::size_t>(sp)];
                const auto& keptT = keptOf[static_cast<std::size_t>(tsp)];
                Mat QB = matZero(M.field, static_cast<int>(keptT.size()),
                                 static_cast<int>(keptS.size()));
                auto jt = spans.find(tsp);
                for (std::size_t ci = 0; ci < keptS.size(); ++ci) {
                    Vec col = matColumn(M.field, B, keptS[ci]);
                    if (jt != spans.end()) col = jt->second.reduceAgainst(std::move(col));
                    for (std::size_t ri = 0; ri < keptT.size(); ++ri)
                        QB[ri][ci] = col[static_cast<std::size_t>(keptT[ri])];
                }
                dst[static_cast<std::size_t>(g)].emplace(qspOf[static_cast<std::size_t>(sp)],
                                                         std::move(QB));
            }
    };
    projectBlocks(M.fblk, q->fblk, +1);
    projectBlocks(M.eblk, q->eblk, -1);

    bool comp = M.complete;
    if (!comp) {
        comp = true;
        for (int sp = 0; sp < M.numSpaces() && comp; ++sp)
            if (dropHeight(M.drops[static_cast<std::size_t>(sp)]) == M.depth &&
                qspOf[static_cast<std::size_t>(sp)] >= 0)
                comp = false;
    }
    q->complete = comp;
    return q;
}

ModulePtr buildParabolicVerma(const RootDataPtr& rd, const FieldPtr& field, const Weight& highest,
                              const std::vector<int>& leviSimples, int depth) {
    auto verma = buildVerma(rd, field, highest, depth);
    std::vector<std::pair<int, Vec>> seeds;
    for (int i : leviSimples) {
        const Ambient& ai = rd->simpleRoot(i);
        const Ambient coroot = ambScale(ai, mpq_class(1) / rd->normSqHalf(ai));
        QExponent qe = rd->pairWeight(highest, coroot, *field);
        for (const mpq_class& c : qe.chars)
            if (c != 0)
                throw std::invalid_argument("parabolic: symbolic pairing against a Levi coroot");
        for (const mpq_class& s : qe.shifts)
            if (s != 0)
                throw std::invalid_argument("parabolic: symbolic pairing against a Levi coroot");
        if (qe.u.get_den() != 1 || qe.u < 0)
            throw std::invalid_argument(
                "parabolic: (highest weight, Levi coroot) must be a nonnegative integer");
        const long mi = qe.u.get_num().get_si();
        if (mi + 1 > depth) continue;  // the relation starts past the stored range
        int sp = 0;
        Vec v{field->one()};
        for (long k = 0; k <= mi; ++k) v = verma->applyF(i, sp, v, sp);
        seeds.emplace_back(sp, std::move(v));
    }
    auto out = std::make_shared<Module>(*quotientBySubmodule(verma, ModuleKind::ParabolicVerma, seeds));
    out->leviSimples = leviSimples;
    return out;
}

ModulePtr buildIrreducibleQuotient(const RootDataPtr& rd, const FieldPtr& field,
                                   const Weight& highest, int depth) {
    auto verma = buildVerma(rd, field, highest, depth);
    std::vector<std::pair<int, Vec>> seeds;
    for (int sp = 0; sp < verma->numSpaces(); ++sp) {
        Mat ker = kernelBasis(verma->gram(sp), field, verma->dims[static_cast<std::size_t>(sp)]);
        for (Vec& row : ker) seeds.emplace_back(sp, std::move(row));
    }
    return quotientBySubmodule(verma, ModuleKind::IrreducibleQuotient, seeds);
}

ModulePtr buildSphereBase(int n, int depth) {
    if (n < 1) throw std::invalid_argument("sphere: n must be at least 1");
    if (n >= 2 && depth < 3)
        throw std::invalid_argument("sphere: depth must reach the cubic relation");
    auto rd = std::make_shared<RootData>(LieType::B, n);
    const long M = rd->precisionM();
    CharGen z;
    z.name = "z";
    z.vec = Ambient(static_cast<std::size_t>(rd->ambient()), mpq_class(1));  // sum of eps_i
    z.rel = CharRelation{2, -1, -M};                                         // z^2 = -q^{-1}
    FieldPtr field = Field::create(M, {z});
    const Weight hw = wMake(Ambient(static_cast<std::size_t>(rd->ambient()), mpq_class(0)),
                            {mpq_class(1)}, {});
    auto verma = buildVerma(rd, field, hw, depth);
    if (n == 1) {
        Module m = *verma;
        m.kind = ModuleKind::SphereBase;
        return std::make_shared<Module>(std::move(m));
    }
    std::vector<std::pair<int, Vec>> seeds;
    for (int i = 1; i < n; ++i) {
        int sp = 0;
        Vec v = verma->applyF(i, 0, Vec{field->one()}, sp);
        seeds.emplace_back(sp, std::move(v));
    }
    auto P = quotientBySubmodule(verma, ModuleKind::ParabolicVerma, seeds);

    // [[f_2, f_1]_q, f_1]_{q^-1} 1 = (f2 f1^2 - (q + q^-1) f1 f2 f1 + f1^2 f2) 1
    const Scalar qq = field->uPow(M), qqb = field->uPow(-M);
    const std::vector<std::pair<Scalar, std::vector<int>>> cubic = {
        {field->one(), {1, 0, 0}},
        {-(qq + qqb), {0, 1, 0}},
        {field->one(), {0, 0, 1}},
    };
    auto [csp, cvec] = applyFWordSum(*P, cubic, 0, Vec{field->one()});
    std::vector<std::pair<int, Vec>> seeds2;
    if (csp >= 0 && !vecIsZero(cvec)) seeds2.emplace_back(csp, std::move(cvec));
    auto Z = quotientBySubmodule(P, ModuleKind::SphereBase, seeds2);
    return Z;
}

ModulePtr buildTensor(const ModulePtr& Vp, const ModulePtr& Zp, int depth) {
    const Module& V = *Vp;
    const Module& Z = *Zp;
    if (!V.field->sameStructure(*Z.field))
        throw std::invalid_argument("tensor: factors live over different fields");
    if (V.rd->type() != Z.rd->type() || V.rd->rank() != Z.rd->rank())
        throw std::invalid_argument("tensor: factors over different root data");
    if (!(V.complete || V.depth >= depth) || !(Z.complete || Z.depth >= depth))
        throw std::invalid_argument("tensor: factors are too shallow for the requested depth");

    auto m = std::make_shared<Module>();
    m->kind = ModuleKind::Tensor;
    m->rd = V.rd;
    m->field = V.field;
    m->highest = wAdd(V.highest, Z.highest);
    m->depth = depth;
    m->factorV = Vp;
    m->factorZ = Zp;
    const int rank = V.rd->rank();
    m->fblk.assign(static_cast<std::size_t>(rank), {});
    m->eblk.assign(static_cast<std::size_t>(rank), {});

    std::vector<std::map<std::array<int, 4>, int>> pidx;
    for (int h = 0; h <= depth; ++h)
        for (const Drop& d : dropsAtHeight(rank, h)) {
            std::vector<std::array<int, 4>> prs;
            for (int spV = 0; spV < V.numSpaces(); ++spV) {
                const Drop& dv = V.drops[static_cast<std::size_t>(spV)];
                Drop dz(static_cast<std::size_t>(rank));
                bool ok = true;
                for (int i = 0; i < rank && ok; ++i) {
                    dz[static_cast<std::size_t>(i)] =
                        d[static_cast<std::size_t>(i)] - dv[static_cast<std::size_t>(i)];
                    ok = dz[static_cast<std::size_t>(i)] >= 0;
                }
                if (!ok) continue;
                const int spZ = Z.spaceAt(dz);
                if (spZ < 0) continue;
                for (int iV = 0; iV < V.dims[static_cast<std::size_t>(spV)]; ++iV)
                    for (int iZ = 0; iZ < Z.dims[static_cast<std::size_t>(spZ)]; ++iZ)
                        prs.push_back({spV, iV, spZ, iZ});
            }
            if (prs.empty()) continue;
            const int sp = m->numSpaces();
            m->drops.push_back(d);
            m->spaceIndex.emplace(d, sp);
            m->dims.push_back(static_cast<int>(prs.size()));
            m->weightOf.push_back(wAddBase(m->highest, dropAmbient(*V.rd, d), mpq_class(-1)));
            std::map<std::array<int, 4>, int> mp;
            for (int k = 0; k < static_cast<int>(prs.size()); ++k)
                mp.emplace(prs[static_cast<std::size_t>(k)], k);
            pidx.push_back(std::move(mp));
            m->pairs.push_back(std::move(prs));
        }
    m->labels.assign(static_cast<std::size_t>(m->numSpaces()), {});
    m->parentOf.assign(static_cast<std::size_t>(m->numSpaces()), {});
    m->gramCache.assign(static_cast<std::size_t>(m->numSpaces()), std::nullopt);

    for (int sp = 0; sp < m->numSpaces(); ++sp) {
        const Drop& d = m->drops[static_cast<std::size_t>(sp)];
        const int h = dropHeight(d);
        for (int g = 0; g < rank; ++g) {
            // lowering: f(v (x) z) = (f v) (x) z + q^{-(wt v, a)} v (x) (f z)
            if (h + 1 <= depth) {
                const int tsp = m->spaceAt(dropPlus(d, g, +1));
                if (tsp >= 0) {
                    Mat B = matZero(m->field, m->dims[static_cast<std::size_t>(tsp)],
                                    m->dims[static_cast<std::size_t>(sp)]);
                    for (int k = 0; k < m->dims[static_cast<std::size_t>(sp)]; ++k) {
                        const auto [spV, iV, spZ, iZ] =
                            m->pairs[static_cast<std::size_t>(sp)][static_cast<std::size_t>(k)];
                        if (const Mat* FV = V.fBlock(g, spV)) {
                            const int tspV =
                                V.spaceAt(dropPlus(V.drops[static_cast<std::size_t>(spV)], g, +1));
                            for (int r = 0; r < V.dims[static_cast<std::size_t>(tspV)]; ++r) {
                                const Scalar& c =
                                    (*FV)[static_cast<std::size_t>(r)][static_cast<std::size_t>(iV)];
                                if (c.isZero()) continue;
                                const int t = pidx[static_cast<std::size_t>(tsp)].at(
                                    {tspV, r, spZ, iZ});
                                B[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] += c;
                            }
                        }
                        if (const Mat* FZ = Z.fBlock(g, spZ)) {
                            const Scalar Km = V.kPow(g, spV, -1);
                            const int tspZ =
                                Z.spaceAt(dropPlus(Z.drops[static_cast<std::size_t>(spZ)], g, +1));
                            for (int r = 0; r < Z.dims[static_cast<std::size_t>(tspZ)]; ++r) {
                                const Scalar& c =
                                    (*FZ)[static_cast<std::size_t>(r)][static_cast<std::size_t>(iZ)];
                                if (c.isZero()) continue;
                                const int t = pidx[static_cast<std::size_t>(tsp)].at(
                                    {spV, iV, tspZ, r});
                                B[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] +=
                                    Km * c;
                            }
                        }
                    }
                    m->fblk[static_cast<std::size_t>(g)].emplace(sp, std::move(B));
                }
            }
            // raising: e(v (x) z) = (e v) (x) q^{(wt z, a)} z + v (x) (e z)
            const Drop td = dropPlus(d, g, -1);
            if (!dropValid(td)) continue;
            const int tsp = m->spaceAt(td);
            if (tsp < 0) continue;
            Mat B = matZero(m->field, m->dims[static_cast<std::size_t>(tsp)],
                            m->dims[static_cast<std::size_t>(sp)]);
            for (int k = 0; k < m->dims[static_cast<std::size_t>(sp)]; ++k) {
                const auto [spV, iV, spZ, iZ] =
                    m->pairs[static_cast<std::size_t>(sp)][static_cast<std::size_t>(k)];
                if (const Mat* EV = V.eBlock(g, spV)) {
                    const Scalar Kz = Z.kPow(g, spZ, +1);
                    const int tspV =
                        V.spaceAt(dropPlus(V.drops[static_cast<std::size_t>(spV)], g, -1));
                    for (int r = 0; r < V.dims[static_cast<std::size_t>(tspV)]; ++r) {
                        const Scalar& c =
                            (*EV)[static_cast<std::size_t>(r)][static_cast<std::size_t>(iV)];
                        if (c.isZero()) continue;
                        const int t = pidx[static_cast<std::size_t>(tsp)].at({tspV, r, spZ, iZ});
                        B[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] += Kz * c;
                    }
                }
                if (const Mat* EZ = Z.eBlock(g, spZ)) {
                    const int tspZ =
                        Z.spaceAt(dropPlus(Z.drops[static_cast<std::size_t>(spZ)], g, -1));
                    for (int r = 0; r < Z.dims[static_cast<std::size_t>(tspZ)]; ++r) {
                        const Scalar& c =
                            (*EZ)[static_cast<std::size_t>(r)][static_cast<std::size_t>(iZ)];
                        if (c.isZero()) continue;
                        const int t = pidx[static_cast<std::size_t>(tsp)].at({spV, iV, tspZ, r});
                        B[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] += c;
                    }
                }
            }
            m->eblk[static_cast<std::size_t>(g)].emplace(sp, std::move(B));
        }
    }

    int maxV = 0, maxZ = 0;
    for (const Drop& d : V.drops) maxV = std::max(maxV, dropHeight(d));
    for (const Drop& d : Z.drops) maxZ = std::max(maxZ, dropHeight(d));
    m->complete = V.complete && Z.complete && depth >= maxV + maxZ;
    return m;
}

ModulePtr importModule(const ModulePtr& Mp, const FieldPtr& field) {
    const Module& M = *Mp;
    if (static_cast<int>(M.highest.charCoeffs.size()) > field->numChars() ||
        static_cast<int>(M.highest.shiftCoeffs.size()) > field->numShifts())
        throw std::invalid_argument("importModule: target field is narrower than the source");
    auto m = std::make_shared<Module>(M);
    m->field = field;
    auto padW = [&](Weight& w) {
        w.charCoeffs.resize(static_cast<std::size_t>(field->numChars()), mpq_class(0));
        w.shiftCoeffs.resize(static_cast<std::size_t>(field->numShifts()), mpq_class(0));
    };
    padW(m->highest);
    for (Weight& w : m->weightOf) padW(w);
    for (auto* blocks : {&m->fblk, &m->eblk})
        for (auto& perGen : *blocks)
            for (auto& [sp, B] : perGen)
                for (Vec& row : B)
                    for (Scalar& s : row) s = s.importInto(field);
    m->gramCache.assign(static_cast<std::size_t>(m->numSpaces()), std::nullopt);
    return m;
}

std::pair<int, Vec> wordVector(const Module& M, const std::vector<int>& word) {
    int sp = 0;
    Vec v{M.field->one()};
    for (int k = static_cast<int>(word.size()) - 1; k >= 0; --k) {
        v = M.applyF(word[static_cast<std::size_t>(k)], sp, v, sp);
        if (sp < 0) return {-1, {}};
    }
    return {sp, std::move(v)};
}

std::pair<int, Vec> applyFWordSum(const Module& M,
                                  const std::vector<std::pair<Scalar, std::vector<int>>>& ops,
                                  int sp, const Vec& v) {
    std::optional<Drop> tdrop;
    int tsp = -1;
    Vec acc;
    for (const auto& [coef, word] : ops) {
        Drop td = M.drops[static_cast<std::size_t>(sp)];
        for (int g : word) td[static_cast<std::size_t>(g)] += 1;
        if (tdrop && *tdrop != td)
            throw std::invalid_argument("applyFWordSum: words with different total drops");
        if (!tdrop) {
            tdrop = td;
            tsp = M.spaceAt(td);
            if (tsp >= 0) acc = vecZero(M.field, M.dims[static_cast<std::size_t>(tsp)]);
        }
        int cs = sp;
        Vec cur = v;
        for (int k = static_cast<int>(word.size()) - 1; k >= 0 && cs >= 0; --k)
            cur = M.applyF(word[static_cast<std::size_t>(k)], cs, cur, cs);
        if (cs < 0 || vecIsZero(cur)) continue;
        vecAddScaled(acc, coef, cur);
    }
    if (tsp < 0) return {-1, {}};
    return {tsp, std::move(acc)};
}

std::string validateModule(const Module& M) {
    const RootData& rd = *M.rd;
    const int rank = rd.rank();
    const FieldPtr& F = M.field;
    std::vector<long> qaU(static_cast<std::size_t>(rank));
    for (int i = 0; i < rank; ++i) qaU[static_cast<std::size_t>(i)] = rd.qaUnits(rd.simpleRoot(i));

    auto fail = [&](int sp, int i, int j, const char* what) {
        std::ostringstream os;
        os << what << " fails for generators (" << i << "," << j << ") at drop (";
        const Drop& d = M.drops[static_cast<std::size_t>(sp)];
        for (int k = 0; k < rank; ++k) os << (k ? "," : "") << d[static_cast<std::size_t>(k)];
        os << ")";
        return os.str();
    };

    for (int sp = 0; sp < M.numSpaces(); ++sp) {
        const int h = dropHeight(M.drops[static_cast<std::size_t>(sp)]);
        const bool canLower = M.complete || h + 1 <= M.depth;
        const int dim = M.dims[static_cast<std::size_t>(sp)];

        // [e_i, f_j] = delta_ij (K_i - K_i^{-1})/(q_i - q_i^{-1})
        if (canLower)
            for (int i = 0; i < rank; ++i)
                for (int j = 0; j < rank; ++j)
                    for (int k = 0; k < dim; ++k) {
                        const Vec v = unitVec(F, dim, k);
                        Drop td = dropPlus(dropPlus(M.drops[static_cast<std::size_t>(sp)], j, +1),
                                           i, -1);
                        const int tspc = dropValid(td) ? M.spaceAt(td) : -1;
                        Vec diff = tspc >= 0
                                       ? vecZero(F, M.dims[static_cast<std::size_t>(tspc)])
                                       : Vec{};
                        int t1 = -1;
                        Vec a = M.applyF(j, sp, v, t1);
                        if (t1 >= 0) {
                            int t2 = -1;
                            Vec a2 = M.applyE(i, t1, a, t2);
                            if (t2 >= 0) diff = vecAdd(diff, a2);
                        }
                        int s1 = -1;
                        Vec b = M.applyE(i, sp, v, s1);
                        if (s1 >= 0) {
                            int s2 = -1;
                            Vec b2 = M.applyF(j, s1, b, s2);
                            if (s2 >= 0) diff = vecSub(diff, b2);
                        }
                        if (i == j && tspc >= 0) {
                            const Scalar B = qbracket(M.kPow(i, sp),
                                                      qaU[static_cast<std::size_t>(i)]);
                            diff[static_cast<std::size_t>(k)] =
                                diff[static_cast<std::size_t>(k)] - B;
                        }
                        if (!diff.empty() && !vecIsZero(diff))
                            return fail(sp, i, j, "commutator relation");
                    }

        // q-Serre relations in both directions
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j) {
                if (i == j) continue;
                const int N = 1 - rd.cartan()[static_cast<std::size_t>(i)]
                                             [static_cast<std::size_t>(j)];
                const bool canSerreLower = M.complete || h + N + 1 <= M.depth;
                for (int dir = 0; dir < 2; ++dir) {
                    if (dir == 0 && !canSerreLower) continue;
                    for (int k = 0; k < dim; ++k) {
                        Vec acc;
                        int accSp = -1;
                        for (int kk = 0; kk <= N; ++kk) {
                            Scalar c = qbinom(F, N, kk, qaU[static_cast<std::size_t>(i)]);
                            if (kk % 2 == 1) c = -c;
                            int cs = sp;
                            Vec cur = unitVec(F, dim, k);
                            auto step = [&](int g) {
                                if (cs < 0) return;
                                cur = dir == 0 ? M.applyF(g, cs, cur, cs)
                                               : M.applyE(g, cs, cur, cs);
                            };
                            for (int r = 0; r < kk; ++r) step(i);
                            step(j);
                            for (int r = 0; r < N - kk; ++r) step(i);
                            if (cs < 0 || vecIsZero(cur)) continue;
                            if (accSp < 0) {
                                accSp = cs;
                                acc = vecZero(F, M.dims[static_cast<std::size_t>(cs)]);
                            }
                            vecAddScaled(acc, c, cur);
                        }
                        if (accSp >= 0 && !vecIsZero(acc))
                            return fail(sp, i, j, dir == 0 ? "lowering Serre relation"
                                                           : "raising Serre relation");
                    }
                }
            }
    }
    return "";
}

}  // namespace qext
