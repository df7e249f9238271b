#include "qext/oracle.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <functional>
#include <stdexcept>

namespace qext {

long kostantPartitions(const RootData& rd, const std::vector<int>& drop) {
    const int rank = rd.rank();
    assert(static_cast<int>(drop.size()) == rank);
    for (int c : drop)
        if (c < 0) return 0;

    std::vector<std::vector<int>> roots;
    for (int b = 0; b < rd.numPositive(); ++b) roots.push_back(rd.positiveRootCoords(b));

    std::map<std::pair<int, std::vector<int>>, long> memo;
    std::function<long(int, const std::vector<int>&)> go = [&](int ri,
                                                               const std::vector<int>& rest) {
        bool zero = true;
        for (int c : rest) zero = zero && c == 0;
        if (zero) return 1L;
        if (ri == static_cast<int>(roots.size())) return 0L;
        auto key = std::make_pair(ri, rest);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        long total = 0;
        std::vector<int> cur = rest;
        for (;;) {
            total += go(ri + 1, cur);
            bool ok = true;
            for (int i = 0; i < rank; ++i) {
                cur[i] -= roots[ri][i];
                if (cur[i] < 0) ok = false;
            }
            if (!ok) break;
        }
        memo.emplace(key, total);
        return total;
    };
    return go(0, drop);
}

bool AmbLess::operator()(const Ambient& a, const Ambient& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (b[i] < a[i]) return false;
    }
    return false;
}

namespace {

Ambient dropAmbient(const RootData& rd, const Drop& d) {
    Ambient a(static_cast<std::size_t>(rd.ambient()), mpq_class(0));
    for (int i = 0; i < rd.rank(); ++i)
        if (d[static_cast<std::size_t>(i)] != 0)
            a = ambAdd(a, ambScale(rd.simpleRoot(i), mpq_class(d[static_cast<std::size_t>(i)])));
    return a;
}

void requireDominantIntegral(const RootData& rd, const Ambient& hw) {
    for (int i = 0; i < rd.rank(); ++i) {
        mpq_class p = rd.pairCoroot(hw, rd.simpleRoot(i));
        if (p < 0 || p.get_den() != 1)
            throw std::invalid_argument("character oracle: weight is not dominant integral");
    }
}

}  // namespace

long weylDim(const RootData& rd, const Ambient& hw) {
    requireDominantIntegral(rd, hw);
    const Ambient lr = ambAdd(hw, rd.rho());
    mpq_class num = 1, den = 1;
    for (int b = 0; b < rd.numPositive(); ++b) {
        num *= rd.ip(lr, rd.positiveRoot(b));
        den *= rd.ip(rd.rho(), rd.positiveRoot(b));
    }
    mpq_class dim = num / den;
    assert(dim.get_den() == 1);
    return dim.get_num().get_si();
}

CharacterVector weylCharacter(const RootData& rd, const Ambient& hw) {
    requireDominantIntegral(rd, hw);
    const int rank = rd.rank();
    const Ambient rho = rd.rho();

    // support bound: everything lies between w0(hw) and hw
    const Ambient low = rd.wApply(rd.longest(), hw);
    std::vector<mpq_class> span = rd.simpleCoordsRaw(ambSub(hw, low));
    long htBound = 0;
    for (const mpq_class& c : span) {
        assert(c.get_den() == 1 && c >= 0);
        htBound += c.get_num().get_si();
    }

    const mpq_class topNorm = rd.ip(ambAdd(hw, rho), ambAdd(hw, rho));
    std::map<Drop, long> mult;
    CharacterVector out;
    for (long h = 0; h <= htBound; ++h)
        for (const Drop& d : dropsAtHeight(rank, static_cast<int>(h))) {
            const Ambient mu = ambSub(hw, dropAmbient(rd, d));
            long m;
            if (h == 0) {
                m = 1;
            } else {
                // Freudenthal: m * (|hw+rho|^2 - |mu+rho|^2)
                //            = 2 sum_{a>0} sum_{k>=1} m_{mu+ka} (mu+ka, a)
                mpq_class num = 0;
                for (int b = 0; b < rd.numPositive(); ++b) {
                    const auto& rc = rd.positiveRootCoords(b);
                    Drop up = d;
                    for (long k = 1;; ++k) {
                        bool ok = true;
                        for (int i = 0; i < rank; ++i) {
                            up[static_cast<std::size_t>(i)] -= rc[static_cast<std::size_t>(i)];
                            if (up[static_cast<std::size_t>(i)] < 0) ok = false;
                        }
                        if (!ok) break;
                        auto it = mult.find(up);
                        if (it == mult.end() || it->second == 0) continue;
                        const Ambient w = ambSub(hw, dropAmbient(rd, up));
                        num += mpq_class(2 * it->second) * rd.ip(w, rd.positiveRoot(b));
                    }
                }
                if (num == 0) {
                    m = 0;
                } else {
                    const Ambient mr = ambAdd(mu, rho);
                    mpq_class den = topNorm - rd.ip(mr, mr);
                    assert(den > 0);
                    mpq_class q = num / den;
                    assert(q.get_den() == 1);
                    m = q.get_num().get_si();
                }
            }
            if (m != 0) {
                mult.emplace(d, m);
                out.emplace(mu, m);
            }
        }
    return out;
}

std::vector<std::pair<Ambient, long>> tensorDecompose(const RootData& rd, const Ambient& nu1,
                                                      const Ambient& nu2) {
    CharacterVector c1 = weylCharacter(rd, nu1);
    CharacterVector c2 = weylCharacter(rd, nu2);
    CharacterVector prod;
    for (const auto& [w1, m1] : c1)
        for (const auto& [w2, m2] : c2) prod[ambAdd(w1, w2)] += m1 * m2;

    std::map<Ambient, CharacterVector, AmbLess> charCache;
    std::vector<std::pair<Ambient, long>> out;
    for (;;) {
        // strip a weight maximal for the root order (maximizes (., rho))
        bool found = false;
        Ambient best;
        mpq_class bestKey = 0;
        for (const auto& [w, m] : prod) {
            if (m == 0) continue;
            mpq_class key = rd.ip(w, rd.rho());
            if (!found || key > bestKey || (key == bestKey && AmbLess{}(w, best))) {
                found = true;
                best = w;
                bestKey = key;
            }
        }
        if (!found) break;
        const long c = prod[best];
        if (c < 0) throw std::runtime_error("tensorDecompose: negative leading multiplicity");
        auto it = charCache.find(best);
        if (it == charCache.end()) it = charCache.emplace(best, weylCharacter(rd, best)).first;
        for (const auto& [w, m] : it->second) prod[w] -= c * m;
        out.emplace_back(best, c);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return AmbLess{}(a.first, b.first);
    });
    return out;
}

CoverageReport submoduleSpanEvidence(const Module& M,
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
            continue;
        for (int g = 0; g < M.rd->rank(); ++g) {
            int tsp = -1;
            Vec img = M.applyF(g, sp, v, tsp);
            if (tsp >= 0 && !vecIsZero(img)) queue.emplace_back(tsp, std::move(img));
        }
    }
    CoverageReport rep;
    rep.drops = M.drops;
    rep.total = M.dims;
    rep.covered.assign(M.dims.size(), 0);
    for (const auto& [sp, span] : spans) rep.covered[static_cast<std::size_t>(sp)] = span.rank();
    rep.full = rep.covered == rep.total;
    return rep;
}

// ---------------------------------------------------------------------------

namespace {

bool ptermKeyLess(const PTerm& a, const PTerm& b) {
    if (a.fword != b.fword) return a.fword < b.fword;
    if (a.kexp != b.kexp) return a.kexp < b.kexp;
    return a.eword < b.eword;
}

PSum normalized(PSum s) {
    std::sort(s.begin(), s.end(), ptermKeyLess);
    PSum out;
    for (auto& t : s) {
        if (t.coeff.isZero()) continue;
        if (!out.empty() && out.back().fword == t.fword && out.back().kexp == t.kexp &&
            out.back().eword == t.eword) {
            out.back().coeff += t.coeff;
            if (out.back().coeff.isZero()) out.pop_back();
        } else {
            out.push_back(std::move(t));
        }
    }
    return out;
}

Ambient wordRootSum(const RootData& rd, const std::vector<int>& word) {
    Ambient a(static_cast<std::size_t>(rd.ambient()), mpq_class(0));
    for (int g : word) a = ambAdd(a, rd.simpleRoot(g));
    return a;
}

Ambient kexpAmbient(const RootData& rd, const std::vector<long>& kexp) {
    Ambient a(static_cast<std::size_t>(rd.ambient()), mpq_class(0));
    for (std::size_t i = 0; i < kexp.size(); ++i)
        if (kexp[i] != 0) a = ambAdd(a, ambScale(rd.simpleRoot(static_cast<int>(i)), kexp[i]));
    return a;
}

std::vector<long> kexpAdd(const std::vector<long>& a, const std::vector<long>& b) {
    std::vector<long> r = a;
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

// one term times a single lowering letter on the right
PSum termMulF(const RootData& rd, const FieldPtr& f, const PTerm& t, int b);

// e-word times f_b, both bare: sum of (fword, kexp, eword) with coefficients
PSum crossWordF(const RootData& rd, const FieldPtr& f, const std::vector<int>& ew, int b) {
    const int rank = rd.rank();
    if (ew.empty()) {
        PTerm t;
        t.coeff = f->one();
        t.fword = {b};
        t.kexp.assign(static_cast<std::size_t>(rank), 0);
        return {t};
    }
    std::vector<int> head(ew.begin(), ew.end() - 1);
    const int a = ew.back();
    // (E e_a) f_b = E f_b e_a + delta_ab E (K_a - K_a^{-1})/(q_a - q_a^{-1})
    PSum out;
    for (PTerm t : crossWordF(rd, f, head, b)) {
        t.eword.push_back(a);
        out.push_back(std::move(t));
    }
    if (a == b) {
        const Ambient& al = rd.simpleRoot(a);
        const Scalar qa = f->uPow(rd.qaUnits(al));
        const Scalar denom = qa - qa.inverse();
        const mpq_class shift = rd.ip(wordRootSum(rd, head), al);
        for (int s : {+1, -1}) {
            PTerm t;
            // E K_a^s = q^{-s(sum of E's roots, alpha_a)} K_a^s E
            t.coeff = f->qpow(mpq_class(-s) * shift) / denom;
            if (s < 0) t.coeff = -t.coeff;
            t.kexp.assign(static_cast<std::size_t>(rank), 0);
            t.kexp[static_cast<std::size_t>(a)] = s;
            t.eword = head;
            out.push_back(std::move(t));
        }
    }
    return normalized(std::move(out));
}

PSum termMulF(const RootData& rd, const FieldPtr& f, const PTerm& t, int b) {
    PSum out;
    for (const PTerm& c : crossWordF(rd, f, t.eword, b)) {
        PTerm r;
        // K^{t.kexp} passes the new lowering letters: K^n f_w = q^{-(n a, w)} f_w K^n
        r.coeff = t.coeff * c.coeff *
                  f->qpow(-rd.ip(kexpAmbient(rd, t.kexp), wordRootSum(rd, c.fword)));
        r.fword = t.fword;
        r.fword.insert(r.fword.end(), c.fword.begin(), c.fword.end());
        r.kexp = kexpAdd(t.kexp, c.kexp);
        r.eword = c.eword;
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace

PSum pUnit(const FieldPtr& f, int rank) {
    PTerm t;
    t.coeff = f->one();
    t.kexp.assign(static_cast<std::size_t>(rank), 0);
    return {t};
}

PSum pLower(const FieldPtr& f, int rank, int gen) {
    PSum s = pUnit(f, rank);
    s[0].fword = {gen};
    return s;
}

PSum pRaise(const FieldPtr& f, int rank, int gen) {
    PSum s = pUnit(f, rank);
    s[0].eword = {gen};
    return s;
}

PSum pScale(const PSum& a, const Scalar& c) {
    PSum out = a;
    for (PTerm& t : out) t.coeff = t.coeff * c;
    return normalized(std::move(out));
}

PSum pAdd(const PSum& a, const PSum& b) {
    PSum out = a;
    out.insert(out.end(), b.begin(), b.end());
    return normalized(std::move(out));
}

PSum pMul(const RootData& rd, const FieldPtr& f, const PSum& a, const PSum& b) {
    PSum out;
    for (const PTerm& ta : a)
        for (const PTerm& tb : b) {
            // fold tb into ta letter by letter
            PSum cur = {ta};
            cur[0].coeff = ta.coeff * tb.coeff;
            for (int letter : tb.fword) {
                PSum next;
                for (const PTerm& t : cur) {
                    PSum piece = termMulF(rd, f, t, letter);
                    next.insert(next.end(), piece.begin(), piece.end());
                }
                cur = normalized(std::move(next));
            }
            for (PTerm& t : cur) {
                // e-word passes K^{tb.kexp}: e_w K^n = q^{-(n a, w)} K^n e_w
                t.coeff = t.coeff *
                          f->qpow(-rd.ip(kexpAmbient(rd, tb.kexp), wordRootSum(rd, t.eword)));
                t.kexp = kexpAdd(t.kexp, tb.kexp);
                t.eword.insert(t.eword.end(), tb.eword.begin(), tb.eword.end());
            }
            out.insert(out.end(), cur.begin(), cur.end());
        }
    return normalized(std::move(out));
}

PSum pOmega(const RootData& rd, const FieldPtr& f, const PSum& a) {
    const int rank = rd.rank();
    PSum out;
    for (const PTerm& t : a) {
        PSum cur = pUnit(f, rank);
        cur[0].coeff = t.coeff;
        for (auto it = t.eword.rbegin(); it != t.eword.rend(); ++it) {
            PSum img = pUnit(f, rank);  // omega(e_i) = -f_i K_i
            img[0].coeff = -f->one();
            img[0].fword = {*it};
            img[0].kexp[static_cast<std::size_t>(*it)] = 1;
            cur = pMul(rd, f, cur, img);
        }
        {
            PSum img = pUnit(f, rank);
            img[0].kexp = t.kexp;
            cur = pMul(rd, f, cur, img);
        }
        for (auto it = t.fword.rbegin(); it != t.fword.rend(); ++it) {
            PSum img = pUnit(f, rank);  // omega(f_i) = -K_i^{-1} e_i
            img[0].coeff = -f->one();
            img[0].eword = {*it};
            img[0].kexp[static_cast<std::size_t>(*it)] = -1;
            cur = pMul(rd, f, cur, img);
        }
        out.insert(out.end(), cur.begin(), cur.end());
    }
    return normalized(std::move(out));
}

PSum pFWord(const FieldPtr& f, int rank, const std::vector<int>& word) {
    PSum s = pUnit(f, rank);
    s[0].fword = word;
    return s;
}

Scalar pFormValue(const RootData& rd, const FieldPtr& f, const Weight& hw, const PSum& x,
                  const PSum& y) {
    PSum prod = pMul(rd, f, pOmega(rd, f, x), y);
    Scalar s = f->zero();
    for (const PTerm& t : prod) {
        if (!t.fword.empty() || !t.eword.empty()) continue;
        s += t.coeff * f->qexp(rd.pairWeight(hw, kexpAmbient(rd, t.kexp), *f));
    }
    return s;
}

}  // namespace qext
