#include "qext/rootdata.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace qext {

namespace {

mpq_class dotQ(const Ambient& a, const Ambient& b) {
    assert(a.size() == b.size());
    mpq_class s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// inverse of a small rational matrix by Gauss-Jordan
std::vector<std::vector<mpq_class>> invQ(std::vector<std::vector<mpq_class>> m) {
    std::size_t n = m.size();
    std::vector<std::vector<mpq_class>> inv(n, std::vector<mpq_class>(n, 0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) throw std::runtime_error("singular matrix");
        std::swap(m[p], m[c]);
        std::swap(inv[p], inv[c]);
        mpq_class d = m[c][c];
        for (std::size_t j = 0; j < n; ++j) {
            m[c][j] /= d;
            inv[c][j] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || m[r][c] == 0) continue;
            mpq_class f = m[r][c];
            for (std::size_t j = 0; j < n; ++j) {
                m[r][j] -= f * m[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

mpz_class lcmZ(const mpz_class& a, const mpz_class& b) {
    mpz_class g, l;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    l = a / g * b;
    return l;
}

}  // namespace

LieType lieTypeFromChar(char c) {
    switch (c) {
        case 'A': case 'a': return LieType::A;
        case 'B': case 'b': return LieType::B;
        case 'C': case 'c': return LieType::C;
        case 'D': case 'd': return LieType::D;
        default: throw std::runtime_error(std::string("unknown type ") + c);
    }
}

char lieTypeChar(LieType t) {
    switch (t) {
        case LieType::A: return 'A';
        case LieType::B: return 'B';
        case LieType::C: return 'C';
        default: return 'D';
    }
}

Ambient ambAdd(const Ambient& a, const Ambient& b) {
    assert(a.size() == b.size());
    Ambient r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

Ambient ambSub(const Ambient& a, const Ambient& b) {
    assert(a.size() == b.size());
    Ambient r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

Ambient ambScale(const Ambient& a, const mpq_class& c) {
    Ambient r = a;
    for (auto& x : r) x *= c;
    return r;
}

bool ambEq(const Ambient& a, const Ambient& b) { return a == b; }

bool ambIsZero(const Ambient& a) {
    for (const auto& x : a)
        if (x != 0) return false;
    return true;
}

Weight wMake(Ambient base, std::vector<mpq_class> charCoeffs,
             std::vector<mpq_class> shiftCoeffs) {
    return Weight{std::move(base), std::move(charCoeffs), std::move(shiftCoeffs)};
}

namespace {
void padTo(std::vector<mpq_class>& v, std::size_t n) {
    if (v.size() < n) v.resize(n, mpq_class(0));
}
}  // namespace

Weight wAdd(const Weight& a, const Weight& b) {
    Weight r = a;
    r.base = ambAdd(r.base, b.base);
    padTo(r.charCoeffs, b.charCoeffs.size());
    for (std::size_t i = 0; i < b.charCoeffs.size(); ++i) r.charCoeffs[i] += b.charCoeffs[i];
    padTo(r.shiftCoeffs, b.shiftCoeffs.size());
    for (std::size_t i = 0; i < b.shiftCoeffs.size(); ++i) r.shiftCoeffs[i] += b.shiftCoeffs[i];
    return r;
}

Weight wSub(const Weight& a, const Weight& b) {
    Weight nb = b;
    nb.base = ambScale(nb.base, -1);
    for (auto& x : nb.charCoeffs) x = -x;
    for (auto& x : nb.shiftCoeffs) x = -x;
    return wAdd(a, nb);
}

Weight wAddBase(const Weight& w, const Ambient& v, const mpq_class& c) {
    Weight r = w;
    for (std::size_t i = 0; i < v.size(); ++i) r.base[i] += c * v[i];
    return r;
}

namespace {
int cmpCoeffs(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b) {
    std::size_t n = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        mpq_class x = i < a.size() ? a[i] : mpq_class(0);
        mpq_class y = i < b.size() ? b[i] : mpq_class(0);
        if (x != y) return x < y ? -1 : 1;
    }
    return 0;
}
}  // namespace

bool wEq(const Weight& a, const Weight& b) {
    return a.base == b.base && cmpCoeffs(a.charCoeffs, b.charCoeffs) == 0 &&
           cmpCoeffs(a.shiftCoeffs, b.shiftCoeffs) == 0;
}

bool wIsSymbolic(const Weight& w) {
    for (const auto& c : w.charCoeffs)
        if (c != 0) return true;
    for (const auto& c : w.shiftCoeffs)
        if (c != 0) return true;
    return false;
}

bool WeightLess::operator()(const Weight& a, const Weight& b) const {
    if (a.base != b.base) return a.base < b.base;
    int c = cmpCoeffs(a.charCoeffs, b.charCoeffs);
    if (c != 0) return c < 0;
    return cmpCoeffs(a.shiftCoeffs, b.shiftCoeffs) < 0;
}

std::string wStr(const Weight& w) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < w.base.size(); ++i) {
        if (i) os << ",";
        os << w.base[i].get_str();
    }
    os << ")";
    auto tail = [&os](const char* tag, const std::vector<mpq_class>& v) {
        bool any = false;
        for (const auto& x : v) any = any || x != 0;
        if (!any) return;
        os << tag << "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) os << ",";
            os << v[i].get_str();
        }
        os << "]";
    };
    tail("+chars", w.charCoeffs);
    tail("+shifts", w.shiftCoeffs);
    return os.str();
}

RootData::RootData(LieType type, int rank, std::optional<mpq_class> shortNormSq)
    : type_(type), rank_(rank) {
    assert(rank >= 1 && rank <= 4);
    switch (type) {
        case LieType::A:
            ambient_ = rank + 1;
            for (int i = 0; i < rank; ++i) {
                Ambient a(static_cast<std::size_t>(ambient_), 0);
                a[static_cast<std::size_t>(i)] = 1;
                a[static_cast<std::size_t>(i) + 1] = -1;
                simples_.push_back(std::move(a));
            }
            break;
        case LieType::B:
        case LieType::C:
        case LieType::D: {
            ambient_ = rank;
            if (type == LieType::D && rank < 3)
                throw std::runtime_error("type D needs rank >= 3");
            Ambient first(static_cast<std::size_t>(ambient_), 0);
            if (type == LieType::B) {
                first[0] = 1;
            } else if (type == LieType::C) {
                first[0] = 2;
            } else {
                first[0] = 1;
                first[1] = 1;
            }
            simples_.push_back(std::move(first));
            for (int i = 1; i < rank; ++i) {
                Ambient a(static_cast<std::size_t>(ambient_), 0);
                a[static_cast<std::size_t>(i)] = 1;
                a[static_cast<std::size_t>(i) - 1] = -1;
                simples_.push_back(std::move(a));
            }
            break;
        }
    }
    // scale so the short roots have the requested squared length
    mpq_class minDot;
    bool have = false;
    for (const auto& s : simples_) {
        mpq_class d = dotQ(s, s);
        if (!have || d < minDot) {
            minDot = d;
            have = true;
        }
    }
    mpq_class target = shortNormSq ? *shortNormSq
                                   : (type == LieType::B ? mpq_class(1) : mpq_class(2));
    ipScale_ = target / minDot;

    // dual basis within the root span: (dualSimple_[i], alpha_j) = delta_ij
    std::vector<std::vector<mpq_class>> gram(
        static_cast<std::size_t>(rank), std::vector<mpq_class>(static_cast<std::size_t>(rank)));
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j)
            gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                ip(simples_[static_cast<std::size_t>(i)], simples_[static_cast<std::size_t>(j)]);
    auto gramInv = invQ(gram);
    for (int i = 0; i < rank; ++i) {
        Ambient c(static_cast<std::size_t>(ambient_), 0);
        for (int k = 0; k < rank; ++k)
            c = ambAdd(c, ambScale(simples_[static_cast<std::size_t>(k)],
                                   gramInv[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]));
        dualSimple_.push_back(std::move(c));
    }

    // all roots by reflection closure of the simples
    std::vector<Ambient> roots = simples_;
    for (const auto& s : simples_) roots.push_back(ambScale(s, -1));
    bool grew = true;
    while (grew) {
        grew = false;
        std::size_t cur = roots.size();
        for (std::size_t r = 0; r < cur; ++r) {
            for (int i = 0; i < rank; ++i) {
                const Ambient& al = simples_[static_cast<std::size_t>(i)];
                mpq_class c = 2 * ip(roots[r], al) / ip(al, al);
                Ambient img = ambSub(roots[r], ambScale(al, c));
                if (std::find(roots.begin(), roots.end(), img) == roots.end()) {
                    roots.push_back(std::move(img));
                    grew = true;
                }
            }
        }
    }
    struct PR {
        Ambient v;
        std::vector<int> coords;
        int height;
    };
    std::vector<PR> pos;
    for (const auto& r : roots) {
        auto qc = simpleCoordsRaw(r);
        bool nonneg = true, integral = true;
        int h = 0;
        std::vector<int> ic;
        for (const auto& x : qc) {
            if (x.get_den() != 1) integral = false;
            if (x < 0) nonneg = false;
            ic.push_back(static_cast<int>(x.get_num().get_si()));
            h += ic.back();
        }
        assert(integral);
        if (nonneg) pos.push_back({r, std::move(ic), h});
    }
    std::sort(pos.begin(), pos.end(), [](const PR& a, const PR& b) {
        if (a.height != b.height) return a.height < b.height;
        auto ra = a.coords, rb = b.coords;
        std::reverse(ra.begin(), ra.end());
        std::reverse(rb.begin(), rb.end());
        return ra < rb;
    });
    for (auto& p : pos) {
        posRoots_.push_back(std::move(p.v));
        posCoords_.push_back(std::move(p.coords));
    }
    std::size_t expect = 0;
    switch (type) {
        case LieType::A: expect = static_cast<std::size_t>(rank * (rank + 1) / 2); break;
        case LieType::B:
        case LieType::C: expect = static_cast<std::size_t>(rank * rank); break;
        case LieType::D: expect = static_cast<std::size_t>(rank * (rank - 1)); break;
    }
    assert(posRoots_.size() == expect);
    (void)expect;
    for (int i = 0; i < rank; ++i) {
        simpleIdx_.push_back(findRoot(simples_[static_cast<std::size_t>(i)]));
        assert(simpleIdx_.back() == i);
    }

    cartan_.assign(static_cast<std::size_t>(rank), std::vector<int>(static_cast<std::size_t>(rank)));
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) {
            mpq_class v = pairCoroot(simples_[static_cast<std::size_t>(j)],
                                     simples_[static_cast<std::size_t>(i)]);
            assert(v.get_den() == 1);
            cartan_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                static_cast<int>(v.get_num().get_si());
        }

    rho_.assign(static_cast<std::size_t>(ambient_), 0);
    for (const auto& r : posRoots_) rho_ = ambAdd(rho_, ambScale(r, mpq_class(1, 2)));

    // fundamental weights: (w_i, alpha_j^vee) = delta_ij, inside the root span
    std::vector<std::vector<mpq_class>> cart(
        static_cast<std::size_t>(rank), std::vector<mpq_class>(static_cast<std::size_t>(rank)));
    for (int j = 0; j < rank; ++j)
        for (int k = 0; k < rank; ++k)
            cart[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
                cartan_[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
    auto cartInv = invQ(cart);
    for (int i = 0; i < rank; ++i) {
        Ambient w(static_cast<std::size_t>(ambient_), 0);
        for (int k = 0; k < rank; ++k)
            w = ambAdd(w, ambScale(simples_[static_cast<std::size_t>(k)],
                                   cartInv[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]));
        fund_.push_back(std::move(w));
    }

    // precision: clear all weight-lattice pairings and all (root,root)/2
    mpz_class l = 1;
    for (const auto& r : posRoots_) {
        for (int i = 0; i < rank; ++i)
            l = lcmZ(l, ip(fund_[static_cast<std::size_t>(i)], r).get_den());
        l = lcmZ(l, normSqHalf(r).get_den());
    }
    M_ = 2 * static_cast<long>(l.get_si());

    // longest element by greedy ascent
    WMat w = wIdentity();
    int N = numPositive();
    while (wLength(w) < N) {
        for (int i = 0; i < rank; ++i) {
            Ambient img = wApply(w, simples_[static_cast<std::size_t>(i)]);
            if (isPositiveVec(img)) {
                w = wMul(w, wSimpleReflection(i));
                break;
            }
        }
    }
    w0_ = std::move(w);
}

const Ambient& RootData::simpleRoot(int i) const {
    return simples_[static_cast<std::size_t>(i)];
}

const Ambient& RootData::positiveRoot(int idx) const {
    return posRoots_[static_cast<std::size_t>(idx)];
}

const std::vector<int>& RootData::positiveRootCoords(int idx) const {
    return posCoords_[static_cast<std::size_t>(idx)];
}

int RootData::rootHeight(int idx) const {
    int h = 0;
    for (int c : posCoords_[static_cast<std::size_t>(idx)]) h += c;
    return h;
}

int RootData::findRoot(const Ambient& v) const {
    for (std::size_t i = 0; i < posRoots_.size(); ++i)
        if (posRoots_[i] == v) return static_cast<int>(i);
    return -1;
}

int RootData::simpleRootIndex(int i) const { return simpleIdx_[static_cast<std::size_t>(i)]; }

mpq_class RootData::ip(const Ambient& a, const Ambient& b) const {
    return ipScale_ * dotQ(a, b);
}

mpq_class RootData::pairCoroot(const Ambient& v, const Ambient& root) const {
    return 2 * ip(v, root) / ip(root, root);
}

mpq_class RootData::normSqHalf(const Ambient& root) const { return ip(root, root) / 2; }

long RootData::qaUnits(const Ambient& root) const {
    mpq_class v = normSqHalf(root) * M_;
    assert(v.get_den() == 1);
    return v.get_num().get_si();
}

Ambient RootData::fundWeight(int i) const { return fund_[static_cast<std::size_t>(i)]; }

Ambient RootData::dualSimple(int i) const { return dualSimple_[static_cast<std::size_t>(i)]; }

std::vector<mpq_class> RootData::simpleCoordsRaw(const Ambient& v) const {
    std::vector<mpq_class> out;
    for (int i = 0; i < rank_; ++i) out.push_back(ip(dualSimple_[static_cast<std::size_t>(i)], v));
    return out;
}

std::vector<mpq_class> RootData::simpleCoords(const Ambient& v) const {
    auto out = simpleCoordsRaw(v);
    // only meaningful inside the root span
    Ambient recon(static_cast<std::size_t>(ambient_), 0);
    for (int i = 0; i < rank_; ++i)
        recon = ambAdd(recon, ambScale(simples_[static_cast<std::size_t>(i)], out[static_cast<std::size_t>(i)]));
    assert(recon == v);
    return out;
}

RootData::WMat RootData::wIdentity() const {
    WMat m(static_cast<std::size_t>(ambient_), Ambient(static_cast<std::size_t>(ambient_), 0));
    for (int i = 0; i < ambient_; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
    return m;
}

RootData::WMat RootData::wSimpleReflection(int i) const {
    const Ambient& a = simples_[static_cast<std::size_t>(i)];
    mpq_class nn = dotQ(a, a);
    WMat m = wIdentity();
    for (int r = 0; r < ambient_; ++r)
        for (int c = 0; c < ambient_; ++c)
            m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
                2 * a[static_cast<std::size_t>(r)] * a[static_cast<std::size_t>(c)] / nn;
    return m;
}

RootData::WMat RootData::wMul(const WMat& a, const WMat& b) const {
    WMat m(static_cast<std::size_t>(ambient_), Ambient(static_cast<std::size_t>(ambient_), 0));
    for (int r = 0; r < ambient_; ++r)
        for (int k = 0; k < ambient_; ++k) {
            const mpq_class& arc = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)];
            if (arc == 0) continue;
            for (int c = 0; c < ambient_; ++c)
                m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] +=
                    arc * b[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)];
        }
    return m;
}

Ambient RootData::wApply(const WMat& w, const Ambient& v) const {
    Ambient r(static_cast<std::size_t>(ambient_), 0);
    for (int i = 0; i < ambient_; ++i)
        for (int j = 0; j < ambient_; ++j)
            r[static_cast<std::size_t>(i)] +=
                w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
    return r;
}

bool RootData::isPositiveVec(const Ambient& v) const { return findRoot(v) >= 0; }

int RootData::wLength(const WMat& w) const {
    int n = 0;
    for (const auto& r : posRoots_)
        if (!isPositiveVec(wApply(w, r))) ++n;
    return n;
}

RootData::WMat RootData::longestLevi(const std::vector<int>& simples) const {
    WMat w = wIdentity();
    bool grew = true;
    while (grew) {
        grew = false;
        for (int i : simples) {
            Ambient img = wApply(w, simples_[static_cast<std::size_t>(i)]);
            if (isPositiveVec(img)) {
                w = wMul(w, wSimpleReflection(i));
                grew = true;
                break;
            }
        }
    }
    return w;
}

std::vector<int> RootData::reducedWord(const WMat& w) const {
    std::vector<int> collected;
    WMat cur = w;
    int len = wLength(cur);
    while (len > 0) {
        bool found = false;
        for (int i = 0; i < rank_ && !found; ++i) {
            Ambient img = wApply(cur, simples_[static_cast<std::size_t>(i)]);
            if (!isPositiveVec(img)) {
                collected.push_back(i);
                cur = wMul(cur, wSimpleReflection(i));
                --len;
                found = true;
            }
        }
        assert(found);
    }
    std::reverse(collected.begin(), collected.end());
    return collected;
}

int RootData::diagramInvolution(int i) const {
    Ambient img = ambScale(wApply(w0_, simples_[static_cast<std::size_t>(i)]), -1);
    int idx = findRoot(img);
    assert(idx >= 0 && idx < rank_);
    return idx;
}

std::vector<int> RootData::muSequence(const std::vector<int>& word) const {
    std::vector<int> seq;
    WMat prefix = wIdentity();
    for (int i : word) {
        Ambient beta = wApply(prefix, simples_[static_cast<std::size_t>(i)]);
        int idx = findRoot(beta);
        assert(idx >= 0);
        seq.push_back(idx);
        prefix = wMul(prefix, wSimpleReflection(i));
    }
    return seq;
}

bool RootData::isNormalOrdering(const std::vector<int>& rootSeq) const {
    std::size_t N = posRoots_.size();
    if (rootSeq.size() != N) return false;
    std::vector<int> posOf(N, -1);
    for (std::size_t k = 0; k < rootSeq.size(); ++k) {
        int r = rootSeq[k];
        if (r < 0 || r >= static_cast<int>(N) || posOf[static_cast<std::size_t>(r)] >= 0)
            return false;
        posOf[static_cast<std::size_t>(r)] = static_cast<int>(k);
    }
    for (std::size_t a = 0; a < N; ++a)
        for (std::size_t b = a + 1; b < N; ++b) {
            int s = findRoot(ambAdd(posRoots_[a], posRoots_[b]));
            if (s < 0) continue;
            int pa = posOf[a], pb = posOf[b], ps = posOf[static_cast<std::size_t>(s)];
            int lo = std::min(pa, pb), hi = std::max(pa, pb);
            if (!(lo < ps && ps < hi)) return false;
        }
    return true;
}

std::vector<int> RootData::longestWord() const { return reducedWord(w0_); }

std::vector<std::vector<int>> RootData::allNormalOrderings() const {
    std::vector<std::vector<int>> out;
    std::vector<int> word;
    WMat w = wIdentity();
    std::function<void()> dfs = [&]() {
        if (static_cast<int>(word.size()) == numPositive()) {
            out.push_back(muSequence(word));
            return;
        }
        for (int i = 0; i < rank_; ++i) {
            // appending s_i extends the word reducibly iff w(alpha_i) > 0
            if (findRoot(wApply(w, simples_[static_cast<std::size_t>(i)])) < 0) continue;
            WMat keep = w;
            w = wMul(w, wSimpleReflection(i));
            word.push_back(i);
            dfs();
            word.pop_back();
            w = std::move(keep);
        }
    };
    dfs();
    return out;
}

std::vector<int> RootData::leviAdaptedWord(const std::vector<int>& leviSimples) const {
    std::vector<int> mirrored;
    for (int i : leviSimples) mirrored.push_back(diagramInvolution(i));
    std::sort(mirrored.begin(), mirrored.end());
    WMat wk = longestLevi(mirrored);
    std::vector<int> word = reducedWord(wk);
    WMat w = wk;
    int N = numPositive();
    int len = wLength(w);
    while (len < N) {
        bool found = false;
        for (int i = 0; i < rank_ && !found; ++i) {
            Ambient img = wApply(w, simples_[static_cast<std::size_t>(i)]);
            if (isPositiveVec(img)) {
                word.push_back(i);
                w = wMul(w, wSimpleReflection(i));
                ++len;
                found = true;
            }
        }
        assert(found);
    }
    std::reverse(word.begin(), word.end());
    auto seq = muSequence(word);
    if (!isNormalOrdering(seq))
        throw std::runtime_error("adapted word is not a normal ordering");
    // the tail must consist of exactly the Levi's positive roots
    std::vector<bool> inLevi(static_cast<std::size_t>(rank_), false);
    for (int i : leviSimples) inLevi[static_cast<std::size_t>(i)] = true;
    std::size_t leviCount = 0;
    std::vector<bool> leviRoot(posRoots_.size(), false);
    for (std::size_t r = 0; r < posRoots_.size(); ++r) {
        bool inside = true;
        for (int i = 0; i < rank_; ++i)
            if (posCoords_[r][static_cast<std::size_t>(i)] != 0 && !inLevi[static_cast<std::size_t>(i)])
                inside = false;
        if (inside) {
            leviRoot[r] = true;
            ++leviCount;
        }
    }
    for (std::size_t k = seq.size() - leviCount; k < seq.size(); ++k)
        if (!leviRoot[static_cast<std::size_t>(seq[k])])
            throw std::runtime_error("adapted ordering does not end with the Levi block");
    return word;
}

QExponent RootData::pairWeight(const Weight& w, const Ambient& v, const Field& f) const {
    QExponent e;
    e.u = ip(w.base, v);
    e.chars.assign(static_cast<std::size_t>(f.numChars()), mpq_class(0));
    for (std::size_t j = 0; j < w.charCoeffs.size(); ++j) {
        if (w.charCoeffs[j] == 0) continue;
        assert(j < static_cast<std::size_t>(f.numChars()));
        e.chars[j] = w.charCoeffs[j] * ip(f.charGen(static_cast<int>(j)).vec, v);
    }
    e.shifts.assign(static_cast<std::size_t>(f.numShifts()), mpq_class(0));
    for (std::size_t j = 0; j < w.shiftCoeffs.size(); ++j) {
        if (w.shiftCoeffs[j] == 0) continue;
        assert(j < static_cast<std::size_t>(f.numShifts()));
        e.shifts[j] = w.shiftCoeffs[j] * ip(f.shiftVec(static_cast<int>(j)), v);
    }
    return e;
}

}  // namespace qext
