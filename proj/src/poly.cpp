#include "qext/poly.hpp"

#include <algorithm>
#include <cassert>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace qext {

int expoCmpLex(const Expo& a, const Expo& b) {
    assert(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

mpz_class zgcd(const mpz_class& a, const mpz_class& b) {
    mpz_class r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

mpz_class zlcm(const mpz_class& a, const mpz_class& b) {
    mpz_class r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

mpz_class zpow(const mpz_class& b, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

mpq_class qpowSigned(const mpq_class& b, long e) {
    if (e == 0) return mpq_class(1);
    mpq_class r;
    unsigned long a = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    mpz_class num = zpow(b.get_num(), a), den = zpow(b.get_den(), a);
    if (e < 0) std::swap(num, den);
    r = mpq_class(num, den);
    r.canonicalize();
    return r;
}

Poly Poly::constant(int nvars, const mpz_class& c) {
    Poly p(nvars);
    if (c != 0) p.terms_.push_back({Expo(nvars, 0), c});
    return p;
}

Poly Poly::monomial(int nvars, const Expo& e, const mpz_class& c) {
    assert(static_cast<int>(e.size()) == nvars);
    Poly p(nvars);
    if (c != 0) p.terms_.push_back({e, c});
    return p;
}

Poly Poly::variable(int nvars, int idx, int power) {
    assert(idx >= 0 && idx < nvars && power >= 0);
    Expo e(nvars, 0);
    e[idx] = power;
    return monomial(nvars, e, 1);
}

Poly Poly::fromTerms(int nvars, std::vector<Term> ts) {
    std::sort(ts.begin(), ts.end(),
              [](const Term& a, const Term& b) { return expoCmpLex(a.mon, b.mon) > 0; });
    Poly p(nvars);
    for (auto& t : ts) {
        if (t.c == 0) continue;
        if (!p.terms_.empty() && p.terms_.back().mon == t.mon)
            p.terms_.back().c += t.c;
        else
            p.terms_.push_back(std::move(t));
        if (p.terms_.back().c == 0) p.terms_.pop_back();
    }
    return p;
}

bool Poly::isConstant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    for (int v : terms_[0].mon)
        if (v != 0) return false;
    return true;
}

const mpz_class& Poly::leadCoeff() const {
    assert(!terms_.empty());
    return terms_.front().c;
}

const Expo& Poly::leadMon() const {
    assert(!terms_.empty());
    return terms_.front().mon;
}

bool Poly::operator==(const Poly& o) const {
    if (nvars_ != o.nvars_ || terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (terms_[i].c != o.terms_[i].c || terms_[i].mon != o.terms_[i].mon) return false;
    }
    return true;
}

void Poly::normalizeSorted(std::vector<Term>&& ts) {
    std::sort(ts.begin(), ts.end(),
              [](const Term& a, const Term& b) { return expoCmpLex(a.mon, b.mon) > 0; });
    terms_.clear();
    for (auto& t : ts) {
        if (t.c == 0) continue;
        if (!terms_.empty() && terms_.back().mon == t.mon) {
            terms_.back().c += t.c;
            if (terms_.back().c == 0) terms_.pop_back();
        } else {
            terms_.push_back(std::move(t));
        }
    }
}

Poly Poly::operator-() const {
    Poly r(*this);
    for (auto& t : r.terms_) t.c = -t.c;
    return r;
}

Poly Poly::operator+(const Poly& o) const {
    assert(nvars_ == o.nvars_);
    Poly r(nvars_);
    r.terms_.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() && j < o.terms_.size()) {
        int c = expoCmpLex(terms_[i].mon, o.terms_[j].mon);
        if (c > 0) {
            r.terms_.push_back(terms_[i++]);
        } else if (c < 0) {
            r.terms_.push_back(o.terms_[j++]);
        } else {
            mpz_class s = terms_[i].c + o.terms_[j].c;
            if (s != 0) r.terms_.push_back({terms_[i].mon, s});
            ++i, ++j;
        }
    }
    while (i < terms_.size()) r.terms_.push_back(terms_[i++]);
    while (j < o.terms_.size()) r.terms_.push_back(o.terms_[j++]);
    return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
    assert(nvars_ == o.nvars_);
    if (isZero() || o.isZero()) return Poly(nvars_);
    if (isMonomial()) return o.mulMonomial(terms_[0].mon, terms_[0].c);
    if (o.isMonomial()) return mulMonomial(o.terms_[0].mon, o.terms_[0].c);
    std::map<Expo, mpz_class> acc;
    Expo e(nvars_);
    for (const auto& a : terms_) {
        for (const auto& b : o.terms_) {
            for (int k = 0; k < nvars_; ++k) e[k] = a.mon[k] + b.mon[k];
            auto it = acc.find(e);
            if (it == acc.end())
                acc.emplace(e, a.c * b.c);
            else
                it->second += a.c * b.c;
        }
    }
    Poly r(nvars_);
    r.terms_.reserve(acc.size());
    for (auto it = acc.rbegin(); it != acc.rend(); ++it) {
        if (it->second != 0) r.terms_.push_back({it->first, it->second});
    }
    return r;
}

Poly Poly::mulMonomial(const Expo& delta, const mpz_class& c) const {
    assert(static_cast<int>(delta.size()) == nvars_);
    Poly r(nvars_);
    if (c == 0) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
        Term nt{t.mon, t.c * c};
        for (int k = 0; k < nvars_; ++k) {
            nt.mon[k] += delta[k];
            assert(nt.mon[k] >= 0);
        }
        r.terms_.push_back(std::move(nt));
    }
    return r;
}

Poly Poly::mulScalar(const mpz_class& c) const {
    if (c == 0) return Poly(nvars_);
    Poly r(*this);
    for (auto& t : r.terms_) t.c *= c;
    return r;
}

Poly Poly::pow(unsigned k) const {
    Poly r = constant(nvars_, 1);
    Poly b = *this;
    while (k) {
        if (k & 1u) r = r * b;
        b = (k >>= 1) ? b * b : b;
    }
    return r;
}

int Poly::degree(int var) const {
    int d = -1;
    for (const auto& t : terms_) d = std::max(d, t.mon[var]);
    return d;
}

int Poly::totalDegree() const {
    int d = -1;
    for (const auto& t : terms_) {
        int s = 0;
        for (int v : t.mon) s += v;
        d = std::max(d, s);
    }
    return d;
}

Expo Poly::minExponents() const {
    Expo e(nvars_, 0);
    if (terms_.empty()) return e;
    e = terms_[0].mon;
    for (const auto& t : terms_)
        for (int k = 0; k < nvars_; ++k) e[k] = std::min(e[k], t.mon[k]);
    return e;
}

std::map<int, Poly> Poly::coeffsIn(int var) const {
    std::map<int, std::vector<Term>> buckets;
    for (const auto& t : terms_) {
        Term nt = t;
        int k = nt.mon[var];
        nt.mon[var] = 0;
        buckets[k].push_back(std::move(nt));
    }
    std::map<int, Poly> out;
    for (auto& [k, ts] : buckets) {
        Poly p(nvars_);
        p.normalizeSorted(std::move(ts));
        out.emplace(k, std::move(p));
    }
    return out;
}

Poly Poly::coeffOf(int var, int k) const {
    std::vector<Term> ts;
    for (const auto& t : terms_) {
        if (t.mon[var] == k) {
            Term nt = t;
            nt.mon[var] = 0;
            ts.push_back(std::move(nt));
        }
    }
    Poly p(nvars_);
    p.normalizeSorted(std::move(ts));
    return p;
}

Poly Poly::leadCoeffIn(int var) const { return coeffOf(var, degree(var)); }

mpz_class Poly::content() const {
    mpz_class g = 0;
    for (const auto& t : terms_) {
        g = zgcd(g, t.c);
        if (g == 1) break;
    }
    return g;
}

Poly Poly::primitivePart() const {
    if (isZero()) return *this;
    mpz_class c = content();
    if (leadSign() < 0) c = -c;
    Poly r(nvars_);
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mon, t.c / c});
    return r;
}

int Poly::leadSign() const {
    if (terms_.empty()) return 0;
    return sgn(terms_.front().c);
}

bool Poly::divideExact(const Poly& a, const Poly& b, Poly& q) {
    assert(!b.isZero());
    assert(a.nvars_ == b.nvars_);
    const int n = a.nvars_;
    q = Poly(n);
    if (a.isZero()) return true;
    if (b.isMonomial()) {
        const Term& lb = b.terms_[0];
        q.terms_.reserve(a.terms_.size());
        for (const auto& t : a.terms_) {
            Term nt{t.mon, 0};
            for (int k = 0; k < n; ++k) {
                nt.mon[k] -= lb.mon[k];
                if (nt.mon[k] < 0) return false;
            }
            mpz_class rem;
            mpz_fdiv_qr(nt.c.get_mpz_t(), rem.get_mpz_t(), t.c.get_mpz_t(), lb.c.get_mpz_t());
            if (rem != 0) return false;
            q.terms_.push_back(std::move(nt));
        }
        return true;
    }
    // long division in descending lex; b must divide exactly
    std::map<Expo, mpz_class, bool (*)(const Expo&, const Expo&)> rem(
        [](const Expo& x, const Expo& y) { return expoCmpLex(x, y) > 0; });
    for (const auto& t : a.terms_) rem.emplace(t.mon, t.c);
    const Term& lb = b.terms_[0];
    std::vector<Term> qts;
    Expo e(n);
    while (!rem.empty()) {
        auto lead = rem.begin();
        for (int k = 0; k < n; ++k) {
            e[k] = lead->first[k] - lb.mon[k];
            if (e[k] < 0) return false;
        }
        mpz_class qc, r2;
        mpz_fdiv_qr(qc.get_mpz_t(), r2.get_mpz_t(), lead->second.get_mpz_t(), lb.c.get_mpz_t());
        if (r2 != 0) return false;
        qts.push_back({e, qc});
        // rem -= (qc * e) * b
        Expo m(n);
        for (const auto& t : b.terms_) {
            for (int k = 0; k < n; ++k) m[k] = t.mon[k] + e[k];
            auto it = rem.find(m);
            if (it == rem.end()) {
                rem.emplace(m, -qc * t.c);
            } else {
                it->second -= qc * t.c;
                if (it->second == 0) rem.erase(it);
            }
        }
    }
    q.normalizeSorted(std::move(qts));
    return true;
}

namespace {

// pseudo-remainder of a by b in variable var: lc(b)^(da-db+1) * a  mod b
Poly prem(const Poly& a, const Poly& b, int var) {
    int db = b.degree(var);
    Poly lb = b.leadCoeffIn(var);
    Poly r = a;
    int steps = 0;
    int delta = a.degree(var) - db;
    while (!r.isZero() && r.degree(var) >= db) {
        int dr = r.degree(var);
        Poly lr = r.leadCoeffIn(var);
        Expo shift(a.nvars(), 0);
        shift[var] = dr - db;
        r = r * lb - b.mulMonomial(shift, 1) * lr;
        ++steps;
    }
    for (; steps <= delta; ++steps) r = r * lb;
    return r;
}

Poly contentIn(const Poly& a, int var);

// dense univariate image of a with every variable except var evaluated at
// small integers; nullopt when the degree in var drops (unlucky points)
std::optional<std::vector<mpz_class>> evalToVar(const Poly& a, int var, int attempt) {
    static const long pts[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31};
    const int n = a.nvars();
    int d = a.degree(var);
    std::vector<mpz_class> img(static_cast<std::size_t>(d) + 1, 0);
    for (const auto& t : a.terms()) {
        mpz_class v = t.c;
        for (int k = 0; k < n; ++k) {
            if (k == var || t.mon[static_cast<std::size_t>(k)] == 0) continue;
            long p = pts[(k + attempt) % 10];
            mpz_class pw;
            mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(p),
                          static_cast<unsigned long>(t.mon[static_cast<std::size_t>(k)]));
            v *= pw;
        }
        img[static_cast<std::size_t>(t.mon[static_cast<std::size_t>(var)])] += v;
    }
    if (img.back() == 0) return std::nullopt;
    return img;
}

void uniStrip(std::vector<mpz_class>& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    mpz_class g = 0;
    for (const auto& c : a) g = zgcd(g, c);
    if (g > 1)
        for (auto& c : a) c /= g;
}

// true when the univariate images are certainly coprime; coprime images force
// a coprime preimage, so a true result is sound (false may be bad luck)
bool coprimeWitness(const Poly& a, const Poly& b, int var) {
    for (int attempt = 0; attempt < 3; ++attempt) {
        auto ia = evalToVar(a, var, attempt);
        auto ib = evalToVar(b, var, attempt);
        if (!ia || !ib) continue;
        std::vector<mpz_class> x = std::move(*ia), y = std::move(*ib);
        uniStrip(x);
        uniStrip(y);
        if (x.size() < y.size()) std::swap(x, y);
        // pseudo-remainder Euclid with content stripping
        while (y.size() > 1) {
            std::vector<mpz_class> r = x;
            const mpz_class& lb = y.back();
            while (r.size() >= y.size()) {
                mpz_class lr = r.back();
                std::size_t off = r.size() - y.size();
                for (std::size_t i = 0; i < r.size(); ++i) r[i] *= lb;
                for (std::size_t i = 0; i < y.size(); ++i) r[off + i] -= lr * y[i];
                while (!r.empty() && r.back() == 0) r.pop_back();
            }
            uniStrip(r);
            x = std::move(y);
            y = std::move(r);
        }
        return y.empty() ? x.size() <= 1 : true;  // deg-0 remainder ends the chain
    }
    return false;
}

// coprime in every shared variable forces a constant gcd (inputs are
// integer-primitive and monomial-free here)
bool witnessAllVars(const Poly& a, const Poly& b) {
    for (int v = 0; v < a.nvars(); ++v) {
        if (a.degree(v) <= 0 || b.degree(v) <= 0) continue;
        if (!coprimeWitness(a, b, v)) return false;
    }
    return true;
}

mpz_class maxAbsCoeff(const Poly& a) {
    mpz_class m = 0;
    for (const auto& t : a.terms()) {
        mpz_class v = abs(t.c);
        if (v > m) m = v;
    }
    return m;
}

Poly evalAt(const Poly& a, int var, const mpz_class& xi) {
    std::vector<Term> ts;
    ts.reserve(a.terms().size());
    for (const auto& t : a.terms()) {
        Term nt = t;
        int e = nt.mon[static_cast<std::size_t>(var)];
        if (e > 0) {
            mpz_class pw;
            mpz_pow_ui(pw.get_mpz_t(), xi.get_mpz_t(), static_cast<unsigned long>(e));
            nt.c *= pw;
            nt.mon[static_cast<std::size_t>(var)] = 0;
        }
        ts.push_back(std::move(nt));
    }
    return Poly::fromTerms(a.nvars(), std::move(ts));
}

// balanced base-xi digit expansion of g into powers of var
Poly liftDigits(const Poly& g, int var, const mpz_class& xi) {
    std::vector<Term> out;
    Poly cur = g;
    mpz_class half = xi / 2;
    for (int e = 0; !cur.isZero(); ++e) {
        std::vector<Term> rest;
        for (const auto& t : cur.terms()) {
            mpz_class r;
            mpz_fdiv_r(r.get_mpz_t(), t.c.get_mpz_t(), xi.get_mpz_t());
            if (r > half) r -= xi;
            if (r != 0) {
                Term dt = t;
                dt.c = r;
                dt.mon[static_cast<std::size_t>(var)] = e;
                out.push_back(std::move(dt));
            }
            mpz_class q = (t.c - r) / xi;
            if (q != 0) {
                Term rt = t;
                rt.c = std::move(q);
                rest.push_back(std::move(rt));
            }
        }
        cur = Poly::fromTerms(g.nvars(), std::move(rest));
    }
    return Poly::fromTerms(g.nvars(), std::move(out));
}

// evaluation gcd: substitute one variable by a large integer, recurse, lift
// the digits back. The division check makes any nonconstant return a true
// common divisor; the caller restores maximality by recursing on cofactors.
std::optional<Poly> gcdHeu(const Poly& a, const Poly& b) {
    const int n = a.nvars();
    int var = -1;
    for (int k = n - 1; k >= 0 && var < 0; --k)
        if (a.degree(k) > 0 || b.degree(k) > 0) var = k;
    if (var < 0) return Poly::constant(n, zgcd(a.content(), b.content()));
    mpz_class ma = maxAbsCoeff(a), mb = maxAbsCoeff(b);
    mpz_class xi = 2 * (ma < mb ? ma : mb) + 2;
    long dmax = std::max(a.degree(var), b.degree(var));
    for (int tries = 0; tries < 6; ++tries) {
        if (static_cast<long>(mpz_sizeinbase(xi.get_mpz_t(), 2)) * (dmax + 1) >
            8000000)
            return std::nullopt;
        Poly ea = evalAt(a, var, xi), eb = evalAt(b, var, xi);
        if (!ea.isZero() && !eb.isZero()) {
            if (auto sg = gcdHeu(ea, eb)) {
                Poly G = liftDigits(*sg, var, xi).primitivePart();
                Poly q;
                if (!G.isZero() && Poly::divideExact(a, G, q) &&
                    Poly::divideExact(b, G, q))
                    return G;
            }
        }
        xi = xi * 73794 / 27011;
    }
    return std::nullopt;
}

// subresultant PRS on polys primitive w.r.t. var, deg_var >= 1 each
Poly subresGcd(Poly a, Poly b, int var) {
    if (a.degree(var) < b.degree(var)) std::swap(a, b);
    const int n = a.nvars();
    Poly g = Poly::constant(n, 1);
    Poly h = Poly::constant(n, 1);
    while (true) {
        int d = a.degree(var) - b.degree(var);
        Poly r = prem(a, b, var);
        if (r.isZero()) break;
        if (r.degree(var) == 0) return Poly::constant(n, 1);
        // divisor g*h^d
        Poly div = g * h.pow(static_cast<unsigned>(d));
        Poly nb;
        bool ok = Poly::divideExact(r, div, nb);
        assert(ok);
        (void)ok;
        a = b;
        b = nb;
        g = a.leadCoeffIn(var);
        if (d > 0) {
            Poly gh = g.pow(static_cast<unsigned>(d));
            if (d == 1) {
                h = gh;
            } else {
                Poly nh;
                bool ok2 = Poly::divideExact(gh, h.pow(static_cast<unsigned>(d - 1)), nh);
                assert(ok2);
                (void)ok2;
                h = nh;
            }
        }
    }
    if (b.degree(var) == 0) return Poly::constant(n, 1);
    Poly c = contentIn(b, var);
    Poly pp;
    bool ok = Poly::divideExact(b, c, pp);
    assert(ok);
    (void)ok;
    if (pp.leadSign() < 0) pp = -pp;
    return pp;
}

Poly contentIn(const Poly& a, int var) {
    Poly c(a.nvars());
    for (auto& [k, coef] : a.coeffsIn(var)) {
        c = Poly::gcd(c, coef);
        if (c.isConstant() && !c.isZero() && c.leadCoeff() == 1) break;
    }
    return c;
}

}  // namespace

Poly Poly::gcd(const Poly& a, const Poly& b) {
    const int n = a.nvars();
    if (a.isZero()) {
        Poly r = b;
        if (r.leadSign() < 0) r = -r;
        return r;
    }
    if (b.isZero()) {
        Poly r = a;
        if (r.leadSign() < 0) r = -r;
        return r;
    }
    assert(n == b.nvars());
    // split off monomial content first
    Expo ma = a.minExponents(), mb = b.minExponents();
    Expo mc(n), negA(n), negB(n);
    for (int k = 0; k < n; ++k) {
        mc[k] = std::min(ma[k], mb[k]);
        negA[k] = -ma[k];
        negB[k] = -mb[k];
    }
    Poly sa = a.mulMonomial(negA, 1).primitivePart();
    Poly sb = b.mulMonomial(negB, 1).primitivePart();
    mpz_class icont = zgcd(a.content(), b.content());

    Poly core;
    std::optional<Poly> heu;
    if (sa.isMonomial() || sb.isMonomial()) {
        core = constant(n, 1);
    } else if (witnessAllVars(sa, sb)) {
        core = constant(n, 1);
    } else if ((heu = gcdHeu(sa, sb)) && !heu->isConstant()) {
        Poly qa, qb;
        bool d1 = divideExact(sa, *heu, qa), d2 = divideExact(sb, *heu, qb);
        assert(d1 && d2);
        (void)d1;
        (void)d2;
        core = *heu * gcd(qa, qb);
    } else {
        int var = -1;
        for (int k = n - 1; k >= 0; --k) {
            if (sa.degree(k) > 0 || sb.degree(k) > 0) {
                var = k;
                break;
            }
        }
        if (var < 0) {
            core = constant(n, 1);
        } else {
            Poly ca = contentIn(sa, var), cb = contentIn(sb, var);
            Poly cg = gcd(ca, cb);
            Poly pa, pb;
            bool ok1 = divideExact(sa, ca, pa), ok2 = divideExact(sb, cb, pb);
            assert(ok1 && ok2);
            (void)ok1;
            (void)ok2;
            Poly sub;
            if (pa.degree(var) == 0 || pb.degree(var) == 0 ||
                coprimeWitness(pa, pb, var)) {
                sub = constant(n, 1);
            } else {
                sub = subresGcd(pa, pb, var);
            }
            core = cg * sub;
        }
    }
    Poly r = core.mulMonomial(mc, icont);
    if (r.leadSign() < 0) r = -r;
    return r;
}

Poly Poly::substOne(int var) const {
    std::vector<Term> ts;
    ts.reserve(terms_.size());
    for (const auto& t : terms_) {
        Term nt = t;
        nt.mon[var] = 0;
        ts.push_back(std::move(nt));
    }
    Poly r(nvars_);
    r.normalizeSorted(std::move(ts));
    return r;
}

bool Poly::divisibleByVarMinusOne(int var) const { return substOne(var).isZero(); }

Poly Poly::divideByVarMinusOne(int var) const {
    auto cs = coeffsIn(var);
    int d = degree(var);
    assert(d >= 1);
    std::vector<Poly> q(static_cast<std::size_t>(d), Poly(nvars_));
    Poly carry(nvars_);  // q_{k-1} = a_k + q_k, from k = d down to 1
    for (int k = d; k >= 1; --k) {
        auto it = cs.find(k);
        Poly ak = (it == cs.end()) ? Poly(nvars_) : it->second;
        carry = ak + carry;
        q[static_cast<std::size_t>(k - 1)] = carry;
    }
    Poly r(nvars_);
    for (int k = 0; k < d; ++k) {
        Expo e(nvars_, 0);
        e[var] = k;
        r = r + q[static_cast<std::size_t>(k)].mulMonomial(e, 1);
    }
    return r;
}

Poly Poly::substRational(int var, const mpz_class& num, const mpz_class& den, int* degOut) const {
    int d = degree(var);
    if (d <= 0) {
        if (degOut) *degOut = 0;
        return *this;
    }
    Poly r(nvars_);
    for (auto& [k, coef] : coeffsIn(var)) {
        mpz_class f = zpow(num, static_cast<unsigned long>(k)) *
                      zpow(den, static_cast<unsigned long>(d - k));
        r = r + coef.mulScalar(f);
    }
    if (degOut) *degOut = d;
    return r;
}

Poly Poly::withVars(int newN) const {
    assert(newN >= nvars_);
    Poly r(newN);
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
        Expo e = t.mon;
        e.resize(static_cast<std::size_t>(newN), 0);
        r.terms_.push_back({std::move(e), t.c});
    }
    return r;
}

std::string Poly::str(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        mpz_class c = t.c;
        if (first) {
            if (c < 0) {
                os << "-";
                c = -c;
            }
        } else {
            os << (c < 0 ? " - " : " + ");
            if (c < 0) c = -c;
        }
        first = false;
        bool anyVar = false;
        std::ostringstream vs;
        for (int k = 0; k < nvars_; ++k) {
            if (t.mon[k] == 0) continue;
            if (anyVar) vs << "*";
            anyVar = true;
            vs << names[static_cast<std::size_t>(k)];
            if (t.mon[k] != 1) vs << "^" << t.mon[k];
        }
        if (!anyVar) {
            os << c.get_str();
        } else {
            if (c != 1) os << c.get_str() << "*";
            os << vs.str();
        }
    }
    return os.str();
}

}  // namespace qext
