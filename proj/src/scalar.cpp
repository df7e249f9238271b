#include "qext/scalar.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace qext {

namespace {

std::string shiftName(int j, int total) {
    if (total == 1) return "T";
    return "T" + std::to_string(j + 1);
}

// reduce relation-char exponents below their order; input = result * u^{-uNeg}
struct ZReduced {
    Poly p;
    long uNeg = 0;
};

ZReduced zReduce(const Field& f, const Poly& in) {
    bool touched = false;
    for (int j = 0; j < f.numChars(); ++j) {
        const auto& rel = f.charGen(j).rel;
        if (rel && in.degree(f.charIdx(j)) >= rel->n) touched = true;
    }
    if (!touched) return {in, 0};
    struct RawTerm {
        Expo mon;
        mpz_class c;
        long uDelta;
    };
    std::vector<RawTerm> raw;
    raw.reserve(in.terms().size());
    long minDelta = 0;
    for (const auto& t : in.terms()) {
        RawTerm rt{t.mon, t.c, 0};
        for (int j = 0; j < f.numChars(); ++j) {
            const auto& rel = f.charGen(j).rel;
            if (!rel) continue;
            int e = rt.mon[f.charIdx(j)];
            if (e < rel->n) continue;
            int a = e / rel->n;
            rt.mon[f.charIdx(j)] = e % rel->n;
            rt.uDelta += rel->m * a;
            if (rel->sign < 0 && (a & 1)) rt.c = -rt.c;
        }
        minDelta = std::min(minDelta, rt.uDelta);
        raw.push_back(std::move(rt));
    }
    long uNeg = -minDelta;
    std::vector<Term> ts;
    ts.reserve(raw.size());
    for (auto& rt : raw) {
        rt.mon[f.uIdx()] += static_cast<int>(rt.uDelta + uNeg);
        assert(rt.mon[f.uIdx()] >= 0);
        ts.push_back({std::move(rt.mon), std::move(rt.c)});
    }
    return {Poly::fromTerms(in.nvars(), std::move(ts)), uNeg};
}

Poly detPoly(const std::vector<std::vector<Poly>>& m, std::vector<int> rows,
             std::vector<int> cols) {
    assert(rows.size() == cols.size());
    if (rows.size() == 1) return m[static_cast<std::size_t>(rows[0])][static_cast<std::size_t>(cols[0])];
    Poly acc(m[0][0].nvars());
    for (std::size_t k = 0; k < cols.size(); ++k) {
        const Poly& piv = m[static_cast<std::size_t>(rows[0])][static_cast<std::size_t>(cols[k])];
        if (piv.isZero()) continue;
        std::vector<int> subRows(rows.begin() + 1, rows.end());
        std::vector<int> subCols;
        for (std::size_t i = 0; i < cols.size(); ++i)
            if (i != k) subCols.push_back(cols[i]);
        Poly sub = detPoly(m, subRows, subCols);
        Poly contrib = piv * sub;
        acc = (k % 2 == 0) ? acc + contrib : acc - contrib;
    }
    return acc;
}

}  // namespace

FieldPtr Field::create(long M, std::vector<CharGen> chars, int numShifts,
                       std::optional<mpq_class> uValue) {
    assert(M >= 1 && numShifts >= 0);
    auto f = std::shared_ptr<Field>(new Field());
    f->M_ = M;
    f->chars_ = std::move(chars);
    f->numShifts_ = numShifts;
    f->uValue_ = std::move(uValue);
    f->names_.push_back("u");
    for (const auto& c : f->chars_) {
        assert(!(c.rel && c.value));
        f->names_.push_back(c.name);
    }
    for (int j = 0; j < numShifts; ++j) f->names_.push_back(shiftName(j, numShifts));
    return f;
}

bool Field::sameStructure(const Field& o) const {
    if (M_ != o.M_ || numShifts_ != o.numShifts_ || chars_.size() != o.chars_.size()) return false;
    if (uValue_.has_value() != o.uValue_.has_value()) return false;
    if (uValue_ && *uValue_ != *o.uValue_) return false;
    for (std::size_t i = 0; i < chars_.size(); ++i) {
        const auto& a = chars_[i];
        const auto& b = o.chars_[i];
        if (a.name != b.name || a.rel.has_value() != b.rel.has_value()) return false;
        if (a.rel && (a.rel->n != b.rel->n || a.rel->sign != b.rel->sign || a.rel->m != b.rel->m))
            return false;
        if (a.value.has_value() != b.value.has_value()) return false;
        if (a.value && *a.value != *b.value) return false;
    }
    return true;
}

FieldPtr Field::withShifts(int numShifts) const {
    return create(M_, chars_, numShifts, uValue_);
}

FieldPtr Field::withShiftVecs(std::vector<std::vector<mpq_class>> vecs) const {
    auto f = std::shared_ptr<Field>(new Field());
    f->M_ = M_;
    f->chars_ = chars_;
    f->numShifts_ = static_cast<int>(vecs.size());
    f->uValue_ = uValue_;
    f->shiftVecs_ = std::move(vecs);
    f->names_.push_back("u");
    for (const auto& c : f->chars_) f->names_.push_back(c.name);
    for (int j = 0; j < f->numShifts_; ++j)
        f->names_.push_back(f->numShifts_ == 1 ? "T" : "T" + std::to_string(j + 1));
    return f;
}

const std::vector<mpq_class>& Field::shiftVec(int j) const {
    assert(j >= 0 && j < static_cast<int>(shiftVecs_.size()));
    return shiftVecs_[static_cast<std::size_t>(j)];
}

Scalar Field::zero() const {
    Scalar s;
    s.f_ = shared_from_this();
    s.scale_ = 0;
    s.num_ = Poly::constant(nvars(), 1);
    s.den_ = Poly::constant(nvars(), 1);
    return s;
}

Scalar Field::one() const { return fromRational(1); }

Scalar Field::fromRational(const mpq_class& r) const {
    if (r == 0) return zero();
    Scalar s;
    s.f_ = shared_from_this();
    s.scale_ = r;
    s.scale_.canonicalize();
    s.num_ = Poly::constant(nvars(), 1);
    s.den_ = Poly::constant(nvars(), 1);
    return s;
}

Scalar Field::integer(long v) const { return fromRational(mpq_class(v)); }

Scalar Field::uPow(long k) const {
    if (uValue_) return fromRational(qpowSigned(*uValue_, k));
    Scalar s;
    s.f_ = shared_from_this();
    s.scale_ = 1;
    Expo e(static_cast<std::size_t>(nvars()), 0);
    if (k >= 0) {
        e[static_cast<std::size_t>(uIdx())] = static_cast<int>(k);
        s.num_ = Poly::monomial(nvars(), e, 1);
        s.den_ = Poly::constant(nvars(), 1);
    } else {
        e[static_cast<std::size_t>(uIdx())] = static_cast<int>(-k);
        s.num_ = Poly::constant(nvars(), 1);
        s.den_ = Poly::monomial(nvars(), e, 1);
    }
    return s;
}

Scalar Field::shiftPow(int j, long k) const {
    assert(j >= 0 && j < numShifts_);
    Scalar s;
    s.f_ = shared_from_this();
    s.scale_ = 1;
    Expo e(static_cast<std::size_t>(nvars()), 0);
    e[static_cast<std::size_t>(shiftIdx(j))] = static_cast<int>(k >= 0 ? k : -k);
    Poly m = Poly::monomial(nvars(), e, 1);
    Poly one = Poly::constant(nvars(), 1);
    s.num_ = k >= 0 ? m : one;
    s.den_ = k >= 0 ? one : m;
    return s;
}

Scalar Field::charPow(int j, long k) const {
    assert(j >= 0 && j < numChars());
    const auto& cg = chars_[static_cast<std::size_t>(j)];
    if (cg.value) return fromRational(qpowSigned(*cg.value, k));
    Scalar s;
    s.f_ = shared_from_this();
    s.scale_ = 1;
    Expo e(static_cast<std::size_t>(nvars()), 0);
    e[static_cast<std::size_t>(charIdx(j))] = static_cast<int>(k >= 0 ? k : -k);
    Poly m = Poly::monomial(nvars(), e, 1);
    Poly one = Poly::constant(nvars(), 1);
    s.num_ = k >= 0 ? m : one;
    s.den_ = k >= 0 ? one : m;
    s.reduce();
    return s;
}

Scalar Field::qpow(const mpq_class& r) const {
    mpq_class scaled = r * M_;
    if (scaled.get_den() != 1) {
        long need = M_;
        mpz_class d = scaled.get_den();
        need = M_ * d.get_si();
        throw PrecisionError("q-power exponent " + std::string(r.get_str()) +
                                 " does not clear precision M=" + std::to_string(M_) +
                                 " (requires M=" + std::to_string(need) + ")",
                             need);
    }
    return uPow(scaled.get_num().get_si());
}

Scalar Field::qexp(const QExponent& e) const {
    Scalar s = qpow(e.u);
    assert(e.chars.size() <= static_cast<std::size_t>(numChars()));
    for (std::size_t j = 0; j < e.chars.size(); ++j) {
        if (e.chars[j] == 0) continue;
        if (e.chars[j].get_den() != 1)
            throw PrecisionError("character exponent " + std::string(e.chars[j].get_str()) +
                                     " is not integral",
                                 0);
        s *= charPow(static_cast<int>(j), e.chars[j].get_num().get_si());
    }
    assert(e.shifts.size() <= static_cast<std::size_t>(numShifts_));
    for (std::size_t j = 0; j < e.shifts.size(); ++j) {
        if (e.shifts[j] == 0) continue;
        mpq_class scaled = e.shifts[j] * M_;
        if (scaled.get_den() != 1)
            throw PrecisionError("shift exponent " + std::string(e.shifts[j].get_str()) +
                                     " does not clear precision M=" + std::to_string(M_),
                                 0);
        s *= shiftPow(static_cast<int>(j), scaled.get_num().get_si());
    }
    return s;
}

Scalar Scalar::make(FieldPtr f, const mpq_class& scale, Poly num, Poly den) {
    Scalar s;
    s.f_ = std::move(f);
    s.scale_ = scale;
    s.num_ = std::move(num);
    s.den_ = std::move(den);
    s.reduce();
    return s;
}

void Scalar::reduce() {
    const Field& F = *f_;
    scale_.canonicalize();
    if (den_.isZero()) throw DivByZeroError("division by zero scalar");
    if (scale_ == 0 || num_.isZero()) {
        scale_ = 0;
        num_ = Poly::constant(F.nvars(), 1);
        den_ = Poly::constant(F.nvars(), 1);
        return;
    }
    // 1. exponent-reduce relation chars on both sides
    ZReduced zn = zReduce(F, num_);
    ZReduced zd = zReduce(F, den_);
    num_ = std::move(zn.p);
    den_ = std::move(zd.p);
    if (num_.isZero()) {
        scale_ = 0;
        num_ = Poly::constant(F.nvars(), 1);
        den_ = Poly::constant(F.nvars(), 1);
        return;
    }
    if (den_.isZero()) throw DivByZeroError("denominator reduces to zero under character relation");
    long carry = zd.uNeg - zn.uNeg;  // value = scale * num*u^{-zn}/ (den*u^{-zd})
    if (carry != 0) {
        Expo e(static_cast<std::size_t>(F.nvars()), 0);
        if (carry > 0) {
            e[static_cast<std::size_t>(F.uIdx())] = static_cast<int>(carry);
            num_ = num_.mulMonomial(e, 1);
        } else {
            e[static_cast<std::size_t>(F.uIdx())] = static_cast<int>(-carry);
            den_ = den_.mulMonomial(e, 1);
        }
    }
    // 2. clear relation chars out of the denominator
    for (int j = 0; j < F.numChars(); ++j) {
        const auto& rel = F.charGen(j).rel;
        if (!rel) continue;
        int ci = F.charIdx(j);
        if (den_.degree(ci) <= 0) continue;
        const int n = rel->n;
        // work with u^K*den so every matrix entry stays polynomial (K+m >= 0)
        long K = rel->m < 0 ? -rel->m : 0;
        Expo uK(static_cast<std::size_t>(F.nvars()), 0);
        uK[static_cast<std::size_t>(F.uIdx())] = static_cast<int>(K);
        num_ = num_.mulMonomial(uK, 1);
        std::vector<std::vector<Poly>> mm(
            static_cast<std::size_t>(n),
            std::vector<Poly>(static_cast<std::size_t>(n), Poly(F.nvars())));
        auto comps = den_.coeffsIn(ci);
        Expo uKm(static_cast<std::size_t>(F.nvars()), 0);
        uKm[static_cast<std::size_t>(F.uIdx())] = static_cast<int>(K + rel->m);
        assert(K + rel->m >= 0);
        for (int k = 0; k < n; ++k) {
            for (auto& [i, Di] : comps) {
                int tot = i + k;
                int row = tot % n;
                int carryz = tot / n;
                assert(carryz <= 1);
                Poly entry = carryz == 0 ? Di.mulMonomial(uK, 1)
                                         : Di.mulMonomial(uKm, rel->sign);
                mm[static_cast<std::size_t>(row)][static_cast<std::size_t>(k)] =
                    mm[static_cast<std::size_t>(row)][static_cast<std::size_t>(k)] + entry;
            }
        }
        std::vector<int> all(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
        Poly det = detPoly(mm, all, all);
        if (det.isZero()) throw DivByZeroError("denominator is a zero divisor under character relation");
        Poly inv(F.nvars());
        for (int i = 0; i < n; ++i) {
            std::vector<int> rows, cols;
            for (int r = 1; r < n; ++r) rows.push_back(r);
            for (int c = 0; c < n; ++c)
                if (c != i) cols.push_back(c);
            Poly minor = (n == 1) ? Poly::constant(F.nvars(), 1) : detPoly(mm, rows, cols);
            Expo zi(static_cast<std::size_t>(F.nvars()), 0);
            zi[static_cast<std::size_t>(ci)] = i;
            Poly contrib = minor.mulMonomial(zi, (i % 2 == 0) ? 1 : -1);
            inv = inv + contrib;
        }
        num_ = num_ * inv;
        den_ = det;
        ZReduced rz = zReduce(F, num_);
        num_ = std::move(rz.p);
        if (rz.uNeg > 0) {
            Expo e(static_cast<std::size_t>(F.nvars()), 0);
            e[static_cast<std::size_t>(F.uIdx())] = static_cast<int>(rz.uNeg);
            den_ = den_.mulMonomial(e, 1);
        }
        if (num_.isZero()) {
            scale_ = 0;
            num_ = Poly::constant(F.nvars(), 1);
            den_ = Poly::constant(F.nvars(), 1);
            return;
        }
    }
    // 3. specialized field: u is a number, fold any u-powers into the scale
    if (F.specialized() &&
        (num_.degree(F.uIdx()) > 0 || den_.degree(F.uIdx()) > 0)) {
        const mpq_class& val = *F.uValue();
        int dn = 0, dd = 0;
        num_ = num_.substRational(F.uIdx(), val.get_num(), val.get_den(), &dn);
        den_ = den_.substRational(F.uIdx(), val.get_num(), val.get_den(), &dd);
        if (den_.isZero()) throw DivByZeroError("denominator vanishes at the specialized u value");
        mpq_class adj = qpowSigned(mpq_class(val.get_den()), dn - dd);
        scale_ /= adj;
        if (num_.isZero()) {
            scale_ = 0;
            num_ = Poly::constant(F.nvars(), 1);
            den_ = Poly::constant(F.nvars(), 1);
            return;
        }
    }
    // 4. cancel the gcd
    Poly g = Poly::gcd(num_, den_);
    if (!(g.isConstant() && g.leadCoeff() == 1)) {
        Poly qn, qd;
        bool a = Poly::divideExact(num_, g, qn);
        bool b = Poly::divideExact(den_, g, qd);
        assert(a && b);
        (void)a;
        (void)b;
        num_ = std::move(qn);
        den_ = std::move(qd);
    }
    // 5. contents and signs into the rational scale
    mpz_class cn = num_.content(), cd = den_.content();
    if (num_.leadSign() < 0) cn = -cn;
    if (den_.leadSign() < 0) cd = -cd;
    mpq_class ratio(cn, cd);
    ratio.canonicalize();
    scale_ *= ratio;
    num_ = num_.primitivePart();
    den_ = den_.primitivePart();
    assert(scale_ != 0);
}

void Scalar::checkCompatible(const Scalar& a, const Scalar& b) {
    assert(a.f_ && b.f_);
    if (a.f_.get() == b.f_.get()) return;
    if (!a.f_->sameStructure(*b.f_)) throw FieldError("scalars from incompatible fields");
}

bool Scalar::isOne() const { return scale_ == 1 && num_.isConstant() && den_.isConstant(); }

bool Scalar::isRational() const { return num_.isConstant() && den_.isConstant(); }

mpq_class Scalar::asRational() const {
    assert(isRational());
    return scale_;
}

bool Scalar::isUnitMonomial() const {
    return !isZero() && num_.isMonomial() && den_.isMonomial();
}

bool Scalar::operator==(const Scalar& o) const {
    if (isZero() && o.isZero()) return true;
    checkCompatible(*this, o);
    return scale_ == o.scale_ && num_ == o.num_ && den_ == o.den_;
}

Scalar Scalar::operator-() const {
    Scalar r = *this;
    r.scale_ = -r.scale_;
    return r;
}

Scalar Scalar::operator+(const Scalar& o) const {
    checkCompatible(*this, o);
    if (isZero()) return o;
    if (o.isZero()) return *this;
    mpz_class q1 = scale_.get_den(), q2 = o.scale_.get_den();
    mpz_class L = zlcm(q1, q2);
    mpz_class a1 = scale_.get_num() * (L / q1);
    mpz_class a2 = o.scale_.get_num() * (L / q2);
    Scalar r;
    r.f_ = f_;
    r.scale_ = mpq_class(1, L);
    r.scale_.canonicalize();
    if (den_ == o.den_) {
        r.num_ = num_.mulScalar(a1) + o.num_.mulScalar(a2);
        r.den_ = den_;
    } else {
        r.num_ = (num_ * o.den_).mulScalar(a1) + (o.num_ * den_).mulScalar(a2);
        r.den_ = den_ * o.den_;
    }
    r.reduce();
    return r;
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
    checkCompatible(*this, o);
    if (isZero() || o.isZero()) return f_->zero();
    Scalar r;
    r.f_ = f_;
    r.scale_ = scale_ * o.scale_;
    // cross-cancel before multiplying to curb growth
    Poly n1 = num_, d2 = o.den_, n2 = o.num_, d1 = den_;
    Poly g1 = Poly::gcd(n1, d2);
    if (!(g1.isConstant() && g1.leadCoeff() == 1)) {
        Poly t;
        Poly::divideExact(n1, g1, t);
        n1 = t;
        Poly::divideExact(d2, g1, t);
        d2 = t;
    }
    Poly g2 = Poly::gcd(n2, d1);
    if (!(g2.isConstant() && g2.leadCoeff() == 1)) {
        Poly t;
        Poly::divideExact(n2, g2, t);
        n2 = t;
        Poly::divideExact(d1, g2, t);
        d1 = t;
    }
    r.num_ = n1 * n2;
    r.den_ = d1 * d2;
    r.reduce();
    return r;
}

Scalar Scalar::inverse() const {
    if (isZero()) throw DivByZeroError("inverse of zero");
    Scalar r;
    r.f_ = f_;
    r.scale_ = mpq_class(scale_.get_den(), scale_.get_num());
    r.scale_.canonicalize();
    r.num_ = den_;
    r.den_ = num_;
    r.reduce();
    return r;
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inverse(); }

Scalar Scalar::pow(long k) const {
    if (k == 0) return f_->one();
    Scalar base = k > 0 ? *this : inverse();
    unsigned long e = static_cast<unsigned long>(k > 0 ? k : -k);
    Scalar r = f_->one();
    while (e) {
        if (e & 1ul) r *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return r;
}

bool Scalar::usesShift(int j) const {
    int v = f_->shiftIdx(j);
    return num_.degree(v) > 0 || den_.degree(v) > 0;
}

bool Scalar::usesAnyShift() const {
    for (int j = 0; j < f_->numShifts(); ++j)
        if (usesShift(j)) return true;
    return false;
}

Scalar Scalar::limitAtUnity(int shiftJ) const {
    if (isZero()) return *this;
    int v = f_->shiftIdx(shiftJ);
    Poly n = num_, d = den_;
    int a = 0, b = 0;
    while (n.divisibleByVarMinusOne(v)) {
        n = n.divideByVarMinusOne(v);
        ++a;
    }
    while (d.divisibleByVarMinusOne(v)) {
        d = d.divideByVarMinusOne(v);
        ++b;
    }
    if (b > a)
        throw PoleError("pole of order " + std::to_string(b - a) + " at shift variable -> 1",
                        b - a);
    if (a > b) return f_->zero();  // surplus (tau-1) factors in the numerator
    return make(f_, scale_, n.substOne(v), d.substOne(v));
}

Scalar Scalar::substShiftOne(int shiftJ) const {
    if (isZero()) return *this;
    int v = f_->shiftIdx(shiftJ);
    Poly d1 = den_.substOne(v);
    if (d1.isZero())
        throw PoleError("denominator vanishes at shift variable -> 1 (no cancellation applied)", 1);
    return make(f_, scale_, num_.substOne(v), d1);
}

Scalar Scalar::specializeU(const mpq_class& val) const {
    if (val == 0) throw FieldError("u must be specialized to a nonzero rational");
    auto target = Field::create(f_->M(), f_->chars_, f_->numShifts(), val);
    if (isZero()) return target->zero();
    Scalar r;
    r.f_ = target;
    r.scale_ = scale_;
    r.num_ = num_;
    r.den_ = den_;
    r.reduce();  // substitutes u = val as part of normalization
    return r;
}

Scalar Scalar::importInto(const FieldPtr& target) const {
    const Field& src = *f_;
    const Field& dst = *target;
    if (src.sameStructure(dst)) {
        Scalar r = *this;
        r.f_ = target;
        return r;
    }
    // same M and chars: pad exponent vectors (more shifts), or truncate the
    // trailing shift variables this value does not use (fewer shifts)
    if (src.M() == dst.M() && src.numChars() == dst.numChars() && src.uValue() == dst.uValue()) {
        bool charsOk = true;
        for (int j = 0; j < src.numChars(); ++j) {
            const auto& a = src.charGen(j);
            const auto& b = dst.charGen(j);
            if (a.name != b.name || a.rel.has_value() != b.rel.has_value() || a.value != b.value)
                charsOk = false;
            else if (a.rel && (a.rel->n != b.rel->n || a.rel->sign != b.rel->sign ||
                               a.rel->m != b.rel->m))
                charsOk = false;
        }
        if (charsOk && dst.numShifts() >= src.numShifts()) {
            Scalar r;
            r.f_ = target;
            r.scale_ = scale_;
            r.num_ = num_.withVars(dst.nvars());
            r.den_ = den_.withVars(dst.nvars());
            return r;  // canonical form preserved by padding
        }
        if (charsOk && dst.numShifts() < src.numShifts()) {
            bool usesDropped = false;
            for (int j = dst.numShifts(); j < src.numShifts() && !usesDropped; ++j)
                usesDropped = usesShift(j);
            if (!usesDropped) {
                auto truncate = [&](const Poly& p) {
                    std::vector<Term> ts;
                    ts.reserve(p.terms().size());
                    for (const auto& t : p.terms()) {
                        Expo e(t.mon.begin(), t.mon.begin() + dst.nvars());
                        ts.push_back({std::move(e), t.c});
                    }
                    return Poly::fromTerms(dst.nvars(), std::move(ts));
                };
                Scalar r;
                r.f_ = target;
                r.scale_ = scale_;
                r.num_ = truncate(num_);
                r.den_ = truncate(den_);
                return r;  // dropped variables are absent, canonical form kept
            }
        }
    }
    // char/shift-free scalar into a field whose M is a multiple of ours
    if (src.numChars() == 0 && !usesAnyShift() && dst.M() % src.M() == 0 && !src.uValue() &&
        !dst.uValue()) {
        long k = dst.M() / src.M();
        auto remap = [&](const Poly& p) {
            std::vector<Term> ts;
            ts.reserve(p.terms().size());
            for (const auto& t : p.terms()) {
                Expo e(static_cast<std::size_t>(dst.nvars()), 0);
                e[static_cast<std::size_t>(dst.uIdx())] =
                    t.mon[static_cast<std::size_t>(src.uIdx())] * static_cast<int>(k);
                ts.push_back({std::move(e), t.c});
            }
            return Poly::fromTerms(dst.nvars(), std::move(ts));
        };
        Scalar r;
        r.f_ = target;
        r.scale_ = scale_;
        r.num_ = remap(num_);
        r.den_ = remap(den_);
        return r;  // u -> u^k maps canonical forms to canonical forms
    }
    // char/shift-free scalar into a specialized field: evaluate u
    if (src.numChars() == 0 && !usesAnyShift() && !src.uValue() && dst.uValue() &&
        dst.M() % src.M() == 0) {
        long k = dst.M() / src.M();
        mpq_class uv = qpowSigned(*dst.uValue(), k);
        Scalar lifted = specializeU(uv);
        Scalar r;
        r.f_ = target;
        r.scale_ = lifted.scale_;
        r.num_ = lifted.num_.withVars(dst.nvars());
        r.den_ = lifted.den_.withVars(dst.nvars());
        return r;
    }
    throw FieldError("cannot import scalar into structurally different field");
}

std::string Scalar::str() const {
    if (isZero()) return "0";
    std::ostringstream os;
    bool numTrivial = num_.isConstant();
    bool denTrivial = den_.isConstant();
    if (scale_ != 1 || numTrivial) {
        os << scale_.get_str();
        if (!numTrivial) os << "*";
    }
    const auto& names = f_->varNames();
    if (!numTrivial) os << "(" << num_.str(names) << ")";
    if (!denTrivial) os << "/(" << den_.str(names) << ")";
    return os.str();
}

Scalar qbracket(const Scalar& X, long qaUnits) {
    const FieldPtr& f = X.field();
    Scalar qa = f->uPow(qaUnits);
    Scalar qaInv = f->uPow(-qaUnits);
    return (X - X.inverse()) / (qa - qaInv);
}

Scalar qnum(const FieldPtr& f, const mpq_class& n, long qaUnits) {
    mpq_class e = n * qaUnits;
    if (e.get_den() != 1)
        throw PrecisionError("q-integer argument does not clear precision", 0);
    return qbracket(f->uPow(e.get_num().get_si()), qaUnits);
}

Scalar qfact(const FieldPtr& f, int k, long qaUnits) {
    Scalar r = f->one();
    for (int i = 2; i <= k; ++i) r *= qnum(f, i, qaUnits);
    return r;
}

Scalar qbinom(const FieldPtr& f, int n, int k, long qaUnits) {
    assert(k >= 0 && k <= n);
    Scalar r = f->one();
    for (int i = 1; i <= k; ++i) {
        r *= qnum(f, n - k + i, qaUnits);
        r = r / qnum(f, i, qaUnits);
    }
    return r;
}

}  // namespace qext
