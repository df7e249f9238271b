#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qext/poly.hpp"

namespace qext {

struct FieldError : std::runtime_error {
    explicit FieldError(const std::string& m) : std::runtime_error(m) {}
};
// exponent does not clear the field's precision M
struct PrecisionError : FieldError {
    PrecisionError(const std::string& m, long required) : FieldError(m), requiredM(required) {}
    long requiredM;
};
struct PoleError : FieldError {
    PoleError(const std::string& m, int ord) : FieldError(m), order(ord) {}
    int order;
};
struct DivByZeroError : FieldError {
    explicit DivByZeroError(const std::string& m) : FieldError(m) {}
};
struct RelationError : FieldError {
    explicit RelationError(const std::string& m) : FieldError(m) {}
};

// z^n = sign * u^m  (u-units; m may be negative)
struct CharRelation {
    int n = 0;
    int sign = 1;
    long m = 0;
};

struct CharGen {
    std::string name;
    std::vector<mpq_class> vec;  // ambient vector this generator's exponent pairs against
    std::optional<CharRelation> rel;
    std::optional<mpq_class> value;  // specialized-mode substitution (relation-free only)
};

// q^{u} * prod_j (q^{t_j})^{shift_j} * prod_i z_i^{chars_i}, exponents rational
struct QExponent {
    mpq_class u = 0;
    std::vector<mpq_class> chars;
    std::vector<mpq_class> shifts;
};

class Field;
using FieldPtr = std::shared_ptr<const Field>;
class Scalar;

// Variable layout: 0 = u (u = q^{1/M}); 1..C = character generators; C+1.. = shift vars.
class Field : public std::enable_shared_from_this<const Field> {
  public:
    static FieldPtr create(long M, std::vector<CharGen> chars, int numShifts = 0,
                           std::optional<mpq_class> uValue = std::nullopt);

    long M() const { return M_; }
    int numChars() const { return static_cast<int>(chars_.size()); }
    int numShifts() const { return numShifts_; }
    int nvars() const { return 1 + numChars() + numShifts_; }
    int uIdx() const { return 0; }
    int charIdx(int j) const { return 1 + j; }
    int shiftIdx(int j) const { return 1 + numChars() + j; }
    const CharGen& charGen(int j) const { return chars_[static_cast<std::size_t>(j)]; }
    const std::optional<mpq_class>& uValue() const { return uValue_; }
    bool specialized() const { return uValue_.has_value(); }
    const std::vector<std::string>& varNames() const { return names_; }

    bool sameStructure(const Field& o) const;  // shift direction vecs excluded
    FieldPtr withShifts(int numShifts) const;
    // shifts carrying ambient direction vectors (for weight pairings)
    FieldPtr withShiftVecs(std::vector<std::vector<mpq_class>> vecs) const;
    const std::vector<mpq_class>& shiftVec(int j) const;

    Scalar zero() const;
    Scalar one() const;
    Scalar fromRational(const mpq_class& r) const;
    Scalar integer(long v) const;

    // u^k etc., raw variable units; negative exponents give fractions
    Scalar uPow(long k) const;
    Scalar shiftPow(int j, long k) const;
    Scalar charPow(int j, long k) const;

    // q^r; PrecisionError if M*r is not an integer
    Scalar qpow(const mpq_class& r) const;
    Scalar qexp(const QExponent& e) const;

    friend class Scalar;

  private:
    Field() = default;
    long M_ = 1;
    std::vector<CharGen> chars_;
    int numShifts_ = 0;
    std::optional<mpq_class> uValue_;
    std::vector<std::string> names_;
    std::vector<std::vector<mpq_class>> shiftVecs_;
};

// Exact element of the fraction field, always kept in canonical reduced form:
// value = scale * num / den with num, den integer-primitive with positive
// lex-leading coefficient, coprime, den free of relation-bearing characters,
// relation characters exponent-reduced in num. Equal values have identical
// representations.
class Scalar {
  public:
    Scalar() = default;

    const FieldPtr& field() const { return f_; }
    bool isZero() const { return scale_ == 0; }
    bool isOne() const;
    bool isRational() const;
    mpq_class asRational() const;  // requires isRational()
    // +/- u^a * prod z^b * prod tau^c (den a monomial too)
    bool isUnitMonomial() const;

    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    Scalar operator-() const;
    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar inverse() const;
    Scalar pow(long k) const;

    bool usesShift(int j) const;
    bool usesAnyShift() const;

    // cancel the common (tau_j - 1) content, then substitute tau_j = 1;
    // PoleError (with the residual order) if the value truly diverges
    Scalar limitAtUnity(int shiftJ) const;
    // substitute tau_j = 1 with no pre-cancellation; PoleError if den vanishes
    Scalar substShiftOne(int shiftJ) const;

    // substitute u by a nonzero rational; the result lives in a specialized
    // field with the same chars and shifts
    Scalar specializeU(const mpq_class& val) const;

    // embed into a field with the same M/chars and at least as many shifts,
    // or rescale a char/shift-free scalar into a field whose M is a multiple
    Scalar importInto(const FieldPtr& target) const;

    std::string str() const;

    const mpq_class& scaleQ() const { return scale_; }
    const Poly& numPoly() const { return num_; }
    const Poly& denPoly() const { return den_; }

    static Scalar make(FieldPtr f, const mpq_class& scale, Poly num, Poly den);

  private:
    friend class Field;
    FieldPtr f_;
    mpq_class scale_ = 0;
    Poly num_, den_;
    void reduce();
    static void checkCompatible(const Scalar& a, const Scalar& b);
};

// (X - X^{-1}) / (q_a - q_a^{-1}) with q_a = u^{qaUnits}
Scalar qbracket(const Scalar& X, long qaUnits);
// [n]_{q_a} for rational n (q_a^n must clear precision)
Scalar qnum(const FieldPtr& f, const mpq_class& n, long qaUnits);
Scalar qfact(const FieldPtr& f, int k, long qaUnits);
Scalar qbinom(const FieldPtr& f, int n, int k, long qaUnits);

}  // namespace qext
