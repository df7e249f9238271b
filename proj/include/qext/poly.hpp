#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

namespace qext {

// Exponent vector. All exponents are >= 0; Laurent behaviour lives at the
// fraction level (scalar.hpp), never here.
using Expo = std::vector<int>;

int expoCmpLex(const Expo& a, const Expo& b);

struct Term {
    Expo mon;
    mpz_class c;
};

// Multivariate polynomial over Z, terms sorted descending-lex, no zero terms.
// The variable count is fixed per instance; mixing widths is a logic error.
class Poly {
  public:
    Poly() : nvars_(0) {}
    explicit Poly(int nvars) : nvars_(nvars) {}

    static Poly constant(int nvars, const mpz_class& c);
    static Poly monomial(int nvars, const Expo& e, const mpz_class& c);
    static Poly variable(int nvars, int idx, int power = 1);
    // sorts, merges duplicate monomials, drops zeros
    static Poly fromTerms(int nvars, std::vector<Term> ts);

    int nvars() const { return nvars_; }
    bool isZero() const { return terms_.empty(); }
    bool isConstant() const;
    bool isMonomial() const { return terms_.size() == 1; }
    const std::vector<Term>& terms() const { return terms_; }
    const mpz_class& leadCoeff() const;  // lex-leading
    const Expo& leadMon() const;
    std::size_t termCount() const { return terms_.size(); }

    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly mulMonomial(const Expo& delta, const mpz_class& c) const;
    Poly mulScalar(const mpz_class& c) const;
    Poly pow(unsigned k) const;

    int degree(int var) const;  // degree of zero poly: -1
    int totalDegree() const;
    Expo minExponents() const;  // per-variable minimum over terms; zero poly -> all 0
    bool uses(int var) const { return degree(var) > 0; }

    // View as univariate in `var` with Poly coefficients (exponent of `var`
    // zeroed inside each coefficient).
    std::map<int, Poly> coeffsIn(int var) const;
    Poly coeffOf(int var, int k) const;
    Poly leadCoeffIn(int var) const;

    mpz_class content() const;  // >= 0; 0 only for zero poly
    Poly primitivePart() const;
    int leadSign() const;  // sign of lex-leading coefficient; 0 for zero

    // Exact division; returns false (q unspecified) if b does not divide a.
    static bool divideExact(const Poly& a, const Poly& b, Poly& q);
    static Poly gcd(const Poly& a, const Poly& b);

    Poly substOne(int var) const;              // var := 1
    Poly divideByVarMinusOne(int var) const;   // exact; caller checks divisibility
    bool divisibleByVarMinusOne(int var) const;

    // var := num/den exactly: returns p with  this(var=num/den) = p / den^deg.
    Poly substRational(int var, const mpz_class& num, const mpz_class& den,
                       int* degOut) const;

    Poly withVars(int newN) const;  // pad exponent vectors with zeros (newN >= nvars)

    std::string str(const std::vector<std::string>& names) const;

  private:
    void normalizeSorted(std::vector<Term>&& ts);
    int nvars_;
    std::vector<Term> terms_;
};

// gcd helpers on integers/rationals
mpz_class zgcd(const mpz_class& a, const mpz_class& b);
mpz_class zlcm(const mpz_class& a, const mpz_class& b);
mpz_class zpow(const mpz_class& b, unsigned long e);
mpq_class qpowSigned(const mpq_class& b, long e);

}  // namespace qext
