#pragma once

#include "qext/modules.hpp"
#include "qext/rootdata.hpp"

#include <map>
#include <utility>
#include <vector>

namespace qext {

// Number of ways to write the given nonnegative simple-root drop as a sum of
// positive roots. This is the weight multiplicity of any Verma module.
long kostantPartitions(const RootData& rd, const std::vector<int>& drop);

struct AmbLess {
    bool operator()(const Ambient& a, const Ambient& b) const;
};

// weight -> multiplicity, finite support
using CharacterVector = std::map<Ambient, long, AmbLess>;

// dimension of the irreducible with the given dominant integral highest weight
long weylDim(const RootData& rd, const Ambient& hw);

// full weight multiplicities of that irreducible (Freudenthal recursion)
CharacterVector weylCharacter(const RootData& rd, const Ambient& hw);

// decomposition multiplicities of the product character by iterated stripping
// of a maximal weight; pairs (dominant highest weight, multiplicity)
std::vector<std::pair<Ambient, long>> tensorDecompose(const RootData& rd, const Ambient& nu1,
                                                      const Ambient& nu2);

// f-closure of the given vectors measured against the stored weight spaces;
// full coverage on a complete module certifies that the seeds generate it
struct CoverageReport {
    std::vector<Drop> drops;
    std::vector<int> covered;
    std::vector<int> total;
    bool full = false;
};
CoverageReport submoduleSpanEvidence(const Module& M,
                                     const std::vector<std::pair<int, Vec>>& seeds);

// ---------------------------------------------------------------------------
// Brute-force bilinear form by normal ordering: elements of the algebra as
// sums of (f-word) K^{kexp} (e-word) terms, multiplied by pushing raising
// letters past lowering letters. Intended for short words; everything exact.

struct PTerm {
    Scalar coeff;
    std::vector<int> fword;
    std::vector<long> kexp;  // exponents of K_{alpha_i}
    std::vector<int> eword;
};
using PSum = std::vector<PTerm>;

PSum pUnit(const FieldPtr& f, int rank);
PSum pLower(const FieldPtr& f, int rank, int gen);
PSum pRaise(const FieldPtr& f, int rank, int gen);
PSum pScale(const PSum& a, const Scalar& c);
PSum pAdd(const PSum& a, const PSum& b);
PSum pMul(const RootData& rd, const FieldPtr& f, const PSum& a, const PSum& b);
// image under the antiautomorphism fixing K with f_i -> -K_i^{-1} e_i,
// e_i -> -f_i K_i (the symmetry defining the form)
PSum pOmega(const RootData& rd, const FieldPtr& f, const PSum& a);
// word of lowering generators as an element (letters applied right to left)
PSum pFWord(const FieldPtr& f, int rank, const std::vector<int>& word);
// <x 1, y 1> at the given highest weight: Cartan part of omega(x) y evaluated
Scalar pFormValue(const RootData& rd, const FieldPtr& f, const Weight& hw, const PSum& x,
                  const PSum& y);

}  // namespace qext
