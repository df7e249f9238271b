#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qext/scalar.hpp"

namespace qext {

enum class LieType { A, B, C, D };

LieType lieTypeFromChar(char c);
char lieTypeChar(LieType t);

using Ambient = std::vector<mpq_class>;

Ambient ambAdd(const Ambient& a, const Ambient& b);
Ambient ambSub(const Ambient& a, const Ambient& b);
Ambient ambScale(const Ambient& a, const mpq_class& c);
bool ambEq(const Ambient& a, const Ambient& b);
bool ambIsZero(const Ambient& a);

// A weight with a rational ambient part plus formal parts: charCoeffs[j]
// multiplies the symbol behind character generator j (geometric vector
// field->charGen(j).vec), shiftCoeffs[k] likewise for shift variable k
// (vector field->shiftVec(k)).
struct Weight {
    Ambient base;
    std::vector<mpq_class> charCoeffs;
    std::vector<mpq_class> shiftCoeffs;
};

Weight wMake(Ambient base, std::vector<mpq_class> charCoeffs = {},
             std::vector<mpq_class> shiftCoeffs = {});
Weight wAdd(const Weight& a, const Weight& b);
Weight wSub(const Weight& a, const Weight& b);
Weight wAddBase(const Weight& w, const Ambient& v, const mpq_class& c);
bool wEq(const Weight& a, const Weight& b);
bool wIsSymbolic(const Weight& w);
std::string wStr(const Weight& w);
// strict total order usable as a map key
struct WeightLess {
    bool operator()(const Weight& a, const Weight& b) const;
};

// Rank <= 4 root system in ambient coordinates. The bilinear form is
// ipScale * (euclidean dot); ipScale is set so the short roots get the
// requested squared length (defaults: A, C, D: 2; B: 1).
class RootData {
  public:
    RootData(LieType type, int rank, std::optional<mpq_class> shortNormSq = std::nullopt);

    LieType type() const { return type_; }
    int rank() const { return rank_; }
    int ambient() const { return ambient_; }
    const mpq_class& ipScale() const { return ipScale_; }

    const Ambient& simpleRoot(int i) const;
    int numPositive() const { return static_cast<int>(posRoots_.size()); }
    // sorted by height, then lexicographically; first `rank` entries are simple
    const Ambient& positiveRoot(int idx) const;
    const std::vector<int>& positiveRootCoords(int idx) const;  // simple-root coords
    int rootHeight(int idx) const;
    // index into the positive roots, or -1
    int findRoot(const Ambient& v) const;
    int simpleRootIndex(int i) const;  // position of alpha_i in the positive list

    mpq_class ip(const Ambient& a, const Ambient& b) const;
    mpq_class pairCoroot(const Ambient& v, const Ambient& root) const;  // (v, root^vee)
    mpq_class normSqHalf(const Ambient& root) const;                    // (root,root)/2
    // q_alpha = u^{qaUnits}; integral by the choice of precision
    long qaUnits(const Ambient& root) const;

    const std::vector<std::vector<int>>& cartan() const { return cartan_; }  // a[i][j] = <a_j, a_i^vee>

    Ambient rho() const { return rho_; }
    Ambient fundWeight(int i) const;
    // (dualSimple(i), alpha_j) = delta_ij within the root span
    Ambient dualSimple(int i) const;
    // coefficients along simple roots (valid for vectors in the root span)
    std::vector<mpq_class> simpleCoords(const Ambient& v) const;
    // as above but without the reconstruction check
    std::vector<mpq_class> simpleCoordsRaw(const Ambient& v) const;

    long precisionM() const { return M_; }

    // Weyl group elements as ambient matrices
    using WMat = std::vector<Ambient>;
    WMat wIdentity() const;
    WMat wSimpleReflection(int i) const;
    WMat wMul(const WMat& a, const WMat& b) const;
    Ambient wApply(const WMat& w, const Ambient& v) const;
    int wLength(const WMat& w) const;
    WMat longest() const { return w0_; }
    // longest element of the parabolic subgroup generated by the given simples
    WMat longestLevi(const std::vector<int>& simples) const;
    std::vector<int> reducedWord(const WMat& w) const;
    // -w0 as a permutation of simple roots
    int diagramInvolution(int i) const;

    // beta_k = s_{i1}...s_{i_{k-1}}(alpha_{i_k}) as indices into the positive roots
    std::vector<int> muSequence(const std::vector<int>& word) const;
    bool isNormalOrdering(const std::vector<int>& rootSeq) const;
    std::vector<int> longestWord() const;  // deterministic reduced word for w0
    // mu-sequences of every reduced word of w0, in DFS order over generator
    // choices; exponential in rank, intended for exhaustive rank <= 2 sweeps
    std::vector<std::vector<int>> allNormalOrderings() const;
    // reduced word of w0 whose mu-sequence ends with exactly R+ of the Levi
    std::vector<int> leviAdaptedWord(const std::vector<int>& leviSimples) const;

    // pairing of a weight against an ambient vector, as a q-exponent
    QExponent pairWeight(const Weight& w, const Ambient& v, const Field& f) const;

  private:
    LieType type_;
    int rank_;
    int ambient_;
    mpq_class ipScale_;
    std::vector<Ambient> simples_;
    std::vector<Ambient> posRoots_;
    std::vector<std::vector<int>> posCoords_;
    std::vector<int> simpleIdx_;
    std::vector<std::vector<int>> cartan_;
    Ambient rho_;
    std::vector<Ambient> fund_;
    std::vector<Ambient> dualSimple_;
    long M_ = 1;
    WMat w0_;
    bool isPositiveVec(const Ambient& v) const;
};

}  // namespace qext
