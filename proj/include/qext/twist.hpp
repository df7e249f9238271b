#pragma once

#include "qext/forms.hpp"
#include "qext/projector.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qext {

// Joint kernel of the raising generators inside one weight space of a tensor
// module: the singular vectors of weight (top weight - drop).
struct SingularSpace {
    ModulePtr T;
    int space = -1;
    Drop drop;
    Mat basis;  // rows, coordinates in the space's tensor basis
};

// Hard error when the tensor does not store every space from the drop up.
SingularSpace singularSpace(const ModulePtr& T, const Drop& drop);

// v (x) z |-> v <1_Z, z>: only the top component of the second factor
// survives. vsp receives the first-factor space id, -1 when that factor has
// no space at the drop (the image is then empty and means zero).
Vec deltaBar(const Module& T, int sp, const Vec& u, int& vsp);

// Inverse of deltaBar on the singular space: the unique singular vector with
// deltaBar image w, or nullopt when w is outside the image.
std::optional<Vec> deltaOf(const SingularSpace& S, const Vec& w);

// Raising ideal annihilating the lowest vector of the right dual of B,
// realized as graded operators on A. Verma: empty. Parabolic: e_i^{m_i+1}
// over the Levi simples, m_i the integral pairings of the highest weight.
// Finite: the same over all simples. Sphere base: e_i for i >= 2 plus the
// cubic e2 e1^2 - (q + 1/q) e1 e2 e1 + e1^2 e2. Throws on other kinds.
std::vector<GradedOperator> idealGenerators(const ModulePtr& A, const Module& B);

// Per A-space bases of the extremal subspaces attached to the pair (A, B):
//   plus   = A+_B, the joint kernel of the ideal generators,
//   perp   = Aperp_B, the form-annihilator of plus (= omega(ideal) A),
//   coplus = +A_B, a complement of perp assembled from plus rows first and
//            unit vectors second, so coplus == plus whenever the form is
//            nondegenerate on plus.
// When B's ideal is unknown (tensor factors), plus falls back to the
// deltaBar image of the singular spaces of T, which must then be supplied.
struct ExtremalSubspaces {
    std::vector<Mat> plus, perp, coplus;
    bool fallback = false;
};
ExtremalSubspaces extremalSubspaces(const ModulePtr& A, const ModulePtr& B,
                                    const ModulePtr& T = nullptr);

struct TwistBlock {
    Drop drop;       // A-side drop; the singular weight sits at the same drop in A (x) B
    int space = -1;  // A-space id
    Mat domain;      // rows: the basis the operator is applied to
    Mat codomain;    // rows: the basis the image is expressed in
    Mat op;          // row a = image of domain row a in codomain coordinates
    Mat gram;        // pulled-back form on the domain basis
    Scalar det;      // det of gram; nonzero iff the block is invertible
};

struct TwistResult {
    ModulePtr A, B, T;
    std::string route;  // "direct" | "projector" | "parabolic-formula"
    std::vector<TwistBlock> blocks;
    std::string verdict;  // "completely reducible" | "degenerate" | ""
    std::string note;     // "projector route unavailable", "reducibility suspected", ...
    std::vector<RegularizationProbe> probes;
};

// theta_{A,B}: A+_B -> +A_B with Gram = canonical form of the delta images.
// The tensor is built to the smallest depth covering the nonzero plus
// spaces (plus extraDepth); the canonical form is the stored product form.
// When B has no recognized annihilator ideal, deltaBar can fail to be
// injective and the twist operator is ill-posed; the result then carries
// note "fallback parametrization" and one block per stored carrier drop
// whose gram is the form on the singular space itself (op, codomain empty).
TwistResult extremalTwistDirect(const ModulePtr& A, const ModulePtr& B, int extraDepth = 0);

// thetabar_{A,B}: +A_B -> A+_B, w |-> deltaBar(regularized p(w (x) 1_B)).
// The shifted-projector cocycle on A (p(zeta) w equals the deltaBar image)
// is asserted on every block. Regularization failure on any block leaves
// blocks empty with note "projector route unavailable". B must have a
// recognized annihilator ideal (throws invalid_argument otherwise).
TwistResult extremalTwistProjector(const ModulePtr& A, const ModulePtr& B,
                                   const std::vector<int>& ordering = {}, int extraDepth = 0);

// Closed form for parabolic (or Verma) Z on a Levi-adapted normal ordering:
// theta = p_k(xi)^{-1} p_{g/k}(zeta)^{-1} restricted to V+_Z, where xi is
// the Levi part of Z's highest weight; xi = 0 drops the Levi factor. A pole
// or singular factor block sets note "reducibility suspected".
TwistResult parabolicTwistFormula(const ModulePtr& V, const ModulePtr& Z);

// Blockwise exact equality of op and gram for results over the same bases.
bool twistRouteAgree(const TwistResult& a, const TwistResult& b);
// theta and thetabar compose to the identity both ways, blockwise.
bool twistInverses(const TwistResult& direct, const TwistResult& projector);

struct ReducibilityBlock {
    Drop drop;
    int dim = 0;  // singular-space dimension
    Scalar det;   // det of the restricted canonical Gram; field one when dim = 0
    std::string detStr;
};

struct ReducibilityReport {
    ModulePtr T;
    std::vector<ReducibilityBlock> blocks;
    std::string verdict;
    // bracket factors dividing the product of determinant numerators, with
    // multiplicities: the vanishing locus of the verdict in symbolic mode
    std::vector<std::pair<std::string, int>> locus;
    // leftover numerator after dividing the locus out; "" when it cannot
    // vanish (no free parameters left)
    std::string residual;
};

// Per-weight determinants of the canonical form restricted to the singular
// spaces of V (x) Z; "completely reducible" iff all are nonzero. V must be
// finite (complete); the relevant weights are top - (drop of a V-weight).
ReducibilityReport reducibilityCheck(const ModulePtr& V, const ModulePtr& Z, int extraDepth = 0);

// f_{eps_1}^{m_1} ... f_{eps_n}^{m_n} 1_Z in a sphere base module, with
// f_{eps_{i+1}} = f_{eps_i} f_{a_{i+1}} - q^{-1} f_{a_{i+1}} f_{eps_i}.
std::pair<int, Vec> sphereMonomial(const Module& Z, const std::vector<int>& m);

struct SphereTwist {
    int n = 1;
    std::vector<int> ell;
    ModulePtr Z, V, T;
    std::vector<std::vector<int>> monomials;  // m_i <= ell_i, lex order
    std::vector<Scalar> entries;              // direct diagonal twist entries
    std::vector<Scalar> phi;                  // bracket-ratio products
    Scalar globalScale;                       // entries[0] / phi[0], set when phiMatch
    bool entriesNonzero = false;
    bool phiMatch = false;
    std::string verdict;
};

// Twist on Z+_V for the 2n-sphere base Z and the finite module with labels
// ell (so the carrier is the infinite factor): diagonal on the monomial
// basis since the weights of Z are multiplicity free. Entries are computed
// by the direct route and compared with the product of the bracket ratios
//   [(nu+rho+xi, a^)+k] / [(nu+rho, a^)-k]  over positive roots a, k <= l,
// where l is the measured raising-string length max{l : e_a^l w != 0}.
// phiMatch records that every entry agrees with its product up to a unit
// monomial in u and the extension character; the monomial depends on the
// weight (short-root brackets absorb one character factor each), so the
// comparison is per entry. globalScale is the ratio at the top monomial.
SphereTwist sphereTwist(int n, const std::vector<int>& ell);

}  // namespace qext
