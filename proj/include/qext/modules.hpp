#pragma once

#include "qext/linalg.hpp"
#include "qext/rootdata.hpp"

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qext {

using RootDataPtr = std::shared_ptr<const RootData>;

// nonnegative simple-root coordinates of (highest weight - weight)
using Drop = std::vector<int>;

int dropHeight(const Drop& d);
// all drops of the given height, deterministic order
std::vector<Drop> dropsAtHeight(int rank, int h);

enum class ModuleKind { Verma, ParabolicVerma, IrreducibleQuotient, SphereBase, Tensor };

struct Module;
using ModulePtr = std::shared_ptr<const Module>;

// Highest-weight module truncated at a fixed drop height. Basis vectors are
// grouped into weight spaces indexed by drops; lowering/raising generators act
// by stored matrices between adjacent spaces (columns indexed by the source
// basis, rows by the target basis).
struct Module {
    ModuleKind kind = ModuleKind::Verma;
    RootDataPtr rd;
    FieldPtr field;
    Weight highest;
    int depth = 0;
    // when set, every weight space beyond the stored range is zero, so blocks
    // missing off the stored range are genuinely zero maps
    bool complete = false;
    // ParabolicVerma only: the simples whose sl2 copies act locally finitely
    std::vector<int> leviSimples;

    std::vector<Drop> drops;  // per space, sorted by (height, lex)
    std::map<Drop, int> spaceIndex;
    std::vector<int> dims;
    std::vector<Weight> weightOf;

    // lowering words labelling basis vectors; meaningful for Verma spaces
    // (vector = word applied to the top vector) and kept as provenance of the
    // chosen representatives in quotients
    std::vector<std::vector<std::vector<int>>> labels;
    // Verma only: basis vector k of a space is f_{gen} applied to basis
    // vector `parent` of the adjacent space
    std::vector<std::vector<std::pair<int, int>>> parentOf;

    // quotient provenance: basis vector k of space sp represents the unit
    // vector at column keptCols[sp][k] of quotientOf's space parentSpace[sp]
    ModulePtr quotientOf;
    std::vector<int> parentSpace;
    std::vector<std::vector<int>> keptCols;

    // tensor provenance: basis vector k of space sp is the pure tensor
    // pairs[sp][k] = (space in V, index in V, space in Z, index in Z)
    ModulePtr factorV, factorZ;
    std::vector<std::vector<std::array<int, 4>>> pairs;

    // blocks[gen] keyed by source space id
    std::vector<std::map<int, Mat>> fblk;
    std::vector<std::map<int, Mat>> eblk;

    mutable std::vector<std::optional<Mat>> gramCache;

    int numSpaces() const { return static_cast<int>(drops.size()); }
    int spaceAt(const Drop& d) const;
    const Mat* fBlock(int gen, int sp) const;
    const Mat* eBlock(int gen, int sp) const;

    // q^{sign*(weight of space, alpha_gen)}
    Scalar kPow(int gen, int sp, int sign = 1) const;

    // image of v under the generator; tsp gets the target space id, -1 when
    // the image is known to be zero. Raising the height past the stored range
    // of an incomplete module throws.
    Vec applyF(int gen, int sp, const Vec& v, int& tsp) const;
    Vec applyE(int gen, int sp, const Vec& v, int& tsp) const;

    // contravariant Gram matrix of the space's basis, <top,top> = 1
    // (defined in forms.cpp)
    const Mat& gram(int sp) const;
};

ModulePtr buildVerma(const RootDataPtr& rd, const FieldPtr& field, const Weight& highest,
                     int depth);

// quotient by the submodule generated by f_i^{(hw, alpha_i^vee)+1} applied to
// the top vector, i running over leviSimples; the pairings must be
// nonnegative integers
ModulePtr buildParabolicVerma(const RootDataPtr& rd, const FieldPtr& field, const Weight& highest,
                              const std::vector<int>& leviSimples, int depth);

// quotient of the Verma by the radical of its contravariant form
ModulePtr buildIrreducibleQuotient(const RootDataPtr& rd, const FieldPtr& field,
                                   const Weight& highest, int depth);

// base module of the quantum 2n-sphere: highest weight q^{2(la,eps_i)} = -q^{-1},
// top vector killed by f_{alpha_i} (i >= 2) and a cubic in f_{alpha_1}, f_{alpha_2}
ModulePtr buildSphereBase(int n, int depth);

// tensor product with the coproduct action; factors must live over the same
// field and be stored (or complete) to the requested depth
ModulePtr buildTensor(const ModulePtr& V, const ModulePtr& Z, int depth);

// quotient of M by the e-stable closure of the given vectors under all f
// generators; throws when the closure is not stable under the raising action
ModulePtr quotientBySubmodule(const ModulePtr& M, ModuleKind kind,
                              const std::vector<std::pair<int, Vec>>& seeds);

// re-express a module over a wider field (blocks imported entrywise, weight
// coefficient vectors padded)
ModulePtr importModule(const ModulePtr& M, const FieldPtr& field);

// apply a lowering word right-to-left to the top vector; returns (space, coords)
std::pair<int, Vec> wordVector(const Module& M, const std::vector<int>& word);

// apply a scalar-weighted sum of lowering words, all of the same total drop
std::pair<int, Vec> applyFWordSum(const Module& M,
                                  const std::vector<std::pair<Scalar, std::vector<int>>>& ops,
                                  int sp, const Vec& v);

// "" when every defining relation holds on the stored blocks; otherwise a
// description of the first failure. Relations whose compositions would leave
// the stored range of an incomplete module are skipped.
std::string validateModule(const Module& M);

}  // namespace qext
