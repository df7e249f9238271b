#pragma once

#include "qext/forms.hpp"

#include <functional>
#include <set>

namespace qext {

// Operator of pure weight on a module: maps the space at drop d into the
// space at d + shift. Blocks are keyed by source space; a missing key is the
// zero map whenever the target is resolvable (see gopBlock). Sources listed
// in `unresolved` passed through an unstored region during composition and
// cannot be queried.
struct GradedOperator {
    ModulePtr M;
    std::vector<int> shift;
    std::map<int, Mat> blocks;
    std::set<int> unresolved;
};

GradedOperator gopGenF(const ModulePtr& M, int gen);
GradedOperator gopGenE(const ModulePtr& M, int gen);
// block at the source space, materialized. A matrix with zero rows means the
// target weight space is zero (invalid drop, dead quotient space, or beyond
// the range of a complete module). nullopt when the target height leaves the
// stored range of an incomplete module or the source is unresolved.
std::optional<Mat> gopBlock(const GradedOperator& g, int sp);
GradedOperator gopCompose(const GradedOperator& a, const GradedOperator& b);  // a after b
GradedOperator gopSub(const GradedOperator& a, const GradedOperator& b);
GradedOperator gopScale(const GradedOperator& a, const Scalar& c);

// Cartan-Weyl root vectors along a normal ordering. Simple roots get the
// generator operators; a composite root is split as mu = earlier + later
// (earliest admissible partner wins) and built by q-commutators,
//   e_mu = e_later e_earlier - q^{-(later,earlier)} e_earlier e_later,
//   f_mu = f_earlier f_later - q^{+(later,earlier)} f_later f_earlier.
// norm[i] is the constant a_mu in
//   [e_mu, f_mu] = a_mu (K_mu - K_mu^{-1}) / (q_mu - q_mu^{-1}),
// extracted once per root system and ordering on an internal Verma module
// with a fully symbolic highest weight and certified there: the commutator
// must be exactly a_mu times the Cartan bracket on every stored weight space
// deep enough to support it, else the construction throws.
struct RootVectorSet {
    ModulePtr M;
    std::vector<int> ordering;  // indices into the positive roots
    std::vector<GradedOperator> e, f;
    std::vector<Scalar> norm;
};

RootVectorSet rootVectorOperators(const ModulePtr& M, const std::vector<int>& ordering);
RootVectorSet rootVectorOperators(const ModulePtr& M);  // muSequence(longestWord)

// One factor p_mu(t) of the extremal projector at the given source space:
//   sum_k f_mu^k e_mu^k (-1)^k q_mu^{k(t-1)} / ([k]! prod_{i=1..k} [h_mu+t+i])
// with brackets in q_mu, evaluated at the weight of the source space, and the
// shift entering through the monomial S = q_mu^t (symbolic t is carried by a
// shift variable of the field). The sum terminates when e_mu^k kills the
// space; it never touches weights below the source. Throws PoleError naming
// the offending bracket when a denominator bracket vanishes.
Mat projectorFactorBlock(const RootVectorSet& rv, int pos, const Scalar& S, int sp);

// Shifted extremal projector block at the source space: the ordered product
// of the root factors along rv.ordering, factor mu_i shifted by
// t_i = (rho + lambda, mu_i^vee), i.e. S_i = q^{(rho+lambda, mu_i)}.
// lambda may carry symbolic parts through character or shift coefficients.
Mat shiftedProjectorBlock(const RootVectorSet& rv, const Weight& lambda, int sp);
// same product restricted to an ascending subsequence of ordering positions
// (used for Levi and complementary partial projectors)
Mat shiftedProjectorBlockSubset(const RootVectorSet& rv, const Weight& lambda,
                                const std::vector<int>& positions, int sp);

struct RegularizationProbe {
    Ambient direction;
    bool finite = false;
    std::string note;  // pole description when not finite
};

struct RegularizedBlock {
    bool wellDefined = false;  // some probe finite and all finite probes agree
    Mat value;                 // over the base field, when wellDefined
    std::vector<RegularizationProbe> probes;
    std::string mode = "direction-probes";
};

// probe directions: rho plus two fixed pseudo-random integral weights
// (deterministic; the second one mixes signs)
std::vector<Ambient> defaultDirections(const RootData& rd);

// Exact regularization of a lambda-dependent block at lambda0: for each
// direction eta the recipe is evaluated over a probe field carrying one extra
// trailing shift variable with direction vector eta, at lambda0 + t*eta (the
// weight passed to the recipe has shift coefficient 1 on that variable), and
// the exact limit t -> 0 is taken entrywise. Well defined only when all
// finite probes agree; a pole in every direction yields wellDefined = false
// with the probe notes filled in.
using LambdaRecipe = std::function<Mat(const FieldPtr&, const Weight&)>;
RegularizedBlock regularize(const FieldPtr& base, const RootData& rd, const Weight& lambda0,
                            const LambdaRecipe& recipe, std::vector<Ambient> directions = {});

// regularized shifted-projector block at the space (rebuilds the module and
// root vectors over each probe field)
RegularizedBlock regularizedProjectorBlock(const ModulePtr& M, const std::vector<int>& ordering,
                                           const Weight& lambda0, int sp,
                                           std::vector<Ambient> directions = {});

}  // namespace qext
