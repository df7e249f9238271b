// Batch front end: read a JSON job, run one task, emit a deterministic JSON
// report (exact scalars as canonical strings) plus a one-line human digest.
//
// Exit codes: 0 verdict computed (whatever the verdict), 2 schema violation,
// 3 depth insufficiency, 4 scalar/field misconfiguration, 1 anything else.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <stdexcept>

#include "qext/oracle.hpp"
#include "qext/twist.hpp"

using json = nlohmann::ordered_json;
using namespace qext;

namespace {

struct JobError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DepthError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- job schema helpers ----------------------------------------------------

const json& need(const json& j, const char* key, const char* ctx) {
    auto it = j.find(key);
    if (it == j.end())
        throw JobError(std::string(ctx) + ": missing required field \"" + key + "\"");
    return *it;
}

std::string needString(const json& j, const char* key, const char* ctx) {
    const json& v = need(j, key, ctx);
    if (!v.is_string()) throw JobError(std::string(ctx) + ": \"" + key + "\" must be a string");
    return v.get<std::string>();
}

long needInt(const json& j, const char* key, const char* ctx) {
    const json& v = need(j, key, ctx);
    if (!v.is_number_integer())
        throw JobError(std::string(ctx) + ": \"" + key + "\" must be an integer");
    return v.get<long>();
}

long intOr(const json& j, const char* key, long dflt) {
    auto it = j.find(key);
    if (it == j.end()) return dflt;
    if (!it->is_number_integer())
        throw JobError(std::string("job: \"") + key + "\" must be an integer");
    return it->get<long>();
}

std::vector<long> intArray(const json& j, const char* key, const char* ctx) {
    const json& v = need(j, key, ctx);
    if (!v.is_array()) throw JobError(std::string(ctx) + ": \"" + key + "\" must be an array");
    std::vector<long> out;
    for (const auto& e : v) {
        if (!e.is_number_integer())
            throw JobError(std::string(ctx) + ": \"" + key + "\" entries must be integers");
        out.push_back(e.get<long>());
    }
    return out;
}

// ---- weights and descriptors -----------------------------------------------

Weight zeroWeight(const RootData& rd) {
    return wMake(Ambient(static_cast<std::size_t>(rd.ambient()), mpq_class(0)));
}

Ambient fundCombination(const RootData& rd, const std::vector<long>& fw, const char* ctx) {
    if (static_cast<int>(fw.size()) != rd.rank())
        throw JobError(std::string(ctx) +
                       ": \"highest_weight\" needs one fundamental coefficient per node (rank " +
                       std::to_string(rd.rank()) + ")");
    Ambient hw(static_cast<std::size_t>(rd.ambient()), mpq_class(0));
    for (int i = 0; i < rd.rank(); ++i)
        hw = ambAdd(hw, ambScale(rd.fundWeight(i), fw[static_cast<std::size_t>(i)]));
    return hw;
}

struct Descriptor {
    std::string kind;  // verma | parabolic | finite | sphere | tensor
    std::vector<long> fw;
    std::vector<int> levi;
    int depth = -1;  // -1: pick a default
    bool symbolic = false;
    std::vector<Descriptor> factors;  // tensor only
};

Descriptor parseDescriptor(const json& j, const char* ctx) {
    if (!j.is_object()) throw JobError(std::string(ctx) + ": module descriptor must be an object");
    Descriptor d;
    d.kind = needString(j, "kind", ctx);
    if (d.kind != "verma" && d.kind != "parabolic" && d.kind != "finite" && d.kind != "sphere" &&
        d.kind != "tensor")
        throw JobError(std::string(ctx) +
                       ": \"kind\" must be verma|parabolic|finite|sphere|tensor, got \"" + d.kind +
                       "\"");
    if (j.contains("highest_weight")) d.fw = intArray(j, "highest_weight", ctx);
    if (j.contains("levi"))
        for (long v : intArray(j, "levi", ctx)) d.levi.push_back(static_cast<int>(v));
    d.depth = static_cast<int>(intOr(j, "depth", -1));
    if (j.contains("symbolic")) {
        if (!j["symbolic"].is_boolean())
            throw JobError(std::string(ctx) + ": \"symbolic\" must be a boolean");
        d.symbolic = j["symbolic"].get<bool>();
    }
    if (d.kind == "tensor") {
        const json& fs = need(j, "factors", ctx);
        if (!fs.is_array() || fs.size() != 2)
            throw JobError(std::string(ctx) + ": tensor descriptor needs exactly two factors");
        d.factors.push_back(parseDescriptor(fs[0], ctx));
        d.factors.push_back(parseDescriptor(fs[1], ctx));
    }
    return d;
}

// chars the descriptor contributes to the shared field: one per node for a
// symbolic Verma, transversal nodes only for a symbolic parabolic
std::vector<CharGen> descriptorChars(const RootData& rd, const Descriptor& d) {
    std::vector<CharGen> gens;
    if (!d.symbolic) return gens;
    if (d.kind != "verma" && d.kind != "parabolic")
        throw JobError("job: \"symbolic\": true is only supported for verma and parabolic kinds");
    std::vector<char> inLevi(static_cast<std::size_t>(rd.rank()), 0);
    if (d.kind == "parabolic")
        for (int i : d.levi) {
            if (i < 0 || i >= rd.rank())
                throw JobError("job: \"levi\" indices must be 0-based node indices");
            inLevi[static_cast<std::size_t>(i)] = 1;
        }
    for (int i = 0; i < rd.rank(); ++i) {
        if (inLevi[static_cast<std::size_t>(i)]) continue;
        CharGen g;
        g.name = "z" + std::to_string(i + 1);
        g.vec = rd.dualSimple(i);
        gens.push_back(std::move(g));
    }
    return gens;
}

// specialized mode replaces each would-be character by a seeded integer draw
std::vector<long> specializeDraw(const RootData& rd, const Descriptor& d, unsigned long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> pick(-12, 12);
    std::vector<long> out(static_cast<std::size_t>(rd.rank()), 0);
    std::vector<CharGen> gens = descriptorChars(rd, d);
    // one draw per symbolic node, in node order
    std::size_t g = 0;
    for (int i = 0; i < rd.rank() && g < gens.size(); ++i) {
        if (gens[g].name == "z" + std::to_string(i + 1)) {
            out[static_cast<std::size_t>(i)] = pick(rng);
            ++g;
        }
    }
    return out;
}

Weight descriptorWeight(const RootData& rd, const FieldPtr& f, const Descriptor& d,
                        bool specialized, const std::vector<long>& draw, const char* ctx) {
    std::vector<long> fw = d.fw;
    if (fw.empty()) fw.assign(static_cast<std::size_t>(rd.rank()), 0);
    if (specialized && d.symbolic)
        for (int i = 0; i < rd.rank(); ++i)
            fw[static_cast<std::size_t>(i)] += draw[static_cast<std::size_t>(i)];
    Ambient hw = fundCombination(rd, fw, ctx);
    if (!d.symbolic || specialized) return wMake(hw);
    // symbolic: coefficient 1 on each of this descriptor's characters; the
    // shared field lists them first (single symbolic factor per job)
    std::vector<CharGen> gens = descriptorChars(rd, d);
    std::vector<mpq_class> cs(static_cast<std::size_t>(f->numChars()), mpq_class(0));
    for (std::size_t k = 0; k < gens.size(); ++k) cs[k] = 1;
    return wMake(hw, cs);
}

int defaultFiniteDepth(const RootData& rd, const Ambient& hw) {
    mpq_class h = 0;
    for (const mpq_class& c : rd.simpleCoords(ambScale(hw, 2))) h += c;
    return static_cast<int>(h.get_num().get_si()) + 1;
}

ModulePtr buildFromDescriptor(const RootDataPtr& rd, const FieldPtr& f, const Descriptor& d,
                              bool specialized, const std::vector<long>& draw, int fallbackDepth,
                              const char* ctx) {
    Weight hw = descriptorWeight(*rd, f, d, specialized, draw, ctx);
    int depth = d.depth >= 0 ? d.depth : fallbackDepth;
    if (d.kind == "finite") {
        for (int i = 0; i < rd->rank(); ++i)
            if (rd->pairCoroot(hw.base, rd->simpleRoot(i)) < 0)
                throw JobError(std::string(ctx) + ": finite kind needs a dominant highest weight");
        if (d.depth < 0) depth = defaultFiniteDepth(*rd, hw.base);
        ModulePtr V = buildIrreducibleQuotient(rd, f, hw, depth);
        if (!V->complete)
            throw DepthError(std::string(ctx) + ": depth " + std::to_string(depth) +
                             " does not certify the finite module; raise \"depth\"");
        return V;
    }
    if (depth < 0)
        throw JobError(std::string(ctx) + ": \"depth\" is required for kind \"" + d.kind + "\"");
    if (d.kind == "verma") return buildVerma(rd, f, hw, depth);
    if (d.kind == "parabolic") {
        if (d.levi.empty())
            throw JobError(std::string(ctx) + ": parabolic kind needs a nonempty \"levi\" list");
        return buildParabolicVerma(rd, f, hw, d.levi, depth);
    }
    if (d.kind == "tensor") {
        ModulePtr a =
            buildFromDescriptor(rd, f, d.factors[0], specialized, draw, fallbackDepth, ctx);
        ModulePtr b =
            buildFromDescriptor(rd, f, d.factors[1], specialized, draw, fallbackDepth, ctx);
        return buildTensor(a, b, depth);
    }
    throw JobError(std::string(ctx) + ": kind \"" + d.kind + "\" is not buildable here");
}

// ---- serialization ---------------------------------------------------------

json dropJson(const Drop& d) {
    json a = json::array();
    for (int v : d) a.push_back(v);
    return a;
}

json matJson(const Mat& m) {
    json rows = json::array();
    for (const Vec& r : m) {
        json row = json::array();
        for (const Scalar& s : r) row.push_back(s.str());
        rows.push_back(std::move(row));
    }
    return rows;
}

json probesJson(const std::vector<RegularizationProbe>& ps) {
    json a = json::array();
    for (const auto& p : ps) {
        json e;
        json dir = json::array();
        for (const mpq_class& c : p.direction) dir.push_back(c.get_str());
        e["direction"] = std::move(dir);
        e["finite"] = p.finite;
        e["note"] = p.note;
        a.push_back(std::move(e));
    }
    return a;
}

std::string verdictToken(const std::string& v) {
    std::string out = v;
    for (char& c : out)
        if (c == ' ') c = '_';
    return out;
}

int maxDrop(const Module& m) {
    int h = 0;
    for (const Drop& d : m.drops) h = std::max(h, dropHeight(d));
    return h;
}

// first n probe directions, extending the built-in pair deterministically
std::vector<Ambient> probeDirections(const RootData& rd, int n) {
    std::vector<Ambient> dirs = defaultDirections(rd);
    int k = 1;
    while (static_cast<int>(dirs.size()) < n) {
        Ambient d = rd.rho();
        for (std::size_t i = 0; i < d.size(); ++i)
            d[i] += (i % 2 == 0 ? k + 1 : -k) * static_cast<long>(i + 1);
        dirs.push_back(std::move(d));
        ++k;
    }
    dirs.resize(static_cast<std::size_t>(n));
    return dirs;
}

// ---- tasks -----------------------------------------------------------------

struct Job {
    RootDataPtr rd;
    std::string task;
    std::string mode;  // symbolic | specialized
    unsigned long seed = 1;
    int directions = 0;  // 0: library default
    int depth = -1;      // top-level default depth
    std::vector<int> ordering;
    json raw;
};

// shared field + both modules for the two-factor tasks
struct Pair {
    FieldPtr f;
    ModulePtr V, Z;
    std::vector<long> draw;
};

Pair buildPair(const Job& job, bool needZ) {
    Pair out;
    const bool specialized = job.mode == "specialized";
    Descriptor dv = parseDescriptor(need(job.raw, "V", "job"), "job.V");
    Descriptor dz;
    bool haveZ = job.raw.contains("Z");
    if (needZ && !haveZ) throw JobError("job: this task needs a \"Z\" module descriptor");
    if (haveZ) dz = parseDescriptor(job.raw["Z"], "job.Z");

    if (dv.kind == "sphere" || (haveZ && dz.kind == "sphere")) {
        // the sphere base owns its scalar extension; everything else joins it
        const Descriptor& ds = dv.kind == "sphere" ? dv : dz;
        if ((dv.kind == "sphere" ? haveZ && dz.symbolic : dv.symbolic))
            throw JobError("job: a sphere factor cannot be combined with a symbolic one");
        int depth = ds.depth >= 0 ? ds.depth : std::max(job.depth, 1);
        ModulePtr S = buildSphereBase(job.rd->rank(), depth);
        out.f = S->field;
        if (dv.kind == "sphere") {
            out.V = S;
            if (haveZ)
                out.Z = buildFromDescriptor(S->rd, out.f, dz, false, {}, job.depth, "job.Z");
        } else {
            out.Z = S;
            out.V = buildFromDescriptor(S->rd, out.f, dv, false, {}, job.depth, "job.V");
        }
        return out;
    }

    if (dv.symbolic && haveZ && dz.symbolic)
        throw JobError("job: at most one module descriptor may be symbolic");
    const Descriptor& sym = dv.symbolic ? dv : dz;
    std::vector<CharGen> gens;
    if (!specialized && (dv.symbolic || (haveZ && dz.symbolic)))
        gens = descriptorChars(*job.rd, sym);
    out.f = Field::create(job.rd->precisionM(), std::move(gens));
    if (specialized && (dv.symbolic || (haveZ && dz.symbolic)))
        out.draw = specializeDraw(*job.rd, sym, job.seed);

    // V may need Z's reach: build Z first so twist/reducibility defaults fit
    int zDefault = job.depth;
    out.V = buildFromDescriptor(job.rd, out.f, dv, specialized, out.draw, job.depth, "job.V");
    if (haveZ) {
        if (dz.depth < 0) zDefault = std::max(job.depth, maxDrop(*out.V) + 1);
        out.Z = buildFromDescriptor(job.rd, out.f, dz, specialized, out.draw, zDefault, "job.Z");
    }
    return out;
}

void stampCommon(json& rep, const Job& job) {
    rep["task"] = job.task;
    rep["type"] = std::string(1, lieTypeChar(job.rd->type()));
    rep["rank"] = job.rd->rank();
    rep["mode"] = job.mode;
    rep["confidence"] = job.mode == "specialized" ? "probabilistic" : "exact";
}

json runReducibility(const Job& job) {
    Pair p = buildPair(job, true);
    ReducibilityReport R = reducibilityCheck(p.V, p.Z);
    json rep;
    stampCommon(rep, job);
    if (!p.draw.empty()) rep["specialized_shift"] = p.draw;
    json weights = json::array(), dims = json::array(), dets = json::array();
    for (const auto& b : R.blocks) {
        weights.push_back(dropJson(b.drop));
        dims.push_back(b.dim);
        dets.push_back(b.detStr);
    }
    rep["weights"] = std::move(weights);
    rep["dims"] = std::move(dims);
    rep["dets"] = std::move(dets);
    rep["verdict"] = verdictToken(R.verdict);
    json locus = json::array();
    for (const auto& [factor, mult] : R.locus)
        locus.push_back(json{{"factor", factor}, {"multiplicity", mult}});
    rep["locus"] = std::move(locus);
    rep["residual"] = R.residual;
    rep["route_agreement"] = true;  // single route
    rep["regularization_probes"] = json::array();
    return rep;
}

json runTwist(const Job& job) {
    Pair p = buildPair(job, true);
    TwistResult direct = extremalTwistDirect(p.V, p.Z);
    json rep;
    stampCommon(rep, job);
    if (!p.draw.empty()) rep["specialized_shift"] = p.draw;

    json weights = json::array(), dets = json::array(), dims = json::array();
    for (const auto& b : direct.blocks) {
        weights.push_back(dropJson(b.drop));
        dims.push_back(static_cast<int>(b.gram.size()));
        dets.push_back(b.det.str());
    }
    rep["weights"] = std::move(weights);
    rep["dims"] = std::move(dims);
    rep["dets"] = std::move(dets);
    rep["verdict"] = verdictToken(direct.verdict);

    bool agree = true;
    json routes = json::array();
    routes.push_back("direct");
    json probes = json::array();
    json notes = json::array();
    if (!direct.note.empty()) notes.push_back("direct: " + direct.note);
    if (direct.note.empty()) {
        try {
            TwistResult proj = extremalTwistProjector(p.V, p.Z, job.ordering);
            probes = probesJson(proj.probes);
            if (proj.note.empty()) {
                routes.push_back("projector");
                if (!twistInverses(direct, proj)) agree = false;
            } else {
                notes.push_back("projector: " + proj.note);
            }
        } catch (const std::invalid_argument&) {
            // second factor without a recognized ideal: projector route n/a
        }
        if (p.Z->kind == ModuleKind::Verma || p.Z->kind == ModuleKind::ParabolicVerma) {
            TwistResult formula = parabolicTwistFormula(p.V, p.Z);
            if (formula.note.empty()) {
                routes.push_back("parabolic-formula");
                if (!twistRouteAgree(direct, formula)) agree = false;
            } else {
                notes.push_back("parabolic-formula: " + formula.note);
            }
        }
    }
    rep["routes"] = std::move(routes);
    rep["route_agreement"] = agree;
    rep["notes"] = std::move(notes);
    rep["regularization_probes"] = std::move(probes);
    return rep;
}

json runSphere(const Job& job) {
    int n = static_cast<int>(intOr(job.raw, "n", job.rd->rank()));
    std::vector<long> ellL = intArray(job.raw, "ell", "job");
    std::vector<int> ell;
    for (long v : ellL) {
        if (v < 0) throw JobError("job: \"ell\" entries must be nonnegative");
        ell.push_back(static_cast<int>(v));
    }
    SphereTwist S = sphereTwist(n, ell);
    json rep;
    stampCommon(rep, job);
    rep["n"] = n;
    rep["ell"] = ellL;
    json weights = json::array(), dets = json::array(), phi = json::array();
    for (std::size_t k = 0; k < S.monomials.size(); ++k) {
        json m = json::array();
        for (int v : S.monomials[k]) m.push_back(v);
        weights.push_back(std::move(m));
        dets.push_back(S.entries[k].str());
        phi.push_back(S.phi[k].str());
    }
    rep["weights"] = std::move(weights);
    rep["dets"] = std::move(dets);
    rep["phi"] = std::move(phi);
    rep["entries_nonzero"] = S.entriesNonzero;
    rep["phi_match"] = S.phiMatch;
    rep["global_scale"] = S.phiMatch ? S.globalScale.str() : "";
    rep["verdict"] = verdictToken(S.verdict);
    rep["route_agreement"] = S.phiMatch;
    rep["regularization_probes"] = json::array();
    return rep;
}

json runProjectorEigen(const Job& job) {
    Pair p = buildPair(job, false);
    const RootData& rd = *job.rd;
    std::vector<int> ord =
        job.ordering.empty() ? rd.muSequence(rd.longestWord()) : job.ordering;
    RootVectorSet rv = rootVectorOperators(p.V, ord);
    Weight shift = p.Z ? p.Z->highest : zeroWeight(rd);

    json rep;
    stampCommon(rep, job);
    if (!p.draw.empty()) rep["specialized_shift"] = p.draw;
    json weights = json::array(), dets = json::array(), blocks = json::array();
    json probes = json::array();
    for (int sp = 0; sp < p.V->numSpaces(); ++sp) {
        Mat P;
        bool regularized = false;
        try {
            P = shiftedProjectorBlock(rv, shift, sp);
        } catch (const PoleError&) {
            auto dirs = job.directions > 0 ? probeDirections(rd, job.directions)
                                           : std::vector<Ambient>{};
            RegularizedBlock reg = regularizedProjectorBlock(p.V, ord, shift, sp, dirs);
            for (const auto& pr : probesJson(reg.probes)) probes.push_back(pr);
            if (!reg.wellDefined) {
                json b;
                b["drop"] = dropJson(p.V->drops[static_cast<std::size_t>(sp)]);
                b["defined"] = false;
                blocks.push_back(std::move(b));
                continue;
            }
            P = reg.value;
            regularized = true;
        }
        weights.push_back(dropJson(p.V->drops[static_cast<std::size_t>(sp)]));
        dets.push_back(matDet(P, p.f).str());
        json b;
        b["drop"] = dropJson(p.V->drops[static_cast<std::size_t>(sp)]);
        b["defined"] = true;
        b["regularized"] = regularized;
        b["block"] = matJson(P);
        blocks.push_back(std::move(b));
    }
    rep["weights"] = std::move(weights);
    rep["dets"] = std::move(dets);
    rep["blocks"] = std::move(blocks);
    rep["verdict"] = "computed";
    rep["route_agreement"] = true;
    rep["regularization_probes"] = std::move(probes);
    return rep;
}

// zero-shift projector identities on the dominant spaces: p^2 = p, raising
// annihilates the image, the image annihilates lowering, self-adjointness
int projectorInvariantFailures(const ModulePtr& V, const std::vector<int>& ordering,
                               int* checked) {
    const RootData& rd = *V->rd;
    const FieldPtr& f = V->field;
    std::vector<int> ord = ordering.empty() ? rd.muSequence(rd.longestWord()) : ordering;
    RootVectorSet rv = rootVectorOperators(V, ord);
    Weight zero = zeroWeight(rd);
    int bad = 0;
    for (int sp = 0; sp < V->numSpaces(); ++sp) {
        const Weight& w = V->weightOf[static_cast<std::size_t>(sp)];
        bool dominant = true;
        for (int i = 0; i < rd.rank() && dominant; ++i)
            if (rd.pairCoroot(w.base, rd.simpleRoot(i)) < 0) dominant = false;
        if (!dominant) continue;
        ++*checked;
        Mat P = shiftedProjectorBlock(rv, zero, sp);
        if (!matEqual(matMul(P, P, f), P)) ++bad;
        for (int g = 0; g < rd.rank(); ++g) {
            if (const Mat* E = V->eBlock(g, sp))
                if (!matIsZero(matMul(*E, P, f))) ++bad;
            Drop below = V->drops[static_cast<std::size_t>(sp)];
            below[static_cast<std::size_t>(g)] -= 1;
            int src = below[static_cast<std::size_t>(g)] >= 0 ? V->spaceAt(below) : -1;
            if (src >= 0)
                if (const Mat* Fb = V->fBlock(g, src))
                    if (!matIsZero(matMul(P, *Fb, f))) ++bad;
        }
        const Mat& G = V->gram(sp);
        if (!matEqual(matMul(matTranspose(P, f), G, f), matMul(G, P, f))) ++bad;
    }
    return bad;
}

json runProjectorCheck(const Job& job) {
    Pair p = buildPair(job, false);
    int checked = 0;
    int bad = projectorInvariantFailures(p.V, job.ordering, &checked);
    json rep;
    stampCommon(rep, job);
    rep["weights_checked"] = checked;
    rep["failures"] = bad;
    rep["verdict"] = bad == 0 ? "pass" : "fail";
    rep["route_agreement"] = bad == 0;
    rep["regularization_probes"] = json::array();
    return rep;
}

json runOracle(const Job& job) {
    Descriptor dv = parseDescriptor(need(job.raw, "V", "job"), "job.V");
    Descriptor dz = parseDescriptor(need(job.raw, "Z", "job"), "job.Z");
    if (dv.kind != "finite" || dz.kind != "finite")
        throw JobError("job: the oracle task needs two finite module descriptors");
    const RootData& rd = *job.rd;
    Ambient a = fundCombination(rd, dv.fw, "job.V");
    Ambient b = fundCombination(rd, dz.fw, "job.Z");
    auto parts = tensorDecompose(rd, a, b);
    json rep;
    stampCommon(rep, job);
    json weights = json::array(), dims = json::array(), mults = json::array();
    long total = 0;
    for (const auto& [hw, mult] : parts) {
        json fws = json::array();
        for (int i = 0; i < rd.rank(); ++i)
            fws.push_back(rd.pairCoroot(hw, rd.simpleRoot(i)).get_str());
        weights.push_back(std::move(fws));
        long d = weylDim(rd, hw);
        dims.push_back(d);
        mults.push_back(mult);
        total += d * mult;
    }
    rep["weights"] = std::move(weights);
    rep["dims"] = std::move(dims);
    rep["multiplicities"] = std::move(mults);
    rep["total_dim"] = total;
    rep["product_dim"] = weylDim(rd, a) * weylDim(rd, b);
    rep["verdict"] = total == weylDim(rd, a) * weylDim(rd, b) ? "consistent" : "inconsistent";
    rep["route_agreement"] = rep["verdict"] == "consistent";
    rep["regularization_probes"] = json::array();
    return rep;
}

json runSelftest(const Job& job) {
    json checks = json::array();
    int passed = 0;
    auto record = [&](const char* name, bool ok) {
        checks.push_back(json{{"name", name}, {"ok", ok}});
        if (ok) ++passed;
    };

    {  // tensor of the two smallest A2 fundamentals splits into two pieces
        auto rd = std::make_shared<RootData>(LieType::A, 2);
        auto f = Field::create(rd->precisionM(), {});
        auto V = buildIrreducibleQuotient(rd, f, wMake(rd->fundWeight(0)), 3);
        auto Z = buildIrreducibleQuotient(rd, f, wMake(rd->fundWeight(0)), 3);
        ReducibilityReport R = reducibilityCheck(V, Z);
        int nonzeroBlocks = 0;
        for (const auto& b : R.blocks)
            if (b.dim > 0) ++nonzeroBlocks;
        record("finite tensor splits completely", R.verdict == "completely reducible");
        record("singular count matches the character oracle", nonzeroBlocks == 2);
    }
    {  // twist routes are mutually inverse for a symbolic Verma second factor
        auto rd = std::make_shared<RootData>(LieType::A, 1);
        CharGen g;
        g.name = "z1";
        g.vec = rd->dualSimple(0);
        auto f = Field::create(rd->precisionM(), {g});
        Weight lam = wMake(Ambient(static_cast<std::size_t>(rd->ambient()), mpq_class(0)),
                           {mpq_class(1)});
        auto V = buildIrreducibleQuotient(rd, f, wMake(rd->fundWeight(0)), 2);
        auto Z = buildVerma(rd, f, lam, 3);
        TwistResult direct = extremalTwistDirect(V, Z);
        TwistResult proj = extremalTwistProjector(V, Z);
        record("twist routes are mutually inverse",
               direct.verdict == "completely reducible" && proj.note.empty() &&
                   twistInverses(direct, proj));
    }
    {  // projector identities on the dominant spaces of finite modules
        for (auto [t, name] : {std::pair{LieType::A, "projector identities (A2)"},
                               std::pair{LieType::B, "projector identities (B2)"}}) {
            auto rd = std::make_shared<RootData>(t, 2);
            auto f = Field::create(rd->precisionM(), {});
            auto V = buildIrreducibleQuotient(rd, f, wMake(rd->fundWeight(0)),
                                              defaultFiniteDepth(*rd, rd->fundWeight(0)));
            int checked = 0;
            int bad = projectorInvariantFailures(V, {}, &checked);
            record(name, V->complete && checked > 0 && bad == 0);
        }
    }
    {  // smallest sphere: diagonal twist entries nonzero, verdict splits
        SphereTwist S = sphereTwist(1, {1});
        record("sphere base twist is diagonal and nonzero",
               S.entriesNonzero && S.phiMatch && S.verdict == "completely reducible");
    }

    json rep;
    stampCommon(rep, job);
    rep["checks"] = std::move(checks);
    rep["passed"] = passed;
    rep["total"] = static_cast<int>(rep["checks"].size());
    rep["verdict"] = passed == rep["total"].get<int>() ? "pass" : "fail";
    rep["route_agreement"] = rep["verdict"] == "pass";
    rep["regularization_probes"] = json::array();
    return rep;
}

std::string digest(const json& rep) {
    std::string out = rep["task"].get<std::string>() + " " + rep["type"].get<std::string>() +
                      std::to_string(rep["rank"].get<int>());
    if (rep.contains("verdict")) out += ": " + rep["verdict"].get<std::string>();
    if (rep.contains("dets")) out += " (" + std::to_string(rep["dets"].size()) + " blocks)";
    if (rep["confidence"] == "probabilistic") out += " [probabilistic]";
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact reducibility and extremal-twist reports for tensor products"};
    std::string jobPath, outPath, modeFlag;
    long seedFlag = -1, depthFlag = -1, directionsFlag = -1;
    app.add_option("--job", jobPath, "job description (JSON)")->required();
    app.add_option("--out", outPath, "report path (default: stdout)");
    app.add_option("--mode", modeFlag, "symbolic | specialized");
    app.add_option("--seed", seedFlag, "seed for specialized mode");
    app.add_option("--depth", depthFlag, "default module depth");
    app.add_option("--directions", directionsFlag, "regularization probe directions");
    CLI11_PARSE(app, argc, argv);

    try {
        std::ifstream in(jobPath);
        if (!in) {
            std::cerr << "error: cannot read job file " << jobPath << "\n";
            return 2;
        }
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            std::cerr << "error: job file is not valid JSON: " << e.what() << "\n";
            return 2;
        }

        Job job;
        job.raw = j;
        std::string type = needString(j, "type", "job");
        long rank = needInt(j, "rank", "job");
        LieType lt;
        if (type == "A")
            lt = LieType::A;
        else if (type == "B")
            lt = LieType::B;
        else if (type == "C")
            lt = LieType::C;
        else if (type == "D")
            lt = LieType::D;
        else {
            std::cerr << "error: job \"type\" must be A, B, C or D\n";
            return 2;
        }
        job.rd = std::make_shared<RootData>(lt, static_cast<int>(rank));
        job.task = needString(j, "task", "job");
        job.mode = modeFlag.empty() ? j.value("mode", std::string("symbolic")) : modeFlag;
        if (job.mode != "symbolic" && job.mode != "specialized")
            throw JobError("job: mode must be symbolic or specialized");
        job.seed = static_cast<unsigned long>(seedFlag >= 0 ? seedFlag : intOr(j, "seed", 1));
        job.depth = static_cast<int>(depthFlag >= 0 ? depthFlag : intOr(j, "depth", -1));
        job.directions =
            static_cast<int>(directionsFlag >= 0 ? directionsFlag : intOr(j, "directions", 0));
        if (j.contains("ordering"))
            for (long v : intArray(j, "ordering", "job"))
                job.ordering.push_back(static_cast<int>(v));

        json rep;
        if (job.task == "reducibility")
            rep = runReducibility(job);
        else if (job.task == "twist")
            rep = runTwist(job);
        else if (job.task == "sphere")
            rep = runSphere(job);
        else if (job.task == "projector-eigen")
            rep = runProjectorEigen(job);
        else if (job.task == "projector-check")
            rep = runProjectorCheck(job);
        else if (job.task == "oracle")
            rep = runOracle(job);
        else if (job.task == "selftest")
            rep = runSelftest(job);
        else
            throw JobError(
                "job: task must be one of reducibility, twist, sphere, projector-eigen, "
                "projector-check, oracle, selftest");

        std::string text = rep.dump(2);
        text.push_back('\n');
        if (outPath.empty()) {
            std::cout << text;
            std::cerr << digest(rep) << "\n";
        } else {
            std::ofstream out(outPath);
            if (!out) {
                std::cerr << "error: cannot write report to " << outPath << "\n";
                return 1;
            }
            out << text;
            std::cout << digest(rep) << "\n";
        }
        return 0;
    } catch (const JobError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DepthError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const PoleError& e) {
        std::cerr << "error: scalar field hit an unregularized pole: " << e.what() << "\n";
        return 4;
    } catch (const FieldError& e) {
        std::cerr << "error: scalar field misconfiguration: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::string msg = e.what();
        if (msg.find("shallow") != std::string::npos || msg.find("depth") != std::string::npos) {
            std::cerr << "error: " << msg << "; raise the module depths in the job\n";
            return 3;
        }
        std::cerr << "error: " << msg << "\n";
        return 1;
    }
}
