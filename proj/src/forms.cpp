#include "qext/forms.hpp"

namespace qext {

const Mat& Module::gram(int sp) const {
    auto& slot = gramCache[static_cast<std::size_t>(sp)];
    if (slot) return *slot;
    const int dim = dims[static_cast<std::size_t>(sp)];
    Mat G;
    if (quotientOf) {
        // representatives are unit vectors of the parent space and the
        // divided-out closure lies in the radical of the parent form
        const Mat& PG = quotientOf->gram(parentSpace[static_cast<std::size_t>(sp)]);
        const auto& kept = keptCols[static_cast<std::size_t>(sp)];
        G = matZero(field, dim, dim);
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b)
                G[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
                    PG[static_cast<std::size_t>(kept[static_cast<std::size_t>(a)])]
                      [static_cast<std::size_t>(kept[static_cast<std::size_t>(b)])]
                        .importInto(field);
    } else if (factorV) {
        G = matZero(field, dim, dim);
        const auto& prs = pairs[static_cast<std::size_t>(sp)];
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) {
                const auto& pa = prs[static_cast<std::size_t>(a)];
                const auto& pb = prs[static_cast<std::size_t>(b)];
                if (pa[0] != pb[0]) continue;  // complementary drops force pa[2] == pb[2]
                const Scalar& gv = factorV->gram(pa[0])[static_cast<std::size_t>(pa[1])]
                                                       [static_cast<std::size_t>(pb[1])];
                const Scalar& gz = factorZ->gram(pa[2])[static_cast<std::size_t>(pa[3])]
                                                       [static_cast<std::size_t>(pb[3])];
                G[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
                    (gv * gz).importInto(field);
            }
    } else if (dropHeight(drops[static_cast<std::size_t>(sp)]) == 0) {
        G = Mat{{field->one()}};
    } else {
        // ladder recursion: <f_i x, w> = -q^{-(xi + alpha_i, alpha_i)} <x, e_i w>
        // with xi the weight of this space
        G = matZero(field, dim, dim);
        for (int a = 0; a < dim; ++a) {
            const auto [i, pa] = parentOf[static_cast<std::size_t>(sp)]
                                         [static_cast<std::size_t>(a)];
            const Ambient& ai = rd->simpleRoot(i);
            const Weight shifted = wAddBase(weightOf[static_cast<std::size_t>(sp)], ai,
                                            mpq_class(1));
            const Scalar pref =
                -field->qexp(rd->pairWeight(shifted, ai, *field)).inverse();
            Drop pd = drops[static_cast<std::size_t>(sp)];
            pd[static_cast<std::size_t>(i)] -= 1;
            const Mat& Gp = gram(spaceAt(pd));
            const Mat* E = eBlock(i, sp);
            for (int b = 0; b < dim; ++b) {
                Scalar s = field->zero();
                for (std::size_t k = 0; k < Gp.size(); ++k) {
                    const Scalar& ev = (*E)[k][static_cast<std::size_t>(b)];
                    if (ev.isZero()) continue;
                    s += ev * Gp[static_cast<std::size_t>(pa)][k];
                }
                G[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = pref * s;
            }
        }
    }
    slot = std::move(G);
    return *slot;
}

Mat formRadical(const Module& M, int sp) {
    return kernelBasis(M.gram(sp), M.field, M.dims[static_cast<std::size_t>(sp)]);
}

Mat gramRestrict(const Module& M, int sp, const Mat& rows) {
    const Mat& G = M.gram(sp);
    const int r = static_cast<int>(rows.size());
    Mat out = matZero(M.field, r, r);
    for (int b = 0; b < r; ++b) {
        Vec gb = matApply(G, rows[static_cast<std::size_t>(b)]);
        for (int a = 0; a < r; ++a) {
            Scalar s = M.field->zero();
            const Vec& ra = rows[static_cast<std::size_t>(a)];
            for (std::size_t k = 0; k < ra.size(); ++k) {
                if (ra[k].isZero() || gb[k].isZero()) continue;
                s += ra[k] * gb[k];
            }
            out[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = s;
        }
    }
    return out;
}

Scalar formValue(const Module& M, int sp, const Vec& a, const Vec& b) {
    const Mat& G = M.gram(sp);
    Vec gb = matApply(G, b);
    Scalar s = M.field->zero();
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k].isZero() || gb[k].isZero()) continue;
        s += a[k] * gb[k];
    }
    return s;
}

}  // namespace qext
