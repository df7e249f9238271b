#include "qext/linalg.hpp"

#include <cassert>

namespace qext {

namespace {

// pivot preference: fewer polynomial terms first
long scalarSize(const Scalar& s) {
    return static_cast<long>(s.numPoly().termCount()) +
           static_cast<long>(s.denPoly().termCount());
}

}  // namespace

Vec vecZero(const FieldPtr& f, int n) { return Vec(static_cast<std::size_t>(n), f->zero()); }

bool vecIsZero(const Vec& v) {
    for (const auto& x : v)
        if (!x.isZero()) return false;
    return true;
}

Vec vecScale(const Vec& v, const Scalar& c) {
    Vec r = v;
    for (auto& x : r) x *= c;
    return r;
}

Vec vecAdd(const Vec& a, const Vec& b) {
    assert(a.size() == b.size());
    Vec r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

Vec vecSub(const Vec& a, const Vec& b) {
    assert(a.size() == b.size());
    Vec r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

void vecAddScaled(Vec& a, const Scalar& c, const Vec& b) {
    assert(a.size() == b.size());
    if (c.isZero()) return;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!b[i].isZero()) a[i] += c * b[i];
}

Scalar dot(const Vec& a, const Vec& b) {
    assert(a.size() == b.size() && !a.empty());
    Scalar s = a[0].field()->zero();
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].isZero() && !b[i].isZero()) s += a[i] * b[i];
    return s;
}

Mat matZero(const FieldPtr& f, int rows, int cols) {
    return Mat(static_cast<std::size_t>(rows), vecZero(f, cols));
}

Mat matIdentity(const FieldPtr& f, int n) {
    Mat m = matZero(f, n, n);
    for (int i = 0; i < n; ++i)
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = f->one();
    return m;
}

Mat matMul(const Mat& a, const Mat& b, const FieldPtr& f) {
    if (a.empty()) return {};
    std::size_t n = a.size(), k = a[0].size(), m = b.empty() ? 0 : b[0].size();
    assert(b.size() == k);
    Mat r = matZero(f, static_cast<int>(n), static_cast<int>(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (a[i][t].isZero()) continue;
            for (std::size_t j = 0; j < m; ++j)
                if (!b[t][j].isZero()) r[i][j] += a[i][t] * b[t][j];
        }
    return r;
}

Vec matApply(const Mat& a, const Vec& v) {
    Vec r;
    r.reserve(a.size());
    for (const auto& row : a) r.push_back(dot(row, v));
    return r;
}

Mat matTranspose(const Mat& a, const FieldPtr& f) {
    std::size_t n = a.size(), m = a.empty() ? 0 : a[0].size();
    Mat r = matZero(f, static_cast<int>(m), static_cast<int>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) r[j][i] = a[i][j];
    return r;
}

Mat matAdd(const Mat& a, const Mat& b) {
    assert(a.size() == b.size());
    Mat r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = vecAdd(r[i], b[i]);
    return r;
}

Mat matScale(const Mat& a, const Scalar& c) {
    Mat r = a;
    for (auto& row : r) row = vecScale(row, c);
    return r;
}

bool matEqual(const Mat& a, const Mat& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != b[i].size()) return false;
        for (std::size_t j = 0; j < a[i].size(); ++j)
            if (a[i][j] != b[i][j]) return false;
    }
    return true;
}

bool matIsZero(const Mat& a) {
    for (const auto& row : a)
        if (!vecIsZero(row)) return false;
    return true;
}

Echelon rowEchelon(Mat a, const FieldPtr& f, int cols) {
    Echelon e;
    e.cols = cols;
    std::size_t nrows = a.size();
    std::size_t done = 0;  // rows finalized so far
    for (int col = 0; col < cols && done < nrows; ++col) {
        std::size_t best = nrows;
        long bestSize = 0;
        for (std::size_t r = done; r < nrows; ++r) {
            const Scalar& x = a[r][static_cast<std::size_t>(col)];
            if (x.isZero()) continue;
            long sz = scalarSize(x);
            if (best == nrows || sz < bestSize) {
                best = r;
                bestSize = sz;
            }
        }
        if (best == nrows) continue;
        std::swap(a[done], a[best]);
        Scalar inv = a[done][static_cast<std::size_t>(col)].inverse();
        for (int j = col; j < cols; ++j) {
            auto& x = a[done][static_cast<std::size_t>(j)];
            if (!x.isZero()) x *= inv;
        }
        for (std::size_t r = 0; r < nrows; ++r) {
            if (r == done) continue;
            Scalar c = a[r][static_cast<std::size_t>(col)];
            if (c.isZero()) continue;
            c = -c;
            for (int j = col; j < cols; ++j) {
                const auto& piv = a[done][static_cast<std::size_t>(j)];
                if (!piv.isZero()) a[r][static_cast<std::size_t>(j)] += c * piv;
            }
        }
        e.pivots.push_back(col);
        ++done;
    }
    (void)f;
    a.resize(done);
    e.rows = std::move(a);
    return e;
}

int matRank(const Mat& a, const FieldPtr& f, int cols) {
    return static_cast<int>(rowEchelon(a, f, cols).pivots.size());
}

Scalar matDet(Mat a, const FieldPtr& f) {
    std::size_t n = a.size();
    if (n == 0) return f->one();
    assert(a[0].size() == n);
    Scalar det = f->one();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t best = n;
        long bestSize = 0;
        for (std::size_t r = col; r < n; ++r) {
            if (a[r][col].isZero()) continue;
            long sz = scalarSize(a[r][col]);
            if (best == n || sz < bestSize) {
                best = r;
                bestSize = sz;
            }
        }
        if (best == n) return f->zero();
        if (best != col) {
            std::swap(a[col], a[best]);
            det = -det;
        }
        const Scalar piv = a[col][col];
        det *= piv;
        Scalar inv = piv.inverse();
        for (std::size_t r = col + 1; r < n; ++r) {
            Scalar c = a[r][col];
            if (c.isZero()) continue;
            c = -(c * inv);
            for (std::size_t j = col + 1; j < n; ++j)
                if (!a[col][j].isZero()) a[r][j] += c * a[col][j];
        }
    }
    return det;
}

std::optional<Mat> matInverse(const Mat& a, const FieldPtr& f) {
    std::size_t n = a.size();
    Mat aug = a;
    for (std::size_t i = 0; i < n; ++i) {
        assert(a[i].size() == n);
        for (std::size_t j = 0; j < n; ++j)
            aug[i].push_back(i == j ? f->one() : f->zero());
    }
    Echelon e = rowEchelon(std::move(aug), f, static_cast<int>(2 * n));
    if (e.pivots.size() != n || (n > 0 && e.pivots.back() != static_cast<int>(n) - 1))
        return std::nullopt;
    Mat inv;
    inv.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        inv.emplace_back(e.rows[i].begin() + static_cast<long>(n), e.rows[i].end());
    return inv;
}

std::optional<Vec> solve(const Mat& a, const Vec& b, const FieldPtr& f) {
    std::size_t n = a.size();
    assert(b.size() == n);
    std::size_t m = n == 0 ? 0 : a[0].size();
    Mat aug = a;
    for (std::size_t i = 0; i < n; ++i) aug[i].push_back(b[i]);
    Echelon e = rowEchelon(std::move(aug), f, static_cast<int>(m + 1));
    Vec x = vecZero(f, static_cast<int>(m));
    for (std::size_t r = 0; r < e.rows.size(); ++r) {
        if (e.pivots[r] == static_cast<int>(m)) return std::nullopt;  // 0 = 1 row
        x[static_cast<std::size_t>(e.pivots[r])] = e.rows[r][m];
    }
    return x;
}

Mat kernelBasis(const Mat& a, const FieldPtr& f, int cols) {
    Echelon e = rowEchelon(a, f, cols);
    std::vector<bool> isPivot(static_cast<std::size_t>(cols), false);
    std::vector<int> pivotRow(static_cast<std::size_t>(cols), -1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
        isPivot[static_cast<std::size_t>(e.pivots[r])] = true;
        pivotRow[static_cast<std::size_t>(e.pivots[r])] = static_cast<int>(r);
    }
    Mat ker;
    for (int j = 0; j < cols; ++j) {
        if (isPivot[static_cast<std::size_t>(j)]) continue;
        Vec v = vecZero(f, cols);
        v[static_cast<std::size_t>(j)] = f->one();
        for (int c = 0; c < cols; ++c) {
            int pr = pivotRow[static_cast<std::size_t>(c)];
            if (pr >= 0)
                v[static_cast<std::size_t>(c)] =
                    -e.rows[static_cast<std::size_t>(pr)][static_cast<std::size_t>(j)];
        }
        ker.push_back(std::move(v));
    }
    return ker;
}

RowSpan::RowSpan(FieldPtr f, int cols, bool trackCoeffs)
    : f_(std::move(f)), cols_(cols), track_(trackCoeffs) {}

Vec RowSpan::reduceAgainst(Vec v) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const Scalar& c = v[static_cast<std::size_t>(pivots_[i])];
        if (c.isZero()) continue;
        vecAddScaled(v, -c, rows_[i]);
    }
    return v;
}

bool RowSpan::contains(const Vec& v) const { return vecIsZero(reduceAgainst(v)); }

bool RowSpan::add(Vec v) {
    assert(static_cast<int>(v.size()) == cols_);
    Vec coeff;
    if (track_) {
        coeff = vecZero(f_, added_ + 1);
        coeff[static_cast<std::size_t>(added_)] = f_->one();
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const Scalar c = v[static_cast<std::size_t>(pivots_[i])];
        if (c.isZero()) continue;
        vecAddScaled(v, -c, rows_[i]);
        if (track_) {
            Vec padded = coeffs_[i];
            padded.resize(static_cast<std::size_t>(added_ + 1), f_->zero());
            vecAddScaled(coeff, -c, padded);
        }
    }
    int piv = -1;
    for (int j = 0; j < cols_; ++j)
        if (!v[static_cast<std::size_t>(j)].isZero()) {
            piv = j;
            break;
        }
    ++added_;
    if (piv < 0) return false;
    Scalar inv = v[static_cast<std::size_t>(piv)].inverse();
    for (auto& x : v)
        if (!x.isZero()) x *= inv;
    if (track_) {
        for (auto& x : coeff)
            if (!x.isZero()) x *= inv;
    }
    // keep earlier rows reduced against the new pivot
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const Scalar c = rows_[i][static_cast<std::size_t>(piv)];
        if (c.isZero()) continue;
        vecAddScaled(rows_[i], -c, v);
        if (track_) {
            Vec padded = coeff;
            coeffs_[i].resize(static_cast<std::size_t>(added_), f_->zero());
            vecAddScaled(coeffs_[i], -c, padded);
        }
    }
    // insert keeping pivot columns sorted
    std::size_t pos = 0;
    while (pos < pivots_.size() && pivots_[pos] < piv) ++pos;
    rows_.insert(rows_.begin() + static_cast<long>(pos), std::move(v));
    pivots_.insert(pivots_.begin() + static_cast<long>(pos), piv);
    if (track_) coeffs_.insert(coeffs_.begin() + static_cast<long>(pos), std::move(coeff));
    return true;
}

std::optional<Vec> RowSpan::expressInAdded(Vec v) const {
    assert(track_);
    Vec out = vecZero(f_, added_);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const Scalar c = v[static_cast<std::size_t>(pivots_[i])];
        if (c.isZero()) continue;
        vecAddScaled(v, -c, rows_[i]);
        Vec padded = coeffs_[i];
        padded.resize(static_cast<std::size_t>(added_), f_->zero());
        vecAddScaled(out, c, padded);
    }
    if (!vecIsZero(v)) return std::nullopt;
    return out;
}

}  // namespace qext
