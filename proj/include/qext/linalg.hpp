#pragma once

#include <optional>
#include <vector>

#include "qext/scalar.hpp"

namespace qext {

using Vec = std::vector<Scalar>;
using Mat = std::vector<Vec>;  // row-major; rows may be empty

Vec vecZero(const FieldPtr& f, int n);
bool vecIsZero(const Vec& v);
Vec vecScale(const Vec& v, const Scalar& c);
Vec vecAdd(const Vec& a, const Vec& b);
Vec vecSub(const Vec& a, const Vec& b);
// a += c * b
void vecAddScaled(Vec& a, const Scalar& c, const Vec& b);
Scalar dot(const Vec& a, const Vec& b);

Mat matZero(const FieldPtr& f, int rows, int cols);
Mat matIdentity(const FieldPtr& f, int n);
Mat matMul(const Mat& a, const Mat& b, const FieldPtr& f);
Vec matApply(const Mat& a, const Vec& v);
Mat matTranspose(const Mat& a, const FieldPtr& f);
Mat matAdd(const Mat& a, const Mat& b);
Mat matScale(const Mat& a, const Scalar& c);
bool matEqual(const Mat& a, const Mat& b);
bool matIsZero(const Mat& a);

// Reduced row echelon form. Pivot choice: in the leftmost unfinished column,
// the candidate with the smallest representation wins (ties by row order), so
// results are deterministic for a given input.
struct Echelon {
    Mat rows;                  // nonzero rows, pivot entries are 1
    std::vector<int> pivots;   // pivot column of each row, strictly increasing
    int cols = 0;
};
Echelon rowEchelon(Mat a, const FieldPtr& f, int cols);

int matRank(const Mat& a, const FieldPtr& f, int cols);
Scalar matDet(Mat a, const FieldPtr& f);
std::optional<Mat> matInverse(const Mat& a, const FieldPtr& f);
// one solution of A x = b (free variables set to 0), or nullopt
std::optional<Vec> solve(const Mat& a, const Vec& b, const FieldPtr& f);
// rows form a basis of { x : A x = 0 }
Mat kernelBasis(const Mat& a, const FieldPtr& f, int cols);

// Incremental row space. Rows are kept fully reduced; optional coefficient
// tracking expresses members in terms of the rows that were accepted.
class RowSpan {
  public:
    RowSpan(FieldPtr f, int cols, bool trackCoeffs = false);

    // false if v already lies in the span (v is not added)
    bool add(Vec v);
    bool contains(const Vec& v) const;
    // residual of v after elimination against the current basis
    Vec reduceAgainst(Vec v) const;
    // coefficients c with v = sum c_i * added_i; requires trackCoeffs
    std::optional<Vec> expressInAdded(Vec v) const;

    int rank() const { return static_cast<int>(rows_.size()); }
    int cols() const { return cols_; }
    const Mat& rows() const { return rows_; }
    const std::vector<int>& pivots() const { return pivots_; }
    const FieldPtr& field() const { return f_; }

  private:
    FieldPtr f_;
    int cols_;
    bool track_;
    Mat rows_;                  // reduced; rows_[i] has pivot 1 at pivots_[i]
    Mat coeffs_;                // rows_[i] = sum_j coeffs_[i][j] * added_j
    std::vector<int> pivots_;
    int added_ = 0;
};

}  // namespace qext
