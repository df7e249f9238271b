#pragma once

#include "qext/modules.hpp"

namespace qext {

// The form stored per weight space (Module::gram) is the contravariant form
// normalized by <top, top> = 1, except on tensor modules, where it is the
// product of the factor forms (zero across distinct factor splits). The
// product form on a tensor is not contravariant for the coproduct action;
// the defect is exactly what the extremal twist measures.

// rows spanning the radical of the stored form on the given weight space
Mat formRadical(const Module& M, int sp);

// restriction of the form to the row span: R G R^T
Mat gramRestrict(const Module& M, int sp, const Mat& rows);

// <a, b> in the stored form on the given weight space
Scalar formValue(const Module& M, int sp, const Vec& a, const Vec& b);

}  // namespace qext
