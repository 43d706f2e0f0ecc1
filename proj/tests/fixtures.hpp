// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "pdms/matrix.hpp"
#include "pdms/params.hpp"

// Frozen reference data shared across the suites. The 5x6 scheme over F_11
// (n=6, k=5, mu=1, p=2) is the toolkit's canonical worked example; the other
// fixtures were mined once with an independent implementation and locked in.
namespace fixtures {

inline pdms::SchemeParams params_f11() { return {11, 6, 5, 1, 2}; }

// Cauchy source matrix (step 1).
inline pdms::FqMatrix source_f11() {
    return pdms::FqMatrix::from_rows(pdms::FieldModulus(11), {{2, 1, 6, 3, 7, 9},
                                                              {8, 6, 4, 9, 5, 2},
                                                              {7, 4, 3, 2, 10, 8},
                                                              {10, 9, 2, 7, 1, 5},
                                                              {4, 5, 10, 1, 9, 6}});
}

// After step 2: first column zeroed above the bottom row.
inline pdms::FqMatrix step2_f11() {
    return pdms::FqMatrix::from_rows(pdms::FieldModulus(11), {{0, 4, 1, 8, 8, 6},
                                                              {0, 7, 6, 7, 9, 1},
                                                              {0, 9, 2, 3, 8, 3},
                                                              {0, 2, 10, 10, 6, 1},
                                                              {4, 5, 10, 1, 9, 6}});
}

// After step 3: the final coding matrix.
inline pdms::FqMatrix coding_f11() {
    return pdms::FqMatrix::from_rows(pdms::FieldModulus(11), {{0, 1, 6, 0, 0, 7},
                                                              {0, 6, 4, 0, 0, 0},
                                                              {0, 0, 0, 2, 10, 7},
                                                              {0, 0, 0, 7, 1, 1},
                                                              {4, 5, 10, 1, 9, 6}});
}

// Tiny scheme over F_5 (n=4, k=3, mu=1, p=2) for the exhaustive entropy
// oracle: 5^3 = 125 states. No superregular 3x4 matrix exists over F_5 (that
// would be a [7,3] MDS code, impossible for q=5), so the source below is a
// hand-picked matrix whose construction output is MDS, strongly 1-secure and
// 2-decodable, which is all the entropy cross-validation needs.
inline pdms::SchemeParams params_f5() { return {5, 4, 3, 1, 2}; }

inline pdms::FqMatrix source_f5() {
    return pdms::FqMatrix::from_rows(pdms::FieldModulus(5),
                                     {{3, 2, 0, 0}, {3, 1, 4, 4}, {1, 1, 4, 1}});
}

inline pdms::FqMatrix coding_f5() {
    return pdms::FqMatrix::from_rows(pdms::FieldModulus(5),
                                     {{0, 2, 0, 3}, {0, 1, 4, 2}, {1, 1, 4, 1}});
}

// A Cauchy source over F_17 (n=7, k=6, mu=2, p=2) that fails the deletion-minor
// condition (block 0, first row, first column). Its scheme is MDS and strongly
// 2-secure but only weakly 2-secure, below the mu + p - 1 = 3 threshold:
// columns {2,3,4} (1-based) span the first unit vector.
inline pdms::SchemeParams params_f17() { return {17, 7, 6, 2, 2}; }

inline pdms::FqMatrix source_f17() {
    // cauchy points x = (7,14,16,5,9,4), y = (13,8,0,15,10,11,6)
    return pdms::FqMatrix::from_rows(pdms::FieldModulus(17), {{14, 16, 5, 2, 11, 4, 1},
                                                              {1, 3, 11, 16, 13, 6, 15},
                                                              {6, 15, 16, 1, 3, 7, 12},
                                                              {2, 11, 7, 5, 10, 14, 16},
                                                              {4, 1, 2, 14, 16, 8, 6},
                                                              {15, 4, 13, 3, 14, 12, 8}});
}

} // namespace fixtures
