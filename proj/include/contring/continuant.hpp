#pragma once

#include <span>
#include <string>

#include "contring/ring.hpp"

namespace contring {

// 2x2 matrix over a ring, entries as element indices, row major.
struct Mat2 {
  int a11, a12, a21, a22;
  bool operator==(const Mat2&) const = default;
};

Mat2 mat_identity(const Ring& ring);
Mat2 mat_mul(const Ring& ring, const Mat2& l, const Mat2& r);
Mat2 mat_neg(const Ring& ring, const Mat2& m);
int mat_det(const Ring& ring, const Mat2& m);
std::string mat_to_string(const Ring& ring, const Mat2& m);

// E(a) = [[a, -1], [1, 0]].
Mat2 generator(const Ring& ring, int a);

// E(a) * m. Appending an entry to a tuple multiplies its matrix on the left;
// this is the single step shared by the enumerators.
Mat2 push_entry(const Ring& ring, const Mat2& m, int a);

// Continuant K_n(x_1..x_n): K_{-1} = 0, K_0 = 1,
// K_n = x_n * K_{n-1}(x_1..x_{n-1}) - K_{n-2}(x_1..x_{n-2}).
// Empty input yields 1_A.
int continuant(const Ring& ring, std::span<const int> tuple);

// M_n(a_1..a_n) = E(a_n) * ... * E(a_1); requires n >= 1.
Mat2 m_matrix(const Ring& ring, std::span<const int> tuple);

// M_n == [[ K_n(a_1..a_n),      -K_{n-1}(a_2..a_n)     ],
//         [ K_{n-1}(a_1..a_{n-1}), -K_{n-2}(a_2..a_{n-1}) ]].
bool check_entry_identity(const Ring& ring, std::span<const int> tuple);

std::string tuple_to_string(const Ring& ring, std::span<const int> tuple);

}  // namespace contring
