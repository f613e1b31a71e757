#include "contring/continuant.hpp"

#include <vector>

namespace contring {

Mat2 mat_identity(const Ring& ring) {
  return {ring.one(), ring.zero(), ring.zero(), ring.one()};
}

Mat2 mat_mul(const Ring& ring, const Mat2& l, const Mat2& r) {
  return {
      ring.add(ring.mul(l.a11, r.a11), ring.mul(l.a12, r.a21)),
      ring.add(ring.mul(l.a11, r.a12), ring.mul(l.a12, r.a22)),
      ring.add(ring.mul(l.a21, r.a11), ring.mul(l.a22, r.a21)),
      ring.add(ring.mul(l.a21, r.a12), ring.mul(l.a22, r.a22)),
  };
}

Mat2 mat_neg(const Ring& ring, const Mat2& m) {
  return {ring.neg(m.a11), ring.neg(m.a12), ring.neg(m.a21), ring.neg(m.a22)};
}

int mat_det(const Ring& ring, const Mat2& m) {
  return ring.sub(ring.mul(m.a11, m.a22), ring.mul(m.a12, m.a21));
}

std::string mat_to_string(const Ring& ring, const Mat2& m) {
  return "[[" + ring.display(m.a11) + ", " + ring.display(m.a12) + "], [" +
         ring.display(m.a21) + ", " + ring.display(m.a22) + "]]";
}

Mat2 generator(const Ring& ring, int a) {
  return {a, ring.neg(ring.one()), ring.one(), ring.zero()};
}

Mat2 push_entry(const Ring& ring, const Mat2& m, int a) {
  // E(a) * m = [[a*p - r, a*q - s], [p, q]] for m = [[p, q], [r, s]].
  return {
      ring.sub(ring.mul(a, m.a11), m.a21),
      ring.sub(ring.mul(a, m.a12), m.a22),
      m.a11,
      m.a12,
  };
}

int continuant(const Ring& ring, std::span<const int> tuple) {
  int prev = ring.zero();  // K_{-1}
  int cur = ring.one();    // K_0
  for (int a : tuple) {
    int next = ring.sub(ring.mul(a, cur), prev);
    prev = cur;
    cur = next;
  }
  return cur;
}

Mat2 m_matrix(const Ring& ring, std::span<const int> tuple) {
  Mat2 m = mat_identity(ring);
  for (int a : tuple) m = push_entry(ring, m, a);
  return m;
}

bool check_entry_identity(const Ring& ring, std::span<const int> tuple) {
  Mat2 m = m_matrix(ring, tuple);
  std::size_t n = tuple.size();
  if (n == 0) return m == mat_identity(ring);
  int k_full = continuant(ring, tuple);
  int k_head = continuant(ring, tuple.first(n - 1));
  int k_tail = continuant(ring, tuple.subspan(1));
  // K over (a_2..a_{n-1}); the empty window at n == 1 is K_{-1} = 0.
  int k_mid = n == 1 ? ring.zero() : continuant(ring, tuple.subspan(1, n - 2));
  return m.a11 == k_full && m.a12 == ring.neg(k_tail) && m.a21 == k_head &&
         m.a22 == ring.neg(k_mid);
}

std::string tuple_to_string(const Ring& ring, std::span<const int> tuple) {
  std::string out = "(";
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (i) out += ", ";
    out += ring.display(tuple[i]);
  }
  return out + ")";
}

}  // namespace contring
