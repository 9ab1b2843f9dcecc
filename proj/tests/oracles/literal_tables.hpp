// Literal 4x4 tables in the ordering (z, zA, zB, zC), typed entry by entry.
// Nothing here calls into the library.

#ifndef OSPEP_TESTS_LITERAL_TABLES_HPP
#define OSPEP_TESTS_LITERAL_TABLES_HPP

#include <Eigen/Dense>

namespace oracle {

using M4 = Eigen::Matrix4d;

inline M4 m_i() {
  M4 m = M4::Zero();
  m(0, 0) = 1;
  return m;
}

inline M4 m_o(double t) {
  M4 m;
  m << 1, t, -t, 0,
       t, t * t, -t * t, 0,
       -t, -t * t, t * t, 0,
       0, 0, 0, 0;
  return m;
}

inline M4 a_mu(double a, double mu) {
  M4 m;
  m << 0, -0.5, 0, 0,
       -0.5, -a * mu - 1, 1, -0.5,
       0, 1, 0, 0,
       0, -0.5, 0, 0;
  return m;
}

inline M4 a_beta(double a, double b) {
  const double r = b / a;
  M4 m;
  m << -r, -r - 0.5, 2 * r, -r,
       -r - 0.5, -r - 1, 2 * r + 1, -r - 0.5,
       2 * r, 2 * r + 1, -4 * r, 2 * r,
       -r, -r - 0.5, 2 * r, -r;
  return m;
}

inline M4 a_lip(double a, double l) {
  M4 m;
  m << -1, -1, 2, -1,
       -1, a * a * l * l - 1, 2, -1,
       2, 2, -4, 2,
       -1, -1, 2, -1;
  return m;
}

inline M4 b_mu(double a, double mu) {
  M4 m;
  m << 0, 0, 0.5, 0,
       0, 0, 0, 0,
       0.5, 0, -a * mu - 1, 0,
       0, 0, 0, 0;
  return m;
}

inline M4 b_beta(double a, double b) {
  const double r = b / a;
  M4 m;
  m << -r, 0, r + 0.5, 0,
       0, 0, 0, 0,
       r + 0.5, 0, -r - 1, 0,
       0, 0, 0, 0;
  return m;
}

inline M4 b_lip(double a, double l) {
  M4 m;
  m << -1, 0, 1, 0,
       0, 0, 0, 0,
       1, 0, a * a * l * l - 1, 0,
       0, 0, 0, 0;
  return m;
}

inline M4 c_mu(double a, double mu) {
  M4 m = M4::Zero();
  m(2, 2) = -a * mu;
  m(2, 3) = m(3, 2) = 0.5;
  return m;
}

inline M4 c_beta(double a, double b) {
  M4 m = M4::Zero();
  m(2, 3) = m(3, 2) = 0.5;
  m(3, 3) = -b / a;
  return m;
}

inline M4 c_lip(double a, double l) {
  M4 m = M4::Zero();
  m(2, 2) = a * a * l * l;
  m(3, 3) = -1;
  return m;
}

}  // namespace oracle

#endif  // OSPEP_TESTS_LITERAL_TABLES_HPP
