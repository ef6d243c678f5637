#pragma once

// Independent dense helpers for tests: Kronecker products of 2x2 matrices,
// built without going through the library's operator realization.

#include <Eigen/Dense>
#include <complex>
#include <string>

namespace oracle {

using C = std::complex<double>;
using M = Eigen::MatrixXcd;

inline M pauli(char c) {
  M m(2, 2);
  switch (c) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, C(0, -1), C(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m << 1, 0, 0, 1;
  }
  return m;
}

inline M kron(const M& a, const M& b) {
  M r(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

// "XIZ": site 0 first, site 0 is the most significant tensor factor.
inline M string(const std::string& s) {
  M r = M::Identity(1, 1);
  for (char c : s) r = kron(r, pauli(c));
  return r;
}

// Single-site operator embedded at `site` of `n`.
inline M at(const M& op, int site, int n) {
  M r = M::Identity(1, 1);
  for (int k = 0; k < n; ++k) r = kron(r, k == site ? op : M::Identity(2, 2));
  return r;
}

}  // namespace oracle
