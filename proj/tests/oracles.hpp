// Copyright 2026 The donorgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>

#include <Eigen/Dense>

// Dense reference gates built from 2x2 factors, shared by the unit tests.
namespace oracle {

using Mat = Eigen::MatrixXcd;
using cd = std::complex<double>;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

inline Mat eye(int dim = 2) { return Mat::Identity(dim, dim); }

inline Mat x() {
  Mat m = Mat::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

inline Mat z(double theta) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = std::polar(1.0, theta);
  return m;
}

inline Mat on(int n, int qubit, const Mat& m) {
  Mat out = Mat::Identity(1, 1);
  for (int q = 0; q < n; ++q) out = kron(out, q == qubit ? m : eye());
  return out;
}

inline Mat cz(int n, int q1, int q2, double phi) {
  Mat p1 = Mat::Zero(2, 2);
  p1(1, 1) = 1.0;
  Mat p = Mat::Identity(1, 1);
  for (int q = 0; q < n; ++q) p = kron(p, (q == q1 || q == q2) ? p1 : eye());
  return Mat::Identity(p.rows(), p.rows()) + (std::polar(1.0, phi) - 1.0) * p;
}

inline Mat zzc(double a, double b, double c) { return kron(z(a), z(b)) * cz(2, 0, 1, c); }

// Max entrywise difference after aligning the global phase of b to a.
inline double distance_up_to_phase(const Mat& a, const Mat& b) {
  Eigen::Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  cd phase = a(r, c) / b(r, c);
  phase /= std::abs(phase);
  return (a - phase * b).cwiseAbs().maxCoeff();
}

}  // namespace oracle
