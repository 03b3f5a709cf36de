/*
 Copyright 2026 The optload Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef OPTLOAD_LINALG_HPP
#define OPTLOAD_LINALG_HPP

#include <string>

#include <Eigen/Dense>

#include "optload/model.hpp"

namespace optload::linalg {

inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kPsdFloor = -1e-10;
inline constexpr double kMaxCondition = 1e12;

bool is_symmetric(const Eigen::MatrixXd& M, double tol = kSymmetryTol);
bool is_skew(const Eigen::MatrixXd& M, double tol = kSymmetryTol);

/// Smallest eigenvalue of the symmetric part of M.
double min_eigenvalue(const Eigen::MatrixXd& M);

/// Whether min eigenvalue >= kPsdFloor.
bool is_psd(const Eigen::MatrixXd& M);

/// 2-norm condition number; infinity for singular or empty-rank matrices.
double condition_number(const Eigen::MatrixXd& M);

/// Inverse of a square matrix, throwing SingularCoordinateChange (or the
/// supplied category via `what`) when the condition number exceeds kMaxCondition.
Eigen::MatrixXd checked_inverse(const Eigen::MatrixXd& M, const std::string& what);

/// Controllable and observable part of a realization (orthogonal staircase
/// projections; rank decided relative to `tol`).
LinearSystem minimal_realization(const LinearSystem& sys, double tol = 1e-9);

/// exp(M) for a square matrix.
Eigen::MatrixXd expm(const Eigen::MatrixXd& M);

}  // namespace optload::linalg

#endif  // OPTLOAD_LINALG_HPP
