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
#include "optload/linalg.hpp"

#include <cmath>
#include <limits>

#include <unsupported/Eigen/MatrixFunctions>

#include "optload/errors.hpp"

namespace optload::linalg {

namespace {

double scale_of(const Eigen::MatrixXd& M) {
    return M.size() == 0 ? 1.0 : std::max(1.0, M.cwiseAbs().maxCoeff());
}

/// Orthonormal basis of the column space of K (rank by singular values).
Eigen::MatrixXd range_basis(const Eigen::MatrixXd& K, double tol) {
    if (K.size() == 0) return Eigen::MatrixXd(K.rows(), 0);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(K, Eigen::ComputeFullU);
    const auto& s = svd.singularValues();
    const double cutoff = tol * std::max(1.0, s.size() > 0 ? s(0) : 0.0);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > cutoff) ++rank;
    }
    return svd.matrixU().leftCols(rank);
}

Eigen::MatrixXd controllability_matrix(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    const Eigen::Index n = A.rows();
    Eigen::MatrixXd K(n, n * B.cols());
    Eigen::MatrixXd block = B;
    for (Eigen::Index i = 0; i < n; ++i) {
        K.middleCols(i * B.cols(), B.cols()) = block;
        block = A * block;
    }
    return K;
}

}  // namespace

bool is_symmetric(const Eigen::MatrixXd& M, double tol) {
    if (M.rows() != M.cols()) return false;
    if (M.size() == 0) return true;
    return (M - M.transpose()).cwiseAbs().maxCoeff() <= tol * scale_of(M);
}

bool is_skew(const Eigen::MatrixXd& M, double tol) {
    if (M.rows() != M.cols()) return false;
    if (M.size() == 0) return true;
    return (M + M.transpose()).cwiseAbs().maxCoeff() <= tol * scale_of(M);
}

double min_eigenvalue(const Eigen::MatrixXd& M) {
    if (M.size() == 0) return std::numeric_limits<double>::infinity();
    const Eigen::MatrixXd sym = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

bool is_psd(const Eigen::MatrixXd& M) { return min_eigenvalue(M) >= kPsdFloor; }

double condition_number(const Eigen::MatrixXd& M) {
    if (M.size() == 0) return 1.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    if (smin == 0.0 || !std::isfinite(smin)) return std::numeric_limits<double>::infinity();
    return s(0) / smin;
}

Eigen::MatrixXd checked_inverse(const Eigen::MatrixXd& M, const std::string& what) {
    if (M.rows() != M.cols()) throw DimensionError(what + " is not square");
    const double cond = condition_number(M);
    if (!(cond < kMaxCondition)) {
        throw SingularCoordinateChange(what + " is singular (condition number " +
                                       std::to_string(cond) + ")");
    }
    return M.partialPivLu().inverse();
}

LinearSystem minimal_realization(const LinearSystem& sys, double tol) {
    // Controllable subspace, then the observable part of what remains.
    const Eigen::MatrixXd Vc = range_basis(controllability_matrix(sys.A, sys.B), tol);
    Eigen::MatrixXd A1 = Vc.transpose() * sys.A * Vc;
    Eigen::MatrixXd B1 = Vc.transpose() * sys.B;
    Eigen::MatrixXd C1 = sys.C * Vc;

    const Eigen::MatrixXd Ko =
        controllability_matrix(A1.transpose(), C1.transpose());
    const Eigen::MatrixXd Vo = range_basis(Ko, tol);
    LinearSystem out;
    out.A = Vo.transpose() * A1 * Vo;
    out.B = Vo.transpose() * B1;
    out.C = C1 * Vo;
    out.D = sys.D;
    return out;
}

Eigen::MatrixXd expm(const Eigen::MatrixXd& M) { return M.exp(); }

}  // namespace optload::linalg
