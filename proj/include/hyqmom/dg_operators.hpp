#pragma once

#include <vector>

#include "hyqmom/basis_quadrature.hpp"

namespace hyqmom {

// Per-element coefficient or nodal table with five columns. The row bound covers the largest
// table at the highest order ((order + 2)^2 positivity points) so no heap allocation happens.
inline constexpr int kMaxTableRows = (kMaxOrder + 2) * (kMaxOrder + 2);
using CoeffMat = Eigen::Matrix<double, Eigen::Dynamic, 5, Eigen::ColMajor, kMaxTableRows, 5>;

// out = A * B for the small operator tables; avoids the general GEMM path.
inline CoeffMat apply(const MatX& A, const CoeffMat& B) {
    CoeffMat out = CoeffMat::Zero(A.rows(), 5);
    for (int c = 0; c < 5; ++c)
        for (int k = 0; k < A.cols(); ++k) out.col(c) += B(k, c) * A.col(k);
    return out;
}

// Every basis/quadrature table the element kernels need, built once per order.
// Space-time node n = b*nq + a sits at (tau_b, xi_a) of the nq-point GL rule.
struct DGOperators {
    explicit DGOperators(int order);

    int order;
    int mc;   // spatial coefficients
    int mp;   // space-time coefficients
    int nq;   // GL points per direction
    int npx;  // positivity points per direction

    QuadratureRule gl;
    SpaceTimeBasis st;
    PredictorMatrices pm;

    MatX phi_gl;        // nq x mc, rows Phi(mu_a)^T
    MatX phi_gl_proj;   // mc x nq, (1/2) w_a Phi(mu_a)
    MatX psi_nodes;     // nq^2 x mp
    MatX psi_xi_nodes;  // nq^2 x mp
    MatX st_proj;       // mp x nq^2, (1/4) w w Psi
    MatX picard_proj;   // Linv * st_proj
    MatX G;             // mp x mc, (1/4) int Psi(-1,xi) Phi(xi)^T
    MatX LinvG;
    MatX trace_plus;    // nq x mp, rows Psi(mu_a, +1)
    MatX trace_minus;   // nq x mp, rows Psi(mu_a, -1)
    MatX vol;           // mc x nq^2, w_a w_b Phi'(xi_a)
    MatX src_proj;      // mc x nq^2, (1/2) w_a w_b Phi(xi_a)
    VecX phi_plus, phi_minus;
    std::vector<double> node_tau, node_xi;

    std::vector<double> px;  // {-1, GL nodes, 1}
    MatX phi_px;             // npx x mc
    MatX psi_px2;            // npx^2 x mp
};

}  // namespace hyqmom
