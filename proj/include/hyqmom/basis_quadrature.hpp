#pragma once

#include <vector>

#include <Eigen/Dense>

namespace hyqmom {

using MatX = Eigen::MatrixXd;
using VecX = Eigen::VectorXd;

inline constexpr int kMaxOrder = 4;

struct QuadratureRule {
    enum class Kind { GaussLegendre, GaussRadauRight };
    Kind kind = Kind::GaussLegendre;
    std::vector<double> nodes;
    std::vector<double> weights;
    int size() const { return static_cast<int>(nodes.size()); }
};

struct BasisValues {
    VecX phi;
    VecX dphi;
};

// Orthonormal Legendre basis on [-1,1], normalised so (1/2) int phi_i phi_j = delta_ij.
// `order` is the number of functions, capped at 4.
BasisValues legendre_eval(int order, double xi);

// Same basis without the cap (error norm needs one extra mode).
double legendre_orthonormal(int index, double xi);
double legendre_orthonormal_derivative(int index, double xi);

QuadratureRule gauss_legendre(int n);
QuadratureRule gauss_radau_right(int n);

struct SpaceBasis {
    explicit SpaceBasis(int order);
    int order;
    int n_coeff;
};

// Psi_l(tau, xi) = Phi_l1(tau) Phi_l2(xi) with l1 + l2 <= order + 1.
struct SpaceTimeBasis {
    explicit SpaceTimeBasis(int order);
    int order;
    int n_coeff;
    std::vector<int> l1;  // 0-based time index per slot
    std::vector<int> l2;  // 0-based space index per slot

    // 1-based slot of (l1, l2): order (l1 - 1) - (l1 - 1)(l1 - 2)/2 + l2
    static int index(int order, int l1_one_based, int l2_one_based);

    VecX eval(double tau, double xi) const;
    VecX eval_dxi(double tau, double xi) const;
    VecX eval_dtau(double tau, double xi) const;
};

struct PredictorMatrices {
    int order = 1;
    MatX L;     // M_P x M_P
    MatX Linv;
    MatX C1;    // M_O^2 x M_P   modal -> space-time GL nodes
    MatX C2;    // M_P x M_O^2   nodal -> modal
    MatX C3;    // M_O x M_C     modal -> spatial GL nodes
    MatX C4;    // M_C x M_O
    MatX R;     // M_C x M_P     Radau blend
    double r_weight = 1.0;
    // tensor GL nodes, a = time-major index: node a = (tau_b, xi_c) with a = b*M_O + c
    std::vector<double> st_tau, st_xi, st_w;
};

PredictorMatrices build_predictor_matrices(int order);

}  // namespace hyqmom
