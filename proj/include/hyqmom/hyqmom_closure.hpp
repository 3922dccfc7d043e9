#pragma once

#include <array>

#include "hyqmom/kinetic_state.hpp"

namespace hyqmom {

// Three-delta HyQMOM quadrature. The centre node sits at u.
struct QuadratureTriple {
    double w1 = 0.0, w2 = 0.0, w3 = 0.0;
    double mu1 = 0.0, mu3 = 0.0;
    double u_center = 0.0;
    double rho_tilde = 0.0;

    // sum_j w_j v_j^n
    double moment(int n) const;
};

struct EigenStructure {
    std::array<double, 5> lambda{};
    std::array<Vec5, 5> rvec{};
    double a_aux = 0.0;
    double b_aux = 0.0;
};

QuadratureTriple hyqmom_invert(const PrimitiveState& alpha);

double closing_moment(const PrimitiveState& alpha);

// (M1, M2, M3, M4, M5*) from primitives; no realizability check.
Vec5 flux_primitive(const PrimitiveState& alpha);
Vec5 flux(const ConservedMoments& q);

Mat5 primitive_jacobian(const PrimitiveState& alpha);

// B(alpha) * d without forming the matrix.
Vec5 primitive_jacobian_apply(const PrimitiveState& alpha, const Vec5& d);

EigenStructure eigenvalues(const PrimitiveState& alpha);

// Largest |lambda|, closed form without building eigenvectors.
double max_wave_speed(const PrimitiveState& alpha);
double max_wave_speed_unchecked(const PrimitiveState& alpha);

// d(lambda_l)/dq . R_l by central differences in conserved variables.
std::array<double, 5> linear_degeneracy_check(const PrimitiveState& alpha, double rel_step = 1e-5);

}  // namespace hyqmom
