#pragma once

#include <Eigen/Dense>

namespace hyqmom {

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

// Default realizability floor shared with the positivity limiters.
inline constexpr double kRealizabilityFloor = 1e-14;

struct PrimitiveState {
    double rho = 1.0;
    double u = 0.0;
    double p = 1.0;
    double h = 0.0;
    double k = 2.0;

    // r = p^2/rho + h^2/p + k
    double r() const { return p * p / rho + h * h / p + k; }
    bool realizable(double floor = kRealizabilityFloor) const {
        return rho > floor && p > floor && k > floor;
    }
    Vec5 as_vector() const { return Vec5(rho, u, p, h, k); }
    static PrimitiveState from_vector(const Vec5& v) { return {v[0], v[1], v[2], v[3], v[4]}; }
};

// Raw velocity moments M0..M4.
using ConservedMoments = Vec5;

struct NormalizedMoments {
    double m3t = 0.0;
    double m4t = 3.0;
};

struct ConvexFunctionals {
    double c_rho = 0.0;
    double c_p = 0.0;
    double c_k = 0.0;
};

struct HankelDeterminants {
    double d0 = 1.0;
    double d1 = 1.0;
    double d2 = 0.0;
};

ConservedMoments primitive_to_conserved(const PrimitiveState& alpha);

// Throws RealizabilityError when rho or p fall below `floor`.
PrimitiveState conserved_to_primitive(const ConservedMoments& q, double floor = kRealizabilityFloor);

// Unchecked variant for inner loops where positivity has already been established.
PrimitiveState conserved_to_primitive_unchecked(const ConservedMoments& q);

ConvexFunctionals convex_functionals(const ConservedMoments& q);
double c_pressure(const ConservedMoments& q);
double c_kurtosis(const ConservedMoments& q);

NormalizedMoments normalized_moments(const ConservedMoments& q, double floor = kRealizabilityFloor);
HankelDeterminants hankel_determinants(const NormalizedMoments& nm);

// dq/dalpha, used to pull conserved sources back to primitive form.
Mat5 conserved_jacobian(const PrimitiveState& alpha);

}  // namespace hyqmom
