#include "hyqmom/kinetic_state.hpp"

#include <cmath>

#include "hyqmom/errors.hpp"

namespace hyqmom {

ConservedMoments primitive_to_conserved(const PrimitiveState& a) {
    if (!std::isfinite(a.rho) || !std::isfinite(a.u) || !std::isfinite(a.p) || !std::isfinite(a.h) ||
        !std::isfinite(a.k))
        throw InvalidStateError("primitive_to_conserved: non-finite input");
    if (a.rho == 0.0 || a.p == 0.0)
        throw InvalidStateError("primitive_to_conserved: r is singular for rho = 0 or p = 0");
    const double u = a.u, u2 = u * u;
    const double r = a.r();
    ConservedMoments q;
    q[0] = a.rho;
    q[1] = a.rho * u;
    q[2] = a.rho * u2 + a.p;
    q[3] = a.rho * u2 * u + 3.0 * a.p * u + a.h;
    q[4] = a.rho * u2 * u2 + 6.0 * a.p * u2 + 4.0 * a.h * u + r;
    return q;
}

PrimitiveState conserved_to_primitive_unchecked(const ConservedMoments& q) {
    const double m0 = q[0], m1 = q[1], m2 = q[2], m3 = q[3], m4 = q[4];
    PrimitiveState a;
    a.rho = m0;
    a.u = m1 / m0;
    a.p = m2 - m1 * m1 / m0;
    a.h = m3 - 3.0 * m1 * m2 / m0 + 2.0 * m1 * m1 * m1 / (m0 * m0);
    // central fourth moment minus p^2/rho + h^2/p
    const double u = a.u;
    const double c4 = m4 - 4.0 * u * m3 + 6.0 * u * u * m2 - 3.0 * u * u * u * u * m0;
    a.k = c4 - a.p * a.p / a.rho - a.h * a.h / a.p;
    return a;
}

PrimitiveState conserved_to_primitive(const ConservedMoments& q, double floor) {
    if (!q.allFinite()) throw InvalidStateError("conserved_to_primitive: non-finite input");
    if (!(q[0] > floor)) throw RealizabilityError("rho", q[0]);
    const double p = q[2] - q[1] * q[1] / q[0];
    if (!(p > floor)) throw RealizabilityError("p", p);
    return conserved_to_primitive_unchecked(q);
}

double c_pressure(const ConservedMoments& q) {
    if (q[0] == 0.0) throw DegenerateStateError("C_p: zero density");
    return q[2] - q[1] * q[1] / q[0];
}

double c_kurtosis(const ConservedMoments& q) {
    const double q1 = q[0], q2 = q[1], q3 = q[2], q4 = q[3], q5 = q[4];
    const double den = q2 * q2 - q1 * q3;
    if (den == 0.0) throw DegenerateStateError("C_k: zero denominator");
    const double num = q3 * q3 * q3 - 2.0 * q2 * q3 * q4 + q1 * q4 * q4 + q2 * q2 * q5 - q1 * q3 * q5;
    return num / den;
}

ConvexFunctionals convex_functionals(const ConservedMoments& q) {
    return {q[0], c_pressure(q), c_kurtosis(q)};
}

NormalizedMoments normalized_moments(const ConservedMoments& q, double floor) {
    const PrimitiveState a = conserved_to_primitive(q, floor);
    const double T = a.p / a.rho;
    NormalizedMoments nm;
    nm.m3t = a.h / (a.rho * T * std::sqrt(T));
    nm.m4t = a.r() / (a.rho * T * T);
    return nm;
}

HankelDeterminants hankel_determinants(const NormalizedMoments& nm) {
    return {1.0, 1.0, nm.m4t - nm.m3t * nm.m3t - 1.0};
}

Mat5 conserved_jacobian(const PrimitiveState& a) {
    const double rho = a.rho, u = a.u, p = a.p, h = a.h;
    const double u2 = u * u;
    Mat5 J = Mat5::Zero();
    J(0, 0) = 1.0;
    J(1, 0) = u;
    J(1, 1) = rho;
    J(2, 0) = u2;
    J(2, 1) = 2.0 * rho * u;
    J(2, 2) = 1.0;
    J(3, 0) = u2 * u;
    J(3, 1) = 3.0 * rho * u2 + 3.0 * p;
    J(3, 2) = 3.0 * u;
    J(3, 3) = 1.0;
    J(4, 0) = u2 * u2 - p * p / (rho * rho);
    J(4, 1) = 4.0 * rho * u2 * u + 12.0 * p * u + 4.0 * h;
    J(4, 2) = 6.0 * u2 + 2.0 * p / rho - h * h / (p * p);
    J(4, 3) = 4.0 * u + 2.0 * h / p;
    J(4, 4) = 1.0;
    return J;
}

}  // namespace hyqmom
