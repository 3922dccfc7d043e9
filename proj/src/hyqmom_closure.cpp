#include "hyqmom/hyqmom_closure.hpp"

#include <algorithm>
#include <cmath>

#include "hyqmom/errors.hpp"

namespace hyqmom {

namespace {

void require_realizable(const PrimitiveState& a) {
    if (!(a.rho > 0.0)) throw RealizabilityError("rho", a.rho);
    if (!(a.p > 0.0)) throw RealizabilityError("p", a.p);
    if (!(a.k > 0.0)) throw RealizabilityError("k", a.k);
}

// lambda_1 and lambda_5, the extreme eigenvalues.
inline void extreme_speeds(const PrimitiveState& a, double& lo, double& hi) {
    const double s = a.h / (2.0 * a.p);
    const double aa = a.p / a.rho + a.k / a.p + s * s;
    const double bb = std::sqrt(a.k * a.k / (a.p * a.p) + a.k / a.rho);
    const double root = std::sqrt(aa + bb);
    lo = a.u + s - root;
    hi = a.u + s + root;
}

}  // namespace

double QuadratureTriple::moment(int n) const {
    return w1 * std::pow(mu1, n) + w2 * std::pow(u_center, n) + w3 * std::pow(mu3, n);
}

QuadratureTriple hyqmom_invert(const PrimitiveState& a) {
    require_realizable(a);
    QuadratureTriple t;
    // p(k + p^2/rho + h^2/p) - h^2 simplified to avoid cancellation
    t.rho_tilde = a.p * a.p * a.p / (a.p * a.k + a.p * a.p * a.p / a.rho);
    const double s = a.h / (2.0 * a.p);
    const double root = std::sqrt(a.p / t.rho_tilde + s * s);
    t.mu1 = a.u + s - root;
    t.mu3 = a.u + s + root;
    t.w1 = 0.5 * t.rho_tilde * (1.0 + s / root);
    t.w3 = 0.5 * t.rho_tilde * (1.0 - s / root);
    t.w2 = a.rho - t.rho_tilde;
    t.u_center = a.u;
    return t;
}

double closing_moment(const PrimitiveState& a) {
    if (!(a.p > 0.0)) throw RealizabilityError("p", a.p);
    if (!(a.rho > 0.0)) throw RealizabilityError("rho", a.rho);
    return flux_primitive(a)[4];
}

Vec5 flux_primitive(const PrimitiveState& a) {
    const double u = a.u, u2 = u * u, u3 = u2 * u;
    const double r = a.r();
    Vec5 f;
    f[0] = a.rho * u;
    f[1] = a.rho * u2 + a.p;
    f[2] = a.rho * u3 + 3.0 * a.p * u + a.h;
    f[3] = a.rho * u2 * u2 + 6.0 * a.p * u2 + 4.0 * a.h * u + r;
    f[4] = a.rho * u3 * u2 + 10.0 * a.p * u3 + 10.0 * a.h * u2 + 5.0 * r * u + 2.0 * a.h * r / a.p -
           a.h * a.h * a.h / (a.p * a.p);
    return f;
}

Vec5 flux(const ConservedMoments& q) { return flux_primitive(conserved_to_primitive(q)); }

Mat5 primitive_jacobian(const PrimitiveState& a) {
    if (!(a.rho > 0.0)) throw RealizabilityError("rho", a.rho);
    if (!(a.p > 0.0)) throw RealizabilityError("p", a.p);
    const double rho = a.rho, u = a.u, p = a.p, h = a.h, k = a.k;
    Mat5 B = Mat5::Zero();
    B(0, 0) = u;
    B(0, 1) = rho;
    B(1, 1) = u;
    B(1, 2) = 1.0 / rho;
    B(2, 1) = 3.0 * p;
    B(2, 2) = u;
    B(2, 3) = 1.0;
    B(3, 0) = -p * p / (rho * rho);
    B(3, 1) = 4.0 * h;
    B(3, 2) = -h * h / (p * p) - p / rho;
    B(3, 3) = u + 2.0 * h / p;
    B(3, 4) = 1.0;
    B(4, 1) = 5.0 * k;
    B(4, 2) = -2.0 * k * h / (p * p);
    B(4, 3) = 2.0 * k / p;
    B(4, 4) = u;
    return B;
}

Vec5 primitive_jacobian_apply(const PrimitiveState& a, const Vec5& d) {
    const double rho = a.rho, u = a.u, p = a.p, h = a.h, k = a.k;
    const double ip = 1.0 / p;
    Vec5 out;
    out[0] = u * d[0] + rho * d[1];
    out[1] = u * d[1] + d[2] / rho;
    out[2] = 3.0 * p * d[1] + u * d[2] + d[3];
    out[3] = -p * p / (rho * rho) * d[0] + 4.0 * h * d[1] - (h * h * ip * ip + p / rho) * d[2] + (u + 2.0 * h * ip) * d[3] + d[4];
    out[4] = 5.0 * k * d[1] - 2.0 * k * h * ip * ip * d[2] + 2.0 * k * ip * d[3] + u * d[4];
    return out;
}

EigenStructure eigenvalues(const PrimitiveState& a) {
    require_realizable(a);
    EigenStructure es;
    const double s = a.h / (2.0 * a.p);
    es.a_aux = a.p / a.rho + a.k / a.p + s * s;
    es.b_aux = std::sqrt(a.k * a.k / (a.p * a.p) + a.k / a.rho);
    const double outer = std::sqrt(es.a_aux + es.b_aux);
    const double inner = std::sqrt(es.a_aux - es.b_aux);
    es.lambda = {a.u + s - outer, a.u + s - inner, a.u, a.u + s + inner, a.u + s + outer};
    std::sort(es.lambda.begin(), es.lambda.end());
    for (int l = 0; l < 5; ++l) {
        const double lam = es.lambda[l];
        es.rvec[l] = Vec5(1.0, lam, lam * lam, lam * lam * lam, lam * lam * lam * lam);
    }
    return es;
}

double max_wave_speed_unchecked(const PrimitiveState& a) {
    double lo, hi;
    extreme_speeds(a, lo, hi);
    return std::max(std::abs(lo), std::abs(hi));
}

double max_wave_speed(const PrimitiveState& a) {
    require_realizable(a);
    return max_wave_speed_unchecked(a);
}

std::array<double, 5> linear_degeneracy_check(const PrimitiveState& a, double rel_step) {
    const ConservedMoments q0 = primitive_to_conserved(a);
    const EigenStructure es0 = eigenvalues(a);
    // eigenvector of the conservative Jacobian A = (dq/dalpha) B (dq/dalpha)^-1 is (1, l, l^2, l^3, l^4)
    std::array<double, 5> out{};
    Eigen::Matrix<double, 5, 5> grad;  // grad(l, j) = d lambda_l / d q_j
    for (int j = 0; j < 5; ++j) {
        double step = rel_step * std::max(1.0, std::abs(q0[j]));
        ConservedMoments qp, qm;
        // halve the step until both perturbed states stay realizable (states close to k = 0)
        for (int tries = 0;; ++tries) {
            qp = q0;
            qm = q0;
            qp[j] += step;
            qm[j] -= step;
            const ConvexFunctionals fp = convex_functionals(qp), fm = convex_functionals(qm);
            if (std::min({fp.c_rho, fp.c_p, fp.c_k, fm.c_rho, fm.c_p, fm.c_k}) > kRealizabilityFloor) break;
            if (tries == 40) throw RealizabilityError("k", c_kurtosis(q0), "linear_degeneracy_check: no realizable step");
            step *= 0.5;
        }
        const EigenStructure ep = eigenvalues(conserved_to_primitive(qp));
        const EigenStructure em = eigenvalues(conserved_to_primitive(qm));
        for (int l = 0; l < 5; ++l) grad(l, j) = (ep.lambda[l] - em.lambda[l]) / (2.0 * step);
    }
    for (int l = 0; l < 5; ++l) out[l] = grad.row(l).dot(es0.rvec[l]);
    return out;
}

}  // namespace hyqmom
