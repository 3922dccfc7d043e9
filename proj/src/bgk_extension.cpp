#include "hyqmom/bgk_extension.hpp"

#include <cmath>
#include <numbers>

#include "hyqmom/errors.hpp"

namespace hyqmom {

BgkSource bgk_source(const PrimitiveState& a) {
    if (!(a.p > 0.0)) throw RealizabilityError("p", a.p, "bgk_source");
    if (!(a.rho > 0.0)) throw RealizabilityError("rho", a.rho, "bgk_source");
    BgkSource s;
    s.s_cons_4 = -a.h;
    s.s_prim_4 = -a.h;
    s.s_cons_5 = -a.k + 2.0 * a.p * a.p / a.rho - (4.0 * a.p * a.u * a.h + a.h * a.h) / a.p;
    s.s_prim_5 = -a.k + 2.0 * a.p * a.p / a.rho + a.h * a.h / a.p;
    return s;
}

CoeffMat predict_element_bgk(const DGOperators& ops, const CoeffMat& q, double dt, double dx, double eps,
                             const LimiterConfig* limiter) {
    if (!(eps > 0.0)) throw std::invalid_argument("Knudsen number must be positive");
    PredictContext ctx;
    ctx.dt = dt;
    ctx.dx = dx;
    ctx.knudsen = eps;
    ctx.limiter = limiter;
    return predict_element(ops, q, ctx);
}

MatX post_prediction_source(const DGOperators& ops, const CoeffMat& w) {
    const int nn = ops.nq * ops.nq;
    const CoeffMat an = apply(ops.psi_nodes, w);
    MatX nodal(nn, 2);
    for (int n = 0; n < nn; ++n) {
        const BgkSource s = bgk_source(PrimitiveState::from_vector(an.row(n).transpose()));
        nodal(n, 0) = s.s_cons_4;
        nodal(n, 1) = s.s_cons_5;
    }
    return ops.st_proj * nodal;
}

MatX maxwellian_moments(const DGOperators& ops, const CoeffMat& q) {
    const CoeffMat qn = apply(ops.phi_gl, q);
    MatX nodal(ops.nq, 2);
    for (int a = 0; a < ops.nq; ++a) {
        const double rho = qn(a, 0), u = qn(a, 1) / rho, p = qn(a, 2) - qn(a, 1) * u;
        if (!(rho > 0.0) || !(p > 0.0)) throw RealizabilityError(rho > 0.0 ? "p" : "rho", rho > 0.0 ? p : rho, "Maxwellian moments");
        nodal(a, 0) = rho * u * u * u + 3.0 * p * u;
        nodal(a, 1) = rho * u * u * u * u + 6.0 * p * u * u + 3.0 * p * p / rho;
    }
    return ops.phi_gl_proj * nodal;
}

void collision_update(const DGOperators& ops, CoeffMat& q, const MatX& delta_m, double dt, double eps) {
    const double r = ops.pm.r_weight, half = 0.5 * dt;
    const double keep = r * eps / (half + r * eps);
    const double relax = half / (half + r * eps);
    const MatX target = r * (ops.pm.R * delta_m) + maxwellian_moments(ops, q);
    q.rightCols(2) = keep * q.rightCols(2) + relax * target;
}

CoeffMat correct_element_bgk(const DGOperators& ops, const CoeffMat& q, const CoeffMat& w, const Vec5& f_left,
                             const Vec5& f_right, const MatX& delta_m, double dt, double dx, double eps) {
    CoeffMat out = correct_element(ops, q, w, f_left, f_right, dt, dx);
    collision_update(ops, out, delta_m, dt, eps);
    return out;
}

namespace {

struct MsCoeffs {
    double u, rho, p, h, k;
    double A1, A2, A3, A4, A5, A6, A7;
};

MsCoeffs ms_coeffs(double e) {
    MsCoeffs c;
    const double ee = e + e * e;
    const double one2 = 1.0 + 2.0 * e;
    c.u = (1.0 - 3.0 * e) / (4.0 + 8.0 * e);
    c.rho = one2 / (2.0 + 2.0 * e);
    c.p = (2.0 + 33.0 * ee) / (32.0 * (1.0 + e) * one2);
    c.h = -125.0 * e / (128.0 * one2 * one2);
    const double r = (12.0 + ee * (1021.0 + 2017.0 * ee)) / (512.0 * (1.0 + e) * one2 * one2 * one2);
    c.k = r - c.p * c.p / c.rho - c.h * c.h / c.p;
    c.A1 = (3.0 + 11.0 * e) / (4.0 * (1.0 + e));
    c.A2 = (1.0 - 33.0 * e) / (16.0 * (1.0 + e));
    c.A3 = 5.0 * (1.0 + 33.0 * e) / (64.0 * (1.0 + e));
    c.A4 = (3.0 - 809.0 * e) / (256.0 * (1.0 + e));
    c.A5 = -125.0 / (128.0 * one2 * one2);
    c.A6 = 125.0 * (1.0 + 2.0 * e - 10.0 * e * e) / (512.0 * one2 * one2 * one2);
    const double e2 = e * e, e3 = e2 * e, e4 = e3 * e, e5 = e4 * e;
    const double d = 2.0 + 33.0 * ee;
    c.A7 = (76.0 + 3620.0 * e + 521895.0 * e2 + 5285445.0 * e3 + 9544425.0 * e4 + 4794867.0 * e5) /
           (1024.0 * (1.0 + e) * d * d);
    return c;
}

}  // namespace

PrimitiveState manufactured_solution(double t, double x, double eps) {
    const MsCoeffs c = ms_coeffs(eps);
    const double g = std::sqrt(std::numbers::pi) * (2.0 - std::cos(2.0 * std::numbers::pi * (t - x)));
    return {c.rho * g, c.u, c.p * g, c.h * g, c.k * g};
}

Vec5 ms_source(double t, double x, double eps) {
    const MsCoeffs c = ms_coeffs(eps);
    const double pi = std::numbers::pi;
    const double ph = 2.0 * pi * (t - x);
    const double s1 = std::pow(pi, 1.5) * std::sin(ph);
    const double s2 = std::sqrt(pi) * (2.0 - std::cos(ph));
    return Vec5(s1 * c.A1, s1 * c.A2, s1 * c.A3, s1 * c.A4 + s2 * c.A5, s1 * c.A7 + s2 * c.A6);
}

ElementSolution advance_to_bgk(const ElementSolution& s, const Mesh& mesh, double t_final, double eps,
                               const LimiterConfig& limiters, bool ms_on, int order) {
    SolverOptions opts;
    opts.order = order;
    opts.limiters = limiters;
    opts.knudsen = eps;
    opts.manufactured = ms_on;
    return advance_to(s, mesh, t_final, opts);
}

}  // namespace hyqmom
