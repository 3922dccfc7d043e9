#include "hyqmom/limiters.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hyqmom/errors.hpp"

namespace hyqmom {

void LimiterConfig::validate() const {
    if (!(pos_floor > 0.0)) throw std::invalid_argument("pos_floor must be positive");
    if (!(mu_aggr > 0.0 && mu_aggr <= 1.0)) throw std::invalid_argument("mu_aggr must lie in (0, 1]");
    if (!(a0 >= 0.0)) throw std::invalid_argument("a0 must be nonnegative");
}

void LimiterActivity::merge(const LimiterActivity& o) {
    prediction += o.prediction;
    mean_faces += o.mean_faces;
    mean_fallback += o.mean_fallback;
    correction += o.correction;
    oscillation += o.oscillation;
    min_theta_prediction = std::min(min_theta_prediction, o.min_theta_prediction);
    min_theta_mean = std::min(min_theta_mean, o.min_theta_mean);
    min_theta_correction = std::min(min_theta_correction, o.min_theta_correction);
    min_theta_oscillation = std::min(min_theta_oscillation, o.min_theta_oscillation);
}

PositivityPoints::PositivityPoints(int order) {
    const QuadratureRule gl = gauss_legendre(order);
    space.push_back(-1.0);
    for (double x : gl.nodes) space.push_back(x);
    space.push_back(1.0);
    for (double t : space)
        for (double x : space) spacetime.emplace_back(t, x);
}

namespace {

// min{1, (avg - eps)/(avg - min)}, read as 1 when nothing dips below the average
inline double damping(double avg, double vmin, double eps) {
    if (!(vmin < avg)) return 1.0;
    return std::clamp((avg - eps) / (avg - vmin), 0.0, 1.0);
}

// primitive (rho, u, p, h, k) from a conserved row without throwing
inline Vec5 prim_row(const Vec5& q) { return conserved_to_primitive_unchecked(q).as_vector(); }

}  // namespace

double limit_prediction(const DGOperators& ops, CoeffMat& w, const LimiterConfig& cfg) {
    const double eps = cfg.pos_floor;
    for (int m : {0, 2, 4})
        if (!(w(0, m) > eps))
            throw RealizabilityError(m == 0 ? "rho" : (m == 2 ? "p" : "k"), w(0, m), "space-time average in Limiter I");
    const CoeffMat vals = apply(ops.psi_px2, w);
    double theta = 1.0;
    for (int m : {0, 2, 4}) theta = std::min(theta, damping(w(0, m), vals.col(m).minCoeff(), eps));
    if (theta < 1.0) w.bottomRows(w.rows() - 1) *= theta;
    return theta;
}

FluxBlend limit_mean_fluxes(const std::vector<Vec5>& q_rus, const std::vector<Vec5>& dF, double dt, double dx,
                            const LimiterConfig& cfg, bool periodic) {
    const int n = static_cast<int>(q_rus.size());
    const double eps = cfg.pos_floor, nu = dt / dx;
    FluxBlend blend;
    blend.theta_face.assign(n + 1, 1.0);
    for (int i = 0; i < n; ++i) {
        const Vec5& qr = q_rus[i];
        const Vec5& dl = dF[i];
        const Vec5& drt = dF[i + 1];
        double lam_l = 1.0, lam_r = 1.0;

        // density: signed contributions to the mean, negative ones are harmful
        const double cl = dl[0], cr = -drt[0];
        const double gamma = (qr[0] - eps) / nu;
        if (cl < 0.0 && cr < 0.0) {
            lam_l = lam_r = std::min(1.0, gamma / (std::abs(cl) + std::abs(cr)));
        } else if (cl < 0.0) {
            lam_l = std::min(1.0, gamma / std::abs(cl));
        } else if (cr < 0.0) {
            lam_r = std::min(1.0, gamma / std::abs(cr));
        }
        lam_l = std::max(lam_l, 0.0);
        lam_r = std::max(lam_r, 0.0);

        // pressure then kurtosis: check the corners of [0,lam_l] x [0,lam_r]
        auto corner_scale = [&](auto functional, double base) {
            const Vec5 both = qr - nu * (lam_r * drt - lam_l * dl);
            const Vec5 left = qr + nu * lam_l * dl;
            const Vec5 right = qr - nu * lam_r * drt;
            double mu = 1.0;
            for (const Vec5* trial : {&both, &left, &right}) {
                const double v = functional(*trial);
                if (v < eps) mu = std::min(mu, (base - eps) / (base - v));
            }
            return std::clamp(mu, 0.0, 1.0);
        };
        const double p_rus = c_pressure(qr);
        const double mu_p = corner_scale([](const Vec5& q) { return c_pressure(q); }, p_rus);
        lam_l *= mu_p;
        lam_r *= mu_p;
        const double k_rus = c_kurtosis(qr);
        const double mu_k = corner_scale(
            [eps](const Vec5& q) {
                // kurtosis is only meaningful once density and pressure are positive
                if (!(q[0] > 0.0) || !(c_pressure(q) > 0.0)) return -1.0 / eps;
                return c_kurtosis(q);
            },
            k_rus);
        lam_l *= mu_k;
        lam_r *= mu_k;

        blend.theta_face[i] = std::min(blend.theta_face[i], lam_l);
        blend.theta_face[i + 1] = std::min(blend.theta_face[i + 1], lam_r);
    }
    if (periodic) {
        const double t = std::min(blend.theta_face[0], blend.theta_face[n]);
        blend.theta_face[0] = blend.theta_face[n] = t;
    }

    // safety net: any element whose blended mean is still not realizable falls back to Rusanov
    for (int pass = 0; pass <= n; ++pass) {
        const std::vector<Vec5> means = blended_means(q_rus, dF, blend, dt, dx);
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            const Vec5& q = means[i];
            bool ok = q[0] > eps;
            ok = ok && c_pressure(q) > eps;
            ok = ok && c_kurtosis(q) > eps;
            if (!ok && (blend.theta_face[i] > 0.0 || blend.theta_face[i + 1] > 0.0)) {
                blend.theta_face[i] = blend.theta_face[i + 1] = 0.0;
                if (periodic) {
                    if (i == 0) blend.theta_face[n] = 0.0;
                    if (i == n - 1) blend.theta_face[0] = 0.0;
                }
                changed = true;
            }
        }
        if (!changed) break;
    }
    return blend;
}

FluxBlend limit_mean_fluxes(const std::vector<Vec5>& averages, const std::vector<Vec5>& high_fluxes,
                            const std::vector<Vec5>& rusanov_fluxes, double dt, double dx, const LimiterConfig& cfg,
                            bool periodic) {
    const int n = static_cast<int>(averages.size());
    std::vector<Vec5> q_rus(n), dF(n + 1);
    for (int f = 0; f <= n; ++f) dF[f] = high_fluxes[f] - rusanov_fluxes[f];
    for (int i = 0; i < n; ++i) q_rus[i] = averages[i] - dt / dx * (rusanov_fluxes[i + 1] - rusanov_fluxes[i]);
    return limit_mean_fluxes(q_rus, dF, dt, dx, cfg, periodic);
}

std::vector<Vec5> blended_means(const std::vector<Vec5>& q_rus, const std::vector<Vec5>& dF, const FluxBlend& blend,
                                double dt, double dx) {
    const int n = static_cast<int>(q_rus.size());
    std::vector<Vec5> out(n);
    for (int i = 0; i < n; ++i)
        out[i] = q_rus[i] - dt / dx * (blend.theta_face[i + 1] * dF[i + 1] - blend.theta_face[i] * dF[i]);
    return out;
}

double limit_correction(const DGOperators& ops, CoeffMat& q, const LimiterConfig& cfg) {
    const double eps = cfg.pos_floor;
    const int rows = static_cast<int>(q.rows());
    double total = 1.0;
    auto scale = [&](double theta) {
        if (theta < 1.0 && rows > 1) q.bottomRows(rows - 1) *= theta;
        total *= theta;
    };

    // density
    const double rho_avg = q(0, 0);
    if (!(rho_avg > eps)) throw RealizabilityError("rho", rho_avg, "element mean in Limiter III");
    scale(damping(rho_avg, (ops.phi_px * q.col(0)).minCoeff(), eps));

    // pressure
    const Vec5 mean = q.row(0).transpose();
    const double p_avg = c_pressure(mean);
    if (!(p_avg > eps)) throw RealizabilityError("p", p_avg, "element mean in Limiter III");
    {
        const CoeffMat vals = apply(ops.phi_px, q);
        double pmin = p_avg;
        for (int a = 0; a < ops.npx; ++a) pmin = std::min(pmin, c_pressure(vals.row(a).transpose()));
        scale(damping(p_avg, pmin, eps));
    }

    // modified kurtosis
    const double k_avg = c_kurtosis(mean);
    if (!(k_avg > eps)) throw RealizabilityError("k", k_avg, "element mean in Limiter III");
    {
        const CoeffMat vals = apply(ops.phi_px, q);
        double kmin = k_avg;
        for (int a = 0; a < ops.npx; ++a) kmin = std::min(kmin, c_kurtosis(vals.row(a).transpose()));
        scale(damping(k_avg, kmin, eps));
    }
    return total;
}

int limit_oscillations(const DGOperators& ops, std::vector<CoeffMat>& q, double dx, bool periodic,
                       const LimiterConfig& cfg, double* min_theta) {
    const int n = static_cast<int>(q.size());
    if (n == 0) return 0;
    // variables rho, u, p, h, r
    std::vector<Vec5> wmax(n), wmin(n), wbar(n);
    for (int i = 0; i < n; ++i) {
        const CoeffMat vals = apply(ops.phi_px, q[i]);
        Vec5 hi = Vec5::Constant(-INFINITY), lo = Vec5::Constant(INFINITY);
        for (int a = 0; a < ops.npx; ++a) {
            const PrimitiveState s = conserved_to_primitive_unchecked(vals.row(a).transpose());
            const Vec5 w(s.rho, s.u, s.p, s.h, s.r());
            hi = hi.cwiseMax(w);
            lo = lo.cwiseMin(w);
        }
        wmax[i] = hi;
        wmin[i] = lo;
        const PrimitiveState sb = conserved_to_primitive_unchecked(q[i].row(0).transpose());
        wbar[i] = Vec5(sb.rho, sb.u, sb.p, sb.h, sb.r());
    }
    const double offset = cfg.a0 * std::pow(dx, 1.5);
    std::vector<double> theta(n, 1.0);
    for (int i = 0; i < n; ++i) {
        // bounds come from the two neighbours; an extrapolated end element is its own neighbour
        const int il = i > 0 ? i - 1 : (periodic ? n - 1 : i);
        const int ir = i < n - 1 ? i + 1 : (periodic ? 0 : i);
        double ratio = 1.0 / cfg.mu_aggr;
        for (int l = 0; l < 5; ++l) {
            const double M = std::max(wbar[i][l] + offset, std::max(wmax[il][l], wmax[ir][l]));
            const double m = std::min(wbar[i][l] - offset, std::min(wmin[il][l], wmin[ir][l]));
            // a ratio is only meaningful when the extremum lies on the expected side of the mean
            const double dM = wmax[i][l] - wbar[i][l], dm = wmin[i][l] - wbar[i][l];
            if (dM > 0.0) ratio = std::min(ratio, (M - wbar[i][l]) / dM);
            if (dm < 0.0) ratio = std::min(ratio, (m - wbar[i][l]) / dm);
        }
        theta[i] = std::clamp(cfg.mu_aggr * ratio, 0.0, 1.0);
    }
    int count = 0;
    for (int i = 0; i < n; ++i)
        if (theta[i] < 1.0) {
            q[i].bottomRows(q[i].rows() - 1) *= theta[i];
            ++count;
            if (min_theta) *min_theta = std::min(*min_theta, theta[i]);
        }
    return count;
}

}  // namespace hyqmom
