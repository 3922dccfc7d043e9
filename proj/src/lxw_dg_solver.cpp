#include "hyqmom/lxw_dg_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hyqmom/bgk_extension.hpp"
#include "hyqmom/errors.hpp"
#include "hyqmom/hyqmom_closure.hpp"
#include "hyqmom/reference_solvers.hpp"

namespace hyqmom {

double default_cfl(int order) {
    switch (order) {
        case 1: return 0.90;
        case 2: return 0.30;
        case 3: return 0.14;
        case 4: return 0.09;
        default: throw CapabilityError("no CFL default for order " + std::to_string(order));
    }
}

double TimeStepController::next_dt(double lambda_global, double dx, double t) const {
    double dt = cfl * dx / lambda_global;
    if (t + dt > t_final) dt = t_final - t;
    return dt;
}

ElementSolution project_initial_condition(const ConservedField& q0, const Mesh& mesh, int order,
                                          std::optional<double> jump) {
    mesh.validate();
    const QuadratureRule gl = gauss_legendre(order + 2);
    const double dx = mesh.dx();
    ElementSolution sol;
    sol.coeffs.resize(mesh.n_elem);
    for (int i = 0; i < mesh.n_elem; ++i) {
        const double xl = mesh.x_low + i * dx, xr = xl + dx, xc = mesh.center(i);
        std::vector<std::pair<double, double>> pieces{{-1.0, 1.0}};
        if (jump && *jump > xl && *jump < xr) {
            const double xi_j = 2.0 * (*jump - xc) / dx;
            pieces = {{-1.0, xi_j}, {xi_j, 1.0}};
        }
        CoeffMat c = CoeffMat::Zero(order, 5);
        for (const auto& [a, b] : pieces)
            for (int g = 0; g < gl.size(); ++g) {
                const double xi = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[g];
                const double w = 0.5 * (b - a) * gl.weights[g];
                const ConservedMoments q = q0(xc + 0.5 * dx * xi);
                try {
                    conserved_to_primitive(q);
                } catch (const RealizabilityError& e) {
                    throw RealizabilityError(e.functional(), e.value(), "initial data in element " + std::to_string(i));
                }
                c += 0.5 * w * legendre_eval(order, xi).phi * q.transpose();
            }
        sol.coeffs[i] = c;
    }
    return sol;
}

CoeffMat primitive_coefficients(const DGOperators& ops, const CoeffMat& q) {
    const CoeffMat qn = apply(ops.phi_gl, q);
    CoeffMat an(ops.nq, 5);
    for (int a = 0; a < ops.nq; ++a) an.row(a) = conserved_to_primitive(qn.row(a).transpose()).as_vector().transpose();
    return apply(ops.phi_gl_proj, an);
}

namespace {

void damp_prediction(const DGOperators& ops, CoeffMat& w, const CoeffMat& w0, const PredictContext& ctx) {
    if (!ctx.limiter || !ctx.limiter->prediction) return;
    double theta;
    try {
        theta = limit_prediction(ops, w, *ctx.limiter);
    } catch (const RealizabilityError&) {
        // space-time average left the realizable set: restart from the frozen-in-time guess
        w = w0;
        theta = limit_prediction(ops, w, *ctx.limiter);
        if (ctx.activity) ++ctx.activity->mean_fallback;
    }
    if (ctx.activity && theta < 1.0) {
        ++ctx.activity->prediction;
        ctx.activity->min_theta_prediction = std::min(ctx.activity->min_theta_prediction, theta);
    }
}

}  // namespace

CoeffMat predict_element(const DGOperators& ops, const CoeffMat& q, const PredictContext& ctx) {
    const int nn = ops.nq * ops.nq, mp = ops.mp;
    const CoeffMat A = primitive_coefficients(ops, q);
    CoeffMat W = CoeffMat::Zero(mp, 5);
    // slots with l1 = 1 are the first M_C entries
    W.topRows(ops.mc) = A;
    if (ops.order == 1) return W;
    const CoeffMat W0 = W;

    const bool bgk = ctx.knudsen > 0.0;
    MatX K, S;
    if (bgk) {
        const MatX M = 0.5 * ctx.dt * MatX::Identity(mp, mp) + ctx.knudsen * ops.pm.L;
        const MatX Minv = M.inverse();
        K = ctx.knudsen * Minv;
        S = 0.5 * ctx.dt * Minv;
    }

    CoeffMat ms_nodes = CoeffMat::Zero(nn, 5);
    if (ctx.manufactured) {
        for (int n = 0; n < nn; ++n) {
            const double t = ctx.t_n + 0.5 * ctx.dt * (1.0 + ops.node_tau[n]);
            const double x = ctx.x_center + 0.5 * ctx.dx * ops.node_xi[n];
            const Mat5 J = conserved_jacobian(manufactured_solution(t, x, ctx.knudsen));
            const Vec5 s = J.triangularView<Eigen::Lower>().solve(ms_source(t, x, ctx.knudsen));
            ms_nodes.row(n) = 0.5 * ctx.dt * s.transpose();
        }
    }

    const double nu = ctx.dt / ctx.dx;
    const CoeffMat GA = bgk ? apply(ops.G, A) : apply(ops.LinvG, A);
    CoeffMat theta(nn, 5);
    for (int it = 1; it < ops.order; ++it) {
        const CoeffMat al = apply(ops.psi_nodes, W);
        const CoeffMat ax = apply(ops.psi_xi_nodes, W);
        for (int n = 0; n < nn; ++n) {
            const PrimitiveState s = PrimitiveState::from_vector(al.row(n).transpose());
            theta.row(n) = -nu * primitive_jacobian_apply(s, ax.row(n).transpose()).transpose();
        }
        if (ctx.manufactured) theta += ms_nodes;
        if (!bgk) {
            W = apply(ops.picard_proj, theta) + GA;
        } else {
            const CoeffMat rhs = apply(ops.st_proj, theta) + GA;
            W.leftCols(3) = ops.pm.Linv * rhs.leftCols(3);
            W.col(3) = K * rhs.col(3);
            if (ctx.limiter && ctx.limiter->prediction) {
                // keep rho and p positive at the nodes before they feed the kurtosis source
                const CoeffMat vals = apply(ops.psi_px2, W);
                const double eps = ctx.limiter->pos_floor;
                double th = 1.0;
                for (int m : {0, 2}) {
                    const double avg = W(0, m), vmin = vals.col(m).minCoeff();
                    if (avg > eps && vmin < avg) th = std::min(th, std::clamp((avg - eps) / (avg - vmin), 0.0, 1.0));
                }
                if (th < 1.0) W.block(1, 0, mp - 1, 4) *= th;
            }
            const CoeffMat an = apply(ops.psi_nodes, W);
            VecX shat(nn);
            for (int n = 0; n < nn; ++n) {
                const double rho = an(n, 0), p = an(n, 2), h = an(n, 3);
                shat[n] = 2.0 * p * p / rho + h * h / p;
            }
            W.col(4) = K * rhs.col(4) + S * (ops.st_proj * shat);
        }
        damp_prediction(ops, W, W0, ctx);
    }
    return W;
}

Vec5 interface_flux_time_avg(const DGOperators& ops, const CoeffMat& w_left, const CoeffMat& w_right) {
    const CoeffMat al = apply(ops.trace_plus, w_left);
    const CoeffMat ar = apply(ops.trace_minus, w_right);
    Vec5 F = Vec5::Zero();
    for (int a = 0; a < ops.nq; ++a) {
        const PrimitiveState sl = PrimitiveState::from_vector(al.row(a).transpose());
        const PrimitiveState sr = PrimitiveState::from_vector(ar.row(a).transpose());
        const double lam = std::max(max_wave_speed(sl), max_wave_speed(sr));
        const Vec5 fa = 0.5 * (flux_primitive(sl) + flux_primitive(sr)) -
                        0.5 * lam * (primitive_to_conserved(sr) - primitive_to_conserved(sl));
        F += 0.5 * ops.gl.weights[a] * fa;
    }
    return F;
}

CoeffMat correct_element(const DGOperators& ops, const CoeffMat& q, const CoeffMat& w, const Vec5& f_left,
                         const Vec5& f_right, double dt, double dx) {
    const int nn = ops.nq * ops.nq;
    const CoeffMat an = apply(ops.psi_nodes, w);
    CoeffMat fn(nn, 5);
    for (int n = 0; n < nn; ++n) fn.row(n) = flux_primitive(PrimitiveState::from_vector(an.row(n).transpose())).transpose();
    CoeffMat out = q + (0.5 * dt / dx) * apply(ops.vol, fn);
    out -= (dt / dx) * (ops.phi_plus * f_right.transpose() - ops.phi_minus * f_left.transpose());
    return out;
}

LxwDgSolver::LxwDgSolver(const Mesh& mesh, const SolverOptions& options)
    : mesh_(mesh), opts_(options), ops_(options.order) {
    mesh_.validate();
    opts_.limiters.validate();
    if (opts_.cfl <= 0.0) opts_.cfl = default_cfl(opts_.order);
    if (opts_.knudsen < 0.0) throw std::invalid_argument("Knudsen number must be positive");
    if (opts_.manufactured && opts_.knudsen <= 0.0)
        throw std::invalid_argument("manufactured source needs a positive Knudsen number");
}

double LxwDgSolver::max_wave_speed_global(const ElementSolution& s) const {
    double lam = 0.0;
    for (int i = 0; i < s.size(); ++i) {
        try {
            lam = std::max(lam, max_wave_speed(conserved_to_primitive(s.mean(i))));
        } catch (const RealizabilityError& e) {
            throw RealizabilityError(e.functional(), e.value(),
                                     "mean of element " + std::to_string(i) + " at t = " + std::to_string(s.time));
        }
    }
    return lam;
}

StepReport LxwDgSolver::step(ElementSolution& s, double t_final) {
    const int N = mesh_.n_elem;
    const bool periodic = mesh_.boundary == BoundaryKind::Periodic;
    const double dx = mesh_.dx();
    const LimiterConfig& lim = opts_.limiters;
    StepReport rep;
    rep.step = steps_ + 1;

    TimeStepController ctl{opts_.cfl, t_final};
    const double dt = ctl.next_dt(max_wave_speed_global(s), dx, s.time);
    const bool final_step = dt == t_final - s.time;
    rep.dt = dt;

    PredictContext ctx;
    ctx.dt = dt;
    ctx.dx = dx;
    ctx.t_n = s.time;
    ctx.knudsen = opts_.knudsen;
    ctx.manufactured = opts_.manufactured;
    ctx.limiter = &lim;
    ctx.activity = &rep.activity;

    std::vector<CoeffMat> W(N);
    for (int i = 0; i < N; ++i) {
        ctx.x_center = mesh_.center(i);
        try {
            W[i] = predict_element(ops_, s.coeffs[i], ctx);
        } catch (const RealizabilityError& e) {
            throw RealizabilityError(e.functional(), e.value(),
                                     "prediction of element " + std::to_string(i) + " at t = " + std::to_string(s.time));
        }
    }
    auto w_at = [&](int i) -> const CoeffMat& {
        if (i < 0) return periodic ? W[N - 1] : W[0];
        if (i >= N) return periodic ? W[0] : W[N - 1];
        return W[i];
    };
    std::vector<Vec5> F(N + 1);
    for (int f = 0; f <= N; ++f) {
        try {
            F[f] = interface_flux_time_avg(ops_, w_at(f - 1), w_at(f));
        } catch (const RealizabilityError& e) {
            throw RealizabilityError(e.functional(), e.value(),
                                     "trace at face " + std::to_string(f) + " at t = " + std::to_string(s.time));
        }
    }

    const int nn = ops_.nq * ops_.nq;
    std::vector<CoeffMat> Q(N);
    std::vector<Vec5> src_mean(N, Vec5::Zero());
    for (int i = 0; i < N; ++i) {
        Q[i] = correct_element(ops_, s.coeffs[i], W[i], F[i], F[i + 1], dt, dx);
        if (opts_.manufactured) {
            CoeffMat sn(nn, 5);
            for (int n = 0; n < nn; ++n) {
                const double t = s.time + 0.5 * dt * (1.0 + ops_.node_tau[n]);
                const double x = mesh_.center(i) + 0.5 * dx * ops_.node_xi[n];
                sn.row(n) = ms_source(t, x, opts_.knudsen).transpose();
            }
            const CoeffMat add = 0.5 * dt * apply(ops_.src_proj, sn);
            Q[i] += add;
            src_mean[i] = add.row(0).transpose();
        }
    }

    if (lim.mean) {
        auto mean_at = [&](int i) -> Vec5 {
            if (i < 0) return s.mean(periodic ? N - 1 : 0);
            if (i >= N) return s.mean(periodic ? 0 : N - 1);
            return s.mean(i);
        };
        std::vector<Vec5> frus(N + 1), dF(N + 1), q_rus(N);
        for (int f = 0; f <= N; ++f) {
            const Vec5 ql = mean_at(f - 1), qr = mean_at(f);
            frus[f] = rusanov_flux(ql, qr, interface_wave_speed(ql, qr, WaveSpeedBound::ThreeStateMean));
            dF[f] = F[f] - frus[f];
        }
        for (int i = 0; i < N; ++i) q_rus[i] = s.mean(i) - dt / dx * (frus[i + 1] - frus[i]) + src_mean[i];
        const FluxBlend blend = limit_mean_fluxes(q_rus, dF, dt, dx, lim, periodic);
        const std::vector<Vec5> means = blended_means(q_rus, dF, blend, dt, dx);
        for (int i = 0; i < N; ++i) Q[i].row(0) = means[i].transpose();
        for (int f = 0; f <= N; ++f)
            if (blend.theta_face[f] < 1.0) {
                ++rep.activity.mean_faces;
                rep.activity.min_theta_mean = std::min(rep.activity.min_theta_mean, blend.theta_face[f]);
            }
    }

    auto run_limiter_three = [&]() {
        if (!lim.correction) return;
        for (int i = 0; i < N; ++i) {
            double th;
            try {
                th = limit_correction(ops_, Q[i], lim);
            } catch (const RealizabilityError& e) {
                throw RealizabilityError(e.functional(), e.value(),
                                         "element " + std::to_string(i) + " at t = " + std::to_string(s.time + dt));
            }
            if (th < 1.0) {
                ++rep.activity.correction;
                rep.activity.min_theta_correction = std::min(rep.activity.min_theta_correction, th);
            }
        }
    };
    run_limiter_three();

    if (opts_.knudsen > 0.0) {
        for (int i = 0; i < N; ++i) collision_update(ops_, Q[i], post_prediction_source(ops_, W[i]), dt, opts_.knudsen);
        run_limiter_three();
    }

    if (lim.oscillation)
        rep.activity.oscillation +=
            limit_oscillations(ops_, Q, dx, periodic, lim, &rep.activity.min_theta_oscillation);

    for (int i = 0; i < N; ++i) {
        const Vec5 m = Q[i].row(0).transpose();
        const double eps = lim.pos_floor;
        std::string bad;
        double val = 0.0;
        if (!m.allFinite()) {
            bad = "finite";
        } else if (!(m[0] > eps)) {
            bad = "rho", val = m[0];
        } else if (!(c_pressure(m) > eps)) {
            bad = "p", val = c_pressure(m);
        } else if (!(c_kurtosis(m) > eps)) {
            bad = "k", val = c_kurtosis(m);
        }
        if (!bad.empty())
            throw RealizabilityError(bad, val, "mean of element " + std::to_string(i) + " after step " +
                                                   std::to_string(rep.step) + " at t = " + std::to_string(s.time + dt));
    }

    s.coeffs = std::move(Q);
    s.time = final_step ? t_final : s.time + dt;
    ++steps_;
    rep.time = s.time;
    total_.merge(rep.activity);
    return rep;
}

ElementSolution LxwDgSolver::advance_to(ElementSolution s, double t_final, const Observer& observer) {
    long n = 0;
    while (s.time < t_final && n < opts_.max_steps) {
        const StepReport rep = step(s, t_final);
        if (observer) observer(s, rep);
        ++n;
        if (rep.dt <= 0.0) break;
    }
    return s;
}

ElementSolution advance_to(const ElementSolution& s, const Mesh& mesh, double t_final, const SolverOptions& options) {
    LxwDgSolver solver(mesh, options);
    return solver.advance_to(s, t_final);
}

}  // namespace hyqmom
