#include "hyqmom/reference_solvers.hpp"

#include <algorithm>
#include <cmath>

#include "hyqmom/errors.hpp"
#include "hyqmom/hyqmom_closure.hpp"

namespace hyqmom {

double interface_wave_speed(const Vec5& ql, const Vec5& qr, WaveSpeedBound bound) {
    double lam = std::max(max_wave_speed(conserved_to_primitive(ql)), max_wave_speed(conserved_to_primitive(qr)));
    if (bound == WaveSpeedBound::ThreeStateMean)
        lam = std::max(lam, max_wave_speed(conserved_to_primitive(0.5 * (ql + qr))));
    return lam;
}

Vec5 rusanov_flux(const Vec5& ql, const Vec5& qr, double lambda) {
    return 0.5 * (flux(ql) + flux(qr)) - 0.5 * lambda * (qr - ql);
}

namespace {

// Interface speeds and Rusanov fluxes, with per-cell flux and speed evaluated once.
struct FaceData {
    std::vector<double> lambda;
    std::vector<Vec5> flux;
};

FaceData face_data(const CellAverages& cells, WaveSpeedBound bound) {
    const int n = cells.size();
    std::vector<double> lam_cell(n);
    std::vector<Vec5> f_cell(n);
    for (int i = 0; i < n; ++i) {
        const PrimitiveState a = conserved_to_primitive(cells.q[i]);
        lam_cell[i] = max_wave_speed(a);
        f_cell[i] = flux_primitive(a);
    }
    auto idx = [&](int i) {
        if (i < 0) return cells.boundary == BoundaryKind::Periodic ? n - 1 : 0;
        if (i >= n) return cells.boundary == BoundaryKind::Periodic ? 0 : n - 1;
        return i;
    };
    FaceData d;
    d.lambda.resize(n + 1);
    d.flux.resize(n + 1);
    for (int f = 0; f <= n; ++f) {
        const int l = idx(f - 1), r = idx(f);
        const Vec5 &ql = cells.q[l], &qr = cells.q[r];
        double lam = std::max(lam_cell[l], lam_cell[r]);
        if (bound == WaveSpeedBound::ThreeStateMean)
            lam = std::max(lam, max_wave_speed(conserved_to_primitive(0.5 * (ql + qr))));
        d.lambda[f] = lam;
        d.flux[f] = 0.5 * (f_cell[l] + f_cell[r]) - 0.5 * lam * (qr - ql);
    }
    return d;
}

CellAverages apply_fluxes(const CellAverages& cells, const FaceData& d, double dt) {
    const double nu = dt / cells.dx();
    for (double lam : d.lambda)
        if (!(nu * lam < 1.0)) throw StepRejectedError("rusanov_step: CFL condition violated");
    CellAverages out = cells;
    for (int i = 0; i < cells.size(); ++i) out.q[i] = cells.q[i] - nu * (d.flux[i + 1] - d.flux[i]);
    out.time = cells.time + dt;
    return out;
}

}  // namespace

double rusanov_max_dt(const CellAverages& cells, double cfl, WaveSpeedBound bound) {
    const FaceData d = face_data(cells, bound);
    return cfl * cells.dx() / *std::max_element(d.lambda.begin(), d.lambda.end());
}

CellAverages rusanov_step(const CellAverages& cells, double dt, WaveSpeedBound bound) {
    return apply_fluxes(cells, face_data(cells, bound), dt);
}

CellAverages rusanov_reference_run(const std::function<PrimitiveState(double)>& initial, double x_low, double x_high,
                                   BoundaryKind boundary, int n_cells, double t_final, double cfl) {
    CellAverages c;
    c.x_low = x_low;
    c.x_high = x_high;
    c.boundary = boundary;
    c.q.resize(n_cells);
    const double dx = c.dx();
    for (int i = 0; i < n_cells; ++i) {
        // two-point Gauss average catches the jump location in the middle cell
        const double xc = x_low + (i + 0.5) * dx, s = dx / (2.0 * std::sqrt(3.0));
        c.q[i] = 0.5 * (primitive_to_conserved(initial(xc - s)) + primitive_to_conserved(initial(xc + s)));
    }
    while (c.time < t_final) {
        const FaceData d = face_data(c, WaveSpeedBound::ThreeStateMean);
        double dt = cfl * dx / *std::max_element(d.lambda.begin(), d.lambda.end());
        const bool last = c.time + dt >= t_final;
        if (last) dt = t_final - c.time;
        c = apply_fluxes(c, d, dt);
        if (last) c.time = t_final;
    }
    return c;
}

namespace {

struct PressureFn {
    double value, deriv;
};

PressureFn pressure_function(double p, const EulerState& s, double gamma) {
    const double c = std::sqrt(gamma * s.p / s.rho);
    if (p > s.p) {
        const double A = 2.0 / ((gamma + 1.0) * s.rho), B = (gamma - 1.0) / (gamma + 1.0) * s.p;
        const double q = std::sqrt(A / (p + B));
        return {(p - s.p) * q, q * (1.0 - 0.5 * (p - s.p) / (p + B))};
    }
    const double e = (gamma - 1.0) / (2.0 * gamma);
    return {2.0 * c / (gamma - 1.0) * (std::pow(p / s.p, e) - 1.0), std::pow(p / s.p, -(gamma + 1.0) / (2.0 * gamma)) / (s.rho * c)};
}

}  // namespace

EulerRiemannSolution euler_exact_riemann(const EulerState& L, const EulerState& R, double gamma) {
    if (!(L.rho > 0 && R.rho > 0 && L.p > 0 && R.p > 0)) throw RealizabilityError("rho/p", 0.0, "euler_exact_riemann");
    EulerRiemannSolution sol;
    sol.left = L;
    sol.right = R;
    sol.gamma = gamma;
    const double cl = std::sqrt(gamma * L.p / L.rho), cr = std::sqrt(gamma * R.p / R.rho);
    const double du = R.u - L.u;
    if (2.0 * (cl + cr) / (gamma - 1.0) <= du) {
        sol.vacuum = true;
        return sol;
    }
    auto g = [&](double p) {
        const PressureFn a = pressure_function(p, L, gamma), b = pressure_function(p, R, gamma);
        return PressureFn{a.value + b.value + du, a.deriv + b.deriv};
    };
    // bracket: g is increasing in p, g(0+) < 0 when no vacuum forms
    double lo = 0.0, hi = std::max(L.p, R.p);
    while (g(hi).value < 0.0) hi *= 2.0;
    double p = 0.5 * (lo + hi);
    for (int it = 0; it < 500; ++it) {
        const PressureFn v = g(p);
        if (v.value < 0.0) lo = p; else hi = p;
        double pn = p - v.value / v.deriv;
        if (!(pn > lo && pn < hi)) pn = 0.5 * (lo + hi);
        if (std::abs(pn - p) <= 1e-15 * std::max(1.0, p) || hi - lo < 1e-15 * std::max(1.0, p)) {
            p = pn;
            break;
        }
        p = pn;
    }
    sol.p_star = p;
    sol.u_star = 0.5 * (L.u + R.u) + 0.5 * (pressure_function(p, R, gamma).value - pressure_function(p, L, gamma).value);
    const double G = (gamma - 1.0) / (gamma + 1.0);
    sol.left_shock = p > L.p;
    sol.right_shock = p > R.p;
    sol.rho_star_left = sol.left_shock ? L.rho * (p / L.p + G) / (G * p / L.p + 1.0) : L.rho * std::pow(p / L.p, 1.0 / gamma);
    sol.rho_star_right = sol.right_shock ? R.rho * (p / R.p + G) / (G * p / R.p + 1.0) : R.rho * std::pow(p / R.p, 1.0 / gamma);
    return sol;
}

EulerState EulerRiemannSolution::sample(double xi) const {
    const double g = gamma;
    const EulerState& L = left;
    const EulerState& R = right;
    const double cl = std::sqrt(g * L.p / L.rho), cr = std::sqrt(g * R.p / R.rho);
    auto left_fan = [&](double x) {
        const double u = 2.0 / (g + 1.0) * (cl + (g - 1.0) / 2.0 * L.u + x);
        const double c = 2.0 / (g + 1.0) * (cl + (g - 1.0) / 2.0 * (L.u - x));
        const double rho = L.rho * std::pow(c / cl, 2.0 / (g - 1.0));
        return EulerState{rho, u, L.p * std::pow(c / cl, 2.0 * g / (g - 1.0))};
    };
    auto right_fan = [&](double x) {
        const double u = 2.0 / (g + 1.0) * (-cr + (g - 1.0) / 2.0 * R.u + x);
        const double c = 2.0 / (g + 1.0) * (cr - (g - 1.0) / 2.0 * (R.u - x));
        const double rho = R.rho * std::pow(c / cr, 2.0 / (g - 1.0));
        return EulerState{rho, u, R.p * std::pow(c / cr, 2.0 * g / (g - 1.0))};
    };
    if (vacuum) {
        const double sl = L.u + 2.0 * cl / (g - 1.0), sr = R.u - 2.0 * cr / (g - 1.0);
        if (xi <= L.u - cl) return L;
        if (xi < sl) return left_fan(xi);
        if (xi <= sr) return EulerState{0.0, 0.5 * (sl + sr), 0.0};
        if (xi < R.u + cr) return right_fan(xi);
        return R;
    }
    if (xi <= u_star) {
        if (left_shock) {
            const double s = L.u - cl * std::sqrt((g + 1.0) / (2.0 * g) * p_star / L.p + (g - 1.0) / (2.0 * g));
            return xi <= s ? L : EulerState{rho_star_left, u_star, p_star};
        }
        const double head = L.u - cl;
        const double tail = u_star - cl * std::pow(p_star / L.p, (g - 1.0) / (2.0 * g));
        if (xi <= head) return L;
        if (xi >= tail) return EulerState{rho_star_left, u_star, p_star};
        return left_fan(xi);
    }
    if (right_shock) {
        const double s = R.u + cr * std::sqrt((g + 1.0) / (2.0 * g) * p_star / R.p + (g - 1.0) / (2.0 * g));
        return xi >= s ? R : EulerState{rho_star_right, u_star, p_star};
    }
    const double head = R.u + cr;
    const double tail = u_star + cr * std::pow(p_star / R.p, (g - 1.0) / (2.0 * g));
    if (xi >= head) return R;
    if (xi <= tail) return EulerState{rho_star_right, u_star, p_star};
    return right_fan(xi);
}

}  // namespace hyqmom
