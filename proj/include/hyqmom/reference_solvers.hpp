#pragma once

#include <functional>
#include <vector>

#include "hyqmom/kinetic_state.hpp"
#include "hyqmom/mesh.hpp"

namespace hyqmom {

struct CellAverages {
    std::vector<Vec5> q;
    double x_low = -1.0, x_high = 1.0;
    BoundaryKind boundary = BoundaryKind::Extrapolation;
    double time = 0.0;

    int size() const { return static_cast<int>(q.size()); }
    double dx() const { return (x_high - x_low) / size(); }
};

enum class WaveSpeedBound {
    TwoState,        // max over left and right states
    ThreeStateMean,  // also the arithmetic-mean state (needed for the positivity guarantee)
};

double interface_wave_speed(const Vec5& ql, const Vec5& qr, WaveSpeedBound bound);

Vec5 rusanov_flux(const Vec5& ql, const Vec5& qr, double lambda);

// One forward Euler step. Throws StepRejectedError if (dt/dx) max lambda >= 1.
CellAverages rusanov_step(const CellAverages& cells, double dt, WaveSpeedBound bound = WaveSpeedBound::ThreeStateMean);

// Largest stable dt for a given CFL number (dt = cfl * dx / max interface lambda).
double rusanov_max_dt(const CellAverages& cells, double cfl, WaveSpeedBound bound = WaveSpeedBound::ThreeStateMean);

CellAverages rusanov_reference_run(const std::function<PrimitiveState(double)>& initial, double x_low, double x_high,
                                   BoundaryKind boundary, int n_cells, double t_final, double cfl = 0.9);

// Exact Riemann solution of the 1D Euler equations.
struct EulerState {
    double rho = 1.0, u = 0.0, p = 1.0;
};

struct EulerRiemannSolution {
    EulerState left, right;
    double gamma = 3.0;
    double p_star = 0.0, u_star = 0.0;
    double rho_star_left = 0.0, rho_star_right = 0.0;
    bool left_shock = false, right_shock = false;
    bool vacuum = false;  // data generates a vacuum between the rarefactions

    EulerState sample(double xi) const;  // xi = x/t
};

EulerRiemannSolution euler_exact_riemann(const EulerState& left, const EulerState& right, double gamma = 3.0);

}  // namespace hyqmom
