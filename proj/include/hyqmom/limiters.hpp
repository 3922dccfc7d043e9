#pragma once

#include <vector>

#include "hyqmom/dg_operators.hpp"
#include "hyqmom/kinetic_state.hpp"

namespace hyqmom {


struct LimiterConfig {
    bool prediction = true;   // I
    bool mean = true;         // II
    bool correction = true;   // III
    bool oscillation = true;  // IV
    double pos_floor = 1e-14;
    double a0 = 5.0;
    double mu_aggr = 10.0 / 11.0;

    static LimiterConfig all_off() { return {false, false, false, false}; }
    void validate() const;
};

struct PositivityPoints {
    explicit PositivityPoints(int order);
    std::vector<double> space;                            // M_O + 2 points
    std::vector<std::pair<double, double>> spacetime;     // (tau, xi)
};

struct FluxBlend {
    std::vector<double> theta_face;
};

// Per-step activity counters (number of elements/faces touched).
struct LimiterActivity {
    long prediction = 0;
    long mean_faces = 0;
    long mean_fallback = 0;
    long correction = 0;
    long oscillation = 0;
    double min_theta_prediction = 1.0;
    double min_theta_mean = 1.0;
    double min_theta_correction = 1.0;
    double min_theta_oscillation = 1.0;

    void merge(const LimiterActivity& o);
};

// Limiter I. Damps space-time modes toward the space-time average; returns theta.
double limit_prediction(const DGOperators& ops, CoeffMat& w, const LimiterConfig& cfg);

// Limiter II core. q_rus[i] is the first-order update of element i, dF[f] = high - Rusanov flux
// at face f (face i is the left face of element i, N+1 faces). When `periodic`, faces 0 and N coincide.
FluxBlend limit_mean_fluxes(const std::vector<Vec5>& q_rus, const std::vector<Vec5>& dF, double dt, double dx,
                            const LimiterConfig& cfg, bool periodic);

// Convenience form: builds Q^Rus from element means and face fluxes.
FluxBlend limit_mean_fluxes(const std::vector<Vec5>& averages, const std::vector<Vec5>& high_fluxes,
                            const std::vector<Vec5>& rusanov_fluxes, double dt, double dx, const LimiterConfig& cfg,
                            bool periodic);

// Means after blending: q_rus[i] - dt/dx (theta_{i+1} dF_{i+1} - theta_i dF_i).
std::vector<Vec5> blended_means(const std::vector<Vec5>& q_rus, const std::vector<Vec5>& dF, const FluxBlend& blend,
                                double dt, double dx);

// Limiter III. Returns the product of the three damping factors.
double limit_correction(const DGOperators& ops, CoeffMat& q, const LimiterConfig& cfg);

// Limiter IV over all elements. `periodic` selects the neighbour of the end elements.
// Returns the number of elements damped.
int limit_oscillations(const DGOperators& ops, std::vector<CoeffMat>& q, double dx, bool periodic,
                       const LimiterConfig& cfg, double* min_theta = nullptr);

}  // namespace hyqmom
