#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hyqmom/dg_operators.hpp"
#include "hyqmom/kinetic_state.hpp"
#include "hyqmom/limiters.hpp"
#include "hyqmom/mesh.hpp"

namespace hyqmom {

struct ElementSolution {
    std::vector<CoeffMat> coeffs;  // M_C x 5 per element, conserved variables
    double time = 0.0;

    int size() const { return static_cast<int>(coeffs.size()); }
    Vec5 mean(int i) const { return coeffs[i].row(0).transpose(); }
};

struct SpaceTimePrediction {
    std::vector<CoeffMat> coeffs;  // M_P x 5 per element, primitive variables
};

double default_cfl(int order);

struct TimeStepController {
    double cfl = 0.3;
    double t_final = 1.0;

    // dt = cfl dx / lambda, clipped so the last step lands on t_final
    double next_dt(double lambda_global, double dx, double t) const;
};

using ConservedField = std::function<ConservedMoments(double x)>;

// L2 projection with the (M_O+2)-point GL rule. If `jump` lies strictly inside an element the
// two sides are integrated separately so step data is averaged exactly.
ElementSolution project_initial_condition(const ConservedField& q0, const Mesh& mesh, int order,
                                          std::optional<double> jump = std::nullopt);

// Options for the element predictor; knudsen == 0 means collisionless.
struct PredictContext {
    double dt = 0.0;
    double dx = 1.0;
    double t_n = 0.0;
    double x_center = 0.0;
    double knudsen = 0.0;
    bool manufactured = false;
    const LimiterConfig* limiter = nullptr;
    LimiterActivity* activity = nullptr;
};

// A_i^n: spatial coefficients of the primitive variables, M_C x 5.
CoeffMat primitive_coefficients(const DGOperators& ops, const CoeffMat& q);

CoeffMat predict_element(const DGOperators& ops, const CoeffMat& q, const PredictContext& ctx);

// Time-averaged Rusanov flux between the +1 trace of w_left and the -1 trace of w_right.
Vec5 interface_flux_time_avg(const DGOperators& ops, const CoeffMat& w_left, const CoeffMat& w_right);

CoeffMat correct_element(const DGOperators& ops, const CoeffMat& q, const CoeffMat& w, const Vec5& f_left,
                         const Vec5& f_right, double dt, double dx);

struct SolverOptions {
    int order = 2;
    double cfl = 0.0;  // 0 selects the default for the order
    LimiterConfig limiters;
    double knudsen = 0.0;
    bool manufactured = false;
    long max_steps = 100000000;
};

struct StepReport {
    long step = 0;
    double time = 0.0;
    double dt = 0.0;
    LimiterActivity activity;
};

class LxwDgSolver {
public:
    LxwDgSolver(const Mesh& mesh, const SolverOptions& options);

    const DGOperators& ops() const { return ops_; }
    const Mesh& mesh() const { return mesh_; }
    const SolverOptions& options() const { return opts_; }

    double max_wave_speed_global(const ElementSolution& s) const;

    // One step, never past t_final. Returns the report for the step.
    StepReport step(ElementSolution& s, double t_final);

    using Observer = std::function<void(const ElementSolution&, const StepReport&)>;
    ElementSolution advance_to(ElementSolution s, double t_final, const Observer& observer = {});

    long steps_taken() const { return steps_; }
    const LimiterActivity& total_activity() const { return total_; }

private:
    Mesh mesh_;
    SolverOptions opts_;
    DGOperators ops_;
    long steps_ = 0;
    LimiterActivity total_;
};

ElementSolution advance_to(const ElementSolution& s, const Mesh& mesh, double t_final, const SolverOptions& options);

}  // namespace hyqmom
