#pragma once

#include "hyqmom/lxw_dg_solver.hpp"

namespace hyqmom {

struct BgkSource {
    double s_cons_4 = 0.0;
    double s_cons_5 = 0.0;
    double s_prim_4 = 0.0;
    double s_prim_5 = 0.0;
};

BgkSource bgk_source(const PrimitiveState& alpha);

struct BgkSourceCoeffs {
    MatX delta_m;  // M_P x 2
    MatX s_hat;    // M_C x 2
};

// Collisional predictor: predict_element with the Knudsen number switched on.
CoeffMat predict_element_bgk(const DGOperators& ops, const CoeffMat& q, double dt, double dx, double eps,
                             const LimiterConfig* limiter = nullptr);

// Space-time coefficients of the conservative BGK source of components 4 and 5.
MatX post_prediction_source(const DGOperators& ops, const CoeffMat& w);

// Spatial coefficients of the Maxwellian values of M3 and M4 built from components 1-3 of q.
MatX maxwellian_moments(const DGOperators& ops, const CoeffMat& q);

// Implicit Radau collision step on components 4-5 of an already collisionless-updated element.
void collision_update(const DGOperators& ops, CoeffMat& q_tilde, const MatX& delta_m, double dt, double eps);

CoeffMat correct_element_bgk(const DGOperators& ops, const CoeffMat& q, const CoeffMat& w, const Vec5& f_left,
                             const Vec5& f_right, const MatX& delta_m, double dt, double dx, double eps);

PrimitiveState manufactured_solution(double t, double x, double eps);
Vec5 ms_source(double t, double x, double eps);

ElementSolution advance_to_bgk(const ElementSolution& s, const Mesh& mesh, double t_final, double eps,
                               const LimiterConfig& limiters, bool ms_on, int order);

}  // namespace hyqmom
