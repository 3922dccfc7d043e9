#include "hyqmom/dg_operators.hpp"

namespace hyqmom {

DGOperators::DGOperators(int o)
    : order(o), mc(o), mp(o * (o + 1) / 2), nq(o), npx(o + 2), gl(gauss_legendre(o)), st(o),
      pm(build_predictor_matrices(o)) {
    const int nn = nq * nq;
    phi_gl = MatX(nq, mc);
    phi_gl_proj = MatX(mc, nq);
    for (int a = 0; a < nq; ++a) {
        const BasisValues bv = legendre_eval(order, gl.nodes[a]);
        phi_gl.row(a) = bv.phi.transpose();
        phi_gl_proj.col(a) = 0.5 * gl.weights[a] * bv.phi;
    }

    psi_nodes = MatX(nn, mp);
    psi_xi_nodes = MatX(nn, mp);
    st_proj = MatX(mp, nn);
    vol = MatX(mc, nn);
    src_proj = MatX(mc, nn);
    for (int b = 0; b < nq; ++b)
        for (int a = 0; a < nq; ++a) {
            const int n = b * nq + a;
            const double tau = gl.nodes[b], xi = gl.nodes[a];
            const double w = gl.weights[a] * gl.weights[b];
            node_tau.push_back(tau);
            node_xi.push_back(xi);
            const VecX psi = st.eval(tau, xi);
            psi_nodes.row(n) = psi.transpose();
            psi_xi_nodes.row(n) = st.eval_dxi(tau, xi).transpose();
            st_proj.col(n) = 0.25 * w * psi;
            const BasisValues bv = legendre_eval(order, xi);
            vol.col(n) = w * bv.dphi;
            src_proj.col(n) = 0.5 * w * bv.phi;
        }
    picard_proj = pm.Linv * st_proj;

    G = MatX::Zero(mp, mc);
    for (int a = 0; a < nq; ++a)
        G += 0.25 * gl.weights[a] * st.eval(-1.0, gl.nodes[a]) * legendre_eval(order, gl.nodes[a]).phi.transpose();
    LinvG = pm.Linv * G;

    trace_plus = MatX(nq, mp);
    trace_minus = MatX(nq, mp);
    for (int a = 0; a < nq; ++a) {
        trace_plus.row(a) = st.eval(gl.nodes[a], 1.0).transpose();
        trace_minus.row(a) = st.eval(gl.nodes[a], -1.0).transpose();
    }
    phi_plus = legendre_eval(order, 1.0).phi;
    phi_minus = legendre_eval(order, -1.0).phi;

    px.push_back(-1.0);
    for (double x : gl.nodes) px.push_back(x);
    px.push_back(1.0);
    phi_px = MatX(npx, mc);
    psi_px2 = MatX(npx * npx, mp);
    for (int a = 0; a < npx; ++a) phi_px.row(a) = legendre_eval(order, px[a]).phi.transpose();
    for (int b = 0; b < npx; ++b)
        for (int a = 0; a < npx; ++a) psi_px2.row(b * npx + a) = st.eval(px[b], px[a]).transpose();
}

}  // namespace hyqmom
