#include "hyqmom/basis_quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hyqmom/errors.hpp"

namespace hyqmom {

namespace {

// Legendre P_n and P_n' by the three-term recurrence.
void legendre_pair(int n, double x, double& p, double& dp) {
    double p0 = 1.0, p1 = x;
    double d0 = 0.0, d1 = 1.0;
    if (n == 0) {
        p = 1.0;
        dp = 0.0;
        return;
    }
    for (int m = 2; m <= n; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        const double d2 = d0 + (2.0 * m - 1.0) * p1;
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
    }
    p = p1;
    dp = d1;
}

double legendre_p(int n, double x) {
    double p, dp;
    legendre_pair(n, x, p, dp);
    return p;
}

}  // namespace

double legendre_orthonormal(int index, double xi) {
    return std::sqrt(2.0 * index + 1.0) * legendre_p(index, xi);
}

double legendre_orthonormal_derivative(int index, double xi) {
    double p, dp;
    legendre_pair(index, xi, p, dp);
    return std::sqrt(2.0 * index + 1.0) * dp;
}

BasisValues legendre_eval(int order, double xi) {
    if (order < 1 || order > kMaxOrder)
        throw CapabilityError("legendre_eval: unsupported order " + std::to_string(order));
    BasisValues bv{VecX(order), VecX(order)};
    for (int i = 0; i < order; ++i) {
        double p, dp;
        legendre_pair(i, xi, p, dp);
        const double s = std::sqrt(2.0 * i + 1.0);
        bv.phi[i] = s * p;
        bv.dphi[i] = s * dp;
    }
    return bv;
}

QuadratureRule gauss_legendre(int n) {
    if (n < 1 || n > 64) throw CapabilityError("gauss_legendre: n out of range");
    QuadratureRule rule;
    rule.kind = QuadratureRule::Kind::GaussLegendre;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // ascending order: start from the negative Chebyshev-like guess
        double x = -std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double p = 0.0, dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            legendre_pair(n, x, p, dp);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        legendre_pair(n, x, p, dp);
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

QuadratureRule gauss_radau_right(int n) {
    if (n < 1 || n > 64) throw CapabilityError("gauss_radau_right: n out of range");
    QuadratureRule rule;
    rule.kind = QuadratureRule::Kind::GaussRadauRight;
    // interior nodes are the roots of P_n - P_{n-1} other than +1
    auto g = [n](double x, double& val, double& der) {
        double pn, dpn, pm, dpm;
        legendre_pair(n, x, pn, dpn);
        legendre_pair(n - 1, x, pm, dpm);
        val = pn - pm;
        der = dpn - dpm;
    };
    const int samples = 4000;
    double xa = -1.0, ga, dga;
    g(xa, ga, dga);
    for (int s = 1; s <= samples && static_cast<int>(rule.nodes.size()) < n - 1; ++s) {
        const double xb = -1.0 + 2.0 * s / samples;
        double gb, dgb;
        g(xb, gb, dgb);
        if (ga == 0.0) {
            rule.nodes.push_back(xa);
        } else if (ga * gb < 0.0) {
            // safeguarded Newton inside the bracket
            double lo = xa, hi = xb, glo = ga, x = 0.5 * (xa + xb);
            for (int it = 0; it < 200; ++it) {
                double v, d;
                g(x, v, d);
                if (v == 0.0) break;
                if (glo * v < 0.0) {
                    hi = x;
                } else {
                    lo = x;
                    glo = v;
                }
                double xn = x - v / d;
                if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
                if (std::abs(xn - x) < 1e-16) {
                    x = xn;
                    break;
                }
                x = xn;
            }
            rule.nodes.push_back(x);
        }
        xa = xb;
        ga = gb;
    }
    if (static_cast<int>(rule.nodes.size()) != n - 1)
        throw IllConditionedError("gauss_radau_right: root search failed");
    rule.nodes.push_back(1.0);
    for (int i = 0; i < n - 1; ++i) {
        const double x = rule.nodes[i];
        const double pm = legendre_p(n - 1, x);
        rule.weights.push_back((1.0 + x) / (double(n) * n * pm * pm));
    }
    rule.weights.push_back(2.0 / (double(n) * n));
    return rule;
}

SpaceBasis::SpaceBasis(int o) : order(o), n_coeff(o) {
    if (o < 1 || o > kMaxOrder) throw CapabilityError("SpaceBasis: unsupported order " + std::to_string(o));
}

int SpaceTimeBasis::index(int mo, int a, int b) { return mo * (a - 1) - (a - 1) * (a - 2) / 2 + b; }

SpaceTimeBasis::SpaceTimeBasis(int o) : order(o), n_coeff(o * (o + 1) / 2) {
    if (o < 1 || o > kMaxOrder) throw CapabilityError("SpaceTimeBasis: unsupported order " + std::to_string(o));
    l1.assign(n_coeff, 0);
    l2.assign(n_coeff, 0);
    for (int a = 1; a <= o; ++a)
        for (int b = 1; b <= o + 1 - a; ++b) {
            const int l = index(o, a, b) - 1;
            l1[l] = a - 1;
            l2[l] = b - 1;
        }
}

VecX SpaceTimeBasis::eval(double tau, double xi) const {
    const BasisValues t = legendre_eval(order, tau), x = legendre_eval(order, xi);
    VecX v(n_coeff);
    for (int l = 0; l < n_coeff; ++l) v[l] = t.phi[l1[l]] * x.phi[l2[l]];
    return v;
}

VecX SpaceTimeBasis::eval_dxi(double tau, double xi) const {
    const BasisValues t = legendre_eval(order, tau), x = legendre_eval(order, xi);
    VecX v(n_coeff);
    for (int l = 0; l < n_coeff; ++l) v[l] = t.phi[l1[l]] * x.dphi[l2[l]];
    return v;
}

VecX SpaceTimeBasis::eval_dtau(double tau, double xi) const {
    const BasisValues t = legendre_eval(order, tau), x = legendre_eval(order, xi);
    VecX v(n_coeff);
    for (int l = 0; l < n_coeff; ++l) v[l] = t.dphi[l1[l]] * x.phi[l2[l]];
    return v;
}

PredictorMatrices build_predictor_matrices(int order) {
    const SpaceTimeBasis st(order);
    const int mp = st.n_coeff, mc = order;
    PredictorMatrices pm;
    pm.order = order;

    // L by a rule exact for the degree-(2 order - 1) integrands
    const QuadratureRule exact = gauss_legendre(order + 1);
    pm.L = MatX::Zero(mp, mp);
    for (int a = 0; a < exact.size(); ++a)
        for (int b = 0; b < exact.size(); ++b) {
            const double w = exact.weights[a] * exact.weights[b];
            const VecX psi = st.eval(exact.nodes[b], exact.nodes[a]);
            const VecX psit = st.eval_dtau(exact.nodes[b], exact.nodes[a]);
            pm.L += 0.25 * w * psi * psit.transpose();
        }
    for (int a = 0; a < exact.size(); ++a) {
        const VecX psi = st.eval(-1.0, exact.nodes[a]);
        pm.L += 0.25 * exact.weights[a] * psi * psi.transpose();
    }
    pm.Linv = pm.L.inverse();

    const QuadratureRule gl = gauss_legendre(order);
    const int nn = order * order;
    pm.C1 = MatX::Zero(nn, mp);
    pm.C2 = MatX::Zero(mp, nn);
    for (int b = 0; b < order; ++b)
        for (int c = 0; c < order; ++c) {
            const int a = b * order + c;
            pm.st_tau.push_back(gl.nodes[b]);
            pm.st_xi.push_back(gl.nodes[c]);
            pm.st_w.push_back(gl.weights[b] * gl.weights[c]);
            const VecX psi = st.eval(gl.nodes[b], gl.nodes[c]);
            pm.C1.row(a) = psi.transpose();
            pm.C2.col(a) = 0.25 * pm.st_w.back() * psi;
        }

    pm.C3 = MatX::Zero(order, mc);
    pm.C4 = MatX::Zero(mc, order);
    for (int a = 0; a < order; ++a) {
        const VecX phi = legendre_eval(order, gl.nodes[a]).phi;
        pm.C3.row(a) = phi.transpose();
        pm.C4.col(a) = 0.5 * gl.weights[a] * phi;
    }

    const QuadratureRule radau = gauss_radau_right(order);
    pm.r_weight = 1.0 / radau.weights.back();
    pm.R = MatX::Zero(mc, mp);
    for (int k = 0; k < order; ++k) {
        const VecX phi = legendre_eval(order, gl.nodes[k]).phi;
        for (int l = 0; l + 1 < order; ++l) {
            const VecX psi = st.eval(radau.nodes[l], gl.nodes[k]);
            pm.R += 0.5 * gl.weights[k] * radau.weights[l] * phi * psi.transpose();
        }
    }
    return pm;
}

}  // namespace hyqmom
