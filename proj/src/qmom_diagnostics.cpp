#include "hyqmom/qmom_diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "hyqmom/errors.hpp"

namespace hyqmom {

namespace {

void check_spread(const std::vector<double>& mu) {
    double scale = 1.0;
    for (double m : mu) scale = std::max(scale, std::abs(m));
    for (size_t i = 0; i < mu.size(); ++i)
        for (size_t j = i + 1; j < mu.size(); ++j)
            if (std::abs(mu[i] - mu[j]) < 1e-6 * scale)
                throw IllConditionedError("abscissas closer than 1e-6 relative");
}

Eigen::VectorXd solve_checked(const Eigen::MatrixXd& A, const Eigen::VectorXd& rhs) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    Eigen::VectorXd x = lu.solve(rhs);
    if (!x.allFinite()) throw IllConditionedError("singular confluent Vandermonde system");
    return x;
}

}  // namespace

double DiracQuadrature::moment(int l) const {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += weights[j] * std::pow(abscissas[j], l);
    return s;
}

double ClosureCoefficients::eval(double v) const {
    double s = 0.0;
    for (size_t j = a.size(); j-- > 0;) s = s * v + a[j];
    return s;
}

double ClosureCoefficients::eval_derivative(double v) const {
    double s = 0.0;
    for (size_t j = a.size(); j-- > 1;) s = s * v + j * a[j];
    return s;
}

DiracQuadrature qmom_invert_n2(double m0, double m1, double m2, double m3) {
    if (!(m0 > 0.0)) throw RealizabilityError("rho", m0);
    const double u = m1 / m0;
    const double p = m2 - m1 * m1 / m0;
    if (!(p > 0.0)) throw RealizabilityError("p", p);
    const double h = m3 - 3.0 * m1 * m2 / m0 + 2.0 * m1 * m1 * m1 / (m0 * m0);
    const double s = h / (2.0 * p);
    const double root = std::sqrt(p / m0 + s * s);
    DiracQuadrature qd;
    qd.n = 2;
    qd.abscissas = {u + s - root, u + s + root};
    qd.weights = {0.5 * m0 * (1.0 + s / root), 0.5 * m0 * (1.0 - s / root)};
    return qd;
}

ClosureCoefficients hermite_closure_coeffs(const DiracQuadrature& qd) {
    const int n = qd.n, m = 2 * n;
    check_spread(qd.abscissas);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd rhs(m);
    for (int l = 0; l < n; ++l) {
        const double mu = qd.abscissas[l];
        for (int j = 0; j < m; ++j) {
            A(l, j) = std::pow(mu, j);
            A(n + l, j) = j == 0 ? 0.0 : j * std::pow(mu, j - 1);
        }
        rhs[l] = std::pow(mu, m);
        rhs[n + l] = m * std::pow(mu, m - 1);
    }
    const Eigen::VectorXd x = solve_checked(A, rhs);
    return {std::vector<double>(x.data(), x.data() + m)};
}

Eigen::MatrixXd qmom_flux_jacobian(const DiracQuadrature& qd) {
    const ClosureCoefficients cc = hermite_closure_coeffs(qd);
    const int m = 2 * qd.n;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i + 1 < m; ++i) A(i, i + 1) = 1.0;
    for (int j = 0; j < m; ++j) A(m - 1, j) = cc.a[j];
    return A;
}

Eigen::VectorXd moment_gradient_abscissa(const DiracQuadrature& qd, int ell) {
    const int n = qd.n, m = 2 * n;
    if (ell < 1 || ell > n) throw std::out_of_range("moment_gradient_abscissa: ell out of range");
    check_spread(qd.abscissas);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, m);
    for (int l = 0; l < n; ++l) {
        const double mu = qd.abscissas[l], w = qd.weights[l];
        for (int j = 0; j < m; ++j) {
            B(l, j) = std::pow(mu, j);
            B(n + l, j) = j == 0 ? 0.0 : j * w * std::pow(mu, j - 1);
        }
    }
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
    e[n + ell - 1] = 1.0;
    return solve_checked(B, e);
}

std::vector<double> characteristic_polynomial(const Eigen::MatrixXd& A) {
    const int n = static_cast<int>(A.rows());
    std::vector<double> c(n + 1, 0.0);
    c[n] = 1.0;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    for (int k = 1; k <= n; ++k) {
        M = A * M + c[n - k + 1] * I;
        c[n - k] = -(A * M).trace() / k;
    }
    return c;
}

int geometric_multiplicity(const Eigen::MatrixXd& A, double lambda, double rel_tol) {
    const int n = static_cast<int>(A.rows());
    const Eigen::MatrixXd S = A - lambda * Eigen::MatrixXd::Identity(n, n);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(S);
    const double thresh = rel_tol * std::max(1.0, A.norm());
    int count = 0;
    for (int i = 0; i < n; ++i)
        if (svd.singularValues()[i] < thresh) ++count;
    return count;
}

WeakHyperbolicityResult check_weak_hyperbolicity(const DiracQuadrature& qd) {
    WeakHyperbolicityResult res;
    res.n = qd.n;
    const Eigen::MatrixXd A = qmom_flux_jacobian(qd);
    const int m = 2 * qd.n;
    // expected: prod (v - mu_l)^2
    std::vector<double> expected(1, 1.0);
    for (double mu : qd.abscissas)
        for (int rep = 0; rep < 2; ++rep) {
            std::vector<double> next(expected.size() + 1, 0.0);
            for (size_t j = 0; j < expected.size(); ++j) {
                next[j + 1] += expected[j];
                next[j] -= mu * expected[j];
            }
            expected = next;
        }
    const std::vector<double> got = characteristic_polynomial(A);
    double scale = 1.0;
    for (double e : expected) scale = std::max(scale, std::abs(e));
    for (int j = 0; j <= m; ++j) res.charpoly_error = std::max(res.charpoly_error, std::abs(got[j] - expected[j]) / scale);
    for (int l = 0; l < qd.n; ++l) {
        const double mu = qd.abscissas[l];
        if (geometric_multiplicity(A, mu) != 1) res.multiplicity_one = false;
        const Eigen::VectorXd b = moment_gradient_abscissa(qd, l + 1);
        Eigen::VectorXd R(m);
        for (int j = 0; j < m; ++j) R[j] = std::pow(mu, j);
        res.degeneracy = std::max(res.degeneracy, std::abs(b.dot(R)) / (b.norm() * R.norm()));
    }
    return res;
}

DiracQuadrature random_dirac_quadrature(int n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> w(0.1, 1.0), gap(0.3, 1.0), start(-1.5, 0.0);
    DiracQuadrature qd;
    qd.n = n;
    double x = start(gen);
    for (int j = 0; j < n; ++j) {
        qd.abscissas.push_back(x);
        qd.weights.push_back(w(gen));
        x += gap(gen);
    }
    return qd;
}

std::string qmom_report(int count, std::uint64_t seed) {
    std::ostringstream os;
    os << fmt::format("{:>3} {:>7} {:>14} {:>12} {:>14}\n", "N", "samples", "charpoly_err", "geo_mult_1", "degeneracy");
    for (int n = 1; n <= 4; ++n) {
        double cp = 0.0, dg = 0.0;
        bool mult = true;
        for (int s = 0; s < count; ++s) {
            const auto r = check_weak_hyperbolicity(random_dirac_quadrature(n, seed + 1000 * n + s));
            cp = std::max(cp, r.charpoly_error);
            dg = std::max(dg, r.degeneracy);
            mult = mult && r.multiplicity_one;
        }
        os << fmt::format("{:>3} {:>7} {:>14.3e} {:>12} {:>14.3e}\n", n, count, cp, mult ? "yes" : "no", dg);
    }
    return os.str();
}

}  // namespace hyqmom
