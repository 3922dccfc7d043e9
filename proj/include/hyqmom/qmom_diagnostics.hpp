#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hyqmom {

struct DiracQuadrature {
    int n = 0;
    std::vector<double> weights;
    std::vector<double> abscissas;

    double moment(int l) const;
};

struct ClosureCoefficients {
    std::vector<double> a;  // P(v) = sum_j a_j v^j, j = 0..2N-1

    double eval(double v) const;
    double eval_derivative(double v) const;
};

// Two-node QMOM from M0..M3.
DiracQuadrature qmom_invert_n2(double m0, double m1, double m2, double m3);

// Throws IllConditionedError when abscissas nearly coincide.
ClosureCoefficients hermite_closure_coeffs(const DiracQuadrature& qd);

Eigen::MatrixXd qmom_flux_jacobian(const DiracQuadrature& qd);

// ell is 1-based.
Eigen::VectorXd moment_gradient_abscissa(const DiracQuadrature& qd, int ell);

// Characteristic polynomial coefficients c_0..c_n (monic, c_n = 1) by Faddeev-LeVerrier.
std::vector<double> characteristic_polynomial(const Eigen::MatrixXd& A);

// Number of singular values of (A - lambda I) below rel_tol * ||A||.
int geometric_multiplicity(const Eigen::MatrixXd& A, double lambda, double rel_tol = 1e-8);

struct WeakHyperbolicityResult {
    int n = 0;
    double charpoly_error = 0.0;     // max coefficient deviation, relative
    bool multiplicity_one = true;    // every abscissa has geometric multiplicity 1
    double degeneracy = 0.0;         // max |b.R_l| / (|b||R_l|)
};

WeakHyperbolicityResult check_weak_hyperbolicity(const DiracQuadrature& qd);

// Random well-separated quadrature for diagnostics.
DiracQuadrature random_dirac_quadrature(int n, std::uint64_t seed);

// Plain-text table over `count` random quadratures per N in 1..4.
std::string qmom_report(int count, std::uint64_t seed);

}  // namespace hyqmom
