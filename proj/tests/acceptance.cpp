// Acceptance driver: one PASS/FAIL line per criterion, exit code = number of failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "hyqmom/basis_quadrature.hpp"
#include "hyqmom/bgk_extension.hpp"
#include "hyqmom/cli_harness.hpp"
#include "hyqmom/errors.hpp"
#include "hyqmom/hyqmom_closure.hpp"
#include "hyqmom/qmom_diagnostics.hpp"
#include "test_util.hpp"

using namespace hyqmom;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    if (!ok) ++failures;
    fmt::print("[{}] criterion {}: {}\n", ok ? "PASS" : "FAIL", id, detail);
    std::fflush(stdout);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const std::vector<int> kN = {10, 20, 40, 80, 160, 320};

// Tabulated errors, rows N = 10..320.
const std::map<int, std::vector<double>> kTable2 = {
    {2, {1.143e-01, 2.005e-02, 3.759e-03, 8.802e-04, 2.192e-04, 5.485e-05}},
    {3, {1.171e-02, 2.260e-03, 4.032e-04, 6.077e-05, 8.127e-06, 1.040e-06}},
    {4, {4.924e-03, 4.617e-04, 5.337e-06, 1.962e-07, 1.203e-08, 7.500e-10}},
};

// Limiters on: only these cells differ from the limiter-free table.
const std::map<std::pair<int, int>, double> kTable3Changed = {
    {{2, 10}, 3.154e-01}, {{2, 20}, 4.887e-02}, {{3, 10}, 5.360e-02}};

struct Table4Column {
    double eps;
    std::vector<double> err;
    std::vector<double> ratio;  // N = 20..320
};

const std::vector<Table4Column> kTable4 = {
    {1e4, {1.181e-03, 5.809e-05, 3.541e-06, 2.212e-07, 1.376e-08, 8.592e-10}, {4.346, 4.036, 4.001, 4.007, 4.001}},
    {1e2, {1.193e-03, 5.897e-05, 3.515e-06, 2.622e-07, 1.622e-08, 9.983e-10}, {4.339, 4.068, 3.745, 4.015, 4.022}},
    {1e0, {1.426e-03, 6.321e-05, 3.655e-06, 2.601e-07, 1.529e-08, 8.986e-10}, {4.496, 4.112, 3.813, 4.088, 4.089}},
    {1e-2, {1.327e-03, 6.608e-05, 4.040e-06, 2.537e-07, 1.572e-08, 9.929e-10}, {4.328, 4.032, 3.993, 4.012, 3.985}},
    {1e-4, {1.644e-03, 6.826e-05, 4.222e-06, 2.575e-07, 1.622e-08, 1.006e-09}, {4.590, 4.015, 4.035, 3.989, 4.011}},
    {1e-6, {1.660e-03, 6.861e-05, 4.148e-06, 2.557e-07, 1.601e-08, 1.008e-09}, {4.597, 4.048, 4.020, 3.998, 3.989}},
};

// Frozen from the first full run (M_O = 4, N = 200, t = 0.28, default A0).
const double kSodL1Eps1e2 = 4.049e-02;
const double kSodL1Eps1e4 = 5.658e-03;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

LimiterConfig limiters_for(const std::string& problem, double eps = 0.0) {
    LimiterConfig c;
    c.a0 = default_a0(problem, eps);
    return c;
}

// Minimum of rho, p, k over the positivity check points of every element.
double min_check_point_value(const DGOperators& ops, const ElementSolution& s) {
    double lo = 1e300;
    for (const CoeffMat& e : s.coeffs) {
        const CoeffMat v = apply(ops.phi_px, e);
        for (int a = 0; a < v.rows(); ++a) {
            const Vec5 q = v.row(a).transpose();
            lo = std::min({lo, q[0], c_pressure(q), c_kurtosis(q)});
        }
    }
    return lo;
}

struct RiemannRun {
    bool completed = false;
    bool positive_every_step = true;
    double min_value = 1e300;
    double l1 = 0.0;
    long steps = 0;
};

RiemannRun run_riemann(const ProblemSpec& p, int order, int n, const CellAverages& ref) {
    RiemannRun out;
    const Mesh mesh = problem_mesh(p, n);
    SolverOptions opt;
    opt.order = order;
    opt.limiters = limiters_for(p.id);
    LxwDgSolver solver(mesh, opt);
    try {
        const ElementSolution s =
            solver.advance_to(initial_solution(p, mesh, order), p.t_final, [&](const ElementSolution& cur, const StepReport&) {
                const double m = min_check_point_value(solver.ops(), cur);
                out.min_value = std::min(out.min_value, m);
                if (!(m > 0.0)) out.positive_every_step = false;
            });
        out.completed = s.time == p.t_final;
        out.l1 = l1_density_distance(s, mesh, ref);
    } catch (const std::runtime_error& e) {
        fmt::print("    {} N={} failed: {}\n", p.id, n, e.what());
    }
    out.steps = solver.steps_taken();
    return out;
}

CellAverages fine_reference(const ProblemSpec& p) {
    return rusanov_reference_run(p.initial, p.x_low, p.x_high, p.boundary, 20000, p.t_final);
}

std::vector<double> errors_of(const std::vector<ConvergenceRow>& rows) {
    std::vector<double> e;
    for (const auto& r : rows) e.push_back(r.error);
    return e;
}

// 1. Smooth convergence with limiters off.
std::map<int, std::vector<double>> criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    const ProblemSpec p = make_problem("smooth");
    std::map<int, std::vector<double>> got;
    bool ok = true;
    double worst = 0.0;
    std::string ratios;
    for (int order = 2; order <= 4; ++order) {
        const auto rows = convergence_study(p, order, kN, LimiterConfig::all_off());
        got[order] = errors_of(rows);
        for (size_t j = 0; j < kN.size(); ++j) worst = std::max(worst, rel(rows[j].error, kTable2.at(order)[j]));
        const double r = *rows.back().ratio;
        ratios += fmt::format(" M_O={}:{:.3f}", order, r);
        if (std::abs(r - order) > 0.15) ok = false;
    }
    ok = ok && worst <= 0.05;
    report(1, ok,
           fmt::format("smooth limiters off, worst relative deviation {:.2e} (<= 5%), finest ratios{} ({:.0f} s)", worst,
                       ratios, seconds_since(t0)));
    return got;
}

// 2. Limiters on change only the under-resolved cells.
void criterion2(const std::map<int, std::vector<double>>& off) {
    const auto t0 = std::chrono::steady_clock::now();
    const ProblemSpec p = make_problem("smooth");
    bool ok = true;
    double worst_changed = 0.0, worst_same = 0.0;
    for (int order = 2; order <= 4; ++order) {
        const auto rows = convergence_study(p, order, kN, limiters_for("smooth"));
        for (size_t j = 0; j < kN.size(); ++j) {
            const auto it = kTable3Changed.find({order, kN[j]});
            if (it != kTable3Changed.end()) {
                const double d = rel(rows[j].error, it->second);
                worst_changed = std::max(worst_changed, d);
                if (d > 0.05) ok = false;
            } else {
                // equal at the tabulated precision (4 significant digits) and within 5% of the table
                const double d = rel(rows[j].error, off.at(order)[j]);
                worst_same = std::max(worst_same, d);
                if (d > 5e-4 || rel(rows[j].error, kTable2.at(order)[j]) > 0.05) ok = false;
            }
        }
    }
    report(2, ok,
           fmt::format("limiters on: changed cells within {:.2e} of the table (<= 5%), other cells equal to the "
                       "limiter-free run within {:.1e} (< 5e-4) ({:.0f} s)",
                       worst_changed, worst_same, seconds_since(t0)));
}

// 3. Rusanov positivity fuzz and negative control.
void criterion3() {
    const FuzzResult ok = positivity_fuzz(1000000, 0.99, 2024);
    const FuzzResult bad = positivity_fuzz(100000, 2.0, 2024);
    report(3, ok.violations == 0 && ok.rejected == 0 && bad.violations > 0,
           fmt::format("CFL 0.99: {} violations in {} trials; CFL 2: {} violations in {} trials", ok.violations, ok.trials,
                       bad.violations, bad.trials));
}

// 4. Vacuum robustness and convergence toward the fine reference.
void criterion4() {
    const auto t0 = std::chrono::steady_clock::now();
    const ProblemSpec p = make_problem("vacuum");
    const CellAverages ref = fine_reference(p);
    bool ok = true;
    double prev = 1e300;
    std::string detail;
    for (int n : {200, 400, 800, 1600}) {
        const RiemannRun r = run_riemann(p, 4, n, ref);
        ok = ok && r.completed && r.positive_every_step && r.l1 < prev;
        detail += fmt::format(" N={}:L1={:.3e},min={:.1e}", n, r.l1, r.min_value);
        prev = r.l1;
    }
    report(4, ok, fmt::format("vacuum M_O=4 positive at all check points every step, L1 decreasing;{} ({:.0f} s)", detail,
                              seconds_since(t0)));
}

// 5. Shock tubes complete and converge toward the fine reference.
void criterion5() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (const std::string id : {"shock1", "shock2"}) {
        const ProblemSpec p = make_problem(id);
        const CellAverages ref = fine_reference(p);
        const RiemannRun a = run_riemann(p, 4, 200, ref);
        const RiemannRun b = run_riemann(p, 4, 400, ref);
        ok = ok && a.completed && b.completed && a.positive_every_step && b.positive_every_step && b.l1 < a.l1;
        detail += fmt::format(" {}: L1 {:.3e} -> {:.3e}", id, a.l1, b.l1);
    }
    report(5, ok, fmt::format("shock tubes M_O=4 complete, positive, L1 decreases N=200->400;{} ({:.0f} s)", detail,
                              seconds_since(t0)));
}

// 6. Weak hyperbolicity diagnostics of the multi-node closure.
void criterion6() {
    bool ok = true;
    double cp = 0.0, deg = 0.0;
    for (int n = 1; n <= 4; ++n)
        for (int t = 0; t < 100; ++t) {
            const WeakHyperbolicityResult r = check_weak_hyperbolicity(random_dirac_quadrature(n, 1000 * n + t));
            cp = std::max(cp, r.charpoly_error);
            deg = std::max(deg, r.degeneracy);
            ok = ok && r.multiplicity_one;
        }
    ok = ok && cp < 1e-8 && deg < 1e-10;
    report(6, ok,
           fmt::format("400 quadratures: charpoly error {:.1e} (< 1e-8), multiplicity one, degeneracy {:.1e} (< 1e-10)", cp,
                       deg));
}

// 7. Manufactured BGK convergence.
void criterion7() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    double worst_e = 0.0, worst_r = 0.0;
    for (const auto& col : kTable4) {
        const ProblemSpec p = make_problem("manufactured", col.eps);
        const auto rows = convergence_study(p, 4, kN, LimiterConfig::all_off(), col.eps);
        for (size_t j = 0; j < kN.size(); ++j) {
            worst_e = std::max(worst_e, rel(rows[j].error, col.err[j]));
            if (j > 0) worst_r = std::max(worst_r, std::abs(*rows[j].ratio - col.ratio[j - 1]));
        }
    }
    ok = worst_e <= 0.10 && worst_r <= 0.25;
    report(7, ok,
           fmt::format("BGK manufactured M_O=4, six Knudsen numbers: worst error deviation {:.2e} (<= 10%), worst ratio "
                       "deviation {:.3f} (<= 0.25) ({:.0f} s)",
                       worst_e, worst_r, seconds_since(t0)));
}

// 8. Asymptotic preservation: one stiff step, then the Sod trend toward the Euler solution.
void criterion8() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(8);
    // the AP limit concerns the unlimited step; the oscillation limiter re-projects primitive
    // variables afterwards and moves h by O(projection error), reported for information
    double hmax = 0.0, kdev = 0.0, hmax_limited = 0.0;
    for (int order = 2; order <= 4; ++order)
        for (int trial = 0; trial < 5; ++trial) {
            Mesh m;
            m.n_elem = 16;
            const PrimitiveState base = testutil::random_state(rng);
            const ElementSolution s0 = project_initial_condition(
                [&](double x) {
                    PrimitiveState b = base;
                    b.rho *= 1.0 + 0.2 * std::sin(std::numbers::pi * x);
                    b.p *= 1.0 + 0.1 * std::cos(std::numbers::pi * x);
                    return primitive_to_conserved(b);
                },
                m, order);
            SolverOptions opt;
            opt.order = order;
            opt.knudsen = 1e-12;
            {
                LxwDgSolver limited(m, opt);
                ElementSolution s = s0;
                limited.step(s, 1.0);
                for (int i = 0; i < m.n_elem; ++i) {
                    const CoeffMat nodes = apply(limited.ops().phi_gl, s.coeffs[i]);
                    for (int a = 0; a < nodes.rows(); ++a) {
                        const PrimitiveState st = conserved_to_primitive(nodes.row(a).transpose());
                        hmax_limited = std::max(hmax_limited, std::abs(st.h) / std::max(1.0, st.p * std::sqrt(st.p / st.rho)));
                    }
                }
            }
            opt.limiters = LimiterConfig::all_off();
            LxwDgSolver solver(m, opt);
            ElementSolution s = s0;
            solver.step(s, 1.0);
            const DGOperators& ops = solver.ops();
            for (int i = 0; i < m.n_elem; ++i) {
                const CoeffMat nodes = apply(ops.phi_gl, s.coeffs[i]);
                VecX target(ops.nq), knodal(ops.nq);
                for (int a = 0; a < ops.nq; ++a) {
                    const PrimitiveState st = conserved_to_primitive(nodes.row(a).transpose());
                    hmax = std::max(hmax, std::abs(st.h) / std::max(1.0, st.p * std::sqrt(st.p / st.rho)));
                    target[a] = 2 * st.p * st.p / st.rho;
                    knodal[a] = st.k;
                }
                const VecX kproj = ops.phi_gl_proj * target;
                kdev = std::max(kdev, (ops.phi_gl_proj * knodal - kproj).cwiseAbs().maxCoeff() /
                                          std::max(1.0, kproj.cwiseAbs().maxCoeff()));
            }
        }

    auto sod_l1 = [](double eps) {
        RunConfig c;
        c.problem = "bgk_sod";
        c.order = 4;
        c.n_elem = 200;
        c.knudsen = eps;
        const ProblemSpec p = make_problem("bgk_sod", eps);
        const Mesh mesh = problem_mesh(p, c.n_elem);
        SolverOptions opt;
        opt.order = c.order;
        opt.limiters = c.effective_limiters();
        opt.knudsen = eps;
        LxwDgSolver solver(mesh, opt);
        const ElementSolution s = solver.advance_to(initial_solution(p, mesh, c.order), p.t_final);
        const EulerRiemannSolution e = *p.euler;
        return l1_density_distance(s, mesh, [&](double x) { return e.sample(x / p.t_final).rho; });
    };
    const double l2 = sod_l1(1e-2), l4 = sod_l1(1e-4);
    const bool ok = hmax < 1e-8 && kdev < 1e-6 && l4 < l2 && rel(l2, kSodL1Eps1e2) < 0.02 && rel(l4, kSodL1Eps1e4) < 0.02;
    report(8, ok,
           fmt::format("stiff step, limiters off: max |h| {:.1e} (< 1e-8), k deviation {:.1e} (< 1e-6) "
                       "[limiters on: max |h| {:.1e}]; Sod L1 eps=1e-2 {:.4e} "
                       "(golden {:.4e}), eps=1e-4 {:.4e} (golden {:.4e}) ({:.0f} s)",
                       hmax, kdev, hmax_limited, l2, kSodL1Eps1e2, l4, kSodL1Eps1e4, seconds_since(t0)));
}

// 9. Structural identities.
void criterion9() {
    std::vector<std::string> bad;
    auto need = [&](bool c, const std::string& what) {
        if (!c) bad.push_back(what);
    };

    const QuadratureRule g10 = gauss_legendre(10);
    double orth = 0.0;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            double v = 0.0;
            for (int a = 0; a < g10.size(); ++a)
                v += 0.5 * g10.weights[a] * legendre_orthonormal(i, g10.nodes[a]) * legendre_orthonormal(j, g10.nodes[a]);
            orth = std::max(orth, std::abs(v - (i == j ? 1.0 : 0.0)));
        }
    need(orth < 1e-12, "orthonormality");

    for (int order = 1; order <= 4; ++order) {
        const PredictorMatrices pm = build_predictor_matrices(order);
        const int mp = static_cast<int>(pm.C2.rows()), mc = static_cast<int>(pm.C4.rows());
        need((pm.C2 * pm.C1 - MatX::Identity(mp, mp)).cwiseAbs().maxCoeff() < 1e-12, "C2C1");
        need((pm.C4 * pm.C3 - MatX::Identity(mc, mc)).cwiseAbs().maxCoeff() < 1e-12, "C4C3");
    }

    // GL with n points integrates x^d exactly for d < 2n; right Radau for d < 2n - 1
    double quad = 0.0;
    for (int n = 1; n <= 8; ++n) {
        const QuadratureRule gl = gauss_legendre(n), gr = gauss_radau_right(n);
        for (int d = 0; d < 2 * n; ++d) {
            const double exact = d % 2 == 0 ? 2.0 / (d + 1) : 0.0;
            double s = 0.0, r = 0.0;
            for (int a = 0; a < n; ++a) {
                s += gl.weights[a] * std::pow(gl.nodes[a], d);
                r += gr.weights[a] * std::pow(gr.nodes[a], d);
            }
            quad = std::max(quad, std::abs(s - exact));
            if (d < 2 * n - 1) quad = std::max(quad, std::abs(r - exact));
        }
    }
    need(quad < 1e-12, "quadrature exactness");

    std::mt19937_64 rng(9);
    double trip = 0.0, match = 0.0;
    for (int t = 0; t < 10000; ++t) {
        const PrimitiveState a = testutil::random_state(rng);
        const PrimitiveState b = conserved_to_primitive(primitive_to_conserved(a));
        const double su = std::sqrt(a.p / a.rho);
        trip = std::max({trip, rel(b.rho, a.rho), std::abs(b.u - a.u) / su, rel(b.p, a.p),
                         std::abs(b.h - a.h) / (a.p * su), rel(b.k, a.k)});
        // the three-node quadrature reproduces M0..M4 and the closing moment
        const QuadratureTriple q = hyqmom_invert(a);
        const Vec5 m = primitive_to_conserved(a);
        for (int j = 0; j < 5; ++j) match = std::max(match, std::abs(q.moment(j) - m[j]) / std::max(1.0, std::abs(m[j])));
        match = std::max(match, std::abs(q.moment(5) - closing_moment(a)) / std::max(1.0, std::abs(closing_moment(a))));
    }
    need(trip < 1e-9, "round trip");
    need(match < 1e-9, "moment matching");

    // first-order pipeline equals the Rusanov scheme
    Mesh m;
    m.n_elem = 50;
    const ElementSolution w0 = project_initial_condition(
        [](double x) { return primitive_to_conserved({2.0 + std::sin(std::numbers::pi * x), 0.5, 1.0, 0.3, 1.0}); }, m, 1);
    {
        SolverOptions opt;
        opt.order = 1;
        opt.limiters = LimiterConfig::all_off();
        LxwDgSolver solver(m, opt);
        CellAverages c;
        c.x_low = m.x_low;
        c.x_high = m.x_high;
        c.boundary = m.boundary;
        for (int i = 0; i < m.n_elem; ++i) c.q.push_back(w0.mean(i));
        ElementSolution s = w0;
        double worst = 0.0;
        for (int k = 0; k < 50; ++k) {
            const StepReport r = solver.step(s, 10.0);
            c = rusanov_step(c, r.dt, WaveSpeedBound::TwoState);
            for (int i = 0; i < m.n_elem; ++i) worst = std::max(worst, (s.mean(i) - c.q[i]).cwiseAbs().maxCoeff());
        }
        need(worst < 1e-12, "M_O=1 equals Rusanov");
    }

    // conservation of means over 100 periodic steps
    for (int order = 2; order <= 4; ++order) {
        const ElementSolution s0 = project_initial_condition(
            [](double x) { return primitive_to_conserved({x < 0.05 ? 1.0 : 0.3, 0.5, x < 0.05 ? 1.0 : 0.2, 0.0, 1.0}); },
            m, order, 0.05);
        SolverOptions opt;
        opt.order = order;
        LxwDgSolver solver(m, opt);
        ElementSolution s = s0;
        for (int k = 0; k < 100; ++k) solver.step(s, 100.0);
        for (int c = 0; c < 5; ++c) {
            double a = 0.0, b = 0.0;
            for (int i = 0; i < m.n_elem; ++i) {
                a += s0.mean(i)[c];
                b += s.mean(i)[c];
            }
            need(std::abs(a - b) * m.dx() < 1e-12 * std::max(1.0, std::abs(a) * m.dx()), "conservation");
        }
    }

    std::string what;
    for (const auto& b : bad) what += " " + b;
    report(9, bad.empty(),
           bad.empty() ? fmt::format("orthonormality {:.1e}, C2C1/C4C3, quadrature {:.1e}, round trip {:.1e}, moment "
                                     "matching {:.1e}, M_O=1 = Rusanov, conservation",
                                     orth, quad, trip, match)
                       : "failed:" + what);
}

}  // namespace

int main(int argc, char** argv) {
    // optional argument: run a single criterion
    const int only = argc > 1 ? std::atoi(argv[1]) : 0;
    auto want = [&](int c) { return only == 0 || only == c; };
    const auto t0 = std::chrono::steady_clock::now();
    std::map<int, std::vector<double>> table2;
    if (want(1) || want(2)) table2 = criterion1();
    if (want(2)) criterion2(table2);
    if (want(3)) criterion3();
    if (want(4)) criterion4();
    if (want(5)) criterion5();
    if (want(6)) criterion6();
    if (want(7)) criterion7();
    if (want(8)) criterion8();
    if (want(9)) criterion9();
    fmt::print("{} criteria failed ({:.0f} s)\n", failures, seconds_since(t0));
    return failures;
}
