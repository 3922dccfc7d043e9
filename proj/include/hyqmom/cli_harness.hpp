#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hyqmom/lxw_dg_solver.hpp"
#include "hyqmom/reference_solvers.hpp"

namespace hyqmom {

struct ProblemSpec {
    std::string id;
    std::string description;
    double x_low = -1.0, x_high = 1.0;
    BoundaryKind boundary = BoundaryKind::Periodic;
    double t_final = 1.0;
    bool t_final_assumed = false;    // true when the final time is a chosen default, not part of the problem
    std::optional<double> jump;      // location of a discontinuity in the initial data
    bool collisional = false;
    bool manufactured = false;
    std::function<PrimitiveState(double x)> initial;
    std::function<PrimitiveState(double t, double x)> exact;  // empty if unknown
    std::optional<EulerRiemannSolution> euler;                // Euler-limit comparison
};

const std::vector<std::string>& problem_ids();

// Throws std::invalid_argument for unknown ids. `eps` only affects the manufactured problem.
ProblemSpec make_problem(const std::string& id, double eps = 1.0);

struct RunConfig {
    std::string problem = "smooth";
    std::string pipeline = "dg";  // dg | rusanov
    int order = 4;
    int n_elem = 40;
    double cfl = 0.0;  // 0 selects the order default
    LimiterConfig limiters;
    bool a0_explicit = false;  // otherwise default_a0 decides
    double knudsen = 0.0;  // 0: collisionless unless the problem is collisional
    std::optional<double> t_final;
    std::string output_dir = "out";
    unsigned long seed = 1;
    int points_per_element = 4;

    // Applies one key=value pair; throws std::invalid_argument on unknown keys or bad values.
    void set(const std::string& key, const std::string& value);
    void validate() const;
    // Flat key=value text, parseable by parse_config.
    std::string to_text() const;
    // Knudsen number that the solver will actually use.
    double effective_knudsen() const;
    double effective_t_final() const;
    LimiterConfig effective_limiters() const;
};

// key=value lines, # comments. A [config] header is skipped and any other [section] ends the
// input, so metadata.txt files load directly.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

// Default A0 of the oscillation limiter (larger for BGK Sod near the fluid limit).
double default_a0(const std::string& problem, double eps);

ElementSolution initial_solution(const ProblemSpec& p, const Mesh& mesh, int order);
Mesh problem_mesh(const ProblemSpec& p, int n_elem);

// Relative L2 error summed over the five conserved components, with exact coefficients of
// degree M_O + 1 from a 20-point Gauss-Legendre rule per element.
double compute_error_norm(const ElementSolution& numeric, const Mesh& mesh, int order,
                          const std::function<Vec5(double x)>& exact);

struct ConvergenceRow {
    int n_elem = 0;
    double error = 0.0;
    std::optional<double> ratio;  // log2(e_{N/2}/e_N)
};

void fill_ratios(std::vector<ConvergenceRow>& rows);

using Stepper = std::function<ElementSolution(const ElementSolution&, const Mesh&, double t_final)>;

// Throws std::invalid_argument for fewer than two resolutions or a problem without exact solution.
std::vector<ConvergenceRow> convergence_study(const ProblemSpec& problem, int order, const std::vector<int>& n_list,
                                              const LimiterConfig& limiters, double eps = 0.0,
                                              const Stepper& stepper = {});

std::string format_convergence_text(const std::vector<ConvergenceRow>& rows, int order);
std::string format_convergence_csv(const std::vector<ConvergenceRow>& rows, int order);
std::string sci4(double v);

// CSV with columns x,rho,u,p,h,k,r at equispaced intra-element points.
void emit_profile(const ElementSolution& s, const Mesh& mesh, std::ostream& out, int points_per_element = 4);
void emit_profile(const CellAverages& cells, std::ostream& out, int points_per_element = 1);
void write_profile_file(const std::string& path, const std::function<void(std::ostream&)>& writer);

// Density of a DG solution at x (x inside the mesh).
double density_at(const ElementSolution& s, const Mesh& mesh, double x);

// L1 distance in density between a DG solution and a cell-average reference on the same domain.
double l1_density_distance(const ElementSolution& s, const Mesh& mesh, const CellAverages& ref);
// L1 distance in density to a pointwise reference, with a 4-point GL rule per element.
double l1_density_distance(const ElementSolution& s, const Mesh& mesh, const std::function<double(double)>& rho_ref);

struct FuzzResult {
    long trials = 0;
    long violations = 0;
    long rejected = 0;  // steps refused by the Rusanov CFL guard
};

// Random realizable neighbour triples, one Rusanov step on the middle cell at the given CFL.
// CFL >= 1 bypasses the guard and applies the update formula directly.
FuzzResult positivity_fuzz(long trials, double cfl, unsigned long seed);
// Random state whose conserved form round-trips to 1e-8 relative in p and k.
PrimitiveState random_realizable_state(std::mt19937_64& rng);

struct RunResult {
    int exit_code = 0;
    long steps = 0;
    double wall_seconds = 0.0;
    double final_time = 0.0;
    LimiterActivity activity;
    std::vector<std::string> artifacts;
    std::string message;
};

// Runs the configured pipeline and writes profile.csv, limiter_log.csv and metadata.txt into
// output_dir (plus euler_comparison.csv for collisional Riemann problems).
RunResult run(const RunConfig& config);

}  // namespace hyqmom
