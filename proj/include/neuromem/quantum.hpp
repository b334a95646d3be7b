#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace neuromem {

using QOperator = Eigen::MatrixXcd;

enum class DecayChannel { cavity_a, qubit_sigma };

struct DecayRate {
    DecayChannel channel = DecayChannel::cavity_a;
    double rate = 0.0;
};

// Driven qubit-cavity system in units hbar = 1, energies relative to the
// coupling g. H(t) = -g(sigma^dag a + a^dag sigma) - A(sigma^dag + sigma) sin((t/e)^2).
// N is the cavity truncation; the total dimension is 2N.
struct QmeSpec {
    double g = 1.0;
    double drive_intensity = 10.0;   // A
    double drive_timescale = 0.6;    // e
    int n_levels = 4;                // N
    std::vector<DecayRate> decay_rates = {{DecayChannel::cavity_a, 0.15},
                                          {DecayChannel::qubit_sigma, 0.15}};
    std::vector<double> t_grid;      // strictly increasing output times
    double pop_floor = 1e-3;         // minimum <a^dag a> for correlation origins

    void validate() const;

    // A/N scenario with the default chirp timescale and t in [0, 10]
    static QmeSpec scenario(double intensity, int n_levels, std::size_t n_times = 501);
};

struct QmeOperators {
    QOperator a, a_dag, sigma, sigma_dag, number, qubit_pop;
};

// a = I_2 (x) annihilation(N), sigma = |g><e| (x) I_N; index 0 of the qubit
// factor is the ground state.
QmeOperators build_operators(int n_levels);

QOperator hamiltonian(double t, const QmeSpec& spec);

// Exact Lindblad right-hand side for a density matrix (or any kernel matrix).
QOperator lindblad_rhs(const QOperator& rho, double t, const QmeSpec& spec);

struct EvolveOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    bool check_invariants = true;
    double trace_tol = 1e-8;
    double herm_tol = 1e-8;
    double eig_floor = -1e-7;
    bool store_states = false;
};

struct EvolveResult {
    std::vector<double> t;
    std::vector<double> n_expect;      // <a^dag a>
    std::vector<double> q_expect;      // <sigma^dag sigma>
    std::vector<QOperator> states;     // populated when store_states
    double max_trace_err = 0.0;
    double max_herm_err = 0.0;
    double min_eigenvalue = 0.0;
};

// Integrates the master equation over spec.t_grid starting from rho0 at
// t_grid.front(). Invariants are re-checked at every output sample; a
// violation raises SolverError naming the time.
EvolveResult evolve(const QOperator& rho0, const QmeSpec& spec,
                    const EvolveOptions& opts = {});

// Ground (x) vacuum projector of the right dimension.
QOperator ground_state(int n_levels);

// First grid time with <a^dag a> >= pop_floor; throws if none.
std::size_t correlation_origin_index(const EvolveResult& run, double pop_floor);

struct CorrelationSeries {
    std::vector<double> t;                       // absolute times, t[0] = t0
    std::vector<std::complex<double>> values;
};

// Quantum-regression two-time correlators with time origin t0 = t_grid[0]:
// rho_t0 is the state at t0 and t_grid the (absolute) evaluation times.
// g1(t) = Tr[a^dag K(t)] / sqrt(<n>(t) <n>(t0)), K(t0) = a rho_t0
CorrelationSeries correlation_g1(const QmeSpec& spec, const QOperator& rho_t0,
                                 const std::vector<double>& t_grid,
                                 const EvolveOptions& opts = {});
// g2(t) = Tr[a^dag a K(t)] / <n>(t0)^2, K(t0) = a rho_t0 a^dag
CorrelationSeries correlation_g2(const QmeSpec& spec, const QOperator& rho_t0,
                                 const std::vector<double>& t_grid,
                                 const EvolveOptions& opts = {});

}  // namespace neuromem
