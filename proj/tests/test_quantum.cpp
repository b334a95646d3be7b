#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "neuromem/errors.hpp"
#include "neuromem/quantum.hpp"
#include "oracle_utils.hpp"

using namespace neuromem;
using Eigen::MatrixXcd;
using std::complex;

namespace {

QmeSpec bare_spec(int n, double g = 1.0, double intensity = 0.0, double decay = 0.0,
                  double t_end = 5.0, std::size_t samples = 101) {
    QmeSpec s;
    s.g = g;
    s.drive_intensity = intensity;
    s.n_levels = n;
    s.decay_rates.clear();
    if (decay > 0.0)
        s.decay_rates = {{DecayChannel::cavity_a, decay}, {DecayChannel::qubit_sigma, decay}};
    s.t_grid.resize(samples);
    for (std::size_t i = 0; i < samples; ++i)
        s.t_grid[i] = t_end * double(i) / double(samples - 1);
    return s;
}

// coherent (truncated) cavity state tensored with the qubit ground state
MatrixXcd coherent_ground(int n, complex<double> alpha) {
    Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(2 * n);
    double lognorm = -0.5 * std::norm(alpha);
    for (int k = 0; k < n; ++k) {
        double logfact = 0.0;
        for (int j = 2; j <= k; ++j) logfact += std::log(double(j));
        amp[k] = std::pow(alpha, k) * std::exp(lognorm - 0.5 * logfact);
    }
    amp.normalize();  // absorb the truncation tail
    return amp * amp.adjoint();
}

}  // namespace

TEST_CASE("operator algebra on the truncated space") {
    const int n = 6;
    const QmeOperators ops = build_operators(n);
    // [a, a^dag] = 1 except the Fock-corner entry
    const MatrixXcd comm = ops.a * ops.a_dag - ops.a_dag * ops.a;
    for (int q = 0; q < 2; ++q) {
        for (int k = 0; k < n; ++k) {
            const int idx = q * n + k;
            const double expected = k == n - 1 ? -double(n - 1) : 1.0;
            CHECK(comm(idx, idx).real() == doctest::Approx(expected).epsilon(1e-14));
        }
    }
    CHECK((ops.sigma * ops.sigma).cwiseAbs().maxCoeff() == 0.0);
    // a|q=g, n=1> = |q=g, n=0>
    Eigen::VectorXcd one = Eigen::VectorXcd::Zero(2 * n);
    one[1] = 1.0;
    const Eigen::VectorXcd res = ops.a * one;
    CHECK(std::abs(res[0] - 1.0) < 1e-14);
}

TEST_CASE("hamiltonian structure") {
    QmeSpec s = bare_spec(4, 1.0, 3.0);
    const QmeOperators ops = build_operators(4);
    // t=0: drive off
    const MatrixXcd h0 = hamiltonian(0.0, s);
    const MatrixXcd jc = -s.g * (ops.sigma_dag * ops.a + ops.a_dag * ops.sigma);
    CHECK((h0 - jc).cwiseAbs().maxCoeff() < 1e-14);
    // hermiticity at scattered times
    for (int k = 1; k <= 100; ++k) {
        const double t = 0.077 * double(k);
        const MatrixXcd h = hamiltonian(t, s);
        CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    }
    // A=0: total excitation commutes with H
    QmeSpec s0 = bare_spec(4, 1.0, 0.0);
    const MatrixXcd h = hamiltonian(1.3, s0);
    const MatrixXcd total = ops.number + ops.qubit_pop;
    CHECK((h * total - total * h).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("lindblad rhs: damped-cavity photon decay rate") {
    const int n = 6;
    QmeSpec s = bare_spec(n, 0.0, 0.0);  // H = 0
    s.decay_rates = {{DecayChannel::cavity_a, 0.4}};
    const QmeOperators ops = build_operators(n);
    MatrixXcd rho = MatrixXcd::Zero(2 * n, 2 * n);
    rho(1, 1) = 1.0;  // cavity |1>, qubit ground
    const MatrixXcd drho = lindblad_rhs(rho, 0.0, s);
    const double dn = (ops.number * drho).trace().real();
    CHECK(dn == doctest::Approx(-0.4).epsilon(1e-12));
    CHECK(std::abs(drho.trace()) < 1e-14);
    // hermiticity preservation of the generator
    MatrixXcd r2 = MatrixXcd::Random(2 * n, 2 * n);
    r2 = (r2 + r2.adjoint()).eval();
    const MatrixXcd d2 = lindblad_rhs(r2, 0.3, s);
    CHECK((d2 - d2.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(d2.trace()) < 1e-12);
}

TEST_CASE("evolve: dark fixed point stays dark") {
    QmeSpec s = bare_spec(4, 0.0, 0.0, 0.15, 3.0, 31);
    s.g = 0.0;
    const EvolveResult res = evolve(ground_state(4), s);
    for (double v : res.n_expect) CHECK(std::abs(v) < 1e-12);
    for (double v : res.q_expect) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("evolve conserves trace, hermiticity, positivity under drive") {
    QmeSpec s = QmeSpec::scenario(10.0, 4, 101);
    const EvolveResult res = evolve(ground_state(4), s);
    CHECK(res.max_trace_err < 1e-8);
    CHECK(res.max_herm_err < 1e-8);
    CHECK(res.min_eigenvalue > -1e-7);
    // bounded oscillatory exchange between the two populations
    double max_n = 0.0;
    int direction_changes = 0;
    for (std::size_t i = 1; i < res.n_expect.size(); ++i) {
        max_n = std::max(max_n, res.n_expect[i]);
        if (i + 1 < res.n_expect.size()) {
            const double d0 = res.n_expect[i] - res.n_expect[i - 1];
            const double d1 = res.n_expect[i + 1] - res.n_expect[i];
            if (d0 * d1 < 0.0) ++direction_changes;
        }
    }
    CHECK(max_n > 0.1);
    CHECK(max_n < 3.0);  // N=4 keeps <n> <= 3
    CHECK(direction_changes >= 5);
}

TEST_CASE("no-decay evolution conserves excitation and purity") {
    QmeSpec s = bare_spec(8, 1.0, 0.0, 0.0, 6.0, 61);
    // one excitation split between qubit and cavity
    MatrixXcd rho = MatrixXcd::Zero(16, 16);
    // |psi> = (|e,0> + |g,1>)/sqrt(2); qubit factor index: e=1 -> rows 8..15
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(16);
    psi[8] = 1.0 / std::sqrt(2.0);
    psi[1] = 1.0 / std::sqrt(2.0);
    rho = psi * psi.adjoint();
    EvolveOptions opts;
    opts.store_states = true;
    const EvolveResult res = evolve(rho, s, opts);
    const double total0 = res.n_expect.front() + res.q_expect.front();
    for (std::size_t i = 0; i < res.t.size(); ++i) {
        CHECK(std::abs(res.n_expect[i] + res.q_expect[i] - total0) < 1e-8);
        const double purity = (res.states[i] * res.states[i]).trace().real();
        CHECK(std::abs(purity - 1.0) < 1e-7);
    }
}

TEST_CASE("matrix-exponential oracle matches evolve") {
    QmeSpec s = QmeSpec::scenario(10.0, 4, 11);
    // truncate horizon for oracle cost: 11 samples over [0, 10] -> use t in [0, 2]
    QmeSpec short_spec = s;
    short_spec.t_grid.assign(s.t_grid.begin(), s.t_grid.begin() + 3);  // 0, 1, 2
    EvolveOptions opts;
    opts.store_states = true;
    const EvolveResult res = evolve(ground_state(4), short_spec, opts);

    const QmeOperators ops = build_operators(4);
    std::vector<MatrixXcd> c_ops;
    for (const auto& d : short_spec.decay_rates) {
        const MatrixXcd base = d.channel == DecayChannel::cavity_a ? ops.a : ops.sigma;
        c_ops.push_back(std::sqrt(d.rate) * base);
    }
    auto h_of_t = [&](double t) { return hamiltonian(t, short_spec); };
    const MatrixXcd rho_oracle = oracle::piecewise_expm_evolve(
        ground_state(4), 0.0, short_spec.t_grid.back(), 1000, h_of_t, c_ops);
    const double diff = (res.states.back() - rho_oracle).cwiseAbs().maxCoeff();
    CHECK(diff < 1e-5);
}

TEST_CASE("g1 equals one at the origin and respects the Cauchy-Schwarz bound") {
    QmeSpec s = QmeSpec::scenario(10.0, 4, 201);
    EvolveOptions opts;
    opts.store_states = true;
    const EvolveResult run = evolve(ground_state(4), s, opts);
    const std::size_t k0 = correlation_origin_index(run, s.pop_floor);
    REQUIRE(k0 < s.t_grid.size() - 10);
    std::vector<double> tail(s.t_grid.begin() + long(k0), s.t_grid.end());
    const CorrelationSeries g1 = correlation_g1(s, run.states[k0], tail);
    CHECK(std::abs(g1.values.front() - 1.0) < 1e-10);
    for (const auto& v : g1.values) CHECK(std::abs(v) <= 1.0 + 1e-8);
}

TEST_CASE("free damped cavity: g1 matches the closed-form correlator") {
    const int n = 12;
    const double kappa = 0.3;
    QmeSpec s = bare_spec(n, 0.0, 0.0, 0.0, 6.0, 61);
    s.g = 0.0;
    s.decay_rates = {{DecayChannel::cavity_a, kappa}};
    const complex<double> alpha(0.7, 0.0);
    const MatrixXcd rho0 = coherent_ground(n, alpha);
    const QmeOperators ops = build_operators(n);
    const double n0 = (ops.number * rho0).trace().real();
    const CorrelationSeries g1 = correlation_g1(s, rho0, s.t_grid);
    for (std::size_t i = 0; i < g1.t.size(); ++i) {
        const double tau = g1.t[i] - g1.t.front();
        // unnormalized <a^dag(tau) a(0)> = n0 e^{-kappa tau / 2}; the
        // normalized correlator of a decaying coherent state stays 1
        const double nt = n0 * std::exp(-kappa * tau);
        const complex<double> unnorm = g1.values[i] * std::sqrt(nt * n0);
        CHECK(std::abs(unnorm - n0 * std::exp(-0.5 * kappa * tau)) < 1e-4);
        CHECK(std::abs(std::abs(g1.values[i]) - 1.0) < 1e-6);
    }
}

TEST_CASE("g2 of a coherent state without decay is one") {
    const int n = 16;
    QmeSpec s = bare_spec(n, 0.0, 0.0, 0.0, 4.0, 21);
    s.g = 0.0;
    const MatrixXcd rho0 = coherent_ground(n, complex<double>(0.7, 0.0));
    const CorrelationSeries g2 = correlation_g2(s, rho0, s.t_grid);
    for (const auto& v : g2.values) {
        CHECK(std::abs(v.imag()) < 1e-10);
        CHECK(v.real() == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("g2(0) of a single-photon Fock state vanishes") {
    const int n = 6;
    QmeSpec s = bare_spec(n, 0.0, 0.0, 0.0, 1.0, 5);
    s.g = 0.0;
    MatrixXcd rho0 = MatrixXcd::Zero(2 * n, 2 * n);
    rho0(1, 1) = 1.0;  // cavity |1>
    const CorrelationSeries g2 = correlation_g2(s, rho0, s.t_grid);
    CHECK(std::abs(g2.values.front()) < 1e-14);
}

TEST_CASE("g2(0) of a truncated thermal state matches direct moments") {
    const int n = 10;
    const double nbar = 0.25;
    QmeSpec s = bare_spec(n, 0.0, 0.0, 0.0, 1.0, 5);
    s.g = 0.0;
    MatrixXcd rho0 = MatrixXcd::Zero(2 * n, 2 * n);
    double z = 0.0;
    const double ratio = nbar / (1.0 + nbar);
    for (int k = 0; k < n; ++k) z += std::pow(ratio, k);
    for (int k = 0; k < n; ++k) rho0(k, k) = std::pow(ratio, k) / z;
    // direct moment oracle on the same truncated state
    double mean_n = 0.0, mean_nn1 = 0.0;
    for (int k = 0; k < n; ++k) {
        mean_n += double(k) * rho0(k, k).real();
        mean_nn1 += double(k) * double(k - 1) * rho0(k, k).real();
    }
    const double g2_direct = mean_nn1 / (mean_n * mean_n);
    const CorrelationSeries g2 = correlation_g2(s, rho0, s.t_grid);
    CHECK(g2.values.front().real() == doctest::Approx(g2_direct).epsilon(1e-10));
    CHECK(g2_direct == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("g2 of the driven scenario stays non-negative") {
    QmeSpec s = QmeSpec::scenario(10.0, 4, 101);
    EvolveOptions opts;
    opts.store_states = true;
    const EvolveResult run = evolve(ground_state(4), s, opts);
    const std::size_t k0 = correlation_origin_index(run, s.pop_floor);
    std::vector<double> tail(s.t_grid.begin() + long(k0), s.t_grid.end());
    const CorrelationSeries g2 = correlation_g2(s, run.states[k0], tail);
    for (const auto& v : g2.values) {
        CHECK(v.real() >= -1e-9);
        CHECK(std::abs(v.imag()) < 1e-8);
    }
}

TEST_CASE("correlation origin below the population floor is rejected") {
    QmeSpec s = bare_spec(4, 0.0, 0.0, 0.0, 1.0, 5);
    s.g = 0.0;
    CHECK_THROWS_AS(correlation_g1(s, ground_state(4), s.t_grid), SolverError);
}

TEST_CASE("spec validation rejects bad grids and dimensions") {
    QmeSpec s = QmeSpec::scenario(10.0, 1);
    CHECK_THROWS_AS(s.validate(), ConfigError);
    QmeSpec s2 = QmeSpec::scenario(10.0, 4);
    s2.t_grid = {0.0, 0.0, 1.0};
    CHECK_THROWS_AS(s2.validate(), ConfigError);
    QmeSpec s3 = QmeSpec::scenario(10.0, 4);
    CHECK_THROWS_AS(evolve(ground_state(8), s3), ConfigError);
}
