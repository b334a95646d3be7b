#include "neuromem/quantum.hpp"

#include <algorithm>
#include <cmath>

#include "neuromem/errors.hpp"
#include "neuromem/rk45.hpp"

namespace neuromem {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using std::complex;

namespace {

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
    MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace

void QmeSpec::validate() const {
    if (n_levels < 2) throw ConfigError("invalid parameter: n_levels (need N >= 2)");
    for (const auto& d : decay_rates)
        if (d.rate < 0.0) throw ConfigError("invalid parameter: decay rate");
    if (t_grid.size() < 2) throw ConfigError("invalid parameter: t_grid (need >= 2 times)");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1]))
            throw ConfigError("invalid parameter: t_grid must be strictly increasing");
    if (pop_floor <= 0.0) throw ConfigError("invalid parameter: pop_floor");
}

QmeSpec QmeSpec::scenario(double intensity, int n_levels, std::size_t n_times) {
    QmeSpec s;
    s.drive_intensity = intensity;
    s.n_levels = n_levels;
    s.t_grid.resize(n_times);
    for (std::size_t i = 0; i < n_times; ++i)
        s.t_grid[i] = 10.0 * double(i) / double(n_times - 1);
    return s;
}

QmeOperators build_operators(int n_levels) {
    if (n_levels < 2) throw ConfigError("build_operators: need N >= 2");
    const int n = n_levels;
    MatrixXcd ann = MatrixXcd::Zero(n, n);
    for (int k = 1; k < n; ++k) ann(k - 1, k) = std::sqrt(double(k));
    MatrixXcd lower = MatrixXcd::Zero(2, 2);
    lower(0, 1) = 1.0;  // |g><e|
    const MatrixXcd i2 = MatrixXcd::Identity(2, 2);
    const MatrixXcd in = MatrixXcd::Identity(n, n);

    QmeOperators ops;
    ops.a = kron(i2, ann);
    ops.sigma = kron(lower, in);
    ops.a_dag = ops.a.adjoint();
    ops.sigma_dag = ops.sigma.adjoint();
    ops.number = ops.a_dag * ops.a;
    ops.qubit_pop = ops.sigma_dag * ops.sigma;
    return ops;
}

namespace {

double chirp(double t, double e) {
    const double z = t / e;
    return std::sin(z * z);
}

struct Engine {
    MatrixXcd h_jc;     // -g (sigma^dag a + a^dag sigma)
    MatrixXcd h_drive;  // -A (sigma^dag + sigma)
    std::vector<MatrixXcd> c_ops;
    std::vector<MatrixXcd> cdc_ops;  // C^dag C
    double e = 1.0;

    explicit Engine(const QmeSpec& spec) {
        const QmeOperators ops = build_operators(spec.n_levels);
        h_jc = -spec.g * (ops.sigma_dag * ops.a + ops.a_dag * ops.sigma);
        h_drive = -spec.drive_intensity * (ops.sigma_dag + ops.sigma);
        e = spec.drive_timescale;
        for (const auto& d : spec.decay_rates) {
            if (d.rate == 0.0) continue;
            const MatrixXcd& base =
                d.channel == DecayChannel::cavity_a ? ops.a : ops.sigma;
            c_ops.push_back(std::sqrt(d.rate) * base);
            cdc_ops.push_back(c_ops.back().adjoint() * c_ops.back());
        }
    }

    void apply(double t, const MatrixXcd& rho, MatrixXcd& out) const {
        const MatrixXcd h = h_jc + chirp(t, e) * h_drive;
        out.noalias() = complex<double>(0, -1) * (h * rho - rho * h);
        for (std::size_t k = 0; k < c_ops.size(); ++k) {
            out.noalias() += c_ops[k] * rho * c_ops[k].adjoint();
            out.noalias() -= 0.5 * (cdc_ops[k] * rho + rho * cdc_ops[k]);
        }
    }
};

double trace_error(const MatrixXcd& rho) { return std::abs(rho.trace() - 1.0); }

double herm_error(const MatrixXcd& rho) {
    return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const MatrixXcd& rho) {
    const MatrixXcd sym = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// integrate a matrix kernel (density matrix or regression kernel) over the
// grid, invoking `sample` at every grid time
template <class Sample>
void integrate_kernel(const Engine& eng, const std::vector<double>& t_grid,
                      MatrixXcd k0, double abs_tol, double rel_tol, Sample&& sample) {
    const auto dim = k0.rows();
    VectorXcd y = Eigen::Map<const VectorXcd>(k0.data(), dim * dim);
    MatrixXcd scratch(dim, dim);

    auto rhs = [&](double t, const VectorXcd& yv, VectorXcd& dydt) {
        const Eigen::Map<const MatrixXcd> rho(yv.data(), dim, dim);
        eng.apply(t, rho, scratch);
        dydt = Eigen::Map<const VectorXcd>(scratch.data(), dim * dim);
    };

    std::size_t next = 0;
    auto on_accept = [&](const DenseStep<VectorXcd>& seg, VectorXcd&) -> bool {
        while (next < t_grid.size()) {
            const double ts = t_grid[next];
            if (ts > seg.t1() + 1e-12 * std::max(1.0, std::abs(seg.t1()))) break;
            const double theta = std::clamp((ts - seg.t0) / seg.h, 0.0, 1.0);
            const VectorXcd ys = seg.eval(theta);
            sample(ts, Eigen::Map<const MatrixXcd>(ys.data(), dim, dim));
            ++next;
        }
        return false;
    };

    sample(t_grid.front(), Eigen::Map<const MatrixXcd>(y.data(), dim, dim));
    next = 1;

    Rk45Options opt;
    opt.abs_tol = abs_tol;
    opt.rel_tol = rel_tol;
    rk45_integrate(rhs, t_grid.front(), t_grid.back(), y, opt, on_accept);
}

double expect(const MatrixXcd& op, const MatrixXcd& rho) {
    return (op * rho).trace().real();
}

}  // namespace

QOperator hamiltonian(double t, const QmeSpec& spec) {
    spec.validate();
    const QmeOperators ops = build_operators(spec.n_levels);
    MatrixXcd h = -spec.g * (ops.sigma_dag * ops.a + ops.a_dag * ops.sigma);
    h += chirp(t, spec.drive_timescale) *
         (-spec.drive_intensity * (ops.sigma_dag + ops.sigma));
    return h;
}

QOperator lindblad_rhs(const QOperator& rho, double t, const QmeSpec& spec) {
    spec.validate();
    const Engine eng(spec);
    MatrixXcd out(rho.rows(), rho.cols());
    eng.apply(t, rho, out);
    return out;
}

QOperator ground_state(int n_levels) {
    MatrixXcd rho = MatrixXcd::Zero(2 * n_levels, 2 * n_levels);
    rho(0, 0) = 1.0;
    return rho;
}

EvolveResult evolve(const QOperator& rho0, const QmeSpec& spec, const EvolveOptions& opts) {
    spec.validate();
    const int dim = 2 * spec.n_levels;
    if (rho0.rows() != dim || rho0.cols() != dim)
        throw ConfigError("evolve: rho0 dimension does not match 2N");

    const Engine eng(spec);
    const QmeOperators ops = build_operators(spec.n_levels);

    EvolveResult res;
    res.min_eigenvalue = 1.0;
    res.t.reserve(spec.t_grid.size());

    integrate_kernel(eng, spec.t_grid, rho0, opts.abs_tol, opts.rel_tol,
                     [&](double ts, const Eigen::Map<const MatrixXcd>& rho) {
        const MatrixXcd r = rho;
        res.t.push_back(ts);
        res.n_expect.push_back(expect(ops.number, r));
        res.q_expect.push_back(expect(ops.qubit_pop, r));
        if (opts.store_states) res.states.push_back(r);
        if (opts.check_invariants) {
            const double te = trace_error(r);
            const double he = herm_error(r);
            const double me = min_eigenvalue(r);
            res.max_trace_err = std::max(res.max_trace_err, te);
            res.max_herm_err = std::max(res.max_herm_err, he);
            res.min_eigenvalue = std::min(res.min_eigenvalue, me);
            if (te >= opts.trace_tol)
                throw SolverError("evolve: trace deviation " + std::to_string(te) +
                                  " at t = " + std::to_string(ts));
            if (he >= opts.herm_tol)
                throw SolverError("evolve: hermiticity deviation at t = " +
                                  std::to_string(ts));
            if (me <= opts.eig_floor)
                throw SolverError("evolve: negative eigenvalue " + std::to_string(me) +
                                  " at t = " + std::to_string(ts));
        }
    });
    return res;
}

std::size_t correlation_origin_index(const EvolveResult& run, double pop_floor) {
    for (std::size_t i = 0; i < run.n_expect.size(); ++i)
        if (run.n_expect[i] >= pop_floor) return i;
    throw SolverError("correlation origin underpopulated: <a^dag a> never reaches floor");
}

namespace {

CorrelationSeries run_correlation(const QmeSpec& spec, const QOperator& rho_t0,
                                  const std::vector<double>& t_grid,
                                  const EvolveOptions& opts, bool second_order) {
    spec.validate();
    const int dim = 2 * spec.n_levels;
    if (rho_t0.rows() != dim || rho_t0.cols() != dim)
        throw ConfigError("correlation: rho_t0 dimension does not match 2N");
    if (t_grid.size() < 2) throw ConfigError("correlation: need >= 2 grid times");

    const Engine eng(spec);
    const QmeOperators ops = build_operators(spec.n_levels);
    const double n0 = expect(ops.number, rho_t0);
    if (n0 < spec.pop_floor)
        throw SolverError("correlation origin underpopulated: <a^dag a>(t0) = " +
                          std::to_string(n0));

    CorrelationSeries out;
    out.t.reserve(t_grid.size());

    if (!second_order) {
        // evolve rho (for the <n>(t) normalization) and the kernel a*rho together
        // as one block-diagonal system so both see the same time stepping
        MatrixXcd joint = MatrixXcd::Zero(2 * dim, 2 * dim);
        joint.topLeftCorner(dim, dim) = rho_t0;
        joint.bottomRightCorner(dim, dim) = ops.a * rho_t0;
        Engine joint_eng(spec);
        // lift operators to the doubled space
        auto lift = [&](const MatrixXcd& mt) {
            MatrixXcd big = MatrixXcd::Zero(2 * dim, 2 * dim);
            big.topLeftCorner(dim, dim) = mt;
            big.bottomRightCorner(dim, dim) = mt;
            return big;
        };
        joint_eng.h_jc = lift(eng.h_jc);
        joint_eng.h_drive = lift(eng.h_drive);
        joint_eng.c_ops.clear();
        joint_eng.cdc_ops.clear();
        for (std::size_t k = 0; k < eng.c_ops.size(); ++k) {
            joint_eng.c_ops.push_back(lift(eng.c_ops[k]));
            joint_eng.cdc_ops.push_back(lift(eng.cdc_ops[k]));
        }
        integrate_kernel(joint_eng, t_grid, joint, opts.abs_tol, opts.rel_tol,
                         [&](double ts, const Eigen::Map<const MatrixXcd>& m) {
            const MatrixXcd rho_t = m.topLeftCorner(dim, dim);
            const MatrixXcd kern = m.bottomRightCorner(dim, dim);
            const double nt = expect(ops.number, rho_t);
            const complex<double> num = (ops.a_dag * kern).trace();
            out.t.push_back(ts);
            out.values.push_back(num / std::sqrt(std::max(nt, 0.0) * n0));
        });
    } else {
        const MatrixXcd k0 = ops.a * rho_t0 * ops.a_dag;
        integrate_kernel(eng, t_grid, k0, opts.abs_tol, opts.rel_tol,
                         [&](double ts, const Eigen::Map<const MatrixXcd>& kern) {
            const complex<double> num = (ops.number * kern).trace();
            out.t.push_back(ts);
            out.values.push_back(num / (n0 * n0));
        });
    }
    return out;
}

}  // namespace

CorrelationSeries correlation_g1(const QmeSpec& spec, const QOperator& rho_t0,
                                 const std::vector<double>& t_grid,
                                 const EvolveOptions& opts) {
    return run_correlation(spec, rho_t0, t_grid, opts, false);
}

CorrelationSeries correlation_g2(const QmeSpec& spec, const QOperator& rho_t0,
                                 const std::vector<double>& t_grid,
                                 const EvolveOptions& opts) {
    return run_correlation(spec, rho_t0, t_grid, opts, true);
}

}  // namespace neuromem
