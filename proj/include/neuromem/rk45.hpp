#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "neuromem/errors.hpp"

// Adaptive Dormand-Prince 5(4) integrator with the classic quartic dense
// interpolant. Header-only and templated on the state vector type; works with
// fixed and dynamic Eigen vectors over real or complex scalars. Evaluation
// order is fixed, so results are bit-reproducible for identical inputs.
namespace neuromem {

template <class Vec>
struct DenseStep {
    double t0 = 0.0;
    double h = 0.0;
    Vec r1, r2, r3, r4, r5;

    double t1() const { return t0 + h; }

    // state at t0 + theta*h, theta in [0,1]
    Vec eval(double theta) const {
        const double th1 = 1.0 - theta;
        return r1 + theta * (r2 + th1 * (r3 + theta * (r4 + th1 * r5)));
    }

    // time derivative of the interpolant at t0 + theta*h
    Vec eval_derivative(double theta) const {
        const double th1 = 1.0 - theta;
        // d/dtheta of r1 + th*(r2 + th1*(r3 + th*(r4 + th1*r5)))
        Vec inner = r4 + th1 * r5;
        Vec dinner = r5;  // d/dtheta of (r4 + (1-theta) r5) = -r5; sign folded below
        Vec mid = r3 + theta * inner;
        Vec dmid = inner - theta * dinner;
        return (r2 + th1 * mid + theta * (-mid + th1 * dmid)) * (1.0 / h);
    }
};

struct Rk45Options {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    double max_step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0;  // 0 = derive from max_step/span
    std::size_t max_steps = 500'000'000;
};

namespace detail {

// accumulated over sorted terms so the norm is invariant under any
// permutation of the state layout (keeps permuted networks bit-identical)
template <class Vec>
double weighted_rms(const Vec& err, const Vec& y0, const Vec& y1, double atol, double rtol) {
    static thread_local std::vector<double> scratch;
    const auto n = err.size();
    scratch.clear();
    scratch.reserve(std::size_t(n));
    for (std::remove_const_t<decltype(n)> i = 0; i < n; ++i) {
        const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double e = std::abs(err[i]) / sc;
        scratch.push_back(e * e);
    }
    std::sort(scratch.begin(), scratch.end());
    double acc = 0.0;
    for (double v : scratch) acc += v;
    return std::sqrt(acc / double(n));
}

template <class Vec>
bool has_nonfinite(const Vec& y) {
    const auto n = y.size();
    for (std::remove_const_t<decltype(n)> i = 0; i < n; ++i) {
        if (!std::isfinite(std::abs(y[i]))) return true;
    }
    return false;
}

}  // namespace detail

// Integrates dy/dt = rhs(t, y) from t0 to t1. After every accepted step the
// callback receives the dense segment and a mutable reference to the new
// state; returning true signals the state was modified (clamping), which
// forces a fresh derivative evaluation for the next step.
//
// rhs:      void(double t, const Vec& y, Vec& dydt)
// on_accept: bool(const DenseStep<Vec>&, Vec& y)
template <class Vec, class Rhs, class OnAccept>
void rk45_integrate(Rhs&& rhs, double t0, double t1, Vec y, const Rk45Options& opt,
                    OnAccept&& on_accept) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double d1 = -12715105075.0 / 11282082432.0,
                            d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0,
                            d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0,
                            d7 = 69997945.0 / 29380423.0;

    if (!(t1 > t0)) throw SolverError("rk45: t_span must be positive");
    const double span = t1 - t0;
    double h = opt.initial_step > 0.0 ? opt.initial_step
                                      : std::min(opt.max_step, span / 100.0);
    h = std::min(h, opt.max_step);
    const double h_min = span * 1e-14;

    double t = t0;
    Vec k1 = y, k2 = y, k3 = y, k4 = y, k5 = y, k6 = y, k7 = y, ynew = y, yerr = y;
    rhs(t, y, k1);
    bool k1_fresh = true;
    DenseStep<Vec> seg;

    for (std::size_t step = 0; step < opt.max_steps; ++step) {
        if (t1 - t <= span * 1e-13) return;
        if (h < h_min)
            throw SolverError("rk45: step size underflow at t = " + std::to_string(t) +
                              " (stiffness suspected)");
        h = std::min(h, t1 - t);
        h = std::min(h, opt.max_step);

        if (!k1_fresh) {
            rhs(t, y, k1);
            k1_fresh = true;
        }
        ynew = y + (h * a21) * k1;
        rhs(t + c2 * h, ynew, k2);
        ynew = y + h * (a31 * k1 + a32 * k2);
        rhs(t + c3 * h, ynew, k3);
        ynew = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        rhs(t + c4 * h, ynew, k4);
        ynew = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        rhs(t + c5 * h, ynew, k5);
        ynew = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        rhs(t + h, ynew, k6);
        ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        rhs(t + h, ynew, k7);  // FSAL

        yerr = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double err = detail::weighted_rms(yerr, y, ynew, opt.abs_tol, opt.rel_tol);

        if (detail::has_nonfinite(ynew) || !std::isfinite(err)) {
            // overflow inside a trial step: reject and retry shorter; the
            // h_min guard above turns persistent failures into an error
            h *= 0.25;
            continue;
        }

        if (err <= 1.0) {
            // accepted: build the dense interpolant before clamping
            seg.t0 = t;
            seg.h = h;
            seg.r1 = y;
            seg.r2 = ynew - y;
            seg.r3 = h * k1 - seg.r2;
            seg.r4 = seg.r2 - h * k7 - seg.r3;
            seg.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

            t += h;
            y = ynew;
            const bool modified = on_accept(seg, y);
            if (modified) {
                k1_fresh = false;
            } else {
                k1 = k7;  // FSAL reuse
                k1_fresh = true;
            }
            const double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            h *= std::min(5.0, std::max(0.2, fac));
        } else {
            const double fac = 0.9 * std::pow(err, -0.2);
            h *= std::max(0.1, fac);
        }
    }
    throw SolverError("rk45: exceeded maximum step count");
}

}  // namespace neuromem
