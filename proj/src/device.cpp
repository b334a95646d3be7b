#include "neuromem/device.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "neuromem/constants.hpp"
#include "neuromem/errors.hpp"

namespace neuromem {

namespace {

constexpr double kVEps = 1e-6;  // small-signal threshold [V]

double softplus(double z) {
    // log(1+e^z) without overflow
    return std::log1p(std::exp(-std::abs(z))) + std::max(z, 0.0);
}

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

void require(bool ok, const char* field) {
    if (!ok) throw ConfigError(std::string("invalid parameter: ") + field);
}

}  // namespace

void MemristorParams::validate() const {
    require(alpha > 0.0, "alpha");
    require(gamma > 0.0, "gamma");
    require(lambda >= 0.0, "lambda");
    require(tau > 0.0, "tau");
    require(eta2 > 0.0, "eta2");
    require(delta > 0.0, "delta");
    require(ion_periodicity > 0.0, "ion_periodicity");
    require(film_thickness > 0.0, "film_thickness");
    require(temperature > 0.0, "temperature");
    require(v_ref > 0.0, "v_ref");
    require(t_ref > 0.0, "t_ref");
}

void BarrierSpec::validate() const {
    require(height > 0.0, "height");
    require(thickness > 0.0, "thickness");
    require(junction_area > 0.0, "junction_area");
    require(current_scale > 0.0, "current_scale");
}

void SuperconductingParams::validate() const {
    require(critical_current > 0.0, "critical_current");
    require(sum_gap > 0.0, "sum_gap");
    require(quasiparticle_conductance > 0.0, "quasiparticle_conductance");
    require(subgap_conductance >= 0.0, "subgap_conductance");
    require(subgap_conductance <= quasiparticle_conductance, "subgap_conductance");
    require(gap_smoothing > 0.0, "gap_smoothing");
    require(state_suppression >= 0.0 && state_suppression <= 1.0, "state_suppression");
}

// --- chang conduction -------------------------------------------------------

double chang_current(double v, double x, const MemristorParams& p) {
    if (p.conduction == ConductionMode::ohmic)
        return small_signal_conductance(x, p) * v;
    return (1.0 - x) * p.alpha * (1.0 - std::exp(p.beta * v)) +
           x * p.gamma * std::sinh(p.delta * v);
}

double chang_didv(double v, double x, const MemristorParams& p) {
    if (p.conduction == ConductionMode::ohmic)
        return small_signal_conductance(x, p);
    return (1.0 - x) * p.alpha * (-p.beta) * std::exp(p.beta * v) +
           x * p.gamma * p.delta * std::cosh(p.delta * v);
}

double chang_didx(double v, double x, const MemristorParams& p) {
    (void)x;
    if (p.conduction == ConductionMode::ohmic)
        return (p.alpha * p.beta + p.gamma * p.delta) * v;
    return -p.alpha * (1.0 - std::exp(p.beta * v)) + p.gamma * std::sinh(p.delta * v);
}

double small_signal_conductance(double x, const MemristorParams& p) {
    return (1.0 - x) * p.alpha * (-p.beta) + x * p.gamma * p.delta;
}

double memristance(double v, double x, const MemristorParams& p) {
    if (std::abs(v) < kVEps || p.conduction == ConductionMode::ohmic) {
        const double g0 = small_signal_conductance(x, p);
        if (g0 <= 0.0)
            throw ConfigError("memristance: small-signal conductance G(0,x) <= 0 "
                              "(alpha*beta must be negative or x*gamma*delta dominant)");
        return 1.0 / g0;
    }
    return v / chang_current(v, x, p);
}

double memristance_dv(double v, double x, const MemristorParams& p) {
    if (p.conduction == ConductionMode::ohmic) return 0.0;
    if (std::abs(v) < kVEps) {
        // I = G0 V + c2 V^2 + ...  =>  dR/dV(0) = -c2/G0^2
        const double g0 = small_signal_conductance(x, p);
        const double c2 = -0.5 * (1.0 - x) * p.alpha * p.beta * p.beta;
        return -c2 / (g0 * g0);
    }
    const double i = chang_current(v, x, p);
    return (i - v * chang_didv(v, x, p)) / (i * i);
}

double memristance_dx(double v, double x, const MemristorParams& p) {
    if (std::abs(v) < kVEps || p.conduction == ConductionMode::ohmic) {
        const double g0 = small_signal_conductance(x, p);
        const double dg0 = p.alpha * p.beta + p.gamma * p.delta;
        return -dg0 / (g0 * g0);
    }
    const double i = chang_current(v, x, p);
    return -v * chang_didx(v, x, p) / (i * i);
}

// --- superconducting branch -------------------------------------------------

double sc_current(double v, double x, const SuperconductingParams& p) {
    const double vm = v * 1000.0;  // volts -> mV
    const double a = std::abs(vm);
    const double sgn = vm > 0.0 ? 1.0 : (vm < 0.0 ? -1.0 : 0.0);
    const double ic = p.critical_current * (1.0 - p.state_suppression * x);
    const double w = p.gap_smoothing;
    const double qp = (p.quasiparticle_conductance - p.subgap_conductance) * w *
                      (softplus((a - p.sum_gap) / w) - softplus(-p.sum_gap / w));
    return ic * std::tanh(vm / w) + p.subgap_conductance * vm + sgn * qp;
}

double sc_didv(double v, double x, const SuperconductingParams& p) {
    // derivative w.r.t. V in volts: d/dV = 1000 * d/dVm
    const double vm = v * 1000.0;
    const double a = std::abs(vm);
    const double ic = p.critical_current * (1.0 - p.state_suppression * x);
    const double w = p.gap_smoothing;
    const double th = std::tanh(vm / w);
    const double dqp = (p.quasiparticle_conductance - p.subgap_conductance) *
                       sigmoid((a - p.sum_gap) / w);
    return 1000.0 * (ic * (1.0 - th * th) / w + p.subgap_conductance + dqp);
}

double sc_didx(double v, double x, const SuperconductingParams& p) {
    (void)x;
    const double vm = v * 1000.0;
    return -p.critical_current * p.state_suppression * std::tanh(vm / p.gap_smoothing);
}

double sc_small_signal_conductance(double x, const SuperconductingParams& p) {
    const double ic = p.critical_current * (1.0 - p.state_suppression * x);
    const double w = p.gap_smoothing;
    const double dqp = (p.quasiparticle_conductance - p.subgap_conductance) *
                       sigmoid(-p.sum_gap / w);
    return 1000.0 * (ic / w + p.subgap_conductance + dqp);
}

double sc_memristance(double v, double x, const SuperconductingParams& p) {
    if (std::abs(v) < 1e-9) {
        const double g0 = sc_small_signal_conductance(x, p);
        if (g0 <= 0.0) throw ConfigError("sc_memristance: zero conductance at V=0");
        return 1.0 / g0;
    }
    return v / sc_current(v, x, p);
}

double sc_memristance_dv(double v, double x, const SuperconductingParams& p) {
    if (std::abs(v) < 1e-9) return 0.0;  // odd IV: R(V) has zero slope at 0
    const double i = sc_current(v, x, p);
    return (i - v * sc_didv(v, x, p)) / (i * i);
}

double sc_memristance_dx(double v, double x, const SuperconductingParams& p) {
    if (std::abs(v) < 1e-9) {
        const double g0 = sc_small_signal_conductance(x, p);
        const double dg0 = -1000.0 * p.critical_current * p.state_suppression / p.gap_smoothing;
        return -dg0 / (g0 * g0);
    }
    const double i = sc_current(v, x, p);
    return -v * sc_didx(v, x, p) / (i * i);
}

// --- state dynamics ----------------------------------------------------------

double ion_velocity_factor(double v, double temperature, const MemristorParams& p) {
    if (p.f_mode == IonVelocityMode::constant) return 1.0;
    const double kb = constants::k_boltzmann_eV;
    // field magnitude enters the hop-rate sinh; the sign of V does not make
    // retention negative
    const double arg = std::abs(v) / p.film_thickness * p.ion_periodicity /
                       (2.0 * kb * temperature);
    const double val = std::exp(-p.activation_energy / (kb * temperature)) * std::sinh(arg);
    const double ref_arg = p.v_ref / p.film_thickness * p.ion_periodicity /
                           (2.0 * kb * p.t_ref);
    const double norm = std::exp(-p.activation_energy / (kb * p.t_ref)) * std::sinh(ref_arg);
    return val / norm;
}

double state_derivative(double v, double x, double temperature, const MemristorParams& p) {
    const double f = ion_velocity_factor(v, temperature, p);
    return p.lambda * (p.eta1 * std::sinh(p.eta2 * v) - f * x / p.tau);
}

// --- NIN tunneling integral ---------------------------------------------------

namespace {

// 2*integral over z of kappa for a linear barrier profile with end heights
// h0, h1 above the electron energy (negative means over-barrier).
double wkb_exponent(double h0, double h1, double thickness) {
    const double k0 = constants::wkb_decay_per_nm;
    if (h0 <= 0.0 && h1 <= 0.0) return 0.0;
    if (h0 > 0.0 && h1 > 0.0) {
        const double s = std::sqrt(h0), t = std::sqrt(h1);
        // (h0^{3/2}-h1^{3/2})/(h0-h1) in the cancellation-stable form
        const double frac = (s * s + s * t + t * t) / (s + t);
        return 2.0 * k0 * (2.0 / 3.0) * thickness * frac;
    }
    // triangle: only the positive side contributes
    const double hi = std::max(h0, h1);
    const double lo = std::min(h0, h1);
    return 2.0 * k0 * (2.0 / 3.0) * thickness * hi * std::sqrt(hi) / (hi - lo);
}

double fermi(double e, double kt) {
    const double z = e / kt;
    if (z > 500.0) return 0.0;
    if (z < -500.0) return 1.0;
    return 1.0 / (1.0 + std::exp(z));
}

// transmission * occupation-difference integrand at energy e (midpoint Fermi
// convention: electrodes at +-V/2, barrier tilted between height+V/2 and
// height-V/2)
double tunnel_integrand(double e, double v, const BarrierSpec& b, double kt) {
    const double h0 = b.height + 0.5 * v - e;
    const double h1 = b.height - 0.5 * v - e;
    const double t = std::exp(-wkb_exponent(h0, h1, b.thickness));
    return t * (fermi(e - 0.5 * v, kt) - fermi(e + 0.5 * v, kt));
}

struct QuadState {
    int depth_limit_hits = 0;
};

double adaptive_simpson(double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth, QuadState& qs,
                        const BarrierSpec& bar, double v, double kt) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = tunnel_integrand(lm, v, bar, kt);
    const double frm = tunnel_integrand(rm, v, bar, kt);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0) {
        qs.depth_limit_hits++;
        return left + right + delta / 15.0;
    }
    if (std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, qs, bar, v, kt) +
           adaptive_simpson(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, qs, bar, v, kt);
}

}  // namespace

double nin_tunnel_current(double v, const BarrierSpec& b, double temperature) {
    b.validate();
    if (temperature <= 0.0) throw ConfigError("invalid parameter: temperature");
    if (v == 0.0) return 0.0;
    const double kt = constants::k_boltzmann_eV * temperature;
    // the window must cover both the barrier and the occupied bias window of
    // the symmetric-electrode convention
    const double window = b.height + 0.5 * std::abs(v) + 10.0 * kt;
    const double a0 = -window, b0 = window;
    // seed with a fixed coarse Simpson pass over panels so narrow thermal
    // features are not missed
    const int panels = 64;
    QuadState qs;
    double total = 0.0;
    double scale_est = 0.0;
    std::vector<double> f(panels + 1);
    for (int i = 0; i <= panels; ++i)
        f[i] = tunnel_integrand(a0 + (b0 - a0) * i / panels, v, b, kt);
    for (int i = 0; i < panels; ++i)
        scale_est = std::max(scale_est, std::abs(f[i]));
    const double tol = std::max(scale_est * (b0 - a0), 1e-300) * 1e-8;
    for (int i = 0; i < panels; ++i) {
        const double pa = a0 + (b0 - a0) * i / panels;
        const double pb = a0 + (b0 - a0) * (i + 1) / panels;
        const double pm = 0.5 * (pa + pb);
        const double fm = tunnel_integrand(pm, v, b, kt);
        const double whole = (pb - pa) / 6.0 * (f[i] + 4.0 * fm + f[i + 1]);
        total += adaptive_simpson(pa, pb, f[i], fm, f[i + 1], whole, tol / panels, 48, qs,
                                  b, v, kt);
    }
    if (qs.depth_limit_hits > 0)
        throw SolverError("nin_tunnel_current: quadrature failed to converge to 1e-6 "
                          "relative accuracy");
    return b.current_scale * b.junction_area * total;
}

// --- Fowler-Nordheim analysis --------------------------------------------------

namespace {

struct LinFit {
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y,
                  std::size_t lo, std::size_t hi) {
    const double n = double(hi - lo);
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = lo; i < hi; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    LinFit out;
    const double vx = sxx - sx * sx / n;
    const double vy = syy - sy * sy / n;
    const double cxy = sxy - sx * sy / n;
    if (vx <= 0.0) return out;
    out.slope = cxy / vx;
    out.intercept = (sy - out.slope * sx) / n;
    out.r2 = vy > 0.0 ? cxy * cxy / (vx * vy) : 1.0;
    return out;
}

}  // namespace

FnReport fn_analysis(const IvCurve& curve) {
    std::vector<std::pair<double, double>> pts;  // (1/V, ln(I/V^2)) sorted by 1/V
    double vmin_pos = std::numeric_limits<double>::max(), vmax_pos = 0.0;
    for (std::size_t i = 0; i < curve.voltage.size(); ++i) {
        const double v = curve.voltage[i];
        const double cur = curve.current[i];
        if (v <= 0.0 || cur <= 0.0) continue;
        pts.emplace_back(1.0 / v, std::log(cur / (v * v)));
        vmin_pos = std::min(vmin_pos, v);
        vmax_pos = std::max(vmax_pos, v);
    }
    if (pts.size() < 16)
        throw ConfigError("fn_analysis: need at least 16 samples with V > 0 and I > 0");
    std::sort(pts.begin(), pts.end());
    std::vector<double> u(pts.size()), y(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        u[i] = pts[i].first;
        y[i] = pts[i].second;
    }
    // grow a window from the high-V end (smallest 1/V)
    const std::size_t min_window = 6;
    FnReport rep;
    std::size_t best = 0;
    LinFit best_fit;
    for (std::size_t hi = min_window; hi <= u.size(); ++hi) {
        const LinFit fit = linear_fit(u, y, 0, hi);
        if (fit.r2 >= 0.995 && fit.slope < 0.0 && hi > best) {
            best = hi;
            best_fit = fit;
        }
    }
    rep.dt_v_min = vmin_pos;
    rep.dt_v_max = vmax_pos;
    if (best == 0) return rep;  // fe_detected = false
    rep.fe_detected = true;
    rep.fe_points = best;
    rep.fe_slope = best_fit.slope;
    rep.r_squared = best_fit.r2;
    rep.fe_v_min = 1.0 / u[best - 1];
    rep.fe_v_max = 1.0 / u[0];
    rep.dt_v_max = best < u.size() ? 1.0 / u[best] : vmin_pos;
    return rep;
}

IvCurve swept_iv(const MemristorParams& p, double v_max, double v_min, double rate,
                 double x0) {
    p.validate();
    if (rate <= 0.0) throw ConfigError("swept_iv: rate must be positive");
    if (!(v_max > 0.0) || !(v_min < 0.0))
        throw ConfigError("swept_iv: need v_max > 0 and v_min < 0");
    IvCurve curve;
    double x = std::min(1.0, std::max(0.0, x0));
    const double dv = 0.01;  // sample every 10 mV along the ramp
    const double dt_sample = dv / rate;
    // substep so the state equation stays well resolved
    const int sub = std::max(1, int(std::ceil(dt_sample * p.lambda / (0.1 * p.tau))) * 4);
    const double h = dt_sample / sub;
    auto leg = [&](double v0, double v1) {
        const int steps = std::max(2, int(std::abs(v1 - v0) / dv));
        for (int i = 0; i < steps; ++i) {
            const double v = v0 + (v1 - v0) * double(i) / double(steps - 1);
            for (int k = 0; k < sub; ++k) {
                const double k1 = state_derivative(v, x, p.temperature, p);
                const double xm = std::min(1.0, std::max(0.0, x + 0.5 * h * k1));
                const double k2 = state_derivative(v, xm, p.temperature, p);
                x = std::min(1.0, std::max(0.0, x + h * k2));
            }
            curve.voltage.push_back(v);
            curve.current.push_back(chang_current(v, x, p));
        }
    };
    leg(0.0, v_max);
    leg(v_max, v_min);
    leg(v_min, 0.0);
    return curve;
}

double coherence_length(double fermi_velocity, double mean_free_path, double temperature) {
    if (fermi_velocity <= 0.0 || mean_free_path <= 0.0 || temperature <= 0.0)
        throw ConfigError("coherence_length: inputs must be positive");
    const double diffusion = fermi_velocity * mean_free_path / 3.0;  // nm^2/ps
    return std::sqrt(diffusion * constants::hbar_over_kB_psK /
                     (2.0 * M_PI * temperature));
}

}  // namespace neuromem
