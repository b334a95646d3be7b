#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace neuromem {

enum class IonVelocityMode { constant, arrhenius_sinh };
enum class ConductionMode { chang, ohmic };

// Memristive device constants for the warm (ionic drift-diffusion) regime.
// alpha/gamma are current prefactors [mA], beta/delta exponents [1/V];
// lambda/eta1/eta2/tau govern the state equation. The Arrhenius block
// (activation energy, ion periodicity, film thickness, temperature and the
// normalization reference point) is only used when f_mode == arrhenius_sinh.
struct MemristorParams {
    double alpha = 0.02;        // mA
    double beta = -3.0;         // 1/V
    double gamma = 0.2;         // mA
    double delta = 5.0;         // 1/V
    double lambda = 1.0;        // state-rate prefactor [1/us]
    double eta1 = 3e-4;         // drive prefactor
    double eta2 = 3.0;          // 1/V
    double tau = 5.0;           // retention constant [us]
    double activation_energy = 0.35;  // U_a [eV]
    double ion_periodicity = 0.25;    // a [nm]
    double film_thickness = 4.2;      // oxide thickness [nm]; sets E = V/thickness
    double temperature = 300.0;       // K
    double v_ref = 0.5;         // normalization point for arrhenius_sinh [V]
    double t_ref = 300.0;       // K
    IonVelocityMode f_mode = IonVelocityMode::constant;
    ConductionMode conduction = ConductionMode::chang;

    void validate() const;  // throws ConfigError naming the offending field
};

struct MemristorState {
    double x = 0.0;  // dimensionless, clamped to [0,1] by integrators
};

// Tunneling barrier geometry for the NIN current integral.
struct BarrierSpec {
    double height = 2.2;        // eV
    double thickness = 4.2;     // nm
    double junction_area = 1.0; // nm^2
    double current_scale = 1.0; // absorbed DOS/prefactor constant [mA/(nm^2 eV)]

    void validate() const;
};

// Static IV of the superconducting junction branch. Voltages in mV,
// currents in mA, conductances in mA/mV.
struct SuperconductingParams {
    double critical_current = 0.1;      // I_c [mA]
    double sum_gap = 0.31;              // Delta [mV]
    double quasiparticle_conductance = 2.0;  // G_qp [mA/mV]
    double subgap_conductance = 0.1;    // G_sg [mA/mV]
    double gap_smoothing = 0.02;        // w [mV]
    double state_suppression = 0.5;     // kappa: I_c_eff = I_c*(1 - kappa*x)

    void validate() const;
};

struct IvCurve {
    std::vector<double> voltage;  // V
    std::vector<double> current;  // mA
};

// --- conduction laws ------------------------------------------------------

// Hyperbolic conduction law: I = (1-x)*alpha*(1-e^{beta V}) + x*gamma*sinh(delta V)
double chang_current(double v, double x, const MemristorParams& p);
double chang_didv(double v, double x, const MemristorParams& p);
double chang_didx(double v, double x, const MemristorParams& p);

// Small-signal conductance dI/dV at V=0 [mA/V]; > 0 required for a usable deck.
double small_signal_conductance(double x, const MemristorParams& p);

// Mem-resistance R = V/I [kOhm] with the analytic V->0 limit 1/G(0,x).
// Throws ConfigError when G(0,x) <= 0.
double memristance(double v, double x, const MemristorParams& p);
double memristance_dv(double v, double x, const MemristorParams& p);
double memristance_dx(double v, double x, const MemristorParams& p);

// Superconducting branch: supercurrent tanh knee + subgap conductance +
// smooth quasiparticle crossover at the sum gap. Takes volts, returns mA.
double sc_current(double v, double x, const SuperconductingParams& p);
double sc_didv(double v, double x, const SuperconductingParams& p);
double sc_didx(double v, double x, const SuperconductingParams& p);
double sc_small_signal_conductance(double x, const SuperconductingParams& p);
double sc_memristance(double v, double x, const SuperconductingParams& p);
double sc_memristance_dv(double v, double x, const SuperconductingParams& p);
double sc_memristance_dx(double v, double x, const SuperconductingParams& p);

// --- state dynamics -------------------------------------------------------

// Temperature/field factor on the retention term. arrhenius_sinh uses
// |V|/thickness as the field magnitude and normalizes to 1 at (v_ref, t_ref).
double ion_velocity_factor(double v, double temperature, const MemristorParams& p);

// dx/dt = lambda*(eta1*sinh(eta2 V) - f(V,T)*x/tau)
double state_derivative(double v, double x, double temperature, const MemristorParams& p);

// --- tunneling ------------------------------------------------------------

// NIN tunneling current: constant-DOS integral of the WKB transmission
// through a trapezoidal barrier tilted by V (midpoint energy convention,
// exactly odd in V). Adaptive quadrature; throws SolverError when the
// refinement limit is hit before 1e-6 relative accuracy.
double nin_tunnel_current(double v, const BarrierSpec& b, double temperature);

struct FnReport {
    bool fe_detected = false;
    double fe_slope = 0.0;       // slope of ln(I/V^2) vs 1/V in the FE window
    double fe_v_min = 0.0;       // FE window in volts [fe_v_min, fe_v_max]
    double fe_v_max = 0.0;
    double dt_v_min = 0.0;       // remaining (direct-tunneling) region
    double dt_v_max = 0.0;
    double r_squared = 0.0;
    std::size_t fe_points = 0;
};

// Fowler-Nordheim analysis of a positive-V sweep: transforms to
// (1/V, ln(I/V^2)) and grows the largest high-V window whose linear fit has
// R^2 >= 0.995 and negative slope. Needs >= 16 samples with V > 0.
FnReport fn_analysis(const IvCurve& curve);

// Triangular sweep 0 -> v_max -> v_min -> 0 at the given rate [V/us] with the
// state equation integrated along the ramp; the state lag opens the pinched
// hysteresis loop. x0 is the starting state.
IvCurve swept_iv(const MemristorParams& p, double v_max, double v_min, double rate,
                 double x0);

// --- proximity effect -----------------------------------------------------

// xi_n = sqrt(D*hbar/(2 pi k_B T)), D = v_f*l_n/3. Inputs nm/ps, nm, K; returns nm.
double coherence_length(double fermi_velocity, double mean_free_path, double temperature);

}  // namespace neuromem
