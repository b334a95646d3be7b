#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "neuromem/analysis.hpp"
#include "neuromem/device.hpp"
#include "neuromem/neuron.hpp"
#include "neuromem/network.hpp"

namespace neuromem {

// All numeric output uses round-trippable "%.17g" formatting so identical
// runs produce identical bytes.
std::string format_double(double v);

void write_iv_csv(const std::string& path, const IvCurve& curve);
IvCurve read_iv_csv(const std::string& path);

// header: t_us,v_o,x1,x2,V_mem1,V_mem2,stim
void write_trajectory_csv(const std::string& path, const Trajectory& tr);

// header: t_us,n0_v_o,n0_x1,n0_x2,n0_V_mem1,n0_V_mem2,n0_stim,n1_v_o,...
void write_network_csv(const std::string& path, const NetworkTrajectory& tr);

// header: t,re,im  (im = 0 for real series)
void write_complex_series_csv(const std::string& path, const std::vector<double>& t,
                              const std::vector<std::complex<double>>& v);
void write_real_series_csv(const std::string& path, const std::vector<double>& t,
                           const std::vector<double>& v, const std::string& value_name);

void write_spectrum_csv(const std::string& path, const Spectrum& sp);
void write_rate_csv(const std::string& path, const RateCurve& rc);
void write_spikes_csv(const std::string& path, const SpikeTrain& train);
void write_segments_csv(const std::string& path, const std::vector<Segment>& segs);

// row-major complex pairs with a small header: first line "dim,time"
void write_rho_snapshot(const std::string& path, const Eigen::MatrixXcd& rho, double t);

}  // namespace neuromem
