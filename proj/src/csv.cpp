#include "neuromem/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "neuromem/errors.hpp"

namespace neuromem {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open for writing: " + path);
    return f;
}

}  // namespace

void write_iv_csv(const std::string& path, const IvCurve& curve) {
    auto f = open_out(path);
    f << "V_volts,I_mA\n";
    for (std::size_t i = 0; i < curve.voltage.size(); ++i)
        f << format_double(curve.voltage[i]) << ',' << format_double(curve.current[i])
          << '\n';
}

IvCurve read_iv_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open: " + path);
    std::string line;
    if (!std::getline(f, line) || line.rfind("V_volts,I_mA", 0) != 0)
        throw ConfigError("bad IV csv header in " + path + " (expected V_volts,I_mA)");
    IvCurve curve;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ','))
            throw ConfigError("bad IV csv row: " + line);
        curve.voltage.push_back(std::stod(a));
        curve.current.push_back(std::stod(b));
    }
    return curve;
}

void write_trajectory_csv(const std::string& path, const Trajectory& tr) {
    auto f = open_out(path);
    f << "t_us,v_o,x1,x2,V_mem1,V_mem2,stim\n";
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        f << format_double(tr.t[i]) << ',' << format_double(tr.v[i]) << ','
          << format_double(tr.x1[i]) << ',' << format_double(tr.x2[i]) << ','
          << format_double(tr.vmem1[i]) << ',' << format_double(tr.vmem2[i]) << ','
          << format_double(tr.stim[i]) << '\n';
    }
}

void write_network_csv(const std::string& path, const NetworkTrajectory& tr) {
    auto f = open_out(path);
    f << "t_us";
    for (std::size_t n = 0; n < tr.neurons.size(); ++n)
        f << ",n" << n << "_v_o,n" << n << "_x1,n" << n << "_x2,n" << n << "_V_mem1,n"
          << n << "_V_mem2,n" << n << "_stim";
    f << '\n';
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        f << format_double(tr.t[i]);
        for (const auto& nt : tr.neurons) {
            f << ',' << format_double(nt.v[i]) << ',' << format_double(nt.x1[i]) << ','
              << format_double(nt.x2[i]) << ',' << format_double(nt.vmem1[i]) << ','
              << format_double(nt.vmem2[i]) << ',' << format_double(nt.stim[i]);
        }
        f << '\n';
    }
}

void write_complex_series_csv(const std::string& path, const std::vector<double>& t,
                              const std::vector<std::complex<double>>& v) {
    auto f = open_out(path);
    f << "t,re,im\n";
    for (std::size_t i = 0; i < t.size(); ++i)
        f << format_double(t[i]) << ',' << format_double(v[i].real()) << ','
          << format_double(v[i].imag()) << '\n';
}

void write_real_series_csv(const std::string& path, const std::vector<double>& t,
                           const std::vector<double>& v, const std::string& value_name) {
    auto f = open_out(path);
    f << "t," << value_name << '\n';
    for (std::size_t i = 0; i < t.size(); ++i)
        f << format_double(t[i]) << ',' << format_double(v[i]) << '\n';
}

void write_spectrum_csv(const std::string& path, const Spectrum& sp) {
    auto f = open_out(path);
    f << "freq_MHz,power,window=" << sp.window_name << '\n';
    for (std::size_t i = 0; i < sp.freq.size(); ++i)
        f << format_double(sp.freq[i]) << ',' << format_double(sp.power[i]) << '\n';
}

void write_rate_csv(const std::string& path, const RateCurve& rc) {
    auto f = open_out(path);
    f << "t_us,rate_kHz\n";
    for (std::size_t i = 0; i < rc.t.size(); ++i)
        f << format_double(rc.t[i]) << ',' << format_double(rc.rate[i]) << '\n';
}

void write_spikes_csv(const std::string& path, const SpikeTrain& train) {
    auto f = open_out(path);
    f << "spike_time_us\n";
    for (double t : train.times) f << format_double(t) << '\n';
}

void write_segments_csv(const std::string& path, const std::vector<Segment>& segs) {
    auto f = open_out(path);
    f << "t_start_us,t_end_us,mode,dwell_us\n";
    for (const auto& s : segs)
        f << format_double(s.t_start) << ',' << format_double(s.t_end) << ','
          << s.mode_label << ',' << format_double(s.dwell_time) << '\n';
}

void write_rho_snapshot(const std::string& path, const Eigen::MatrixXcd& rho, double t) {
    auto f = open_out(path);
    f << rho.rows() << ',' << format_double(t) << '\n';
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
        for (Eigen::Index j = 0; j < rho.cols(); ++j) {
            if (j) f << ',';
            f << format_double(rho(i, j).real()) << ',' << format_double(rho(i, j).imag());
        }
        f << '\n';
    }
}

}  // namespace neuromem
