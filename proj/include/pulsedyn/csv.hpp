#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pulsedyn/bifurcation.hpp"
#include "pulsedyn/errors.hpp"
#include "pulsedyn/impulsive.hpp"
#include "pulsedyn/periodic.hpp"

namespace pulsedyn {

/// 17-significant-digit decimal form: round-trips doubles exactly and keeps
/// repeated runs byte-identical.
inline std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << content;
    if (!out) throw ConfigError("write failed: " + path);
}

/// Columns x, r_omega, r_omega_prime, g, g_prime over a uniform grid on
/// [0, x_max]. g_prime at x = 0 is undefined and emitted as nan.
inline std::string grid_csv(const StroboscopicAnalyzer& an, int grid_points) {
    std::ostringstream os;
    os << "x,r_omega,r_omega_prime,g,g_prime\n";
    const double x_max = an.field().x_max();
    for (int i = 0; i < grid_points; ++i) {
        const double x =
            (i == grid_points - 1) ? x_max : x_max * i / static_cast<double>(grid_points - 1);
        const double gp = (x == 0.0) ? std::nan("") : an.g_prime(x);
        os << fmt_real(x) << ',' << fmt_real(an.r_omega(x)) << ','
           << fmt_real(an.r_omega_prime(x)) << ',' << fmt_real(an.g(x)) << ','
           << fmt_real(gp) << '\n';
    }
    return os.str();
}

inline std::string orbits_csv(const std::vector<PeriodicOrbit>& orbits) {
    std::ostringstream os;
    os << "lambda,x0,stability,residual,g_prime\n";
    for (const auto& o : orbits)
        os << fmt_real(o.lambda) << ',' << fmt_real(o.x0) << ',' << to_string(o.stability)
           << ',' << fmt_real(o.residual) << ',' << fmt_real(o.g_prime_value) << '\n';
    return os.str();
}

inline std::string sweep_csv(const SweepDiagram& diag) {
    std::ostringstream os;
    os << "lambda,x0,stability\n";
    for (const auto& p : diag.points)
        os << fmt_real(p.lambda) << ',' << fmt_real(p.x0) << ',' << to_string(p.stability)
           << '\n';
    return os.str();
}

inline std::string regime_csv(const RegimeTable& table) {
    std::ostringstream os;
    os << "lambda_lo,lambda_hi,probe,count,signature\n";
    for (const auto& row : table.rows) {
        os << fmt_real(row.lambda_lo) << ',' << fmt_real(row.lambda_hi) << ','
           << fmt_real(row.probe) << ',' << row.count() << ',';
        bool first = true;
        for (const auto s : row.signature()) {
            if (!first) os << ' ';
            os << to_string(s);
            first = false;
        }
        os << '\n';
    }
    return os.str();
}

inline std::string regime_text(const RegimeTable& table) {
    std::ostringstream os;
    os << "lambda interval                     orbits  signature\n";
    for (const auto& row : table.rows) {
        char lo[32], hi[32];
        std::snprintf(lo, sizeof(lo), "%.6g", row.lambda_lo);
        std::snprintf(hi, sizeof(hi), "%.6g", row.lambda_hi);
        char span[72];
        std::snprintf(span, sizeof(span), "(%s, %s)", lo, hi);
        char line[160];
        std::snprintf(line, sizeof(line), "%-36s%-8d", span, row.count());
        os << line;
        bool first = true;
        for (std::size_t i = 0; i < row.orbits.size(); ++i) {
            if (!first) os << ", ";
            os << to_string(row.orbits[i].stability) << "@" << fmt_real(row.orbits[i].x0);
            first = false;
        }
        os << '\n';
    }
    return os.str();
}

/// t, x, is_jump rows; each pulse time contributes a pre-jump and a
/// post-jump row, both flagged is_jump = 1.
inline std::string trajectory_csv(const Trajectory& traj) {
    std::ostringstream os;
    os << "t,x,is_jump\n";
    std::size_t jump_idx = 0;
    for (const auto& [t, x] : traj.samples) {
        if (jump_idx < traj.jumps.size() && traj.jumps[jump_idx].t_k == t &&
            traj.jumps[jump_idx].x_after == x) {
            os << fmt_real(t) << ',' << fmt_real(traj.jumps[jump_idx].x_before) << ",1\n";
            os << fmt_real(t) << ',' << fmt_real(x) << ",1\n";
            ++jump_idx;
        } else {
            os << fmt_real(t) << ',' << fmt_real(x) << ",0\n";
        }
    }
    return os.str();
}

inline std::string pulses_csv(double omega, const PulseSequence& seq) {
    std::ostringstream os;
    os << "k,t,x\n";
    for (std::size_t k = 0; k < seq.values.size(); ++k)
        os << (k + 1) << ',' << fmt_real(static_cast<double>(k + 1) * omega) << ','
           << fmt_real(seq.values[k]) << '\n';
    return os.str();
}

inline std::string omega_scan_csv(const OmegaScanReport& rep) {
    std::ostringstream os;
    os << "omega,orbit_present,x_tracked,fate\n";
    for (const auto& row : rep.rows) {
        os << fmt_real(row.omega) << ',' << (row.orbit_present ? 1 : 0) << ','
           << fmt_real(row.x_tracked) << ',';
        if (rep.omega2 && row.omega == *rep.omega2) os << to_string(rep.fate);
        os << '\n';
    }
    return os.str();
}

}  // namespace pulsedyn
