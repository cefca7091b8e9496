#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "frontlab/defects.hpp"
#include "frontlab/inverse.hpp"
#include "frontlab/kinkfit.hpp"
#include "frontlab/pde.hpp"

namespace frontlab {

/// Locale-independent shortest representation at 12 significant digits.
inline std::string format_double(double v, int precision = 12) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, precision);
    if (res.ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return std::string(buf, res.ptr);
}

/// Write a file atomically: stream into <path>.tmp, then rename over path.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

/// Trajectory CSV: t,x0,w,speed,fit_error with the speed column empty on
/// the first and last rows (centered differences drop the endpoints).
inline std::string trajectory_csv(const FrontTrajectory& traj) {
    std::string out = "t,x0,w,speed,fit_error\n";
    const std::vector<double> v = traj.speed();
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out += format_double(traj.t[i]);
        out += ',';
        out += format_double(traj.x0[i]);
        out += ',';
        out += format_double(traj.w[i]);
        out += ',';
        if (i >= 1 && i + 1 < traj.size()) out += format_double(v[i - 1]);
        out += ',';
        out += format_double(traj.fit_error[i]);
        out += '\n';
    }
    return out;
}

/// Field snapshot CSV: x,u.
inline std::string field_csv(const FieldState& state) {
    std::string out = "x,u\n";
    for (std::size_t k = 0; k < state.u.size(); ++k) {
        out += format_double(state.grid.center(static_cast<int>(k)));
        out += ',';
        out += format_double(state.u[k]);
        out += '\n';
    }
    return out;
}

/// Snapshot file name, time to 6 significant digits.
inline std::string field_filename(double t) { return "field_t" + format_double(t, 6) + ".csv"; }

/// Topography CSV: x0,s_est[,s_true].
inline std::string topography_csv(const TopographyEstimate& est, const DefectSpec* truth) {
    std::string out = truth ? "x0,s_est,s_true\n" : "x0,s_est\n";
    for (std::size_t i = 0; i < est.x0.size(); ++i) {
        out += format_double(est.x0[i]);
        out += ',';
        out += format_double(est.s_est[i]);
        if (truth) {
            out += ',';
            out += format_double(eval_defect(*truth, est.x0[i]));
        }
        out += '\n';
    }
    return out;
}

/// One row of the PDE-vs-CV aligned comparison.
struct CompareRow {
    double x0;
    double w_pde;
    double w_cv;
    double speed_pde;
    double speed_cv;
};

inline std::string compare_csv(const std::vector<CompareRow>& rows) {
    std::string out = "x0,w_pde,w_cv,speed_pde,speed_cv\n";
    for (const auto& r : rows) {
        out += format_double(r.x0);
        out += ',';
        out += format_double(r.w_pde);
        out += ',';
        out += format_double(r.w_cv);
        out += ',';
        out += format_double(r.speed_pde);
        out += ',';
        out += format_double(r.speed_cv);
        out += '\n';
    }
    return out;
}

/// Align two trajectories on the front position: for every interior PDE
/// sample whose x0 lies inside the strictly increasing overlap of both
/// position ranges, interpolate the CV width and speed at that x0. This is
/// the (x0, w) comparison the reduced models are judged on.
inline std::vector<CompareRow> align_by_position(const FrontTrajectory& pde,
                                                 const FrontTrajectory& cv) {
    std::vector<CompareRow> rows;
    const std::vector<double> v_pde = pde.speed();
    const std::vector<double> v_cv = cv.speed();
    if (v_pde.empty() || v_cv.empty()) return rows;

    // longest strictly increasing prefix of the cv interior samples
    std::size_t cv_end = 1;  // exclusive, counts interior samples
    while (cv_end < v_cv.size() && cv.x0[cv_end + 1] > cv.x0[cv_end]) ++cv_end;

    auto interp = [&](double x, double& w_out, double& s_out) -> bool {
        if (x < cv.x0[1] || x > cv.x0[cv_end]) return false;
        std::size_t lo = 1, hi = cv_end;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (cv.x0[mid] <= x ? lo : hi) = mid;
        }
        const double span = cv.x0[hi] - cv.x0[lo];
        const double f = span > 0.0 ? (x - cv.x0[lo]) / span : 0.0;
        w_out = cv.w[lo] + f * (cv.w[hi] - cv.w[lo]);
        s_out = v_cv[lo - 1] + f * (v_cv[hi - 1] - v_cv[lo - 1]);
        return true;
    };

    double prev_x = -1e300;
    for (std::size_t i = 0; i < v_pde.size(); ++i) {
        const std::size_t j = i + 1;
        const double x = pde.x0[j];
        if (x <= prev_x) break;  // stall or fit jitter: stop at the monotone prefix
        double w_cv_i, s_cv_i;
        if (!interp(x, w_cv_i, s_cv_i)) continue;
        rows.push_back({x, pde.w[j], w_cv_i, v_pde[i], s_cv_i});
        prev_x = x;
    }
    return rows;
}

}  // namespace frontlab
