#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frontlab/catalog.hpp"
#include "frontlab/config.hpp"
#include "frontlab/csv.hpp"
#include "frontlab/cv.hpp"
#include "frontlab/inverse.hpp"
#include "frontlab/kinkfit.hpp"
#include "frontlab/pde.hpp"
#include "frontlab/pinning.hpp"

namespace frontlab {

/// Command-line overrides applied on top of a config.
struct RunOverrides {
    std::string out_dir;
    int n = 0;          // 0 = keep config value
    double t_max = 0.0; // 0 = keep config value
};

/// Everything a run produced: output file contents (deterministic for a
/// fixed config), the summary key-value record, and in-memory artifacts
/// for tests and callers.
struct RunArtifacts {
    std::map<std::string, std::string> files;
    std::vector<std::pair<std::string, std::string>> summary;

    FrontTrajectory pde_traj;
    FrontTrajectory cv_traj;
    std::vector<CompareRow> aligned;
    std::optional<TopographyEstimate> topography;
    std::optional<TopographyResiduals> residuals;
    std::optional<ThresholdResult> threshold;
    std::optional<PinningVerdict> verdict;
    bool verdict_undecided = false;
    double max_fit_error = 0.0;
    double max_width_dev_rel = 0.0;

    void add(const std::string& key, const std::string& value) {
        summary.emplace_back(key, value);
    }
    void add(const std::string& key, double value) { add(key, format_double(value)); }
};

namespace detail {

inline double series_max(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

inline FieldState initial_field(const ExperimentConfig& cfg) {
    return kink_field(cfg.grid, cfg.init_x0, cfg.initial_width());
}

inline void attach_verdict(RunArtifacts& art, const ExperimentConfig& cfg,
                           const FrontTrajectory& traj) {
    const double free_speed = homogeneous_speed(left_level(cfg.defect), cfg.reaction.a);
    try {
        art.verdict =
            detect_pinning(traj, free_speed, defect_extent(cfg.defect), defect_center(cfg.defect));
        art.add("pinned", art.verdict->pinned ? "true" : "false");
        art.add("x0_final", art.verdict->x0_final);
        art.add("w_final", art.verdict->w_final);
        art.add("t_decided", art.verdict->t_decided);
    } catch (const PinningUndecided&) {
        art.verdict_undecided = true;
        art.add("pinned", "undecided");
    }
}

inline void attach_terminal(RunArtifacts& art, const FrontTrajectory& traj) {
    art.add("t_end", traj.t.back());
    art.add("x0_end", traj.x0.back());
    art.add("w_end", traj.w.back());
}

inline FrontTrajectory pde_trajectory(const ExperimentConfig& cfg,
                                      std::vector<FieldState>* states_out = nullptr) {
    const std::vector<FieldState> states =
        integrate(initial_field(cfg), cfg.defect, cfg.reaction, cfg.solver);
    FrontTrajectory traj = trajectory(states);
    if (states_out) *states_out = states;
    return traj;
}

/// Chunked integration with early stopping for threshold/sweep probes:
/// grow the trajectory 100 time units at a time and stop as soon as the
/// pinning rule fires. The chunk boundary grid is fixed, so a probe's
/// result does not depend on when it stops.
struct ProbeOutcome {
    PinningVerdict verdict;
    FrontTrajectory traj;
    bool undecided = false;
};

inline ProbeOutcome probe_pinning(const ExperimentConfig& cfg, RunMode model) {
    const double free_speed = homogeneous_speed(left_level(cfg.defect), cfg.reaction.a);
    const double extent = defect_extent(cfg.defect);
    const double center = defect_center(cfg.defect);
    const double chunk = std::max(cfg.solver.dt_out, 100.0);

    ProbeOutcome out{};
    FrontTrajectory& traj = out.traj;
    KinkState warm{};
    bool have_warm = false;

    std::optional<FieldState> field;
    KinkState cv_state{cfg.init_x0, cfg.initial_width()};
    CvModel cv_model = model == RunMode::Cv ? make_cv_model(cfg.cv_kind, cfg.defect)
                                            : CvModel{AdiabaticModel{ConstantDefect{1.0}}};
    if (model == RunMode::Pde) field = initial_field(cfg);

    double t_done = 0.0;
    while (t_done < cfg.solver.t_max - 1e-9) {
        SolverConfig piece = cfg.solver;
        piece.t_max = std::min(chunk, cfg.solver.t_max - t_done);

        if (model == RunMode::Pde) {
            std::vector<FieldState> states = integrate(*field, cfg.defect, cfg.reaction, piece);
            for (std::size_t i = (t_done > 0.0 ? 1 : 0); i < states.size(); ++i) {
                if (!have_warm) {
                    warm = initial_guess(states[i]);
                    have_warm = true;
                }
                const FitResult r = fit(states[i], warm);
                warm = r.state;
                traj.t.push_back(t_done + states[i].t);
                traj.x0.push_back(r.state.x0);
                traj.w.push_back(r.state.w);
                traj.fit_error.push_back(r.error);
            }
            field = std::move(states.back());
            field->t = 0.0;  // chunk-local time
        } else {
            const FrontTrajectory piece_traj =
                integrate_cv(cv_model, cv_state, cfg.reaction.a, piece);
            for (std::size_t i = (t_done > 0.0 ? 1 : 0); i < piece_traj.size(); ++i) {
                traj.t.push_back(t_done + piece_traj.t[i]);
                traj.x0.push_back(piece_traj.x0[i]);
                traj.w.push_back(piece_traj.w[i]);
                traj.fit_error.push_back(0.0);
            }
            cv_state = KinkState{piece_traj.x0.back(), piece_traj.w.back()};
        }
        t_done += piece.t_max;

        try {
            out.verdict = detect_pinning(traj, free_speed, extent, center);
            return out;
        } catch (const PinningUndecided&) {
            // keep integrating
        }
    }
    out.undecided = true;
    return out;
}

}  // namespace detail

/// Run one experiment. Throws ValidationError before any work when the
/// config is invalid; runtime failures carry the failing stage in the
/// message. The returned artifacts are deterministic for a fixed config.
inline RunArtifacts run_experiment(const ExperimentConfig& cfg) {
    RunArtifacts art;
    art.add("name", cfg.name);
    art.add("mode", run_mode_name(cfg.mode));
    art.add("defect", defect_kind_name(cfg.defect));
    art.add("a", cfg.reaction.a);

    switch (cfg.mode) {
        case RunMode::Pde: {
            std::vector<FieldState> states;
            art.pde_traj = detail::pde_trajectory(cfg, cfg.snapshots ? &states : nullptr);
            art.files["trajectory.csv"] = trajectory_csv(art.pde_traj);
            for (const FieldState& st : states) art.files[field_filename(st.t)] = field_csv(st);
            art.max_fit_error = detail::series_max(art.pde_traj.fit_error);
            art.add("max_fit_error", art.max_fit_error);
            detail::attach_terminal(art, art.pde_traj);
            detail::attach_verdict(art, cfg, art.pde_traj);
            break;
        }
        case RunMode::Cv: {
            const CvModel model = make_cv_model(cfg.cv_kind, cfg.defect);
            art.cv_traj = integrate_cv(model, {cfg.init_x0, cfg.initial_width()}, cfg.reaction.a,
                                       cfg.solver);
            art.files["trajectory.csv"] = trajectory_csv(art.cv_traj);
            detail::attach_terminal(art, art.cv_traj);
            detail::attach_verdict(art, cfg, art.cv_traj);
            break;
        }
        case RunMode::Compare: {
            std::vector<FieldState> states;
            art.pde_traj = detail::pde_trajectory(cfg, cfg.snapshots ? &states : nullptr);
            for (const FieldState& st : states) art.files[field_filename(st.t)] = field_csv(st);
            art.max_fit_error = detail::series_max(art.pde_traj.fit_error);

            // start the reduced model from the first fitted snapshot
            const CvModel model = make_cv_model(cfg.cv_kind, cfg.defect);
            const KinkState cv_init{art.pde_traj.x0.front(), art.pde_traj.w.front()};
            art.cv_traj = integrate_cv(model, cv_init, cfg.reaction.a, cfg.solver);

            art.aligned = align_by_position(art.pde_traj, art.cv_traj);
            double w_dev = 0.0, s_dev = 0.0;
            for (const CompareRow& row : art.aligned) {
                w_dev = std::max(w_dev, std::abs(row.w_cv - row.w_pde) / row.w_pde);
                s_dev = std::max(s_dev, std::abs(row.speed_cv - row.speed_pde));
            }
            art.max_width_dev_rel = w_dev;
            art.files["trajectory_pde.csv"] = trajectory_csv(art.pde_traj);
            art.files["trajectory_cv.csv"] = trajectory_csv(art.cv_traj);
            art.files["compare.csv"] = compare_csv(art.aligned);
            art.add("max_fit_error", art.max_fit_error);
            art.add("aligned_samples", static_cast<double>(art.aligned.size()));
            art.add("max_width_dev_rel", w_dev);
            art.add("max_speed_dev_abs", s_dev);
            detail::attach_terminal(art, art.pde_traj);
            break;
        }
        case RunMode::Threshold: {
            auto probe = [&](double amplitude) -> PinningVerdict {
                ExperimentConfig p = cfg;
                set_parameter(p, cfg.threshold_parameter, amplitude);
                const detail::ProbeOutcome out = detail::probe_pinning(p, cfg.threshold_model);
                art.max_fit_error =
                    std::max(art.max_fit_error, detail::series_max(out.traj.fit_error));
                if (out.undecided) throw PinningUndecided();
                return out.verdict;
            };
            art.threshold = find_threshold(probe, cfg.threshold_lo, cfg.threshold_hi);

            std::string log = "amplitude,pinned,x0_final,w_final,t_decided\n";
            for (const ThresholdProbe& p : art.threshold->probes) {
                log += format_double(p.amplitude);
                log += p.verdict.pinned ? ",true," : ",false,";
                log += format_double(p.verdict.x0_final);
                log += ',';
                log += format_double(p.verdict.w_final);
                log += ',';
                log += format_double(p.verdict.t_decided);
                log += '\n';
            }
            art.files["threshold.csv"] = log;
            art.add("max_fit_error", art.max_fit_error);
            art.add("parameter", cfg.threshold_parameter);
            art.add("critical", art.threshold->critical);
            art.add("bracket_lo", art.threshold->bracket_lo);
            art.add("bracket_hi", art.threshold->bracket_hi);
            art.add("probes", static_cast<double>(art.threshold->probes.size()));
            // point-defect mass equivalent of the critical amplitude
            double measured_beta = std::nan("");
            if (cfg.threshold_parameter == "defect.s1") {
                ExperimentConfig crit = cfg;
                set_parameter(crit, "defect.s1", art.threshold->critical);
                measured_beta = dirac_equivalent(crit.defect).beta;
            } else if (cfg.threshold_parameter == "defect.beta") {
                measured_beta = art.threshold->critical;
            }
            if (!std::isnan(measured_beta)) art.add("beta_critical", measured_beta);

            // analytic criterion next to the measured threshold (rightward
            // fronts only; the closed forms assume a < 1/2)
            if (cfg.reaction.a < 0.5) {
                const double alpha = left_level(cfg.defect);
                const PinningAnalysis an = analyze(cfg.reaction.a, alpha);
                const std::string family =
                    (cfg.threshold_model == RunMode::Pde ? "pde-" : "cv-") +
                    defect_kind_name(cfg.defect);
                std::string report =
                    "a,alpha,r,z_min,min_R,beta_c,x0_pin,w_pin,model,measured_critical,"
                    "measured_beta\n";
                report += format_double(cfg.reaction.a) + ',' + format_double(alpha) + ',' +
                          format_double(an.r) + ',' + format_double(an.z_min) + ',' +
                          format_double(an.min_R) + ',' + format_double(an.beta_c) + ',' +
                          format_double(an.x0_pin) + ',' + format_double(an.w_pin) + ',' + family +
                          ',' + format_double(art.threshold->critical) + ',' +
                          (std::isnan(measured_beta) ? "" : format_double(measured_beta)) + '\n';
                art.files["pinning-report.csv"] = report;
            }
            break;
        }
        case RunMode::Invert: {
            art.pde_traj = detail::pde_trajectory(cfg);
            art.max_fit_error = detail::series_max(art.pde_traj.fit_error);
            TopographyEstimate est =
                reconstruct(art.pde_traj, cfg.reaction.a, cfg.smooth_window);
            est.source = cfg.name;
            art.residuals = residual(est, cfg.defect);
            art.topography = std::move(est);
            art.files["trajectory.csv"] = trajectory_csv(art.pde_traj);
            art.files["topography.csv"] = topography_csv(*art.topography, &cfg.defect);
            art.add("max_fit_error", art.max_fit_error);
            art.add("samples", static_cast<double>(art.topography->x0.size()));
            art.add("monotone", art.topography->monotone ? "true" : "false");
            art.add("residual_sup_rel", art.residuals->sup_norm_rel);
            art.add("residual_l2_rel", art.residuals->l2_rel);
            break;
        }
        case RunMode::Sweep: {
            const int steps = cfg.sweep_steps;
            std::vector<double> values(static_cast<std::size_t>(steps));
            for (int i = 0; i < steps; ++i)
                values[static_cast<std::size_t>(i)] =
                    cfg.sweep_lo + (cfg.sweep_hi - cfg.sweep_lo) * i / (steps - 1);

            std::vector<std::future<detail::ProbeOutcome>> futures;
            futures.reserve(values.size());
            for (double v : values) {
                futures.push_back(std::async(std::launch::async, [&cfg, v]() {
                    ExperimentConfig p = cfg;
                    set_parameter(p, cfg.sweep_parameter, v);
                    return detail::probe_pinning(p, cfg.sweep_mode);
                }));
            }
            std::string rows = "value,pinned,x0_final,w_final,t_decided,max_fit_error\n";
            int pinned_count = 0;
            for (std::size_t i = 0; i < futures.size(); ++i) {
                const detail::ProbeOutcome out = futures[i].get();
                rows += format_double(values[i]);
                if (out.undecided) {
                    rows += ",undecided,";
                    rows += format_double(out.traj.x0.back());
                    rows += ',';
                    rows += format_double(out.traj.w.back());
                    rows += ",,";
                } else {
                    rows += out.verdict.pinned ? ",true," : ",false,";
                    if (out.verdict.pinned) ++pinned_count;
                    rows += format_double(out.verdict.x0_final);
                    rows += ',';
                    rows += format_double(out.verdict.w_final);
                    rows += ',';
                    rows += format_double(out.verdict.t_decided);
                    rows += ',';
                }
                rows += format_double(detail::series_max(out.traj.fit_error));
                rows += '\n';
            }
            art.files["sweep.csv"] = rows;
            art.add("parameter", cfg.sweep_parameter);
            art.add("steps", static_cast<double>(steps));
            art.add("pinned_count", static_cast<double>(pinned_count));
            break;
        }
        case RunMode::Sources: {
            std::string rows = "z,source_r,source_r2,heaviside_source_1,heaviside_source_2\n";
            const double a = cfg.reaction.a;
            const long count = static_cast<long>(
                std::floor((cfg.sources_z_max - cfg.sources_z_min) / cfg.sources_dz + 1e-9));
            for (long i = 0; i <= count; ++i) {
                const double z = cfg.sources_z_min + cfg.sources_dz * static_cast<double>(i);
                rows += format_double(z);
                rows += ',';
                rows += format_double(source_R(z, a));
                rows += ',';
                rows += format_double(source_R2(z, a));
                rows += ',';
                rows += format_double(heaviside_source_1(z, a));
                rows += ',';
                rows += format_double(heaviside_source_2(z, a));
                rows += '\n';
            }
            art.files["sources.csv"] = rows;
            art.add("samples", static_cast<double>(count + 1));
            break;
        }
    }
    return art;
}

inline ExperimentConfig apply_overrides(ExperimentConfig cfg, const RunOverrides& ov) {
    if (ov.n > 0) cfg.grid.n = ov.n;
    if (ov.t_max > 0.0) cfg.solver.t_max = ov.t_max;
    if (!ov.out_dir.empty()) cfg.out_dir = ov.out_dir;
    return cfg;
}

/// Run an experiment and write its outputs (CSV files plus summary.txt)
/// under the output directory. Returns the artifacts.
inline RunArtifacts run_and_write(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    RunArtifacts art = run_experiment(cfg);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::filesystem::path dir =
        cfg.out_dir.empty() ? std::filesystem::path("out") / cfg.name
                            : std::filesystem::path(cfg.out_dir);
    for (const auto& [name, content] : art.files) write_file_atomic(dir / name, content);

    std::string summary;
    for (const auto& [key, value] : art.summary) summary += key + " = " + value + "\n";
    summary += "wall_time_s = " + format_double(wall, 4) + "\n";
    write_file_atomic(dir / "summary.txt", summary);
    return art;
}

}  // namespace frontlab
