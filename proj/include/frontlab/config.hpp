#pragma once

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "frontlab/cv.hpp"
#include "frontlab/defects.hpp"
#include "frontlab/ode.hpp"
#include "frontlab/pde.hpp"

namespace frontlab {

enum class RunMode { Pde, Cv, Compare, Threshold, Invert, Sweep, Sources };

inline const char* run_mode_name(RunMode m) {
    switch (m) {
        case RunMode::Pde: return "pde";
        case RunMode::Cv: return "cv";
        case RunMode::Compare: return "compare";
        case RunMode::Threshold: return "pinning-threshold";
        case RunMode::Invert: return "invert";
        case RunMode::Sweep: return "sweep";
        case RunMode::Sources: return "sources";
    }
    return "?";
}

/// A fully validated experiment description.
struct ExperimentConfig {
    std::string name = "experiment";
    RunMode mode = RunMode::Pde;
    DefectSpec defect = ConstantDefect{0.3};
    ReactionParams reaction{0.3};
    Grid grid{-100.0, 100.0, 4000};
    SolverConfig solver{1e-8, 1e-8, 300.0, 1.0, 0.0};
    CvKind cv_kind = CvKind::Adiabatic;
    double init_x0 = -20.0;
    double init_w = 0.0;  // 0 = equilibrium width of the left level
    bool snapshots = false;
    std::string out_dir;  // empty = out/<name>

    // pinning-threshold mode
    std::string threshold_parameter;
    double threshold_lo = 0.0;
    double threshold_hi = 0.0;
    RunMode threshold_model = RunMode::Pde;  // Pde or Cv

    // sweep mode
    std::string sweep_parameter;
    double sweep_lo = 0.0;
    double sweep_hi = 0.0;
    int sweep_steps = 0;
    RunMode sweep_mode = RunMode::Pde;  // Pde or Cv

    // invert mode
    int smooth_window = 0;

    // sources mode
    double sources_z_min = -10.0;
    double sources_z_max = 10.0;
    double sources_dz = 0.01;

    double initial_width() const {
        return init_w > 0.0 ? init_w : homogeneous_width(left_level(defect));
    }
};

/// Violations found while building a config; empty means valid.
struct ConfigResult {
    std::optional<ExperimentConfig> config;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Thrown by the runner when a config fails validation.
struct ValidationError : std::runtime_error {
    std::vector<std::string> violations;
    explicit ValidationError(std::vector<std::string> v)
        : std::runtime_error("config validation failed"), violations(std::move(v)) {}
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Parse flat `key = value` text (with # comments) into a key-value map.
/// Duplicate keys are reported through the violations list.
inline std::map<std::string, std::string> parse_kv(const std::string& text,
                                                   std::vector<std::string>* violations = nullptr) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string trimmed = detail::trim(line);
        if (trimmed.empty()) continue;
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos) {
            if (violations)
                violations->push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        const std::string key = detail::trim(trimmed.substr(0, eq));
        const std::string value = detail::trim(trimmed.substr(eq + 1));
        if (key.empty() || value.empty()) {
            if (violations)
                violations->push_back("line " + std::to_string(lineno) + ": empty key or value");
            continue;
        }
        if (!kv.emplace(key, value).second && violations)
            violations->push_back("duplicate key: " + key);
    }
    return kv;
}

namespace detail {

struct KvReader {
    const std::map<std::string, std::string>& kv;
    std::vector<std::string>& violations;
    std::set<std::string> used;

    bool has(const std::string& key) const { return kv.count(key) > 0; }

    std::optional<std::string> raw(const std::string& key) {
        used.insert(key);
        const auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    }

    double number(const std::string& key, double fallback) {
        const auto v = raw(key);
        if (!v) return fallback;
        try {
            std::size_t pos = 0;
            const double x = std::stod(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("");
            return x;
        } catch (...) {
            violations.push_back(key + ": not a number: " + *v);
            return fallback;
        }
    }

    double required_number(const std::string& key) {
        if (!has(key)) {
            violations.push_back("missing required key: " + key);
            used.insert(key);
            return 0.0;
        }
        return number(key, 0.0);
    }

    int integer(const std::string& key, int fallback) {
        const double x = number(key, fallback);
        if (x != std::floor(x)) {
            violations.push_back(key + ": not an integer");
            return fallback;
        }
        return static_cast<int>(x);
    }

    bool boolean(const std::string& key, bool fallback) {
        const auto v = raw(key);
        if (!v) return fallback;
        if (*v == "true") return true;
        if (*v == "false") return false;
        violations.push_back(key + ": expected true or false");
        return fallback;
    }

    std::string text(const std::string& key, const std::string& fallback) {
        const auto v = raw(key);
        return v ? *v : fallback;
    }
};

}  // namespace detail

/// Build and validate a typed config from the key-value map. All structural
/// and range violations are collected; nothing is run.
inline ConfigResult build_config(const std::map<std::string, std::string>& kv) {
    ConfigResult result;
    auto& errs = result.violations;
    detail::KvReader r{kv, errs, {}};
    ExperimentConfig cfg;

    cfg.name = r.text("name", "experiment");

    const std::string mode = r.text("mode", "");
    if (mode == "pde") cfg.mode = RunMode::Pde;
    else if (mode == "cv") cfg.mode = RunMode::Cv;
    else if (mode == "compare") cfg.mode = RunMode::Compare;
    else if (mode == "pinning-threshold") cfg.mode = RunMode::Threshold;
    else if (mode == "invert") cfg.mode = RunMode::Invert;
    else if (mode == "sweep") cfg.mode = RunMode::Sweep;
    else if (mode == "sources") cfg.mode = RunMode::Sources;
    else errs.push_back(mode.empty() ? "missing required key: mode" : "unknown mode: " + mode);

    const bool needs_defect = cfg.mode != RunMode::Sources;

    // defect
    const std::string kind = r.text("defect.kind", "");
    if (needs_defect || !kind.empty()) {
        const double center = r.number("defect.center", 0.0);
        if (kind == "constant") {
            const double s = r.required_number("defect.s");
            if (!(s > 0.0)) errs.push_back("defect.s must be positive");
            cfg.defect = ConstantDefect{s};
        } else if (kind == "gaussian") {
            const double s0 = r.required_number("defect.s0");
            const double s1 = r.required_number("defect.s1");
            const double d = r.required_number("defect.d");
            if (!(s0 > 0.0)) errs.push_back("defect.s0 must be positive");
            if (!(d > 0.0)) errs.push_back("defect.d must be positive");
            cfg.defect = GaussianDefect{s0, s1, d, center};
        } else if (kind == "tanh") {
            const double sl = r.required_number("defect.s_l");
            const double sr = r.required_number("defect.s_r");
            const double d = r.required_number("defect.d");
            if (!(sl > 0.0)) errs.push_back("defect.s_l must be positive");
            if (!(sr > 0.0)) errs.push_back("defect.s_r must be positive");
            if (!(d > 0.0)) errs.push_back("defect.d must be positive");
            cfg.defect = TanhDefect{sl, sr, d, center};
        } else if (kind == "dirac") {
            const double alpha = r.required_number("defect.alpha");
            const double beta = r.required_number("defect.beta");
            if (!(alpha > 0.0)) errs.push_back("defect.alpha must be positive");
            cfg.defect = DiracDefect{alpha, beta};
        } else if (kind == "heaviside") {
            const double alpha = r.required_number("defect.alpha");
            const double beta = r.required_number("defect.beta");
            if (!(alpha > 0.0)) errs.push_back("defect.alpha must be positive");
            if (!(alpha + beta > 0.0)) errs.push_back("heaviside requires alpha + beta > 0");
            cfg.defect = HeavisideDefect{alpha, beta};
        } else if (kind.empty()) {
            errs.push_back("missing required key: defect.kind");
        } else {
            errs.push_back("unknown defect.kind: " + kind);
        }
    }

    // reaction
    cfg.reaction.a = r.number("reaction.a", 0.3);
    if (!(cfg.reaction.a > 0.0 && cfg.reaction.a < 1.0))
        errs.push_back("reaction.a must lie in (0, 1)");

    // grid
    cfg.grid.x_min = r.number("grid.x_min", -100.0);
    cfg.grid.x_max = r.number("grid.x_max", 100.0);
    cfg.grid.n = r.integer("grid.n", 4000);
    if (cfg.grid.n < 3) errs.push_back("grid too small (grid.n >= 3 required)");
    if (!(cfg.grid.x_max > cfg.grid.x_min)) errs.push_back("grid.x_max must exceed grid.x_min");

    // solver
    cfg.solver.rtol = r.number("solver.rtol", 1e-8);
    cfg.solver.atol = r.number("solver.atol", 1e-8);
    const bool needs_solver =
        cfg.mode != RunMode::Sources;
    if (needs_solver)
        cfg.solver.t_max = r.required_number("solver.t_max");
    cfg.solver.dt_out = r.number("solver.dt_out", 1.0);
    cfg.solver.dt_init = r.number("solver.dt_init", 0.0);
    if (needs_solver) {
        if (!(cfg.solver.rtol > 0.0) || !(cfg.solver.atol > 0.0))
            errs.push_back("solver tolerances must be positive");
        if (!(cfg.solver.t_max > 0.0)) errs.push_back("solver.t_max must be positive");
        if (!(cfg.solver.dt_out > 0.0)) errs.push_back("solver.dt_out must be positive");
        if (cfg.solver.dt_out > cfg.solver.t_max)
            errs.push_back("solver.dt_out must not exceed solver.t_max");
    }

    // initial front
    cfg.init_x0 = r.number("init.x0", -20.0);
    const std::string init_w = r.text("init.w", "equilibrium");
    if (init_w == "equilibrium") {
        cfg.init_w = 0.0;
    } else {
        detail::KvReader wr{kv, errs, {}};
        cfg.init_w = wr.number("init.w", 0.0);
        if (!(cfg.init_w > 0.0)) errs.push_back("init.w must be positive or 'equilibrium'");
    }

    // cv model
    const std::string cv_kind = r.text("cv.kind", "");
    const bool needs_cv = cfg.mode == RunMode::Cv || cfg.mode == RunMode::Compare;
    if (!cv_kind.empty() || needs_cv) {
        if (cv_kind == "general") cfg.cv_kind = CvKind::General;
        else if (cv_kind == "adiabatic") cfg.cv_kind = CvKind::Adiabatic;
        else if (cv_kind == "adiabatic_taylor") cfg.cv_kind = CvKind::AdiabaticTaylor;
        else if (cv_kind == "dirac") cfg.cv_kind = CvKind::Dirac;
        else if (cv_kind == "heaviside") cfg.cv_kind = CvKind::Heaviside;
        else if (cv_kind.empty()) errs.push_back("missing required key: cv.kind");
        else errs.push_back("unknown cv.kind: " + cv_kind);
    }

    cfg.snapshots = r.boolean("output.snapshots", false);
    cfg.out_dir = r.text("output.dir", "");

    // mode-specific keys
    if (cfg.mode == RunMode::Threshold) {
        cfg.threshold_parameter = r.text("threshold.parameter", "");
        if (cfg.threshold_parameter.empty())
            errs.push_back("missing required key: threshold.parameter");
        cfg.threshold_lo = r.required_number("threshold.lo");
        cfg.threshold_hi = r.required_number("threshold.hi");
        if (!(cfg.threshold_lo < cfg.threshold_hi))
            errs.push_back("threshold.lo must be below threshold.hi");
        const std::string model = r.text("threshold.model", "pde");
        if (model == "pde") cfg.threshold_model = RunMode::Pde;
        else if (model == "cv") cfg.threshold_model = RunMode::Cv;
        else errs.push_back("threshold.model must be pde or cv");
        if (cfg.threshold_model == RunMode::Cv && cv_kind.empty())
            errs.push_back("threshold.model = cv requires cv.kind");
    }
    if (cfg.mode == RunMode::Sweep) {
        cfg.sweep_parameter = r.text("sweep.parameter", "");
        if (cfg.sweep_parameter.empty()) errs.push_back("missing required key: sweep.parameter");
        cfg.sweep_lo = r.required_number("sweep.lo");
        cfg.sweep_hi = r.required_number("sweep.hi");
        cfg.sweep_steps = r.integer("sweep.steps", 0);
        if (cfg.sweep_steps < 2) errs.push_back("sweep.steps must be at least 2");
        const std::string model = r.text("sweep.mode", "pde");
        if (model == "pde") cfg.sweep_mode = RunMode::Pde;
        else if (model == "cv") cfg.sweep_mode = RunMode::Cv;
        else errs.push_back("sweep.mode must be pde or cv");
        if (cfg.sweep_mode == RunMode::Cv && cv_kind.empty())
            errs.push_back("sweep.mode = cv requires cv.kind");
    }
    if (cfg.mode == RunMode::Invert) {
        cfg.smooth_window = r.integer("invert.smooth_window", 0);
        if (cfg.smooth_window != 0 &&
            (cfg.smooth_window < 3 || cfg.smooth_window % 2 == 0))
            errs.push_back("invert.smooth_window must be odd and >= 3");
    }
    if (cfg.mode == RunMode::Sources) {
        cfg.sources_z_min = r.number("sources.z_min", -10.0);
        cfg.sources_z_max = r.number("sources.z_max", 10.0);
        cfg.sources_dz = r.number("sources.dz", 0.01);
        if (!(cfg.sources_dz > 0.0) || !(cfg.sources_z_max > cfg.sources_z_min))
            errs.push_back("invalid sources range");
    }

    // model/defect compatibility
    const bool pde_like = cfg.mode == RunMode::Pde || cfg.mode == RunMode::Compare ||
                          cfg.mode == RunMode::Invert ||
                          (cfg.mode == RunMode::Threshold && cfg.threshold_model == RunMode::Pde) ||
                          (cfg.mode == RunMode::Sweep && cfg.sweep_mode == RunMode::Pde);
    if (pde_like && !pointwise_evaluable(cfg.defect))
        errs.push_back("pde runs reject dirac defects (cross-validate with a narrow gaussian)");
    if (needs_cv || (cfg.mode == RunMode::Threshold && cfg.threshold_model == RunMode::Cv) ||
        (cfg.mode == RunMode::Sweep && cfg.sweep_mode == RunMode::Cv)) {
        try {
            (void)make_cv_model(cfg.cv_kind, cfg.defect);
        } catch (const std::exception& e) {
            if (std::string(e.what()).find("rejects dirac") != std::string::npos)
                errs.push_back("General model rejects Dirac defects");
            else
                errs.push_back(std::string("cv model: ") + e.what());
        }
    }

    // unknown keys
    for (const auto& [key, value] : kv)
        if (!r.used.count(key)) errs.push_back("unknown key: " + key);

    if (errs.empty()) result.config = cfg;
    return result;
}

inline ConfigResult parse_config(const std::string& text) {
    std::vector<std::string> violations;
    const auto kv = parse_kv(text, &violations);
    ConfigResult result = build_config(kv);
    result.violations.insert(result.violations.begin(), violations.begin(), violations.end());
    if (!result.violations.empty()) result.config.reset();
    return result;
}

/// Pointer to the numeric field addressed by a config key path (used by
/// sweeps and threshold probes); null when the path does not apply to the
/// config's defect kind.
inline double* parameter_slot(ExperimentConfig& cfg, const std::string& path) {
    if (path == "reaction.a") return &cfg.reaction.a;
    if (path == "init.x0") return &cfg.init_x0;
    if (path == "init.w") return &cfg.init_w;
    if (auto* c = std::get_if<ConstantDefect>(&cfg.defect)) {
        if (path == "defect.s") return &c->s;
    } else if (auto* g = std::get_if<GaussianDefect>(&cfg.defect)) {
        if (path == "defect.s0") return &g->s0;
        if (path == "defect.s1") return &g->s1;
        if (path == "defect.d") return &g->d;
    } else if (auto* t = std::get_if<TanhDefect>(&cfg.defect)) {
        if (path == "defect.s_l") return &t->s_l;
        if (path == "defect.s_r") return &t->s_r;
        if (path == "defect.d") return &t->d;
    } else if (auto* d = std::get_if<DiracDefect>(&cfg.defect)) {
        if (path == "defect.alpha") return &d->alpha;
        if (path == "defect.beta") return &d->beta;
    } else if (auto* h = std::get_if<HeavisideDefect>(&cfg.defect)) {
        if (path == "defect.alpha") return &h->alpha;
        if (path == "defect.beta") return &h->beta;
    }
    return nullptr;
}

/// Set one numeric parameter by its config key path. Unknown or
/// inapplicable paths throw.
inline void set_parameter(ExperimentConfig& cfg, const std::string& path, double value) {
    double* slot = parameter_slot(cfg, path);
    if (!slot)
        throw std::invalid_argument("parameter path " + path + " does not apply to this config");
    *slot = value;
}

}  // namespace frontlab
