#pragma once

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "optomech/analytic.hpp"
#include "optomech/meanfield.hpp"
#include "optomech/spectral.hpp"
#include "optomech/variational.hpp"
#include "optomech/version.hpp"

namespace optomech {

using nlohmann::json;

enum class Task {
    staircase,
    gap_sweep_task,
    landscape,
    variational,
    phase_diagram,
    hybrid_spectrum,
    crossing_scan,
    convergence_audit,
};

inline std::string to_string(Task t) {
    switch (t) {
        case Task::staircase: return "staircase";
        case Task::gap_sweep_task: return "gap-sweep";
        case Task::landscape: return "landscape";
        case Task::variational: return "variational";
        case Task::phase_diagram: return "phase-diagram";
        case Task::hybrid_spectrum: return "hybrid-spectrum";
        case Task::crossing_scan: return "crossing-scan";
        case Task::convergence_audit: return "convergence-audit";
    }
    throw ConfigError("task", "unknown task");
}

inline Task task_from_string(const std::string& s) {
    if (s == "staircase") return Task::staircase;
    if (s == "gap-sweep") return Task::gap_sweep_task;
    if (s == "landscape") return Task::landscape;
    if (s == "variational") return Task::variational;
    if (s == "phase-diagram") return Task::phase_diagram;
    if (s == "hybrid-spectrum") return Task::hybrid_spectrum;
    if (s == "crossing-scan") return Task::crossing_scan;
    if (s == "convergence-audit") return Task::convergence_audit;
    throw ConfigError("task", "unknown task '" + s + "'");
}

struct ControlRange {
    std::string name = "kappa";
    double lo = 0.0;
    double hi = 1.0;
    int steps = 2;
};

struct RunConfig {
    Task task = Task::staircase;
    HamiltonianKind model = HamiltonianKind::EffectiveHomTilde;
    ModelParams params;
    ControlRange control;
    std::optional<ControlRange> control2;  // second axis for grids
    std::vector<int> dims;                 // empty: "auto"
    std::string output_format = "csv";
    long seed = 0;
    Frame report_frame = Frame::printed;
    int series_order = 4;
    std::string regime = "finite_eta";
    int workers = 1;
};

// ---- config parsing -----------------------------------------------------------

namespace sweep_detail {

inline void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                           const std::string& scope) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) { ok = true; break; }
        if (!ok) throw ConfigError(scope.empty() ? it.key() : scope + "." + it.key(),
                                   "unknown field");
    }
}

inline double num(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ConfigError(key, "must be a number");
    return j[key].get<double>();
}

inline ControlRange parse_control(const json& j, const std::string& scope) {
    reject_unknown(j, {"name", "lo", "hi", "steps"}, scope);
    ControlRange c;
    if (j.contains("name")) c.name = j["name"].get<std::string>();
    if (!j.contains("lo") || !j.contains("hi"))
        throw ConfigError(scope, "needs lo and hi");
    c.lo = j["lo"].get<double>();
    c.hi = j["hi"].get<double>();
    c.steps = j.contains("steps") ? j["steps"].get<int>() : 2;
    if (c.steps < 2) throw ConfigError(scope + ".steps", "must be >= 2");
    if (!std::isfinite(c.lo) || !std::isfinite(c.hi) || c.hi < c.lo)
        throw ConfigError(scope, "range must be finite with hi >= lo");
    return c;
}

inline void check_task_model(Task task, HamiltonianKind model) {
    auto bad = [&](const char* why) {
        throw ConfigError("model", std::string(why) + " (task " + to_string(task) +
                                       ", model " + to_string(model) + ")");
    };
    switch (task) {
        case Task::staircase:
        case Task::crossing_scan:
            if (model != HamiltonianKind::EffectiveHomTilde)
                bad("staircase scans run on the anharmonic diagonal model");
            break;
        case Task::landscape:
            if (model != HamiltonianKind::ApproxHom &&
                model != HamiltonianKind::EffectiveHomTilde)
                bad("the mean-field landscape belongs to the radiation-pressure model");
            break;
        case Task::phase_diagram:
        case Task::hybrid_spectrum:
            if (model != HamiltonianKind::HybridHP && model != HamiltonianKind::HybridFullSpin)
                bad("phase diagrams are computed for the hybrid system");
            break;
        default:
            break;
    }
}

inline HamiltonianKind default_model(Task t) {
    switch (t) {
        case Task::staircase:
        case Task::crossing_scan: return HamiltonianKind::EffectiveHomTilde;
        case Task::landscape: return HamiltonianKind::ApproxHom;
        case Task::phase_diagram:
        case Task::hybrid_spectrum: return HamiltonianKind::HybridHP;
        case Task::variational: return HamiltonianKind::QuadraticLimitHbarF;
        default: return HamiltonianKind::FullH;
    }
}

}  // namespace sweep_detail

// Parse and validate a run configuration. Unknown fields are rejected with
// the offending name; a dimensionless coupling given alongside contradictory
// frequencies is rejected rather than silently preferred.
inline RunConfig parse_config(const json& j) {
    using namespace sweep_detail;
    reject_unknown(j,
                   {"schema", "task", "model", "params", "control", "control2", "dims",
                    "seed", "frame", "series_order", "regime", "workers"},
                   "");
    if (j.contains("schema") && j["schema"].get<int>() != config_schema_version)
        throw ConfigError("schema", "unsupported schema version");
    RunConfig cfg;
    if (!j.contains("task")) throw ConfigError("task", "required");
    cfg.task = task_from_string(j["task"].get<std::string>());
    cfg.model = j.contains("model") ? kind_from_string(j["model"].get<std::string>())
                                    : default_model(cfg.task);
    check_task_model(cfg.task, cfg.model);

    ModelParams& p = cfg.params;
    std::optional<double> want_gamma, want_kappa;
    if (j.contains("params")) {
        const json& jp = j["params"];
        reject_unknown(jp,
                       {"omega_c", "omega_m", "g", "omega_a", "lambda", "N_a", "alpha_A2",
                        "xi", "theta", "eps1", "eps2", "N_factor", "gamma", "kappa"},
                       "params");
        p.omega_c = num(jp, "omega_c", 1.0);
        p.omega_m = num(jp, "omega_m", 0.01);
        p.g = num(jp, "g", 0.0);
        p.omega_a = num(jp, "omega_a", 1.0);
        p.lambda = num(jp, "lambda", 0.0);
        p.n_atoms = jp.contains("N_a") ? jp["N_a"].get<int>() : 1;
        p.alpha_a2 = num(jp, "alpha_A2", 0.0);
        p.xi = num(jp, "xi", 0.0);
        p.theta = num(jp, "theta", 0.0);
        p.eps1 = num(jp, "eps1", 0.0);
        p.eps2 = num(jp, "eps2", 0.0);
        p.n_factor = num(jp, "N_factor", 1.0);
        if (jp.contains("gamma")) want_gamma = jp["gamma"].get<double>();
        if (jp.contains("kappa")) want_kappa = jp["kappa"].get<double>();
        // dimensionless-coupling consistency: gamma^2 kappa^2 = 2, and either
        // one must agree with g when both are specified
        if (want_gamma && want_kappa &&
            std::abs(*want_gamma * *want_gamma * *want_kappa * *want_kappa - 2.0) > 1e-9)
            throw ConfigError("params.gamma", "gamma and kappa violate gamma^2 kappa^2 = 2");
        if (want_gamma) {
            if (jp.contains("g") && std::abs(p.gamma() - *want_gamma) >
                                        1e-9 * std::max(1.0, std::abs(*want_gamma)))
                throw ConfigError("params.gamma",
                                  "inconsistent with g, omega_c, omega_m");
            p.set_gamma(*want_gamma);
        } else if (want_kappa) {
            if (jp.contains("g") && std::isfinite(p.kappa()) &&
                std::abs(p.kappa() - *want_kappa) > 1e-9 * std::max(1.0, *want_kappa))
                throw ConfigError("params.kappa",
                                  "inconsistent with g, omega_c, omega_m");
            p.set_kappa(*want_kappa);
        }
    } else {
        p.omega_m = 0.01;
    }
    p.validate();

    cfg.control = j.contains("control")
                      ? parse_control(j["control"], "control")
                      : ControlRange{cfg.task == Task::phase_diagram ? "mu" : "kappa", 0.5,
                                     3.0, 251};
    if (j.contains("control2")) cfg.control2 = parse_control(j["control2"], "control2");

    if (j.contains("dims")) {
        if (j["dims"].is_string()) {
            if (j["dims"].get<std::string>() != "auto")
                throw ConfigError("dims", "expected an array of dimensions or \"auto\"");
        } else {
            for (const auto& d : j["dims"]) cfg.dims.push_back(d.get<int>());
            for (int d : cfg.dims)
                if (d < 2) throw ConfigError("dims", "every dimension must be >= 2");
        }
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<long>();
    if (j.contains("frame")) {
        std::string f = j["frame"].get<std::string>();
        if (f == "printed") cfg.report_frame = Frame::printed;
        else if (f == "flipped") cfg.report_frame = Frame::flipped;
        else throw ConfigError("frame", "expected printed or flipped");
    }
    if (j.contains("series_order")) cfg.series_order = j["series_order"].get<int>();
    if (cfg.series_order < 1) throw ConfigError("series_order", "must be >= 1");
    if (j.contains("regime")) {
        cfg.regime = j["regime"].get<std::string>();
        if (cfg.regime != "finite_eta" && cfg.regime != "classical_limit")
            throw ConfigError("regime", "expected finite_eta or classical_limit");
    }
    if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
    if (cfg.workers < 1) throw ConfigError("workers", "must be >= 1");
    return cfg;
}

inline RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j);
}

// Canonical round-trippable echo of a config (defaults filled, keys sorted).
inline json config_echo(const RunConfig& cfg) {
    json jp = {
        {"omega_c", cfg.params.omega_c}, {"omega_m", cfg.params.omega_m},
        {"g", cfg.params.g},             {"omega_a", cfg.params.omega_a},
        {"lambda", cfg.params.lambda},   {"N_a", cfg.params.n_atoms},
        {"alpha_A2", cfg.params.alpha_a2}, {"xi", cfg.params.xi},
        {"theta", cfg.params.theta},     {"eps1", cfg.params.eps1},
        {"eps2", cfg.params.eps2},       {"N_factor", cfg.params.n_factor},
    };
    json j = {
        {"schema", config_schema_version},
        {"task", to_string(cfg.task)},
        {"model", to_string(cfg.model)},
        {"params", jp},
        {"control",
         {{"name", cfg.control.name}, {"lo", cfg.control.lo}, {"hi", cfg.control.hi},
          {"steps", cfg.control.steps}}},
        {"seed", cfg.seed},
        {"frame", cfg.report_frame == Frame::printed ? "printed" : "flipped"},
        {"series_order", cfg.series_order},
        {"regime", cfg.regime},
        {"workers", cfg.workers},
    };
    if (cfg.control2)
        j["control2"] = {{"name", cfg.control2->name}, {"lo", cfg.control2->lo},
                         {"hi", cfg.control2->hi}, {"steps", cfg.control2->steps}};
    if (cfg.dims.empty()) j["dims"] = "auto";
    else j["dims"] = cfg.dims;
    return j;
}

// ---- result table ---------------------------------------------------------------

struct ResultTable {
    struct Column {
        std::string name;
        std::string unit;  // empty: dimensionless
    };
    std::vector<Column> columns;
    std::vector<std::vector<json>> rows;
    json metadata;  // config echo, version, flags, wall time

    enum class Outcome { complete, complete_with_flags, failed };
    Outcome outcome = Outcome::complete;
};

namespace sweep_detail {

inline std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string csv_cell(const json& c) {
    if (c.is_number_float()) return fmt_real(c.get<double>());
    if (c.is_number_integer()) return std::to_string(c.get<long>());
    if (c.is_boolean()) return c.get<bool>() ? "1" : "0";
    std::string s = c.get<std::string>();
    // cells never contain commas in this schema; quote defensively anyway
    if (s.find(',') != std::string::npos) return "\"" + s + "\"";
    return s;
}

}  // namespace sweep_detail

// CSV: '#'-prefixed metadata lines, one header line with units in
// parentheses, then rows; UTF-8, LF, '.' decimal, 17 significant digits.
inline std::string to_csv(const ResultTable& t) {
    std::string out;
    for (auto it = t.metadata.begin(); it != t.metadata.end(); ++it)
        out += "# " + it.key() + "=" + it.value().dump() + "\n";
    for (size_t c = 0; c < t.columns.size(); ++c) {
        if (c) out += ",";
        out += t.columns[c].name;
        if (!t.columns[c].unit.empty()) out += " (" + t.columns[c].unit + ")";
    }
    out += "\n";
    for (const auto& row : t.rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) out += ",";
            out += sweep_detail::csv_cell(row[c]);
        }
        out += "\n";
    }
    return out;
}

inline json to_json(const ResultTable& t) {
    json cols = json::array();
    for (const auto& c : t.columns) cols.push_back({{"name", c.name}, {"unit", c.unit}});
    json rows = json::array();
    for (const auto& r : t.rows) rows.push_back(r);
    return {{"schema", config_schema_version},
            {"columns", cols},
            {"rows", rows},
            {"metadata", t.metadata}};
}

// ---- task runners ----------------------------------------------------------------

namespace sweep_detail {

inline ResultTable run_staircase(const RunConfig& cfg) {
    ResultTable t;
    int dim = cfg.dims.empty() ? 64 : cfg.dims[0];
    auto rep = level_crossing_scan(cfg.control.lo, cfg.control.hi, cfg.control.steps, dim);
    t.columns = {{"kappa", ""}, {"n_G", ""}, {"staircase", "count"}};
    for (auto& [kappa, occ] : rep.staircase) {
        double ng = 0.5 * (kappa * kappa - 1.0);
        t.rows.push_back({json(kappa), json(ng), json(static_cast<long>(occ))});
    }
    json cross = json::array();
    for (auto& c : rep.crossings)
        cross.push_back({{"kappa", c.kappa}, {"levels", {c.lower_level, c.lower_level + 1}}});
    t.metadata["crossings"] = cross;
    return t;
}

inline ResultTable run_crossing_scan(const RunConfig& cfg) {
    ResultTable t;
    int dim = cfg.dims.empty() ? 64 : cfg.dims[0];
    auto rep = level_crossing_scan(cfg.control.lo, cfg.control.hi, cfg.control.steps, dim);
    t.columns = {{"kappa_crossing", ""}, {"lower_level", "count"}, {"upper_level", "count"}};
    for (auto& c : rep.crossings)
        t.rows.push_back({json(c.kappa), json(static_cast<long>(c.lower_level)),
                          json(static_cast<long>(c.lower_level + 1))});
    return t;
}

inline SolveOptions solve_options_from(const RunConfig& cfg) {
    SolveOptions o;
    if (!cfg.dims.empty()) {
        o.start_cavity = cfg.dims[0];
        if (cfg.dims.size() > 1) o.start_mech = cfg.dims[1];
        // explicit dims: trust the caller, skip escalation
        o.max_escalations = 0;
    }
    return o;
}

inline ResultTable run_gap_sweep(const RunConfig& cfg) {
    ResultTable t;
    SolveOptions opts = solve_options_from(cfg);
    auto rows = gap_sweep(cfg.model, cfg.params, cfg.control.name, cfg.control.lo,
                          cfg.control.hi, cfg.control.steps, opts, cfg.workers);
    t.columns = {{cfg.control.name, ""},
                 {"gap", "omega_c"},
                 {"gap_odd_parity", "omega_c"},
                 {"photon_number", "count"},
                 {"parity", ""},
                 {"energy0", "omega_c"},
                 {"converged", "bool"},
                 {"note", ""}};
    bool flagged = false;
    for (auto& r : rows) {
        double sign = cfg.report_frame == Frame::flipped ? -1.0 : 1.0;
        t.rows.push_back({json(r.control), json(r.gap), json(r.gap_odd_parity),
                          json(r.photon_number), json(r.parity), json(sign * r.energy0),
                          json(r.converged), json(r.note)});
        if (!r.converged) flagged = true;
    }
    if (flagged) t.outcome = ResultTable::Outcome::complete_with_flags;
    return t;
}

inline ResultTable run_landscape(const RunConfig& cfg) {
    ResultTable t;
    double kappa = cfg.params.kappa();
    if (!std::isfinite(kappa))
        throw ConfigError("params", "landscape needs a finite kappa (set g or kappa)");
    double eta = cfg.params.eta();
    t.columns = {{"re_alpha", ""}, {"im_alpha", ""}, {"energy", "omega_c"}};
    const ControlRange& c = cfg.control;
    for (int i = 0; i < c.steps; ++i) {
        double re = c.lo + (c.hi - c.lo) * i / (c.steps - 1);
        for (int k = 0; k < c.steps; ++k) {
            double im = c.lo + (c.hi - c.lo) * k / (c.steps - 1);
            double e = mf_energy_hom_framed(Cplx(re, im), 0.0, kappa, eta, cfg.report_frame);
            t.rows.push_back({json(re), json(im), json(e)});
        }
    }
    return t;
}

inline ResultTable run_variational(const RunConfig& cfg) {
    ResultTable t;
    auto regime = cfg.regime == "classical_limit"
                      ? SqueezingSolution::Regime::classical_limit
                      : SqueezingSolution::Regime::finite_eta;
    t.columns = {{"gamma", ""},       {"r", ""},
                 {"s", ""},           {"energy", "omega_c"},
                 {"iterations", "count"}, {"residual", ""},
                 {"diverged", "bool"}, {"series_warning", "bool"}};
    bool flagged = false;
    for (int i = 0; i < cfg.control.steps; ++i) {
        double gamma =
            cfg.control.lo + (cfg.control.hi - cfg.control.lo) * i / (cfg.control.steps - 1);
        auto sol = solve_squeezing(gamma, cfg.params.eta(), cfg.series_order, regime);
        t.rows.push_back({json(gamma), json(sol.r), json(sol.s), json(sol.energy),
                          json(static_cast<long>(sol.iterations)), json(sol.residual),
                          json(sol.diverged), json(sol.series_warning)});
        if (sol.diverged) flagged = true;
    }
    if (flagged) t.outcome = ResultTable::Outcome::complete_with_flags;
    return t;
}

inline ResultTable run_phase_diagram(const RunConfig& cfg) {
    ResultTable t;
    ControlRange c2 = cfg.control2.value_or(ControlRange{"gamma", cfg.control.lo,
                                                         cfg.control.hi, cfg.control.steps});
    t.columns = {{"mu", ""}, {"gamma", ""}, {"phase", ""}, {"epsilon_minus", "omega_c"},
                 {"epsilon_valid", "bool"}};
    for (int jg = 0; jg < c2.steps; ++jg) {
        double gamma = c2.lo + (c2.hi - c2.lo) * jg / (c2.steps - 1);
        for (int im = 0; im < cfg.control.steps; ++im) {
            double mu = cfg.control.lo +
                        (cfg.control.hi - cfg.control.lo) * im / (cfg.control.steps - 1);
            PhasePoint pt = classify_phase_point(mu, gamma, cfg.params.alpha_a2,
                                                 cfg.params.omega_c, cfg.params.omega_a);
            t.rows.push_back({json(mu), json(gamma),
                              json(pt.phase == Phase::Superradiant ? "SP" : "NP"),
                              json(pt.epsilon_minus.value), json(pt.epsilon_minus.valid)});
        }
    }
    return t;
}

inline ResultTable run_hybrid_spectrum(const RunConfig& cfg) {
    ResultTable t;
    t.columns = {{cfg.control.name, ""},   {"delta_tilde", ""}, {"phase", ""},
                 {"eps_minus", "omega_c"}, {"eps_plus", "omega_c"},
                 {"valid", "bool"}};
    for (int i = 0; i < cfg.control.steps; ++i) {
        double v =
            cfg.control.lo + (cfg.control.hi - cfg.control.lo) * i / (cfg.control.steps - 1);
        ModelParams p = cfg.params;
        if (cfg.control.name == "mu") p.set_mu(v);
        else if (cfg.control.name == "gamma") p.set_gamma(v);
        else throw ConfigError("control.name", "hybrid-spectrum sweeps mu or gamma");
        double mu = p.mu(), gamma = p.gamma();
        PhasePoint pt = classify_phase_point(mu, gamma, p.alpha_a2, p.omega_c, p.omega_a);
        RealOrFlag dt = hybrid_delta_tilde(mu, gamma, p.alpha_a2);
        HybridSpectrum sp;
        if (pt.phase == Phase::Normal) {
            sp = hybrid_spectrum_np(p);
        } else if (dt.valid && dt.value >= 1.0) {
            RealOrFlag r = hybrid_squeeze_r(mu, gamma, p.alpha_a2);
            sp = hybrid_spectrum_sp(dt.value, p.omega_c * std::exp(-2.0 * r.value),
                                    p.omega_a);
        }
        t.rows.push_back({json(v), json(dt.valid ? dt.value : 0.0),
                          json(pt.phase == Phase::Superradiant ? "SP" : "NP"),
                          json(sp.eps_minus), json(sp.eps_plus), json(sp.valid)});
    }
    return t;
}

inline ResultTable run_convergence_audit(const RunConfig& cfg) {
    ResultTable t;
    t.columns = {{"dims", ""},          {"E0", "omega_c"},      {"E1", "omega_c"},
                 {"E2", "omega_c"},     {"photon_number", "count"},
                 {"converged", "bool"}, {"note", ""}};
    SolveOptions opts = solve_options_from(cfg);
    FockSpaceLayout layout = spectral_detail::start_layout(cfg.model, cfg.params, opts);
    if (!cfg.dims.empty() && static_cast<int>(cfg.dims.size()) == layout.modes())
        layout.mode_dims = cfg.dims;
    double shift = opts.use_frame && spectral_detail::has_linear_phonon(cfg.model)
                       ? spectral_detail::frame_seed(cfg.model, cfg.params)
                       : 0.0;
    bool flagged = false;
    for (int esc = 0; esc <= opts.max_escalations; ++esc) {
        SpectrumResult r = spectral_detail::solve_at(cfg.model, cfg.params, layout, shift, 3);
        ConvergenceReport rep = convergence_check(cfg.model, cfg.params, layout, shift, opts);
        std::string dims_str;
        for (int d : layout.mode_dims) dims_str += (dims_str.empty() ? "" : "x") +
                                                   std::to_string(d);
        t.rows.push_back({json(dims_str), json(r.eigenvalues[0]),
                          json(r.eigenvalues.size() > 1 ? r.eigenvalues[1] : 0.0),
                          json(r.eigenvalues.size() > 2 ? r.eigenvalues[2] : 0.0),
                          json(r.observables.photon_number), json(rep.converged),
                          json(rep.note)});
        if (rep.converged) return t;
        flagged = true;
        if (rep.note == "runaway-detected") break;
        FockSpaceLayout next = layout;
        for (int m = 0; m < layout.modes(); ++m) next.mode_dims[m] *= 2;
        if (next.total_dim() > opts.total_cap) break;
        layout = next;
    }
    if (flagged) t.outcome = ResultTable::Outcome::complete_with_flags;
    return t;
}

}  // namespace sweep_detail

// Deterministic for a fixed config and seed; convergence flags propagate into
// the outcome instead of aborting.
inline ResultTable run(const RunConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    ResultTable t;
    switch (cfg.task) {
        case Task::staircase: t = sweep_detail::run_staircase(cfg); break;
        case Task::crossing_scan: t = sweep_detail::run_crossing_scan(cfg); break;
        case Task::gap_sweep_task: t = sweep_detail::run_gap_sweep(cfg); break;
        case Task::landscape: t = sweep_detail::run_landscape(cfg); break;
        case Task::variational: t = sweep_detail::run_variational(cfg); break;
        case Task::phase_diagram: t = sweep_detail::run_phase_diagram(cfg); break;
        case Task::hybrid_spectrum: t = sweep_detail::run_hybrid_spectrum(cfg); break;
        case Task::convergence_audit: t = sweep_detail::run_convergence_audit(cfg); break;
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    t.metadata["config"] = config_echo(cfg);
    t.metadata["version"] = version_string;
    t.metadata["flags"] =
        t.outcome == ResultTable::Outcome::complete_with_flags ? "unconverged-rows" : "";
    t.metadata["wall_time_ms"] = ms;
    return t;
}

inline int exit_code(const ResultTable& t) {
    switch (t.outcome) {
        case ResultTable::Outcome::complete: return 0;
        case ResultTable::Outcome::complete_with_flags: return 3;
        case ResultTable::Outcome::failed: return 1;
    }
    return 1;
}

}  // namespace optomech
