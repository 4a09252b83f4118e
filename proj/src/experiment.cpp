#include "gbvlab/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "gbvlab/expansion.hpp"
#include "gbvlab/phase_set.hpp"
#include "gbvlab/spectral.hpp"

namespace gbv {

using nlohmann::json;

namespace {

void require_keys(const json& obj, const std::set<std::string>& required,
                  const std::set<std::string>& optional, const std::string& where) {
    if (!obj.is_object()) throw SchemaError(where + ": expected a JSON object");
    for (const auto& key : required) {
        if (!obj.contains(key))
            throw SchemaError(where + ": missing required field '" + key + "'");
    }
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!required.count(key) && !optional.count(key))
            throw SchemaError(where + ": unknown field '" + key + "'");
    }
}

double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) throw SchemaError(where + ": expected a number");
    return v.get<double>();
}

std::int64_t as_integer(const json& v, const std::string& where) {
    if (!v.is_number_integer()) throw SchemaError(where + ": expected an integer");
    return v.get<std::int64_t>();
}

cplx as_complex(const json& v, const std::string& where) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    throw SchemaError(where + ": expected a number or [re, im]");
}

std::vector<double> as_real_array(const json& v, const std::string& where) {
    if (!v.is_array()) throw SchemaError(where + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) out.push_back(as_number(e, where));
    return out;
}

}  // namespace

CoeffSequence sequence_from_json(const json& spec) {
    if (!spec.is_object() || !spec.contains("type"))
        throw SchemaError("sequence spec: missing 'type'");
    const std::string type = spec["type"].get<std::string>();
    if (type == "wvn") {
        require_keys(spec, {"type", "terms", "n0"}, {}, "wvn spec");
        std::vector<WvnTerm> terms;
        if (!spec["terms"].is_array()) throw SchemaError("wvn spec: 'terms' must be an array");
        for (const auto& t : spec["terms"]) {
            require_keys(t, {"lambda", "phi", "alpha", "gamma"}, {}, "wvn term");
            WvnTerm term;
            term.lambda = as_number(t["lambda"], "wvn term lambda");
            term.phi = as_number(t["phi"], "wvn term phi");
            term.alpha = as_number(t["alpha"], "wvn term alpha");
            term.gamma = as_number(t["gamma"], "wvn term gamma");
            if (!(term.gamma > 0.0)) throw SchemaError("wvn term: gamma must be positive");
            terms.push_back(term);
        }
        const index_t n0 = as_integer(spec["n0"], "wvn n0");
        if (n0 < 1) throw SchemaError("wvn spec: n0 must be >= 1");
        return wigner_von_neumann(terms, n0).represented;
    }
    if (type == "power_law_rotated") {
        require_keys(spec, {"type", "z", "phase", "p", "n0"}, {}, "power_law_rotated spec");
        const cplx z = as_complex(spec["z"], "power_law_rotated z");
        const double phase = as_number(spec["phase"], "power_law_rotated phase");
        const auto p = static_cast<int>(as_integer(spec["p"], "power_law_rotated p"));
        const index_t n0 = as_integer(spec["n0"], "power_law_rotated n0");
        if (p < 2) throw SchemaError("power_law_rotated: p must be >= 2");
        if (n0 < 1) throw SchemaError("power_law_rotated: n0 must be >= 1");
        return power_law_rotated(z, phase, p, n0).seq;
    }
    if (type == "constant") {
        require_keys(spec, {"type", "value"}, {"start"}, "constant spec");
        const cplx v = as_complex(spec["value"], "constant value");
        const index_t start = spec.contains("start") ? as_integer(spec["start"], "start") : 0;
        return CoeffSequence::constant(v, start);
    }
    if (type == "zero") {
        require_keys(spec, {"type"}, {"start"}, "zero spec");
        const index_t start = spec.contains("start") ? as_integer(spec["start"], "start") : 0;
        return CoeffSequence::zero(start);
    }
    throw SchemaError("sequence spec: unknown type '" + type + "'");
}

Coefficients coefficients_from_json(Model model, const json& spec) {
    if (model == Model::opuc) {
        CoeffSequence seq = sequence_from_json(spec);
        const index_t start = seq.start_index();
        // Verblunsky coefficients start at 0; indices below the spec's start
        // evaluate to zero.
        return VerblunskyCoeffs(CoeffSequence(0, [seq, start](index_t n) {
            return n >= start ? seq(n) : cplx{0.0, 0.0};
        }));
    }
    require_keys(spec, {"b"}, {"a_sq_minus_one"}, "oprl coefficients");
    CoeffSequence b_seq = sequence_from_json(spec.at("b"));
    const index_t b_start = b_seq.start_index();
    JacobiCoeffs::RealFn b_fn = [b_seq, b_start](index_t n) {
        return n >= b_start ? b_seq(n).real() : 0.0;
    };
    JacobiCoeffs::RealFn a_fn = [](index_t) { return 1.0; };
    if (spec.contains("a_sq_minus_one")) {
        CoeffSequence s_seq = sequence_from_json(spec.at("a_sq_minus_one"));
        const index_t s_start = s_seq.start_index();
        a_fn = [s_seq, s_start](index_t n) {
            const double s = n >= s_start ? s_seq(n).real() : 0.0;
            if (!(1.0 + s > 0.0))
                throw StepDomainError("coefficients: a^2 = 1 + s must be positive at n = " +
                                          std::to_string(n),
                                      n, cplx{s, 0.0});
            return std::sqrt(1.0 + s);
        };
    }
    return JacobiCoeffs(std::move(a_fn), std::move(b_fn));
}

namespace {

const std::set<std::string> kTasks = {"phase-sets",  "prufer-run", "density",
                                      "convergence", "resonance",  "verify-identities"};

Model model_from_string(const std::string& s) {
    if (s == "opuc") return Model::opuc;
    if (s == "oprl") return Model::oprl;
    throw SchemaError("config: model must be \"opuc\" or \"oprl\"");
}

void validate_task_schema(const json& j, const std::string& task) {
    if (task == "phase-sets") {
        require_keys(j, {"task", "model", "p", "phases"}, {"variant", "dedup_tol"}, "config");
    } else if (task == "prufer-run") {
        require_keys(j, {"task", "model", "coefficients", "eta", "N"}, {"stride"}, "config");
    } else if (task == "density") {
        require_keys(j, {"task", "model", "coefficients", "n", "grid"}, {}, "config");
        require_keys(j.at("grid"), {"lo", "hi", "points"}, {}, "grid");
    } else if (task == "convergence") {
        require_keys(j, {"task", "model", "coefficients", "interval", "grid_points",
                         "checkpoints"},
                     {}, "config");
    } else if (task == "resonance") {
        require_keys(j, {"task", "model", "coefficients", "p", "phases", "N"},
                     {"variant", "control_offsets"}, "config");
    } else if (task == "verify-identities") {
        require_keys(j, {"task"},
                     {"model", "identities", "max_index", "box_lo", "box_hi",
                      "random_points", "max_order", "max_k", "max_l"},
                     "config");
    }
}

ExceptionalVariant variant_from_config(const json& j, Model model) {
    const std::string v = j.contains("variant")
                              ? j["variant"].get<std::string>()
                              : (model == Model::opuc ? "circle" : "line");
    if (v == "circle") return ExceptionalVariant::circle;
    if (v == "line") return ExceptionalVariant::line_plain;
    if (v == "line-widened") return ExceptionalVariant::line_widened;
    if (v == "point-mass") return ExceptionalVariant::schrodinger_pp;
    throw SchemaError("config: unknown variant '" + v +
                      "' (expected circle | line | line-widened | point-mass)");
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
    os << text;
    if (!os) throw std::ios_base::failure("write failed for " + path.string());
}

json exceptional_to_json(const ExceptionalSet& S) {
    json arr = json::array();
    for (const auto& pt : S.points) {
        json entry;
        if (S.model == Model::oprl)
            entry["point"] = pt.point_re;
        else
            entry["point"] = json::array({pt.point_re, pt.point_im});
        entry["eta"] = pt.eta;
        entry["boundary"] = pt.boundary;
        arr.push_back(entry);
    }
    return arr;
}

}  // namespace

ExperimentConfig parse_config(const json& config) {
    if (!config.is_object()) throw SchemaError("config: expected a JSON object");
    if (!config.contains("task") || !config["task"].is_string())
        throw SchemaError("config: missing string field 'task'");
    ExperimentConfig out;
    out.task = config["task"].get<std::string>();
    if (!kTasks.count(out.task)) throw SchemaError("config: unknown task '" + out.task + "'");
    if (out.task != "verify-identities") {
        if (!config.contains("model") || !config["model"].is_string())
            throw SchemaError("config: missing string field 'model'");
        out.model = model_from_string(config["model"].get<std::string>());
    } else if (config.contains("model")) {
        out.model = model_from_string(config["model"].get<std::string>());
    }
    validate_task_schema(config, out.task);
    out.raw = config;
    return out;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::ios_base::failure("cannot open config file " + path.string());
    json j;
    try {
        is >> j;
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("config: invalid JSON: ") + e.what());
    }
    return parse_config(j);
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::string run_phase_sets(const ExperimentConfig& cfg,
                           const std::filesystem::path& out_dir) {
    const json& j = cfg.raw;
    const auto p = static_cast<int>(as_integer(j.at("p"), "p"));
    const double tol =
        j.contains("dedup_tol") ? as_number(j.at("dedup_tol"), "dedup_tol") : 1e-9;
    const PhaseSet A(as_real_array(j.at("phases"), "phases"), tol);
    const PhaseSet Ap = critical_set_Ap(A, p, cfg.model);
    const auto S = exceptional_S(A, p, cfg.model, variant_from_config(j, cfg.model));

    json out;
    out["model"] = cfg.model == Model::opuc ? "opuc" : "oprl";
    out["p"] = p;
    out["A"] = A.phases();
    out["A_p"] = Ap.phases();
    out["S"] = exceptional_to_json(S);
    write_text(out_dir / "phase_sets.json", out.dump(2) + "\n");
    return "phase_sets.json";
}

std::string run_prufer_run(const ExperimentConfig& cfg,
                           const std::filesystem::path& out_dir) {
    const json& j = cfg.raw;
    const auto coeffs = coefficients_from_json(cfg.model, j.at("coefficients"));
    const double eta = as_number(j.at("eta"), "eta");
    const index_t N = as_integer(j.at("N"), "N");
    const index_t stride = j.contains("stride") ? as_integer(j.at("stride"), "stride") : 1;
    if (N < 0) throw SchemaError("config: N must be nonnegative");
    if (stride < 1) throw SchemaError("config: stride must be >= 1");

    std::string csv = "n,log_r,theta\n";
    run_prufer(coeffs, eta, N, [&](const PruferState& s) {
        if (s.n % stride != 0 && s.n != N) return;
        csv += std::to_string(s.n) + "," + format_double(s.log_r) + "," +
               format_double(s.theta) + "\n";
    });
    write_text(out_dir / "trajectory.csv", csv);
    return "trajectory.csv";
}

std::string run_density(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                        int threads) {
    const json& j = cfg.raw;
    const auto coeffs = coefficients_from_json(cfg.model, j.at("coefficients"));
    const index_t n = as_integer(j.at("n"), "n");
    const double lo = as_number(j.at("grid").at("lo"), "grid.lo");
    const double hi = as_number(j.at("grid").at("hi"), "grid.hi");
    const auto points = as_integer(j.at("grid").at("points"), "grid.points");
    if (points < 2 || hi <= lo) throw SchemaError("config: invalid grid");
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (std::size_t i = 0; i < grid.size(); ++i)
        grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);

    const auto probe = density_probe(coeffs, n, grid, threads);
    std::string csv = "eta,density\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        csv += format_double(probe.grid[i]) + "," + format_double(probe.density[i]) + "\n";
    write_text(out_dir / "density.csv", csv);
    return "density.csv";
}

std::string run_convergence(const ExperimentConfig& cfg,
                            const std::filesystem::path& out_dir, int threads) {
    const json& j = cfg.raw;
    const auto coeffs = coefficients_from_json(cfg.model, j.at("coefficients"));
    const auto interval = as_real_array(j.at("interval"), "interval");
    if (interval.size() != 2) throw SchemaError("config: interval must be [lo, hi]");
    const auto grid_points = static_cast<int>(as_integer(j.at("grid_points"), "grid_points"));
    std::vector<index_t> checkpoints;
    for (const auto& c : j.at("checkpoints")) checkpoints.push_back(as_integer(c, "checkpoint"));

    const auto report = convergence_diagnostic(coeffs, interval[0], interval[1], grid_points,
                                               checkpoints, threads);
    json out;
    out["interval"] = {report.interval_lo, report.interval_hi};
    out["checkpoints"] = report.checkpoints;
    out["sup_tail_osc"] = report.sup_tail_osc;
    out["grid_margin"] = report.grid_margin;
    out["verdict"] = to_string(report.verdict);
    write_text(out_dir / "convergence.json", out.dump(2) + "\n");
    return "convergence.json";
}

std::string run_resonance(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                          int threads) {
    const json& j = cfg.raw;
    const auto coeffs = coefficients_from_json(cfg.model, j.at("coefficients"));
    const auto p = static_cast<int>(as_integer(j.at("p"), "p"));
    const PhaseSet A(as_real_array(j.at("phases"), "phases"));
    const index_t N = as_integer(j.at("N"), "N");
    std::vector<double> offsets = {-0.5, 0.5};
    if (j.contains("control_offsets"))
        offsets = as_real_array(j.at("control_offsets"), "control_offsets");

    const auto S = exceptional_S(A, p, cfg.model, variant_from_config(j, cfg.model));
    const auto scan = resonance_scan(coeffs, S, offsets, N, threads);

    std::string csv = "eta,slope,ci,is_candidate\n";
    for (const auto& pt : scan.points) {
        if (pt.skipped) continue;
        csv += format_double(pt.eta) + "," + format_double(pt.slope) + "," +
               format_double(pt.slope_ci) + "," + (pt.is_candidate ? "1" : "0") + "\n";
    }
    write_text(out_dir / "resonance.csv", csv);
    return "resonance.csv";
}

std::string run_verify_identities(const ExperimentConfig& cfg,
                                  const std::filesystem::path& out_dir,
                                  std::uint64_t seed) {
    const json& j = cfg.raw;
    IdentityOptions opts;
    opts.seed = seed;
    if (j.contains("max_index")) opts.max_index = static_cast<int>(as_integer(j.at("max_index"), "max_index"));
    if (j.contains("box_lo")) opts.box_lo = static_cast<int>(as_integer(j.at("box_lo"), "box_lo"));
    if (j.contains("box_hi")) opts.box_hi = static_cast<int>(as_integer(j.at("box_hi"), "box_hi"));
    if (j.contains("random_points"))
        opts.random_points = static_cast<int>(as_integer(j.at("random_points"), "random_points"));
    if (j.contains("max_order")) opts.max_order = static_cast<int>(as_integer(j.at("max_order"), "max_order"));
    if (j.contains("max_k")) opts.max_k = static_cast<int>(as_integer(j.at("max_k"), "max_k"));
    if (j.contains("max_l")) opts.max_l = static_cast<int>(as_integer(j.at("max_l"), "max_l"));

    std::vector<IdentityReport> reports;
    if (j.contains("identities")) {
        for (const auto& name : j.at("identities"))
            reports.push_back(verify_identity(name.get<std::string>(), opts));
    } else {
        reports = verify_all_identities(opts);
    }

    json out = json::array();
    bool all_passed = true;
    for (const auto& r : reports) {
        json entry;
        entry["identity"] = r.identity;
        entry["ranges"] = r.ranges;
        entry["instances"] = r.instances;
        entry["max_residual"] = r.max_residual;
        entry["exact"] = r.exact;
        entry["passed"] = r.passed;
        out.push_back(entry);
        all_passed = all_passed && r.passed;
    }
    json doc;
    doc["identities"] = out;
    doc["all_passed"] = all_passed;
    write_text(out_dir / "identities.json", doc.dump(2) + "\n");
    return "identities.json";
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config,
                         const std::filesystem::path& out_dir, std::uint64_t seed,
                         int threads) {
    const auto t0 = std::chrono::steady_clock::now();
    std::filesystem::create_directories(out_dir);

    RunResult result;
    if (config.task == "phase-sets") {
        result.artifacts.push_back(run_phase_sets(config, out_dir));
    } else if (config.task == "prufer-run") {
        result.artifacts.push_back(run_prufer_run(config, out_dir));
    } else if (config.task == "density") {
        result.artifacts.push_back(run_density(config, out_dir, threads));
    } else if (config.task == "convergence") {
        result.artifacts.push_back(run_convergence(config, out_dir, threads));
    } else if (config.task == "resonance") {
        result.artifacts.push_back(run_resonance(config, out_dir, threads));
    } else if (config.task == "verify-identities") {
        result.artifacts.push_back(run_verify_identities(config, out_dir, seed));
    } else {
        throw SchemaError("run_experiment: unknown task '" + config.task + "'");
    }

    const auto t1 = std::chrono::steady_clock::now();
    json manifest;
    manifest["config_hash"] = fnv1a_hex(config.raw.dump());
    manifest["tool_version"] = kToolVersion;
    manifest["task"] = config.task;
    manifest["seed"] = seed;
    manifest["threads"] = threads;
    manifest["artifacts"] = result.artifacts;
    manifest["wall_time_s"] =
        std::chrono::duration_cast<std::chrono::duration<double>>(t1 - t0).count();
    write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
    return result;
}

}  // namespace gbv
