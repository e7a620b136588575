// linkmerge command-line tool.
//
// Subcommands:
//   fit        estimate the link between two dataset CSVs (per context group)
//   fit-sep    regression-controlled variant (numeric contexts, one estimate)
//   simulate   write synthetic x.csv / y.csv / truth.csv for a model config
//   eval       score a fitted link curve against holdout (x, y) pairs
//   experiment run the (size x noise) grid study or the wrong-noise ablation
//
// Options resolve as: built-in defaults < --config file < LINKMERGE_SEED env
// < command-line flags. The fully resolved configuration is echoed into every
// output file, and re-running any command from that echoed config reproduces
// the output byte for byte.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "linkmerge/linkmerge.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace linkmerge;

namespace {

constexpr int kExitSchema = 1;
constexpr int kExitNoCommonContext = 2;
constexpr int kExitNumeric = 3;

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoCommonContext : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "dirac" | "gaussian:sigma" | "uniform:a" | "student:scale:nu"
NoiseSpec parse_noise_compact(const std::string& spec) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : spec) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    const auto num = [&](std::size_t i, double fallback) {
        return parts.size() > i ? std::stod(parts[i]) : fallback;
    };
    if (parts[0] == "dirac") return NoiseSpec::dirac();
    if (parts[0] == "gaussian") return NoiseSpec::gaussian(num(1, 1.0));
    if (parts[0] == "uniform") return NoiseSpec::uniform(num(1, 1.0));
    if (parts[0] == "student") return NoiseSpec::scaled_student(num(1, 0.1), num(2, 4.0));
    throw SchemaError("unknown noise spec: " + spec);
}

struct RunConfig {
    // deconvolution / fitting
    std::string noise = "dirac";
    double sigma = 1.0, range = 1.0, scale = 0.1, nu = 4.0;
    std::optional<double> tau;
    std::optional<double> freq_max;
    std::size_t n_freq = 1024;
    std::optional<double> grid_lo, grid_hi;
    std::size_t grid_n = 512;
    double delta = 0.05;
    std::optional<double> psi;
    double smoothness = 1.0;
    bool decreasing = false;
    // run plumbing
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::size_t threads = 1;
    // simulation
    std::size_t m = 500, n = 500;
    std::string h_family = "power_abs";
    double affine_a = 1.0, affine_b = 0.0;
    double x_lo = -5.0, x_hi = 5.0;
    std::string noise_true = "gaussian:0.31622776601683794";
    std::string noise_deconv; // empty: same as noise_true
    // experiment
    std::vector<std::size_t> sizes = {100, 500, 1000};
    std::size_t repetitions = 20;
    bool misspecified = false;
    // eval
    std::string group;

    NoiseSpec fit_noise() const {
        if (noise == "dirac") return NoiseSpec::dirac();
        if (noise == "gaussian") return NoiseSpec::gaussian(sigma);
        if (noise == "uniform") return NoiseSpec::uniform(range);
        if (noise == "student") return NoiseSpec::scaled_student(scale, nu);
        throw SchemaError("unknown noise family: " + noise);
    }

    DeconvConfig deconv() const {
        DeconvConfig d;
        d.tau = tau;
        d.freq_max = freq_max;
        d.n_freq = n_freq;
        d.n_x = grid_n;
        if (grid_lo && grid_hi)
            d.x_grid = DeconvConfig::linspace(*grid_lo, *grid_hi, grid_n);
        return d;
    }

    MatchMergeOptions fit_options() const {
        MatchMergeOptions o;
        o.psi = psi;
        o.smoothness = smoothness;
        o.decreasing = decreasing;
        o.threads = threads;
        return o;
    }

    SimConfig sim() const {
        SimConfig s;
        s.m = m;
        s.n = n;
        s.h_family = parse_h_family(h_family);
        s.affine_a = affine_a;
        s.affine_b = affine_b;
        s.x_lo = x_lo;
        s.x_hi = x_hi;
        s.noise_true = parse_noise_compact(noise_true);
        s.noise_deconv =
            parse_noise_compact(noise_deconv.empty() ? noise_true : noise_deconv);
        s.seed = seed;
        return s;
    }

    ordered_json echo() const {
        ordered_json j;
        j["noise"] = noise;
        j["sigma"] = sigma;
        j["range"] = range;
        j["scale"] = scale;
        j["nu"] = nu;
        if (tau) j["tau"] = *tau;
        if (freq_max) j["freq_max"] = *freq_max;
        j["n_freq"] = n_freq;
        if (grid_lo) j["grid_lo"] = *grid_lo;
        if (grid_hi) j["grid_hi"] = *grid_hi;
        j["grid_n"] = grid_n;
        j["delta"] = delta;
        if (psi) j["psi"] = *psi;
        j["smoothness"] = smoothness;
        j["decreasing"] = decreasing;
        j["seed"] = seed;
        // out_dir and threads are execution plumbing: they never change the
        // numbers, and leaving them out keeps outputs byte-comparable across
        // directories and thread counts
        j["m"] = m;
        j["n"] = n;
        j["h_family"] = h_family;
        j["affine_a"] = affine_a;
        j["affine_b"] = affine_b;
        j["x_lo"] = x_lo;
        j["x_hi"] = x_hi;
        j["noise_true"] = noise_true;
        j["noise_deconv"] = noise_deconv;
        j["sizes"] = sizes;
        j["repetitions"] = repetitions;
        j["misspecified"] = misspecified;
        j["group"] = group;
        return j;
    }

    void load_json(const ordered_json& j) {
        const auto get = [&](const char* key, auto& slot) {
            if (j.contains(key)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
        };
        get("noise", noise);
        get("sigma", sigma);
        get("range", range);
        get("scale", scale);
        get("nu", nu);
        if (j.contains("tau")) tau = j.at("tau").get<double>();
        if (j.contains("freq_max")) freq_max = j.at("freq_max").get<double>();
        get("n_freq", n_freq);
        if (j.contains("grid_lo")) grid_lo = j.at("grid_lo").get<double>();
        if (j.contains("grid_hi")) grid_hi = j.at("grid_hi").get<double>();
        get("grid_n", grid_n);
        get("delta", delta);
        if (j.contains("psi")) psi = j.at("psi").get<double>();
        get("smoothness", smoothness);
        get("decreasing", decreasing);
        get("seed", seed);
        get("out_dir", out_dir);
        get("threads", threads);
        get("m", m);
        get("n", n);
        get("h_family", h_family);
        get("affine_a", affine_a);
        get("affine_b", affine_b);
        get("x_lo", x_lo);
        get("x_hi", x_hi);
        get("noise_true", noise_true);
        get("noise_deconv", noise_deconv);
        get("sizes", sizes);
        get("repetitions", repetitions);
        get("misspecified", misspecified);
        get("group", group);
    }
};

// Flags shared by every subcommand. Defaults are applied after parsing so
// that config-file values survive unless the flag was actually given.
struct CommonFlags {
    std::string config_path;
    RunConfig values;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file");
        cmd->add_option("--noise", values.noise, "noise family: dirac|gaussian|uniform|student");
        cmd->add_option("--sigma", values.sigma, "gaussian std-dev");
        cmd->add_option("--range", values.range, "uniform half-range");
        cmd->add_option("--scale", values.scale, "student scale");
        cmd->add_option("--nu", values.nu, "student degrees of freedom");
        cmd->add_option("--tau", values.tau, "spectral truncation threshold");
        cmd->add_option("--freq-max", values.freq_max, "largest frequency on the grid");
        cmd->add_option("--n-freq", values.n_freq, "frequency grid size (even)");
        cmd->add_option("--grid-lo", values.grid_lo, "output grid lower end");
        cmd->add_option("--grid-hi", values.grid_hi, "output grid upper end");
        cmd->add_option("--grid-n", values.grid_n, "output grid size");
        cmd->add_option("--delta", values.delta, "confidence level for bands");
        cmd->add_option("--psi", values.psi, "deconvolution sup-error for bands");
        cmd->add_option("--smoothness", values.smoothness, "smoothness for the default psi rate");
        cmd->add_flag("--decreasing", values.decreasing, "fit a non-increasing link");
        cmd->add_option("--seed", values.seed, "RNG seed");
        cmd->add_option("--out-dir", values.out_dir, "output directory");
        cmd->add_option("--threads", values.threads, "worker threads");
        cmd->add_option("--m", values.m, "X sample size");
        cmd->add_option("--n", values.n, "Y sample size");
        cmd->add_option("--h-family", values.h_family,
                        "link family: identity|affine|power_abs|disc_flat");
        cmd->add_option("--affine-a", values.affine_a, "affine slope");
        cmd->add_option("--affine-b", values.affine_b, "affine offset");
        cmd->add_option("--x-lo", values.x_lo, "X law lower end");
        cmd->add_option("--x-hi", values.x_hi, "X law upper end");
        cmd->add_option("--noise-true", values.noise_true, "true noise (compact spec)");
        cmd->add_option("--noise-deconv", values.noise_deconv,
                        "deconvolution noise (compact spec)");
        cmd->add_option("--sizes", values.sizes, "experiment sizes (m=n list)");
        cmd->add_option("--reps", values.repetitions, "experiment repetitions");
        cmd->add_flag("--misspecified", values.misspecified, "run the wrong-noise ablation");
        cmd->add_option("--group", values.group, "group key for eval");
        owner = cmd;
    }

    RunConfig resolve() const {
        RunConfig out;
        bool config_has_seed = false;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw SchemaError("cannot open config file: " + config_path);
            ordered_json j;
            try {
                in >> j;
            } catch (const std::exception& e) {
                throw SchemaError(std::string("config parse error: ") + e.what());
            }
            out.load_json(j);
            config_has_seed = j.contains("seed");
        }
        if (const char* env = std::getenv("LINKMERGE_SEED"); env != nullptr && !config_has_seed)
            out.seed = std::strtoull(env, nullptr, 10);
        // flags override file values only when given on the command line
        const RunConfig& f = values;
        const auto take = [&](const char* flag, auto member) {
            if (owner->count(flag)) out.*member = f.*member;
        };
        take("--noise", &RunConfig::noise);
        take("--sigma", &RunConfig::sigma);
        take("--range", &RunConfig::range);
        take("--scale", &RunConfig::scale);
        take("--nu", &RunConfig::nu);
        take("--tau", &RunConfig::tau);
        take("--freq-max", &RunConfig::freq_max);
        take("--n-freq", &RunConfig::n_freq);
        take("--grid-lo", &RunConfig::grid_lo);
        take("--grid-hi", &RunConfig::grid_hi);
        take("--grid-n", &RunConfig::grid_n);
        take("--delta", &RunConfig::delta);
        take("--psi", &RunConfig::psi);
        take("--smoothness", &RunConfig::smoothness);
        take("--decreasing", &RunConfig::decreasing);
        take("--seed", &RunConfig::seed);
        take("--out-dir", &RunConfig::out_dir);
        take("--threads", &RunConfig::threads);
        take("--m", &RunConfig::m);
        take("--n", &RunConfig::n);
        take("--h-family", &RunConfig::h_family);
        take("--affine-a", &RunConfig::affine_a);
        take("--affine-b", &RunConfig::affine_b);
        take("--x-lo", &RunConfig::x_lo);
        take("--x-hi", &RunConfig::x_hi);
        take("--noise-true", &RunConfig::noise_true);
        take("--noise-deconv", &RunConfig::noise_deconv);
        take("--sizes", &RunConfig::sizes);
        take("--reps", &RunConfig::repetitions);
        take("--misspecified", &RunConfig::misspecified);
        take("--group", &RunConfig::group);
        return out;
    }

    CLI::App* owner = nullptr;
};

std::string config_comment(const std::string& command, const RunConfig& cfg) {
    ordered_json j;
    j["command"] = command;
    j["config"] = cfg.echo();
    return j.dump();
}

Dataset load_dataset(const std::string& path) {
    try {
        return read_dataset_csv(path);
    } catch (const std::exception& e) {
        throw SchemaError(e.what());
    }
}

std::string link_csv(const std::vector<LinkEstimate>& estimates,
                     const std::string& comment) {
    std::string out = "# " + comment + "\n";
    out += "group_key,u,h_hat,band_lo,band_hi\n";
    for (const auto& est : estimates) {
        for (std::size_t i = 0; i < est.u_grid.size(); ++i) {
            out += est.group_key;
            out += ',' + format_double(est.u_grid[i]);
            out += ',' + format_double(est.h_hat[i]);
            if (!est.band_lo.empty()) {
                out += ',' + format_double(est.band_lo[i]);
                out += ',' + format_double(est.band_hi[i]);
            } else {
                out += ",,";
            }
            out += '\n';
        }
    }
    return out;
}

ordered_json diagnostics_json(const LinkEstimate& est) {
    ordered_json d;
    d["group_key"] = est.group_key;
    d["n_z"] = est.diagnostics.n_z;
    d["psi"] = est.diagnostics.psi;
    d["psi_indicative"] = est.diagnostics.psi_indicative;
    d["phi"] = est.diagnostics.phi;
    d["delta"] = est.diagnostics.delta;
    d["tau"] = est.diagnostics.tau;
    d["cf_warnings"] = est.diagnostics.cf_warnings;
    d["points"] = est.u_grid.size();
    return d;
}

int cmd_fit(const std::string& x_csv, const std::string& y_csv, const RunConfig& cfg) {
    const Dataset dx = load_dataset(x_csv);
    const Dataset dy = load_dataset(y_csv);

    GroupMap groups;
    try {
        groups = group_exact(dx, dy);
    } catch (const std::exception& e) {
        throw SchemaError(e.what());
    }
    if (groups.groups.empty())
        throw NoCommonContext("no common context values between " + x_csv + " and " + y_csv);

    const auto result =
        match_merge(groups, cfg.fit_noise(), cfg.deconv(), cfg.delta, cfg.fit_options());

    const std::string comment = config_comment("fit", cfg);
    fs::create_directories(cfg.out_dir);
    write_file_atomic(fs::path(cfg.out_dir) / "link.csv", link_csv(result.estimates, comment));

    ordered_json summary;
    summary["command"] = "fit";
    summary["config"] = cfg.echo();
    summary["inputs"] = {{"x_csv", x_csv}, {"y_csv", y_csv},
                         {"x_rows", dx.rows()}, {"y_rows", dy.rows()}};
    ordered_json fitted = ordered_json::array();
    for (const auto& est : result.estimates) fitted.push_back(est.group_key);
    summary["groups"] = {{"fitted", fitted},
                         {"skipped", result.skipped},
                         {"dropped_x_rows", groups.dropped_x},
                         {"dropped_y_rows", groups.dropped_y}};
    ordered_json failures = ordered_json::array();
    for (const auto& f : result.failures)
        failures.push_back({{"group_key", f.group_key}, {"message", f.message}});
    summary["failures"] = failures;
    ordered_json diags = ordered_json::array();
    for (const auto& est : result.estimates) diags.push_back(diagnostics_json(est));
    summary["diagnostics"] = diags;
    write_file_atomic(fs::path(cfg.out_dir) / "summary.json", summary.dump(2) + "\n");

    if (!result.failures.empty())
        throw NumericError("fit failed for group '" + result.failures.front().group_key
                           + "': " + result.failures.front().message);
    return 0;
}

int cmd_fit_sep(const std::string& x_csv, const std::string& y_csv, const RunConfig& cfg) {
    const Dataset dx = load_dataset(x_csv);
    const Dataset dy = load_dataset(y_csv);

    SepFitResult sep;
    try {
        sep = match_merge_sep(dx, dy, cfg.fit_noise(), cfg.deconv(), cfg.delta,
                              cfg.fit_options());
    } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        if (what.find("context") != std::string::npos) throw SchemaError(what);
        throw NumericError(what);
    } catch (const std::exception& e) {
        throw NumericError(e.what());
    }

    const std::string comment = config_comment("fit-sep", cfg);
    fs::create_directories(cfg.out_dir);
    write_file_atomic(fs::path(cfg.out_dir) / "link.csv", link_csv({sep.estimate}, comment));

    ordered_json summary;
    summary["command"] = "fit-sep";
    summary["config"] = cfg.echo();
    summary["inputs"] = {{"x_csv", x_csv}, {"y_csv", y_csv},
                         {"x_rows", dx.rows()}, {"y_rows", dy.rows()}};
    summary["model_x"] = {{"intercept", sep.model_x.intercept},
                          {"coefficients", sep.model_x.coefficients}};
    summary["model_y"] = {{"intercept", sep.model_y.intercept},
                          {"coefficients", sep.model_y.coefficients}};
    summary["diagnostics"] = ordered_json::array({diagnostics_json(sep.estimate)});
    write_file_atomic(fs::path(cfg.out_dir) / "summary.json", summary.dump(2) + "\n");
    return 0;
}

int cmd_simulate(const RunConfig& cfg) {
    SimConfig sim;
    try {
        sim = cfg.sim();
        sim.validate();
    } catch (const std::exception& e) {
        throw SchemaError(e.what());
    }
    const SimData data = simulate(sim);
    const std::string comment = config_comment("simulate", cfg);
    fs::create_directories(cfg.out_dir);
    write_file_atomic(fs::path(cfg.out_dir) / "x.csv", dataset_to_csv(data.dx, comment));
    write_file_atomic(fs::path(cfg.out_dir) / "y.csv", dataset_to_csv(data.dy, comment));
    std::string truth = "# " + comment + "\nx,h\n";
    for (const auto& [x, h] : data.truth)
        truth += format_double(x) + "," + format_double(h) + "\n";
    write_file_atomic(fs::path(cfg.out_dir) / "truth.csv", truth);
    return 0;
}

int cmd_eval(const std::string& link_path, const std::string& holdout_path,
             const RunConfig& cfg) {
    // reconstruct the fitted curve for the requested (or only) group
    std::ifstream in(link_path);
    if (!in) throw SchemaError("cannot open " + link_path);
    std::string line;
    bool have_header = false;
    LinkEstimate est;
    std::set<std::string> groups_seen;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!have_header) {
            if (line.rfind("group_key,u,h_hat", 0) != 0)
                throw SchemaError(link_path + ": not a link CSV");
            have_header = true;
            continue;
        }
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ss(line);
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() < 3)
            throw SchemaError(link_path + ": malformed row '" + line + "'");
        groups_seen.insert(cells[0]);
        if (!cfg.group.empty() && cells[0] != cfg.group) continue;
        if (cfg.group.empty() && groups_seen.size() > 1)
            throw SchemaError(link_path + ": multiple groups; pass --group");
        try {
            est.u_grid.push_back(std::stod(cells[1]));
            est.h_hat.push_back(std::stod(cells[2]));
        } catch (const std::exception&) {
            throw SchemaError(link_path + ": malformed row '" + line + "'");
        }
    }
    if (est.u_grid.empty())
        throw SchemaError(link_path + ": no rows for the requested group");

    std::vector<std::pair<double, double>> holdout;
    try {
        holdout = read_pairs_csv(holdout_path);
    } catch (const std::exception& e) {
        throw SchemaError(e.what());
    }

    EvalReport report;
    try {
        report = evaluate(est, holdout);
    } catch (const std::exception& e) {
        throw NumericError(e.what());
    }

    ordered_json j;
    j["command"] = "eval";
    j["config"] = cfg.echo();
    j["link_csv"] = link_path;
    j["holdout_csv"] = holdout_path;
    j["mse"] = report.mse;
    j["risk"] = report.risk;
    j["n_holdout"] = report.n_holdout;
    fs::create_directories(cfg.out_dir);
    write_file_atomic(fs::path(cfg.out_dir) / "eval.json", j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_experiment(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    const std::string comment = config_comment("experiment", cfg);
    std::string csv = "# " + comment + "\n";
    if (cfg.misspecified) {
        SimConfig base;
        try {
            base = cfg.sim();
        } catch (const std::exception& e) {
            throw SchemaError(e.what());
        }
        const auto report = run_misspecified(base, cfg.repetitions, cfg.deconv(), cfg.delta);
        csv += "noise_true,noise_deconv,repetitions,median_mse_correct,iqr_mse_correct,"
               "median_mse_wrong,iqr_mse_wrong,failures\n";
        csv += report.noise_true + "," + report.noise_deconv + ","
             + std::to_string(report.repetitions) + ","
             + format_double(report.median_mse_correct) + ","
             + format_double(report.iqr_mse_correct) + ","
             + format_double(report.median_mse_wrong) + ","
             + format_double(report.iqr_mse_wrong) + ","
             + std::to_string(report.failures) + "\n";
    } else {
        std::vector<std::pair<std::size_t, std::size_t>> sizes;
        for (auto s : cfg.sizes) sizes.emplace_back(s, s);
        std::vector<NoiseSpec> noises;
        try {
            noises.push_back(parse_noise_compact(cfg.noise_true));
            if (!cfg.noise_deconv.empty() && cfg.noise_deconv != cfg.noise_true)
                noises.push_back(parse_noise_compact(cfg.noise_deconv));
        } catch (const std::exception& e) {
            throw SchemaError(e.what());
        }
        const auto cells =
            run_grid_experiment(sizes, noises, parse_h_family(cfg.h_family),
                                cfg.repetitions, cfg.seed, cfg.deconv(), cfg.delta);
        csv += "m,n,noise,h_family,repetitions,median_mse,iqr_mse,failures\n";
        for (const auto& c : cells)
            csv += std::to_string(c.m) + "," + std::to_string(c.n) + "," + c.noise + ","
                 + c.h_family + "," + std::to_string(c.repetitions) + ","
                 + format_double(c.median_mse) + "," + format_double(c.iqr_mse) + ","
                 + std::to_string(c.failures) + "\n";
    }
    write_file_atomic(fs::path(cfg.out_dir) / "results.csv", csv);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"linkmerge: estimate a monotone link between independently collected samples"};
    app.require_subcommand(1);

    std::string x_csv, y_csv, link_path, holdout_path;

    auto* fit = app.add_subcommand("fit", "fit the link per matched context group");
    fit->add_option("x_csv", x_csv, "dataset CSV for X")->required();
    fit->add_option("y_csv", y_csv, "dataset CSV for Y")->required();
    CommonFlags fit_flags;
    fit_flags.attach(fit);

    auto* fit_sep = app.add_subcommand("fit-sep", "regression-controlled fit");
    fit_sep->add_option("x_csv", x_csv, "dataset CSV for X")->required();
    fit_sep->add_option("y_csv", y_csv, "dataset CSV for Y")->required();
    CommonFlags fit_sep_flags;
    fit_sep_flags.attach(fit_sep);

    auto* simulate_cmd = app.add_subcommand("simulate", "write synthetic datasets");
    CommonFlags sim_flags;
    sim_flags.attach(simulate_cmd);

    auto* eval = app.add_subcommand("eval", "score a link curve on holdout pairs");
    eval->add_option("link_csv", link_path, "fitted link CSV")->required();
    eval->add_option("holdout_csv", holdout_path, "holdout (x,y) CSV")->required();
    CommonFlags eval_flags;
    eval_flags.attach(eval);

    auto* experiment = app.add_subcommand("experiment", "grid study / wrong-noise ablation");
    CommonFlags exp_flags;
    exp_flags.attach(experiment);

    CLI11_PARSE(app, argc, argv);

    try {
        if (fit->parsed()) return cmd_fit(x_csv, y_csv, fit_flags.resolve());
        if (fit_sep->parsed()) return cmd_fit_sep(x_csv, y_csv, fit_sep_flags.resolve());
        if (simulate_cmd->parsed()) return cmd_simulate(sim_flags.resolve());
        if (eval->parsed()) return cmd_eval(link_path, holdout_path, eval_flags.resolve());
        if (experiment->parsed()) return cmd_experiment(exp_flags.resolve());
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const NoCommonContext& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoCommonContext;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return 0;
}
