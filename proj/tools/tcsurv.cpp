// tcsurv command-line front end: simulate / fit / calibrate / predict /
// evaluate / reproduce. stdout carries data, stderr carries logs and a
// single machine-readable error line on failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tcsurv/bench.hpp"
#include "tcsurv/calibrate.hpp"
#include "tcsurv/csv.hpp"
#include "tcsurv/errors.hpp"
#include "tcsurv/models.hpp"
#include "tcsurv/onestep.hpp"
#include "tcsurv/simgen.hpp"

namespace {

using nlohmann::json;
using namespace tcsurv;

// Layered defaults: built-in < config file < command-line flag.
struct CliConfig {
    double alpha = 0.1;
    double beta = 0.05;
    double eta2 = 1e-3;
    std::size_t grid = 100;
    double c_prop = 0.5;
    std::string s_model = "auto";
    std::string g_model = "auto";
    double bandwidth = 0.0;  // 0 -> default rule
    std::uint64_t seed = 1;
    std::size_t mc = 100000;
    int jobs = 1;
};

void apply_config_file(CliConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
    if (j.contains("alpha")) cfg.alpha = j["alpha"].get<double>();
    if (j.contains("beta")) cfg.beta = j["beta"].get<double>();
    if (j.contains("eta2")) cfg.eta2 = j["eta2"].get<double>();
    if (j.contains("grid")) cfg.grid = j["grid"].get<std::size_t>();
    if (j.contains("c_prop")) cfg.c_prop = j["c_prop"].get<double>();
    if (j.contains("s_model")) cfg.s_model = j["s_model"].get<std::string>();
    if (j.contains("g_model")) cfg.g_model = j["g_model"].get<std::string>();
    if (j.contains("bandwidth")) cfg.bandwidth = j["bandwidth"].get<double>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("mc")) cfg.mc = j["mc"].get<std::size_t>();
    if (j.contains("jobs")) cfg.jobs = j["jobs"].get<int>();
}

void validate_config(const CliConfig& cfg) {
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ConfigError("alpha must be in (0,1)");
    if (!(cfg.beta > 0.0 && cfg.beta < 1.0)) throw ConfigError("beta must be in (0,1)");
    if (!(cfg.eta2 > 0.0 && cfg.eta2 < 1.0)) throw ConfigError("eta2 must be in (0,1)");
    if (cfg.grid < 1) throw ConfigError("grid size must be >= 1");
    if (!(cfg.c_prop > 0.0 && cfg.c_prop < 1.0)) throw ConfigError("c_prop must be in (0,1)");
    if (cfg.bandwidth < 0.0) throw ConfigError("bandwidth must be >= 0");
    if (cfg.mc < 1000) throw ConfigError("mc must be >= 1000");
    if (cfg.jobs < 1) throw ConfigError("jobs must be >= 1");
}

int effective_jobs(int flag_jobs) {
    if (const char* env = std::getenv("TCSURV_JOBS")) {
        try {
            const int j = std::stoi(env);
            if (j >= 1) return j;
        } catch (...) {
        }
        throw ConfigError("TCSURV_JOBS must be a positive integer");
    }
    return flag_jobs;
}

FitterChoice fitter_from_string(const std::string& s) {
    if (s == "auto") return FitterChoice::auto_choice;
    if (s == "km") return FitterChoice::km;
    if (s == "beran") return FitterChoice::beran;
    if (s == "cox") return FitterChoice::cox;
    if (s == "weibull") return FitterChoice::weibull;
    throw ConfigError("unknown model kind '" + s + "' (km|beran|cox|weibull|auto)");
}

std::unique_ptr<ConditionalSurvivalModel> fit_named(const std::string& name,
                                                    const Dataset& train, Role role,
                                                    double bandwidth) {
    FitterChoice c = fitter_from_string(name);
    if (c == FitterChoice::auto_choice)
        c = train.p() == 1 ? FitterChoice::beran
                           : (role == Role::event ? FitterChoice::cox : FitterChoice::weibull);
    switch (c) {
        case FitterChoice::km:
            return fit_km(train, role);
        case FitterChoice::beran:
            return fit_beran(train, role,
                             bandwidth > 0.0 ? bandwidth : default_beran_bandwidth(train));
        case FitterChoice::cox:
            return fit_cox(train, role);
        case FitterChoice::weibull:
            return fit_weibull(train, role);
        default:
            throw ConfigError("unresolved model kind");
    }
}

SelectionRule rule_from_string(const std::string& s) {
    if (s == "apac") return SelectionRule::apac;
    if (s == "marginal") return SelectionRule::marginal;
    throw ConfigError("unknown rule '" + s + "' (apac|marginal)");
}

void write_reports_csv(const std::vector<CoverageReport>& reports, std::ostream& out) {
    out << "tau,psi_hat,plug_in,sigma_hat,clb,n_cal\n";
    for (const auto& r : reports)
        out << format_double(r.tau) << "," << format_double(r.psi_hat) << ","
            << format_double(r.plug_in) << "," << format_double(r.sigma_hat) << ","
            << format_double(r.clb) << "," << r.n_cal << "\n";
}

json bundle_json(const CalibrationResult& sel, const ConditionalSurvivalModel& s_model,
                 const ConditionalSurvivalModel& g_model, double eta2, bool fallback_used) {
    json j;
    j["format"] = "tcsurv-bundle-v1";
    j["rule"] = sel.rule == SelectionRule::apac ? "apac" : "marginal";
    j["alpha"] = sel.alpha;
    j["beta"] = sel.beta;
    j["eta2"] = eta2;
    if (sel.selected_tau)
        j["selected_tau"] = *sel.selected_tau;
    else
        j["selected_tau"] = nullptr;
    j["fallback_zero"] = fallback_used;
    j["s_model"] = s_model.to_json();
    j["g_model"] = g_model.to_json();
    return j;
}

struct LoadedBundle {
    std::unique_ptr<ConditionalSurvivalModel> s_model;
    std::unique_ptr<ConditionalSurvivalModel> g_model;
    double tau = 0.0;
    double eta2 = 1e-3;

    LpbFunction lpb() const { return LpbFunction{tau, eta2, s_model.get(), g_model.get()}; }
};

LoadedBundle load_bundle(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open bundle '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("bundle '" + path + "': " + e.what());
    }
    if (!j.contains("format") || j["format"] != "tcsurv-bundle-v1")
        throw ConfigError("bundle '" + path + "': unrecognized format");
    LoadedBundle b;
    b.s_model = ConditionalSurvivalModel::from_json(j.at("s_model"));
    b.g_model = ConditionalSurvivalModel::from_json(j.at("g_model"));
    b.eta2 = j.at("eta2").get<double>();
    if (j.at("selected_tau").is_null()) {
        if (!j.value("fallback_zero", false))
            throw ConfigError("bundle has no selected tau and no fallback");
        b.tau = 0.0;
    } else {
        b.tau = j.at("selected_tau").get<double>();
    }
    return b;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << content;
    if (!out.good()) throw Error("write failed for '" + path + "'");
}

// ---- subcommands ----

int cmd_simulate(int setting_id, std::size_t n, std::uint64_t seed, const std::string& out_path,
                 bool exp_mean) {
    SettingSpec setting = SettingSpec::preset(setting_id);
    setting.exp_as_mean = exp_mean;
    RngStream rng(seed, 0);
    const auto records = generate(setting, n, rng);
    write_full_csv(records, out_path);
    std::cerr << "simulate: wrote " << records.size() << " records to " << out_path << "\n";
    return 0;
}

int cmd_fit(const std::string& in_path, const std::string& model_name, const std::string& role_s,
            double bandwidth, const std::string& out_path) {
    const Dataset data = read_csv(in_path);
    const Role role = role_s == "censoring" ? Role::censoring : Role::event;
    auto model = fit_named(model_name, data, role, bandwidth);
    write_text_file(out_path, model->to_json().dump(2) + "\n");
    std::cerr << "fit: " << to_string(model->kind()) << " (" << to_string(role) << ") on "
              << data.size() << " records -> " << out_path << "\n";
    return 0;
}

int cmd_calibrate(const CliConfig& cfg, const std::string& in_path, const std::string& rule_s,
                  const std::string& out_reports, const std::string& out_bundle) {
    const Dataset data = read_csv(in_path);
    const SplitIndices idx = split(data, cfg.c_prop, cfg.seed);
    const Dataset train = data.subset(idx.train);
    std::vector<ObservedRecord> cal;
    cal.reserve(idx.cal.size());
    for (std::size_t i : idx.cal) cal.push_back(data[i]);

    auto s_model = fit_named(cfg.s_model, train, Role::event, cfg.bandwidth);
    auto g_model = fit_named(cfg.g_model, train, Role::censoring, cfg.bandwidth);
    const NuisancePair nuisances{s_model.get(), g_model.get(), cfg.eta2};

    const TauGrid grid = TauGrid::uniform(cfg.grid);
    auto reports = sweep(nuisances, cal, grid, cfg.beta);
    const SelectionRule rule = rule_from_string(rule_s);
    const CalibrationResult sel = rule == SelectionRule::apac
                                      ? select_apac(std::move(reports), cfg.alpha, cfg.beta)
                                      : select_marginal(std::move(reports), cfg.alpha);
    const bool fallback_used = !sel.selected_tau.has_value();
    if (fallback_used)
        std::cerr << "calibrate: WARNING: no tau satisfied the rule; falling back to L == 0\n";

    if (!out_reports.empty()) {
        std::ostringstream ss;
        write_reports_csv(sel.reports, ss);
        write_text_file(out_reports, ss.str());
    } else {
        write_reports_csv(sel.reports, std::cout);
    }
    write_text_file(out_bundle,
                    bundle_json(sel, *s_model, *g_model, cfg.eta2, fallback_used).dump(2) + "\n");
    std::cerr << "calibrate: selected tau = "
              << (sel.selected_tau ? format_double(*sel.selected_tau) : std::string("none"))
              << " (n_train=" << train.size() << ", n_cal=" << cal.size() << ")\n";
    return 0;
}

int cmd_predict(const std::string& bundle_path, const std::string& in_path,
                const std::string& out_path) {
    const LoadedBundle bundle = load_bundle(bundle_path);
    const auto rows = read_covariates_csv(in_path);
    const LpbFunction lpb = bundle.lpb();

    std::ostringstream ss;
    const std::size_t p = rows[0].size();
    for (std::size_t k = 1; k <= p; ++k) ss << "w" << k << ",";
    ss << "lpb\n";
    for (const auto& w : rows) {
        if (w.size() != p) throw DomainError("predict: ragged covariate rows");
        for (double v : w) ss << format_double(v) << ",";
        ss << format_double(lpb(w)) << "\n";
    }
    if (out_path.empty())
        std::cout << ss.str();
    else
        write_text_file(out_path, ss.str());
    std::cerr << "predict: scored " << rows.size() << " rows\n";
    return 0;
}

int cmd_evaluate(const CliConfig& cfg, const std::string& bundle_path, const std::string& in_path,
                 const std::string& out_path, int setting_id, bool exp_mean) {
    const LoadedBundle bundle = load_bundle(bundle_path);
    const auto test = read_full_csv(in_path);
    const LpbFunction lpb = bundle.lpb();
    RunMetrics m = evaluate(lpb, test);
    if (setting_id > 0) {
        SettingSpec setting = SettingSpec::preset(setting_id);
        setting.exp_as_mean = exp_mean;
        RngStream rng(cfg.seed, 1);
        m.true_coverage = true_coverage(
            setting, [&](std::span<const double> w) { return lpb(w); }, cfg.mc, rng);
    }
    std::ostringstream ss;
    ss << "empirical_coverage,average_lpb,true_coverage,n_test\n"
       << format_double(m.empirical_coverage) << "," << format_double(m.average_lpb) << ","
       << format_double(m.true_coverage) << "," << m.n_test << "\n";
    if (out_path.empty())
        std::cout << ss.str();
    else
        write_text_file(out_path, ss.str());
    return 0;
}

int cmd_reproduce(const CliConfig& cfg, int setting_id, const std::vector<std::size_t>& n_values,
                  std::size_t reps, const std::string& rule_s, const std::string& out_dir,
                  int jobs, bool exp_mean) {
    ReplicationConfig rc;
    rc.setting = SettingSpec::preset(setting_id);
    rc.setting.exp_as_mean = exp_mean;
    rc.reps = reps;
    rc.rule = rule_from_string(rule_s);
    rc.alpha = cfg.alpha;
    rc.beta = cfg.beta;
    rc.eta2 = cfg.eta2;
    rc.grid_size = cfg.grid;
    rc.s_fitter = fitter_from_string(cfg.s_model);
    rc.g_fitter = fitter_from_string(cfg.g_model);
    rc.bandwidth = cfg.bandwidth;
    rc.base_seed = cfg.seed;
    rc.n_mc = cfg.mc;
    rc.jobs = jobs;

    const ProportionStudy study = proportion_study(rc, n_values);

    std::filesystem::create_directories(out_dir);
    const auto path = [&](const char* name) {
        return (std::filesystem::path(out_dir) / name).string();
    };

    std::ostringstream per_rep;
    per_rep << "n,rep,selected_tau,empirical_coverage,average_lpb,true_coverage,"
               "n_train,n_cal,n_test\n";
    std::ostringstream study_csv;
    study_csv << "n,reps,failures,proportion,wilson_lo,wilson_hi,mean_true_coverage,"
                 "mean_empirical_coverage,mean_average_lpb\n";
    std::ostringstream plot_csv;
    plot_csv << "n,proportion,wilson_lo,wilson_hi\n";
    std::ostringstream failures;

    for (const auto& rs : study.per_n) {
        for (const auto& m : rs.metrics) {
            per_rep << rs.n << "," << m.rep << ","
                    << (m.selected_tau ? format_double(*m.selected_tau) : std::string("none"))
                    << "," << format_double(m.empirical_coverage) << ","
                    << format_double(m.average_lpb) << "," << format_double(m.true_coverage)
                    << "," << m.n_train << "," << m.n_cal << "," << m.n_test << "\n";
        }
        study_csv << rs.n << "," << rs.reps << "," << rs.failures << ","
                  << format_double(rs.proportion) << "," << format_double(rs.wilson.lo) << ","
                  << format_double(rs.wilson.hi) << "," << format_double(rs.mean_true_coverage)
                  << "," << format_double(rs.mean_empirical_coverage) << ","
                  << format_double(rs.mean_average_lpb) << "\n";
        plot_csv << rs.n << "," << format_double(rs.proportion) << ","
                 << format_double(rs.wilson.lo) << "," << format_double(rs.wilson.hi) << "\n";
        for (const auto& msg : rs.failure_messages) failures << "n=" << rs.n << " " << msg << "\n";
    }
    write_text_file(path("per_rep.csv"), per_rep.str());
    write_text_file(path("study.csv"), study_csv.str());
    write_text_file(path("plot_data.csv"), plot_csv.str());
    if (!failures.str().empty()) write_text_file(path("failures.log"), failures.str());

    for (const auto& rs : study.per_n)
        std::cerr << "reproduce: n=" << rs.n << " proportion=" << rs.proportion << " ["
                  << rs.wilson.lo << ", " << rs.wilson.hi << "] failures=" << rs.failures << "\n";
    return 0;
}

std::string error_kind(const std::exception& e) {
    if (dynamic_cast<const SchemaError*>(&e)) return "schema";
    if (dynamic_cast<const ParseError*>(&e)) return "parse";
    if (dynamic_cast<const SizeError*>(&e)) return "size";
    if (dynamic_cast<const ConfigError*>(&e)) return "config";
    if (dynamic_cast<const DomainError*>(&e)) return "domain";
    if (dynamic_cast<const FitError*>(&e)) return "fit";
    if (dynamic_cast<const NumericGuardError*>(&e)) return "numeric_guard";
    if (dynamic_cast<const NoSelectionError*>(&e)) return "no_selection";
    if (dynamic_cast<const Error*>(&e)) return "io";
    return "internal";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tcsurv: lower prediction bounds for right-censored survival times"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags override it)")
        ->configurable(false);

    CliConfig cfg;
    // Flag storage; values only applied over the config file when the
    // user actually passed them.
    double f_alpha = cfg.alpha, f_beta = cfg.beta, f_eta2 = cfg.eta2, f_cprop = cfg.c_prop,
           f_bandwidth = cfg.bandwidth;
    std::size_t f_grid = cfg.grid, f_mc = cfg.mc;
    std::uint64_t f_seed = cfg.seed;
    std::string f_smodel = cfg.s_model, f_gmodel = cfg.g_model;
    int f_jobs = cfg.jobs;

    // simulate
    auto* sim = app.add_subcommand("simulate", "Draw synthetic data from a synthetic setting (1..6)");
    int sim_setting = 1;
    std::size_t sim_n = 100;
    std::string sim_out;
    bool sim_exp_mean = false;
    sim->add_option("--setting", sim_setting, "Setting id 1..6")->required();
    sim->add_option("--n", sim_n, "Number of records")->required();
    auto* sim_seed = sim->add_option("--seed", f_seed, "RNG seed");
    sim->add_option("--out", sim_out, "Output CSV (w1..wp,t,c,y,delta)")->required();
    sim->add_flag("--exp-mean", sim_exp_mean, "Read Exp(theta) as mean 1/rate");

    // fit
    auto* fit = app.add_subcommand("fit", "Fit one conditional survival model");
    std::string fit_in, fit_model = "auto", fit_role = "event", fit_out;
    fit->add_option("--in", fit_in, "Input CSV (w1..wp,y,delta)")->required();
    fit->add_option("--model", fit_model, "km|beran|cox|weibull|auto");
    fit->add_option("--role", fit_role, "event|censoring")
        ->check(CLI::IsMember({"event", "censoring"}));
    auto* fit_bw = fit->add_option("--bandwidth", f_bandwidth, "Beran bandwidth (0 = default)");
    fit->add_option("--out", fit_out, "Output model JSON")->required();

    // calibrate
    auto* cal = app.add_subcommand("calibrate", "Split, fit nuisances, sweep tau, select");
    std::string cal_in, cal_rule = "apac", cal_reports, cal_bundle;
    cal->add_option("--in", cal_in, "Input CSV (w1..wp,y,delta)")->required();
    cal->add_option("--rule", cal_rule, "apac|marginal")
        ->check(CLI::IsMember({"apac", "marginal"}));
    auto* cal_alpha = cal->add_option("--alpha", f_alpha, "Miscoverage level");
    auto* cal_beta = cal->add_option("--beta", f_beta, "CLB confidence level");
    auto* cal_eta2 = cal->add_option("--eta2", f_eta2, "Censoring-quantile cap level");
    auto* cal_grid = cal->add_option("--grid", f_grid, "Tau grid size");
    auto* cal_cprop = cal->add_option("--c-prop", f_cprop, "Calibration fraction");
    auto* cal_seed = cal->add_option("--seed", f_seed, "Split seed");
    auto* cal_smodel = cal->add_option("--s-model", f_smodel, "Event-time fitter");
    auto* cal_gmodel = cal->add_option("--g-model", f_gmodel, "Censoring fitter");
    auto* cal_bw = cal->add_option("--bandwidth", f_bandwidth, "Beran bandwidth (0 = default)");
    cal->add_option("--out-reports", cal_reports, "Report CSV path (default: stdout)");
    cal->add_option("--out-bundle", cal_bundle, "Model+LPB JSON bundle path")->required();

    // predict
    auto* pred = app.add_subcommand("predict", "Evaluate the bundled LPB on covariate rows");
    std::string pred_bundle, pred_in, pred_out;
    pred->add_option("--bundle", pred_bundle, "Bundle JSON from calibrate")->required();
    pred->add_option("--in", pred_in, "Input CSV with w1..wp")->required();
    pred->add_option("--out", pred_out, "Output CSV (default: stdout)");

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "Score a bundle against latent outcomes");
    std::string ev_bundle, ev_in, ev_out;
    int ev_setting = 0;
    bool ev_exp_mean = false;
    ev->add_option("--bundle", ev_bundle, "Bundle JSON from calibrate")->required();
    ev->add_option("--in", ev_in, "Input CSV with w1..wp and latent t")->required();
    ev->add_option("--out", ev_out, "Output CSV (default: stdout)");
    ev->add_option("--setting", ev_setting, "Setting id for the MC coverage oracle");
    auto* ev_mc = ev->add_option("--mc", f_mc, "MC draws for the oracle");
    auto* ev_seed = ev->add_option("--seed", f_seed, "Oracle RNG seed");
    ev->add_flag("--exp-mean", ev_exp_mean, "Read Exp(theta) as mean 1/rate");

    // reproduce
    auto* rep = app.add_subcommand("reproduce", "Replication study over one or more sizes n");
    int rep_setting = 1;
    std::vector<std::size_t> rep_n{1000};
    std::size_t rep_reps = 100;
    std::string rep_rule = "apac", rep_out;
    bool rep_exp_mean = false;
    rep->add_option("--setting", rep_setting, "Setting id 1..6")->required();
    rep->add_option("--n", rep_n, "Per-part sizes (repeat or comma-separate)")
        ->required()
        ->delimiter(',');
    rep->add_option("--reps", rep_reps, "Replicates per n");
    rep->add_option("--rule", rep_rule, "apac|marginal")
        ->check(CLI::IsMember({"apac", "marginal"}));
    auto* rep_alpha = rep->add_option("--alpha", f_alpha, "Miscoverage level");
    auto* rep_beta = rep->add_option("--beta", f_beta, "CLB confidence level");
    auto* rep_eta2 = rep->add_option("--eta2", f_eta2, "Censoring-quantile cap level");
    auto* rep_grid = rep->add_option("--grid", f_grid, "Tau grid size");
    auto* rep_seed = rep->add_option("--seed", f_seed, "Base seed");
    auto* rep_smodel = rep->add_option("--s-model", f_smodel, "Event-time fitter");
    auto* rep_gmodel = rep->add_option("--g-model", f_gmodel, "Censoring fitter");
    auto* rep_bw = rep->add_option("--bandwidth", f_bandwidth, "Beran bandwidth (0 = default)");
    auto* rep_mc = rep->add_option("--mc", f_mc, "MC draws for the oracle");
    auto* rep_jobs = rep->add_option("--jobs", f_jobs, "Worker threads");
    rep->add_option("--out", rep_out, "Output directory")->required();
    rep->add_flag("--exp-mean", rep_exp_mean, "Read Exp(theta) as mean 1/rate");

    // Let the global --config appear after a subcommand name too.
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // 0 for --help/--version, 1 for any usage error.
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (!config_path.empty()) apply_config_file(cfg, config_path);
        // Flags beat the config file.
        if (cal_alpha->count() || rep_alpha->count()) cfg.alpha = f_alpha;
        if (cal_beta->count() || rep_beta->count()) cfg.beta = f_beta;
        if (cal_eta2->count() || rep_eta2->count()) cfg.eta2 = f_eta2;
        if (cal_grid->count() || rep_grid->count()) cfg.grid = f_grid;
        if (cal_cprop->count()) cfg.c_prop = f_cprop;
        if (cal_seed->count() || sim_seed->count() || ev_seed->count() || rep_seed->count())
            cfg.seed = f_seed;
        if (cal_smodel->count() || rep_smodel->count()) cfg.s_model = f_smodel;
        if (cal_gmodel->count() || rep_gmodel->count()) cfg.g_model = f_gmodel;
        if (cal_bw->count() || fit_bw->count() || rep_bw->count()) cfg.bandwidth = f_bandwidth;
        if (ev_mc->count() || rep_mc->count()) cfg.mc = f_mc;
        if (rep_jobs->count()) cfg.jobs = f_jobs;
        validate_config(cfg);

        if (sim->parsed()) return cmd_simulate(sim_setting, sim_n, cfg.seed, sim_out, sim_exp_mean);
        if (fit->parsed()) return cmd_fit(fit_in, fit_model, fit_role, cfg.bandwidth, fit_out);
        if (cal->parsed()) return cmd_calibrate(cfg, cal_in, cal_rule, cal_reports, cal_bundle);
        if (pred->parsed()) return cmd_predict(pred_bundle, pred_in, pred_out);
        if (ev->parsed())
            return cmd_evaluate(cfg, ev_bundle, ev_in, ev_out, ev_setting, ev_exp_mean);
        if (rep->parsed())
            return cmd_reproduce(cfg, rep_setting, rep_n, rep_reps, rep_rule, rep_out,
                                 effective_jobs(cfg.jobs), rep_exp_mean);
        std::cerr << app.help();
        return 1;
    } catch (const std::exception& e) {
        json err;
        err["error"] = {{"kind", error_kind(e)}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    }
}
