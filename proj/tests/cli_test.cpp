// Exercises the installed binary end to end through std::system.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::cerr << "FAIL: " << what << "\n";
    }
}

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run(const std::string& args, const fs::path& dir) {
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    const std::string cmd =
        std::string(TCSURV_BIN) + " " + args + " > " + out.string() + " 2> " + err.string();
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = (raw == -1) ? -1 : WEXITSTATUS(raw);
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::size_t line_count(const std::string& text) {
    std::size_t n = 0;
    for (char c : text) n += (c == '\n');
    return n;
}

}  // namespace

int main() {
    const fs::path dir = fs::temp_directory_path() / "tcsurv_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto at = [&](const char* name) { return (dir / name).string(); };

    // usage errors -> exit 1
    expect(run("calibrate", dir).exit_code == 1, "calibrate without flags exits 1");
    expect(run("--definitely-not-a-flag", dir).exit_code == 1, "unknown flag exits 1");
    {
        const auto help = run("--help", dir);
        expect(help.exit_code == 0, "--help exits 0");
        expect(help.out.find("simulate") != std::string::npos, "help lists subcommands");
        const auto sub_help = run("calibrate --help", dir);
        expect(sub_help.out.find("--alpha") != std::string::npos, "subcommand help lists flags");
        expect(sub_help.out.find("--eta2") != std::string::npos, "subcommand help lists eta2");
    }

    // simulate: 101-line file, idempotent in the seed
    {
        const auto r = run("simulate --setting 1 --n 100 --seed 7 --out " + at("a.csv"), dir);
        expect(r.exit_code == 0, "simulate exits 0");
        expect(line_count(slurp(dir / "a.csv")) == 101, "simulate writes header + n rows");
        run("simulate --setting 1 --n 100 --seed 7 --out " + at("a2.csv"), dir);
        expect(slurp(dir / "a.csv") == slurp(dir / "a2.csv"), "same seed, byte-identical");
        run("simulate --setting 1 --n 100 --seed 8 --out " + at("a3.csv"), dir);
        expect(slurp(dir / "a.csv") != slurp(dir / "a3.csv"), "different seed differs");
    }

    // data errors -> exit 2 with a machine-readable stderr line
    {
        const auto r = run("calibrate --in " + at("missing.csv") + " --out-bundle " +
                               at("b0.json"),
                           dir);
        expect(r.exit_code == 2, "missing input file exits 2");
        expect(r.err.find("{\"error\":{") != std::string::npos, "machine-readable error line");
    }

    // pipeline: simulate -> calibrate -> predict -> evaluate
    {
        run("simulate --setting 1 --n 900 --seed 11 --out " + at("data.csv"), dir);
        const auto cal = run("calibrate --in " + at("data.csv") +
                                 " --rule marginal --grid 40 --seed 3 --out-reports " +
                                 at("reports.csv") + " --out-bundle " + at("bundle.json"),
                             dir);
        expect(cal.exit_code == 0, "calibrate exits 0");
        expect(line_count(slurp(dir / "reports.csv")) == 41, "one report row per grid tau");

        const auto pred = run("predict --bundle " + at("bundle.json") + " --in " +
                                  at("data.csv") + " --out " + at("lpb.csv"),
                              dir);
        expect(pred.exit_code == 0, "predict exits 0");
        expect(line_count(slurp(dir / "lpb.csv")) == 901, "one LPB per input row");

        const auto ev = run("evaluate --bundle " + at("bundle.json") + " --in " + at("data.csv"),
                            dir);
        expect(ev.exit_code == 0, "evaluate exits 0");
        expect(ev.out.find("empirical_coverage") != std::string::npos, "metrics on stdout");
        expect(ev.out.find("nan") != std::string::npos, "oracle column empty without --setting");

        const auto ev2 = run("evaluate --bundle " + at("bundle.json") + " --in " +
                                 at("data.csv") + " --setting 1 --mc 20000 --seed 2",
                             dir);
        expect(ev2.exit_code == 0, "evaluate with oracle exits 0");
        expect(ev2.out.find("nan") == std::string::npos, "oracle column filled with --setting");

        // byte-identical reruns
        run("calibrate --in " + at("data.csv") +
                " --rule marginal --grid 40 --seed 3 --out-reports " + at("reports2.csv") +
                " --out-bundle " + at("bundle2.json"),
            dir);
        expect(slurp(dir / "reports.csv") == slurp(dir / "reports2.csv"),
               "calibrate reports idempotent");
        expect(slurp(dir / "bundle.json") == slurp(dir / "bundle2.json"),
               "calibrate bundle idempotent");
    }

    // config file layering: config overrides defaults, flags override config
    {
        std::ofstream cfg(dir / "cfg.json");
        cfg << "{\"alpha\": 0.2, \"grid\": 15}\n";
        cfg.close();
        run("calibrate --config " + at("cfg.json") + " --in " + at("data.csv") +
                " --out-reports " + at("r_cfg.csv") + " --out-bundle " + at("b_cfg.json"),
            dir);
        const std::string bundle = slurp(dir / "b_cfg.json");
        expect(bundle.find("\"alpha\": 0.2") != std::string::npos, "config file sets alpha");
        expect(line_count(slurp(dir / "r_cfg.csv")) == 16, "config file sets grid");

        run("calibrate --config " + at("cfg.json") + " --alpha 0.3 --in " + at("data.csv") +
                " --out-reports " + at("r_flag.csv") + " --out-bundle " + at("b_flag.json"),
            dir);
        expect(slurp(dir / "b_flag.json").find("\"alpha\": 0.3") != std::string::npos,
               "flag overrides config");
    }

    // fit: model json audit document
    {
        const auto r = run("fit --in " + at("data.csv") + " --model km --out " + at("km.json"),
                           dir);
        expect(r.exit_code == 0, "fit exits 0");
        expect(slurp(dir / "km.json").find("\"kind\": \"km\"") != std::string::npos,
               "model json carries kind");
    }

    // reproduce: tiny study, all output files present
    {
        const auto r = run(
            "reproduce --setting 1 --n 120,150 --reps 4 --rule marginal --seed 5 --mc 20000 "
            "--grid 20 --jobs 2 --out " +
                at("study"),
            dir);
        expect(r.exit_code == 0, "reproduce exits 0");
        expect(fs::exists(dir / "study" / "per_rep.csv"), "per-rep csv written");
        expect(fs::exists(dir / "study" / "study.csv"), "study csv written");
        expect(fs::exists(dir / "study" / "plot_data.csv"), "plot-data csv written");
        expect(line_count(slurp(dir / "study" / "plot_data.csv")) == 3, "one plot row per n");
    }

    if (failures == 0) {
        std::cout << "cli test: all checks passed\n";
        return 0;
    }
    std::cout << "cli test: " << failures << " checks failed\n";
    return 1;
}
