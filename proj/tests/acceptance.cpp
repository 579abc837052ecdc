// Acceptance suite: eight numbered criteria, each printing one
// [PASS]/[FAIL] line. Run all (no args) or one via --criterion N.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fixtures.hpp"
#include "tcsurv/bench.hpp"
#include "tcsurv/calibrate.hpp"
#include "tcsurv/csv.hpp"
#include "tcsurv/dataset.hpp"
#include "tcsurv/errors.hpp"
#include "tcsurv/models.hpp"
#include "tcsurv/onestep.hpp"
#include "tcsurv/rng.hpp"
#include "tcsurv/simgen.hpp"
#include "tcsurv/stats.hpp"
#include "tcsurv/survival_curve.hpp"

using namespace tcsurv;
using fixtures::AnalyticModel;
using fixtures::DiscreteLaw;
using fixtures::FixedCurveModel;

namespace {

const std::vector<double> kW{0.0};

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int worker_count() {
    if (const char* env = std::getenv("TCSURV_JOBS")) {
        const int j = std::atoi(env);
        if (j >= 1) return j;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::min(hw == 0 ? 1u : hw, 8u));
}

// ---- criterion 1: exact EIF enumeration ----
Outcome criterion1() {
    Outcome o;
    FixedCurveModel s{SurvivalCurve{{1.0, 2.0}, {0.8, 0.5}}, Role::event};
    FixedCurveModel g{SurvivalCurve{{}, {}}, Role::censoring};
    EifContext ctx{&s, &g, LpbFunction{0.5, 1e-3, &s, &g}};
    DiscreteLaw law;
    law.t_atoms = {{1.0, 0.2}, {2.0, 0.3}, {3.0, 0.5}};
    const double mean_phi = fixtures::enumerate_mean_phi(ctx, law, kW);
    const double err = std::fabs(mean_phi - 0.5);
    o.pass = err <= 1e-12 && ctx.lpb(kW) == 2.0;
    o.detail << "E[phi]=" << mean_phi << ", |err|=" << err;
    return o;
}

// ---- criterion 2: exact double robustness ----
Outcome criterion2() {
    Outcome o;
    DiscreteLaw law;
    law.t_atoms = {{1.0, 0.2}, {2.0, 0.3}, {3.0, 0.5}};

    FixedCurveModel s_true{SurvivalCurve{{1.0, 2.0}, {0.8, 0.5}}, Role::event};
    FixedCurveModel g_true{SurvivalCurve{{}, {}}, Role::censoring};
    FixedCurveModel g_wrong{SurvivalCurve{{0.7, 1.5, 2.5}, {0.9, 0.6, 0.35}}, Role::censoring};
    FixedCurveModel s_wrong{SurvivalCurve{{0.8, 2.0}, {0.7, 0.45}}, Role::event};

    EifContext a{&s_true, &g_wrong, LpbFunction{0.5, 1e-3, &s_true, &g_wrong}};
    const double ma = fixtures::enumerate_mean_phi(a, law, kW);
    EifContext b{&s_wrong, &g_true, LpbFunction{0.45, 1e-3, &s_wrong, &g_true}};
    const double mb = fixtures::enumerate_mean_phi(b, law, kW);

    const double ea = std::fabs(ma - 0.5), eb = std::fabs(mb - 0.5);
    o.pass = ea <= 1e-12 && eb <= 1e-12 && a.lpb(kW) == 2.0 && b.lpb(kW) == 2.0;
    o.detail << "G-wrong err=" << ea << ", S-wrong err=" << eb;
    return o;
}

// ---- criterion 3: remainder-identity identity ----
Outcome criterion3() {
    Outcome o;
    const auto setting = SettingSpec::preset(1);
    std::vector<double> grid;
    for (int k = 0; k < 256; ++k)
        grid.push_back(std::exp(-6.0 + 10.0 * static_cast<double>(k) / 255.0));

    AnalyticModel s_pert(
        [&](double t, std::span<const double> w) {
            return std::pow(true_conditional_survival(setting, t, w), 1.35);
        },
        grid, Role::event);
    AnalyticModel g_pert(
        [&](double t, std::span<const double> w) {
            return std::pow(setting.censoring_survival(t, w), 0.7);
        },
        grid, Role::censoring);

    const LpbFunction lpb{0.4, 1e-3, &s_pert, &g_pert};
    RngStream rng(9301, 0);
    const auto r = remainder_identity(s_pert, g_pert, lpb, setting, 100000, rng);
    const double gap = std::fabs(r.lhs - r.rhs);
    o.pass = gap <= 3.0 * r.se_diff;
    o.detail << "lhs=" << r.lhs << " rhs=" << r.rhs << " |gap|=" << gap
             << " 3*se_diff=" << 3.0 * r.se_diff;
    return o;
}

// ---- criterion 4: one-step identity ----
SurvivalCurve random_step_curve(RngStream& rng, double floor_prob, double t_max) {
    SurvivalCurve c;
    const int m = 2 + static_cast<int>(rng.uniform01() * 25);
    double t = 0.0, s = 1.0;
    for (int j = 0; j < m; ++j) {
        t += rng.uniform_open() * (t_max / m);
        s *= 0.3 + 0.7 * rng.uniform01();
        if (s < floor_prob) s = floor_prob;
        c.times.push_back(t);
        c.probs.push_back(s);
    }
    return c;
}

Outcome criterion4() {
    Outcome o;
    RngStream rng(9401, 0);
    double worst = 0.0;
    for (int inst = 0; inst < 100; ++inst) {
        FixedCurveModel s{random_step_curve(rng, 1e-3, 10.0), Role::event};
        FixedCurveModel g{random_step_curve(rng, 1e-4, 10.0), Role::censoring};
        EifContext ctx{&s, &g, LpbFunction{rng.uniform(0.0, 0.9), 1e-3, &s, &g}};
        const std::size_t n = 50 + static_cast<std::size_t>(rng.uniform01() * 150);
        std::vector<ObservedRecord> cal;
        for (std::size_t i = 0; i < n; ++i)
            cal.push_back({kW, rng.uniform_open() * 12.0, rng.uniform01() < 0.6 ? 1 : 0});
        const auto rep = one_step(ctx, cal, 0.05);
        std::vector<double> dvals(n);
        for (std::size_t i = 0; i < n; ++i) dvals[i] = phi(ctx, cal[i]) - rep.plug_in;
        worst = std::max(worst, std::fabs(rep.psi_hat - (rep.plug_in + mean(dvals))));
    }
    o.pass = worst <= 1e-12;
    o.detail << "max |psi - (plug-in + mean D)| = " << worst;
    return o;
}

// ---- criterion 5: marginal coverage at desk scale ----
Outcome criterion5() {
    Outcome o;
    ReplicationConfig cfg;
    cfg.setting = SettingSpec::preset(1);
    cfg.n = 1000;
    cfg.reps = 100;
    cfg.rule = SelectionRule::marginal;
    cfg.base_seed = 20260801;
    cfg.n_mc = 100000;
    cfg.jobs = worker_count();
    const auto study = run_replications(cfg);
    o.pass = study.failures <= 5 && study.mean_true_coverage >= 0.88 &&
             study.mean_true_coverage <= 0.93;
    o.detail << "mean oracle coverage=" << study.mean_true_coverage << " (band [0.88,0.93]), "
             << "failures=" << study.failures << ", jobs=" << cfg.jobs;
    return o;
}

// ---- criterion 6: APAC proportion trend ----
Outcome criterion6() {
    Outcome o;
    ReplicationConfig cfg;
    cfg.setting = SettingSpec::preset(1);
    cfg.reps = 100;
    cfg.rule = SelectionRule::apac;
    cfg.alpha = 0.1;
    cfg.beta = 0.05;
    cfg.base_seed = 11;
    cfg.n_mc = 100000;
    cfg.jobs = worker_count();
    const std::vector<std::size_t> sizes{200, 500, 1000};
    const auto study = proportion_study(cfg, sizes);
    const auto& p = study.per_n;
    const bool nondecreasing = p[0].proportion <= p[1].proportion + 1e-12 &&
                               p[1].proportion <= p[2].proportion + 1e-12;
    const bool lb_ok = p[2].wilson.lo >= 0.85;
    o.pass = nondecreasing && lb_ok;
    o.detail << "proportions=" << p[0].proportion << "/" << p[1].proportion << "/"
             << p[2].proportion << ", wilson lb(n=1000)=" << p[2].wilson.lo
             << ", failures=" << p[0].failures << "/" << p[1].failures << "/" << p[2].failures
             << ", jobs=" << cfg.jobs;
    return o;
}

// ---- criterion 7: nuisance recovery ----
Outcome criterion7() {
    Outcome o;
    // Cox simulate-and-recover
    {
        RngStream rng(9701, 0);
        std::vector<ObservedRecord> recs;
        for (int i = 0; i < 2000; ++i) {
            ObservedRecord r;
            r.w = {rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0)};
            const double risk = std::exp(1.0 * r.w[0] - 0.5 * r.w[1]);
            const double t = rng.exponential(risk);
            const double c = rng.exponential(0.35);
            r.y = std::min(t, c);
            r.delta = t <= c ? 1 : 0;
            recs.push_back(std::move(r));
        }
        const auto model = fit_cox(Dataset(std::move(recs)), Role::event);
        const auto* cox = dynamic_cast<const CoxModel*>(model.get());
        const double e0 = std::fabs(cox->beta()[0] - 1.0);
        const double e1 = std::fabs(cox->beta()[1] + 0.5);
        if (e0 >= 0.1 || e1 >= 0.1) o.pass = false;
        o.detail << "cox |err|=(" << e0 << "," << e1 << ")";
    }
    // Weibull shape
    {
        RngStream rng(9702, 0);
        std::vector<ObservedRecord> recs;
        for (int i = 0; i < 5000; ++i)
            recs.push_back({{0.0}, std::sqrt(-std::log(rng.uniform_open())), 1});
        const auto model = fit_weibull(Dataset(std::move(recs)), Role::event);
        const auto* wb = dynamic_cast<const WeibullModel*>(model.get());
        const double ek = std::fabs(wb->shape() - 2.0);
        if (ek >= 0.05) o.pass = false;
        o.detail << ", weibull |shape err|=" << ek;
    }
    // KM hand fixture, exact
    {
        const Dataset d({{{0.0}, 1, 1}, {{0.0}, 2, 1}, {{0.0}, 3, 1}});
        const auto c = fit_km(d, Role::event)->curve(kW);
        const bool ok = c.times == std::vector<double>{1, 2, 3} &&
                        std::fabs(c.probs[0] - 2.0 / 3.0) < 1e-15 &&
                        std::fabs(c.probs[1] - 1.0 / 3.0) < 1e-15 && c.probs[2] == 0.0;
        if (!ok) o.pass = false;
        o.detail << ", km fixture " << (ok ? "exact" : "WRONG");
    }
    // Beran -> KM limit
    {
        RngStream rng(9703, 0);
        std::vector<ObservedRecord> recs;
        for (int i = 0; i < 100; ++i)
            recs.push_back(
                {{rng.uniform(0.0, 4.0)}, rng.exponential(0.4), rng.uniform01() < 0.6 ? 1 : 0});
        const Dataset d(std::move(recs));
        const auto beran = fit_beran(d, Role::event, 1e6);
        const auto km = fit_km(d, Role::event);
        double worst = 0.0;
        for (double w = 0.0; w <= 4.0; w += 0.5) {
            const auto bc = beran->curve(std::vector<double>{w});
            const auto kc = km->curve(std::vector<double>{w});
            for (std::size_t j = 0; j < bc.probs.size(); ++j)
                worst = std::max(worst, std::fabs(bc.probs[j] - kc.probs[j]));
        }
        if (worst > 1e-9) o.pass = false;
        o.detail << ", beran-km gap=" << worst;
    }
    return o;
}

// ---- criterion 8: property suites, >= 1000 randomized cases each ----
Outcome criterion8() {
    Outcome o;
    int suites_ok = 0;

    // curve monotonicity + product-integral reconstruction
    {
        bool ok = true;
        RngStream rng(9801, 0);
        for (int rep = 0; rep < 1000 && ok; ++rep) {
            SurvivalCurve c;
            double t = 0.0, s = 1.0;
            const int m = 1 + static_cast<int>(rng.uniform01() * 40);
            for (int j = 0; j < m; ++j) {
                t += rng.uniform_open();
                s *= 0.05 + 0.95 * rng.uniform01();
                if (s < 1e-9 || rng.uniform01() < 0.1) s = 0.0;
                c.times.push_back(t);
                c.probs.push_back(s);
            }
            c.validate();
            const auto rec = reconstruct_probs(hazard_increments(c));
            for (std::size_t j = 0; j < c.probs.size(); ++j)
                ok = ok && std::fabs(rec[j] - c.probs[j]) <= 1e-12 * std::max(c.probs[j], 1e-300);
            double prev = 1.0;
            for (double pr : c.probs) {
                ok = ok && pr <= prev;
                prev = pr;
            }
        }
        suites_ok += ok;
        o.pass = o.pass && ok;
        o.detail << "reconstruction " << (ok ? "ok" : "FAIL");
    }

    // quantile-inverse consistency
    {
        bool ok = true;
        RngStream rng(9802, 0);
        for (int rep = 0; rep < 1000 && ok; ++rep) {
            const auto c = random_step_curve(rng, 1e-6, 20.0);
            double prev = -1.0;
            for (double p = 1.0; p >= 0.0; p -= 0.0625) {
                const double q = c.quantile(p);
                ok = ok && q >= prev;
                prev = q;
            }
            for (std::size_t j = 0; j < c.times.size(); ++j)
                ok = ok && c.quantile(c.probs[j]) <= c.times[j];
        }
        suites_ok += ok;
        o.pass = o.pass && ok;
        o.detail << ", quantile " << (ok ? "ok" : "FAIL");
    }

    // LPB monotone in tau
    {
        bool ok = true;
        RngStream rng(9803, 0);
        for (int rep = 0; rep < 1000 && ok; ++rep) {
            FixedCurveModel s{random_step_curve(rng, 1e-4, 15.0), Role::event};
            FixedCurveModel g{random_step_curve(rng, 1e-4, 15.0), Role::censoring};
            double prev = -1.0;
            for (double tau = 0.0; tau < 1.0; tau += 0.1) {
                const double l = make_lpb(s, g, tau, 1e-3)(kW);
                ok = ok && l >= prev && l >= 0.0;
                prev = l;
            }
        }
        suites_ok += ok;
        o.pass = o.pass && ok;
        o.detail << ", lpb-monotone " << (ok ? "ok" : "FAIL");
    }

    // selection-rule prefix property
    {
        bool ok = true;
        RngStream rng(9804, 0);
        const double z = z_upper(0.05);
        for (int rep = 0; rep < 1000 && ok; ++rep) {
            const std::size_t m = 2 + static_cast<std::size_t>(rng.uniform01() * 20);
            std::vector<CoverageReport> reports(m);
            for (std::size_t i = 0; i < m; ++i) {
                reports[i].tau = static_cast<double>(i + 1) / static_cast<double>(m + 2);
                reports[i].psi_hat = rng.uniform(0.8, 1.0);
                reports[i].sigma_hat = rng.uniform(0.0, 0.8);
                reports[i].n_cal = 60;
            }
            const auto sel = select_apac(reports, 0.1, 0.05);
            const auto bound = [&](const CoverageReport& r) {
                return r.psi_hat - z * r.sigma_hat / std::sqrt(60.0);
            };
            if (sel.selected_tau) {
                bool prefix = true;
                std::size_t idx = 0;
                for (std::size_t i = 0; i < m; ++i) {
                    if (sel.reports[i].tau <= *sel.selected_tau) {
                        prefix = prefix && bound(sel.reports[i]) >= 0.9;
                        idx = i;
                    }
                }
                ok = ok && prefix && sel.reports[idx].tau == *sel.selected_tau;
                if (idx + 1 < m) ok = ok && bound(sel.reports[idx + 1]) < 0.9;
            } else {
                ok = ok && bound(sel.reports[0]) < 0.9;
            }
        }
        suites_ok += ok;
        o.pass = o.pass && ok;
        o.detail << ", selection-prefix " << (ok ? "ok" : "FAIL");
    }

    // split determinism + partition
    {
        bool ok = true;
        RngStream rng(9805, 0);
        for (int rep = 0; rep < 1000 && ok; ++rep) {
            const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 80);
            std::vector<ObservedRecord> recs;
            for (std::size_t i = 0; i < n; ++i)
                recs.push_back({{0.0}, rng.uniform_open(), 1});
            const Dataset d(std::move(recs));
            const double c_prop = 0.1 + 0.8 * rng.uniform01();
            const std::uint64_t seed = rng.next_u64();
            try {
                const auto a = split(d, c_prop, seed);
                const auto b = split(d, c_prop, seed);
                ok = ok && a.cal == b.cal && a.train == b.train;
                std::vector<bool> seen(n, false);
                for (auto i : a.cal) seen[i] = true;
                for (auto i : a.train) {
                    ok = ok && !seen[i];
                    seen[i] = true;
                }
                for (bool sbit : seen) ok = ok && sbit;
            } catch (const SizeError&) {
            }
        }
        suites_ok += ok;
        o.pass = o.pass && ok;
        o.detail << ", split " << (ok ? "ok" : "FAIL");
    }

    // CSV round-trip
    {
        bool ok = true;
        RngStream rng(9806, 0);
        for (int rep = 0; rep < 1000 && ok; ++rep) {
            const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform01() * 15);
            const int p = 1 + static_cast<int>(rng.uniform01() * 3);
            std::vector<ObservedRecord> recs;
            for (std::size_t i = 0; i < n; ++i) {
                ObservedRecord r;
                for (int k = 0; k < p; ++k)
                    r.w.push_back(rng.normal() * std::pow(10.0, rng.uniform(-5.0, 5.0)));
                r.y = -std::log(rng.uniform_open());
                r.delta = rng.uniform01() < 0.5 ? 1 : 0;
                recs.push_back(std::move(r));
            }
            const Dataset d(std::move(recs));
            std::stringstream io;
            write_csv(d, io);
            const Dataset back = read_csv(io);
            ok = ok && back.size() == d.size();
            for (std::size_t i = 0; ok && i < n; ++i)
                ok = back[i].w == d[i].w && back[i].y == d[i].y && back[i].delta == d[i].delta;
        }
        suites_ok += ok;
        o.pass = o.pass && ok;
        o.detail << ", csv " << (ok ? "ok" : "FAIL");
    }

    o.detail << " [" << suites_ok << "/6 suites]";
    return o;
}

struct Criterion {
    int id;
    const char* name;
    Outcome (*fn)();
    double time_limit;  // seconds; <= 0 means report-only target
    const char* target_note;
};

const Criterion kCriteria[] = {
    {1, "EIF exact-enumeration oracle", criterion1, 1.0, nullptr},
    {2, "double robustness (exact enumeration)", criterion2, 1.0, nullptr},
    {3, "remainder identity on perturbed nuisances", criterion3, 30.0, nullptr},
    {4, "one-step = plug-in + mean EIF identity", criterion4, 5.0, nullptr},
    {5, "marginal coverage, setting 1 desk scale", criterion5, -1.0,
     "target 15 min at 8 workers"},
    {6, "APAC proportion trend over n", criterion6, -1.0, "target 45 min at 8 workers"},
    {7, "nuisance recovery", criterion7, 120.0, nullptr},
    {8, "property suites (1000 cases each)", criterion8, 300.0, nullptr},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);
    }

    bool all_pass = true;
    for (const auto& c : kCriteria) {
        if (only != 0 && c.id != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        const double elapsed = seconds_since(t0);
        bool time_ok = true;
        if (c.time_limit > 0.0 && elapsed > c.time_limit) time_ok = false;
        const bool pass = o.pass && time_ok;
        all_pass = all_pass && pass;
        std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": " << c.name
                  << " — " << o.detail.str() << " — " << elapsed << "s";
        if (c.time_limit > 0.0)
            std::cout << " (limit " << c.time_limit << "s" << (time_ok ? "" : " EXCEEDED") << ")";
        else if (c.target_note)
            std::cout << " (" << c.target_note << ")";
        std::cout << "\n";
    }
    return all_pass ? 0 : 1;
}
