// Command-line front end: one subcommand per scenario, CSV/JSON outputs plus
// manifest.json in --out.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cosdyn/concentration.hpp"
#include "cosdyn/equilibria.hpp"
#include "cosdyn/experiments.hpp"
#include "cosdyn/io.hpp"

namespace {

using namespace cosdyn;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out = "out";
    int threads = 1;
    std::optional<long> record_every;
};

struct Context {
    ConfigFile cfg;
    fs::path out;
    std::uint64_t seed = 0;
    int threads = 1;
    long record_every = 1;
};

Context make_context(const Common& c, long default_record_every = 1) {
    Context ctx;
    if (!c.config.empty()) ctx.cfg = ConfigFile::load(c.config);
    // Flags win over file values.
    ctx.seed = c.seed ? *c.seed : ctx.cfg.get_u64("seed", 0);
    ctx.record_every = c.record_every ? *c.record_every : ctx.cfg.get_long("record_every", default_record_every);
    ctx.threads = c.threads;
    if (ctx.cfg.has("threads") && c.threads == 1) ctx.threads = static_cast<int>(ctx.cfg.get_long("threads", 1));
    else ctx.cfg.get_long("threads", 1);
    if (ctx.threads < 1) throw ConfigError("threads must be >= 1");
    if (ctx.record_every < 1) throw ConfigError("record-every must be >= 1");
    ctx.out = c.out;
    std::error_code ec;
    fs::create_directories(ctx.out, ec);
    if (ec) throw ConfigError("cannot create output directory " + ctx.out.string());
    return ctx;
}

ClassifyOptions classify_from(const ConfigFile& f) {
    ClassifyOptions o;
    o.stable_gap = f.get_double("stable_gap", o.stable_gap);
    if (!(o.stable_gap >= 0.0 && o.stable_gap < 1.0)) throw ConfigError("stable_gap must lie in [0, 1)");
    return o;
}

SimConfig sim_from(const ConfigFile& f, std::uint64_t seed, SimConfig base = {}) {
    SimConfig c = base;
    c.d = static_cast<int>(f.get_long("d", c.d));
    c.h = static_cast<int>(f.get_long("h", c.h));
    c.sigma2 = f.get_double("sigma2", c.sigma2);
    c.rho = f.get_double("rho", c.rho);
    c.gamma = f.get_double("gamma", c.gamma);
    c.steps = f.get_long("steps", c.steps);
    c.batch = static_cast<int>(f.get_long("batch", c.batch));
    c.momentum = f.get_double("momentum", c.momentum);
    c.cosine_annealing = f.get_bool("cosine_annealing", c.cosine_annealing);
    c.symmetrize_w = f.get_bool("symmetrize_w", c.symmetrize_w);
    c.symmetric_loss = f.get_bool("symmetric_loss", c.symmetric_loss);
    const std::string loss = f.get_string("loss", to_string(c.loss_kind));
    if (loss == "cosine") c.loss_kind = LossKind::cosine;
    else if (loss == "l2") c.loss_kind = LossKind::l2;
    else throw ConfigError("loss must be cosine or l2");
    const std::string gm = f.get_string("grad_mode", to_string(c.grad_mode));
    if (gm == "monte_carlo") c.grad_mode = GradMode::monte_carlo;
    else if (gm == "mean_field") c.grad_mode = GradMode::mean_field;
    else throw ConfigError("grad_mode must be monte_carlo or mean_field");
    c.seed = seed;
    c.validate();
    return c;
}

void write_json(const fs::path& p, const json& j, RunManifest& man) {
    std::ofstream(p) << j.dump(2) << '\n';
    man.add_output(p);
}

int cmd_phase_portrait(const Context& ctx) {
    const auto& f = ctx.cfg;
    PortraitOptions o;
    o.n_times = f.get_double("n_times", o.n_times);
    o.sigma2 = f.get_double("sigma2", o.sigma2);
    o.w_min = f.get_double("w_min", o.w_min);
    o.w_max = f.get_double("w_max", o.w_max);
    o.points = static_cast<int>(f.get_long("points", o.points));
    o.classify = classify_from(f);
    if (o.points < 2 || !(o.w_max > o.w_min)) throw ConfigError("bad w grid");
    std::vector<PortraitCell> cells = reference_cells();
    if (f.has("rho") || f.has("n_phi") || f.has("n_psi")) {
        const auto r = f.get_list("rho", {});
        const auto a = f.get_list("n_phi", {});
        const auto b = f.get_list("n_psi", {});
        if (r.size() != a.size() || a.size() != b.size())
            throw ConfigError("rho, n_phi, n_psi lists must have equal length");
        cells.clear();
        for (std::size_t i = 0; i < r.size(); ++i) cells.push_back({r[i], a[i], b[i]});
    }
    f.require_all_used();
    RunManifest man("phase-portrait", ctx.seed, ctx.out);
    man.set_config({{"n_times", o.n_times}, {"sigma2", o.sigma2}, {"points", o.points}, {"stable_gap", o.classify.stable_gap}});
    const auto reps = write_phase_portrait(cells, o, ctx.out, man);
    for (std::size_t i = 0; i < cells.size(); ++i)
        std::cout << "rho=" << cells[i].rho << " n_phi=" << cells[i].n_phi << " n_psi=" << cells[i].n_psi
                  << " regime=" << to_string(reps[i].regime) << '\n';
    man.write();
    return kExitOk;
}

int cmd_roots(const Context& ctx) {
    const auto& f = ctx.cfg;
    const std::string mode = f.get_string("mode", "cos");
    const auto copt = classify_from(f);
    EquilibriumReport rep;
    json cfg;
    if (mode == "cos") {
        const EigenParams q{f.get_double("n_phi", 1.0), f.get_double("n_psi", 1.0), f.get_double("n_times", 1.0),
                            f.get_double("sigma2", 0.1), f.get_double("rho", 0.5)};
        f.require_all_used();
        rep = find_equilibria_cos(q, copt);
        cfg = {{"mode", mode}, {"n_phi", q.n_phi}, {"n_psi", q.n_psi}, {"n_times", q.n_times},
               {"sigma2", q.sigma2}, {"rho", q.rho}};
    } else if (mode == "l2") {
        const double s2 = f.get_double("sigma2", 0.0), rho = f.get_double("rho", 0.1);
        f.require_all_used();
        rep = find_equilibria_l2(s2, rho);
        cfg = {{"mode", mode}, {"sigma2", s2}, {"rho", rho}, {"threshold", l2_collapse_threshold(s2)}};
    } else if (mode == "normal_form") {
        const BifurcationParams bp{f.get_double("a_coef", 1.5), f.get_double("b_coef", 0.0)};
        f.require_all_used();
        rep = appendix_c_roots(bp, copt);
        cfg = {{"mode", mode}, {"a_coef", bp.a_coef}, {"b_coef", bp.b_coef}};
    } else {
        throw ConfigError("mode must be cos, l2 or normal_form");
    }
    RunManifest man("roots", ctx.seed, ctx.out);
    man.set_config(cfg);
    {
        CsvWriter w(ctx.out / "roots.csv", {"value", "stability", "multiplicity"});
        for (const auto& r : rep.roots) {
            w.row({fmt_num(r.value), to_string(r.stability), std::to_string(r.multiplicity)});
            std::cout << fmt_num(r.value) << ' ' << to_string(r.stability) << '\n';
        }
        man.add_output(w.path());
    }
    write_json(ctx.out / "roots.json", to_json(rep), man);
    std::cout << "regime=" << to_string(rep.regime) << '\n';
    man.write();
    return kExitOk;
}

int cmd_regime_scan(const Context& ctx) {
    const auto& f = ctx.cfg;
    const auto rhos = f.get_list("rho", {0.05, 0.1, 0.2, 0.3, 0.5});
    const auto phis = f.get_list("n_phi", {0.1, 0.25, 0.5, 0.75, 1.0});
    const auto psis = f.get_list("n_psi", {0.1, 0.25, 0.5, 0.75, 1.0});
    const double nx = f.get_double("n_times", 1.0);
    const double s2 = f.get_double("sigma2", 0.1);
    const double ray_rho = f.get_double("ray_rho", 0.5);
    const double ray_from = f.get_double("ray_from", 1.0);
    const double ray_to = f.get_double("ray_to", 0.1);
    const long ray_points = f.get_long("ray_points", 19);
    const auto copt = classify_from(f);
    f.require_all_used();
    if (ray_points < 2) throw ConfigError("ray_points must be >= 2");

    std::vector<ScanCell> cells(rhos.size() * phis.size() * psis.size());
    parallel_for(cells.size(), ctx.threads, [&](std::size_t i) {
        const std::size_t k = i % psis.size(), j = (i / psis.size()) % phis.size(), r = i / (psis.size() * phis.size());
        cells[i] = scan_cell(rhos[r], phis[j], psis[k], nx, s2, copt);
    });

    RunManifest man("regime-scan", ctx.seed, ctx.out);
    man.set_config({{"rho", rhos}, {"n_phi", phis}, {"n_psi", psis}, {"n_times", nx}, {"sigma2", s2},
                    {"stable_gap", copt.stable_gap}});
    {
        CsvWriter w(ctx.out / "regime_scan.csv", {"rho", "n_phi", "n_psi", "regime", "n_roots", "gap"});
        for (const auto& c : cells)
            w.row({fmt_num(c.rho), fmt_num(c.n_phi), fmt_num(c.n_psi), c.error.empty() ? to_string(c.regime) : "Unclassified",
                   std::to_string(c.n_roots), fmt_num(c.gap)});
        man.add_output(w.path());
    }
    std::vector<Regime> ray;
    {
        CsvWriter w(ctx.out / "ray.csv", {"s", "rho", "n_phi", "n_psi", "regime", "gap"});
        for (long i = 0; i < ray_points; ++i) {
            const double s = ray_from + (ray_to - ray_from) * static_cast<double>(i) / (ray_points - 1);
            const auto c = scan_cell(ray_rho, s, s, nx, s2, copt);
            if (!c.error.empty()) throw UnclassifiableRootPattern(c.error);
            ray.push_back(c.regime);
            w.row({fmt_num(s), fmt_num(ray_rho), fmt_num(s), fmt_num(s), to_string(c.regime), fmt_num(c.gap)});
        }
        man.add_output(w.path());
    }
    const bool mono = regimes_monotone(ray);
    write_json(ctx.out / "regime_scan.json", {{"ray_monotone", mono}, {"cells", cells.size()}}, man);
    std::cout << "cells=" << cells.size() << " ray_monotone=" << (mono ? "true" : "false") << '\n';
    man.write();
    return kExitOk;
}

int cmd_eigen_hist(const Context& ctx) {
    const auto& f = ctx.cfg;
    const std::string mode = f.get_string("mode", "init");
    const auto copt = classify_from(f);
    RunManifest man("eigen-hist", ctx.seed, ctx.out);
    if (mode == "init") {
        const int d = static_cast<int>(f.get_long("d", 2048));
        const int h = static_cast<int>(f.get_long("h", 64));
        const double rho = f.get_double("rho", 0.05);
        const double s2 = f.get_double("sigma2", 1.0);
        EigenInitOptions o;
        o.trials = static_cast<int>(f.get_long("trials", 20));
        o.bins = static_cast<int>(f.get_long("bins", 60));
        o.threads = ctx.threads;
        o.seed = ctx.seed;
        o.classify = copt;
        f.require_all_used();
        if (o.trials < 1 || o.bins < 1 || d < 1 || h < 1) throw ConfigError("trials, bins, d, h must be positive");
        const auto r = eigen_init_study(d, h, rho, s2, o);
        man.set_config({{"mode", mode}, {"d", d}, {"h", h}, {"rho", rho}, {"sigma2", s2}, {"trials", o.trials},
                        {"bins", o.bins}});
        {
            CsvWriter w(ctx.out / "eigen_init_hist.csv", {"bin_lo", "bin_hi", "count"});
            for (std::size_t i = 0; i < r.hist.counts.size(); ++i)
                w.row({fmt_num(r.hist.edges[i]), fmt_num(r.hist.edges[i + 1]), std::to_string(r.hist.counts[i])});
            man.add_output(w.path());
        }
        write_json(ctx.out / "eigen_init.json",
                   {{"w_up_minus", r.w_up_minus},
                    {"trial_w_up_minus", r.trial_w_up_minus},
                    {"n_phi", r.n_phi},
                    {"n_psi", r.n_psi},
                    {"n_times", r.n_times},
                    {"count_below", r.count_below},
                    {"trial_count_below", r.trial_count_below},
                    {"trials_with_any_below", r.trials_with_any_below},
                    {"fraction_below", r.fraction_below},
                    {"mean_eigenvalue", r.mean_eigenvalue},
                    {"eigenvalues", r.eigenvalues.size()}},
                   man);
        std::cout << "w_up_minus=" << fmt_num(r.w_up_minus) << " fraction_below=" << r.fraction_below << '\n';
    } else if (mode == "evolution") {
        const long window = f.get_long("window", 50);
        SimConfig base;
        const SimConfig sc = sim_from(f, ctx.seed, base);
        f.require_all_used();
        if (window < 0) throw ConfigError("window must be >= 0");
        const auto res = simulate_linear(sc, {ctx.record_every, copt});
        man.set_config(to_json(sc));
        man.add_note("window", window);
        std::vector<std::string> header{"epoch"};
        for (int j = 1; j <= sc.h; ++j) header.push_back("w" + std::to_string(j));
        {
            CsvWriter w(ctx.out / "eig_evolution.csv", header);
            for (const auto& r : res.records) {
                std::vector<std::string> row{std::to_string(r.epoch)};
                for (double e : r.abs_eigs) row.push_back(fmt_num(e));
                w.row(row);
            }
            man.add_output(w.path());
        }
        if (window > 0) {
            std::vector<std::string> hs{"epoch"};
            for (int j = 1; j <= sc.h; ++j) hs.push_back("w" + std::to_string(j) + "_ma" + std::to_string(window));
            const auto sm = moving_average(res.records, window);
            CsvWriter w(ctx.out / ("eig_evolution_ma" + std::to_string(window) + ".csv"), hs);
            for (std::size_t i = 0; i < res.records.size(); ++i) {
                std::vector<std::string> row{std::to_string(res.records[i].epoch)};
                for (double e : sm[i]) row.push_back(fmt_num(e));
                w.row(row);
            }
            man.add_output(w.path());
        }
        std::cout << "records=" << res.records.size() << '\n';
    } else {
        throw ConfigError("mode must be init or evolution");
    }
    man.write();
    return kExitOk;
}

int cmd_sim_linear(const Context& ctx) {
    const auto& f = ctx.cfg;
    const auto copt = classify_from(f);
    const long warmup = f.get_long("warmup", 100);
    const SimConfig sc = sim_from(f, ctx.seed);
    f.require_all_used();
    RunManifest man("sim-linear", ctx.seed, ctx.out);
    man.set_config(to_json(sc));
    man.add_note("record_every", ctx.record_every);
    man.add_note("stable_gap", copt.stable_gap);
    const auto res = simulate_linear(sc, {ctx.record_every, copt});
    write_sim_linear(res, ctx.out, man);
    const auto checks = analyze_sim(res, warmup);
    write_json(ctx.out / "summary.json", to_json(checks), man);
    std::cout << to_json(checks).dump(2) << '\n';
    man.write();
    return kExitOk;
}

int cmd_compare_losses(const Context& ctx) {
    const auto& f = ctx.cfg;
    CompareOptions o;
    o.sigma2 = f.get_double("sigma2", o.sigma2);
    o.rhos = f.get_list("rhos", o.rhos);
    o.w0 = f.get_double("w0", o.w0);
    o.t_end = f.get_double("t_end", o.t_end);
    o.dt = f.get_double("dt", o.dt);
    const std::string mode = f.get_string("norm_mode", "refresh");
    if (mode == "frozen") o.mode = NormMode::frozen;
    else if (mode == "refresh") o.mode = NormMode::refresh;
    else throw ConfigError("norm_mode must be frozen or refresh");
    o.n_phi = f.get_double("n_phi", o.n_phi);
    o.n_psi = f.get_double("n_psi", o.n_psi);
    o.n_times = f.get_double("n_times", o.n_times);
    o.classify = classify_from(f);
    SimConfig base;
    base.d = 64;
    base.h = 16;
    base.batch = 256;
    o.sim = sim_from(f, ctx.seed, base);
    f.require_all_used();
    if (!(o.dt > 0.0) || !(o.t_end > 0.0)) throw ConfigError("dt and t_end must be positive");
    const auto rows = compare_losses(o);
    RunManifest man("compare-losses", ctx.seed, ctx.out);
    json cfg = {{"sigma2", o.sigma2}, {"rhos", o.rhos}, {"w0", o.w0}, {"dt", o.dt}, {"norm_mode", mode}};
    if (o.mode == NormMode::frozen) cfg.update({{"t_end", o.t_end}, {"n_phi", o.n_phi}, {"n_psi", o.n_psi}, {"n_times", o.n_times}});
    else cfg["sim"] = to_json(o.sim);
    man.set_config(cfg);
    CsvWriter w(ctx.out / "compare_losses.csv",
                {"rho", "l2_threshold", "horizon", "l2_final_w", "l2_status", "cos_final_w", "cos_status",
                 "cos_final_regime", "sgd_leading_abs_w", "norm_mode"});
    for (const auto& r : rows) {
        w.row({fmt_num(r.rho), fmt_num(r.threshold), fmt_num(r.horizon), fmt_num(r.l2_final), r.l2_status,
               fmt_num(r.cos_final), r.cos_status, r.cos_final_regime, fmt_num(r.sgd_leading), mode});
        std::cout << "rho=" << r.rho << " l2=" << fmt_num(r.l2_final) << " cos=" << fmt_num(r.cos_final) << '\n';
    }
    man.add_output(w.path());
    man.write();
    return kExitOk;
}

int cmd_concentration(const Context& ctx) {
    const auto& f = ctx.cfg;
    const auto hs = f.get_list("h_values", {64, 128, 256, 512});
    const double alpha = f.get_double("alpha", 4.0);
    const double s2 = f.get_double("sigma2", 1.0);
    const long samples = f.get_long("samples", 4000);
    const auto hh_values = f.get_list("hhat_h_values", {32, 64, 128, 256});
    const double hh_alpha = f.get_double("hhat_alpha", 8.0);
    const long hh_samples = f.get_long("hhat_samples", 100000);
    f.require_all_used();
    if (samples < 1 || hh_samples < 1 || !(alpha > 0) || !(hh_alpha > 0)) throw ConfigError("bad sample sizes");
    RunManifest man("concentration", ctx.seed, ctx.out);
    man.set_config({{"h_values", hs}, {"alpha", alpha}, {"sigma2", s2}, {"samples", samples},
                    {"hhat_h_values", hh_values}, {"hhat_alpha", hh_alpha}, {"hhat_samples", hh_samples}});

    std::vector<NormConcentrationReport> nr(hs.size());
    parallel_for(hs.size(), ctx.threads, [&](std::size_t i) {
        SimConfig c;
        c.h = static_cast<int>(hs[i]);
        c.d = static_cast<int>(std::lround(alpha * hs[i]));
        c.sigma2 = s2;
        c.seed = ctx.seed;
        ConcentrationOptions o;
        o.n_samples = static_cast<int>(samples);
        nr[i] = check_norm_concentration(c, o, i);
    });
    std::vector<double> xs, ys_phi, ys_psi;
    {
        CsvWriter w(ctx.out / "concentration.csv",
                    {"h", "d", "phi_view_median", "phi_view_p90", "psi_view_median", "psi_view_p90",
                     "phi_anchor_median", "phi_anchor_p90", "psi_anchor_median", "psi_anchor_p90",
                     "phi_ratio_median", "phi_ratio_p90"});
        for (const auto& r : nr) {
            w.row({static_cast<double>(r.h), static_cast<double>(r.d), r.phi_view_s.median, r.phi_view_s.p90,
                   r.psi_view_s.median, r.psi_view_s.p90, r.phi_anchor_s.median, r.phi_anchor_s.p90,
                   r.psi_anchor_s.median, r.psi_anchor_s.p90, r.phi_ratio_s.median, r.phi_ratio_s.p90});
            xs.push_back(r.h);
            ys_phi.push_back(r.phi_view_s.median);
            ys_psi.push_back(r.psi_view_s.median);
        }
        man.add_output(w.path());
    }
    std::vector<HvsHhatReport> hr(hh_values.size());
    parallel_for(hh_values.size(), ctx.threads, [&](std::size_t i) {
        SimConfig c;
        c.h = static_cast<int>(hh_values[i]);
        c.d = static_cast<int>(std::lround(hh_alpha * hh_values[i]));
        c.sigma2 = s2;
        c.seed = ctx.seed;
        HvsHhatOptions o;
        o.n_samples = hh_samples;
        hr[i] = check_h_vs_hhat(c, o, 100 + i);
    });
    std::vector<double> err, noise;
    {
        CsvWriter w(ctx.out / "h_vs_hhat.csv",
                    {"h", "d", "samples", "rel_err", "noise", "rel_err_plain", "noise_plain"});
        for (const auto& r : hr) {
            w.row({static_cast<double>(r.h), static_cast<double>(r.d), static_cast<double>(r.n_samples), r.rel_err,
                   r.noise, r.rel_err_plain, r.noise_plain});
            err.push_back(r.rel_err);
            noise.push_back(r.noise);
        }
        man.add_output(w.path());
    }
    int inv = 0;
    const bool dec = decreasing_with_tolerance(err, noise, &inv);
    const json summary{{"phi_view_slope", loglog_slope(xs, ys_phi)},
                       {"psi_view_slope", loglog_slope(xs, ys_psi)},
                       {"hhat_decreasing", dec},
                       {"hhat_inversions", inv},
                       {"hhat_final_rel_err", err.back()}};
    write_json(ctx.out / "concentration_summary.json", summary, man);
    std::cout << summary.dump(2) << '\n';
    man.write();
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learning-dynamics laboratory for two-layer linear non-contrastive models"};
    app.require_subcommand(1);
    Common common;
    using Fn = int (*)(const Context&);
    struct Sub {
        const char* name;
        const char* help;
        Fn fn;
        long default_record_every;
    };
    const Sub subs[] = {
        {"phase-portrait", "Reduced cosine dynamics on a w grid with equilibria per cell", cmd_phase_portrait, 1},
        {"roots", "Equilibria, stability labels and basins for one parameter set", cmd_roots, 1},
        {"regime-scan", "Regime table over a (rho, N_phi, N_psi) grid and a shrinking-norm ray", cmd_regime_scan, 1},
        {"eigen-hist", "Initial eigenvalue histogram or eigenvalue evolution of a linear run", cmd_eigen_hist, 1},
        {"sim-linear", "Momentum-SGD simulation of the linear model with per-epoch diagnostics", cmd_sim_linear, 1},
        {"compare-losses", "Final eigenvalue under L2 and cosine reduced dynamics over a rho grid", cmd_compare_losses, 1},
        {"concentration", "Norm concentration and Monte Carlo drift checks", cmd_concentration, 1},
    };
    std::optional<std::uint64_t> seed;
    std::optional<long> record_every;
    for (const auto& s : subs) {
        auto* sc = app.add_subcommand(s.name, s.help);
        sc->add_option("--config", common.config, "Flat key = value configuration file");
        sc->add_option("--seed", seed, "Master seed (overrides the config)");
        sc->add_option("--out", common.out, "Output directory")->capture_default_str();
        sc->add_option("--threads", common.threads, "Worker threads")->capture_default_str();
        sc->add_option("--record-every", record_every, "Record every N steps (overrides the config)");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }
    common.seed = seed;
    common.record_every = record_every;
    try {
        for (const auto& s : subs) {
            if (app.got_subcommand(s.name)) return s.fn(make_context(common, s.default_record_every));
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DimensionTooLarge& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}
