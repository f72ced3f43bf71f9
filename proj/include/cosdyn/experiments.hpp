#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "cosdyn/concentration.hpp"
#include "cosdyn/core_model.hpp"
#include "cosdyn/eigen_dynamics.hpp"
#include "cosdyn/equilibria.hpp"
#include "cosdyn/io.hpp"
#include "cosdyn/losses.hpp"
#include "cosdyn/mean_flow.hpp"

namespace cosdyn {

namespace fs = std::filesystem;
using json = nlohmann::json;

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------- linear SGD

struct SimRecord {
    long epoch = 0;
    double time = 0.0;
    double lr = 0.0;
    NormDiagnostics diag;
    std::vector<double> abs_eigs;  // |eig| of the symmetric part of W, descending
    std::optional<Regime> regime;  // empty when the root pattern is unclassifiable
    double w_div_hi = kNaN;
    double w_collapse_lo = kNaN;
    double w_collapse_hi = kNaN;
    double w_stable_root = kNaN;
};

struct SimLinearResult {
    SimConfig config;
    std::vector<SimRecord> records;
    ModelState final_state;
};

struct SimOptions {
    long record_every = 1;
    ClassifyOptions classify;
};

inline std::vector<double> abs_eigs_desc(const Mat& w) {
    const Mat sym = 0.5 * (w + w.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
    std::vector<double> v(es.eigenvalues().size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::abs(es.eigenvalues()[static_cast<Eigen::Index>(i)]);
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

inline SimRecord make_record(const ModelState& s, long epoch, double lr, const SimConfig& cfg,
                             const ClassifyOptions& copt) {
    SimRecord r;
    r.epoch = epoch;
    r.time = s.time;
    r.lr = lr;
    r.diag = diagnostics(s);
    r.abs_eigs = abs_eigs_desc(s.w);
    if (r.diag.n_phi > kDegenerateNorm && r.diag.n_psi > kDegenerateNorm) {
        try {
            const auto rep =
                find_equilibria_cos({r.diag.n_phi, r.diag.n_psi, r.diag.n_times, cfg.sigma2, cfg.rho}, copt);
            r.regime = rep.regime;
            r.w_div_hi = rep.w_up_minus;
            r.w_collapse_lo = rep.collapse_lo;
            r.w_collapse_hi = rep.collapse_hi;
            r.w_stable_root = rep.w_down_plus;
        } catch (const UnclassifiableRootPattern&) {
        }
    }
    return r;
}

/// Momentum SGD on fresh Gaussian batches; one epoch is one step.
inline SimLinearResult simulate_linear(const SimConfig& cfg, const SimOptions& opt = {}) {
    cfg.validate();
    SimLinearResult res;
    res.config = cfg;
    Rng init_rng = derive_stream(cfg.seed, 0);
    Rng data_rng = derive_stream(cfg.seed, 1);
    ModelState s = init_params(cfg, init_rng);
    MomentumSgd opt_sgd(cfg.momentum);
    const long every = std::max(1L, opt.record_every);
    res.records.push_back(make_record(s, 0, cfg.gamma, cfg, opt.classify));
    for (long k = 1; k <= cfg.steps; ++k) {
        const double lr = cfg.cosine_annealing ? cosine_annealed_lr(cfg.gamma, k - 1, cfg.steps) : cfg.gamma;
        try {
            s = sgd_step(s, cfg, data_rng, lr, opt_sgd);
        } catch (const NormBlowup& e) {
            throw NormBlowup(std::string(e.what()) + " at epoch " + std::to_string(k), k);
        }
        if (!s.w.allFinite() || !s.phi.allFinite())
            throw NormBlowup("non-finite parameters at epoch " + std::to_string(k), k);
        if (k % every == 0 || k == cfg.steps) res.records.push_back(make_record(s, k, lr, cfg, opt.classify));
    }
    res.final_state = s;
    return res;
}

/// Number of consecutive recorded regime changes from `from` to `to`.
/// Unclassified epochs are skipped.
inline int count_transitions(const std::vector<SimRecord>& recs, Regime from, Regime to) {
    int n = 0;
    std::optional<Regime> prev;
    for (const auto& r : recs) {
        if (!r.regime) continue;
        if (prev && *prev == from && *r.regime == to) ++n;
        prev = r.regime;
    }
    return n;
}

struct SimChecks {
    double n_phi_start = 0, n_phi_end = 0, n_psi_start = 0, n_psi_end = 0;
    bool norms_decrease = false;
    double max_asym_after_warmup = 0, max_comm_after_warmup = 0;
    bool symmetry_ok = false;
    int collapse_to_acute = 0;
    int total_transitions = 0;
    std::vector<std::string> regime_sequence;  // run-length compressed
    bool single_collapse_to_acute = false;
    double leading_abs_eig = 0;
    std::string final_regime;
    bool leading_in_stable_interval = false;
    int count_above = 0;
    int count_below = 0;
    bool few_survivors = false;
};

/// Stable-convergence interval: above the upper end of the collapse basin
/// in the Acute and Stable regimes; empty in Collapse.
inline bool in_stable_interval(const SimRecord& r, double w) {
    if (!r.regime || *r.regime == Regime::collapse) return false;
    return w > r.w_collapse_hi;
}

inline SimChecks analyze_sim(const SimLinearResult& res, long warmup = 100, double hi = 0.1, double lo = 0.01) {
    SimChecks c;
    const auto& first = res.records.front();
    const auto& last = res.records.back();
    c.n_phi_start = first.diag.n_phi;
    c.n_phi_end = last.diag.n_phi;
    c.n_psi_start = first.diag.n_psi;
    c.n_psi_end = last.diag.n_psi;
    c.norms_decrease = c.n_phi_end < c.n_phi_start && c.n_psi_end < c.n_psi_start;
    for (const auto& r : res.records) {
        if (r.epoch <= warmup) continue;
        c.max_asym_after_warmup = std::max(c.max_asym_after_warmup, r.diag.asym_rel);
        c.max_comm_after_warmup = std::max(c.max_comm_after_warmup, r.diag.comm_rel);
    }
    c.symmetry_ok = c.max_asym_after_warmup < 0.2 && c.max_comm_after_warmup < 0.2;
    std::optional<Regime> prev;
    for (const auto& r : res.records) {
        const std::string name = r.regime ? to_string(*r.regime) : "Unclassified";
        if (c.regime_sequence.empty() || c.regime_sequence.back() != name) c.regime_sequence.push_back(name);
        if (!r.regime) continue;
        if (prev && *prev != *r.regime) ++c.total_transitions;
        prev = r.regime;
    }
    c.collapse_to_acute = count_transitions(res.records, Regime::collapse, Regime::acute);
    c.single_collapse_to_acute = c.collapse_to_acute == 1;
    c.leading_abs_eig = last.abs_eigs.front();
    c.final_regime = last.regime ? to_string(*last.regime) : "Unclassified";
    c.leading_in_stable_interval = in_stable_interval(last, c.leading_abs_eig);
    for (double e : last.abs_eigs) {
        c.count_above += e > hi;
        c.count_below += e < lo;
    }
    c.few_survivors = c.count_above >= 1 && c.count_above <= 8 &&
                      c.count_above + c.count_below == static_cast<int>(last.abs_eigs.size());
    return c;
}

inline json to_json(const SimChecks& c) {
    return {{"n_phi_start", c.n_phi_start},
            {"n_phi_end", c.n_phi_end},
            {"n_psi_start", c.n_psi_start},
            {"n_psi_end", c.n_psi_end},
            {"norms_decrease", c.norms_decrease},
            {"max_asym_after_warmup", c.max_asym_after_warmup},
            {"max_comm_after_warmup", c.max_comm_after_warmup},
            {"symmetry_ok", c.symmetry_ok},
            {"collapse_to_acute_transitions", c.collapse_to_acute},
            {"total_transitions", c.total_transitions},
            {"regime_sequence", c.regime_sequence},
            {"leading_abs_eig", c.leading_abs_eig},
            {"final_regime", c.final_regime},
            {"leading_in_stable_interval", c.leading_in_stable_interval},
            {"count_above_0.1", c.count_above},
            {"count_below_0.01", c.count_below},
            {"few_survivors", c.few_survivors}};
}

inline json to_json(const SimConfig& c) {
    return {{"d", c.d},
            {"h", c.h},
            {"alpha", c.alpha()},
            {"sigma2", c.sigma2},
            {"rho", c.rho},
            {"gamma", c.gamma},
            {"steps", c.steps},
            {"seed", c.seed},
            {"symmetrize_w", c.symmetrize_w},
            {"loss_kind", to_string(c.loss_kind)},
            {"grad_mode", to_string(c.grad_mode)},
            {"batch", c.batch},
            {"momentum", c.momentum},
            {"cosine_annealing", c.cosine_annealing},
            {"symmetric_loss", c.symmetric_loss}};
}

inline std::string regime_name(const std::optional<Regime>& r) { return r ? to_string(*r) : "Unclassified"; }

inline void write_sim_linear(const SimLinearResult& res, const fs::path& dir, RunManifest& man) {
    {
        CsvWriter w(dir / "norms.csv", {"epoch", "n_phi", "n_psi", "n_times"});
        for (const auto& r : res.records)
            w.row({std::to_string(r.epoch), fmt_num(r.diag.n_phi), fmt_num(r.diag.n_psi), fmt_num(r.diag.n_times)});
        man.add_output(w.path());
    }
    {
        CsvWriter w(dir / "sym.csv", {"epoch", "asym_rel", "comm_rel"});
        for (const auto& r : res.records)
            w.row({std::to_string(r.epoch), fmt_num(r.diag.asym_rel), fmt_num(r.diag.comm_rel)});
        man.add_output(w.path());
    }
    {
        CsvWriter w(dir / "eigs.csv", {"epoch", "j", "abs_w"});
        for (const auto& r : res.records)
            for (std::size_t j = 0; j < r.abs_eigs.size(); ++j)
                w.row({std::to_string(r.epoch), std::to_string(j + 1), fmt_num(r.abs_eigs[j])});
        man.add_output(w.path());
    }
    {
        CsvWriter w(dir / "regimes.csv",
                    {"epoch", "regime", "w_div_hi", "w_collapse_lo", "w_collapse_hi", "w_stable_root"});
        for (const auto& r : res.records)
            w.row({std::to_string(r.epoch), regime_name(r.regime), fmt_num(r.w_div_hi), fmt_num(r.w_collapse_lo),
                   fmt_num(r.w_collapse_hi), fmt_num(r.w_stable_root)});
        man.add_output(w.path());
    }
}

/// Centered moving average over epochs in [e - window, e + window].
inline std::vector<std::vector<double>> moving_average(const std::vector<SimRecord>& recs, long window) {
    std::vector<std::vector<double>> out(recs.size());
    std::size_t lo = 0, hi = 0;
    const std::size_t m = recs.empty() ? 0 : recs.front().abs_eigs.size();
    std::vector<double> acc(m, 0.0);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const long e = recs[i].epoch;
        while (hi < recs.size() && recs[hi].epoch <= e + window) {
            for (std::size_t j = 0; j < m; ++j) acc[j] += recs[hi].abs_eigs[j];
            ++hi;
        }
        while (recs[lo].epoch < e - window) {
            for (std::size_t j = 0; j < m; ++j) acc[j] -= recs[lo].abs_eigs[j];
            ++lo;
        }
        out[i].resize(m);
        for (std::size_t j = 0; j < m; ++j) out[i][j] = acc[j] / static_cast<double>(hi - lo);
    }
    return out;
}

// ------------------------------------------------------------ phase portrait

struct PortraitCell {
    double rho, n_phi, n_psi;
};

/// The six parameter sets of the reference portraits, in the documented order.
inline std::vector<PortraitCell> reference_cells() {
    return {{0.5, 1.0, 1.0}, {0.5, 1.0, 0.5}, {0.5, 0.5, 0.5}, {0.1, 1.0, 1.0}, {0.5, 0.25, 0.5}, {0.1, 0.25, 0.5}};
}

inline json to_json(const EquilibriumReport& rep) {
    json roots = json::array();
    for (const auto& r : rep.roots)
        roots.push_back({{"value", r.value}, {"stability", to_string(r.stability)}, {"multiplicity", r.multiplicity}});
    json basins = json::array();
    auto num = [](double v) -> json {
        if (std::isnan(v)) return nullptr;
        if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
        return v;
    };
    for (const auto& b : rep.basins) {
        json jb{{"lo", num(b.lo)}, {"hi", num(b.hi)}, {"fate", to_string(b.fate)}};
        if (b.fate == Fate::converge_to) jb["target"] = b.target;
        basins.push_back(jb);
    }
    return {{"roots", roots},
            {"regime", to_string(rep.regime)},
            {"basins", basins},
            {"gap", num(rep.gap)},
            {"w_up_minus", num(rep.w_up_minus)},
            {"w_down_zero", num(rep.w_down_zero)},
            {"w_up_plus", num(rep.w_up_plus)},
            {"w_down_plus", num(rep.w_down_plus)},
            {"saddle", num(rep.saddle)},
            {"search_interval", {num(rep.search_lo), num(rep.search_hi)}}};
}

struct PortraitOptions {
    double n_times = 1.0;
    double sigma2 = 0.1;
    double w_min = -1.5;
    double w_max = 1.5;
    int points = 2001;
    ClassifyOptions classify;
};

inline std::vector<EquilibriumReport> write_phase_portrait(const std::vector<PortraitCell>& cells,
                                                           const PortraitOptions& o, const fs::path& dir,
                                                           RunManifest& man) {
    std::vector<EquilibriumReport> reps;
    CsvWriter w(dir / "phase_portrait.csv", {"rho", "n_phi", "n_psi", "w", "dw"});
    json side = json::array();
    for (const auto& c : cells) {
        const EigenParams q{c.n_phi, c.n_psi, o.n_times, o.sigma2, c.rho};
        for (int i = 0; i < o.points; ++i) {
            const double wv = o.w_min + (o.w_max - o.w_min) * static_cast<double>(i) / (o.points - 1);
            w.row({c.rho, c.n_phi, c.n_psi, wv, reduced_rhs_cos(wv, q)});
        }
        reps.push_back(find_equilibria_cos(q, o.classify));
        json cell = to_json(reps.back());
        cell["rho"] = c.rho;
        cell["n_phi"] = c.n_phi;
        cell["n_psi"] = c.n_psi;
        cell["n_times"] = o.n_times;
        cell["sigma2"] = o.sigma2;
        side.push_back(cell);
    }
    man.add_output(w.path());
    const auto sp = dir / "equilibria.json";
    std::ofstream(sp) << side.dump(2) << '\n';
    man.add_output(sp);
    return reps;
}

// ----------------------------------------------------------- compare losses

enum class NormMode { frozen, refresh };

struct CompareOptions {
    double sigma2 = 0.1;
    std::vector<double> rhos{0.05, 0.1, 0.2, 0.3, 0.5};
    double w0 = 0.5;
    double t_end = 50.0;
    double dt = 1e-3;
    NormMode mode = NormMode::refresh;
    // frozen norms
    double n_phi = 1.0, n_psi = 1.0, n_times = 1.0;
    // matrix run for refreshed norms
    SimConfig sim;
    ClassifyOptions classify;
};

struct CompareRow {
    double rho = 0;
    double threshold = 0;
    double l2_final = 0;
    std::string l2_status;
    double cos_final = 0;
    std::string cos_status;
    std::string cos_final_regime;
    double sgd_leading = kNaN;  // leading |eig| of the matrix run (refresh mode)
    double horizon = 0;
};

/// Reduced cosine dynamics whose norms follow a recorded matrix run
/// (piecewise constant between records).
inline EigenTrajectory integrate_refreshed(double w0, const std::vector<SimRecord>& recs, double sigma2, double rho,
                                           double dt) {
    EigenTrajectory tr;
    double w = w0;
    double t = 0.0;
    tr.t.push_back(t);
    tr.w.push_back(w);
    for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
        const EigenParams q{recs[i].diag.n_phi, recs[i].diag.n_psi, recs[i].diag.n_times, sigma2, rho};
        const double span = recs[i + 1].time - recs[i].time;
        const long n = std::max(1L, static_cast<long>(std::llround(span / dt)));
        const double h = span / n;
        auto rhs = [&](const double& x) { return reduced_rhs_cos(x, q); };
        for (long k = 0; k < n; ++k) {
            w = rk4_step(w, h, rhs);
            if (!std::isfinite(w) || std::abs(w) > 1e6) {
                tr.status = TrajectoryStatus::diverged;
                tr.t.push_back(recs[i].time + (k + 1) * h);
                tr.w.push_back(w);
                return tr;
            }
        }
        t = recs[i + 1].time;
        tr.t.push_back(t);
        tr.w.push_back(w);
    }
    return tr;
}

inline std::vector<CompareRow> compare_losses(const CompareOptions& o) {
    std::vector<CompareRow> rows;
    for (double rho : o.rhos) {
        CompareRow r;
        r.rho = rho;
        r.threshold = l2_collapse_threshold(o.sigma2);
        IntegrateOptions io;
        io.dt = o.dt;
        io.record_every = 1000000;
        if (o.mode == NormMode::frozen) {
            io.t_end = o.t_end;
            r.horizon = o.t_end;
            const auto l2 = integrate_eigen(o.w0, EigenRhsKind::reduced_l2, {1, 1, 1, o.sigma2, rho}, io);
            const EigenParams q{o.n_phi, o.n_psi, o.n_times, o.sigma2, rho};
            const auto cs = integrate_eigen(o.w0, EigenRhsKind::reduced_cos, q, io);
            r.l2_final = l2.final_w();
            r.l2_status = to_string(l2.status);
            r.cos_final = cs.final_w();
            r.cos_status = to_string(cs.status);
            r.cos_final_regime = to_string(find_equilibria_cos(q, o.classify).regime);
        } else {
            SimConfig sc = o.sim;
            sc.sigma2 = o.sigma2;
            sc.rho = rho;
            const auto sim = simulate_linear(sc, SimOptions{1, o.classify});
            r.horizon = sim.records.back().time;
            io.t_end = r.horizon;
            const auto l2 = integrate_eigen(o.w0, EigenRhsKind::reduced_l2, {1, 1, 1, o.sigma2, rho}, io);
            const auto cs = integrate_refreshed(o.w0, sim.records, o.sigma2, rho, o.dt);
            r.l2_final = l2.final_w();
            r.l2_status = to_string(l2.status);
            r.cos_final = cs.final_w();
            r.cos_status = to_string(cs.status);
            r.cos_final_regime = regime_name(sim.records.back().regime);
            r.sgd_leading = sim.records.back().abs_eigs.front();
        }
        rows.push_back(r);
    }
    return rows;
}

}  // namespace cosdyn
