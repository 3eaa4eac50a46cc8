#pragma once

// Full-batch gradient descent with backtracking line search, the
// first-order necessary-condition residuals, and numerical certification
// of critical points (gradient + Hessian block + sampled neighborhood).

#include <optional>

#include "losscape/models.hpp"

namespace losscape {

struct TrainOpts {
    int max_iters = 20000;
    double grad_tol = 1e-6;
    int restarts = 50;
    double init_scale = 0.5;
    double ls_shrink = 0.5;   // backtracking factor
    double ls_c = 1e-4;       // sufficient-decrease constant
    double step0 = 1.0;
    uint64_t seed = 0;
};

struct TrainResult {
    Network net;
    Vec loss_trace;       // loss after each accepted step (index 0 = initial)
    Vec grad_norm_trace;
    int iters = 0;
    bool converged = false;            // reached grad_tol
    bool aborted_nonfinite = false;
    int first_zero_error_iter = -1;    // -1 if training error never hit 0
    int first_grad_tol_iter = -1;
    double final_loss = 0;
    double final_grad_norm = 0;
};

inline TrainResult train_gd(const Network& net0, const LossSpec& loss, const Dataset& ds,
                            const TrainOpts& opts) {
    require(opts.grad_tol > 0, "train_gd: grad_tol must be positive");
    Vec theta = pack(net0);
    require(all_finite(theta), "train_gd: non-finite initial parameters");

    TrainResult res;
    res.net = net0;
    auto loss_at = [&](const Vec& t) { return empirical_loss(unpack(net0, t), loss, ds); };

    double cur = loss_at(theta);
    res.loss_trace.push_back(cur);
    if (training_error(unpack(net0, theta), ds).num == 0) res.first_zero_error_iter = 0;

    double step = opts.step0;
    for (int it = 0; it < opts.max_iters; ++it) {
        Vec g = grad(unpack(net0, theta), loss, ds);
        double gn = norm2(g);
        res.grad_norm_trace.push_back(gn);
        if (!std::isfinite(gn) || !std::isfinite(cur)) {
            res.aborted_nonfinite = true;
            break;
        }
        if (gn <= opts.grad_tol) {
            res.converged = true;
            if (res.first_grad_tol_iter < 0) res.first_grad_tol_iter = it;
            break;
        }
        // backtracking line search on the steepest-descent ray
        double eta = step;
        bool accepted = false;
        for (int tries = 0; tries < 60; ++tries) {
            Vec trial = theta;
            for (size_t k = 0; k < trial.size(); ++k) trial[k] -= eta * g[k];
            double lt = loss_at(trial);
            if (std::isfinite(lt) && lt <= cur - opts.ls_c * eta * gn * gn) {
                theta = std::move(trial);
                cur = lt;
                accepted = true;
                break;
            }
            eta *= opts.ls_shrink;
        }
        if (!accepted) break;  // flat plateau at the line-search floor
        step = std::min(eta * 2.0, 1e6);
        res.iters = it + 1;
        res.loss_trace.push_back(cur);
        if (res.first_zero_error_iter < 0 &&
            training_error(unpack(net0, theta), ds).num == 0)
            res.first_zero_error_iter = res.iters;
    }
    if (!res.converged) {
        Vec g = grad(unpack(net0, theta), loss, ds);
        if (norm2(g) <= opts.grad_tol) res.converged = true;
    }
    res.net = unpack(net0, theta);
    res.final_loss = cur;
    res.final_grad_norm = norm2(grad(res.net, loss, ds));
    return res;
}

// Residual of the first-order necessary condition per neuron of f_S:
// (1/n) || sum_i l'(-y_i f_i) y_i sigma'(w_j^T x_i + b_j) x_i ||_2.
// At any local minimum all residuals vanish regardless of a_j.
inline Vec check_lemma1(const ShortcutNet& net, const LossSpec& loss, const Dataset& ds) {
    const SingleLayerParams& fs = net.fs;
    int m = fs.width(), d = fs.input_dim();
    std::vector<Vec> acc(m, Vec(d, 0.0));
    for (int i = 0; i < ds.n(); ++i) {
        double fi = net.forward(ds.x[i]);
        double li = loss_deriv(loss, -ds.y[i] * fi, 1) * ds.y[i];
        if (li == 0) continue;
        for (int j = 0; j < m; ++j) {
            double sp = act_deriv(fs.activation, dot(fs.w[j], ds.x[i]) + fs.b[j], 1);
            for (int k = 0; k < d; ++k) acc[j][k] += li * sp * ds.x[i][k];
        }
    }
    Vec res(m);
    for (int j = 0; j < m; ++j) res[j] = norm2(acc[j]) / ds.n();
    return res;
}

enum class Verdict { certified_min_candidate, saddle, inconclusive };

inline std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::certified_min_candidate: return "certified_min_candidate";
        case Verdict::saddle: return "saddle";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

struct Certificate {
    double grad_norm = 0;
    Vec lemma1_residuals;
    double hess_min_eig = 0;
    int n_perturbations = 0;
    double worst_loss_delta = 0;  // most negative sampled loss change
    double radius = 0;
    Verdict verdict = Verdict::inconclusive;
    Rational training_err;
    double grad_tol = 1e-6;
    double decrease_tol = 1e-10;
};

struct CertifyOpts {
    double radius = 1e-2;
    int n_perturbations = 200;
    Block block = Block::theta_s;
    double grad_tol = 1e-6;
    double eig_tol = 1e-6;
    double decrease_tol = 1e-10;
    double fd_step = 1e-4;
};

inline Certificate certify(const Network& net, const LossSpec& loss, const Dataset& ds,
                           const CertifyOpts& opts, Rng& rng) {
    require(opts.radius > 0, "certify: radius must be positive");
    require(opts.n_perturbations >= 100, "certify: need at least 100 perturbations");

    Certificate cert;
    cert.radius = opts.radius;
    cert.grad_tol = opts.grad_tol;
    cert.decrease_tol = opts.decrease_tol;
    cert.training_err = training_error(net, ds);
    cert.grad_norm = norm2(grad(net, loss, ds));
    if (auto* s = std::get_if<ShortcutNet>(&net)) cert.lemma1_residuals = check_lemma1(*s, loss, ds);

    std::vector<int> block = block_indices(net, opts.block);
    cert.hess_min_eig = min_eig(hessian_block(net, loss, ds, block, opts.fd_step));

    Vec theta = pack(net);
    double base = empirical_loss(net, loss, ds);
    cert.n_perturbations = opts.n_perturbations;
    cert.worst_loss_delta = 0;
    for (int t = 0; t < opts.n_perturbations; ++t) {
        Vec dir(block.size());
        for (double& v : dir) v = rng.normal();
        double nd = norm2(dir);
        if (nd == 0) continue;
        double r = opts.radius * std::pow(rng.uniform(), 1.0 / block.size());
        Vec trial = theta;
        for (size_t k = 0; k < block.size(); ++k) trial[block[k]] += dir[k] * (r / nd);
        double delta = empirical_loss(unpack(net, trial), loss, ds) - base;
        cert.worst_loss_delta = std::min(cert.worst_loss_delta, delta);
    }

    if (cert.grad_norm <= opts.grad_tol) {
        // decreases up to grad_norm * radius are explained by the point being
        // only approximately critical; exact constructions are unaffected
        double allowance = opts.decrease_tol + cert.grad_norm * opts.radius;
        if (cert.hess_min_eig < -opts.eig_tol || cert.worst_loss_delta < -allowance)
            cert.verdict = Verdict::saddle;
        else
            cert.verdict = Verdict::certified_min_candidate;
    } else {
        cert.verdict = Verdict::inconclusive;
    }
    return cert;
}

inline json to_json(const Certificate& c) {
    return {{"format_version", 1},
            {"grad_norm", c.grad_norm},
            {"lemma1_residuals", c.lemma1_residuals},
            {"hess_min_eig", c.hess_min_eig},
            {"n_perturbations", c.n_perturbations},
            {"worst_loss_delta", c.worst_loss_delta},
            {"radius", c.radius},
            {"verdict", verdict_name(c.verdict)},
            {"training_error", {{"num", c.training_err.num}, {"den", c.training_err.den}}},
            {"grad_tol", c.grad_tol},
            {"decrease_tol", c.decrease_tol}};
}

// ---- scenario sweeps ----

enum class Scenario { thm1, prop1, thm2, table1 };

inline std::string scenario_name(Scenario s) {
    switch (s) {
        case Scenario::thm1: return "thm1";
        case Scenario::prop1: return "prop1";
        case Scenario::thm2: return "thm2";
        case Scenario::table1: return "table1";
    }
    return "?";
}

struct SweepConfig {
    Scenario scenario = Scenario::thm1;
    Dataset ds;
    ActivationSpec activation;
    LossSpec loss = LossSpec::poly_hinge(6);
    int m_neurons = 0;  // 0 = derive from the scenario's neuron rule
    TrainOpts train;
    CertifyOpts certify;
    uint64_t seed = 1;
    // table1 cells may seed one restart at an explicit parameter vector
    std::optional<Network> seed_net;
    // dataset geometry for the neuron rules
    int r = 0, r_plus = 0, r_minus = 0;
};

struct SweepRow {
    int restart = 0;
    int iters = 0;
    bool converged = false;
    double grad_norm = 0;
    double hess_min_eig = 0;
    double empirical_loss_value = 0;
    Rational training_err;
    Verdict verdict = Verdict::inconclusive;
    bool violation = false;  // certified minimum with nonzero training error
};

struct SweepResult {
    std::vector<SweepRow> rows;
    int violations = 0;
    int converged = 0;
    int inconclusive = 0;
    int m_neurons = 0;
};

inline void validate_sweep_config(const SweepConfig& cfg) {
    auto fail = [](const std::string& clause) {
        throw std::invalid_argument("sweep: assumption violated: " + clause);
    };
    if (cfg.ds.n() < 1) fail("dataset nonempty");
    if (cfg.train.restarts < 1) fail("restarts >= 1");
    switch (cfg.scenario) {
        case Scenario::thm1: {
            if (cfg.loss.kind != LossKind::poly_hinge || cfg.loss.p < 6) fail("thm1 needs poly_hinge with p >= 6");
            auto classes = classify_activation(cfg.activation);
            if (!classes.count(NeuronClass::softplus_class)) fail("thm1 needs a softplus-class neuron");
            if (cfg.r <= std::max(cfg.r_plus, cfg.r_minus)) fail("thm1 needs r > max(r+, r-)");
            int need = min_neurons(NeuronRule::thm1, cfg.ds.n(), cfg.r, cfg.r_plus, cfg.r_minus);
            if (cfg.m_neurons != 0 && cfg.m_neurons < need) fail("thm1 neuron budget M >= 2 max{n/dr, r+, r-}");
            break;
        }
        case Scenario::prop1: {
            if (cfg.loss.kind != LossKind::poly_hinge || cfg.loss.p < 6) fail("prop1 needs poly_hinge with p >= 6");
            if (cfg.activation.kind != ActKind::quadratic) fail("prop1 needs quadratic neurons");
            if (cfg.m_neurons != 0 && cfg.m_neurons <= cfg.r) fail("prop1 neuron budget M > r");
            break;
        }
        case Scenario::thm2: {
            if (cfg.loss.kind != LossKind::poly_hinge || cfg.loss.p < 3) fail("thm2 needs poly_hinge with p >= 3");
            bool d1_pos = true;
            for (double z : symmetric_grid())
                if (act_deriv(cfg.activation, z, 1) <= 0) d1_pos = false;
            if (!d1_pos) fail("thm2 needs sigma' > 0 everywhere");
            if (cfg.m_neurons != 0 && cfg.m_neurons < 1) fail("thm2 needs at least one neuron");
            break;
        }
        case Scenario::table1:
            // a thm1-style run with the neuron class under test; only the
            // loss and budget clauses are enforced
            if (cfg.loss.kind != LossKind::poly_hinge || cfg.loss.p < 2) fail("table1 needs poly_hinge with p >= 2");
            break;
    }
}

inline int sweep_neuron_count(const SweepConfig& cfg) {
    if (cfg.m_neurons > 0) return cfg.m_neurons;
    switch (cfg.scenario) {
        case Scenario::thm1:
        case Scenario::table1:
            return min_neurons(NeuronRule::thm1, cfg.ds.n(), cfg.r, cfg.r_plus, cfg.r_minus);
        case Scenario::prop1: return min_neurons(NeuronRule::prop1, cfg.ds.n(), cfg.r, cfg.r_plus, cfg.r_minus);
        case Scenario::thm2: return 1;
    }
    return 1;
}

inline SweepResult sweep_experiment(const SweepConfig& cfg) {
    validate_sweep_config(cfg);
    int m = sweep_neuron_count(cfg);
    int d = cfg.ds.dim();

    SweepResult out;
    out.m_neurons = m;
    for (int r = 0; r < cfg.train.restarts; ++r) {
        Rng rng(cfg.seed, 1000 + r);
        Network net0;
        if (r == 0 && cfg.seed_net) {
            net0 = *cfg.seed_net;
        } else {
            ShortcutNet s;
            s.fs = SingleLayerParams::zeros(m, d, cfg.activation);
            s.fs.a0 = cfg.train.init_scale * rng.normal();
            for (int j = 0; j < m; ++j) {
                s.fs.a[j] = cfg.train.init_scale * rng.normal();
                for (int k = 0; k < d; ++k) s.fs.w[j][k] = cfg.train.init_scale * rng.normal();
            }
            s.fd = ConstantBranch{0.0};
            net0 = std::move(s);
        }

        TrainResult tr = train_gd(net0, cfg.loss, cfg.ds, cfg.train);
        SweepRow row;
        row.restart = r;
        row.iters = tr.iters;
        row.converged = tr.converged;
        row.grad_norm = tr.final_grad_norm;
        row.empirical_loss_value = tr.final_loss;
        row.training_err = training_error(tr.net, cfg.ds);
        if (tr.converged) {
            ++out.converged;
            Rng crng(cfg.seed, 500000 + r);
            Certificate cert = certify(tr.net, cfg.loss, cfg.ds, cfg.certify, crng);
            row.hess_min_eig = cert.hess_min_eig;
            row.verdict = cert.verdict;
            row.violation =
                cert.verdict == Verdict::certified_min_candidate && cert.training_err.num != 0;
        } else {
            row.verdict = Verdict::inconclusive;
            ++out.inconclusive;
        }
        if (row.violation) ++out.violations;
        out.rows.push_back(row);
    }
    return out;
}

inline void write_sweep_csv(const SweepResult& res, const std::string& path) {
    std::ofstream f(path);
    require(f.good(), "write_sweep_csv: cannot open " + path);
    f << "restart,iters,converged,grad_norm,hess_min_eig,empirical_loss,training_error,verdict,violation\n";
    for (const SweepRow& r : res.rows) {
        f << r.restart << "," << r.iters << "," << (r.converged ? 1 : 0) << "," << fmt17(r.grad_norm)
          << "," << fmt17(r.hess_min_eig) << "," << fmt17(r.empirical_loss_value) << ","
          << r.training_err.num << "/" << r.training_err.den << "," << verdict_name(r.verdict) << ","
          << (r.violation ? 1 : 0) << "\n";
    }
}

}  // namespace losscape
