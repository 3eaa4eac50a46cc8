// Command-line front end: dataset generation, landscape sweeps,
// counterexample construction and certification, dataset-condition checks,
// and the closed-form quadratic-loss examples.
//
// Exit codes: 0 = all asserted claims hold, 2 = claim violation,
// 1 = configuration or runtime error.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "losscape/analytic_examples.hpp"
#include "losscape/conditions.hpp"
#include "losscape/constructions.hpp"
#include "losscape/landscape.hpp"

using namespace losscape;

namespace {

constexpr const char* kSeedEnv = "LOSSCAPE_SEED";

uint64_t resolve_seed(int64_t flag_seed, bool required) {
    if (flag_seed >= 0) return uint64_t(flag_seed);
    if (const char* env = std::getenv(kSeedEnv)) return std::strtoull(env, nullptr, 10);
    if (required) throw CLI::ValidationError("--seed", "stochastic subcommand needs --seed or " + std::string(kSeedEnv));
    return 0;
}

void write_json(const json& j, const std::string& path) {
    std::ofstream f(path);
    require(f.good(), "cannot open output file " + path);
    f << j.dump(2) << "\n";
}

json read_json(const std::string& path) {
    std::ifstream f(path);
    require(f.good(), "cannot open input file " + path);
    return json::parse(f);
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stoi(cell));
    return out;
}

// ---- sweep configuration: fully populated defaults per scenario, then
// JSON config, then flags, in that order ----

struct SweepCli {
    std::string scenario = "thm1";
    std::string config_path;
    std::string data_path;     // optional dataset file
    std::string out_csv = "sweep.csv";
    std::string activation;    // table1 cell override
    std::string seed_construction;  // table1: seed restart 0 here
    int restarts = -1;
    int m = -1;
    int64_t seed = -1;
};

json default_sweep_json(const std::string& scenario) {
    json j;
    j["scenario"] = scenario;
    j["loss"] = {{"kind", "poly_hinge"}, {"p", scenario == "thm2" ? 3 : 6}};
    j["m"] = 0;  // derive from the scenario's neuron rule
    j["restarts"] = 50;
    j["max_iters"] = 20000;
    j["grad_tol"] = 1e-6;
    j["init_scale"] = 0.5;
    j["certify"] = {{"radius", 1e-2}, {"k", 200}};
    j["seed"] = 1;
    if (scenario == "thm1" || scenario == "prop1" || scenario == "table1") {
        j["dataset"] = {{"kind", "subspace"}, {"d", 6}, {"plus", {0, 1}}, {"minus", {2, 3}}, {"n", 20}};
        j["activation"] = scenario == "prop1" ? "quadratic" : "softplus";
        if (scenario == "prop1") j["m"] = 5;
        if (scenario == "table1") {
            j["activation"] = "relu";
            j["seed_construction"] = "relu_inactive";
            j["loss"] = {{"kind", "poly_hinge"}, {"p", 2}};
        }
    } else if (scenario == "thm2") {
        j["dataset"] = {{"kind", "separable"}, {"d", 5}, {"n", 40}, {"margin", 0.5}};
        j["activation"] = "softplus";
        j["m"] = 1;
    } else {
        throw CLI::ValidationError("--scenario", "unknown scenario " + scenario);
    }
    return j;
}

Dataset dataset_from_config(const json& dcfg, uint64_t seed, int* r, int* rp, int* rm) {
    std::string kind = dcfg.at("kind").get<std::string>();
    Rng rng(seed, 17);
    if (kind == "subspace") {
        auto spec = SubspaceSpec::identity(dcfg.at("d").get<int>(),
                                           dcfg.at("plus").get<std::vector<int>>(),
                                           dcfg.at("minus").get<std::vector<int>>());
        *r = spec.r();
        *rp = spec.r_plus();
        *rm = spec.r_minus();
        return gen_subspace(spec, dcfg.at("n").get<int>(), rng);
    }
    if (kind == "separable") {
        auto sd = gen_separable(dcfg.at("d").get<int>(), dcfg.at("n").get<int>(),
                                dcfg.at("margin").get<double>(), rng);
        *r = *rp = *rm = 0;
        return sd.ds;
    }
    if (kind == "named") {
        auto nd = gen_named(dcfg.at("name").get<std::string>(), dcfg.at("n").get<int>(), rng);
        *r = dcfg.value("r", 0);
        *rp = dcfg.value("r_plus", 0);
        *rm = dcfg.value("r_minus", 0);
        return nd.ds;
    }
    if (kind == "file") {
        *r = dcfg.value("r", 0);
        *rp = dcfg.value("r_plus", 0);
        *rm = dcfg.value("r_minus", 0);
        return read_dataset_csv(dcfg.at("path").get<std::string>());
    }
    throw CLI::ValidationError("dataset.kind", "unknown dataset kind " + kind);
}

int run_sweep(const SweepCli& cli) {
    json cfgj = default_sweep_json(cli.scenario);
    if (!cli.config_path.empty()) cfgj.update(read_json(cli.config_path));
    if (cli.restarts > 0) cfgj["restarts"] = cli.restarts;
    if (cli.m >= 0) cfgj["m"] = cli.m;
    if (!cli.activation.empty()) cfgj["activation"] = cli.activation;
    if (!cli.seed_construction.empty()) cfgj["seed_construction"] = cli.seed_construction;
    if (cli.seed >= 0) cfgj["seed"] = cli.seed;
    if (!cli.data_path.empty()) cfgj["dataset"] = {{"kind", "file"}, {"path", cli.data_path}};
    uint64_t seed = resolve_seed((int64_t)cfgj["seed"].get<long long>(), true);

    SweepConfig cfg;
    std::string sc = cfgj.at("scenario").get<std::string>();
    cfg.scenario = sc == "thm1"    ? Scenario::thm1
                 : sc == "prop1"   ? Scenario::prop1
                 : sc == "thm2"    ? Scenario::thm2
                                   : Scenario::table1;
    cfg.ds = dataset_from_config(cfgj.at("dataset"), seed, &cfg.r, &cfg.r_plus, &cfg.r_minus);
    cfg.activation = ActivationSpec::make(act_kind_from_name(cfgj.at("activation").get<std::string>()),
                                          cfgj.value("alpha", cfgj["activation"] == "leaky_relu" ? 0.1 : -1.0));
    cfg.loss = loss_from_json(cfgj.at("loss"));
    cfg.m_neurons = cfgj.at("m").get<int>();
    cfg.train.restarts = cfgj.at("restarts").get<int>();
    cfg.train.max_iters = cfgj.at("max_iters").get<int>();
    cfg.train.grad_tol = cfgj.at("grad_tol").get<double>();
    cfg.train.init_scale = cfgj.at("init_scale").get<double>();
    cfg.certify.radius = cfgj.at("certify").at("radius").get<double>();
    cfg.certify.n_perturbations = cfgj.at("certify").at("k").get<int>();
    cfg.seed = seed;

    if (cfgj.contains("seed_construction") && !cfgj["seed_construction"].get<std::string>().empty()) {
        std::string kind = cfgj["seed_construction"].get<std::string>();
        if (kind == "relu_inactive")
            cfg.seed_net = build_relu_inactive(cfg.ds, sweep_neuron_count(cfg), cfg.loss, cfg.activation).net;
        else if (kind == "symmetric_zero")
            cfg.seed_net = build_symmetric_zero(cfg.ds, sweep_neuron_count(cfg), cfg.activation, cfg.loss).net;
        else
            throw CLI::ValidationError("--seed-construction", "unknown construction " + kind);
    }

    SweepResult res = sweep_experiment(cfg);
    write_sweep_csv(res, cli.out_csv);
    json summary = {{"scenario", sc},
                    {"m", res.m_neurons},
                    {"restarts", (int)res.rows.size()},
                    {"converged", res.converged},
                    {"inconclusive", res.inconclusive},
                    {"violations", res.violations},
                    {"config", cfgj}};
    write_json(summary, cli.out_csv + ".json");
    std::cout << "scenario " << sc << ": converged " << res.converged << "/" << res.rows.size()
              << ", violations: " << res.violations << "\n";
    return res.violations == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"loss-surface verification toolkit"};
    app.require_subcommand(1);

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "generate a dataset (CSV + provenance sidecar)");
    std::string gen_name, gen_out = "dataset.csv", gen_plus = "0,1", gen_minus = "2,3";
    int gen_n = 20, gen_d = 6;
    double gen_margin = 0.5;
    int64_t gen_seed = -1;
    bool gen_subspace_flag = false, gen_separable_flag = false;
    gen->add_option("--name", gen_name, "named dataset (xor4, cross, collinear, line_nonsep, example1, quadloss_subspace, quadloss_linsep; _balanced variants)");
    gen->add_flag("--subspace", gen_subspace_flag, "orthogonal-subspace data");
    gen->add_flag("--separable", gen_separable_flag, "linearly separable data with witness");
    gen->add_option("--n", gen_n, "sample count");
    gen->add_option("--d", gen_d, "ambient dimension");
    gen->add_option("--plus", gen_plus, "basis indices of the positive class (subspace)");
    gen->add_option("--minus", gen_minus, "basis indices of the negative class (subspace)");
    gen->add_option("--margin", gen_margin, "separation margin (separable)");
    gen->add_option("--seed", gen_seed, "rng seed");
    gen->add_option("--out", gen_out, "output CSV path");

    // ---- sweep ----
    auto* sweep = app.add_subcommand("sweep", "train/certify restarts under a scenario");
    SweepCli scli;
    sweep->add_option("--scenario", scli.scenario, "thm1 | prop1 | thm2 | table1");
    sweep->add_option("--config", scli.config_path, "JSON config (overrides scenario defaults)");
    sweep->add_option("--data", scli.data_path, "dataset CSV (overrides configured generator)");
    sweep->add_option("--restarts", scli.restarts, "number of restarts");
    sweep->add_option("--m", scli.m, "neuron count (0 = scenario rule)");
    sweep->add_option("--activation", scli.activation, "activation kind (table1 cells)");
    sweep->add_option("--seed-construction", scli.seed_construction, "seed restart 0 at a construction");
    sweep->add_option("--seed", scli.seed, "rng seed");
    sweep->add_option("--out", scli.out_csv, "run table CSV path");

    // ---- construct ----
    auto* cons = app.add_subcommand("construct", "build a counterexample local minimum");
    std::string cons_kind, cons_data, cons_out = "construction.json", cons_act, cons_cert, cons_dims = "";
    std::string cons_loss = "poly_hinge";
    int cons_m = 4, cons_p = 2, cons_hidden = 6;
    cons->add_option("--kind", cons_kind,
                     "relu_inactive | leaky_linear | symmetric_zero | feedforward_inactive | identity_shortcut | bump")
        ->required();
    cons->add_option("--data", cons_data, "dataset CSV")->required();
    cons->add_option("--out", cons_out, "construction JSON path");
    cons->add_option("--m", cons_m, "neuron count of f_S");
    cons->add_option("--loss", cons_loss, "loss kind: poly_hinge | quadratic | logistic");
    cons->add_option("--p", cons_p, "poly_hinge order");
    cons->add_option("--activation", cons_act, "activation kind");
    cons->add_option("--dims", cons_dims, "feedforward dims, comma separated");
    cons->add_option("--hidden", cons_hidden, "hidden width (identity_shortcut)");
    cons->add_option("--cert", cons_cert, "condition verdict JSON with the dual weights (bump)");

    // ---- certify ----
    auto* cert = app.add_subcommand("certify", "re-certify a construction from file");
    std::string cert_cons, cert_data, cert_out = "certificate.json";
    int cert_k = 2000;
    int64_t cert_seed = -1;
    cert->add_option("--construction", cert_cons, "construction JSON")->required();
    cert->add_option("--data", cert_data, "dataset CSV")->required();
    cert->add_option("--k", cert_k, "number of sampled perturbations");
    cert->add_option("--seed", cert_seed, "rng seed");
    cert->add_option("--out", cert_out, "certificate JSON path");

    // ---- check-condition ----
    auto* cond = app.add_subcommand("check-condition", "decide the quadratic-neuron dataset condition");
    std::string cond_data, cond_mode = "prop11", cond_out = "verdict.json";
    bool cond_oracle = false;
    int cond_res = 20;
    cond->add_option("--data", cond_data, "dataset CSV")->required();
    cond->add_option("--mode", cond_mode, "prop11 (iff) | prop10 (necessary)");
    cond->add_flag("--oracle", cond_oracle, "also run the brute-force grid oracle");
    cond->add_option("--resolution", cond_res, "oracle grid resolution");
    cond->add_option("--out", cond_out, "verdict JSON path");

    // ---- example1 ----
    auto* ex1 = app.add_subcommand("example1", "population least-squares example (closed form + Monte Carlo)");
    long long ex1_mc = 1000000;
    int64_t ex1_seed = -1;
    ex1->add_option("--mc-samples", ex1_mc, "Monte-Carlo sample count");
    ex1->add_option("--seed", ex1_seed, "rng seed");

    // ---- quadloss ----
    auto* ql = app.add_subcommand("quadloss", "conditioned quadratic-loss examples");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            uint64_t seed = resolve_seed(gen_seed, true);
            Rng rng(seed, 0);
            Dataset ds;
            if (gen_subspace_flag) {
                auto spec = SubspaceSpec::identity(gen_d, parse_int_list(gen_plus), parse_int_list(gen_minus));
                ds = gen_subspace(spec, gen_n, rng);
            } else if (gen_separable_flag) {
                auto sd = gen_separable(gen_d, gen_n, gen_margin, rng);
                ds = sd.ds;
                ds.spec["witness"] = sd.witness;
            } else if (!gen_name.empty()) {
                ds = gen_named(gen_name, gen_n, rng).ds;
            } else {
                throw CLI::ValidationError("gen", "one of --name/--subspace/--separable is required");
            }
            write_dataset_csv(ds, gen_out);
            std::cout << "wrote " << ds.n() << " samples (d=" << ds.dim() << ") to " << gen_out << "\n";
            return 0;
        }

        if (sweep->parsed()) return run_sweep(scli);

        if (cons->parsed()) {
            Dataset ds = read_dataset_csv(cons_data);
            LossSpec loss;
            loss.kind = loss_kind_from_name(cons_loss);
            loss.p = cons_p;
            Construction c;
            if (cons_kind == "relu_inactive") {
                ActivationSpec act{cons_act.empty() ? ActKind::relu : act_kind_from_name(cons_act), 0};
                c = build_relu_inactive(ds, cons_m, loss, act);
            } else if (cons_kind == "leaky_linear") {
                ActivationSpec act = cons_act.empty() ? ActivationSpec::make(ActKind::leaky_relu, 0.1)
                                                      : ActivationSpec{act_kind_from_name(cons_act), 0.1};
                c = build_leaky_linear(ds, cons_m, loss, act);
            } else if (cons_kind == "symmetric_zero") {
                ActivationSpec act{cons_act.empty() ? ActKind::tanh_act : act_kind_from_name(cons_act), 0};
                c = build_symmetric_zero(ds, cons_m, act, loss);
            } else if (cons_kind == "feedforward_inactive") {
                std::vector<int> dims = cons_dims.empty() ? std::vector<int>{ds.dim(), 8, 4, 1}
                                                          : parse_int_list(cons_dims);
                c = build_feedforward_inactive(ds, dims, loss);
            } else if (cons_kind == "identity_shortcut") {
                c = build_identity_shortcut(ds, cons_hidden, loss);
            } else if (cons_kind == "bump") {
                DualCertificate dual;
                if (!cons_cert.empty()) {
                    json vj = read_json(cons_cert);
                    require(vj.contains("dual"), "bump: verdict JSON has no dual certificate");
                    dual.lambda = vj["dual"]["lambda"].get<Vec>();
                    dual.definiteness = vj["dual"]["definiteness"].get<std::string>();
                } else {
                    auto v = check_quadratic_condition(ds);
                    require(v.answer == ConditionAnswer::no,
                            "bump: dataset condition did not yield a NO certificate");
                    dual = *v.dual;
                }
                ActivationSpec act{cons_act.empty() ? ActKind::quadratic : act_kind_from_name(cons_act), 0};
                c = build_bump_minimum(ds, dual, LossSpec::poly_hinge(std::max(cons_p, 6)), cons_m, act);
            } else {
                throw CLI::ValidationError("--kind", "unknown construction kind " + cons_kind);
            }
            write_json(to_json(c), cons_out);
            std::cout << "built " << c.scenario << " (claimed error >= "
                      << c.claimed_error_lower_bound.num << "/" << c.claimed_error_lower_bound.den
                      << ", radius " << c.proven_radius << ") -> " << cons_out << "\n";
            return 0;
        }

        if (cert->parsed()) {
            Construction c = construction_from_json(read_json(cert_cons));
            Dataset ds = read_dataset_csv(cert_data);
            CertifyOpts opts;
            opts.radius = c.proven_radius;
            opts.n_perturbations = cert_k;
            opts.block = c.certify_block;
            Rng rng(resolve_seed(cert_seed, true), 0);
            Certificate res = certify(c.net, c.loss, ds, opts, rng);
            write_json(to_json(res), cert_out);
            bool claim_ok = res.verdict == Verdict::certified_min_candidate &&
                            res.training_err.value() + 1e-15 >=
                                c.claimed_error_lower_bound.value();
            std::cout << "verdict " << verdict_name(res.verdict) << ", training error "
                      << res.training_err.num << "/" << res.training_err.den << " (claimed >= "
                      << c.claimed_error_lower_bound.num << "/" << c.claimed_error_lower_bound.den
                      << ") -> " << cert_out << "\n";
            return claim_ok ? 0 : 2;
        }

        if (cond->parsed()) {
            Dataset ds = read_dataset_csv(cond_data);
            json out;
            std::string printed;
            if (cond_mode == "prop11") {
                auto v = check_quadratic_condition(ds);
                out = to_json(v);
                printed = out["answer"].get<std::string>();
                if (cond_oracle) {
                    auto orc = brute_force_lambda_oracle(ds, cond_res, OracleMode::prop11);
                    out["oracle"] = {{"definite_found", orc.definite_found},
                                     {"definiteness", orc.definiteness},
                                     {"witness_margin", orc.witness_margin},
                                     {"grid_points", orc.grid_points}};
                }
            } else if (cond_mode == "prop10") {
                auto v = check_necessary_condition(ds);
                out = to_json(v);
                printed = out["answer"].get<std::string>();
                if (cond_oracle) {
                    auto orc = brute_force_lambda_oracle(ds, cond_res, OracleMode::prop10);
                    out["oracle"] = {{"definite_found", orc.definite_found},
                                     {"definiteness", orc.definiteness},
                                     {"witness_margin", orc.witness_margin},
                                     {"grid_points", orc.grid_points}};
                }
            } else {
                throw CLI::ValidationError("--mode", "mode must be prop11 or prop10");
            }
            write_json(out, cond_out);
            std::cout << cond_mode << ": " << printed;
            if (out.contains("separation"))
                std::cout << "  (margin c1=" << out["separation"]["c1"].get<double>() << ")";
            if (out.contains("dual"))
                std::cout << "  (" << out["dual"]["definiteness"].get<std::string>() << " witness)";
            std::cout << " -> " << cond_out << "\n";
            return 0;
        }

        if (ex1->parsed()) {
            Example1Report rep = example1_closed_form();
            Rng rng(resolve_seed(ex1_seed, true), 0);
            example1_monte_carlo(rep, ex1_mc, rng);
            std::cout << "population rate (closed form): " << fmt17(rep.rate_exact) << "\n"
                      << "monte carlo (" << rep.mc_samples << " samples): " << fmt17(rep.mc_rate)
                      << " (3 sigma = " << fmt17(3 * rep.mc_sigma) << ")\n";
            bool ok = rep.rate_exact >= 1.0 / 16.0 && rep.mc_within_3sigma;
            std::cout << (ok ? "claim rate >= 1/16 holds\n" : "claim rate >= 1/16 VIOLATED\n");
            return ok ? 0 : 2;
        }

        if (ql->parsed()) {
            QuadlossReport rep = quadloss_examples();
            std::cout << "quadloss_subspace (alpha=1/2) global-minimizer training error: "
                      << fmt17(rep.subspace_error) << "\n"
                      << "quadloss_linsep  (alpha=1/6) global-minimizer training error: "
                      << fmt17(rep.linsep_error) << "\n";
            bool ok1 = rep.subspace_error >= 0.25, ok2 = rep.linsep_error >= 0.25;
            std::cout << "subspace claim error >= 1/4: " << (ok1 ? "holds" : "VIOLATED") << "\n"
                      << "linsep   claim error >= 1/4: " << (ok2 ? "holds" : "VIOLATED") << "\n";
            return ok1 && ok2 ? 0 : 2;
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
