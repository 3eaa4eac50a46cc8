#include <catch2/catch_amalgamated.hpp>

#include "losscape/constructions.hpp"
#include "losscape/landscape.hpp"

using namespace losscape;

namespace {
// independent 1-D oracle: bisection on the convex objective's derivative
double bisect_1d(const LossSpec& loss, const std::vector<int>& ys) {
    auto g = [&](double a) {
        double s = 0;
        for (int y : ys) s += loss_deriv(loss, -y * a, 1) * (-y);
        return s;
    };
    double lo = -1e3, hi = 1e3;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (g(mid) >= 0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

ShortcutNet random_net(int m, int d, ActivationSpec act, uint64_t seed, double scale = 1.0) {
    ShortcutNet s;
    s.fs = SingleLayerParams::zeros(m, d, act);
    Rng rng(seed, 0);
    s.fs.a0 = scale * rng.normal();
    for (int j = 0; j < m; ++j) {
        s.fs.a[j] = scale * rng.normal();
        for (int k = 0; k < d; ++k) s.fs.w[j][k] = scale * rng.normal();
    }
    return s;
}
}  // namespace

TEST_CASE("train_gd solves the 1-D convex problem to the bisection optimum", "[landscape]") {
    LossSpec loss = LossSpec::poly_hinge(4);
    std::vector<int> ys = {1, 1, 1, -1, -1, 1, -1, 1};
    Dataset ds;
    for (size_t i = 0; i < ys.size(); ++i) ds.push({0.01 * double(i + 1)}, ys[i]);

    // a dead relu neuron leaves a0 as the only live parameter
    ShortcutNet s;
    s.fs = SingleLayerParams::zeros(1, 1, {ActKind::relu, 0});
    s.fs.w[0] = {-5.0};
    s.fs.a0 = 2.7;
    TrainOpts opts;
    opts.grad_tol = 1e-7;
    auto res = train_gd(Network{s}, loss, ds, opts);
    REQUIRE(res.converged);
    REQUIRE(std::get<ShortcutNet>(res.net).fs.a0 == Catch::Approx(bisect_1d(loss, ys)).margin(1e-6));
}

TEST_CASE("loss trace never increases", "[landscape]") {
    Rng rng(3, 0);
    auto cross = gen_named("cross_balanced", 16, rng).ds;
    auto res = train_gd(Network{random_net(3, 3, {ActKind::softplus, 0}, 5)},
                        LossSpec::poly_hinge(2), cross, TrainOpts{});
    REQUIRE(res.loss_trace.size() >= 2);
    for (size_t i = 1; i < res.loss_trace.size(); ++i)
        REQUIRE(res.loss_trace[i] <= res.loss_trace[i - 1]);
}

TEST_CASE("starting at a certified minimum takes zero iterations", "[landscape]") {
    Rng rng(4, 0);
    auto cross = gen_named("cross_balanced", 16, rng).ds;
    auto c = build_relu_inactive(cross, 4, LossSpec::poly_hinge(2));
    auto res = train_gd(c.net, c.loss, cross, TrainOpts{});
    REQUIRE(res.converged);
    REQUIRE(res.iters == 0);
}

TEST_CASE("separable data with softplus trains to zero error", "[landscape]") {
    Rng rng(6, 0);
    auto sd = gen_separable(4, 30, 0.5, rng);
    TrainOpts opts;
    opts.max_iters = 5000;
    auto res = train_gd(Network{random_net(2, 4, {ActKind::softplus, 0}, 7, 0.3)},
                        LossSpec::poly_hinge(3), sd.ds, opts);
    REQUIRE(training_error(res.net, sd.ds).num == 0);
}

TEST_CASE("train_gd aborts on non-finite loss", "[landscape]") {
    Dataset ds;
    ds.push({1.0}, 1);
    ShortcutNet s;
    s.fs = SingleLayerParams::zeros(1, 1, {ActKind::linear, 0});
    s.fs.a0 = std::numeric_limits<double>::quiet_NaN();
    REQUIRE_THROWS(train_gd(Network{s}, LossSpec::poly_hinge(2), ds, TrainOpts{}));
}

TEST_CASE("lemma-1 residuals vanish at the symmetric construction", "[landscape]") {
    Rng rng(8, 0);
    auto xor4 = gen_named("xor4_balanced", 8, rng).ds;
    auto c = build_symmetric_zero(xor4, 4, {ActKind::tanh_act, 0}, LossSpec::poly_hinge(2));
    Vec res = check_lemma1(std::get<ShortcutNet>(c.net), c.loss, xor4);
    for (double r : res) REQUIRE(r <= 1e-10);
}

TEST_CASE("logistic loss on separable data keeps residuals positive off the optimum", "[landscape]") {
    Rng rng(9, 0);
    auto sd = gen_separable(3, 20, 0.5, rng);
    LossSpec logi = LossSpec::logistic();
    int tried = 0;
    for (uint64_t seed = 0; tried < 25; ++seed) {
        ShortcutNet s = random_net(2, 3, {ActKind::softplus, 0}, 100 + seed);
        if (training_error(Network{s}, sd.ds).num == 0) continue;
        ++tried;
        Vec res = check_lemma1(s, logi, sd.ds);
        double mx = 0;
        for (double r : res) mx = std::max(mx, r);
        REQUIRE(mx > 0.0);
    }
}

TEST_CASE("residuals are exactly zero when every margin clears the hinge", "[landscape]") {
    Dataset ds;
    ds.push({1.0}, 1);
    ds.push({-1.0}, -1);
    ShortcutNet s;
    s.fs = SingleLayerParams::zeros(1, 1, {ActKind::softplus, 0});
    s.fs.a[0] = 20.0;
    s.fs.w[0] = {20.0};
    s.fs.a0 = -20.0 * act_eval(s.fs.activation, 0.0);
    Vec res = check_lemma1(s, LossSpec::poly_hinge(6), ds);
    REQUIRE(res[0] == 0.0);
}

TEST_CASE("lemma-1 residuals agree with the gradient blocks", "[landscape]") {
    Rng rng(10, 0);
    LossSpec loss = LossSpec::poly_hinge(6);
    for (int t = 0; t < 10; ++t) {
        Dataset ds;
        Rng dr(20 + t, 0);
        for (int i = 0; i < 6; ++i) {
            Vec x = {dr.normal(), dr.normal()};
            ds.push(x, (dr.next_u64() & 1) ? 1 : -1);
        }
        ShortcutNet s = random_net(3, 2, {ActKind::softplus, 0}, 50 + t);
        Vec res = check_lemma1(s, loss, ds);
        Vec g = grad(Network{s}, loss, ds);
        int m = 3, d = 2;
        for (int j = 0; j < m; ++j) {
            if (std::fabs(s.fs.a[j]) < 1e-12) continue;
            double wn = 0;
            for (int k = 0; k < d; ++k) {
                double gk = g[1 + m + j * d + k];
                wn += gk * gk;
            }
            REQUIRE(std::fabs(std::sqrt(wn) / std::fabs(s.fs.a[j]) - res[j]) <= 1e-9 * (1 + res[j]));
        }
    }
}

TEST_CASE("certify is deterministic given the seed and flags non-critical points", "[landscape]") {
    Rng rng(12, 0);
    auto cross = gen_named("cross_balanced", 16, rng).ds;
    LossSpec loss = LossSpec::poly_hinge(2);
    Network net{random_net(2, 3, {ActKind::softplus, 0}, 77)};

    CertifyOpts opts;
    Rng r1(5, 5), r2(5, 5);
    Certificate a = certify(net, loss, cross, opts, r1);
    Certificate b = certify(net, loss, cross, opts, r2);
    REQUIRE(a.verdict == Verdict::inconclusive);  // random point, gradient above tol
    REQUIRE(a.grad_norm == b.grad_norm);
    REQUIRE(a.hess_min_eig == b.hess_min_eig);
    REQUIRE(a.worst_loss_delta == b.worst_loss_delta);
}

TEST_CASE("sweep validation names the violated clause", "[landscape]") {
    SweepConfig cfg;
    cfg.scenario = Scenario::thm1;
    Rng rng(1, 0);
    cfg.ds = gen_named("xor4_balanced", 8, rng).ds;
    cfg.r = 2;
    cfg.r_plus = cfg.r_minus = 1;
    cfg.activation = {ActKind::softplus, 0};
    cfg.loss = LossSpec::poly_hinge(4);  // p below 6
    REQUIRE_THROWS_WITH(sweep_experiment(cfg), Catch::Matchers::ContainsSubstring("p >= 6"));

    cfg.loss = LossSpec::poly_hinge(6);
    cfg.activation = {ActKind::relu, 0};  // wrong neuron class for thm1
    REQUIRE_THROWS_WITH(sweep_experiment(cfg), Catch::Matchers::ContainsSubstring("softplus-class"));
}

TEST_CASE("a table1 cell seeded at the dead-relu construction shows the violation", "[landscape]") {
    Rng rng(14, 0);
    SweepConfig cfg;
    cfg.scenario = Scenario::table1;
    cfg.ds = gen_named("cross_balanced", 16, rng).ds;
    cfg.r = 3;
    cfg.r_plus = cfg.r_minus = 2;
    cfg.activation = {ActKind::relu, 0};
    cfg.loss = LossSpec::poly_hinge(2);
    cfg.m_neurons = 8;
    cfg.train.restarts = 2;
    cfg.seed = 3;
    auto cons = build_relu_inactive(cfg.ds, 8, cfg.loss);
    cfg.seed_net = cons.net;
    cfg.certify.radius = cons.proven_radius;
    auto res = sweep_experiment(cfg);
    REQUIRE(res.violations >= 1);
    REQUIRE(res.rows[0].violation);
}
