#pragma once

// Exact builders for the counterexample local minima: dead-relu layers,
// linear-regime leaky units, the symmetric all-zero-weight point, dead
// feedforward and identity-shortcut nets, and the bump-branch minima pinned
// by dual weights. Each returns the net together with the claimed error
// bound and a computable certification radius.

#include "losscape/conditions.hpp"
#include "losscape/landscape.hpp"
#include "losscape/models.hpp"

namespace losscape {

struct Construction {
    Network net;
    Rational claimed_error_lower_bound;
    double proven_radius = 0;
    std::string scenario;
    LossSpec loss;
    Block certify_block = Block::theta_s;
    json inputs_echo;
};

// ---- 1-D convex problem min_a (1/n) sum_i l(-y_i (a - offset)) ----
// Bisection on the monotone derivative; flat optima resolved to the
// midpoint (bounded interval) or boundary + 1 (half-infinite flat set).
inline double solve_1d_convex(const LossSpec& loss, const std::vector<int>& labels, double offset) {
    require(!labels.empty(), "solve_1d_convex: no labels");
    auto g = [&](double a) {
        double s = 0;
        for (int y : labels) s += loss_deriv(loss, -y * (a - offset), 1) * (-y);
        return s;
    };
    const double box = 1e6;
    double glo = g(-box), ghi = g(box);
    // flat-tailed losses admit exactly-zero derivative plateaus; all others
    // need a strict sign change inside the box
    bool flat_tail = loss_deriv(loss, -loss.z0 - 1.0, 1) == 0.0;
    if (flat_tail ? (glo > 0 || ghi < 0) : !(glo < 0 && ghi > 0))
        throw std::invalid_argument("solve_1d_convex: derivative never changes sign within [-1e6,1e6]");

    auto bisect_boundary = [&](bool leftmost) {
        // leftmost: infimum of {a : g(a) >= 0}; rightmost: supremum of {a : g(a) <= 0}
        double lo = -box, hi = box;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            bool pred = leftmost ? g(mid) >= 0 : g(mid) > 0;
            (pred ? hi : lo) = mid;
        }
        return 0.5 * (lo + hi);
    };
    double left = bisect_boundary(true);
    double right = bisect_boundary(false);
    double a;
    if (right >= box - 1)
        a = left + 1.0;
    else if (left <= -box + 1)
        a = right - 1.0;
    else
        a = 0.5 * (left + right);
    // Newton polish toward |g| <= 1e-10 when the zero is a crossing
    for (int it = 0; it < 50; ++it) {
        double gv = g(a);
        if (std::fabs(gv) <= 1e-12) break;
        double h = 0;
        for (int y : labels) h += loss_deriv(loss, -y * (a - offset), 2);
        if (h <= 0) break;
        a -= gv / h;
    }
    require(std::fabs(g(a)) <= 1e-10, "solve_1d_convex: residual too large");
    return a;
}

// Convex linear-model subproblem min_w (1/n) sum l(-y w^T x) by damped
// Newton with a gradient fallback; dimensions here are tiny.
inline Vec linear_hinge_minimizer(const std::vector<Vec>& xs, const std::vector<int>& ys,
                                  const LossSpec& loss, double tol = 1e-12) {
    int n = (int)xs.size(), d = (int)xs[0].size();
    Vec w(d, 0.0);
    auto objective = [&](const Vec& v) {
        double s = 0;
        for (int i = 0; i < n; ++i) s += loss_eval(loss, -ys[i] * dot(v, xs[i]));
        return s / n;
    };
    auto gradient = [&](const Vec& v) {
        Vec g(d, 0.0);
        for (int i = 0; i < n; ++i) {
            double gi = loss_deriv(loss, -ys[i] * dot(v, xs[i]), 1) * (-ys[i]) / n;
            for (int k = 0; k < d; ++k) g[k] += gi * xs[i][k];
        }
        return g;
    };
    double cur = objective(w);
    for (int it = 0; it < 500; ++it) {
        Vec g = gradient(w);
        double gn = norm2(g);
        if (gn <= tol) break;
        Mat h(d, d);
        for (int i = 0; i < n; ++i) {
            double hi = loss_deriv(loss, -ys[i] * dot(w, xs[i]), 2) / n;
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) h(r, c) += hi * xs[i][r] * xs[i][c];
        }
        double tr = 0;
        for (int k = 0; k < d; ++k) tr += h(k, k);
        for (int k = 0; k < d; ++k) h(k, k) += std::max(1e-12, 1e-10 * tr);
        Vec p;
        try {
            Vec ng(d);
            for (int k = 0; k < d; ++k) ng[k] = -g[k];
            p = solve_linear(h, ng);
        } catch (const std::runtime_error&) {
            p = -1.0 * g;
        }
        if (dot(p, g) >= 0) p = -1.0 * g;
        // damped step; accepted on loss decrease or on gradient-norm
        // contraction (the latter has no floating-point floor)
        double eta = 1.0;
        bool ok = false;
        for (int tries = 0; tries < 60; ++tries) {
            Vec trial = w + eta * p;
            double lt = objective(trial);
            if (lt <= cur + 1e-4 * eta * dot(g, p) || norm2(gradient(trial)) <= (1 - 0.25 * eta) * gn) {
                w = std::move(trial);
                cur = lt;
                ok = true;
                break;
            }
            eta *= 0.5;
        }
        if (!ok) break;
    }
    return w;
}

namespace detail {
inline double max_norm(const Dataset& ds) {
    double k = 0;
    for (const Vec& x : ds.x) k = std::max(k, norm2(x));
    return k;
}
inline void require_last_coord_one(const Dataset& ds, const std::string& who) {
    for (const Vec& x : ds.x)
        require(std::fabs(x.back() - 1.0) <= 1e-12, who + ": every sample needs last coordinate 1");
}
inline std::vector<int> ds_labels(const Dataset& ds) { return ds.y; }

// rigorous parameter-Lipschitz bound for the pre-activations of a net's
// last layer, used to convert dead-unit slack into a perturbation radius
inline double ff_param_lipschitz(const FeedforwardParams& f, double input_bound, double r_cap = 1.0) {
    double b = input_bound;   // value bound, grows with perturbation r_cap
    double lip = 0;           // bound on |change of layer output| per unit r
    for (const Layer& l : f.layers) {
        double wf = 0;
        for (const Vec& row : l.w) wf += dot(row, row);
        wf = std::sqrt(wf);
        double bn = norm2(l.b);
        // relu-type activations are 1-Lipschitz in z
        lip = (wf + r_cap) * lip + (b + 1.0);
        b = (wf + r_cap) * b + bn + r_cap;
    }
    return lip;
}
}  // namespace detail

// ---- dead relu-class layer: constant output at the 1-D optimum ----
inline Construction build_relu_inactive(const Dataset& ds, int m, const LossSpec& loss,
                                        ActivationSpec act = {ActKind::relu, 0}) {
    require(m >= 1, "build_relu_inactive: need m >= 1");
    require(classify_activation(act).count(NeuronClass::relu_class),
            "build_relu_inactive: activation must be relu-class");
    detail::require_last_coord_one(ds, "build_relu_inactive");
    int d = ds.dim();
    double k = detail::max_norm(ds);

    ShortcutNet s;
    s.fs = SingleLayerParams::zeros(m, d, act);
    for (int j = 0; j < m; ++j) {
        s.fs.a[j] = 1.0;
        s.fs.w[j][0] = 1.0;           // unit in the leading coordinates
        s.fs.w[j][d - 1] = -k - 1.0;  // drives every pre-activation below -1
    }
    s.fs.a0 = solve_1d_convex(loss, ds.y, 0.0);
    s.fd = ConstantBranch{0.0};

    double slack = std::numeric_limits<double>::infinity();
    for (const Vec& x : ds.x) slack = std::min(slack, -(dot(s.fs.w[0], x)));
    require(slack >= 1.0 - 1e-12, "build_relu_inactive: pre-activation slack lost");
    for (const Vec& x : ds.x)
        require(s.forward(x) == s.fs.a0, "build_relu_inactive: forward must equal a0 on samples");

    Construction c;
    c.net = s;
    c.loss = loss;
    c.scenario = "relu_inactive";
    c.proven_radius = slack / (2.0 * std::max(k, 1.0));
    long long mn = std::min(ds.n_pos(), ds.n_neg());
    c.claimed_error_lower_bound = Rational{mn, ds.n()};
    c.inputs_echo = {{"m", m}, {"activation", act_kind_name(act.kind)}, {"n", ds.n()}};
    return c;
}

// ---- leaky-class units pinned to their linear regime ----
inline Construction build_leaky_linear(const Dataset& ds, int m, const LossSpec& loss,
                                       ActivationSpec act = ActivationSpec::make(ActKind::leaky_relu, 0.1)) {
    require(m >= 1, "build_leaky_linear: need m >= 1");
    require(classify_activation(act).count(NeuronClass::leaky_relu_class),
            "build_leaky_linear: activation must be leaky-relu-class");
    detail::require_last_coord_one(ds, "build_leaky_linear");
    int d = ds.dim();

    Vec wstar = linear_hinge_minimizer(ds.x, ds.y, loss);
    double k = 0;
    for (const Vec& x : ds.x) k = std::max(k, std::fabs(dot(wstar, x)));

    ShortcutNet s;
    s.fs = SingleLayerParams::zeros(m, d, act);
    for (int j = 0; j < m; ++j) {
        s.fs.a[j] = 1.0 / m;
        s.fs.w[j] = wstar;
        s.fs.w[j][d - 1] += k + 1.0;  // shift through the constant coordinate
    }
    s.fs.a0 = -(k + 1.0);  // cancels the shift so forward equals w*^T x
    s.fd = ConstantBranch{0.0};

    for (int i = 0; i < ds.n(); ++i) {
        double pre = dot(s.fs.w[0], ds.x[i]);
        require(pre >= 1.0 - 1e-9, "build_leaky_linear: pre-activation fell below 1");
        require(std::fabs(s.forward(ds.x[i]) - dot(wstar, ds.x[i])) <= 1e-9 * (1 + std::fabs(dot(wstar, ds.x[i]))),
                "build_leaky_linear: forward must equal the optimal linear model");
    }
    Rational err = training_error(Network{s}, ds);
    require(err.num > 0,
            "build_leaky_linear: dataset is linearly separable (optimal linear model has zero error)");

    Construction c;
    c.net = s;
    c.loss = loss;
    c.scenario = "leaky_linear";
    c.proven_radius = 1.0 / (2.0 * std::max(detail::max_norm(ds), 1.0));
    c.claimed_error_lower_bound = err;
    c.inputs_echo = {{"m", m}, {"activation", act_kind_name(act.kind)}, {"w_star", wstar}};
    return c;
}

// ---- symmetric zero-weight point: all weights zero, output the 1-D optimum ----
// sigmoid-class mode needs an antisymmetric dataset (every (x,y) paired
// with (-x,y)); quadratic-class mode needs the class second-moment gap to
// be definite.
inline Construction build_symmetric_zero(const Dataset& ds, int m, ActivationSpec act,
                                         const LossSpec& loss) {
    require(m >= 1, "build_symmetric_zero: need m >= 1");
    int d = ds.dim();

    bool antisymmetric = true;
    for (int i = 0; i < ds.n() && antisymmetric; ++i) {
        bool found = false;
        for (int j = 0; j < ds.n() && !found; ++j) {
            if (ds.y[i] != ds.y[j]) continue;
            double dist = 0;
            for (int k = 0; k < d; ++k) dist += std::fabs(ds.x[i][k] + ds.x[j][k]);
            found = dist <= 1e-12;
        }
        antisymmetric = found;
    }

    double a_sign = -1.0;
    if (!antisymmetric) {
        require(classify_activation(act).count(NeuronClass::quadratic_class),
                "build_symmetric_zero: dataset not antisymmetric and activation not quadratic-class");
        require(ds.n_pos() > 0 && ds.n_neg() > 0, "build_symmetric_zero: both labels required");
        SymMat gap(d);
        for (int i = 0; i < ds.n(); ++i) {
            double w = ds.y[i] == 1 ? 1.0 / ds.n_pos() : -1.0 / ds.n_neg();
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) gap(r, c) += w * ds.x[i][r] * ds.x[i][c];
        }
        auto eig = sym_eig(gap);
        double scale = std::max(std::fabs(eig.values.front()), std::fabs(eig.values.back()));
        if (eig.values.front() > 1e-10 * scale)
            a_sign = -1.0;  // positive-definite gap
        else if (eig.values.back() < -1e-10 * scale)
            a_sign = +1.0;  // negative-definite gap
        else
            throw std::invalid_argument(
                "build_symmetric_zero: class second-moment gap is not definite");
    }

    ShortcutNet s;
    s.fs = SingleLayerParams::zeros(m, d, act);
    for (int j = 0; j < m; ++j) s.fs.a[j] = a_sign;
    double sigma0 = act_eval(act, 0.0);
    double base = m * a_sign * sigma0;  // f = a0 + base at w = 0
    double cstar = solve_1d_convex(loss, ds.y, 0.0);
    s.fs.a0 = cstar - base;
    s.fd = ConstantBranch{0.0};

    Network net = s;
    Vec g = grad(net, loss, ds);
    double gs = 0;
    for (int k = 0; k < fs_param_count(s.fs); ++k) gs += g[k] * g[k];
    require(std::sqrt(gs) <= 1e-10, "build_symmetric_zero: construction is not a critical point");

    Construction c;
    c.net = std::move(net);
    c.loss = loss;
    c.scenario = "symmetric_zero";
    c.proven_radius = 0.25;  // the |delta a_j| < 1/2 slack of the argument
    long long mn = std::min(ds.n_pos(), ds.n_neg());
    c.claimed_error_lower_bound = Rational{mn, ds.n()};
    c.inputs_echo = {{"m", m}, {"activation", act_kind_name(act.kind)},
                     {"mode", antisymmetric ? "antisymmetric" : "quadratic_gap"}};
    return c;
}

// ---- feedforward net with a dead last hidden layer ----
inline Construction build_feedforward_inactive(const Dataset& ds, const std::vector<int>& dims,
                                               const LossSpec& loss,
                                               ActivationSpec act = {ActKind::relu, 0}) {
    require(dims.size() >= 3, "build_feedforward_inactive: need at least one hidden layer");
    require(dims.front() == ds.dim() && dims.back() == 1, "build_feedforward_inactive: dims mismatch");
    require(classify_activation(act).count(NeuronClass::relu_class),
            "build_feedforward_inactive: activation must be relu-class");

    FeedforwardParams f = FeedforwardParams::zeros(dims, act);
    int hl = (int)f.layers.size() - 2;  // index of the last hidden layer
    for (int l = 0; l <= hl; ++l) {
        Layer& layer = f.layers[l];
        double scale = 1.0 / std::sqrt(double(layer.in_dim()));
        for (Vec& row : layer.w)
            for (double& v : row) v = scale;  // unit-norm rows
    }
    // evaluate the penultimate activations to size the dead biases
    double k = 0;
    for (const Vec& x : ds.x) {
        Vec h = x;
        for (int l = 0; l < hl; ++l) {
            const Layer& layer = f.layers[l];
            Vec z(layer.out_dim());
            for (int j = 0; j < layer.out_dim(); ++j)
                z[j] = act_eval(layer.activation, dot(layer.w[j], h) + layer.b[j]);
            h = std::move(z);
        }
        k = std::max(k, norm2(h));
    }
    for (double& b : f.layers[hl].b) b = -(k + 1.0);
    Layer& out = f.layers.back();
    for (Vec& row : out.w)
        for (double& v : row) v = 1.0;
    out.b[0] = solve_1d_convex(loss, ds.y, 0.0);

    for (const Vec& x : ds.x)
        require(ff_forward_scalar(f, x) == out.b[0],
                "build_feedforward_inactive: forward must be constant on samples");

    double lip = detail::ff_param_lipschitz(f, detail::max_norm(ds));
    Construction c;
    c.net = f;
    c.loss = loss;
    c.scenario = "feedforward_inactive";
    c.certify_block = Block::all;
    c.proven_radius = std::min(1.0, 0.5 / std::max(lip, 1.0));
    long long mn = std::min(ds.n_pos(), ds.n_neg());
    c.claimed_error_lower_bound = Rational{mn, ds.n()};
    c.inputs_echo = {{"dims", dims}, {"activation", act_kind_name(act.kind)}};
    return c;
}

// ---- identity shortcut around a dead relu branch ----
inline Construction build_identity_shortcut(const Dataset& ds, int hidden, const LossSpec& loss) {
    require(hidden >= 1, "build_identity_shortcut: need hidden width >= 1");
    int d = ds.dim();

    IdentityShortcutNet net;
    net.h = FeedforwardParams::zeros({d, hidden, d}, {ActKind::relu, 0});
    net.h.layers.back().activation = {ActKind::relu, 0};  // every neuron in H is a relu
    double scale = 1.0 / std::sqrt(double(d));
    for (Vec& row : net.h.layers[0].w)
        for (double& v : row) v = scale;
    double k = 0;
    for (const Vec& x : ds.x) {
        const Layer& l0 = net.h.layers[0];
        Vec h(l0.out_dim());
        for (int j = 0; j < l0.out_dim(); ++j) h[j] = act_eval(l0.activation, dot(l0.w[j], x));
        k = std::max(k, norm2(h));
    }
    for (double& b : net.h.layers.back().b) b = -(k + 1.0);

    // optimal affine model over (x, 1)
    std::vector<Vec> aug;
    for (const Vec& x : ds.x) {
        Vec v = x;
        v.push_back(1.0);
        aug.push_back(std::move(v));
    }
    Vec wb = linear_hinge_minimizer(aug, ds.y, loss);
    net.a.assign(wb.begin(), wb.begin() + d);
    net.b = wb[d];

    for (int i = 0; i < ds.n(); ++i) {
        Vec hx = ff_forward_vec(net.h, ds.x[i]);
        require(norm2(hx) == 0.0, "build_identity_shortcut: H must vanish on samples");
        double want = dot(net.a, ds.x[i]) + net.b;
        require(std::fabs(net.forward(ds.x[i]) - want) <= 1e-12 * (1 + std::fabs(want)),
                "build_identity_shortcut: forward must equal the affine model");
    }
    Rational err = training_error(Network{net}, ds);
    require(err.num > 0, "build_identity_shortcut: dataset is linearly separable");

    double lip = detail::ff_param_lipschitz(net.h, detail::max_norm(ds));
    Construction c;
    c.net = net;
    c.loss = loss;
    c.scenario = "identity_shortcut";
    c.certify_block = Block::all;
    c.proven_radius = std::min(1.0, 0.5 / std::max(lip, 1.0));
    c.claimed_error_lower_bound = err;
    c.inputs_echo = {{"hidden", hidden}};
    return c;
}

// ---- mu inversion: l'(-y_i(mu_i + base)) = (lambda_i / lambda_max) l'(1) ----
// The anchor sample gets margin exactly -1; lambda_i = 0 pins the flat-set
// margin at z0 + 1. Solved by bisection on the increasing branch of l'.
inline Vec solve_mu(const LossSpec& loss, const Vec& lambdas, const std::vector<int>& labels,
                    int m, double sigma0) {
    require(loss.kind == LossKind::poly_hinge, "solve_mu: needs the flat-tailed polynomial hinge");
    require(lambdas.size() == labels.size(), "solve_mu: size mismatch");
    int imax = 0;
    for (size_t i = 1; i < lambdas.size(); ++i)
        if (lambdas[i] > lambdas[imax]) imax = (int)i;
    require(lambdas[imax] > 0, "solve_mu: all lambda are zero");
    for (double l : lambdas) require(l >= 0, "solve_mu: lambda must be nonnegative");

    double lmax = lambdas[imax];
    double lp1 = loss_deriv(loss, 1.0, 1);
    double base = -m * sigma0;  // f_i = mu_i + base for the a_j = -1 skeleton

    Vec mu(lambdas.size());
    for (size_t i = 0; i < lambdas.size(); ++i) {
        double t;  // t = -y_i f_i
        if (lambdas[i] == lmax) {
            t = 1.0;  // margin y f = -1: the forced misclassification
        } else if (lambdas[i] == 0) {
            t = -(loss.z0 + 1.0);  // flat-set convention
        } else {
            double target = lambdas[i] / lmax * lp1;
            double lo = -loss.z0, hi = 1.0;
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (lo + hi);
                (loss_deriv(loss, mid, 1) >= target ? hi : lo) = mid;
            }
            t = 0.5 * (lo + hi);
            require(std::fabs(loss_deriv(loss, t, 1) - target) <= 1e-10 * (1 + target),
                    "solve_mu: bisection residual too large");
        }
        mu[i] = -labels[i] * t - base;
    }
    return mu;
}

// ---- bump-branch local minimum from a dual certificate ----
// activation: quadratic-class (sigma'(0)=0, any witness) or a positive-
// derivative neuron such as softplus (then the witness must satisfy
// sum lambda_i y_i x_i = 0; it is re-projected exactly onto that set).
inline Construction build_bump_minimum(const Dataset& ds, const DualCertificate& dual,
                                       const LossSpec& loss, int m, ActivationSpec act) {
    require(m >= 1, "build_bump_minimum: need m >= 1");
    require(dual.definiteness == "psd" || dual.definiteness == "nsd",
            "build_bump_minimum: dual certificate orientation missing");
    int d = ds.dim(), n = ds.n();
    require((int)dual.lambda.size() == n, "build_bump_minimum: lambda size mismatch");

    // Repeated samples share an anchor; their weights are averaged, which
    // leaves every certificate identity unchanged. A point carrying both
    // labels cannot be pinned and is rejected.
    std::vector<int> group(n, -1);
    std::vector<int> reps;
    for (int i = 0; i < n; ++i) {
        for (int g = 0; g < (int)reps.size(); ++g) {
            if (ds.x[i] == ds.x[reps[g]]) {
                require(ds.y[i] == ds.y[reps[g]],
                        "build_bump_minimum: identical points carry different labels");
                group[i] = g;
                break;
            }
        }
        if (group[i] < 0) {
            group[i] = (int)reps.size();
            reps.push_back(i);
        }
    }
    int ng = (int)reps.size();
    require(ng >= 2, "build_bump_minimum: need at least two distinct points");

    double gap = std::numeric_limits<double>::infinity();
    for (int a = 0; a < ng; ++a)
        for (int b = a + 1; b < ng; ++b) {
            double g = 0;
            for (int k = 0; k < d; ++k)
                g = std::max(g, std::fabs(ds.x[reps[a]][k] - ds.x[reps[b]][k]));
            gap = std::min(gap, g);
        }

    Vec lambda = dual.lambda;
    {
        Vec gsum(ng, 0.0);
        std::vector<int> gcount(ng, 0);
        for (int i = 0; i < n; ++i) {
            gsum[group[i]] += lambda[i];
            ++gcount[group[i]];
        }
        for (int i = 0; i < n; ++i) lambda[i] = gsum[group[i]] / gcount[group[i]];
    }
    double sigma_p0 = act_deriv(act, 0.0, 1);
    bool needs_mean_zero = std::fabs(sigma_p0) > 1e-12;
    if (needs_mean_zero) {
        Vec pre(d, 0.0);
        for (int i = 0; i < n; ++i)
            for (int r = 0; r < d; ++r) pre[r] += lambda[i] * ds.y[i] * ds.x[i][r];
        require(norm2(pre) <= 1e-6,
                "build_bump_minimum: witness violates sum(lambda y x) = 0, required when sigma'(0) != 0");
        // exact projection onto { sum lambda y x = 0 } with class sums kept;
        // the KKT system is tiny (d + 2 multipliers)
        int nc = d + 2;
        Mat a(nc, nc);
        Vec rhs(nc, 0.0);
        std::vector<Vec> rows(nc, Vec(n, 0.0));
        for (int i = 0; i < n; ++i) {
            for (int r = 0; r < d; ++r) rows[r][i] = ds.y[i] * ds.x[i][r];
            rows[d][i] = ds.y[i] == 1 ? 1.0 : 0.0;
            rows[d + 1][i] = ds.y[i] == -1 ? 1.0 : 0.0;
        }
        Vec target(nc, 0.0);
        double spos = 0, sneg = 0;
        for (int i = 0; i < n; ++i) (ds.y[i] == 1 ? spos : sneg) += lambda[i];
        target[d] = spos;
        target[d + 1] = sneg;
        for (int r = 0; r < nc; ++r) {
            rhs[r] = -dot(rows[r], lambda) + target[r];
            for (int c = 0; c < nc; ++c) a(r, c) = dot(rows[r], rows[c]);
        }
        for (int r = 0; r < nc; ++r) a(r, r) += 1e-12;
        Vec mult = solve_linear(a, rhs);
        for (int i = 0; i < n; ++i)
            for (int r = 0; r < nc; ++r) lambda[i] += mult[r] * rows[r][i];
        Vec msum(d, 0.0);
        for (int i = 0; i < n; ++i) {
            require(lambda[i] >= -1e-9, "build_bump_minimum: exact mean-zero projection left the simplex");
            lambda[i] = std::max(lambda[i], 0.0);
            for (int r = 0; r < d; ++r) msum[r] += lambda[i] * ds.y[i] * ds.x[i][r];
        }
        require(norm2(msum) <= 1e-8, "build_bump_minimum: identity sum(lambda y x) = 0 failed");
    }
    {
        double spos = 0, sneg = 0;
        for (int i = 0; i < n; ++i) (ds.y[i] == 1 ? spos : sneg) += lambda[i];
        require(std::fabs(spos - sneg) <= 1e-9 * (1 + spos), "build_bump_minimum: class sums differ");
        require(spos + sneg > 0, "build_bump_minimum: lambda all zero");
        // the (possibly projected) weights must still witness the claimed
        // orientation
        auto eig = sym_eig(detail::weighted_gram(ds, lambda));
        double tol = 1e-8 * (1 + detail::data_scale(ds));
        if (dual.definiteness == "psd")
            require(eig.values.front() >= -tol, "build_bump_minimum: witness matrix lost psd");
        else
            require(eig.values.back() <= tol, "build_bump_minimum: witness matrix lost nsd");
    }

    double a_sign = dual.definiteness == "psd" ? -1.0 : 1.0;
    double sigma0 = act_eval(act, 0.0);
    // solve_mu works in the a_j = -1 frame; the nsd orientation flips the
    // constant through the sign of sigma(0)
    Vec mu = solve_mu(loss, lambda, ds.y, m, a_sign < 0 ? sigma0 : -sigma0);
    for (int i = 0; i < n; ++i) {
        require(std::fabs(mu[i] - mu[reps[group[i]]]) <= 1e-12 * (1 + std::fabs(mu[i])),
                "build_bump_minimum: grouped samples disagree on mu");
        mu[i] = mu[reps[group[i]]];  // snap, so anchor isolation is exact
    }

    ShortcutNet s;
    s.fs = SingleLayerParams::zeros(m, d, act);
    for (int j = 0; j < m; ++j) s.fs.a[j] = a_sign;
    s.fs.a0 = 0.0;

    BumpParams bp;
    for (int g = 0; g < ng; ++g) {
        bp.anchors.push_back(ds.x[reps[g]]);
        bp.mus.push_back(mu[reps[g]]);
    }
    bp.widths.assign(d, gap / 4.0);
    bp.validate();
    s.fd = std::move(bp);

    // stationarity identities before emitting
    Network net = s;
    for (int i = 0; i < n; ++i) {
        double want = mu[i] + m * a_sign * sigma0;
        require(forward(net, ds.x[i]) == want, "build_bump_minimum: anchor isolation failed");
    }
    double a0_res = 0;
    for (int i = 0; i < n; ++i)
        a0_res += loss_deriv(loss, -ds.y[i] * forward(net, ds.x[i]), 1) * (-ds.y[i]);
    require(std::fabs(a0_res) <= 1e-10 * n, "build_bump_minimum: a0 stationarity failed");
    Vec g = grad(net, loss, ds);
    require(norm2(g) <= 1e-9, "build_bump_minimum: gradient does not vanish");

    // third-order slack for smooth non-quadratic activations
    double radius = 0.25;
    if (needs_mean_zero) {
        auto mm = sym_eig(detail::weighted_gram(ds, lambda));
        double lam_min = a_sign < 0 ? mm.values.front() : -mm.values.back();
        double c3 = 0;
        for (double z : symmetric_grid()) {
            double h = 1e-4;
            double d3 = (act_deriv(act, z + h, 2) - act_deriv(act, z - h, 2)) / (2 * h);
            c3 = std::max(c3, std::fabs(d3));
        }
        double b3 = std::pow(detail::max_norm(ds), 3);
        double sum_l = 0;
        for (double l : lambda) sum_l += l;
        double d2 = act_deriv(act, 0.0, 2);
        if (lam_min > 0 && c3 > 0)
            radius = std::min(radius, 1.5 * d2 * lam_min / (c3 * b3 * sum_l));
    }

    Construction c;
    c.net = std::move(net);
    c.loss = loss;
    c.scenario = "bump_minimum";
    c.proven_radius = radius;
    c.claimed_error_lower_bound = Rational{1, n};  // the anchor sample is misclassified
    c.inputs_echo = {{"m", m}, {"activation", act_kind_name(act.kind)},
                     {"definiteness", dual.definiteness}, {"lambda", lambda}};
    return c;
}

// ---- serialization ----

inline json to_json(const Construction& c) {
    return {{"format_version", 1},
            {"scenario", c.scenario},
            {"claimed_error_lower_bound",
             {{"num", c.claimed_error_lower_bound.num}, {"den", c.claimed_error_lower_bound.den}}},
            {"proven_radius", c.proven_radius},
            {"certify_block", c.certify_block == Block::theta_s ? "theta_s" : "all"},
            {"loss", to_json(c.loss)},
            {"net", to_json(c.net)},
            {"inputs", c.inputs_echo}};
}

inline Construction construction_from_json(const json& j) {
    Construction c;
    c.scenario = j.at("scenario").get<std::string>();
    c.claimed_error_lower_bound =
        Rational{j.at("claimed_error_lower_bound").at("num").get<long long>(),
                 j.at("claimed_error_lower_bound").at("den").get<long long>()};
    c.proven_radius = j.at("proven_radius").get<double>();
    c.certify_block = j.at("certify_block").get<std::string>() == "all" ? Block::all : Block::theta_s;
    c.loss = loss_from_json(j.at("loss"));
    c.net = network_from_json(j.at("net"));
    if (j.contains("inputs")) c.inputs_echo = j["inputs"];
    return c;
}

}  // namespace losscape
