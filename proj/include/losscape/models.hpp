#pragma once

// Network architectures: single hidden layer f_S, feedforward branches,
// the shortcut composition f = f_S + f_D, identity-shortcut nets and the
// threshold-unit bump branch. Forward evaluation, empirical loss, training
// error, analytic gradients and finite-difference Hessian blocks.

#include <variant>

#include "losscape/activations.hpp"
#include "losscape/datagen.hpp"
#include "losscape/losses.hpp"
#include "losscape/numerics.hpp"

namespace losscape {

struct Rational {
    long long num = 0;
    long long den = 1;
    double value() const { return double(num) / double(den); }
};

inline int sign_plus(double v) { return v >= 0 ? 1 : -1; }  // sign(0) = +1

struct SingleLayerParams {
    double a0 = 0;
    Vec a;                  // output weights, size M
    std::vector<Vec> w;     // neuron weights, M rows of size d
    Vec b;                  // neuron biases, size M (default zero)
    bool bias_active = false;
    ActivationSpec activation;

    int width() const { return (int)a.size(); }
    int input_dim() const { return w.empty() ? 0 : (int)w[0].size(); }

    static SingleLayerParams zeros(int m, int d, ActivationSpec act) {
        SingleLayerParams p;
        p.a.assign(m, 0.0);
        p.w.assign(m, Vec(d, 0.0));
        p.b.assign(m, 0.0);
        p.activation = act;
        return p;
    }

    double forward(const Vec& x) const {
        require((int)x.size() == input_dim(), "single layer: dimension mismatch");
        double s = a0;
        for (int j = 0; j < width(); ++j) s += a[j] * act_eval(activation, dot(w[j], x) + b[j]);
        return s;
    }
};

struct Layer {
    std::vector<Vec> w;  // out_dim rows of size in_dim
    Vec b;               // out_dim
    ActivationSpec activation;

    int in_dim() const { return w.empty() ? 0 : (int)w[0].size(); }
    int out_dim() const { return (int)w.size(); }
};

struct FeedforwardParams {
    std::vector<Layer> layers;  // last layer's activation is typically linear

    int input_dim() const { return layers.empty() ? 0 : layers.front().in_dim(); }
    int output_dim() const { return layers.empty() ? 0 : layers.back().out_dim(); }

    void validate() const {
        require(!layers.empty(), "feedforward: no layers");
        for (size_t l = 1; l < layers.size(); ++l)
            require(layers[l].in_dim() == layers[l - 1].out_dim(), "feedforward: layer dims do not chain");
    }

    static FeedforwardParams zeros(const std::vector<int>& dims, ActivationSpec hidden_act) {
        require(dims.size() >= 2, "feedforward: need at least input and output dims");
        FeedforwardParams f;
        for (size_t l = 0; l + 1 < dims.size(); ++l) {
            Layer layer;
            layer.w.assign(dims[l + 1], Vec(dims[l], 0.0));
            layer.b.assign(dims[l + 1], 0.0);
            layer.activation = (l + 2 == dims.size()) ? ActivationSpec{ActKind::linear, 0} : hidden_act;
            f.layers.push_back(std::move(layer));
        }
        return f;
    }
};

struct FFCache {
    std::vector<Vec> h;  // h[0] = x, h[l+1] = act_l(z[l])
    std::vector<Vec> z;
};

inline Vec ff_forward_vec(const FeedforwardParams& f, const Vec& x, FFCache* cache = nullptr) {
    require((int)x.size() == f.input_dim(), "feedforward: dimension mismatch");
    Vec h = x;
    if (cache) {
        cache->h.clear();
        cache->z.clear();
        cache->h.push_back(h);
    }
    for (const Layer& layer : f.layers) {
        Vec z(layer.out_dim());
        for (int j = 0; j < layer.out_dim(); ++j) z[j] = dot(layer.w[j], h) + layer.b[j];
        Vec hn(layer.out_dim());
        for (int j = 0; j < layer.out_dim(); ++j) hn[j] = act_eval(layer.activation, z[j]);
        if (cache) {
            cache->z.push_back(z);
            cache->h.push_back(hn);
        }
        h = std::move(hn);
    }
    return h;
}

inline double ff_forward_scalar(const FeedforwardParams& f, const Vec& x, FFCache* cache = nullptr) {
    require(f.output_dim() == 1, "feedforward: scalar output expected");
    return ff_forward_vec(f, x, cache)[0];
}

struct BumpParams {
    std::vector<Vec> anchors;  // one per pinned sample
    Vec mus;                   // pinned output values (fixed, not trainable)
    Vec widths;                // per-coordinate box half-widths (trainable)

    int dim() const { return anchors.empty() ? 0 : (int)anchors[0].size(); }

    void validate() const {
        require(anchors.size() == mus.size(), "bump: anchors/mus size mismatch");
        require((int)widths.size() == dim(), "bump: widths size mismatch");
        for (double t : widths) require(t > 0, "bump: widths must be positive");
        // boxes of side 4*width must stay pairwise separated so that small
        // width perturbations cannot merge anchors
        for (size_t i = 0; i < anchors.size(); ++i)
            for (size_t j = i + 1; j < anchors.size(); ++j) {
                bool separated = false;
                for (int k = 0; k < dim(); ++k)
                    if (std::fabs(anchors[i][k] - anchors[j][k]) >= 4 * widths[k] - 1e-12) separated = true;
                require(separated, "bump: anchor boxes overlap");
            }
    }

    double forward(const Vec& x) const {
        require((int)x.size() == dim(), "bump: dimension mismatch");
        double s = 0;
        for (size_t i = 0; i < anchors.size(); ++i) {
            bool inside = true;
            for (int k = 0; k < dim() && inside; ++k)
                inside = std::fabs(x[k] - anchors[i][k]) <= widths[k];
            if (inside) s += mus[i];
        }
        return s;
    }
};

struct ConstantBranch {
    double value = 0;
};

using Branch = std::variant<ConstantBranch, FeedforwardParams, BumpParams>;

struct ShortcutNet {
    SingleLayerParams fs;
    Branch fd = ConstantBranch{0.0};

    double forward_fd(const Vec& x) const {
        if (auto* c = std::get_if<ConstantBranch>(&fd)) return c->value;
        if (auto* f = std::get_if<FeedforwardParams>(&fd)) return ff_forward_scalar(*f, x);
        return std::get<BumpParams>(fd).forward(x);
    }

    double forward(const Vec& x) const { return fs.forward(x) + forward_fd(x); }
};

struct IdentityShortcutNet {
    Vec a;
    double b = 0;
    FeedforwardParams h;  // R^d -> R^d

    double forward(const Vec& x) const {
        require(x.size() == a.size(), "identity shortcut: dimension mismatch");
        Vec hx = ff_forward_vec(h, x);
        double s = b;
        for (size_t k = 0; k < a.size(); ++k) s += a[k] * (x[k] + hx[k]);
        return s;
    }
};

using Network = std::variant<ShortcutNet, FeedforwardParams, IdentityShortcutNet>;

inline double forward(const Network& net, const Vec& x) {
    return std::visit([&](const auto& n) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(n)>, FeedforwardParams>)
            return ff_forward_scalar(n, x);
        else
            return n.forward(x);
    }, net);
}

// ---- parameter vector layout ----
// shortcut:   [a0, a(M), w row-major (M*d), b(M) if bias_active, fd params]
//             fd feedforward: per layer w row-major then b; fd bump: widths
// feedforward: per layer w row-major then b
// identity:   [a(d), b, h params]

namespace detail {
inline int ff_param_count(const FeedforwardParams& f) {
    int c = 0;
    for (const Layer& l : f.layers) c += l.out_dim() * (l.in_dim() + 1);
    return c;
}
inline void ff_pack(const FeedforwardParams& f, Vec& out) {
    for (const Layer& l : f.layers) {
        for (const Vec& row : l.w) out.insert(out.end(), row.begin(), row.end());
        out.insert(out.end(), l.b.begin(), l.b.end());
    }
}
inline void ff_unpack(FeedforwardParams& f, const Vec& v, size_t& pos) {
    for (Layer& l : f.layers) {
        for (Vec& row : l.w)
            for (double& x : row) x = v[pos++];
        for (double& x : l.b) x = v[pos++];
    }
}
}  // namespace detail

inline int fs_param_count(const SingleLayerParams& fs) {
    int m = fs.width(), d = fs.input_dim();
    return 1 + m + m * d + (fs.bias_active ? m : 0);
}

inline int param_count(const Network& net) {
    if (auto* s = std::get_if<ShortcutNet>(&net)) {
        int c = fs_param_count(s->fs);
        if (auto* f = std::get_if<FeedforwardParams>(&s->fd)) c += detail::ff_param_count(*f);
        if (auto* bp = std::get_if<BumpParams>(&s->fd)) c += (int)bp->widths.size();
        return c;
    }
    if (auto* f = std::get_if<FeedforwardParams>(&net)) return detail::ff_param_count(*f);
    const auto& is = std::get<IdentityShortcutNet>(net);
    return (int)is.a.size() + 1 + detail::ff_param_count(is.h);
}

inline Vec pack(const Network& net) {
    Vec v;
    v.reserve(param_count(net));
    if (auto* s = std::get_if<ShortcutNet>(&net)) {
        v.push_back(s->fs.a0);
        v.insert(v.end(), s->fs.a.begin(), s->fs.a.end());
        for (const Vec& row : s->fs.w) v.insert(v.end(), row.begin(), row.end());
        if (s->fs.bias_active) v.insert(v.end(), s->fs.b.begin(), s->fs.b.end());
        if (auto* f = std::get_if<FeedforwardParams>(&s->fd)) detail::ff_pack(*f, v);
        if (auto* bp = std::get_if<BumpParams>(&s->fd)) v.insert(v.end(), bp->widths.begin(), bp->widths.end());
        return v;
    }
    if (auto* f = std::get_if<FeedforwardParams>(&net)) {
        detail::ff_pack(*f, v);
        return v;
    }
    const auto& is = std::get<IdentityShortcutNet>(net);
    v.insert(v.end(), is.a.begin(), is.a.end());
    v.push_back(is.b);
    detail::ff_pack(is.h, v);
    return v;
}

inline Network unpack(Network net, const Vec& v) {
    require((int)v.size() == param_count(net), "unpack: size mismatch");
    size_t pos = 0;
    if (auto* s = std::get_if<ShortcutNet>(&net)) {
        s->fs.a0 = v[pos++];
        for (double& x : s->fs.a) x = v[pos++];
        for (Vec& row : s->fs.w)
            for (double& x : row) x = v[pos++];
        if (s->fs.bias_active)
            for (double& x : s->fs.b) x = v[pos++];
        if (auto* f = std::get_if<FeedforwardParams>(&s->fd)) detail::ff_unpack(*f, v, pos);
        if (auto* bp = std::get_if<BumpParams>(&s->fd))
            for (double& x : bp->widths) x = v[pos++];
        return net;
    }
    if (auto* f = std::get_if<FeedforwardParams>(&net)) {
        detail::ff_unpack(*f, v, pos);
        return net;
    }
    auto& is = std::get<IdentityShortcutNet>(net);
    for (double& x : is.a) x = v[pos++];
    is.b = v[pos++];
    detail::ff_unpack(is.h, v, pos);
    return net;
}

// ---- loss, error ----

inline double empirical_loss(const Network& net, const LossSpec& loss, const Dataset& ds) {
    require(ds.n() >= 1, "empirical_loss: empty dataset");
    double s = 0;
    for (int i = 0; i < ds.n(); ++i) s += loss_eval(loss, -ds.y[i] * forward(net, ds.x[i]));
    return s / ds.n();
}

inline Rational training_error(const Network& net, const Dataset& ds) {
    require(ds.n() >= 1, "training_error: empty dataset");
    long long bad = 0;
    for (int i = 0; i < ds.n(); ++i)
        if (ds.y[i] != sign_plus(forward(net, ds.x[i]))) ++bad;
    return Rational{bad, ds.n()};
}

// ---- analytic gradient ----

namespace detail {
// backprop one sample through a feedforward net; cot_out is dL/d(output),
// grads are accumulated into `slot` following the packing order
inline void ff_backward_accum(const FeedforwardParams& f, const FFCache& cache, Vec cot,
                              double* slot) {
    int L = (int)f.layers.size();
    // per-layer parameter offsets within the feedforward block
    std::vector<int> off(L);
    int c = 0;
    for (int l = 0; l < L; ++l) {
        off[l] = c;
        c += f.layers[l].out_dim() * (f.layers[l].in_dim() + 1);
    }
    for (int l = L - 1; l >= 0; --l) {
        const Layer& layer = f.layers[l];
        const Vec& hin = cache.h[l];
        const Vec& z = cache.z[l];
        Vec dz(layer.out_dim());
        for (int j = 0; j < layer.out_dim(); ++j)
            dz[j] = cot[j] * act_deriv(layer.activation, z[j], 1);
        double* wslot = slot + off[l];
        double* bslot = wslot + layer.out_dim() * layer.in_dim();
        for (int j = 0; j < layer.out_dim(); ++j) {
            for (int k = 0; k < layer.in_dim(); ++k) wslot[j * layer.in_dim() + k] += dz[j] * hin[k];
            bslot[j] += dz[j];
        }
        if (l > 0) {
            Vec cin(layer.in_dim(), 0.0);
            for (int j = 0; j < layer.out_dim(); ++j)
                for (int k = 0; k < layer.in_dim(); ++k) cin[k] += dz[j] * layer.w[j][k];
            cot = std::move(cin);
        }
    }
}
}  // namespace detail

// Gradient of the empirical loss over all trainable parameters. Bump
// anchors and mus are constants; its widths are parameters whose gradient
// is exactly zero away from box boundaries.
inline Vec grad(const Network& net, const LossSpec& loss, const Dataset& ds) {
    Vec g(param_count(net), 0.0);
    const double inv_n = 1.0 / ds.n();

    if (auto* s = std::get_if<ShortcutNet>(&net)) {
        const SingleLayerParams& fs = s->fs;
        int m = fs.width(), d = fs.input_dim();
        int wb = 1 + m;                    // offset of w block
        int bb = wb + m * d;               // offset of b block (if active)
        int fdb = fs_param_count(fs);      // offset of fd block
        const FeedforwardParams* ff = std::get_if<FeedforwardParams>(&s->fd);
        for (int i = 0; i < ds.n(); ++i) {
            const Vec& x = ds.x[i];
            FFCache cache;
            double fd_val;
            if (ff)
                fd_val = ff_forward_vec(*ff, x, &cache)[0];
            else
                fd_val = s->forward_fd(x);
            double fi = fs.forward(x) + fd_val;
            double gi = inv_n * loss_deriv(loss, -ds.y[i] * fi, 1) * (-ds.y[i]);
            if (gi == 0) continue;
            g[0] += gi;
            for (int j = 0; j < m; ++j) {
                double z = dot(fs.w[j], x) + fs.b[j];
                g[1 + j] += gi * act_eval(fs.activation, z);
                double dz = gi * fs.a[j] * act_deriv(fs.activation, z, 1);
                for (int k = 0; k < d; ++k) g[wb + j * d + k] += dz * x[k];
                if (fs.bias_active) g[bb + j] += dz;
            }
            if (ff) detail::ff_backward_accum(*ff, cache, Vec{gi}, g.data() + fdb);
            // bump widths: gradient identically zero off the box boundaries
        }
        return g;
    }

    if (auto* f = std::get_if<FeedforwardParams>(&net)) {
        for (int i = 0; i < ds.n(); ++i) {
            FFCache cache;
            double fi = ff_forward_vec(*f, ds.x[i], &cache)[0];
            double gi = inv_n * loss_deriv(loss, -ds.y[i] * fi, 1) * (-ds.y[i]);
            if (gi == 0) continue;
            detail::ff_backward_accum(*f, cache, Vec{gi}, g.data());
        }
        return g;
    }

    const auto& is = std::get<IdentityShortcutNet>(net);
    int d = (int)is.a.size();
    for (int i = 0; i < ds.n(); ++i) {
        const Vec& x = ds.x[i];
        FFCache cache;
        Vec hx = ff_forward_vec(is.h, x, &cache);
        double fi = is.b;
        for (int k = 0; k < d; ++k) fi += is.a[k] * (x[k] + hx[k]);
        double gi = inv_n * loss_deriv(loss, -ds.y[i] * fi, 1) * (-ds.y[i]);
        if (gi == 0) continue;
        for (int k = 0; k < d; ++k) g[k] += gi * (x[k] + hx[k]);
        g[d] += gi;
        Vec cot(d);
        for (int k = 0; k < d; ++k) cot[k] = gi * is.a[k];
        detail::ff_backward_accum(is.h, cache, std::move(cot), g.data() + d + 1);
    }
    return g;
}

// ---- Hessian over a parameter block: central differences of the analytic
// gradient (step 1e-4), symmetrized. One code path for all architectures.

inline SymMat hessian_block(const Network& net, const LossSpec& loss, const Dataset& ds,
                            const std::vector<int>& block, double step = 1e-4) {
    int nb = (int)block.size();
    Vec theta = pack(net);
    Mat h(nb, nb);
    for (int c = 0; c < nb; ++c) {
        Vec tp = theta, tm = theta;
        tp[block[c]] += step;
        tm[block[c]] -= step;
        Vec gp = grad(unpack(net, tp), loss, ds);
        Vec gm = grad(unpack(net, tm), loss, ds);
        for (int r = 0; r < nb; ++r) h(r, c) = (gp[block[r]] - gm[block[r]]) / (2 * step);
    }
    Mat sym(nb, nb);
    for (int r = 0; r < nb; ++r)
        for (int c = 0; c < nb; ++c) sym(r, c) = 0.5 * (h(r, c) + h(c, r));
    return SymMat::from_full(sym, 1.0);  // FD asymmetry absorbed here
}

enum class Block { theta_s, all };

inline std::vector<int> block_indices(const Network& net, Block which) {
    int total = param_count(net);
    int cut = total;
    if (which == Block::theta_s)
        if (auto* s = std::get_if<ShortcutNet>(&net)) cut = fs_param_count(s->fs);
    std::vector<int> idx(cut);
    for (int i = 0; i < cut; ++i) idx[i] = i;
    return idx;
}

// ---- zero-loss rescaling (only for nets that already classify perfectly) ----

// Shift and scale the output layer so every margin clears the flat
// threshold of the polynomial hinge, making the empirical loss exactly 0.
inline ShortcutNet rescale_to_zero_loss(const ShortcutNet& net, const LossSpec& loss, const Dataset& ds) {
    require(loss.kind == LossKind::poly_hinge, "rescale_to_zero_loss: needs a flat-tailed loss");
    Network n = net;
    require(training_error(n, ds).num == 0, "rescale_to_zero_loss: training error must be 0");

    double cpos = std::numeric_limits<double>::infinity();   // min f over positives
    double cneg = -std::numeric_limits<double>::infinity();  // max f over negatives
    for (int i = 0; i < ds.n(); ++i) {
        double fi = forward(n, ds.x[i]);
        require(ds.y[i] * fi != 0.0, "rescale_to_zero_loss: zero strict margin at sample " + std::to_string(i));
        if (ds.y[i] == 1)
            cpos = std::min(cpos, fi);
        else
            cneg = std::max(cneg, fi);
    }
    if (!std::isfinite(cpos)) cpos = 0;  // single-class datasets: use the sign boundary
    if (!std::isfinite(cneg)) cneg = 0;
    double mid = 0.5 * (cpos + cneg);
    double alpha = 3.0 * loss.z0 / (cpos - cneg);  // > 2 z0 / (c2 - c1)

    ShortcutNet out = net;
    out.fs.a0 = alpha * (net.fs.a0 - mid);
    for (double& aj : out.fs.a) aj *= alpha;
    if (auto* c = std::get_if<ConstantBranch>(&out.fd)) c->value *= alpha;
    if (auto* f = std::get_if<FeedforwardParams>(&out.fd)) {
        Layer& last = f->layers.back();
        for (Vec& row : last.w)
            for (double& v : row) v *= alpha;
        for (double& v : last.b) v *= alpha;
    }
    if (auto* bp = std::get_if<BumpParams>(&out.fd))
        for (double& v : bp->mus) v *= alpha;

    for (int i = 0; i < ds.n(); ++i)
        require(ds.y[i] * forward(Network{out}, ds.x[i]) >= loss.z0,
                "rescale_to_zero_loss: margin check failed");
    return out;
}

// ---- JSON serialization (nlohmann round-trips doubles bit-exactly) ----

inline json to_json(const ActivationSpec& a) {
    json j = {{"kind", act_kind_name(a.kind)}};
    if (a.kind == ActKind::leaky_relu || a.kind == ActKind::elu) j["alpha"] = a.alpha;
    return j;
}
inline ActivationSpec activation_from_json(const json& j) {
    return ActivationSpec{act_kind_from_name(j.at("kind").get<std::string>()), j.value("alpha", 0.0)};
}

inline json to_json(const LossSpec& l) {
    return {{"kind", loss_kind_name(l.kind)}, {"p", l.p}, {"z0", l.z0}};
}
inline LossSpec loss_from_json(const json& j) {
    LossSpec l;
    l.kind = loss_kind_from_name(j.at("kind").get<std::string>());
    l.p = j.value("p", 6);
    l.z0 = j.value("z0", 1.0);
    return l;
}

inline json to_json(const FeedforwardParams& f) {
    json layers = json::array();
    for (const Layer& l : f.layers)
        layers.push_back({{"in", l.in_dim()},
                          {"out", l.out_dim()},
                          {"w", l.w},
                          {"b", l.b},
                          {"activation", to_json(l.activation)}});
    return {{"type", "feedforward"}, {"input_dim", f.input_dim()}, {"output_dim", f.output_dim()},
            {"layers", layers}};
}
inline FeedforwardParams feedforward_from_json(const json& j) {
    FeedforwardParams f;
    for (const json& lj : j.at("layers")) {
        Layer l;
        l.w = lj.at("w").get<std::vector<Vec>>();
        l.b = lj.at("b").get<Vec>();
        l.activation = activation_from_json(lj.at("activation"));
        f.layers.push_back(std::move(l));
    }
    f.validate();
    return f;
}

inline json to_json(const Network& net) {
    json j;
    j["format_version"] = 1;
    if (auto* s = std::get_if<ShortcutNet>(&net)) {
        j["type"] = "shortcut";
        j["fs"] = {{"m", s->fs.width()},  {"d", s->fs.input_dim()},
                   {"a0", s->fs.a0},      {"a", s->fs.a},
                   {"w", s->fs.w},        {"b", s->fs.b},
                   {"bias_active", s->fs.bias_active},
                   {"activation", to_json(s->fs.activation)}};
        if (auto* c = std::get_if<ConstantBranch>(&s->fd))
            j["fd"] = {{"type", "constant"}, {"value", c->value}};
        else if (auto* f = std::get_if<FeedforwardParams>(&s->fd))
            j["fd"] = to_json(*f);
        else {
            const auto& bp = std::get<BumpParams>(s->fd);
            j["fd"] = {{"type", "bump"}, {"anchors", bp.anchors}, {"mus", bp.mus}, {"widths", bp.widths}};
        }
    } else if (auto* f = std::get_if<FeedforwardParams>(&net)) {
        j.update(to_json(*f));
        j["format_version"] = 1;
    } else {
        const auto& is = std::get<IdentityShortcutNet>(net);
        j["type"] = "identity_shortcut";
        j["a"] = is.a;
        j["b"] = is.b;
        j["h"] = to_json(is.h);
    }
    return j;
}

inline Network network_from_json(const json& j) {
    std::string type = j.at("type").get<std::string>();
    if (type == "shortcut") {
        ShortcutNet s;
        const json& fs = j.at("fs");
        s.fs.a0 = fs.at("a0").get<double>();
        s.fs.a = fs.at("a").get<Vec>();
        s.fs.w = fs.at("w").get<std::vector<Vec>>();
        s.fs.b = fs.at("b").get<Vec>();
        s.fs.bias_active = fs.at("bias_active").get<bool>();
        s.fs.activation = activation_from_json(fs.at("activation"));
        const json& fd = j.at("fd");
        std::string ft = fd.at("type").get<std::string>();
        if (ft == "constant")
            s.fd = ConstantBranch{fd.at("value").get<double>()};
        else if (ft == "feedforward")
            s.fd = feedforward_from_json(fd);
        else {
            BumpParams bp;
            bp.anchors = fd.at("anchors").get<std::vector<Vec>>();
            bp.mus = fd.at("mus").get<Vec>();
            bp.widths = fd.at("widths").get<Vec>();
            bp.validate();
            s.fd = std::move(bp);
        }
        return s;
    }
    if (type == "feedforward") return feedforward_from_json(j);
    if (type == "identity_shortcut") {
        IdentityShortcutNet is;
        is.a = j.at("a").get<Vec>();
        is.b = j.at("b").get<double>();
        is.h = feedforward_from_json(j.at("h"));
        return is;
    }
    throw std::invalid_argument("network_from_json: unknown type " + type);
}

}  // namespace losscape
