#pragma once

// Neuron activations and numeric membership tests for the five neuron
// classes (softplus / relu / leaky-relu / sigmoid / quadratic). Membership
// is decided on a symmetric grid; relu-family kinds use right-hand
// derivatives at their kinks.

#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "losscape/losses.hpp"
#include "losscape/numerics.hpp"

namespace losscape {

enum class ActKind {
    softplus,
    relu,
    requ,
    threshold,
    leaky_relu,
    elu,
    sigmoid,
    tanh_act,
    arctan,
    softsign,
    quadratic,
    linear,
    constant
};

struct ActivationSpec {
    ActKind kind = ActKind::softplus;
    double alpha = 0.0;  // leaky_relu: in (0,1); elu: < 0 (paper's convention)

    static ActivationSpec make(ActKind k, double alpha = 0.0) {
        if (k == ActKind::leaky_relu) require(alpha > 0 && alpha < 1, "leaky_relu: alpha in (0,1)");
        if (k == ActKind::elu) require(alpha < 0, "elu: alpha < 0");
        return ActivationSpec{k, alpha};
    }
};

inline std::string act_kind_name(ActKind k) {
    switch (k) {
        case ActKind::softplus: return "softplus";
        case ActKind::relu: return "relu";
        case ActKind::requ: return "requ";
        case ActKind::threshold: return "threshold";
        case ActKind::leaky_relu: return "leaky_relu";
        case ActKind::elu: return "elu";
        case ActKind::sigmoid: return "sigmoid";
        case ActKind::tanh_act: return "tanh";
        case ActKind::arctan: return "arctan";
        case ActKind::softsign: return "softsign";
        case ActKind::quadratic: return "quadratic";
        case ActKind::linear: return "linear";
        case ActKind::constant: return "constant";
    }
    return "?";
}

inline ActKind act_kind_from_name(const std::string& s) {
    for (ActKind k : {ActKind::softplus, ActKind::relu, ActKind::requ, ActKind::threshold,
                      ActKind::leaky_relu, ActKind::elu, ActKind::sigmoid, ActKind::tanh_act,
                      ActKind::arctan, ActKind::softsign, ActKind::quadratic, ActKind::linear,
                      ActKind::constant})
        if (act_kind_name(k) == s) return k;
    throw std::invalid_argument("unknown activation kind: " + s);
}

inline double act_eval(const ActivationSpec& a, double z) {
    require(std::isfinite(z), "act_eval: non-finite input");
    switch (a.kind) {
        case ActKind::softplus: return detail::softplus_ln(z) * detail::kInvLn2;
        case ActKind::relu: return std::max(z, 0.0);
        case ActKind::requ: {
            double m = std::max(z, 0.0);
            return m * m;
        }
        case ActKind::threshold: return z >= 0 ? 1.0 : 0.0;
        case ActKind::leaky_relu: return z >= 0 ? z : a.alpha * z;
        case ActKind::elu: return z >= 0 ? z : a.alpha * (std::exp(z) - 1.0);
        case ActKind::sigmoid: return detail::sigm(z);
        case ActKind::tanh_act: return std::tanh(z);
        case ActKind::arctan: return std::atan(z);
        case ActKind::softsign: return z / (1.0 + std::fabs(z));
        case ActKind::quadratic: return z * z;
        case ActKind::linear: return z;
        case ActKind::constant: return 0.0;
    }
    return 0;
}

// Right-hand derivative at kinks of the relu family.
inline double act_deriv(const ActivationSpec& a, double z, int order) {
    require(std::isfinite(z), "act_deriv: non-finite input");
    require(order == 1 || order == 2, "act_deriv: order must be 1 or 2");
    switch (a.kind) {
        case ActKind::softplus: {
            double s = detail::sigm(z);
            return order == 1 ? s * detail::kInvLn2 : s * (1 - s) * detail::kInvLn2;
        }
        case ActKind::relu: return order == 1 ? (z >= 0 ? 1.0 : 0.0) : 0.0;
        case ActKind::requ:
            return order == 1 ? 2.0 * std::max(z, 0.0) : (z >= 0 ? 2.0 : 0.0);
        case ActKind::threshold:
            if (order == 2 && z == 0) throw std::invalid_argument("threshold: order-2 derivative undefined at 0");
            return 0.0;
        case ActKind::leaky_relu: return order == 1 ? (z >= 0 ? 1.0 : a.alpha) : 0.0;
        case ActKind::elu:
            if (z >= 0) return order == 1 ? 1.0 : 0.0;
            return a.alpha * std::exp(z);
        case ActKind::sigmoid: {
            double s = detail::sigm(z);
            return order == 1 ? s * (1 - s) : s * (1 - s) * (1 - 2 * s);
        }
        case ActKind::tanh_act: {
            double t = std::tanh(z);
            return order == 1 ? 1 - t * t : -2 * t * (1 - t * t);
        }
        case ActKind::arctan: {
            double q = 1 + z * z;
            return order == 1 ? 1 / q : -2 * z / (q * q);
        }
        case ActKind::softsign: {
            double q = 1 + std::fabs(z);
            if (order == 1) return 1 / (q * q);
            double sgn = z > 0 ? 1.0 : (z < 0 ? -1.0 : 1.0);  // right-hand at 0
            return -2 * sgn / (q * q * q);
        }
        case ActKind::quadratic: return order == 1 ? 2 * z : 2.0;
        case ActKind::linear: return order == 1 ? 1.0 : 0.0;
        case ActKind::constant: return 0.0;
    }
    return 0;
}

enum class NeuronClass { softplus_class, relu_class, leaky_relu_class, sigmoid_class, quadratic_class };

inline std::string neuron_class_name(NeuronClass c) {
    switch (c) {
        case NeuronClass::softplus_class: return "softplus_class";
        case NeuronClass::relu_class: return "relu_class";
        case NeuronClass::leaky_relu_class: return "leaky_relu_class";
        case NeuronClass::sigmoid_class: return "sigmoid_class";
        case NeuronClass::quadratic_class: return "quadratic_class";
    }
    return "?";
}

inline Vec symmetric_grid(double half_span = 8.0, int half_points = 512) {
    Vec g;
    g.reserve(2 * half_points + 1);
    for (int i = -half_points; i <= half_points; ++i) g.push_back(half_span * i / half_points);
    return g;
}

// Grid tests of the defining predicates. Smoothness/analyticity itself is
// not checkable numerically; built-in kinds get it from their closed forms,
// so the sign tests below are the deciding ones. The relu-class zero test
// skips z = 0 (threshold jumps there; only the open negative axis matters
// to the class's constructions).
inline std::set<NeuronClass> classify_activation(const ActivationSpec& a, const Vec& grid) {
    double lo = 0, hi = 0;
    for (double z : grid) {
        lo = std::min(lo, z);
        hi = std::max(hi, z);
    }
    require(lo <= -8.0 && hi >= 8.0, "classify_activation: grid must span [-8,8]");

    const double tol = 1e-10;
    bool analytic_like = true;  // closed-form property of built-in kinds
    switch (a.kind) {
        case ActKind::relu:
        case ActKind::requ:
        case ActKind::threshold:
        case ActKind::leaky_relu:
        case ActKind::elu:
        case ActKind::softsign:
            analytic_like = false;
            break;
        default: break;
    }

    bool d1_pos = true, d2_pos = true;
    bool zero_on_neg = true, identity_on_pos = true;
    bool sym_const = true;
    bool d2_bounded_below = true;
    double d2_min = std::numeric_limits<double>::infinity();
    double sym0 = 2 * act_eval(a, 0.0);

    for (double z : grid) {
        double v = act_eval(a, z);
        if (z < 0 && std::fabs(v) > tol) zero_on_neg = false;
        if (z >= 0 && std::fabs(v - z) > tol) identity_on_pos = false;
        if (std::fabs(v + act_eval(a, -z) - sym0) > tol) sym_const = false;
        double d1 = act_deriv(a, z, 1);
        if (d1 <= tol) d1_pos = false;
        double d2;
        try {
            d2 = act_deriv(a, z, 2);
        } catch (const std::invalid_argument&) {
            d2 = 0;  // threshold at 0
        }
        if (d2 <= tol) d2_pos = false;
        d2_min = std::min(d2_min, d2);
    }
    d2_bounded_below = d2_min > tol;
    bool min_at_zero = std::fabs(act_deriv(a, 0.0, 1)) <= tol;

    std::set<NeuronClass> classes;
    if (analytic_like && d1_pos && d2_pos) classes.insert(NeuronClass::softplus_class);
    if (zero_on_neg) classes.insert(NeuronClass::relu_class);
    if (identity_on_pos) classes.insert(NeuronClass::leaky_relu_class);
    if (sym_const) classes.insert(NeuronClass::sigmoid_class);
    if (analytic_like && d2_bounded_below && min_at_zero) classes.insert(NeuronClass::quadratic_class);
    return classes;
}

inline std::set<NeuronClass> classify_activation(const ActivationSpec& a) {
    return classify_activation(a, symmetric_grid());
}

}  // namespace losscape
