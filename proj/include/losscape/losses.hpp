#pragma once

// Surrogate losses: polynomial hinge [max(z+1,0)]^{p+1}, quadratic (1+z)^2
// and logistic log2(1+e^z), with exact derivatives and the three-clause
// surrogate-property check.

#include <cmath>
#include <string>

#include "losscape/numerics.hpp"

namespace losscape {

enum class LossKind { poly_hinge, quadratic, logistic };

inline std::string loss_kind_name(LossKind k) {
    switch (k) {
        case LossKind::poly_hinge: return "poly_hinge";
        case LossKind::quadratic: return "quadratic";
        case LossKind::logistic: return "logistic";
    }
    return "?";
}

inline LossKind loss_kind_from_name(const std::string& s) {
    if (s == "poly_hinge") return LossKind::poly_hinge;
    if (s == "quadratic") return LossKind::quadratic;
    if (s == "logistic") return LossKind::logistic;
    throw std::invalid_argument("unknown loss kind: " + s);
}

struct LossSpec {
    LossKind kind = LossKind::poly_hinge;
    int p = 6;        // poly_hinge smoothness order
    double z0 = 1.0;  // flat threshold; poly_hinge instance uses 1

    static LossSpec poly_hinge(int p) {
        require(p >= 1, "poly_hinge requires p >= 1");
        return LossSpec{LossKind::poly_hinge, p, 1.0};
    }
    static LossSpec quadratic() { return LossSpec{LossKind::quadratic, 0, 1.0}; }
    static LossSpec logistic() { return LossSpec{LossKind::logistic, 0, 1.0}; }
};

namespace detail {
// stable sigmoid
inline double sigm(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}
// log(1+e^z) without overflow
inline double softplus_ln(double z) {
    if (z > 0) return z + std::log1p(std::exp(-z));
    return std::log1p(std::exp(z));
}
constexpr double kInvLn2 = 1.4426950408889634074;  // 1/ln 2
}  // namespace detail

inline double loss_eval(const LossSpec& spec, double z) {
    require(std::isfinite(z), "loss_eval: non-finite input");
    switch (spec.kind) {
        case LossKind::poly_hinge: {
            double m = std::max(z + spec.z0, 0.0);
            return std::pow(m, spec.p + 1);
        }
        case LossKind::quadratic: {
            double t = 1.0 + z;
            return t * t;
        }
        case LossKind::logistic:
            return detail::softplus_ln(z) * detail::kInvLn2;
    }
    return 0;
}

inline double loss_deriv(const LossSpec& spec, double z, int order) {
    require(std::isfinite(z), "loss_deriv: non-finite input");
    require(order == 1 || order == 2, "loss_deriv: order must be 1 or 2");
    switch (spec.kind) {
        case LossKind::poly_hinge: {
            require(order <= spec.p, "loss_deriv: order exceeds smoothness p of poly_hinge");
            double m = std::max(z + spec.z0, 0.0);
            if (order == 1) return (spec.p + 1) * std::pow(m, spec.p);
            return double(spec.p + 1) * spec.p * std::pow(m, spec.p - 1);
        }
        case LossKind::quadratic:
            return order == 1 ? 2.0 * (1.0 + z) : 2.0;
        case LossKind::logistic: {
            double s = detail::sigm(z);
            if (order == 1) return s * detail::kInvLn2;
            return s * (1.0 - s) * detail::kInvLn2;
        }
    }
    return 0;
}

// Assumption-1 style report: surrogate bound, monotonicity, and the
// "derivative vanishes exactly on z <= -z0" clause, checked on a grid.
struct Assumption1Report {
    bool surrogate_ok = true;
    bool monotone_ok = true;
    bool flat_iff_ok = true;
    double worst_surrogate_gap = 0;  // most negative value of l(z) - 1{z>=0}
    double worst_monotone = 0;       // most negative l'(z)

    bool all_ok() const { return surrogate_ok && monotone_ok && flat_iff_ok; }
};

inline Assumption1Report check_assumption1(const LossSpec& spec, const Vec& grid) {
    double lo = grid.front(), hi = grid.back();
    for (double z : grid) {
        lo = std::min(lo, z);
        hi = std::max(hi, z);
    }
    require(lo <= -5.0 && hi >= 5.0, "check_assumption1: grid must span [-5,5]");

    Assumption1Report rep;
    const double tol = 1e-12;
    for (double z : grid) {
        double l = loss_eval(spec, z);
        double ind = z >= 0 ? 1.0 : 0.0;
        if (l - ind < -tol) {
            rep.surrogate_ok = false;
            rep.worst_surrogate_gap = std::min(rep.worst_surrogate_gap, l - ind);
        }
        double d1 = loss_deriv(spec, z, 1);
        if (d1 < -tol) {
            rep.monotone_ok = false;
            rep.worst_monotone = std::min(rep.worst_monotone, d1);
        }
        // the derivative vanishes (within 1e-12) on the tail and is strictly
        // positive off it
        if (z <= -spec.z0) {
            if (std::fabs(d1) > tol) rep.flat_iff_ok = false;
        } else {
            if (!(d1 > 0)) rep.flat_iff_ok = false;
        }
    }
    return rep;
}

inline Vec make_grid(double lo, double hi, int points) {
    Vec g(points);
    for (int i = 0; i < points; ++i) g[i] = lo + (hi - lo) * i / (points - 1);
    return g;
}

}  // namespace losscape
