#pragma once

// Dataset conditions for quadratic neurons: decide whether
// M(lambda) = sum_i lambda_i y_i x_i x_i^T is indefinite for every
// admissible lambda (nonnegative, equal class sums), or exhibit a
// semidefinite witness. YES answers carry a quadratic separation
// certificate (A, c2, c1); NO answers carry the dual weights.
//
// The two sides are exact duals: a psd witness exists iff no psd-cone
// separation puts the negatives above the positives, and symmetrically.
// The searches below exploit that lambda_min(M(lambda)) is concave in
// lambda and lambda_max convex, so projected super/subgradient steps on
// the product of class simplices find witnesses reliably; every verdict
// is re-verified before being emitted.

#include <optional>

#include "losscape/datagen.hpp"
#include "losscape/numerics.hpp"

namespace losscape {

// Upper-triangular flattening of x x^T with off-diagonal entries scaled by
// sqrt(2), appended with a constant -1 slot: the flat inner product against
// (vech(A), c2) equals x^T A x - c2 for symmetric A.
struct Lifted {
    Vec phi;  // d(d+1)/2 quadratic monomials plus the trailing -1
    int label = 0;
};

inline Vec lift_point(const Vec& x) {
    int d = (int)x.size();
    Vec phi;
    phi.reserve(d * (d + 1) / 2 + 1);
    const double r2 = std::sqrt(2.0);
    for (int i = 0; i < d; ++i) {
        phi.push_back(x[i] * x[i]);
        for (int j = i + 1; j < d; ++j) phi.push_back(r2 * x[i] * x[j]);
    }
    phi.push_back(-1.0);
    return phi;
}

inline Vec lift_matrix(const Mat& a, double c2) {
    Vec v;
    v.reserve(a.rows * (a.rows + 1) / 2 + 1);
    const double r2 = std::sqrt(2.0);
    for (int i = 0; i < a.rows; ++i) {
        v.push_back(a(i, i));
        for (int j = i + 1; j < a.cols; ++j) v.push_back(r2 * a(i, j));
    }
    v.push_back(c2);
    return v;
}

inline Lifted lift(const Vec& x, int label) { return Lifted{lift_point(x), label}; }

struct SeparationCertificate {
    Mat a;        // symmetric d x d
    double c2 = 0;
    double c1 = 0;  // achieved margin, > 0

    double quad(const Vec& x) const {
        double s = 0;
        for (int i = 0; i < a.rows; ++i)
            for (int j = 0; j < a.cols; ++j) s += x[i] * a(i, j) * x[j];
        return s;
    }
};

struct DualCertificate {
    Vec lambda;                 // per-sample, >= 0, equal class sums
    std::string definiteness;   // "psd" or "nsd"
    double min_abs_eig_margin = 0;  // smallest |eigenvalue| of M(lambda)
    bool semidefinite_boundary = false;  // witness has a (near-)zero eigenvalue
};

enum class ConditionAnswer { yes, no, undecided };
enum class NecessaryAnswer { holds, fails, undecided };

struct ConditionVerdict {
    ConditionAnswer answer = ConditionAnswer::undecided;
    std::optional<SeparationCertificate> separation;
    std::optional<DualCertificate> dual;
};

struct NecessaryVerdict {
    NecessaryAnswer answer = NecessaryAnswer::undecided;
    std::optional<SeparationCertificate> separation;
    std::optional<DualCertificate> dual;
};

namespace detail {

inline SymMat weighted_gram(const Dataset& ds, const Vec& lambda) {
    int d = ds.dim();
    SymMat m(d);
    for (int i = 0; i < ds.n(); ++i) {
        double w = lambda[i] * ds.y[i];
        if (w == 0) continue;
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) m(r, c) += w * ds.x[i][r] * ds.x[i][c];
    }
    return m;
}

inline double data_scale(const Dataset& ds) {
    double s = 0;
    for (const Vec& x : ds.x) s = std::max(s, dot(x, x));
    return s > 0 ? s : 1.0;
}

// project each class's weights onto its simplex (nonnegative, sum 1)
inline void project_class_simplex(Vec& lambda, const Dataset& ds) {
    for (int cls : {+1, -1}) {
        std::vector<int> idx;
        for (int i = 0; i < ds.n(); ++i)
            if (ds.y[i] == cls) idx.push_back(i);
        Vec v;
        for (int i : idx) v.push_back(lambda[i]);
        // Euclidean projection onto the probability simplex
        Vec u = v;
        std::sort(u.begin(), u.end(), std::greater<double>());
        double css = 0, theta = 0;
        int rho = 0;
        for (size_t j = 0; j < u.size(); ++j) {
            css += u[j];
            if (u[j] - (css - 1.0) / double(j + 1) > 0) {
                rho = (int)j + 1;
                theta = (css - 1.0) / double(j + 1);
            } else {
                css -= u[j];
            }
        }
        if (rho == 0) {  // all mass clipped; fall back to uniform
            for (int i : idx) lambda[i] = 1.0 / idx.size();
            continue;
        }
        for (size_t j = 0; j < idx.size(); ++j) lambda[idx[j]] = std::max(v[j] - theta, 0.0);
    }
}

// projection onto { sum_i lambda_i y_i x_i = 0 }
inline void project_mean_zero(Vec& lambda, const Dataset& ds) {
    int d = ds.dim(), n = ds.n();
    Mat g(d, d);
    Vec rhs(d, 0.0);
    for (int i = 0; i < n; ++i)
        for (int r = 0; r < d; ++r) {
            rhs[r] += ds.y[i] * ds.x[i][r] * lambda[i];
            for (int c = 0; c < d; ++c) g(r, c) += ds.x[i][r] * ds.x[i][c];
        }
    // pseudo-solve through the eigensystem; zero directions are skipped
    auto eig = sym_eig(SymMat::from_full(g, 1.0));
    double scale = std::fabs(eig.values.back());
    Vec coef(d, 0.0);
    for (int k = 0; k < d; ++k) {
        if (eig.values[k] <= 1e-12 * (1 + scale)) continue;
        double proj = 0;
        for (int r = 0; r < d; ++r) proj += eig.vectors(r, k) * rhs[r];
        proj /= eig.values[k];
        for (int r = 0; r < d; ++r) coef[r] += proj * eig.vectors(r, k);
    }
    for (int i = 0; i < n; ++i) {
        double adj = 0;
        for (int r = 0; r < d; ++r) adj += coef[r] * ds.y[i] * ds.x[i][r];
        lambda[i] -= adj;
    }
}

inline void project_admissible(Vec& lambda, const Dataset& ds, bool mean_zero, int rounds) {
    for (int t = 0; t < rounds; ++t) {
        project_class_simplex(lambda, ds);
        if (!mean_zero) return;
        project_mean_zero(lambda, ds);
    }
    project_class_simplex(lambda, ds);
}

struct WitnessSearch {
    Vec lambda;
    double value = 0;  // lambda_min(M) for psd search, -lambda_max for nsd
};

// Projected supergradient ascent on lambda_min(M(lambda)) (concave), or on
// -lambda_max (for the nsd orientation).
inline WitnessSearch search_semidefinite_witness(const Dataset& ds, bool want_psd, bool mean_zero,
                                                 int iters, Rng& rng) {
    int n = ds.n();
    double scale = data_scale(ds);
    WitnessSearch best;
    best.value = -std::numeric_limits<double>::infinity();

    for (int start = 0; start < 4; ++start) {
        Vec lambda(n, 0.0);
        if (start == 0) {
            lambda.assign(n, 1.0);
        } else {
            for (double& v : lambda) v = rng.uniform();
        }
        project_admissible(lambda, ds, mean_zero, 50);

        Vec cur = lambda;
        double cur_val = -std::numeric_limits<double>::infinity();
        for (int t = 0; t < iters; ++t) {
            auto eig = sym_eig(weighted_gram(ds, cur));
            double val = want_psd ? eig.values.front() : -eig.values.back();
            if (val > cur_val) cur_val = val;
            if (val > best.value) {
                best.value = val;
                best.lambda = cur;
            }
            int col = want_psd ? 0 : (int)eig.values.size() - 1;
            Vec v(ds.dim());
            for (int r = 0; r < ds.dim(); ++r) v[r] = eig.vectors(r, col);
            double sgn = want_psd ? 1.0 : -1.0;
            double eta = 0.5 / (scale * std::sqrt(double(t + 1)));
            for (int i = 0; i < n; ++i) {
                double q = dot(v, ds.x[i]);
                cur[i] += sgn * eta * ds.y[i] * q * q;
            }
            project_admissible(cur, ds, mean_zero, mean_zero ? 8 : 1);
        }
    }
    project_admissible(best.lambda, ds, mean_zero, 200);
    return best;
}

// One-sided psd separation: find C >= 0 and an offset c with the "high"
// class strictly above the other in x^T C x. Search maximizes the gap
// min_high x^T C x - max_low x^T C x over the trace-1 psd simplex, the
// exact dual of the witness search; the gap is concave in C.
struct OneSided {
    bool found = false;
    Mat c;      // psd d x d
    double offset = 0;
};

inline OneSided search_one_sided(const Dataset& ds, bool positives_high, int iters, Rng& rng) {
    int d = ds.dim(), n = ds.n();
    double scale = data_scale(ds);
    std::vector<int> high, low;
    for (int i = 0; i < n; ++i)
        ((ds.y[i] == (positives_high ? 1 : -1)) ? high : low).push_back(i);

    auto quad = [&](const Mat& m, const Vec& x) {
        double q = 0;
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) q += x[r] * m(r, c) * x[c];
        return q;
    };
    auto gap = [&](const Mat& m, int* arg_high, int* arg_low) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (int i : high) {
            double q = quad(m, ds.x[i]);
            if (q < lo) {
                lo = q;
                if (arg_high) *arg_high = i;
            }
        }
        for (int i : low) {
            double q = quad(m, ds.x[i]);
            if (q > hi) {
                hi = q;
                if (arg_low) *arg_low = i;
            }
        }
        return lo - hi;
    };
    // symmetrize, clip eigenvalues to >= 0 and renormalize trace to 1
    auto project_psd_trace1 = [&](Mat& m) {
        Mat s(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) s(r, c) = 0.5 * (m(r, c) + m(c, r));
        auto eig = sym_eig(SymMat::from_full(s, 1.0));
        Vec vals(d);
        double tr = 0;
        for (int k = 0; k < d; ++k) {
            vals[k] = std::max(eig.values[k], 0.0);
            tr += vals[k];
        }
        if (tr <= 1e-300) {
            vals.assign(d, 1.0 / d);
            tr = 1.0;
        }
        Mat out(d, d);
        for (int k = 0; k < d; ++k) {
            double v = vals[k] / tr;
            if (v == 0) continue;
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) out(r, c) += v * eig.vectors(r, k) * eig.vectors(c, k);
        }
        m = out;
    };

    OneSided res;
    double best = -std::numeric_limits<double>::infinity();
    Mat best_m;
    for (int start = 0; start < 3; ++start) {
        Mat m(d, d);
        if (start == 0)
            for (int k = 0; k < d; ++k) m(k, k) = 1.0 / d;
        else
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) m(r, c) = rng.normal();
        project_psd_trace1(m);
        for (int t = 0; t < iters; ++t) {
            int ih = -1, il = -1;
            double g = gap(m, &ih, &il);
            if (g > best) {
                best = g;
                best_m = m;
                if (best > 1e-7 * (1 + scale)) break;
            }
            double eta = 1.0 / (scale * std::sqrt(double(t + 1)));
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c)
                    m(r, c) += eta * (ds.x[ih][r] * ds.x[ih][c] - ds.x[il][r] * ds.x[il][c]);
            project_psd_trace1(m);
        }
        if (best > 1e-7 * (1 + scale)) break;
    }
    if (best <= 1e-9 * (1 + scale)) return res;

    // rescale to unit margins around the midpoint offset
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i : high) lo = std::min(lo, quad(best_m, ds.x[i]));
    for (int i : low) hi = std::max(hi, quad(best_m, ds.x[i]));
    double mid = 0.5 * (lo + hi);
    double alpha = 2.0 / (lo - hi);
    res.found = true;
    res.c = Mat(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) res.c(r, c) = alpha * best_m(r, c);
    res.offset = alpha * mid;
    return res;
}

inline std::optional<DualCertificate> verify_dual(const Dataset& ds, Vec lambda, bool mean_zero,
                                                  double def_tol = 1e-8) {
    project_class_simplex(lambda, ds);
    double scale = data_scale(ds);
    if (mean_zero) {
        Vec m(ds.dim(), 0.0);
        for (int i = 0; i < ds.n(); ++i)
            for (int r = 0; r < ds.dim(); ++r) m[r] += lambda[i] * ds.y[i] * ds.x[i][r];
        if (norm2(m) > 1e-8 * (1 + std::sqrt(scale))) return std::nullopt;
    }
    auto eig = sym_eig(weighted_gram(ds, lambda));
    double lmin = eig.values.front(), lmax = eig.values.back();
    double tol = def_tol * (1 + scale);
    DualCertificate cert;
    cert.lambda = std::move(lambda);
    if (lmin >= -tol)
        cert.definiteness = "psd";
    else if (lmax <= tol)
        cert.definiteness = "nsd";
    else
        return std::nullopt;
    double abs_min = std::numeric_limits<double>::infinity();
    for (double v : eig.values) abs_min = std::min(abs_min, std::fabs(v));
    cert.min_abs_eig_margin = abs_min;
    cert.semidefinite_boundary = abs_min <= tol;
    return cert;
}

}  // namespace detail

struct ConditionOpts {
    int witness_iters = 800;     // per orientation, per start
    int separation_iters = 40000;  // per side
    uint64_t seed = 7;
};

// Full condition (iff form): YES iff M(lambda) is indefinite for every
// admissible lambda, witnessed by a pair of one-sided psd separations
// combined into (A, c2, c1); NO carries a verified semidefinite witness.
inline ConditionVerdict check_quadratic_condition(const Dataset& ds, const ConditionOpts& opts = {}) {
    require(ds.n() >= 1, "check_quadratic_condition: empty dataset");
    require(ds.n_pos() > 0 && ds.n_neg() > 0, "check_quadratic_condition: both labels required");

    ConditionVerdict out;
    Rng rng(opts.seed, 0);

    // try to exhibit a semidefinite witness in either orientation
    for (bool want_psd : {true, false}) {
        auto ws = detail::search_semidefinite_witness(ds, want_psd, false, opts.witness_iters, rng);
        auto cert = detail::verify_dual(ds, ws.lambda, false);
        if (cert && ((want_psd && cert->definiteness == "psd") || (!want_psd && cert->definiteness == "nsd"))) {
            out.answer = ConditionAnswer::no;
            out.dual = std::move(*cert);
            return out;
        }
    }

    // no witness: attempt the two one-sided separations that certify YES
    auto hi = detail::search_one_sided(ds, true, opts.separation_iters, rng);
    auto lo = detail::search_one_sided(ds, false, opts.separation_iters, rng);
    if (hi.found && lo.found) {
        int d = ds.dim();
        SeparationCertificate sep;
        sep.a = Mat(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) sep.a(r, c) = hi.c(r, c) - lo.c(r, c);
        double pos_min = std::numeric_limits<double>::infinity();
        double neg_max = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < ds.n(); ++i) {
            double q = sep.quad(ds.x[i]);
            if (ds.y[i] == 1)
                pos_min = std::min(pos_min, q);
            else
                neg_max = std::max(neg_max, q);
        }
        sep.c2 = 0.5 * (pos_min + neg_max);
        sep.c1 = std::numeric_limits<double>::infinity();
        for (int i = 0; i < ds.n(); ++i)
            sep.c1 = std::min(sep.c1, ds.y[i] * (sep.quad(ds.x[i]) - sep.c2));
        if (sep.c1 > 0) {
            out.answer = ConditionAnswer::yes;
            out.separation = std::move(sep);
            return out;
        }
    }
    return out;  // undecided
}

// Mean-constrained variant (necessary condition): the witness search additionally
// constrains sum_i lambda_i y_i x_i = 0. A prop-11 YES already implies the
// condition holds (the lambda set only shrinks).
inline NecessaryVerdict check_necessary_condition(const Dataset& ds, const ConditionOpts& opts = {}) {
    require(ds.n_pos() > 0 && ds.n_neg() > 0, "check_necessary_condition: both labels required");

    NecessaryVerdict out;
    Rng rng(opts.seed, 1);
    for (bool want_psd : {true, false}) {
        auto ws = detail::search_semidefinite_witness(ds, want_psd, true, opts.witness_iters, rng);
        auto cert = detail::verify_dual(ds, ws.lambda, true);
        if (cert && ((want_psd && cert->definiteness == "psd") || (!want_psd && cert->definiteness == "nsd"))) {
            out.answer = NecessaryAnswer::fails;
            out.dual = std::move(*cert);
            return out;
        }
    }
    ConditionVerdict relaxed = check_quadratic_condition(ds, opts);
    if (relaxed.answer == ConditionAnswer::yes) {
        out.answer = NecessaryAnswer::holds;
        out.separation = relaxed.separation;
    }
    return out;
}

// ---- brute-force oracle: simplex-grid enumeration of lambda ----

enum class OracleMode { prop10, prop11 };

struct OracleResult {
    bool definite_found = false;
    Vec lambda;                 // witness when found
    std::string definiteness;   // "psd" / "nsd"
    double witness_margin = 0;      // min |eig| of the witness
    double indefiniteness_margin = 0;  // min over grid of min(max_eig, -min_eig)
    long long grid_points = 0;
};

inline OracleResult brute_force_lambda_oracle(const Dataset& ds, int resolution, OracleMode mode) {
    require(ds.n() <= 8, "brute_force_lambda_oracle: instance too large (n <= 8)");
    require(resolution >= 1 && resolution <= 40, "brute_force_lambda_oracle: resolution <= 40");
    require(ds.n_pos() > 0 && ds.n_neg() > 0, "brute_force_lambda_oracle: both labels required");

    std::vector<int> pos, neg;
    for (int i = 0; i < ds.n(); ++i) (ds.y[i] == 1 ? pos : neg).push_back(i);

    auto compositions = [&](int parts) {
        std::vector<std::vector<int>> out;
        std::vector<int> cur(parts, 0);
        std::function<void(int, int)> rec = [&](int k, int rem) {
            if (k == parts - 1) {
                cur[k] = rem;
                out.push_back(cur);
                return;
            }
            for (int v = 0; v <= rem; ++v) {
                cur[k] = v;
                rec(k + 1, rem - v);
            }
        };
        rec(0, resolution);
        return out;
    };
    auto cp = compositions((int)pos.size());
    auto cn = compositions((int)neg.size());
    require((long long)cp.size() * (long long)cn.size() <= 50000000LL,
            "brute_force_lambda_oracle: grid too large");

    double scale = detail::data_scale(ds);
    double def_tol = 1e-9 * (1 + scale);
    double mean_slack = std::sqrt(scale) * double(ds.n()) / resolution + 1e-12;

    OracleResult res;
    res.indefiniteness_margin = std::numeric_limits<double>::infinity();
    Vec lambda(ds.n(), 0.0);
    for (const auto& wp : cp) {
        for (const auto& wn : cn) {
            for (size_t k = 0; k < pos.size(); ++k) lambda[pos[k]] = double(wp[k]) / resolution;
            for (size_t k = 0; k < neg.size(); ++k) lambda[neg[k]] = double(wn[k]) / resolution;
            if (mode == OracleMode::prop10) {
                Vec m(ds.dim(), 0.0);
                for (int i = 0; i < ds.n(); ++i)
                    for (int r = 0; r < ds.dim(); ++r) m[r] += lambda[i] * ds.y[i] * ds.x[i][r];
                if (norm2(m) > mean_slack) continue;
            }
            ++res.grid_points;
            auto eig = sym_eig(detail::weighted_gram(ds, lambda));
            double lmin = eig.values.front(), lmax = eig.values.back();
            if (lmin >= -def_tol || lmax <= def_tol) {
                res.definite_found = true;
                res.lambda = lambda;
                res.definiteness = lmin >= -def_tol ? "psd" : "nsd";
                double abs_min = std::numeric_limits<double>::infinity();
                for (double v : eig.values) abs_min = std::min(abs_min, std::fabs(v));
                res.witness_margin = abs_min;
                return res;
            }
            res.indefiniteness_margin =
                std::min(res.indefiniteness_margin, std::min(lmax, -lmin));
        }
    }
    return res;
}

inline json to_json(const SeparationCertificate& s) {
    std::vector<Vec> rows(s.a.rows, Vec(s.a.cols));
    for (int r = 0; r < s.a.rows; ++r)
        for (int c = 0; c < s.a.cols; ++c) rows[r][c] = s.a(r, c);
    return {{"A", rows}, {"c2", s.c2}, {"c1", s.c1}};
}

inline json to_json(const DualCertificate& d) {
    return {{"lambda", d.lambda},
            {"definiteness", d.definiteness},
            {"min_abs_eig_margin", d.min_abs_eig_margin},
            {"semidefinite_boundary", d.semidefinite_boundary}};
}

inline json to_json(const ConditionVerdict& v) {
    json j = {{"format_version", 1}};
    j["answer"] = v.answer == ConditionAnswer::yes ? "YES"
                : v.answer == ConditionAnswer::no  ? "NO"
                                                   : "UNDECIDED";
    if (v.separation) j["separation"] = to_json(*v.separation);
    if (v.dual) j["dual"] = to_json(*v.dual);
    return j;
}

inline json to_json(const NecessaryVerdict& v) {
    json j = {{"format_version", 1}};
    j["answer"] = v.answer == NecessaryAnswer::holds ? "HOLDS"
                : v.answer == NecessaryAnswer::fails ? "FAILS"
                                                     : "UNDECIDED";
    if (v.separation) j["separation"] = to_json(*v.separation);
    if (v.dual) j["dual"] = to_json(*v.dual);
    return j;
}

}  // namespace losscape
