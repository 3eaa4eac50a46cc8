#pragma once

// Closed-form analyses of the quadratic-loss examples: the population
// least-squares classifier for the point-mass-vs-uniform distribution, and
// the conditioned-dataset global minimizers of the squared loss for the
// orthogonal-axes and separable-line datasets. The squared loss of +-1
// labels makes every global minimizer an ordinary least-squares fit, so
// the minimizer and its training error come from normal equations.

#include "losscape/datagen.hpp"
#include "losscape/models.hpp"

namespace losscape {

struct Example1Report {
    double pos_value = 1.25;
    double mean_x = 0, cov_xy = 0, var_x = 0, slope = 0;
    double rate_exact = 0;
    double mc_rate = 0, mc_sigma = 0;
    long long mc_samples = 0;
    bool mc_within_3sigma = true;
};

// Population facts for positives at `pos` (prob 1/2) and negatives uniform
// on [0,1] (prob 1/2); the optimal linear least-squares predictor is
// beta (x - E[X]) and the misclassification rate follows from where the
// threshold E[X] lands.
inline Example1Report example1_closed_form(double pos = 1.25) {
    Example1Report r;
    r.pos_value = pos;
    r.mean_x = 0.5 * pos + 0.25;
    r.cov_xy = 0.5 * pos - 0.25;  // E[XY] - E[X]E[Y], E[Y] = 0
    double ex2 = 0.5 * pos * pos + 0.5 / 3.0;
    r.var_x = ex2 - r.mean_x * r.mean_x;
    r.slope = r.cov_xy / r.var_x;

    double thr = r.mean_x;  // predictor crosses zero at E[X]
    double rate = 0;
    if (r.slope > 0) {
        if (pos < thr) rate += 0.5;                                  // positives misclassified
        rate += 0.5 * std::max(0.0, std::min(1.0, 1.0 - thr));       // negatives with x >= thr
    } else if (r.slope < 0) {
        if (pos >= thr) rate += 0.5;
        rate += 0.5 * std::max(0.0, std::min(1.0, thr));
    } else {
        rate = 0.5;  // constant predictor, sign(0) = +1 misclassifies negatives
    }
    r.rate_exact = rate;
    return r;
}

inline void example1_monte_carlo(Example1Report& r, long long samples, Rng& rng) {
    long long wrong = 0;
    double thr = r.mean_x;
    for (long long i = 0; i < samples; ++i) {
        int y = (rng.next_u64() & 1) ? 1 : -1;
        double x = y == 1 ? r.pos_value : rng.uniform();
        int pred = sign_plus(r.slope * (x - thr));
        if (pred != y) ++wrong;
    }
    r.mc_samples = samples;
    r.mc_rate = double(wrong) / samples;
    r.mc_sigma = std::sqrt(r.rate_exact * (1 - r.rate_exact) / samples);
    r.mc_within_3sigma = std::fabs(r.mc_rate - r.rate_exact) <= 3 * r.mc_sigma;
}

namespace detail {
// least squares of labels on the given features (with intercept); returns
// coefficients [intercept, beta...]
inline Vec ols_fit(const std::vector<Vec>& feats, const std::vector<int>& ys) {
    int n = (int)feats.size(), p = (int)feats[0].size() + 1;
    Mat xtx(p, p);
    Vec xty(p, 0.0);
    for (int i = 0; i < n; ++i) {
        Vec row(p);
        row[0] = 1.0;
        for (int k = 1; k < p; ++k) row[k] = feats[i][k - 1];
        for (int r = 0; r < p; ++r) {
            xty[r] += row[r] * ys[i];
            for (int c = 0; c < p; ++c) xtx(r, c) += row[r] * row[c];
        }
    }
    return solve_linear(xtx, xty);
}
}  // namespace detail

struct QuadlossReport {
    // orthogonal-axes dataset with quadratic features
    double subspace_error = 0;
    Vec subspace_coef;  // [intercept, c1, c2]
    // separable 1-D dataset with a linear model
    double linsep_error = 0;
    Vec linsep_coef;  // [intercept, slope]
};

// Global minimizer of the squared loss over the reachable model class on
// the balanced conditioned datasets, with the resulting training error.
inline QuadlossReport quadloss_examples(int n_per_group = 2, bool flip_labels = false) {
    QuadlossReport rep;
    Rng rng(0, 0);

    {
        NamedDataset nd = gen_named("quadloss_subspace_balanced", 4 * n_per_group, rng);
        std::vector<Vec> feats;
        std::vector<int> ys;
        for (int i = 0; i < nd.ds.n(); ++i) {
            feats.push_back({nd.ds.x[i][0] * nd.ds.x[i][0], nd.ds.x[i][1] * nd.ds.x[i][1]});
            ys.push_back(flip_labels ? -nd.ds.y[i] : nd.ds.y[i]);
        }
        rep.subspace_coef = detail::ols_fit(feats, ys);
        int wrong = 0;
        for (int i = 0; i < nd.ds.n(); ++i) {
            double pred = rep.subspace_coef[0] + rep.subspace_coef[1] * feats[i][0] +
                          rep.subspace_coef[2] * feats[i][1];
            if (sign_plus(pred) != ys[i]) ++wrong;
        }
        rep.subspace_error = double(wrong) / nd.ds.n();
    }
    {
        NamedDataset nd = gen_named("quadloss_linsep_balanced", 4 * n_per_group, rng);
        std::vector<Vec> feats;
        std::vector<int> ys;
        for (int i = 0; i < nd.ds.n(); ++i) {
            feats.push_back({nd.ds.x[i][0]});
            ys.push_back(flip_labels ? -nd.ds.y[i] : nd.ds.y[i]);
        }
        rep.linsep_coef = detail::ols_fit(feats, ys);
        int wrong = 0;
        for (int i = 0; i < nd.ds.n(); ++i) {
            double pred = rep.linsep_coef[0] + rep.linsep_coef[1] * feats[i][0];
            if (sign_plus(pred) != ys[i]) ++wrong;
        }
        rep.linsep_error = double(wrong) / nd.ds.n();
    }
    return rep;
}

}  // namespace losscape
