#pragma once

// Dataset container plus samplers: subspace data (orthogonal class
// supports), linearly separable data with a witness, and the named
// fixed distributions used by the counterexample constructions.

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "losscape/numerics.hpp"

namespace losscape {

using json = nlohmann::json;

struct Dataset {
    std::vector<Vec> x;
    std::vector<int> y;  // -1 or +1
    std::string generator = "manual";
    uint64_t seed = 0;
    json spec;  // generator parameters, for provenance

    int n() const { return (int)x.size(); }
    int dim() const { return x.empty() ? 0 : (int)x[0].size(); }
    int n_pos() const { return (int)std::count(y.begin(), y.end(), +1); }
    int n_neg() const { return (int)std::count(y.begin(), y.end(), -1); }

    void push(Vec xi, int yi) {
        require(yi == 1 || yi == -1, "Dataset: label must be +-1");
        require(all_finite(xi), "Dataset: non-finite point");
        x.push_back(std::move(xi));
        y.push_back(yi);
    }
};

struct SubspaceSpec {
    int d = 0;
    std::vector<Vec> basis;      // orthonormal columns e_1..e_d
    std::vector<int> plus_idx;   // indices into basis
    std::vector<int> minus_idx;

    static SubspaceSpec identity(int d, std::vector<int> plus, std::vector<int> minus) {
        SubspaceSpec s;
        s.d = d;
        s.basis.resize(d, Vec(d, 0.0));
        for (int i = 0; i < d; ++i) s.basis[i][i] = 1.0;
        s.plus_idx = std::move(plus);
        s.minus_idx = std::move(minus);
        s.validate();
        return s;
    }

    int r() const {
        std::vector<int> u = plus_idx;
        u.insert(u.end(), minus_idx.begin(), minus_idx.end());
        std::sort(u.begin(), u.end());
        u.erase(std::unique(u.begin(), u.end()), u.end());
        return (int)u.size();
    }
    int r_plus() const { return (int)plus_idx.size(); }
    int r_minus() const { return (int)minus_idx.size(); }

    void validate() const {
        require((int)basis.size() == d, "SubspaceSpec: basis size");
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
                double g = dot(basis[i], basis[j]);
                require(std::fabs(g - (i == j ? 1.0 : 0.0)) <= 1e-10, "SubspaceSpec: basis not orthonormal");
            }
        for (int k : plus_idx) require(k >= 0 && k < d, "SubspaceSpec: plus index range");
        for (int k : minus_idx) require(k >= 0 && k < d, "SubspaceSpec: minus index range");
    }

    bool assumption3_holds() const { return r() > std::max(r_plus(), r_minus()); }
};

namespace detail {
// Coefficient law of the subspace sampler: uniform on [-2,-1] u [1,2],
// bounded away from 0 so rank events are numerically robust.
inline double pm_interval(Rng& rng) {
    double m = rng.uniform(1.0, 2.0);
    return (rng.next_u64() & 1) ? m : -m;
}

// rank of a small matrix via Gram eigenvalues
inline int numeric_rank(const std::vector<Vec>& rows, double tol = 1e-8) {
    if (rows.empty()) return 0;
    int k = (int)rows.size();
    Mat g(k, k);
    double scale = 0;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            g(i, j) = dot(rows[i], rows[j]);
            scale = std::max(scale, std::fabs(g(i, j)));
        }
    auto eig = sym_eig(SymMat::from_full(g));
    int r = 0;
    for (double v : eig.values)
        if (v > tol * (1 + scale)) ++r;
    return r;
}
}  // namespace detail

inline Dataset gen_subspace(const SubspaceSpec& spec, int n, Rng& rng) {
    spec.validate();
    require(n >= 1, "gen_subspace: n must be >= 1");
    require(spec.assumption3_holds(), "gen_subspace: requires r > max(r+, r-)");

    Dataset ds;
    ds.generator = "subspace";
    ds.seed = rng.seed();
    ds.spec = {{"d", spec.d}, {"plus", spec.plus_idx}, {"minus", spec.minus_idx}, {"n", n}};

    for (int attempt = 0; attempt < 64; ++attempt) {
        ds.x.clear();
        ds.y.clear();
        std::vector<Vec> coef_plus, coef_minus;
        for (int i = 0; i < n; ++i) {
            int yi = (rng.next_u64() & 1) ? 1 : -1;
            const auto& idx = yi == 1 ? spec.plus_idx : spec.minus_idx;
            Vec c(idx.size());
            Vec xi(spec.d, 0.0);
            for (size_t k = 0; k < idx.size(); ++k) {
                c[k] = detail::pm_interval(rng);
                for (int t = 0; t < spec.d; ++t) xi[t] += c[k] * spec.basis[idx[k]][t];
            }
            (yi == 1 ? coef_plus : coef_minus).push_back(c);
            ds.push(std::move(xi), yi);
        }
        // full-rank check: every r+ subset of positive coefficient rows (r-
        // for negatives). Exhaustive only while cheap; otherwise the whole
        // stack plus random subsets.
        auto subsets_ok = [&](const std::vector<Vec>& rows, int r) {
            if (r == 0 || (int)rows.size() < r) return true;
            int m = (int)rows.size();
            long long count = 1;
            for (int i = 0; i < r; ++i) count = count * (m - i) / (i + 1);
            if (count <= 5000) {
                std::vector<int> pick(r);
                std::function<bool(int, int)> rec = [&](int start, int k) {
                    if (k == r) {
                        std::vector<Vec> sub;
                        for (int p : pick) sub.push_back(rows[p]);
                        return detail::numeric_rank(sub) == r;
                    }
                    for (int i = start; i < m; ++i) {
                        pick[k] = i;
                        if (!rec(i + 1, k + 1)) return false;
                    }
                    return true;
                };
                return rec(0, 0);
            }
            for (int t = 0; t < 200; ++t) {
                std::vector<Vec> sub;
                std::vector<int> chosen;
                while ((int)chosen.size() < r) {
                    int i = rng.uniform_int(0, m - 1);
                    if (std::find(chosen.begin(), chosen.end(), i) == chosen.end()) chosen.push_back(i);
                }
                for (int p : chosen) sub.push_back(rows[p]);
                if (detail::numeric_rank(sub) != r) return false;
            }
            return true;
        };
        if (subsets_ok(coef_plus, spec.r_plus()) && subsets_ok(coef_minus, spec.r_minus())) return ds;
    }
    throw std::runtime_error("gen_subspace: rank condition kept failing");
}

struct SeparableData {
    Dataset ds;
    Vec witness;  // unit vector with y_i w^T x_i >= margin for all i
};

inline SeparableData gen_separable(int d, int n, double margin, Rng& rng) {
    require(d >= 1 && n >= 1, "gen_separable: bad shape");
    require(margin > 0, "gen_separable: margin must be positive");

    Vec w(d);
    for (double& v : w) v = rng.normal();
    double nw = norm2(w);
    for (double& v : w) v /= nw;

    SeparableData out;
    out.witness = w;
    out.ds.generator = "separable";
    out.ds.seed = rng.seed();
    out.ds.spec = {{"d", d}, {"n", n}, {"margin", margin}};
    for (int i = 0; i < n; ++i) {
        int yi = (rng.next_u64() & 1) ? 1 : -1;
        Vec z(d);
        for (double& v : z) v = rng.normal();
        double proj = dot(w, z);
        double t = margin + rng.uniform();
        Vec xi = z;
        for (int k = 0; k < d; ++k) xi[k] += (yi * t - proj) * w[k];
        out.ds.push(std::move(xi), yi);
    }
    for (int i = 0; i < n; ++i)
        require(out.ds.y[i] * dot(w, out.ds.x[i]) >= margin - 1e-9, "gen_separable: witness check failed");
    return out;
}

// Population facts attached to some named datasets (closed-form moments).
struct NamedDataset {
    Dataset ds;
    std::map<std::string, double> population;
};

namespace detail {
inline void emit_counts(Dataset& ds, const std::vector<std::pair<Vec, int>>& points,
                        const std::vector<int>& counts) {
    for (size_t g = 0; g < points.size(); ++g)
        for (int c = 0; c < counts[g]; ++c) ds.push(points[g].first, points[g].second);
}
}  // namespace detail

// Named distributions from the counterexample constructions. "_balanced"
// variants return the exact conditioned datasets the proofs analyze.
inline NamedDataset gen_named(const std::string& name, int n, Rng& rng) {
    require(n >= 1, "gen_named: n must be >= 1");
    NamedDataset out;
    Dataset& ds = out.ds;
    ds.generator = name;
    ds.seed = rng.seed();
    ds.spec = {{"name", name}, {"n", n}};

    auto iid_from = [&](const std::vector<std::pair<Vec, int>>& support) {
        for (int i = 0; i < n; ++i) {
            int g = rng.uniform_int(0, (int)support.size() - 1);
            ds.push(support[g].first, support[g].second);
        }
    };

    if (name == "xor4" || name == "xor4_balanced") {
        std::vector<std::pair<Vec, int>> pts = {
            {{1, 0}, 1}, {{-1, 0}, 1}, {{0, 1}, -1}, {{0, -1}, -1}};
        if (name == "xor4") {
            iid_from(pts);
        } else {
            require(n % 4 == 0, "xor4_balanced: n must be divisible by 4");
            detail::emit_counts(ds, pts, {n / 4, n / 4, n / 4, n / 4});
        }
    } else if (name == "cross" || name == "cross_balanced") {
        // positives on the first axis, negatives on the second, trailing
        // constant-1 coordinate; coefficients in [-2,-1] u [1,2]
        bool balanced = name == "cross_balanced";
        if (balanced) require(n % 4 == 0, "cross_balanced: n must be divisible by 4");
        for (int i = 0; i < n; ++i) {
            int yi, side;
            if (balanced) {
                yi = i % 2 == 0 ? 1 : -1;
                side = (i / 2) % 2;
            } else {
                yi = (rng.next_u64() & 1) ? 1 : -1;
                side = int(rng.next_u64() & 1);
            }
            double m = rng.uniform(1.0, 2.0);
            double c = side ? m : -m;
            Vec xi = yi == 1 ? Vec{c, 0, 1} : Vec{0, c, 1};
            ds.push(std::move(xi), yi);
        }
    } else if (name == "example1") {
        // positives at 5/4, negatives uniform on [0,1]
        for (int i = 0; i < n; ++i) {
            int yi = (rng.next_u64() & 1) ? 1 : -1;
            ds.push({yi == 1 ? 1.25 : rng.uniform()}, yi);
        }
        out.population = {{"mean_x", 7.0 / 8.0}, {"cov_xy", 3.0 / 8.0}, {"misclassification_rate", 1.0 / 16.0}};
    } else if (name == "collinear" || name == "collinear_balanced") {
        std::vector<std::pair<Vec, int>> pts = {{{1, 0}, 1}, {{-1, 0}, 1}, {{0, 0}, -1}};
        if (name == "collinear") {
            for (int i = 0; i < n; ++i) {
                int yi = (rng.next_u64() & 1) ? 1 : -1;
                if (yi == 1)
                    ds.push((rng.next_u64() & 1) ? Vec{1, 0} : Vec{-1, 0}, 1);
                else
                    ds.push({0, 0}, -1);
            }
        } else {
            require(n % 4 == 0, "collinear_balanced: n must be divisible by 4");
            detail::emit_counts(ds, pts, {n / 4, n / 4, n / 2});
        }
    } else if (name == "line_nonsep" || name == "line_nonsep_balanced") {
        std::vector<std::pair<Vec, int>> pts = {{{2}, 1}, {{-1}, 1}, {{0.5}, -1}};
        if (name == "line_nonsep") {
            for (int i = 0; i < n; ++i) {
                int yi = (rng.next_u64() & 1) ? 1 : -1;
                if (yi == 1)
                    ds.push((rng.next_u64() & 1) ? Vec{2} : Vec{-1}, 1);
                else
                    ds.push({0.5}, -1);
            }
        } else {
            require(n % 4 == 0, "line_nonsep_balanced: n must be divisible by 4");
            detail::emit_counts(ds, pts, {n / 4, n / 4, n / 2});
        }
    } else if (name == "quadloss_subspace" || name == "quadloss_subspace_balanced") {
        const double alpha = 0.5;
        std::vector<std::pair<Vec, int>> pts = {
            {{alpha, 0}, 1}, {{1, 0}, 1}, {{0, alpha}, -1}, {{0, 1}, -1}};
        if (name == "quadloss_subspace") {
            iid_from(pts);
        } else {
            require(n % 4 == 0, "quadloss_subspace_balanced: n must be divisible by 4");
            detail::emit_counts(ds, pts, {n / 4, n / 4, n / 4, n / 4});
        }
        out.population = {{"alpha", alpha}};
    } else if (name == "quadloss_linsep" || name == "quadloss_linsep_balanced") {
        const double alpha = 1.0 / 6.0;
        std::vector<std::pair<Vec, int>> pts = {
            {{1 + alpha}, 1}, {{1 + 2 * alpha}, 1}, {{0.0}, -1}, {{1.0}, -1}};
        if (name == "quadloss_linsep") {
            iid_from(pts);
        } else {
            require(n % 4 == 0, "quadloss_linsep_balanced: n must be divisible by 4");
            detail::emit_counts(ds, pts, {n / 4, n / 4, n / 4, n / 4});
        }
        out.population = {{"alpha", alpha}};
    } else {
        throw std::invalid_argument("gen_named: unknown dataset name: " + name);
    }
    return out;
}

// Smallest neuron count required by each of the three coverage rules.
enum class NeuronRule { thm1, prop1, thm2 };

inline int min_neurons(NeuronRule rule, int n, int r, int r_plus, int r_minus) {
    switch (rule) {
        case NeuronRule::thm1: {
            int dr = r - std::max(r_plus, r_minus);
            require(dr > 0, "min_neurons: thm1 requires r > max(r+, r-)");
            int m_samples = (2 * n + dr - 1) / dr;  // ceil(2n / dr)
            return std::max({m_samples, 2 * r_plus, 2 * r_minus});
        }
        case NeuronRule::prop1: return r + 1;
        case NeuronRule::thm2: return 1;
    }
    return 1;
}

// --- file formats: CSV with header x1..xd,y plus a provenance sidecar ---

inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_dataset_csv(const Dataset& ds, const std::string& path) {
    std::ofstream f(path);
    require(f.good(), "write_dataset_csv: cannot open " + path);
    for (int k = 0; k < ds.dim(); ++k) f << "x" << (k + 1) << ",";
    f << "y\n";
    for (int i = 0; i < ds.n(); ++i) {
        for (int k = 0; k < ds.dim(); ++k) f << fmt17(ds.x[i][k]) << ",";
        f << ds.y[i] << "\n";
    }
    json side = {{"format_version", 1},
                 {"generator", ds.generator},
                 {"seed", ds.seed},
                 {"spec", ds.spec},
                 {"n", ds.n()},
                 {"d", ds.dim()}};
    std::ofstream sf(path + ".json");
    sf << side.dump(2) << "\n";
}

inline Dataset read_dataset_csv(const std::string& path) {
    std::ifstream f(path);
    require(f.good(), "read_dataset_csv: cannot open " + path);
    Dataset ds;
    std::string line;
    require(bool(std::getline(f, line)), "read_dataset_csv: empty file");
    int cols = 1 + (int)std::count(line.begin(), line.end(), ',');
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        Vec xi;
        for (int c = 0; c < cols - 1; ++c) {
            std::getline(ss, cell, ',');
            xi.push_back(std::stod(cell));
        }
        std::getline(ss, cell, ',');
        ds.push(std::move(xi), std::stoi(cell));
    }
    std::ifstream sf(path + ".json");
    if (sf.good()) {
        json side = json::parse(sf);
        ds.generator = side.value("generator", "file");
        ds.seed = side.value("seed", 0ULL);
        if (side.contains("spec")) ds.spec = side["spec"];
    } else {
        ds.generator = "file";
    }
    return ds;
}

}  // namespace losscape
