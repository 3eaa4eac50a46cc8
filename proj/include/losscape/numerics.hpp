#pragma once

// Dense symmetric eigensolver, finite differences and seeded randomness.
// Everything here is a pure function of its inputs; matrices are small
// (certification Hessians, dim <= 200), so a cyclic Jacobi sweep is enough.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace losscape {

using Vec = std::vector<double>;

inline bool all_finite(const Vec& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

inline double dot(const Vec& a, const Vec& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec operator+(Vec a, const Vec& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

inline Vec operator-(Vec a, const Vec& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

inline Vec operator*(double s, Vec a) {
    for (double& x : a) x *= s;
    return a;
}

// Row-major dense matrix, used for eigenvectors and small solves.
struct Mat {
    int rows = 0, cols = 0;
    Vec data;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), data(size_t(r) * c, 0.0) {}

    double& operator()(int i, int j) { return data[size_t(i) * cols + j]; }
    double operator()(int i, int j) const { return data[size_t(i) * cols + j]; }
};

// Symmetric matrix; construction symmetrizes and checks the input deviates
// from symmetry by at most 1e-12 relative.
struct SymMat {
    int n = 0;
    Vec data;  // row-major full storage

    SymMat() = default;
    explicit SymMat(int n_) : n(n_), data(size_t(n_) * n_, 0.0) {}

    double& operator()(int i, int j) { return data[size_t(i) * n + j]; }
    double operator()(int i, int j) const { return data[size_t(i) * n + j]; }

    static SymMat from_full(const Mat& m, double rel_tol = 1e-12) {
        require(m.rows == m.cols, "SymMat: matrix not square");
        SymMat s(m.rows);
        double scale = 0;
        for (double x : m.data) {
            require(std::isfinite(x), "SymMat: non-finite entry");
            scale = std::max(scale, std::fabs(x));
        }
        for (int i = 0; i < m.rows; ++i)
            for (int j = 0; j < m.cols; ++j) {
                require(std::fabs(m(i, j) - m(j, i)) <= rel_tol * (1.0 + scale),
                        "SymMat: input not symmetric");
                s(i, j) = 0.5 * (m(i, j) + m(j, i));
            }
        return s;
    }

    double frob() const {
        double s = 0;
        for (double x : data) s += x * x;
        return std::sqrt(s);
    }
};

struct EigResult {
    Vec values;   // ascending
    Mat vectors;  // columns are eigenvectors, same order as values
};

// Cyclic Jacobi rotations. Robust for the symmetric matrices that appear in
// certification; no attempt at large-scale performance.
inline EigResult sym_eig(const SymMat& m) {
    require(m.n >= 1 && m.n <= 200, "sym_eig: dim must be in [1,200]");
    for (double x : m.data) require(std::isfinite(x), "sym_eig: non-finite entry");

    int n = m.n;
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = m(i, j);
    Mat v(n, n);
    for (int i = 0; i < n; ++i) v(i, i) = 1.0;

    auto offdiag = [&]() {
        double s = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
        return std::sqrt(2 * s);
    };

    double scale = m.frob();
    double tol = 1e-14 * (scale > 0 ? scale : 1.0);
    for (int sweep = 0; sweep < 100 && offdiag() > tol; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = a(p, q);
                if (std::fabs(apq) <= 1e-300) continue;
                double theta = 0.5 * (a(q, q) - a(p, p)) / apq;
                double t = 1.0 / (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
                if (theta < 0) t = -t;
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;
                double tau = s / (1.0 + c);
                double h = t * apq;
                a(p, p) -= h;
                a(q, q) += h;
                a(p, q) = a(q, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    if (k != p && k != q) {
                        double akp = a(k, p), akq = a(k, q);
                        a(k, p) = a(p, k) = akp - s * (akq + akp * tau);
                        a(k, q) = a(q, k) = akq + s * (akp - akq * tau);
                    }
                    double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp - s * (vkq + vkp * tau);
                    v(k, q) = vkq + s * (vkp - vkq * tau);
                }
            }
        }
    }

    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) d[i] = a(i, i);
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return d[i] < d[j]; });

    EigResult r;
    r.values.resize(n);
    r.vectors = Mat(n, n);
    for (int j = 0; j < n; ++j) {
        r.values[j] = d[idx[j]];
        for (int i = 0; i < n; ++i) r.vectors(i, j) = v(i, idx[j]);
    }
    return r;
}

inline double min_eig(const SymMat& m) { return sym_eig(m).values.front(); }
inline double max_eig(const SymMat& m) { return sym_eig(m).values.back(); }

// Central differences, default step 1e-5 for unit-scaled inputs.
inline Vec fd_grad(const std::function<double(const Vec&)>& f, const Vec& x, double h = 1e-5) {
    require(h > 0, "fd_grad: step must be positive");
    require(all_finite(x), "fd_grad: non-finite point");
    Vec g(x.size());
    Vec xp = x;
    for (size_t k = 0; k < x.size(); ++k) {
        double xk = x[k];
        xp[k] = xk + h;
        double fp = f(xp);
        xp[k] = xk - h;
        double fm = f(xp);
        xp[k] = xk;
        require(std::isfinite(fp) && std::isfinite(fm), "fd_grad: non-finite function value");
        g[k] = (fp - fm) / (2 * h);
    }
    return g;
}

// Gaussian elimination with partial pivoting; a is consumed.
inline Vec solve_linear(Mat a, Vec b) {
    require(a.rows == a.cols && (int)b.size() == a.rows, "solve_linear: shape mismatch");
    int n = a.rows;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(a(r, col)) > std::fabs(a(piv, col))) piv = r;
        if (std::fabs(a(piv, col)) < 1e-300) throw std::runtime_error("solve_linear: singular matrix");
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(a(piv, c), a(col, c));
            std::swap(b[piv], b[col]);
        }
        for (int r = col + 1; r < n; ++r) {
            double f = a(r, col) / a(col, col);
            for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
            b[r] -= f * b[col];
        }
    }
    Vec x(n);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= a(r, c) * x[c];
        x[r] = s / a(r, r);
    }
    return x;
}

// Counter-based generator keyed by (seed, stream): identical keys give
// identical sequences, and parallel restarts can use disjoint streams.
class Rng {
public:
    Rng(uint64_t seed, uint64_t stream = 0) : seed_(seed), stream_(stream) {
        key_ = fin(fin(seed ^ 0x5851f42d4c957f2dULL) ^ fin(stream * 0x9e3779b97f4a7c15ULL + 1));
    }

    uint64_t seed() const { return seed_; }
    uint64_t stream() const { return stream_; }

    uint64_t next_u64() {
        uint64_t z = counter_++;
        z = z * 0x9e3779b97f4a7c15ULL + key_;
        return fin(z);
    }

    // uniform in [0,1)
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = 0;
        while (u1 <= 0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        cached_ = r * std::sin(2 * M_PI * u2);
        have_cached_ = true;
        return r * std::cos(2 * M_PI * u2);
    }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + int(next_u64() % uint64_t(hi - lo + 1));
    }

private:
    static uint64_t fin(uint64_t z) {  // splitmix64 finalizer
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    uint64_t seed_, stream_, key_, counter_ = 0;
    bool have_cached_ = false;
    double cached_ = 0;
};

}  // namespace losscape
