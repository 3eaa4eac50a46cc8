#include <catch2/catch_amalgamated.hpp>

#include "losscape/numerics.hpp"

using namespace losscape;

namespace {
SymMat from_rows(const std::vector<Vec>& rows) {
    Mat m((int)rows.size(), (int)rows.size());
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) m(i, j) = rows[i][j];
    return SymMat::from_full(m);
}
}  // namespace

TEST_CASE("sym_eig on fixed small matrices", "[numerics]") {
    auto e1 = sym_eig(from_rows({{1, 0}, {0, -1}}));
    REQUIRE(e1.values[0] == Catch::Approx(-1.0).margin(1e-12));
    REQUIRE(e1.values[1] == Catch::Approx(1.0).margin(1e-12));

    auto e2 = sym_eig(SymMat(3));
    for (double v : e2.values) REQUIRE(v == 0.0);

    // characteristic polynomial of [[2,1],[1,2]] gives 1 and 3
    auto e3 = sym_eig(from_rows({{2, 1}, {1, 2}}));
    REQUIRE(e3.values[0] == Catch::Approx(1.0).margin(1e-10));
    REQUIRE(e3.values[1] == Catch::Approx(3.0).margin(1e-10));
}

TEST_CASE("min_eig small cases", "[numerics]") {
    REQUIRE(min_eig(from_rows({{4, 0}, {0, 9}})) == Catch::Approx(4.0).margin(1e-12));
    REQUIRE(min_eig(from_rows({{-1, 0}, {0, -1}})) == Catch::Approx(-1.0).margin(1e-12));
    // eigenvalues of the exchange matrix are +-1 by direct solve
    REQUIRE(min_eig(from_rows({{0, 1}, {1, 0}})) == Catch::Approx(-1.0).margin(1e-10));
}

TEST_CASE("sym_eig reconstruction, trace and orthonormality", "[numerics]") {
    Rng rng(12, 0);
    for (int n : {3, 10, 40}) {
        SymMat m(n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) m(i, j) = m(j, i) = rng.normal();
        auto eig = sym_eig(m);

        double trace = 0, sum = 0;
        for (int i = 0; i < n; ++i) trace += m(i, i);
        for (double v : eig.values) sum += v;
        REQUIRE(std::fabs(sum - trace) <= 1e-9 * (1 + std::fabs(trace)));

        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) {
                double g = 0;
                for (int i = 0; i < n; ++i) g += eig.vectors(i, a) * eig.vectors(i, b);
                REQUIRE(std::fabs(g - (a == b ? 1.0 : 0.0)) <= 1e-9);
            }

        double err = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double r = 0;
                for (int k = 0; k < n; ++k) r += eig.vectors(i, k) * eig.values[k] * eig.vectors(j, k);
                err += (r - m(i, j)) * (r - m(i, j));
            }
        REQUIRE(std::sqrt(err) <= 1e-9 * (1 + m.frob()));

        for (size_t k = 1; k < eig.values.size(); ++k) REQUIRE(eig.values[k - 1] <= eig.values[k]);
    }
}

TEST_CASE("sym_eig rejects non-finite input", "[numerics]") {
    SymMat m(2);
    m(0, 1) = m(1, 0) = std::numeric_limits<double>::quiet_NaN();
    REQUIRE_THROWS_AS(sym_eig(m), std::invalid_argument);
}

TEST_CASE("fd_grad on simple functions", "[numerics]") {
    auto sq = [](const Vec& x) { return dot(x, x); };
    Vec g = fd_grad(sq, {1, 2}, 1e-5);
    REQUIRE(std::fabs(g[0] - 2) <= 1e-6);
    REQUIRE(std::fabs(g[1] - 4) <= 1e-6);

    auto constant = [](const Vec&) { return 3.5; };
    for (double v : fd_grad(constant, {0.3, -0.7, 2}, 1e-5)) REQUIRE(v == 0.0);

    auto bilinear = [](const Vec& x) { return x[0] * x[1]; };
    Vec gb = fd_grad(bilinear, {3, 5}, 1e-5);
    REQUIRE(std::fabs(gb[0] - 5) <= 1e-6);
    REQUIRE(std::fabs(gb[1] - 3) <= 1e-6);
}

TEST_CASE("fd_grad is 1e-6-exact on random quadratics", "[numerics]") {
    Rng rng(5, 3);
    for (int trial = 0; trial < 20; ++trial) {
        int d = 1 + rng.uniform_int(0, 3);
        Vec lin(d), x(d);
        std::vector<Vec> quad(d, Vec(d));
        for (int i = 0; i < d; ++i) {
            lin[i] = rng.normal();
            x[i] = rng.normal();
            for (int j = 0; j < d; ++j) quad[i][j] = rng.normal();
        }
        auto f = [&](const Vec& v) {
            double s = dot(lin, v);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) s += quad[i][j] * v[i] * v[j];
            return s;
        };
        Vec g = fd_grad(f, x, 1e-5);
        for (int k = 0; k < d; ++k) {
            double exact = lin[k];
            for (int j = 0; j < d; ++j) exact += (quad[k][j] + quad[j][k]) * x[j];
            REQUIRE(std::fabs(g[k] - exact) <= 1e-6);
        }
    }
}

TEST_CASE("rng reproducibility and stream separation", "[numerics]") {
    Rng a(123, 7), b(123, 7), c(123, 8);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 1000; ++i) {
        uint64_t va = a.next_u64(), vb = b.next_u64(), vc = c.next_u64();
        all_equal = all_equal && va == vb;
        any_diff = any_diff || va != vc;
    }
    REQUIRE(all_equal);
    REQUIRE(any_diff);

    Rng d(9, 0), e(9, 0);
    for (int i = 0; i < 100; ++i) {
        REQUIRE(d.uniform() == e.uniform());
        REQUIRE(d.normal() == e.normal());
    }
}

TEST_CASE("solve_linear round trip", "[numerics]") {
    Rng rng(77, 0);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 2 + rng.uniform_int(0, 4);
        Mat a(n, n);
        Vec x(n);
        for (int i = 0; i < n; ++i) {
            x[i] = rng.normal();
            for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
            a(i, i) += 3;
        }
        Vec b(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) b[i] += a(i, j) * x[j];
        Vec got = solve_linear(a, b);
        for (int i = 0; i < n; ++i) REQUIRE(std::fabs(got[i] - x[i]) <= 1e-9);
    }
}
