#include <catch2/catch_amalgamated.hpp>

#include <cstdio>

#include "losscape/datagen.hpp"

using namespace losscape;

TEST_CASE("gen_subspace respects class supports and rank", "[datagen]") {
    auto spec = SubspaceSpec::identity(3, {0}, {1});
    Rng rng(2, 0);
    Dataset ds = gen_subspace(spec, 30, rng);
    REQUIRE(ds.n() == 30);
    for (int i = 0; i < ds.n(); ++i) {
        // positives on the x-axis, negatives on the y-axis
        if (ds.y[i] == 1) {
            REQUIRE(std::fabs(ds.x[i][1]) <= 1e-10);
            REQUIRE(std::fabs(ds.x[i][2]) <= 1e-10);
            REQUIRE(std::fabs(ds.x[i][0]) >= 1.0 - 1e-12);
        } else {
            REQUIRE(std::fabs(ds.x[i][0]) <= 1e-10);
            REQUIRE(std::fabs(ds.x[i][2]) <= 1e-10);
        }
    }

    // two positives with r_plus = 2 span a rank-2 coefficient matrix
    auto spec2 = SubspaceSpec::identity(6, {0, 1}, {2, 3});
    Rng rng2(3, 0);
    Dataset ds2 = gen_subspace(spec2, 20, rng2);
    std::vector<Vec> pos;
    for (int i = 0; i < ds2.n() && (int)pos.size() < 2; ++i)
        if (ds2.y[i] == 1) pos.push_back({ds2.x[i][0], ds2.x[i][1]});
    REQUIRE(pos.size() == 2);
    double det = pos[0][0] * pos[1][1] - pos[0][1] * pos[1][0];
    REQUIRE(std::fabs(det) > 1e-8);

    REQUIRE_THROWS_AS(gen_subspace(spec, 0, rng), std::invalid_argument);
    auto bad = SubspaceSpec::identity(3, {0, 1}, {0, 1});  // r == max(r+, r-)
    REQUIRE_THROWS_AS(gen_subspace(bad, 5, rng), std::invalid_argument);
}

TEST_CASE("gen_separable verifies its own witness", "[datagen]") {
    Rng rng(7, 0);
    auto sd = gen_separable(5, 50, 0.5, rng);
    REQUIRE(sd.ds.n() == 50);
    for (int i = 0; i < sd.ds.n(); ++i)
        REQUIRE(sd.ds.y[i] * dot(sd.witness, sd.ds.x[i]) >= 0.5 - 1e-9);

    Rng rng1(8, 0);
    auto d1 = gen_separable(1, 20, 1.0, rng1);
    for (int i = 0; i < d1.ds.n(); ++i) {
        double v = d1.witness[0] * d1.ds.x[i][0];
        if (d1.ds.y[i] == 1)
            REQUIRE(v >= 1.0 - 1e-9);
        else
            REQUIRE(v <= -1.0 + 1e-9);
    }
}

TEST_CASE("named datasets match their definitions", "[datagen]") {
    Rng r1(5, 0);
    auto xor4 = gen_named("xor4_balanced", 8, r1);
    int at[4] = {0, 0, 0, 0};
    for (int i = 0; i < 8; ++i) {
        const Vec& x = xor4.ds.x[i];
        if (x == Vec{1, 0}) ++at[0];
        if (x == Vec{-1, 0}) ++at[1];
        if (x == Vec{0, 1}) ++at[2];
        if (x == Vec{0, -1}) ++at[3];
        REQUIRE(xor4.ds.y[i] == (std::fabs(x[0]) > 0.5 ? 1 : -1));
    }
    for (int k = 0; k < 4; ++k) REQUIRE(at[k] == 2);

    // antisymmetry: each sample has a mirror with the same label
    for (int i = 0; i < 8; ++i) {
        bool found = false;
        for (int j = 0; j < 8 && !found; ++j)
            found = xor4.ds.y[i] == xor4.ds.y[j] &&
                    std::fabs(xor4.ds.x[i][0] + xor4.ds.x[j][0]) +
                            std::fabs(xor4.ds.x[i][1] + xor4.ds.x[j][1]) ==
                        0.0;
        REQUIRE(found);
    }

    Rng r2(6, 0);
    auto col = gen_named("collinear", 40, r2);
    for (int i = 0; i < col.ds.n(); ++i)
        if (col.ds.y[i] == -1) REQUIRE(col.ds.x[i] == Vec{0, 0});

    Rng r3(7, 0);
    auto e1 = gen_named("example1", 10, r3);
    REQUIRE(e1.population.at("mean_x") == Catch::Approx(7.0 / 8.0));

    Rng r4(8, 0);
    auto cross = gen_named("cross", 25, r4);
    for (int i = 0; i < cross.ds.n(); ++i) {
        REQUIRE(cross.ds.x[i][2] == 1.0);
        double c = cross.ds.y[i] == 1 ? cross.ds.x[i][0] : cross.ds.x[i][1];
        REQUIRE(std::fabs(c) >= 1.0);
        REQUIRE(std::fabs(c) <= 2.0);
    }

    Rng r5(9, 0);
    REQUIRE_THROWS_AS(gen_named("no_such_dataset", 4, r5), std::invalid_argument);
    REQUIRE_THROWS_AS(gen_named("xor4_balanced", 6, r5), std::invalid_argument);
}

TEST_CASE("min_neurons implements the three rules", "[datagen]") {
    REQUIRE(min_neurons(NeuronRule::thm1, 20, 4, 2, 2) == 20);  // 2 max{10, 2, 2}
    REQUIRE(min_neurons(NeuronRule::thm1, 21, 4, 2, 2) == 21);  // ceil(42/2)
    REQUIRE(min_neurons(NeuronRule::prop1, 99, 4, 2, 2) == 5);  // smallest integer > r
    REQUIRE(min_neurons(NeuronRule::thm2, 99, 0, 0, 0) == 1);
    REQUIRE_THROWS_AS(min_neurons(NeuronRule::thm1, 20, 2, 2, 2), std::invalid_argument);
}

TEST_CASE("dataset csv round trip preserves values and provenance", "[datagen]") {
    Rng rng(11, 0);
    auto sd = gen_separable(3, 12, 0.25, rng);
    std::string path = "test_roundtrip_dataset.csv";
    write_dataset_csv(sd.ds, path);
    Dataset back = read_dataset_csv(path);
    REQUIRE(back.n() == sd.ds.n());
    REQUIRE(back.dim() == sd.ds.dim());
    for (int i = 0; i < back.n(); ++i) {
        REQUIRE(back.y[i] == sd.ds.y[i]);
        for (int k = 0; k < back.dim(); ++k) REQUIRE(back.x[i][k] == sd.ds.x[i][k]);
    }
    REQUIRE(back.generator == "separable");
    std::remove(path.c_str());
    std::remove((path + ".json").c_str());
}
