#include <catch2/catch_amalgamated.hpp>

#include "losscape/losses.hpp"
#include "losscape/numerics.hpp"

using namespace losscape;

TEST_CASE("loss_eval closed forms", "[losses]") {
    LossSpec p6 = LossSpec::poly_hinge(6);
    REQUIRE(loss_eval(p6, 0.0) == 1.0);    // max(1,0)^7
    REQUIRE(loss_eval(p6, -1.0) == 0.0);   // hinge boundary
    REQUIRE(loss_eval(LossSpec::logistic(), 0.0) == Catch::Approx(1.0).margin(1e-15));
    REQUIRE(loss_eval(LossSpec::quadratic(), -1.0) == 0.0);
}

TEST_CASE("loss_eval is zero on the flat tail", "[losses]") {
    LossSpec p6 = LossSpec::poly_hinge(6);
    for (double z = -1.0; z >= -50.0; z -= 0.37) {
        REQUIRE(loss_eval(p6, z) == 0.0);
        REQUIRE(loss_deriv(p6, z, 1) == 0.0);
    }
}

TEST_CASE("loss_deriv closed forms", "[losses]") {
    LossSpec p6 = LossSpec::poly_hinge(6);
    REQUIRE(loss_deriv(p6, -2.0, 1) == 0.0);
    REQUIRE(loss_deriv(p6, 0.0, 1) == 7.0);  // (p+1) 1^p
    double expect = 1.0 / (2.0 * std::log(2.0));
    REQUIRE(loss_deriv(LossSpec::logistic(), 0.0, 1) == Catch::Approx(expect).epsilon(1e-14));
    REQUIRE_THROWS_AS(loss_deriv(LossSpec::poly_hinge(1), 0.0, 2), std::invalid_argument);
}

TEST_CASE("logistic stays finite at large arguments", "[losses]") {
    LossSpec l = LossSpec::logistic();
    REQUIRE(std::isfinite(loss_eval(l, 800.0)));
    REQUIRE(std::isfinite(loss_deriv(l, 800.0, 1)));
    REQUIRE(loss_eval(l, 800.0) == Catch::Approx(800.0 * 1.4426950408889634).epsilon(1e-12));
    REQUIRE(loss_eval(l, -800.0) == 0.0);
}

TEST_CASE("check_assumption1 separates the three families", "[losses]") {
    Vec grid = make_grid(-5, 5, 1001);

    auto poly = check_assumption1(LossSpec::poly_hinge(6), grid);
    REQUIRE(poly.surrogate_ok);
    REQUIRE(poly.monotone_ok);
    REQUIRE(poly.flat_iff_ok);

    auto logi = check_assumption1(LossSpec::logistic(), grid);
    REQUIRE_FALSE(logi.flat_iff_ok);  // l' > 0 everywhere

    auto quad = check_assumption1(LossSpec::quadratic(), grid);
    REQUIRE_FALSE(quad.monotone_ok);  // l'(z) = 2(1+z) < 0 below -1
}

TEST_CASE("poly_hinge passes for any p >= 6 and fails below p for derivatives", "[losses]") {
    Vec grid = make_grid(-6, 6, 700);
    for (int p : {6, 7, 9}) {
        auto rep = check_assumption1(LossSpec::poly_hinge(p), grid);
        REQUIRE(rep.all_ok());
    }
}

TEST_CASE("analytic loss derivatives match finite differences", "[losses]") {
    Rng rng(31, 0);
    LossSpec p6 = LossSpec::poly_hinge(6);
    for (int t = 0; t < 100; ++t) {
        double z = rng.uniform(-3.0, 3.0);
        auto f = [&](const Vec& v) { return loss_eval(p6, v[0]); };
        double fd1 = fd_grad(f, {z}, 1e-5)[0];
        double an1 = loss_deriv(p6, z, 1);
        REQUIRE(std::fabs(fd1 - an1) <= 1e-5 * (1 + std::fabs(an1)));

        auto f1 = [&](const Vec& v) { return loss_deriv(p6, v[0], 1); };
        double fd2 = fd_grad(f1, {z}, 1e-5)[0];
        double an2 = loss_deriv(p6, z, 2);
        REQUIRE(std::fabs(fd2 - an2) <= 1e-5 * (1 + std::fabs(an2)));
    }
}
