#include <catch2/catch_amalgamated.hpp>

#include "losscape/activations.hpp"

using namespace losscape;

TEST_CASE("activation closed forms", "[activations]") {
    REQUIRE(act_eval({ActKind::softplus, 0}, 0.0) == Catch::Approx(1.0).margin(1e-15));
    ActivationSpec q{ActKind::quadratic, 0};
    REQUIRE(act_eval(q, 2.0) == 4.0);
    REQUIRE(act_deriv(q, 2.0, 1) == 4.0);
    REQUIRE(act_deriv(q, 2.0, 2) == 2.0);
    REQUIRE(act_eval({ActKind::relu, 0}, -3.0) == 0.0);
    REQUIRE(act_eval({ActKind::threshold, 0}, 0.0) == 1.0);
    REQUIRE(act_eval({ActKind::threshold, 0}, -1e-9) == 0.0);
}

TEST_CASE("kink conventions are right-handed", "[activations]") {
    REQUIRE(act_deriv({ActKind::relu, 0}, 0.0, 1) == 1.0);
    REQUIRE(act_deriv({ActKind::requ, 0}, 0.0, 2) == 2.0);
    REQUIRE(act_deriv(ActivationSpec::make(ActKind::leaky_relu, 0.25), 0.0, 1) == 1.0);
    REQUIRE_THROWS_AS(act_deriv({ActKind::threshold, 0}, 0.0, 2), std::invalid_argument);
    REQUIRE(act_deriv({ActKind::threshold, 0}, 0.5, 2) == 0.0);
}

TEST_CASE("classify_activation reproduces the class table", "[activations]") {
    using C = NeuronClass;
    auto has = [](const std::set<C>& s, C c) { return s.count(c) > 0; };

    auto softplus = classify_activation({ActKind::softplus, 0});
    REQUIRE(softplus == std::set<C>{C::softplus_class});

    auto relu = classify_activation({ActKind::relu, 0});
    REQUIRE(has(relu, C::relu_class));
    REQUIRE(has(relu, C::leaky_relu_class));
    REQUIRE_FALSE(has(relu, C::softplus_class));

    REQUIRE(has(classify_activation({ActKind::threshold, 0}), C::relu_class));
    REQUIRE(has(classify_activation({ActKind::requ, 0}), C::relu_class));

    REQUIRE(has(classify_activation(ActivationSpec::make(ActKind::leaky_relu, 0.1)), C::leaky_relu_class));
    REQUIRE(has(classify_activation(ActivationSpec::make(ActKind::elu, -0.5)), C::leaky_relu_class));

    REQUIRE(classify_activation({ActKind::tanh_act, 0}) == std::set<C>{C::sigmoid_class});
    REQUIRE(has(classify_activation({ActKind::sigmoid, 0}), C::sigmoid_class));
    REQUIRE(has(classify_activation({ActKind::arctan, 0}), C::sigmoid_class));
    REQUIRE(has(classify_activation({ActKind::softsign, 0}), C::sigmoid_class));

    auto linear = classify_activation({ActKind::linear, 0});
    REQUIRE(has(linear, C::leaky_relu_class));
    REQUIRE(has(linear, C::sigmoid_class));

    REQUIRE(classify_activation({ActKind::quadratic, 0}) == std::set<C>{C::quadratic_class});
}

TEST_CASE("sigmoid-class members have constant sigma(z) + sigma(-z)", "[activations]") {
    for (ActKind k : {ActKind::sigmoid, ActKind::tanh_act, ActKind::arctan, ActKind::softsign,
                      ActKind::linear, ActKind::constant}) {
        ActivationSpec a{k, 0};
        double c = 2 * act_eval(a, 0.0);
        for (double z : symmetric_grid())
            REQUIRE(std::fabs(act_eval(a, z) + act_eval(a, -z) - c) <= 1e-12);
    }
}

TEST_CASE("analytic activation derivatives match finite differences", "[activations]") {
    Rng rng(41, 0);
    struct Case {
        ActivationSpec a;
        double kink;  // points within 1e-3 of this are skipped
    };
    std::vector<Case> cases = {{{ActKind::softplus, 0}, 1e9},
                               {{ActKind::relu, 0}, 0},
                               {{ActKind::requ, 0}, 0},
                               {ActivationSpec::make(ActKind::leaky_relu, 0.3), 0},
                               {ActivationSpec::make(ActKind::elu, -0.7), 0},
                               {{ActKind::sigmoid, 0}, 1e9},
                               {{ActKind::tanh_act, 0}, 1e9},
                               {{ActKind::arctan, 0}, 1e9},
                               {{ActKind::softsign, 0}, 0},
                               {{ActKind::quadratic, 0}, 1e9},
                               {{ActKind::linear, 0}, 1e9}};
    for (const Case& c : cases) {
        int done = 0;
        while (done < 100) {
            double z = rng.uniform(-4.0, 4.0);
            if (std::fabs(z - c.kink) < 1e-3) continue;
            ++done;
            auto f = [&](const Vec& v) { return act_eval(c.a, v[0]); };
            double fd1 = fd_grad(f, {z}, 1e-5)[0];
            double an1 = act_deriv(c.a, z, 1);
            REQUIRE(std::fabs(fd1 - an1) <= 1e-5 * (1 + std::fabs(an1)));
        }
    }
}
