#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "marlcom/checkpoint.hpp"
#include "marlcom/dense.hpp"
#include "marlcom/grad_check.hpp"
#include "marlcom/optimizer.hpp"

using namespace marlcom;

namespace {

DenseLayer identity_2x2(Activation act) {
    DenseLayer layer("l", 2, 2, act);
    layer.weight.fill(0.0);
    layer.weight.values[0] = 1.0;  // W = I
    layer.weight.values[3] = 1.0;
    layer.bias.fill(0.0);
    return layer;
}

}  // namespace

TEST_CASE("dense forward: identity weights") {
    auto layer = identity_2x2(Activation::kIdentity);
    DenseCache c;
    const std::vector<double> x = {3.0, -1.0};
    const auto y = layer.forward(x, c);
    CHECK(y == std::vector<double>{3.0, -1.0});
}

TEST_CASE("dense forward: relu clips negatives") {
    auto layer = identity_2x2(Activation::kRelu);
    DenseCache c;
    const std::vector<double> x = {3.0, -1.0};
    const auto y = layer.forward(x, c);
    CHECK(y == std::vector<double>{3.0, 0.0});
}

TEST_CASE("dense forward matches direct matrix multiply") {
    Rng rng(7);
    DenseLayer layer("l", 4, 3, Activation::kIdentity);
    layer.init(rng);
    std::vector<double> x(4);
    for (double& v : x) v = rng.uniform(-2.0, 2.0);
    DenseCache c;
    const auto y = layer.forward(x, c);
    for (std::size_t o = 0; o < 3; ++o) {
        double expect = layer.bias.values[o];
        for (std::size_t i = 0; i < 4; ++i) expect += layer.weight.values[o * 4 + i] * x[i];
        CHECK(y[o] == doctest::Approx(expect).epsilon(1e-15));
    }
}

TEST_CASE("dense forward is deterministic bitwise") {
    Rng rng(9);
    DenseLayer layer("l", 5, 5, Activation::kRelu);
    layer.init(rng);
    std::vector<double> x(5);
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    DenseCache a, b;
    CHECK(layer.forward(x, a) == layer.forward(x, b));
}

TEST_CASE("dense rejects wrong input size and backward without cache") {
    DenseLayer layer("l", 3, 2, Activation::kIdentity);
    DenseCache c;
    CHECK_THROWS_AS(layer.forward(std::vector<double>{1.0}, c), std::invalid_argument);
    DenseCache empty;
    CHECK_THROWS_AS(layer.backward(empty, std::vector<double>{1.0, 1.0}), std::logic_error);
}

TEST_CASE("dense backward: zero cotangent, identity chain rule") {
    auto layer = identity_2x2(Activation::kIdentity);
    DenseCache c;
    layer.forward(std::vector<double>{0.5, -0.25}, c);

    const auto dx0 = layer.backward(c, std::vector<double>{0.0, 0.0});
    CHECK(dx0 == std::vector<double>{0.0, 0.0});
    for (double g : layer.weight.grads) CHECK(g == 0.0);
    for (double g : layer.bias.grads) CHECK(g == 0.0);

    const auto dx = layer.backward(c, std::vector<double>{1.0, 2.0});
    CHECK(dx == std::vector<double>{1.0, 2.0});
}

TEST_CASE("grad_check: f(x) = x^2 at x = 3") {
    ParameterBlock x("x", {1});
    x.values[0] = 3.0;
    const auto loss = [&] { return x.values[0] * x.values[0]; };
    const auto grad = [&] {
        x.grads[0] += 2.0 * x.values[0];
        return loss();
    };
    ParamRefs params = {&x};
    const auto report = grad_check(loss, grad, params);
    CHECK(report.max_rel_err < 1e-8);
}

TEST_CASE("dense gradients match finite differences") {
    Rng rng(11);
    DenseLayer layer("l", 3, 2, Activation::kIdentity);
    layer.init(rng);
    std::vector<double> x(3), t(2);
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    for (double& v : t) v = rng.uniform(-1.0, 1.0);
    const auto loss = [&] {
        DenseCache c;
        const auto y = layer.forward(x, c);
        return (y[0] - t[0]) * (y[0] - t[0]) + (y[1] - t[1]) * (y[1] - t[1]);
    };
    const auto grad = [&] {
        DenseCache c;
        const auto y = layer.forward(x, c);
        layer.backward(c, std::vector<double>{2.0 * (y[0] - t[0]), 2.0 * (y[1] - t[1])});
        return (y[0] - t[0]) * (y[0] - t[0]) + (y[1] - t[1]) * (y[1] - t[1]);
    };
    const auto report = grad_check(loss, grad, layer.params());
    CHECK(report.max_rel_err < 1e-4);
}

TEST_CASE("optimizer: plain SGD update and zero-grad no-op") {
    ParameterBlock p("p", {1});
    p.values[0] = 2.0;
    Optimizer sgd({0.1, false}, {&p});

    p.grads[0] = 1.0;
    sgd.step();
    CHECK(p.values[0] == doctest::Approx(1.9).epsilon(1e-15));
    CHECK(sgd.step_count() == 1);

    // grads were zeroed by step(); another step leaves values bitwise unchanged
    const double before = p.values[0];
    sgd.step();
    CHECK(p.values[0] == before);
}

TEST_CASE("clip_grad_norm: rescales above threshold, no-op below") {
    ParameterBlock a("a", {2}), b("b", {1});
    a.grads = {3.0, 0.0};
    b.grads = {4.0};  // joint norm 5

    CHECK(clip_grad_norm({&a, &b}, 10.0) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(a.grads[0] == 3.0);
    CHECK(b.grads[0] == 4.0);

    CHECK(clip_grad_norm({&a, &b}, 2.5) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(a.grads[0] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(b.grads[0] == doctest::Approx(2.0).epsilon(1e-15));

    // 0 disables clipping entirely
    b.grads[0] = 7.0;
    clip_grad_norm({&b}, 0.0);
    CHECK(b.grads[0] == 7.0);
}

TEST_CASE("optimizer: adaptive mode, zero grads leave params bitwise unchanged") {
    ParameterBlock p("p", {2});
    p.values = {1.25, -0.5};
    Optimizer adam({1e-3, true}, {&p});
    const auto before = p.values;
    adam.step();
    adam.step();
    CHECK(p.values == before);
}

TEST_CASE("optimizer: adaptive single step matches hand computation") {
    ParameterBlock p("p", {1});
    p.values[0] = 2.0;
    const OptimizerConfig cfg{0.001, true, 0.9, 0.999, 1e-8};
    Optimizer adam(cfg, {&p});
    const double g = 0.5;
    p.grads[0] = g;
    adam.step();
    // from zero moments, bias correction makes m_hat = g and v_hat = g^2
    const double expected = 2.0 - cfg.lr * g / (std::sqrt(g * g) + cfg.eps);
    CHECK(p.values[0] == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("optimizer rejects non-finite gradients, naming the block") {
    ParameterBlock p("offender", {1});
    Optimizer opt({1e-3, false}, {&p});
    p.grads[0] = std::nan("");
    try {
        opt.step();
        FAIL("expected throw");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("offender") != std::string::npos);
    }
}

TEST_CASE("parameter count closed form for a dense layer") {
    DenseLayer layer("l", 7, 5, Activation::kRelu);
    CHECK(total_params(layer.params()) == 7 * 5 + 5);
}

TEST_CASE("checkpoint round trip preserves values and metadata") {
    const auto dir = std::filesystem::temp_directory_path() / "marlcom_ckpt_test";
    std::filesystem::create_directories(dir);
    const std::string prefix = (dir / "ckpt").string();

    Rng rng(3);
    DenseLayer layer("l", 3, 3, Activation::kIdentity);
    layer.init(rng);
    const auto w = layer.weight.values;
    const auto b = layer.bias.values;
    save_checkpoint(prefix, layer.params(), {{"tag", "unit"}});

    DenseLayer other("l", 3, 3, Activation::kIdentity);
    const auto meta = load_checkpoint(prefix, other.params());
    CHECK(other.weight.values == w);
    CHECK(other.bias.values == b);
    CHECK(meta.at("tag") == "unit");

    DenseLayer wrong("different", 3, 3, Activation::kIdentity);
    CHECK_THROWS(load_checkpoint(prefix, wrong.params()));
    std::filesystem::remove_all(dir);
}
