#include <doctest.h>

#include <cmath>

#include "marlcom/predictors.hpp"
#include "marlcom/verification.hpp"

using namespace marlcom;

namespace {

std::vector<std::vector<double>> random_vecs(Rng& rng, std::size_t n, std::size_t dim) {
    std::vector<std::vector<double>> out(n, std::vector<double>(dim));
    for (auto& v : out)
        for (double& x : v) x = rng.uniform(-1.0, 1.0);
    return out;
}

ParameterBlock* find_block(ParamRefs refs, const std::string& suffix) {
    for (auto* b : refs) {
        if (b->name.size() >= suffix.size() &&
            b->name.compare(b->name.size() - suffix.size(), suffix.size(), suffix) == 0)
            return b;
    }
    REQUIRE_MESSAGE(false, "missing block ", suffix);
    return nullptr;
}

}  // namespace

TEST_CASE("zero network maps zero inputs to zero predictions") {
    PredictorNet net("p", 2, 3, 3, 4, {0, 2, 3});
    for (auto* b : net.params()) b->fill(0.0);
    const auto topo = AgentTopology::full_grid(2, 2);
    std::vector<std::vector<double>> prev_obs(4, std::vector<double>(2, 0.0));
    std::vector<std::vector<double>> prev_q(4, std::vector<double>(3, 0.0));
    PredictorNet::Cache c;
    for (const auto& p : net.forward(topo, prev_obs, prev_q, c))
        for (double v : p) CHECK(v == 0.0);
}

TEST_CASE("locality: predictions only see agents inside the comm patch") {
    Rng rng(1);
    const auto topo = AgentTopology::full_grid(1, 3);
    PredictorNet net("p", 2, 2, 2, 3, {0, 2, 3});
    net.init(rng);
    auto prev_obs = random_vecs(rng, 3, 2);
    auto prev_q = random_vecs(rng, 3, 2);
    PredictorNet::Cache c1, c2;
    const auto a = net.forward(topo, prev_obs, prev_q, c1);
    prev_obs[2][0] += 4.0;  // outside agent 0's 3x3 patch
    const auto b = net.forward(topo, prev_obs, prev_q, c2);
    CHECK(a[0] == b[0]);
    CHECK(a[1] != b[1]);
}

TEST_CASE("prediction loss examples") {
    CHECK(prediction_loss({{1.0, 0.0}}, {{1.0, 0.0}}) == 0.0);
    CHECK(prediction_loss({{0.0, 0.0}}, {{1.0, 0.0}}) == 1.0);
    CHECK(prediction_loss({{0.0, 0.0}}, {{2.0, 0.0}}) == 4.0);
}

TEST_CASE("prediction loss matches brute-force double loop") {
    Rng rng(2);
    const auto pred = random_vecs(rng, 5, 3);
    const auto target = random_vecs(rng, 5, 3);
    double expect = 0.0;
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            expect += (pred[i][j] - target[i][j]) * (pred[i][j] - target[i][j]);
    CHECK(prediction_loss(pred, target) == doctest::Approx(expect).epsilon(1e-15));
    const auto g = prediction_loss_grad(pred, target, 0.5);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(g[i][j] == doctest::Approx(pred[i][j] - target[i][j]).epsilon(1e-15));
}

TEST_CASE("forward equals hand-composed encoder + communication oracles") {
    Rng rng(3);
    const std::size_t obs = 2, act = 2, latent = 2, hidden = 4;
    const auto topo = AgentTopology::full_grid(2, 2);
    PredictorNet net("p", obs, act, latent, 4, {0, 2, 3}, hidden);
    net.init(rng);

    // rebuild the layers from the published parameter blocks
    DenseLayer enc("e", obs + act, hidden, Activation::kRelu);
    enc.weight.values = find_block(net.params(), ".enc.hidden.weight")->values;
    enc.bias.values = find_block(net.params(), ".enc.hidden.bias")->values;
    DenseLayer proj("q", hidden, latent, Activation::kIdentity);
    proj.weight.values = find_block(net.params(), ".enc.proj.weight")->values;
    proj.bias.values = find_block(net.params(), ".enc.proj.bias")->values;
    Dccp comm("c", {latent, 2, 3}, 4);
    comm.kernels.values = find_block(net.params(), ".comm.kernels")->values;
    comm.agent_weights.values = find_block(net.params(), ".comm.agent_weights")->values;

    const auto prev_obs = random_vecs(rng, 4, obs);
    const auto prev_q = random_vecs(rng, 4, act);

    std::vector<std::vector<double>> latents(4);
    for (std::size_t i = 0; i < 4; ++i) {
        std::vector<double> in(prev_obs[i]);
        in.insert(in.end(), prev_q[i].begin(), prev_q[i].end());
        DenseCache c1, c2;
        latents[i] = proj.forward(enc.forward(in, c1), c2);
    }
    const auto expect = dccp_reference_forward(comm, topo, latents);

    PredictorNet::Cache c;
    const auto got = net.forward(topo, prev_obs, prev_q, c);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t m = 0; m < latent; ++m)
            CHECK(got[i][m] == doctest::Approx(expect[i][m]).epsilon(1e-12));
}

TEST_CASE("parameter count closed form") {
    const std::size_t obs = 3, act = 2, latent = 2, hidden = 32, N = 9, K = 4, n = 3;
    PredictorNet net("p", obs, act, latent, N, {0, K, n});
    const std::size_t expect = hidden * (obs + act) + hidden  // encoder hidden
                               + latent * hidden + latent     // projection
                               + latent * K * n * n           // shared kernels
                               + N * latent * K;              // mixing weights
    CHECK(net.param_count() == expect);
}

TEST_CASE("episode-start predictions from zero carries are deterministic") {
    Rng rng(4);
    PredictorNet net("p", 2, 2, 2, 4, {0, 2, 3});
    net.init(rng);
    const auto topo = AgentTopology::full_grid(2, 2);
    const std::vector<std::vector<double>> zo(4, std::vector<double>(2, 0.0));
    PredictorNet::Cache c1, c2;
    CHECK(net.forward(topo, zo, zo, c1) == net.forward(topo, zo, zo, c2));
}
