#include <benchmark/benchmark.h>

#include "marlcom/dccp.hpp"
#include "marlcom/trainer.hpp"

namespace {

void BM_DccpForward(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const auto topo = marlcom::AgentTopology::full_grid(side, side);
    marlcom::Rng rng(1);
    marlcom::Dccp dccp("bench", {8, 4, 3}, topo.num_agents());
    dccp.init(rng);
    std::vector<std::vector<double>> inputs(topo.num_agents(), std::vector<double>(8));
    for (auto& x : inputs)
        for (double& v : x) v = rng.uniform(-1.0, 1.0);
    for (auto _ : state) {
        marlcom::DccpCache cache;
        benchmark::DoNotOptimize(dccp.forward(topo, inputs, cache));
    }
}
BENCHMARK(BM_DccpForward)->Arg(3)->Arg(6);

void BM_TrainStep(benchmark::State& state) {
    nlohmann::json env_spec = {{"name", "sync_grid"}, {"height", 3}, {"width", 3}};
    marlcom::HyperParams hp;
    hp.batch = 32;
    marlcom::Trainer trainer(env_spec, marlcom::AgentVariant::kFull, {}, hp, 1);
    for (int i = 0; i < 64; ++i) trainer.rollout_step(1.0);
    for (auto _ : state) benchmark::DoNotOptimize(trainer.train_step());
}
BENCHMARK(BM_TrainStep);

}  // namespace

BENCHMARK_MAIN();
