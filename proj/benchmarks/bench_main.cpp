#include <benchmark/benchmark.h>

#include <random>

#include <intergat/adam.hpp>
#include <intergat/attention.hpp>
#include <intergat/loss.hpp>
#include <intergat/ops.hpp>
#include <intergat/spectra.hpp>
#include <intergat/synth.hpp>
#include <intergat/trainer.hpp>

using namespace intergat;

namespace {

Mat random_mat(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat m(rows, cols);
  for (double& v : m.values()) v = u(rng);
  return m;
}

SpatialConfig spatial(std::size_t n, Variant v) {
  SpatialConfig c;
  c.nodes = n;
  c.in_features = 1;
  c.heads = 4;
  c.head_dim = 32;
  c.variant = v;
  return c;
}

void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Mat a = random_mat(n, n, 1), b = random_mat(n, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(matmul(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}
BENCHMARK(BM_Matmul)->Arg(20)->Arg(64)->Arg(156);

void BM_SpatialForward(benchmark::State& state, Variant v) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto syn = synth_community_traffic(n, 4, 40, 3);
  std::mt19937_64 rng(4);
  const InteractionSource source =
      v == Variant::none ? InteractionSource{v, attention_mask(syn.graph.adjacency())} : InteractionSource{v, {}};
  const InterGatLayer layer(spatial(n, v), source, rng);
  const Mat x = syn.signal.frame(0);
  const auto plan = layer.plan();
  for (auto _ : state) benchmark::DoNotOptimize(layer.forward(plan, x));
}
BENCHMARK_CAPTURE(BM_SpatialForward, interaction, Variant::learnable_sym)->Arg(20)->Arg(156);
BENCHMARK_CAPTURE(BM_SpatialForward, masked_attention, Variant::none)->Arg(20)->Arg(156);

void BM_Jacobi(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Mat m = symmetrize(random_mat(n, n, 5));
  for (auto _ : state) benchmark::DoNotOptimize(sym_eig(m));
}
BENCHMARK(BM_Jacobi)->Arg(20)->Arg(64)->Arg(156)->Unit(benchmark::kMillisecond);

void BM_TrainStep(benchmark::State& state, Variant v) {
  const auto syn = synth_community_traffic(20, 4, 200, 6);
  SplitOptions split;
  split.history = 12;
  split.horizon = 1;
  const WindowedDataset data = window_split(syn.signal, split);
  ModelSpec spec;
  spec.spatial = spatial(20, v);
  spec.spatial.head_dim = 4;
  spec.hidden = 16;
  Model model = make_model(spec, syn.graph, data, 4, 7);
  std::vector<Window> windows(data.train.begin(), data.train.begin() + 32);
  const std::vector<Sample> batch = make_samples(data, windows);
  std::vector<std::vector<Mat>> truth;
  for (const auto& s : batch) truth.push_back(s.targets);
  StepOptions opts;
  opts.mode = Mode::train;
  opts.forcing_probability = 1.0;
  AdamState adam;
  std::vector<ParamRef> params = model.parameters();
  for (auto _ : state) {
    const auto record = model.forward(batch, opts);
    const GradSet grads = model.backward(record, mse_loss_gradient(record.predictions, truth));
    adam_step(params, grads, adam, AdamConfig{});
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(batch.size()));
}
BENCHMARK_CAPTURE(BM_TrainStep, interaction, Variant::learnable_sym)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TrainStep, masked_attention, Variant::none)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
