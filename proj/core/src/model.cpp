#include "intergat/model.hpp"

#include <algorithm>

#include "intergat/error.hpp"
#include "intergat/parallel.hpp"

namespace intergat {
namespace {

constexpr const char* kGruPrefix = "gru.";
constexpr const char* kDecoderPrefix = "decoder.";

std::size_t decoder_outputs(const ModelSpec& spec) {
  const std::size_t f = spec.spatial.in_features;
  return spec.decode == DecodeMode::one_shot ? f * spec.horizon : f;
}

}  // namespace

std::string_view to_string(DecodeMode m) { return m == DecodeMode::iterative ? "iterative" : "one_shot"; }

DecodeMode parse_decode_mode(std::string_view s) {
  if (s == "iterative") return DecodeMode::iterative;
  if (s == "one_shot") return DecodeMode::one_shot;
  throw UsageError("unknown decode mode '" + std::string(s) + "' (expected iterative or one_shot)");
}

double TeacherForcingPolicy::probability(std::size_t epoch) const {
  switch (kind) {
    case Kind::off:
      return 0.0;
    case Kind::always:
      return 1.0;
    case Kind::scheduled:
      return std::clamp(initial - decay_per_epoch * static_cast<double>(epoch), 0.0, 1.0);
  }
  return 0.0;
}

std::string_view to_string(TeacherForcingPolicy::Kind k) {
  switch (k) {
    case TeacherForcingPolicy::Kind::off:
      return "off";
    case TeacherForcingPolicy::Kind::always:
      return "always";
    case TeacherForcingPolicy::Kind::scheduled:
      return "scheduled";
  }
  return "off";
}

TeacherForcingPolicy::Kind parse_forcing_kind(std::string_view s) {
  if (s == "off") return TeacherForcingPolicy::Kind::off;
  if (s == "always") return TeacherForcingPolicy::Kind::always;
  if (s == "scheduled") return TeacherForcingPolicy::Kind::scheduled;
  throw UsageError("unknown teacher forcing mode '" + std::string(s) + "' (expected off, always or scheduled)");
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Model::Model(const ModelSpec& spec, InteractionSource source, std::uint64_t seed) : spec_(spec) {
  if (spec_.horizon == 0) throw UsageError("Model: horizon must be >= 1");
  if (spec_.hidden == 0) throw UsageError("Model: hidden size must be >= 1");
  if (!(spec_.dropout >= 0.0 && spec_.dropout < 1.0)) throw UsageError("Model: dropout must lie in [0, 1)");
  std::mt19937_64 rng(seed);
  spatial_ = InterGatLayer(spec_.spatial, std::move(source), rng);
  gru_ = GruCell(spatial_.out_features(), spec_.hidden, spec_.gate_bias, rng);
  decoder_ = Decoder(spec_.hidden, decoder_outputs(spec_), rng);
}

std::vector<ParamRef> Model::parameters() {
  std::vector<ParamRef> out;
  spatial_.collect_parameters(out);
  gru_.collect_parameters(out, kGruPrefix);
  decoder_.collect_parameters(out, kDecoderPrefix);
  return out;
}

std::vector<std::pair<std::string, const Mat*>> Model::parameters() const {
  std::vector<std::pair<std::string, const Mat*>> out;
  for (const ParamRef& p : const_cast<Model*>(this)->parameters()) out.emplace_back(p.name, p.value);
  return out;
}

std::size_t Model::parameter_count() const {
  std::size_t n = 0;
  for (const auto& [name, m] : parameters()) n += m->size();
  return n;
}

Mat Model::embed(const InterGatLayer::Plan& plan, const Mat& frame, Mode mode, std::mt19937_64& rng) const {
  Mat e = spatial_.forward(plan, frame);
  if (mode == Mode::train && spec_.dropout > 0.0) e = hadamard(e, dropout_mask(spec_.dropout, rng, e.rows(), e.cols(), mode));
  return e;
}

namespace {

struct Stepper {
  const Model& model;
  const InterGatLayer::Plan& plan;
  Mode mode;
  std::mt19937_64& rng;
  SampleTrace* trace;

  Mat step(const Mat& frame, const Mat& h, int fed) {
    const ModelSpec& spec = model.spec();
    if (trace == nullptr) return gru_step(model.gru(), model.embed(plan, frame, mode, rng), h);
    StepTrace st;
    st.fed_prediction = fed;
    Mat e = model.spatial().forward(plan, frame, &st.spatial);
    st.dropout = dropout_mask(spec.dropout, rng, e.rows(), e.cols(), mode);
    e = hadamard(e, st.dropout);
    Mat next = gru_step(model.gru(), e, h, st.gru);
    trace->steps.push_back(std::move(st));
    return next;
  }
};

std::vector<Mat> decode_impl(const Model& model, Stepper& stepper, Mat h, std::size_t horizon,
                             double forcing_probability, const std::vector<Mat>* truth) {
  const ModelSpec& spec = model.spec();
  std::vector<Mat> preds;
  if (spec.decode == DecodeMode::one_shot) {
    if (stepper.trace != nullptr) stepper.trace->readout_inputs.push_back(h);
    const Mat all = model.decoder().apply(h);
    const std::size_t f = spec.spatial.in_features;
    for (std::size_t t = 0; t < horizon; ++t) preds.push_back(col_block(all, t * f, f));
    return preds;
  }
  const bool may_force = stepper.mode == Mode::train && forcing_probability > 0.0 && horizon > 1;
  if (may_force && (truth == nullptr || truth->size() + 1 < horizon)) {
    throw UsageError("decode_multi_step: teacher forcing requires ground truth for the horizon");
  }
  std::bernoulli_distribution force(std::clamp(forcing_probability, 0.0, 1.0));
  if (stepper.trace != nullptr) stepper.trace->readout_inputs.push_back(h);
  preds.push_back(model.decoder().apply(h));
  for (std::size_t t = 1; t < horizon; ++t) {
    const bool forced = may_force && force(stepper.rng);
    const Mat& frame = forced ? (*truth)[t - 1] : preds[t - 1];
    h = stepper.step(frame, h, forced ? -1 : static_cast<int>(t - 1));
    if (stepper.trace != nullptr) stepper.trace->readout_inputs.push_back(h);
    preds.push_back(model.decoder().apply(h));
  }
  return preds;
}

}  // namespace

std::vector<Mat> Model::decode_multi_step(const InterGatLayer::Plan& plan, Mat h, std::size_t horizon,
                                          double forcing_probability, const std::vector<Mat>* truth, Mode mode,
                                          std::mt19937_64& rng) const {
  if (spec_.decode == DecodeMode::one_shot && horizon != spec_.horizon) {
    throw UsageError("decode_multi_step: one-shot decoder is fixed to its trained horizon");
  }
  Stepper stepper{*this, plan, mode, rng, nullptr};
  return decode_impl(*this, stepper, std::move(h), horizon, forcing_probability, truth);
}

std::vector<Mat> Model::run_sample(const InterGatLayer::Plan& plan, const Sample& sample, const StepOptions& options,
                                   std::mt19937_64& rng, SampleTrace* trace) const {
  if (sample.inputs.empty()) throw UsageError("Model: sample has no input frames");
  Stepper stepper{*this, plan, options.mode, rng, trace};
  Mat h(spec_.spatial.nodes, spec_.hidden);
  for (const Mat& x : sample.inputs) h = stepper.step(x, h, -1);
  return decode_impl(*this, stepper, std::move(h), spec_.horizon, options.forcing_probability, &sample.targets);
}

ForwardRecord Model::forward(std::span<const Sample> batch, const StepOptions& options) const {
  ForwardRecord record;
  record.plan = spatial_.plan();
  record.traced = options.keep_trace;
  record.predictions.resize(batch.size());
  if (options.keep_trace) record.traces.resize(batch.size());
  parallel_for(batch.size(), options.threads, [&](std::size_t i) {
    std::mt19937_64 rng(derive_seed(options.seed, i));
    record.predictions[i] =
        run_sample(record.plan, batch[i], options, rng, options.keep_trace ? &record.traces[i] : nullptr);
  });
  return record;
}

GradSet Model::backward(const ForwardRecord& record, std::span<const std::vector<Mat>> d_predictions,
                        std::size_t threads) const {
  if (!record.traced) throw UsageError("Model::backward: forward pass was run without keep_trace");
  if (d_predictions.size() != record.predictions.size()) {
    throw DimensionError("Model::backward: gradient batch size does not match the forward record");
  }
  const std::size_t batch = record.predictions.size();
  std::vector<GradSet> sample_grads(batch);
  std::vector<InterGatLayer::Accum> sample_accum(batch);

  parallel_for(batch, threads, [&](std::size_t s) {
    const SampleTrace& trace = record.traces[s];
    GradSet& grads = sample_grads[s];
    InterGatLayer::Accum& accum = sample_accum[s];
    accum = spatial_.make_accum();
    std::vector<Mat> dy = d_predictions[s];
    if (dy.size() != record.predictions[s].size()) {
      throw DimensionError("Model::backward: gradient horizon does not match predictions");
    }
    const std::size_t decode_steps = spec_.decode == DecodeMode::iterative ? dy.size() - 1 : 0;
    const std::size_t encode_steps = trace.steps.size() - decode_steps;

    auto back_step = [&](const StepTrace& st, const Mat& dh) {
      GruStepGrads g = gru_step_backward(gru_, st.gru, dh, grads, kGruPrefix);
      const Mat de = hadamard(g.dx, st.dropout);
      Mat dx = spatial_.backward(record.plan, st.spatial, de, accum);
      return std::pair{std::move(g.dh_prev), std::move(dx)};
    };

    Mat dh;
    if (spec_.decode == DecodeMode::one_shot) {
      dh = decoder_.backward(trace.readout_inputs.front(), hconcat(dy), grads, kDecoderPrefix);
    } else {
      dh = Mat(spec_.spatial.nodes, spec_.hidden);
      for (std::size_t t = dy.size(); t-- > 0;) {
        dh += decoder_.backward(trace.readout_inputs[t], dy[t], grads, kDecoderPrefix);
        if (t == 0) break;
        const StepTrace& st = trace.steps[encode_steps + t - 1];
        auto [dh_prev, dx] = back_step(st, dh);
        dh = std::move(dh_prev);
        if (st.fed_prediction >= 0) dy[static_cast<std::size_t>(st.fed_prediction)] += dx;
      }
    }
    for (std::size_t t = encode_steps; t-- > 0;) dh = back_step(trace.steps[t], dh).first;
  });

  GradSet total;
  for (const auto& [name, m] : parameters()) total.slot(name, m->rows(), m->cols());
  InterGatLayer::Accum accum = spatial_.make_accum();
  for (std::size_t s = 0; s < batch; ++s) {
    total += sample_grads[s];
    accum += sample_accum[s];
  }
  spatial_.finish_backward(record.plan, accum, total);
  return total;
}

std::vector<Mat> Model::predict(const std::vector<Mat>& inputs) const {
  Sample sample{inputs, {}};
  StepOptions options;
  options.keep_trace = false;
  return forward(std::span<const Sample>(&sample, 1), options).predictions.front();
}

}  // namespace intergat
