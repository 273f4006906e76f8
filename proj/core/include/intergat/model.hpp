#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "intergat/dropout.hpp"
#include "intergat/gru.hpp"
#include "intergat/spatial.hpp"

namespace intergat {

enum class DecodeMode {
  iterative,  // re-embed each prediction (or forced truth) and step the GRU again
  one_shot,   // read all horizon frames out of the final encoder state at once
};

std::string_view to_string(DecodeMode m);
DecodeMode parse_decode_mode(std::string_view s);

struct TeacherForcingPolicy {
  enum class Kind { off, always, scheduled };
  Kind kind = Kind::scheduled;
  double initial = 1.0;
  double decay_per_epoch = 0.02;

  /// Forcing probability at a zero-based epoch, clamped to [0, 1].
  double probability(std::size_t epoch) const;
};

std::string_view to_string(TeacherForcingPolicy::Kind k);
TeacherForcingPolicy::Kind parse_forcing_kind(std::string_view s);

struct ModelSpec {
  SpatialConfig spatial;
  std::size_t hidden = 128;
  bool gate_bias = false;
  double dropout = 0.3;
  std::size_t horizon = 1;
  DecodeMode decode = DecodeMode::iterative;
};

/// One training or evaluation example: `inputs` are the history frames (N x F each),
/// `targets` the following horizon frames (may be empty for pure prediction).
struct Sample {
  std::vector<Mat> inputs;
  std::vector<Mat> targets;
};

struct StepOptions {
  Mode mode = Mode::eval;
  double forcing_probability = 0.0;
  /// Seeds dropout masks and forcing draws; sample i uses a stream derived from (seed, i).
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  bool keep_trace = true;
};

/// Intermediates of one spatial + GRU step.
struct StepTrace {
  InterGatLayer::FrameCache spatial;
  Mat dropout;
  GruCache gru;
  /// Index of the prediction fed back as this step's input, or -1 for observed/forced frames.
  int fed_prediction = -1;
};

struct SampleTrace {
  std::vector<StepTrace> steps;     // encoder steps followed by decoder steps
  std::vector<Mat> readout_inputs;  // hidden state each prediction was read from
};

struct ForwardRecord {
  InterGatLayer::Plan plan;
  std::vector<std::vector<Mat>> predictions;  // [sample][horizon step] N x F
  std::vector<SampleTrace> traces;            // empty unless keep_trace
  bool traced = false;
};

/// Spatial layer + GRU encoder/decoder + linear readout.
class Model {
 public:
  Model() = default;
  Model(const ModelSpec& spec, InteractionSource source, std::uint64_t seed);

  const ModelSpec& spec() const { return spec_; }
  InterGatLayer& spatial() { return spatial_; }
  const InterGatLayer& spatial() const { return spatial_; }
  GruCell& gru() { return gru_; }
  const GruCell& gru() const { return gru_; }
  Decoder& decoder() { return decoder_; }
  const Decoder& decoder() const { return decoder_; }

  /// All learnable tensors in a fixed order.
  std::vector<ParamRef> parameters();
  std::vector<std::pair<std::string, const Mat*>> parameters() const;
  std::size_t parameter_count() const;

  ForwardRecord forward(std::span<const Sample> batch, const StepOptions& options) const;
  /// Gradients of Σ <d_predictions, predictions> for every learnable parameter.
  /// Throws UsageError if `record` was produced without keep_trace.
  GradSet backward(const ForwardRecord& record, std::span<const std::vector<Mat>> d_predictions,
                   std::size_t threads = 1) const;

  /// Eval-mode prediction of the horizon frames that follow `inputs`.
  std::vector<Mat> predict(const std::vector<Mat>& inputs) const;

  /// Embeds one frame and applies the dropout mask for `mode`.
  Mat embed(const InterGatLayer::Plan& plan, const Mat& frame, Mode mode, std::mt19937_64& rng) const;

  /// Multi-step decode from encoder state `h`. At each step after the first the next
  /// input is the ground-truth frame with probability `forcing_probability` (training
  /// mode only), otherwise the previous prediction. Throws UsageError when forcing is
  /// possible and `truth` is shorter than horizon - 1.
  std::vector<Mat> decode_multi_step(const InterGatLayer::Plan& plan, Mat h, std::size_t horizon,
                                     double forcing_probability, const std::vector<Mat>* truth,
                                     Mode mode, std::mt19937_64& rng) const;

 private:
  std::vector<Mat> run_sample(const InterGatLayer::Plan& plan, const Sample& sample, const StepOptions& options,
                              std::mt19937_64& rng, SampleTrace* trace) const;

  ModelSpec spec_;
  InterGatLayer spatial_;
  GruCell gru_;
  Decoder decoder_;
};

/// Stream seed for sample `index` under a base seed (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace intergat
