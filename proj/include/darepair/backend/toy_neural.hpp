#pragma once

#include <map>
#include <optional>

#include <Eigen/Core>

#include "darepair/backend/model.hpp"

namespace darepair::backend {

struct ToyNeuralConfig {
  int embed_dim = 48;
  int encoder_layers = 2;
  int decoder_layers = 2;
  int max_vocab = 4096;
  int max_output_tokens = 48;
  double learning_rate = 0.02;
  double grad_clip = 5.0;

  void validate() const;
};

/// Word-level encoder-decoder with dot-product attention, trained by
/// teacher forcing with Adam. Small enough to train in seconds on a CPU yet
/// a real learner: parameters live in named groups, any group can be frozen,
/// and adapters can be installed after every encoder/decoder layer.
///
/// The vocabulary is built once, on the first training call, and is fixed
/// afterwards; unseen tokens map to <unk>.
class ToyNeuralBackend final : public Backend {
 public:
  explicit ToyNeuralBackend(uint64_t seed = 0, ToyNeuralConfig config = {});

  std::string backend_id() const override { return "toy-neural"; }
  uint64_t seed() const override { return seed_; }
  bool trained() const override { return trained_; }

  Prediction generate(const std::string& input) const override;

  std::vector<ParameterGroupInfo> parameter_inventory() const override;
  void set_frozen(const std::string& pattern, bool frozen) override;
  void begin_training(const std::vector<TrainPair>& full_train) override;
  double run_epoch(const std::vector<TrainPair>& pairs, const TrainConfig& config,
                   int epoch) override;
  void serialize(std::ostream& out) const override;
  void deserialize(std::istream& in) override;
  std::unique_ptr<Backend> clone() const override;

  std::vector<std::string> adapter_insertion_points() const override;
  void install_adapter(const std::string& point, adapter::AdapterLayer layer) override;

  nlohmann::json describe() const override;

  /// Builds the vocabulary and allocates weights when not yet done.
  void ensure_initialized(const std::vector<TrainPair>& pairs);

  int embed_dim() const { return config_.embed_dim; }
  size_t vocab_size() const { return vocab_.size(); }
  const ToyNeuralConfig& config() const { return config_; }

  /// Greedy decode with the per-step logits exposed (test instrumentation).
  struct DecodeTrace {
    Prediction prediction;
    std::vector<Eigen::VectorXd> logits;
    std::vector<int> token_ids;
  };
  DecodeTrace decode_with_trace(const std::string& input) const;

  /// Mean cross-entropy of one pair, optionally accumulating gradients;
  /// exposed for finite-difference gradient checks.
  double pair_loss(const std::string& input, const std::string& target, bool accumulate_grads);

  std::vector<std::pair<std::string, std::vector<double>>> flattened_groups() const;
  void assign_group(const std::string& name, const std::vector<double>& values);
  std::vector<std::pair<std::string, std::vector<double>>> flattened_gradients() const;
  void zero_gradients();

 private:
  struct Cell {
    Eigen::MatrixXd wx;  // d x d
    Eigen::MatrixXd wh;  // d x d
    Eigen::VectorXd b;   // d
  };

  struct Weights {
    Eigen::MatrixXd embed;   // V x d
    std::vector<Cell> enc;
    std::vector<Cell> dec;
    Eigen::MatrixXd attn_w;  // d x 2d
    Eigen::VectorXd attn_b;  // d
    Eigen::MatrixXd out_w;   // V x d
    Eigen::VectorXd out_b;   // V
    std::map<std::string, adapter::AdapterLayer> adapters;
  };

  struct TensorRef {
    std::string group;
    double* data;
    size_t size;
  };

  struct EncoderTrace;

  static std::vector<TensorRef> tensor_refs(Weights& w);
  static std::vector<TensorRef> tensor_refs(const Weights& w);

  std::vector<int> tokenize_ids(const std::string& text) const;
  std::string detokenize(const std::vector<int>& ids) const;
  void build_vocab(const std::vector<TrainPair>& pairs);
  void allocate(Weights& w, bool zero) const;
  void init_weights();

  EncoderTrace run_encoder(const std::vector<int>& xs, bool keep_trace) const;
  double forward_backward(const std::vector<int>& xs, const std::vector<int>& ys,
                          bool accumulate);
  void apply_adam(int samples_in_batch, double lr);
  const adapter::AdapterLayer* adapter_at(const std::string& point) const;

  uint64_t seed_;
  ToyNeuralConfig config_;
  bool trained_ = false;
  bool allocated_ = false;

  std::vector<std::string> vocab_;              // index -> token
  std::map<std::string, int> token_ids_;

  Weights w_;
  Weights g_;                                   // gradient accumulators
  Weights adam_m_;
  Weights adam_v_;
  long long adam_t_ = 0;
  std::map<std::string, bool> frozen_;          // group name -> flag
};

}  // namespace darepair::backend
