#include "darepair/backend/toy_neural.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "darepair/common/error.hpp"
#include "darepair/common/hash.hpp"
#include "darepair/common/rng.hpp"
#include "darepair/common/text.hpp"

namespace darepair::backend {

namespace {

constexpr int kPad = 0;
constexpr int kBos = 1;
constexpr int kEos = 2;
constexpr int kUnk = 3;
constexpr int kSpecials = 4;
constexpr uint64_t kMagic = 0x544F594E45555231ULL;  // "TOYNEUR1"

Eigen::VectorXd softmax(const Eigen::VectorXd& x) {
  Eigen::VectorXd shifted = x.array() - x.maxCoeff();
  Eigen::VectorXd e = shifted.array().exp();
  return e / e.sum();
}

void write_u64(std::ostream& out, uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(buf), 8);
}

uint64_t read_u64(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  if (!in) throw Error("toy-neural: truncated payload");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

void ToyNeuralConfig::validate() const {
  if (embed_dim < 2) throw ConfigError("toy-neural: embed_dim must be >= 2");
  if (encoder_layers < 1 || decoder_layers < 1)
    throw ConfigError("toy-neural: needs at least one encoder and one decoder layer");
  if (max_vocab <= kSpecials) throw ConfigError("toy-neural: max_vocab too small");
  if (max_output_tokens < 1) throw ConfigError("toy-neural: max_output_tokens must be >= 1");
  if (learning_rate <= 0.0) throw ConfigError("toy-neural: learning_rate must be > 0");
}

struct ToyNeuralBackend::EncoderTrace {
  // inputs[l][t]: input of layer l at position t; inputs[L] are the top states.
  std::vector<std::vector<Eigen::VectorXd>> inputs;
  // hidden[l][t]: pre-adapter recurrent state of layer l.
  std::vector<std::vector<Eigen::VectorXd>> hidden;
};

ToyNeuralBackend::ToyNeuralBackend(uint64_t seed, ToyNeuralConfig config)
    : seed_(seed), config_(config) {
  config_.validate();
}

std::vector<ToyNeuralBackend::TensorRef> ToyNeuralBackend::tensor_refs(Weights& w) {
  std::vector<TensorRef> refs;
  auto add = [&refs](const std::string& group, auto& m) {
    refs.push_back({group, m.data(), static_cast<size_t>(m.size())});
  };
  add("embedding", w.embed);
  for (size_t l = 0; l < w.enc.size(); ++l) {
    std::string group = "encoder/layer" + std::to_string(l);
    add(group, w.enc[l].wx);
    add(group, w.enc[l].wh);
    add(group, w.enc[l].b);
  }
  for (size_t l = 0; l < w.dec.size(); ++l) {
    std::string group = "decoder/layer" + std::to_string(l);
    add(group, w.dec[l].wx);
    add(group, w.dec[l].wh);
    add(group, w.dec[l].b);
  }
  add("attention/combine", w.attn_w);
  add("attention/combine", w.attn_b);
  add("output/projection", w.out_w);
  add("output/projection", w.out_b);
  for (auto& [point, layer] : w.adapters) {
    std::string group = "adapter/" + point;
    add(group, layer.down());
    add(group, layer.down_bias());
    add(group, layer.up());
    add(group, layer.up_bias());
    add(group, layer.norm_gain());
    add(group, layer.norm_bias());
  }
  return refs;
}

std::vector<ToyNeuralBackend::TensorRef> ToyNeuralBackend::tensor_refs(const Weights& w) {
  return tensor_refs(const_cast<Weights&>(w));
}

std::vector<int> ToyNeuralBackend::tokenize_ids(const std::string& text) const {
  std::vector<int> ids;
  for (const std::string& token : split_whitespace(text)) {
    auto it = token_ids_.find(token);
    ids.push_back(it == token_ids_.end() ? kUnk : it->second);
  }
  if (ids.empty()) ids.push_back(kUnk);
  return ids;
}

std::string ToyNeuralBackend::detokenize(const std::vector<int>& ids) const {
  std::vector<std::string> tokens;
  for (int id : ids) {
    if (id == kEos || id == kPad || id == kBos) continue;
    tokens.push_back(vocab_[static_cast<size_t>(id)]);
  }
  return join(tokens, " ");
}

void ToyNeuralBackend::build_vocab(const std::vector<TrainPair>& pairs) {
  std::map<std::string, size_t> counts;
  for (const auto& [input, target] : pairs) {
    for (const auto& t : split_whitespace(input)) ++counts[t];
    for (const auto& t : split_whitespace(target)) ++counts[t];
  }
  std::vector<std::pair<std::string, size_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  vocab_ = {"<pad>", "<bos>", "<eos>", "<unk>"};
  for (const auto& [token, _] : ranked) {
    if (vocab_.size() >= static_cast<size_t>(config_.max_vocab)) break;
    vocab_.push_back(token);
  }
  token_ids_.clear();
  for (size_t i = 0; i < vocab_.size(); ++i) token_ids_[vocab_[i]] = static_cast<int>(i);
}

void ToyNeuralBackend::allocate(Weights& w, bool zero) const {
  const int d = config_.embed_dim;
  const auto v = static_cast<Eigen::Index>(vocab_.size());
  auto mat = [zero](Eigen::Index r, Eigen::Index c) {
    return zero ? Eigen::MatrixXd::Zero(r, c).eval() : Eigen::MatrixXd(r, c);
  };
  auto vec = [zero](Eigen::Index n) {
    return zero ? Eigen::VectorXd::Zero(n).eval() : Eigen::VectorXd(n);
  };
  w.embed = mat(v, d);
  w.enc.assign(static_cast<size_t>(config_.encoder_layers), {});
  w.dec.assign(static_cast<size_t>(config_.decoder_layers), {});
  for (auto& cell : w.enc) {
    cell.wx = mat(d, d);
    cell.wh = mat(d, d);
    cell.b = vec(d);
  }
  for (auto& cell : w.dec) {
    cell.wx = mat(d, d);
    cell.wh = mat(d, d);
    cell.b = vec(d);
  }
  w.attn_w = mat(d, 2 * d);
  w.attn_b = vec(d);
  w.out_w = mat(v, d);
  w.out_b = vec(v);
}

void ToyNeuralBackend::init_weights() {
  SplitMix64 rng(sub_seed(seed_, "init"));
  const int d = config_.embed_dim;
  const auto v = static_cast<double>(vocab_.size());
  auto fill = [&rng](Eigen::MatrixXd& m, double r) {
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-r, r);
  };
  fill(w_.embed, 0.1);
  double r_cell = std::sqrt(6.0 / (2.0 * d));
  for (auto& cell : w_.enc) {
    fill(cell.wx, r_cell);
    fill(cell.wh, r_cell);
    cell.b.setZero();
  }
  for (auto& cell : w_.dec) {
    fill(cell.wx, r_cell);
    fill(cell.wh, r_cell);
    cell.b.setZero();
  }
  fill(w_.attn_w, std::sqrt(6.0 / (3.0 * d)));
  w_.attn_b.setZero();
  fill(w_.out_w, std::sqrt(6.0 / (v + d)));
  w_.out_b.setZero();
}

void ToyNeuralBackend::ensure_initialized(const std::vector<TrainPair>& pairs) {
  if (allocated_) return;
  if (pairs.empty()) throw Error("toy-neural: cannot initialize from empty training data");
  build_vocab(pairs);
  std::map<std::string, adapter::AdapterLayer> pending = std::move(w_.adapters);
  allocate(w_, false);
  init_weights();
  w_.adapters = std::move(pending);
  allocate(g_, true);
  allocate(adam_m_, true);
  allocate(adam_v_, true);
  for (const auto& [point, layer] : w_.adapters) {
    adapter::AdapterLayer zeroed = layer;
    zeroed.set_zero();
    g_.adapters[point] = zeroed;
    adam_m_.adapters[point] = zeroed;
    adam_v_.adapters[point] = zeroed;
  }
  adam_t_ = 0;
  allocated_ = true;
}

ToyNeuralBackend::EncoderTrace ToyNeuralBackend::run_encoder(const std::vector<int>& xs,
                                                             bool /*keep_trace*/) const {
  const size_t S = xs.size();
  const auto layers = static_cast<size_t>(config_.encoder_layers);
  EncoderTrace trace;
  trace.inputs.assign(layers + 1, std::vector<Eigen::VectorXd>(S));
  trace.hidden.assign(layers, std::vector<Eigen::VectorXd>(S));
  for (size_t t = 0; t < S; ++t) trace.inputs[0][t] = w_.embed.row(xs[t]).transpose();
  for (size_t l = 0; l < layers; ++l) {
    const Cell& cell = w_.enc[l];
    const adapter::AdapterLayer* ad = adapter_at("encoder/layer" + std::to_string(l));
    Eigen::VectorXd h_prev = Eigen::VectorXd::Zero(config_.embed_dim);
    for (size_t t = 0; t < S; ++t) {
      Eigen::VectorXd h = (cell.wx * trace.inputs[l][t] + cell.wh * h_prev + cell.b)
                              .array()
                              .tanh();
      trace.hidden[l][t] = h;
      trace.inputs[l + 1][t] = ad ? ad->apply(h) : h;
      h_prev = h;
    }
  }
  return trace;
}

const adapter::AdapterLayer* ToyNeuralBackend::adapter_at(const std::string& point) const {
  auto it = w_.adapters.find(point);
  return it == w_.adapters.end() ? nullptr : &it->second;
}

double ToyNeuralBackend::forward_backward(const std::vector<int>& xs, const std::vector<int>& ys,
                                          bool accumulate) {
  const size_t S = xs.size();
  const size_t T = ys.size();
  const int d = config_.embed_dim;
  const auto dec_layers = static_cast<size_t>(config_.decoder_layers);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));

  EncoderTrace enc = run_encoder(xs, accumulate);
  const auto& enc_top = enc.inputs.back();
  const Eigen::VectorXd enc_final = enc_top[S - 1];

  // Decoder forward (teacher forcing).
  std::vector<int> prev(T);
  for (size_t j = 0; j < T; ++j) prev[j] = j == 0 ? kBos : ys[j - 1];

  std::vector<std::vector<Eigen::VectorXd>> dec_inputs(dec_layers + 1,
                                                       std::vector<Eigen::VectorXd>(T));
  std::vector<std::vector<Eigen::VectorXd>> dec_hidden(dec_layers,
                                                       std::vector<Eigen::VectorXd>(T));
  for (size_t j = 0; j < T; ++j) dec_inputs[0][j] = w_.embed.row(prev[j]).transpose();
  for (size_t l = 0; l < dec_layers; ++l) {
    const Cell& cell = w_.dec[l];
    const adapter::AdapterLayer* ad = adapter_at("decoder/layer" + std::to_string(l));
    Eigen::VectorXd h_prev = enc_final;
    for (size_t j = 0; j < T; ++j) {
      Eigen::VectorXd h =
          (cell.wx * dec_inputs[l][j] + cell.wh * h_prev + cell.b).array().tanh();
      dec_hidden[l][j] = h;
      dec_inputs[l + 1][j] = ad ? ad->apply(h) : h;
      h_prev = h;
    }
  }

  // Attention + output head.
  std::vector<Eigen::VectorXd> alphas(T), contexts(T), combined(T), probs(T);
  double loss = 0.0;
  for (size_t j = 0; j < T; ++j) {
    const Eigen::VectorXd& q = dec_inputs[dec_layers][j];
    Eigen::VectorXd scores(S);
    for (size_t t = 0; t < S; ++t) scores[static_cast<Eigen::Index>(t)] = q.dot(enc_top[t]) * scale;
    alphas[j] = softmax(scores);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(d);
    for (size_t t = 0; t < S; ++t) c += alphas[j][static_cast<Eigen::Index>(t)] * enc_top[t];
    contexts[j] = c;
    Eigen::VectorXd z(2 * d);
    z << q, c;
    combined[j] = (w_.attn_w * z + w_.attn_b).array().tanh();
    Eigen::VectorXd logits = w_.out_w * combined[j] + w_.out_b;
    probs[j] = softmax(logits);
    loss -= std::log(std::max(probs[j][ys[j]], 1e-300));
  }
  loss /= static_cast<double>(T);
  if (!accumulate) return loss;

  // ---- Backward ----
  std::vector<Eigen::VectorXd> d_enc_top(S, Eigen::VectorXd::Zero(d));
  std::vector<std::vector<Eigen::VectorXd>> d_dec_inputs(
      dec_layers + 1, std::vector<Eigen::VectorXd>(T, Eigen::VectorXd::Zero(d)));
  Eigen::VectorXd d_enc_final = Eigen::VectorXd::Zero(d);

  for (size_t j = 0; j < T; ++j) {
    Eigen::VectorXd d_logits = probs[j];
    d_logits[ys[j]] -= 1.0;
    d_logits /= static_cast<double>(T);

    g_.out_w += d_logits * combined[j].transpose();
    g_.out_b += d_logits;
    Eigen::VectorXd d_comb = w_.out_w.transpose() * d_logits;
    Eigen::VectorXd d_pre =
        (d_comb.array() * (1.0 - combined[j].array().square())).matrix();
    const Eigen::VectorXd& q = dec_inputs[dec_layers][j];
    Eigen::VectorXd z(2 * d);
    z << q, contexts[j];
    g_.attn_w += d_pre * z.transpose();
    g_.attn_b += d_pre;
    Eigen::VectorXd dz = w_.attn_w.transpose() * d_pre;
    Eigen::VectorXd dq = dz.head(d);
    Eigen::VectorXd dc = dz.tail(d);

    // Attention backward.
    Eigen::VectorXd d_alpha(S);
    for (size_t t = 0; t < S; ++t) {
      d_alpha[static_cast<Eigen::Index>(t)] = dc.dot(enc_top[t]);
      d_enc_top[t] += alphas[j][static_cast<Eigen::Index>(t)] * dc;
    }
    double mix = alphas[j].dot(d_alpha);
    for (size_t t = 0; t < S; ++t) {
      double d_score = alphas[j][static_cast<Eigen::Index>(t)] *
                       (d_alpha[static_cast<Eigen::Index>(t)] - mix);
      dq += d_score * scale * enc_top[t];
      d_enc_top[t] += d_score * scale * q;
    }
    d_dec_inputs[dec_layers][j] += dq;
  }

  // Decoder layers backward.
  for (size_t l = dec_layers; l-- > 0;) {
    const Cell& cell = w_.dec[l];
    const std::string point = "decoder/layer" + std::to_string(l);
    const adapter::AdapterLayer* ad = adapter_at(point);
    std::vector<Eigen::VectorXd> dh(T);
    for (size_t j = 0; j < T; ++j) {
      dh[j] = ad ? ad->backward(dec_hidden[l][j], d_dec_inputs[l + 1][j], g_.adapters.at(point))
                 : d_dec_inputs[l + 1][j];
    }
    Eigen::VectorXd carry = Eigen::VectorXd::Zero(d);
    for (size_t j = T; j-- > 0;) {
      Eigen::VectorXd total = dh[j] + carry;
      Eigen::VectorXd d_pre =
          (total.array() * (1.0 - dec_hidden[l][j].array().square())).matrix();
      g_.dec[l].wx += d_pre * dec_inputs[l][j].transpose();
      const Eigen::VectorXd& h_prev = j > 0 ? dec_hidden[l][j - 1] : enc_final;
      g_.dec[l].wh += d_pre * h_prev.transpose();
      g_.dec[l].b += d_pre;
      d_dec_inputs[l][j] += cell.wx.transpose() * d_pre;
      carry = cell.wh.transpose() * d_pre;
      if (j == 0) d_enc_final += carry;
    }
  }
  for (size_t j = 0; j < T; ++j) g_.embed.row(prev[j]) += d_dec_inputs[0][j].transpose();
  d_enc_top[S - 1] += d_enc_final;

  // Encoder layers backward.
  const auto enc_layers = static_cast<size_t>(config_.encoder_layers);
  std::vector<std::vector<Eigen::VectorXd>> d_inputs(
      enc_layers + 1, std::vector<Eigen::VectorXd>(S, Eigen::VectorXd::Zero(d)));
  d_inputs[enc_layers] = d_enc_top;
  for (size_t l = enc_layers; l-- > 0;) {
    const Cell& cell = w_.enc[l];
    const std::string point = "encoder/layer" + std::to_string(l);
    const adapter::AdapterLayer* ad = adapter_at(point);
    std::vector<Eigen::VectorXd> dh(S);
    for (size_t t = 0; t < S; ++t) {
      dh[t] = ad ? ad->backward(enc.hidden[l][t], d_inputs[l + 1][t], g_.adapters.at(point))
                 : d_inputs[l + 1][t];
    }
    Eigen::VectorXd carry = Eigen::VectorXd::Zero(d);
    for (size_t t = S; t-- > 0;) {
      Eigen::VectorXd total = dh[t] + carry;
      Eigen::VectorXd d_pre =
          (total.array() * (1.0 - enc.hidden[l][t].array().square())).matrix();
      g_.enc[l].wx += d_pre * enc.inputs[l][t].transpose();
      if (t > 0) {
        g_.enc[l].wh += d_pre * enc.hidden[l][t - 1].transpose();
        carry = cell.wh.transpose() * d_pre;
      } else {
        carry.setZero();
      }
      g_.enc[l].b += d_pre;
      d_inputs[l][t] += cell.wx.transpose() * d_pre;
    }
  }
  for (size_t t = 0; t < S; ++t) g_.embed.row(xs[t]) += d_inputs[0][t].transpose();

  return loss;
}

double ToyNeuralBackend::pair_loss(const std::string& input, const std::string& target,
                                   bool accumulate_grads) {
  if (!allocated_) throw Error("toy-neural: model not initialized");
  std::vector<int> xs = tokenize_ids(input);
  std::vector<int> ys = tokenize_ids(target);
  if (ys.size() == 1 && ys[0] == kUnk && split_whitespace(target).empty()) ys.clear();
  ys.push_back(kEos);
  return forward_backward(xs, ys, accumulate_grads);
}

void ToyNeuralBackend::apply_adam(int samples_in_batch, double lr) {
  auto grads = tensor_refs(g_);
  double inv = 1.0 / static_cast<double>(samples_in_batch);
  double norm_sq = 0.0;
  for (auto& ref : grads) {
    for (size_t i = 0; i < ref.size; ++i) {
      ref.data[i] *= inv;
      norm_sq += ref.data[i] * ref.data[i];
    }
  }
  double norm = std::sqrt(norm_sq);
  double clip_scale = norm > config_.grad_clip ? config_.grad_clip / norm : 1.0;

  ++adam_t_;
  const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  double bc1 = 1.0 - std::pow(beta1, static_cast<double>(adam_t_));
  double bc2 = 1.0 - std::pow(beta2, static_cast<double>(adam_t_));

  auto weights = tensor_refs(w_);
  auto ms = tensor_refs(adam_m_);
  auto vs = tensor_refs(adam_v_);
  for (size_t r = 0; r < weights.size(); ++r) {
    auto frozen_it = frozen_.find(weights[r].group);
    bool frozen = frozen_it != frozen_.end() && frozen_it->second;
    if (!frozen) {
      for (size_t i = 0; i < weights[r].size; ++i) {
        double g = grads[r].data[i] * clip_scale;
        double& m = ms[r].data[i];
        double& v = vs[r].data[i];
        m = beta1 * m + (1.0 - beta1) * g;
        v = beta2 * v + (1.0 - beta2) * g * g;
        weights[r].data[i] -= lr * (m / bc1) / (std::sqrt(v / bc2) + eps);
      }
    }
    std::memset(grads[r].data, 0, grads[r].size * sizeof(double));
  }
}

void ToyNeuralBackend::begin_training(const std::vector<TrainPair>& full_train) {
  ensure_initialized(full_train);
}

double ToyNeuralBackend::run_epoch(const std::vector<TrainPair>& pairs, const TrainConfig& config,
                                   int epoch) {
  if (pairs.empty()) throw Error("toy-neural: empty epoch");
  ensure_initialized(pairs);

  double lr = config_.learning_rate;
  if (config.lr_schedule == "linear-decay") {
    double frac = 1.0 - static_cast<double>(epoch - 1) / static_cast<double>(config.max_epochs);
    lr *= std::max(0.1, frac);
  }

  double total_loss = 0.0;
  int in_batch = 0;
  for (const auto& [input, target] : pairs) {
    total_loss += pair_loss(input, target, true);
    if (++in_batch == config.batch_size) {
      apply_adam(in_batch, lr);
      in_batch = 0;
    }
  }
  if (in_batch > 0) apply_adam(in_batch, lr);
  trained_ = true;
  return total_loss / static_cast<double>(pairs.size());
}

Prediction ToyNeuralBackend::generate(const std::string& input) const {
  return decode_with_trace(input).prediction;
}

ToyNeuralBackend::DecodeTrace ToyNeuralBackend::decode_with_trace(const std::string& input) const {
  if (!trained_) throw Error("toy-neural: generate on an untrained model");
  const int d = config_.embed_dim;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  std::vector<int> xs = tokenize_ids(input);
  EncoderTrace enc = run_encoder(xs, false);
  const auto& enc_top = enc.inputs.back();

  DecodeTrace trace;
  const auto dec_layers = static_cast<size_t>(config_.decoder_layers);
  std::vector<Eigen::VectorXd> state(dec_layers, enc_top.back());
  std::vector<const adapter::AdapterLayer*> ads(dec_layers);
  for (size_t l = 0; l < dec_layers; ++l)
    ads[l] = adapter_at("decoder/layer" + std::to_string(l));

  int prev = kBos;
  double logprob_sum = 0.0;
  int steps = 0;
  for (int step = 0; step < config_.max_output_tokens; ++step) {
    Eigen::VectorXd in = w_.embed.row(prev).transpose();
    for (size_t l = 0; l < dec_layers; ++l) {
      Eigen::VectorXd h = (w_.dec[l].wx * in + w_.dec[l].wh * state[l] + w_.dec[l].b)
                              .array()
                              .tanh();
      state[l] = h;
      in = ads[l] ? ads[l]->apply(h) : h;
    }
    Eigen::VectorXd scores(static_cast<Eigen::Index>(enc_top.size()));
    for (size_t t = 0; t < enc_top.size(); ++t)
      scores[static_cast<Eigen::Index>(t)] = in.dot(enc_top[t]) * scale;
    Eigen::VectorXd alpha = softmax(scores);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(d);
    for (size_t t = 0; t < enc_top.size(); ++t)
      c += alpha[static_cast<Eigen::Index>(t)] * enc_top[t];
    Eigen::VectorXd z(2 * d);
    z << in, c;
    Eigen::VectorXd o = (w_.attn_w * z + w_.attn_b).array().tanh();
    Eigen::VectorXd logits = w_.out_w * o + w_.out_b;
    trace.logits.push_back(logits);

    Eigen::Index pick = 0;
    logits.maxCoeff(&pick);
    Eigen::VectorXd p = softmax(logits);
    logprob_sum += std::log(std::max(p[pick], 1e-300));
    ++steps;
    trace.token_ids.push_back(static_cast<int>(pick));
    if (pick == kEos) break;
    prev = static_cast<int>(pick);
  }
  trace.prediction.output_text = detokenize(trace.token_ids);
  trace.prediction.confidence = logprob_sum / std::max(1, steps);
  return trace;
}

std::vector<ParameterGroupInfo> ToyNeuralBackend::parameter_inventory() const {
  std::vector<ParameterGroupInfo> groups;
  uint64_t checksum = kFnvOffset;
  for (const auto& ref : tensor_refs(w_)) {
    if (groups.empty() || groups.back().name != ref.group) {
      groups.push_back({ref.group, 0, false, kFnvOffset});
      checksum = kFnvOffset;
    }
    groups.back().elements += ref.size;
    checksum = fnv1a(ref.data, ref.size * sizeof(double), checksum);
    groups.back().checksum = checksum;
  }
  for (auto& group : groups) {
    auto it = frozen_.find(group.name);
    group.frozen = it != frozen_.end() && it->second;
  }
  return groups;
}

void ToyNeuralBackend::set_frozen(const std::string& pattern, bool frozen) {
  size_t matched = 0;
  for (const auto& group : parameter_inventory()) {
    if (glob_match(pattern, group.name)) {
      frozen_[group.name] = frozen;
      ++matched;
    }
  }
  if (matched == 0) throw Error("pattern '" + pattern + "' matches no parameter group");
}

std::vector<std::string> ToyNeuralBackend::adapter_insertion_points() const {
  std::vector<std::string> points;
  for (int l = 0; l < config_.encoder_layers; ++l)
    points.push_back("encoder/layer" + std::to_string(l));
  for (int l = 0; l < config_.decoder_layers; ++l)
    points.push_back("decoder/layer" + std::to_string(l));
  return points;
}

void ToyNeuralBackend::install_adapter(const std::string& point, adapter::AdapterLayer layer) {
  auto points = adapter_insertion_points();
  if (std::find(points.begin(), points.end(), point) == points.end())
    throw Error("unknown adapter insertion point '" + point + "'");
  if (w_.adapters.count(point))
    throw Error("adapter already installed at '" + point + "'");
  if (layer.feature_dim() != config_.embed_dim)
    throw Error("adapter feature dim " + std::to_string(layer.feature_dim()) +
                " != hidden dim " + std::to_string(config_.embed_dim));
  adapter::AdapterLayer zeroed = layer;
  zeroed.set_zero();
  w_.adapters[point] = std::move(layer);
  g_.adapters[point] = zeroed;
  adam_m_.adapters[point] = zeroed;
  adam_v_.adapters[point] = zeroed;
  frozen_["adapter/" + point] = false;
}

void ToyNeuralBackend::serialize(std::ostream& out) const {
  nlohmann::json adapters = nlohmann::json::array();
  for (const auto& [point, layer] : w_.adapters) {
    adapters.push_back({{"point", point},
                        {"bottleneck", layer.bottleneck_dim()},
                        {"layer_norm", layer.norm_mode() == adapter::AdapterLayer::NormMode::layer_norm}});
  }
  nlohmann::json header{{"backend", backend_id()},
                        {"seed", seed_},
                        {"trained", trained_},
                        {"allocated", allocated_},
                        {"vocab", vocab_},
                        {"frozen", frozen_},
                        {"adapters", adapters},
                        {"config",
                         {{"embed_dim", config_.embed_dim},
                          {"encoder_layers", config_.encoder_layers},
                          {"decoder_layers", config_.decoder_layers},
                          {"max_vocab", config_.max_vocab},
                          {"max_output_tokens", config_.max_output_tokens},
                          {"learning_rate", config_.learning_rate},
                          {"grad_clip", config_.grad_clip}}}};
  std::string header_str = header.dump();
  write_u64(out, kMagic);
  write_u64(out, header_str.size());
  out.write(header_str.data(), static_cast<std::streamsize>(header_str.size()));
  if (allocated_) {
    for (const auto& ref : tensor_refs(w_)) {
      out.write(reinterpret_cast<const char*>(ref.data),
                static_cast<std::streamsize>(ref.size * sizeof(double)));
    }
  }
}

void ToyNeuralBackend::deserialize(std::istream& in) {
  if (read_u64(in) != kMagic) throw Error("toy-neural: corrupt payload (bad magic)");
  uint64_t header_len = read_u64(in);
  if (header_len > (1ULL << 30)) throw Error("toy-neural: corrupt payload (header length)");
  std::string header_str(header_len, '\0');
  in.read(header_str.data(), static_cast<std::streamsize>(header_len));
  if (!in) throw Error("toy-neural: truncated payload");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_str);
    if (header.at("backend").get<std::string>() != backend_id())
      throw Error("toy-neural: payload belongs to another backend");
    seed_ = header.at("seed").get<uint64_t>();
    trained_ = header.at("trained").get<bool>();
    allocated_ = header.at("allocated").get<bool>();
    vocab_ = header.at("vocab").get<std::vector<std::string>>();
    frozen_ = header.at("frozen").get<std::map<std::string, bool>>();
    const auto& c = header.at("config");
    config_.embed_dim = c.at("embed_dim").get<int>();
    config_.encoder_layers = c.at("encoder_layers").get<int>();
    config_.decoder_layers = c.at("decoder_layers").get<int>();
    config_.max_vocab = c.at("max_vocab").get<int>();
    config_.max_output_tokens = c.at("max_output_tokens").get<int>();
    config_.learning_rate = c.at("learning_rate").get<double>();
    config_.grad_clip = c.at("grad_clip").get<double>();
    config_.validate();

    token_ids_.clear();
    for (size_t i = 0; i < vocab_.size(); ++i) token_ids_[vocab_[i]] = static_cast<int>(i);

    w_ = Weights{};
    g_ = Weights{};
    adam_m_ = Weights{};
    adam_v_ = Weights{};
    adam_t_ = 0;
    if (allocated_) {
      allocate(w_, false);
      allocate(g_, true);
      allocate(adam_m_, true);
      allocate(adam_v_, true);
      for (const auto& entry : header.at("adapters")) {
        std::string point = entry.at("point").get<std::string>();
        int bottleneck = entry.at("bottleneck").get<int>();
        adapter::AdapterLayer layer =
            adapter::AdapterLayer::make(config_.embed_dim, bottleneck, 0);
        adapter::AdapterLayer zeroed = layer;
        zeroed.set_zero();
        w_.adapters[point] = std::move(layer);
        g_.adapters[point] = zeroed;
        adam_m_.adapters[point] = zeroed;
        adam_v_.adapters[point] = zeroed;
      }
      for (auto& ref : tensor_refs(w_)) {
        in.read(reinterpret_cast<char*>(ref.data),
                static_cast<std::streamsize>(ref.size * sizeof(double)));
        if (!in) throw Error("toy-neural: truncated payload (parameters)");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("toy-neural: corrupt payload: ") + e.what());
  }
}

std::unique_ptr<Backend> ToyNeuralBackend::clone() const {
  return std::make_unique<ToyNeuralBackend>(*this);
}

nlohmann::json ToyNeuralBackend::describe() const {
  return {{"embed_dim", config_.embed_dim},
          {"encoder_layers", config_.encoder_layers},
          {"decoder_layers", config_.decoder_layers},
          {"vocab_size", vocab_.size()},
          {"adapters", w_.adapters.size()}};
}

std::vector<std::pair<std::string, std::vector<double>>> ToyNeuralBackend::flattened_groups()
    const {
  std::vector<std::pair<std::string, std::vector<double>>> out;
  for (const auto& ref : tensor_refs(w_)) {
    if (out.empty() || out.back().first != ref.group) out.push_back({ref.group, {}});
    out.back().second.insert(out.back().second.end(), ref.data, ref.data + ref.size);
  }
  return out;
}

void ToyNeuralBackend::assign_group(const std::string& name, const std::vector<double>& values) {
  size_t offset = 0;
  bool found = false;
  for (auto& ref : tensor_refs(w_)) {
    if (ref.group != name) continue;
    found = true;
    if (offset + ref.size > values.size()) throw Error("assign_group: too few values");
    std::copy(values.begin() + static_cast<ptrdiff_t>(offset),
              values.begin() + static_cast<ptrdiff_t>(offset + ref.size), ref.data);
    offset += ref.size;
  }
  if (!found) throw Error("assign_group: no group '" + name + "'");
  if (offset != values.size()) throw Error("assign_group: too many values");
}

std::vector<std::pair<std::string, std::vector<double>>> ToyNeuralBackend::flattened_gradients()
    const {
  std::vector<std::pair<std::string, std::vector<double>>> out;
  for (const auto& ref : tensor_refs(g_)) {
    if (out.empty() || out.back().first != ref.group) out.push_back({ref.group, {}});
    out.back().second.insert(out.back().second.end(), ref.data, ref.data + ref.size);
  }
  return out;
}

void ToyNeuralBackend::zero_gradients() {
  for (auto& ref : tensor_refs(g_)) std::memset(ref.data, 0, ref.size * sizeof(double));
}

}  // namespace darepair::backend
