#include "darepair/backend/factory.hpp"

#include "darepair/backend/memorizer.hpp"
#include "darepair/common/error.hpp"

namespace darepair::backend {

std::unique_ptr<Backend> make_backend(const std::string& backend_id, uint64_t seed,
                                      const std::optional<ToyNeuralConfig>& toy_config) {
  if (backend_id == "memorizer") return std::make_unique<MemorizerBackend>(seed);
  if (backend_id == "toy-neural")
    return std::make_unique<ToyNeuralBackend>(seed, toy_config.value_or(ToyNeuralConfig{}));
  throw ConfigError("unknown backend id '" + backend_id + "'");
}

ToyNeuralConfig toy_config_from_json(const nlohmann::json& j) {
  ToyNeuralConfig config;
  config.embed_dim = j.value("embed_dim", config.embed_dim);
  config.encoder_layers = j.value("encoder_layers", config.encoder_layers);
  config.decoder_layers = j.value("decoder_layers", config.decoder_layers);
  config.max_vocab = j.value("max_vocab", config.max_vocab);
  config.max_output_tokens = j.value("max_output_tokens", config.max_output_tokens);
  config.learning_rate = j.value("learning_rate", config.learning_rate);
  config.grad_clip = j.value("grad_clip", config.grad_clip);
  config.validate();
  return config;
}

nlohmann::json toy_config_to_json(const ToyNeuralConfig& config) {
  return {{"embed_dim", config.embed_dim},
          {"encoder_layers", config.encoder_layers},
          {"decoder_layers", config.decoder_layers},
          {"max_vocab", config.max_vocab},
          {"max_output_tokens", config.max_output_tokens},
          {"learning_rate", config.learning_rate},
          {"grad_clip", config.grad_clip}};
}

}  // namespace darepair::backend
