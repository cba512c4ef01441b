#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace darepair::adapter {

/// Bottleneck adapter configuration. bottleneck_dim <= 0 asks for the
/// default d/4 (at least 1) at insertion time.
struct AdapterSpec {
  int bottleneck_dim = 0;
  std::vector<std::string> insertion_points;  // empty = every point the backend exposes
  uint64_t init_seed = 0;
};

/// Residual bottleneck module: h + up(relu(down(norm(h)))).
/// The up-projection (and its bias) start at zero, so a freshly inserted
/// layer is the identity map.
class AdapterLayer {
 public:
  enum class NormMode { identity, layer_norm };

  AdapterLayer() = default;
  AdapterLayer(Eigen::MatrixXd down, Eigen::VectorXd down_bias, Eigen::MatrixXd up,
               Eigen::VectorXd up_bias, NormMode norm_mode);

  /// Seeded construction: down random uniform, up zero, layer norm affine at
  /// identity (gain 1, bias 0).
  static AdapterLayer make(int feature_dim, int bottleneck_dim, uint64_t seed);

  Eigen::VectorXd apply(const Eigen::VectorXd& h) const;

  /// Backward pass; accumulates parameter gradients and returns dL/dh.
  Eigen::VectorXd backward(const Eigen::VectorXd& h, const Eigen::VectorXd& grad_out,
                           AdapterLayer& grads) const;

  int feature_dim() const { return static_cast<int>(down_.cols()); }
  int bottleneck_dim() const { return static_cast<int>(down_.rows()); }
  NormMode norm_mode() const { return norm_mode_; }

  /// d*b + b + b*d + d + 2d (norm gain and bias).
  size_t parameter_count() const;

  std::vector<double> flatten() const;
  void unflatten(const std::vector<double>& values);
  void add_scaled(const AdapterLayer& other, double scale);  // this += scale * other
  void set_zero();

  Eigen::MatrixXd& down() { return down_; }
  Eigen::MatrixXd& up() { return up_; }
  Eigen::VectorXd& down_bias() { return down_bias_; }
  Eigen::VectorXd& up_bias() { return up_bias_; }
  Eigen::VectorXd& norm_gain() { return norm_gain_; }
  Eigen::VectorXd& norm_bias() { return norm_bias_; }
  const Eigen::MatrixXd& down() const { return down_; }
  const Eigen::MatrixXd& up() const { return up_; }

 private:
  Eigen::VectorXd normalize(const Eigen::VectorXd& h) const;

  Eigen::MatrixXd down_;       // b x d
  Eigen::VectorXd down_bias_;  // b
  Eigen::MatrixXd up_;         // d x b
  Eigen::VectorXd up_bias_;    // d
  Eigen::VectorXd norm_gain_;  // d
  Eigen::VectorXd norm_bias_;  // d
  NormMode norm_mode_ = NormMode::layer_norm;
};

/// Position-wise application; pure.
Eigen::VectorXd apply_adapter(const AdapterLayer& layer, const Eigen::VectorXd& h);

/// Total parameters added by inserting the spec into a model with hidden
/// dimension d.
size_t adapter_parameter_budget(const AdapterSpec& spec, int feature_dim);

/// Resolves the spec default (d/4, at least 1).
int resolve_bottleneck_dim(const AdapterSpec& spec, int feature_dim);

}  // namespace darepair::adapter
