#include "darepair/adapter/adapter.hpp"

#include <cmath>

#include "darepair/common/error.hpp"
#include "darepair/common/rng.hpp"

namespace darepair::adapter {

namespace {

constexpr double kNormEps = 1e-5;

void copy_out(std::vector<double>& out, const Eigen::MatrixXd& m) {
  out.insert(out.end(), m.data(), m.data() + m.size());
}

const double* copy_in(Eigen::MatrixXd& m, const double* p) {
  std::copy(p, p + m.size(), m.data());
  return p + m.size();
}

void copy_out(std::vector<double>& out, const Eigen::VectorXd& v) {
  out.insert(out.end(), v.data(), v.data() + v.size());
}

const double* copy_in(Eigen::VectorXd& v, const double* p) {
  std::copy(p, p + v.size(), v.data());
  return p + v.size();
}

}  // namespace

AdapterLayer::AdapterLayer(Eigen::MatrixXd down, Eigen::VectorXd down_bias, Eigen::MatrixXd up,
                           Eigen::VectorXd up_bias, NormMode norm_mode)
    : down_(std::move(down)),
      down_bias_(std::move(down_bias)),
      up_(std::move(up)),
      up_bias_(std::move(up_bias)),
      norm_mode_(norm_mode) {
  if (down_.rows() != up_.cols() || down_.cols() != up_.rows())
    throw Error("adapter projections have mismatched shapes");
  if (down_bias_.size() != down_.rows() || up_bias_.size() != up_.rows())
    throw Error("adapter biases have mismatched shapes");
  norm_gain_ = Eigen::VectorXd::Ones(down_.cols());
  norm_bias_ = Eigen::VectorXd::Zero(down_.cols());
}

AdapterLayer AdapterLayer::make(int feature_dim, int bottleneck_dim, uint64_t seed) {
  if (feature_dim < 1) throw Error("adapter feature_dim must be >= 1");
  if (bottleneck_dim < 1) throw Error("adapter bottleneck_dim must be >= 1");
  SplitMix64 rng(seed);
  double r = std::sqrt(6.0 / static_cast<double>(feature_dim + bottleneck_dim));
  Eigen::MatrixXd down(bottleneck_dim, feature_dim);
  for (Eigen::Index i = 0; i < down.size(); ++i) down.data()[i] = rng.uniform(-r, r);
  AdapterLayer layer(std::move(down), Eigen::VectorXd::Zero(bottleneck_dim),
                     Eigen::MatrixXd::Zero(feature_dim, bottleneck_dim),
                     Eigen::VectorXd::Zero(feature_dim), NormMode::layer_norm);
  return layer;
}

Eigen::VectorXd AdapterLayer::normalize(const Eigen::VectorXd& h) const {
  if (norm_mode_ == NormMode::identity) return h;
  double mu = h.mean();
  Eigen::VectorXd centered = h.array() - mu;
  double var = centered.squaredNorm() / static_cast<double>(h.size());
  Eigen::VectorXd xhat = centered / std::sqrt(var + kNormEps);
  return (norm_gain_.array() * xhat.array() + norm_bias_.array()).matrix();
}

Eigen::VectorXd AdapterLayer::apply(const Eigen::VectorXd& h) const {
  if (h.size() != down_.cols())
    throw Error("adapter input dimension " + std::to_string(h.size()) + " != expected " +
                std::to_string(down_.cols()));
  Eigen::VectorXd z = down_ * normalize(h) + down_bias_;
  Eigen::VectorXd r = z.cwiseMax(0.0);
  return h + up_ * r + up_bias_;
}

Eigen::VectorXd AdapterLayer::backward(const Eigen::VectorXd& h, const Eigen::VectorXd& grad_out,
                                       AdapterLayer& grads) const {
  // Recompute forward intermediates.
  double mu = 0.0, inv_std = 1.0;
  Eigen::VectorXd xhat;
  Eigen::VectorXd n;
  if (norm_mode_ == NormMode::layer_norm) {
    mu = h.mean();
    Eigen::VectorXd centered = h.array() - mu;
    double var = centered.squaredNorm() / static_cast<double>(h.size());
    inv_std = 1.0 / std::sqrt(var + kNormEps);
    xhat = centered * inv_std;
    n = (norm_gain_.array() * xhat.array() + norm_bias_.array()).matrix();
  } else {
    n = h;
  }
  Eigen::VectorXd z = down_ * n + down_bias_;
  Eigen::VectorXd r = z.cwiseMax(0.0);

  // Residual path.
  Eigen::VectorXd grad_h = grad_out;

  grads.up_ += grad_out * r.transpose();
  grads.up_bias_ += grad_out;

  Eigen::VectorXd grad_r = up_.transpose() * grad_out;
  Eigen::VectorXd grad_z =
      (z.array() > 0.0).select(grad_r.array(), 0.0).matrix();

  grads.down_ += grad_z * n.transpose();
  grads.down_bias_ += grad_z;

  Eigen::VectorXd grad_n = down_.transpose() * grad_z;
  if (norm_mode_ == NormMode::layer_norm) {
    grads.norm_gain_ += (grad_n.array() * xhat.array()).matrix();
    grads.norm_bias_ += grad_n;
    Eigen::VectorXd grad_xhat = (grad_n.array() * norm_gain_.array()).matrix();
    double m = static_cast<double>(h.size());
    double sum_gx = grad_xhat.sum();
    double sum_gx_xhat = grad_xhat.dot(xhat);
    grad_h +=
        (inv_std / m) * (m * grad_xhat.array() - sum_gx - xhat.array() * sum_gx_xhat).matrix();
  } else {
    grad_h += grad_n;
  }
  return grad_h;
}

size_t AdapterLayer::parameter_count() const {
  return static_cast<size_t>(down_.size() + down_bias_.size() + up_.size() + up_bias_.size() +
                             norm_gain_.size() + norm_bias_.size());
}

std::vector<double> AdapterLayer::flatten() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  copy_out(out, down_);
  copy_out(out, down_bias_);
  copy_out(out, up_);
  copy_out(out, up_bias_);
  copy_out(out, norm_gain_);
  copy_out(out, norm_bias_);
  return out;
}

void AdapterLayer::unflatten(const std::vector<double>& values) {
  if (values.size() != parameter_count()) throw Error("adapter unflatten: size mismatch");
  const double* p = values.data();
  p = copy_in(down_, p);
  p = copy_in(down_bias_, p);
  p = copy_in(up_, p);
  p = copy_in(up_bias_, p);
  p = copy_in(norm_gain_, p);
  copy_in(norm_bias_, p);
}

void AdapterLayer::add_scaled(const AdapterLayer& other, double scale) {
  down_ += scale * other.down_;
  down_bias_ += scale * other.down_bias_;
  up_ += scale * other.up_;
  up_bias_ += scale * other.up_bias_;
  norm_gain_ += scale * other.norm_gain_;
  norm_bias_ += scale * other.norm_bias_;
}

void AdapterLayer::set_zero() {
  down_.setZero();
  down_bias_.setZero();
  up_.setZero();
  up_bias_.setZero();
  norm_gain_.setZero();
  norm_bias_.setZero();
}

Eigen::VectorXd apply_adapter(const AdapterLayer& layer, const Eigen::VectorXd& h) {
  return layer.apply(h);
}

int resolve_bottleneck_dim(const AdapterSpec& spec, int feature_dim) {
  if (spec.bottleneck_dim > 0) return spec.bottleneck_dim;
  return std::max(1, feature_dim / 4);
}

size_t adapter_parameter_budget(const AdapterSpec& spec, int feature_dim) {
  if (spec.insertion_points.empty())
    throw Error("adapter_parameter_budget: spec has no insertion points");
  int b = resolve_bottleneck_dim(spec, feature_dim);
  if (b < 1) throw Error("bottleneck_dim must be >= 1");
  size_t d = static_cast<size_t>(feature_dim);
  size_t bb = static_cast<size_t>(b);
  size_t per_layer = d * bb + bb + bb * d + d + 2 * d;
  return per_layer * spec.insertion_points.size();
}

}  // namespace darepair::adapter
