#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "motifmine/random.hpp"

namespace motifmine {

enum class Activation { relu, sigmoid, identity };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view name);

struct DenseLayer {
  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd bias;     // out
  Activation activation = Activation::identity;
};

class MlpGradient;

/// Per-sample record of a forward pass; enough to run backward.
struct Tape {
  std::vector<Eigen::VectorXd> inputs;   // input to each layer
  std::vector<Eigen::VectorXd> outputs;  // post-activation output of each layer
};

/// Small dense feed-forward network.
class Mlp {
 public:
  Mlp() = default;

  /// dims = {in, hidden..., out}; one activation per layer. Weights are
  /// Glorot-uniform, biases zero.
  Mlp(std::span<const std::size_t> dims, std::span<const Activation> activations, Rng& rng);

  /// All-zero parameters.
  static Mlp zeros(std::span<const std::size_t> dims, std::span<const Activation> activations);

  std::size_t input_dim() const;
  std::size_t output_dim() const;
  std::size_t num_layers() const { return layers_.size(); }
  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  /// Throws DimensionMismatch when x has the wrong size.
  Eigen::VectorXd forward(const Eigen::VectorXd& x, Tape& tape) const;
  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;

  /// Reverse pass. Parameter gradients are *added* into `grads`; the gradient
  /// with respect to the network input is returned.
  Eigen::VectorXd backward(const Tape& tape, const Eigen::VectorXd& upstream,
                           MlpGradient& grads) const;

  std::size_t parameter_count() const;
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& flat);
  bool finite() const;

 private:
  std::vector<DenseLayer> layers_;
};

/// Gradient buffers shaped like an Mlp's parameters.
class MlpGradient {
 public:
  MlpGradient() = default;
  explicit MlpGradient(const Mlp& like);

  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> bias;

  void set_zero();
  MlpGradient& operator+=(const MlpGradient& other);
  MlpGradient& operator*=(double s);
  /// Same layout as Mlp::parameters().
  Eigen::VectorXd flatten() const;
};

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  AdamState() = default;
  AdamState(const Mlp& like, AdamConfig cfg) : config(cfg), first(like), second(like) {}

  AdamConfig config;
  MlpGradient first;
  MlpGradient second;
  std::size_t step = 0;
};

/// One bias-corrected Adam update of `mlp` in place.
void adam_step(Mlp& mlp, const MlpGradient& grads, AdamState& state);

nlohmann::json to_json(const Mlp& mlp);
Mlp mlp_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AdamState& state);
AdamState adam_from_json(const nlohmann::json& j, const Mlp& like);

}  // namespace motifmine
