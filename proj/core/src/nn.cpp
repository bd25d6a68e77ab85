#include "motifmine/nn.hpp"

#include <cmath>
#include <string>

#include "motifmine/errors.hpp"

namespace motifmine {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::sigmoid: return "sigmoid";
    case Activation::identity: return "identity";
  }
  return "unknown";
}

Activation parse_activation(std::string_view name) {
  for (Activation a : {Activation::relu, Activation::sigmoid, Activation::identity}) {
    if (to_string(a) == name) return a;
  }
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

namespace {

Eigen::VectorXd activate(const Eigen::VectorXd& pre, Activation a) {
  switch (a) {
    case Activation::relu: return pre.cwiseMax(0.0);
    case Activation::sigmoid: return (1.0 + (-pre.array()).exp()).inverse().matrix();
    case Activation::identity: return pre;
  }
  return pre;
}

// d(activation)/d(pre), expressed through the post-activation value.
Eigen::VectorXd activation_slope(const Eigen::VectorXd& post, Activation a) {
  switch (a) {
    case Activation::relu: return (post.array() > 0.0).cast<double>().matrix();
    case Activation::sigmoid: return (post.array() * (1.0 - post.array())).matrix();
    case Activation::identity: return Eigen::VectorXd::Ones(post.size());
  }
  return Eigen::VectorXd::Ones(post.size());
}

void check_shape(std::span<const std::size_t> dims, std::span<const Activation> activations) {
  if (dims.size() < 2 || activations.size() != dims.size() - 1) {
    throw ConfigError("an MLP needs dims.size() == activations.size() + 1 >= 2");
  }
  for (std::size_t d : dims) {
    if (d == 0) throw ConfigError("MLP layer widths must be positive");
  }
}

}  // namespace

Mlp::Mlp(std::span<const std::size_t> dims, std::span<const Activation> activations, Rng& rng) {
  check_shape(dims, activations);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const auto in = static_cast<Eigen::Index>(dims[l]);
    const auto out = static_cast<Eigen::Index>(dims[l + 1]);
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    DenseLayer layer{Eigen::MatrixXd(out, in), Eigen::VectorXd::Zero(out), activations[l]};
    for (Eigen::Index r = 0; r < out; ++r) {
      for (Eigen::Index c = 0; c < in; ++c) layer.weights(r, c) = limit * (2.0 * rng.uniform() - 1.0);
    }
    layers_.push_back(std::move(layer));
  }
}

Mlp Mlp::zeros(std::span<const std::size_t> dims, std::span<const Activation> activations) {
  check_shape(dims, activations);
  Mlp m;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const auto in = static_cast<Eigen::Index>(dims[l]);
    const auto out = static_cast<Eigen::Index>(dims[l + 1]);
    m.layers_.push_back({Eigen::MatrixXd::Zero(out, in), Eigen::VectorXd::Zero(out), activations[l]});
  }
  return m;
}

std::size_t Mlp::input_dim() const {
  return layers_.empty() ? 0 : static_cast<std::size_t>(layers_.front().weights.cols());
}

std::size_t Mlp::output_dim() const {
  return layers_.empty() ? 0 : static_cast<std::size_t>(layers_.back().weights.rows());
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x, Tape& tape) const {
  if (static_cast<std::size_t>(x.size()) != input_dim()) {
    throw DimensionMismatch("MLP expects input of size " + std::to_string(input_dim()) + ", got " +
                            std::to_string(x.size()));
  }
  tape.inputs.clear();
  tape.outputs.clear();
  Eigen::VectorXd h = x;
  for (const DenseLayer& layer : layers_) {
    tape.inputs.push_back(h);
    h = activate(layer.weights * h + layer.bias, layer.activation);
    tape.outputs.push_back(h);
  }
  return h;
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x) const {
  Tape tape;
  return forward(x, tape);
}

Eigen::VectorXd Mlp::backward(const Tape& tape, const Eigen::VectorXd& upstream,
                              MlpGradient& grads) const {
  if (tape.outputs.size() != layers_.size()) throw DimensionMismatch("tape does not match MLP");
  Eigen::VectorXd g = upstream;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    const DenseLayer& layer = layers_[l];
    const Eigen::VectorXd delta =
        (g.array() * activation_slope(tape.outputs[l], layer.activation).array()).matrix();
    grads.weights[l].noalias() += delta * tape.inputs[l].transpose();
    grads.bias[l] += delta;
    g = layer.weights.transpose() * delta;
  }
  return g;
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const DenseLayer& layer : layers_) n += layer.weights.size() + layer.bias.size();
  return n;
}

Eigen::VectorXd Mlp::parameters() const {
  Eigen::VectorXd flat(parameter_count());
  Eigen::Index at = 0;
  for (const DenseLayer& layer : layers_) {
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) flat[at++] = layer.weights(r, c);
    }
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) flat[at++] = layer.bias[r];
  }
  return flat;
}

void Mlp::set_parameters(const Eigen::VectorXd& flat) {
  if (static_cast<std::size_t>(flat.size()) != parameter_count()) {
    throw DimensionMismatch("parameter vector has the wrong length");
  }
  Eigen::Index at = 0;
  for (DenseLayer& layer : layers_) {
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) layer.weights(r, c) = flat[at++];
    }
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) layer.bias[r] = flat[at++];
  }
}

bool Mlp::finite() const { return parameters().allFinite(); }

MlpGradient::MlpGradient(const Mlp& like) {
  for (const DenseLayer& layer : like.layers()) {
    weights.push_back(Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()));
    bias.push_back(Eigen::VectorXd::Zero(layer.bias.size()));
  }
}

void MlpGradient::set_zero() {
  for (auto& w : weights) w.setZero();
  for (auto& b : bias) b.setZero();
}

MlpGradient& MlpGradient::operator+=(const MlpGradient& other) {
  if (other.weights.size() != weights.size()) throw DimensionMismatch("gradient shapes differ");
  for (std::size_t l = 0; l < weights.size(); ++l) {
    weights[l] += other.weights[l];
    bias[l] += other.bias[l];
  }
  return *this;
}

MlpGradient& MlpGradient::operator*=(double s) {
  for (auto& w : weights) w *= s;
  for (auto& b : bias) b *= s;
  return *this;
}

Eigen::VectorXd MlpGradient::flatten() const {
  Eigen::Index total = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) total += weights[l].size() + bias[l].size();
  Eigen::VectorXd flat(total);
  Eigen::Index at = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (Eigen::Index r = 0; r < weights[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < weights[l].cols(); ++c) flat[at++] = weights[l](r, c);
    }
    for (Eigen::Index r = 0; r < bias[l].size(); ++r) flat[at++] = bias[l][r];
  }
  return flat;
}

void adam_step(Mlp& mlp, const MlpGradient& grads, AdamState& state) {
  auto& layers = mlp.layers();
  if (grads.weights.size() != layers.size() || state.first.weights.size() != layers.size()) {
    throw DimensionMismatch("Adam buffers do not match the MLP");
  }
  const AdamConfig& c = state.config;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correct1 = 1.0 - std::pow(c.beta1, t);
  const double correct2 = 1.0 - std::pow(c.beta2, t);

  auto update = [&](auto& param, const auto& g, auto& m, auto& v) {
    m = c.beta1 * m + (1.0 - c.beta1) * g;
    v = c.beta2 * v + (1.0 - c.beta2) * g.cwiseProduct(g);
    param.array() -= c.learning_rate * (m.array() / correct1) /
                     ((v.array() / correct2).sqrt() + c.epsilon);
  };
  for (std::size_t l = 0; l < layers.size(); ++l) {
    update(layers[l].weights, grads.weights[l], state.first.weights[l], state.second.weights[l]);
    update(layers[l].bias, grads.bias[l], state.first.bias[l], state.second.bias[l]);
  }
}

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json flat = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) flat.push_back(m(r, c));
  }
  return flat;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& flat, Eigen::Index rows, Eigen::Index cols) {
  if (flat.size() != static_cast<std::size_t>(rows * cols)) {
    throw ConfigError("checkpoint array has the wrong length");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = flat[static_cast<std::size_t>(r * cols + c)].get<double>();
  }
  return m;
}

nlohmann::json gradient_to_json(const MlpGradient& g) {
  nlohmann::json layers = nlohmann::json::array();
  for (std::size_t l = 0; l < g.weights.size(); ++l) {
    layers.push_back({{"weights", matrix_to_json(g.weights[l])}, {"bias", matrix_to_json(g.bias[l])}});
  }
  return layers;
}

MlpGradient gradient_from_json(const nlohmann::json& j, const Mlp& like) {
  MlpGradient g(like);
  if (j.size() != g.weights.size()) throw ConfigError("optimizer state does not match the model");
  for (std::size_t l = 0; l < g.weights.size(); ++l) {
    g.weights[l] = matrix_from_json(j[l].at("weights"), g.weights[l].rows(), g.weights[l].cols());
    g.bias[l] = matrix_from_json(j[l].at("bias"), g.bias[l].rows(), 1);
  }
  return g;
}

}  // namespace

nlohmann::json to_json(const Mlp& mlp) {
  nlohmann::json layers = nlohmann::json::array();
  for (const DenseLayer& layer : mlp.layers()) {
    layers.push_back({{"in", layer.weights.cols()},
                      {"out", layer.weights.rows()},
                      {"activation", std::string(to_string(layer.activation))},
                      {"weights", matrix_to_json(layer.weights)},
                      {"bias", matrix_to_json(layer.bias)}});
  }
  return {{"layers", std::move(layers)}};
}

Mlp mlp_from_json(const nlohmann::json& j) {
  try {
    std::vector<std::size_t> dims;
    std::vector<Activation> acts;
    const auto& layers = j.at("layers");
    for (std::size_t l = 0; l < layers.size(); ++l) {
      if (l == 0) dims.push_back(layers[l].at("in").get<std::size_t>());
      if (layers[l].at("in").get<std::size_t>() != dims.back()) {
        throw ConfigError("checkpoint layer dimensions do not chain");
      }
      dims.push_back(layers[l].at("out").get<std::size_t>());
      acts.push_back(parse_activation(layers[l].at("activation").get<std::string>()));
    }
    Mlp m = Mlp::zeros(dims, acts);
    for (std::size_t l = 0; l < layers.size(); ++l) {
      auto& layer = m.layers()[l];
      layer.weights = matrix_from_json(layers[l].at("weights"), layer.weights.rows(), layer.weights.cols());
      layer.bias = matrix_from_json(layers[l].at("bias"), layer.bias.rows(), 1);
    }
    if (!m.finite()) throw ConfigError("checkpoint contains non-finite parameters");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed network JSON: ") + e.what());
  }
}

nlohmann::json to_json(const AdamState& state) {
  return {{"learning_rate", state.config.learning_rate},
          {"beta1", state.config.beta1},
          {"beta2", state.config.beta2},
          {"epsilon", state.config.epsilon},
          {"step", state.step},
          {"first_moment", gradient_to_json(state.first)},
          {"second_moment", gradient_to_json(state.second)}};
}

AdamState adam_from_json(const nlohmann::json& j, const Mlp& like) {
  try {
    AdamConfig cfg;
    cfg.learning_rate = j.at("learning_rate").get<double>();
    cfg.beta1 = j.at("beta1").get<double>();
    cfg.beta2 = j.at("beta2").get<double>();
    cfg.epsilon = j.at("epsilon").get<double>();
    AdamState state(like, cfg);
    state.step = j.at("step").get<std::size_t>();
    state.first = gradient_from_json(j.at("first_moment"), like);
    state.second = gradient_from_json(j.at("second_moment"), like);
    return state;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed optimizer JSON: ") + e.what());
  }
}

}  // namespace motifmine
