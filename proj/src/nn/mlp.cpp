#include "donlab/nn/mlp.hpp"

#include <cmath>
#include <random>

#include "donlab/errors.hpp"

namespace donlab::nn {

namespace {

void apply_hidden(Matrix& z, HiddenActivation a) {
    switch (a) {
    case HiddenActivation::Relu: z = z.cwiseMax(0.0); break;
    case HiddenActivation::Tanh: z = z.array().tanh().matrix(); break;
    }
}

void apply_output(Matrix& z, OutputActivation a) {
    switch (a) {
    case OutputActivation::Sigmoid: z = (1.0 / (1.0 + (-z.array()).exp())).matrix(); break;
    case OutputActivation::Tanh: z = z.array().tanh().matrix(); break;
    case OutputActivation::Linear: break;
    }
}

// Derivatives expressed through the post-activation value.
void scale_by_hidden_derivative(Matrix& delta, const Matrix& act, HiddenActivation a) {
    switch (a) {
    case HiddenActivation::Relu: delta = (act.array() > 0.0).select(delta, 0.0); break;
    case HiddenActivation::Tanh: delta.array() *= 1.0 - act.array().square(); break;
    }
}

void scale_by_output_derivative(Matrix& delta, const Matrix& act, OutputActivation a) {
    switch (a) {
    case OutputActivation::Sigmoid: delta.array() *= act.array() * (1.0 - act.array()); break;
    case OutputActivation::Tanh: delta.array() *= 1.0 - act.array().square(); break;
    case OutputActivation::Linear: break;
    }
}

}  // namespace

std::string to_string(HiddenActivation a) {
    return a == HiddenActivation::Relu ? "relu" : "tanh";
}

std::string to_string(OutputActivation a) {
    switch (a) {
    case OutputActivation::Sigmoid: return "sigmoid";
    case OutputActivation::Tanh: return "tanh";
    case OutputActivation::Linear: return "linear";
    }
    return "linear";
}

std::string to_string(InitScheme s) {
    return s == InitScheme::He ? "he" : "xavier";
}

HiddenActivation parse_hidden_activation(const std::string& name) {
    if (name == "relu") return HiddenActivation::Relu;
    if (name == "tanh") return HiddenActivation::Tanh;
    throw ConfigError("unknown hidden activation '" + name + "'");
}

OutputActivation parse_output_activation(const std::string& name) {
    if (name == "sigmoid") return OutputActivation::Sigmoid;
    if (name == "tanh") return OutputActivation::Tanh;
    if (name == "linear") return OutputActivation::Linear;
    throw ConfigError("unknown output activation '" + name + "'");
}

InitScheme parse_init_scheme(const std::string& name) {
    if (name == "he") return InitScheme::He;
    if (name == "xavier") return InitScheme::Xavier;
    throw ConfigError("unknown init scheme '" + name + "'");
}

InitScheme default_init_for(HiddenActivation hidden) {
    return hidden == HiddenActivation::Relu ? InitScheme::He : InitScheme::Xavier;
}

void MlpSpec::validate() const {
    if (layer_dims.size() < 2) throw ConfigError("MlpSpec needs at least an input and an output dimension");
    for (std::size_t d : layer_dims) {
        if (d == 0) throw ConfigError("MlpSpec layer dimensions must be positive");
    }
}

MlpSpec uniform_spec(std::size_t in, std::size_t width, std::size_t depth, std::size_t out,
                     HiddenActivation hidden, OutputActivation output) {
    if (depth < 1) throw ConfigError("depth must be at least 1");
    MlpSpec spec;
    spec.layer_dims.push_back(in);
    for (std::size_t i = 0; i + 1 < depth; ++i) spec.layer_dims.push_back(width);
    spec.layer_dims.push_back(out);
    spec.hidden = hidden;
    spec.output = output;
    spec.init = default_init_for(hidden);
    spec.validate();
    return spec;
}

std::size_t param_count(const MlpSpec& spec) {
    spec.validate();
    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < spec.layer_dims.size(); ++l) {
        total += spec.layer_dims[l] * spec.layer_dims[l + 1] + spec.layer_dims[l + 1];
    }
    return total;
}

MlpParams::MlpParams(MlpSpec spec) : MlpParams(spec, std::vector<double>(param_count(spec), 0.0)) {}

MlpParams::MlpParams(MlpSpec spec, std::vector<double> flat) : spec_(std::move(spec)), flat_(std::move(flat)) {
    const std::size_t expected = param_count(spec_);
    if (flat_.size() != expected) {
        throw InputError("flat parameter vector has length " + std::to_string(flat_.size()) + ", expected " +
                         std::to_string(expected));
    }
    std::size_t offset = 0;
    for (std::size_t l = 0; l < spec_.depth(); ++l) {
        offsets_.push_back(offset);
        offset += spec_.layer_dims[l] * spec_.layer_dims[l + 1] + spec_.layer_dims[l + 1];
    }
}

MlpParams MlpParams::unflatten(const MlpSpec& spec, std::span<const double> flat) {
    return MlpParams(spec, std::vector<double>(flat.begin(), flat.end()));
}

MlpParams::ConstWeightMap MlpParams::weights(std::size_t layer) const {
    const auto rows = static_cast<Eigen::Index>(spec_.layer_dims[layer + 1]);
    const auto cols = static_cast<Eigen::Index>(spec_.layer_dims[layer]);
    return {flat_.data() + offsets_[layer], rows, cols};
}

MlpParams::WeightMap MlpParams::weights(std::size_t layer) {
    const auto rows = static_cast<Eigen::Index>(spec_.layer_dims[layer + 1]);
    const auto cols = static_cast<Eigen::Index>(spec_.layer_dims[layer]);
    return {flat_.data() + offsets_[layer], rows, cols};
}

MlpParams::ConstBiasMap MlpParams::bias(std::size_t layer) const {
    const std::size_t out = spec_.layer_dims[layer + 1];
    return {flat_.data() + offsets_[layer] + out * spec_.layer_dims[layer], static_cast<Eigen::Index>(out)};
}

MlpParams::BiasMap MlpParams::bias(std::size_t layer) {
    const std::size_t out = spec_.layer_dims[layer + 1];
    return {flat_.data() + offsets_[layer] + out * spec_.layer_dims[layer], static_cast<Eigen::Index>(out)};
}

MlpParams init_mlp(const MlpSpec& spec, std::uint64_t seed) {
    MlpParams params(spec);
    std::mt19937_64 rng(seed);
    for (std::size_t l = 0; l < spec.depth(); ++l) {
        const double fan_in = static_cast<double>(spec.layer_dims[l]);
        const double fan_out = static_cast<double>(spec.layer_dims[l + 1]);
        const double variance = spec.init == InitScheme::He ? 2.0 / fan_in : 2.0 / (fan_in + fan_out);
        std::normal_distribution<double> dist(0.0, std::sqrt(variance));
        auto w = params.weights(l);
        for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = dist(rng);
    }
    return params;
}

double param_l2_norm(const MlpParams& params) {
    return params.as_vector().norm();
}

Matrix forward_batch(const MlpParams& params, const Eigen::Ref<const Matrix>& inputs, ForwardCache* cache) {
    const MlpSpec& spec = params.spec();
    if (static_cast<std::size_t>(inputs.rows()) != spec.input_dim()) {
        throw InputError("forward: input has " + std::to_string(inputs.rows()) + " rows, network expects " +
                         std::to_string(spec.input_dim()));
    }
    if (cache) {
        cache->activations.resize(spec.depth() + 1);
        cache->activations[0] = inputs;
    }
    Matrix act = inputs;
    for (std::size_t l = 0; l < spec.depth(); ++l) {
        Matrix z = params.weights(l) * act;
        z.colwise() += params.bias(l);
        if (l + 1 < spec.depth()) {
            apply_hidden(z, spec.hidden);
        } else {
            apply_output(z, spec.output);
        }
        act = std::move(z);
        if (cache) cache->activations[l + 1] = act;
    }
    return act;
}

void backward_batch(const MlpParams& params, const ForwardCache& cache, const Eigen::Ref<const Matrix>& out_grad,
                    std::span<double> grad) {
    const MlpSpec& spec = params.spec();
    const std::size_t depth = spec.depth();
    if (grad.size() != params.size()) throw InputError("backward: gradient buffer has the wrong length");
    if (cache.activations.size() != depth + 1) throw InputError("backward: forward cache does not match network");
    const Matrix& output = cache.activations.back();
    if (out_grad.rows() != output.rows() || out_grad.cols() != output.cols()) {
        throw InputError("backward: out_grad shape does not match network output");
    }

    Matrix delta = out_grad;
    scale_by_output_derivative(delta, output, spec.output);
    for (std::size_t l = depth; l-- > 0;) {
        const auto rows = static_cast<Eigen::Index>(spec.layer_dims[l + 1]);
        const auto cols = static_cast<Eigen::Index>(spec.layer_dims[l]);
        Eigen::Map<RowMatrix> g_w(grad.data() + params.layer_offset(l), rows, cols);
        Eigen::Map<Vector> g_b(grad.data() + params.layer_offset(l) + rows * cols, rows);
        g_w.noalias() += delta * cache.activations[l].transpose();
        g_b += delta.rowwise().sum();
        if (l > 0) {
            Matrix upstream = params.weights(l).transpose() * delta;
            scale_by_hidden_derivative(upstream, cache.activations[l], spec.hidden);
            delta = std::move(upstream);
        }
    }
}

Vector forward(const MlpParams& params, const Eigen::Ref<const Vector>& x) {
    return forward_batch(params, x);
}

Vector backward(const MlpParams& params, const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& out_grad) {
    ForwardCache cache;
    forward_batch(params, x, &cache);
    if (static_cast<std::size_t>(out_grad.size()) != params.spec().output_dim()) {
        throw InputError("backward: out_grad length does not match network output");
    }
    Vector grad = Vector::Zero(static_cast<Eigen::Index>(params.size()));
    backward_batch(params, cache, out_grad, {grad.data(), params.size()});
    return grad;
}

}  // namespace donlab::nn
