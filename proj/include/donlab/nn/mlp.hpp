#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace donlab::nn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class HiddenActivation { Relu, Tanh };
enum class OutputActivation { Sigmoid, Tanh, Linear };
enum class InitScheme { He, Xavier };

std::string to_string(HiddenActivation a);
std::string to_string(OutputActivation a);
std::string to_string(InitScheme s);
HiddenActivation parse_hidden_activation(const std::string& name);
OutputActivation parse_output_activation(const std::string& name);
InitScheme parse_init_scheme(const std::string& name);

// He for relu stacks, Xavier otherwise.
InitScheme default_init_for(HiddenActivation hidden);

struct MlpSpec {
    std::vector<std::size_t> layer_dims;  // input first, output last
    HiddenActivation hidden = HiddenActivation::Relu;
    OutputActivation output = OutputActivation::Linear;
    InitScheme init = InitScheme::He;

    std::size_t input_dim() const { return layer_dims.front(); }
    std::size_t output_dim() const { return layer_dims.back(); }
    // Number of weight layers.
    std::size_t depth() const { return layer_dims.size() - 1; }

    // Throws ConfigError on fewer than two dims or a zero dim.
    void validate() const;

    bool operator==(const MlpSpec&) const = default;
};

// [in, width x (depth-1), out]: `depth` weight layers of uniform hidden width.
MlpSpec uniform_spec(std::size_t in, std::size_t width, std::size_t depth, std::size_t out,
                     HiddenActivation hidden, OutputActivation output);

// Sum over layers of dims[l]*dims[l+1] + dims[l+1].
std::size_t param_count(const MlpSpec& spec);

/// Parameters of one feed-forward network stored as a single flat vector.
///
/// Layer l occupies a contiguous block: its weight matrix (dims[l+1] x dims[l],
/// row-major) followed by its bias vector (dims[l+1]).
class MlpParams {
public:
    using WeightMap = Eigen::Map<RowMatrix>;
    using ConstWeightMap = Eigen::Map<const RowMatrix>;
    using BiasMap = Eigen::Map<Vector>;
    using ConstBiasMap = Eigen::Map<const Vector>;

    // All-zero parameters.
    explicit MlpParams(MlpSpec spec);
    MlpParams(MlpSpec spec, std::vector<double> flat);

    const MlpSpec& spec() const { return spec_; }
    std::size_t size() const { return flat_.size(); }

    std::span<const double> flat() const { return flat_; }
    std::span<double> flat() { return flat_; }
    Eigen::Map<const Vector> as_vector() const { return {flat_.data(), static_cast<Eigen::Index>(flat_.size())}; }
    Eigen::Map<Vector> as_vector() { return {flat_.data(), static_cast<Eigen::Index>(flat_.size())}; }

    std::vector<double> flatten() const { return flat_; }
    static MlpParams unflatten(const MlpSpec& spec, std::span<const double> flat);

    ConstWeightMap weights(std::size_t layer) const;
    WeightMap weights(std::size_t layer);
    ConstBiasMap bias(std::size_t layer) const;
    BiasMap bias(std::size_t layer);

    // Offset of layer `layer`'s weight block inside the flat vector.
    std::size_t layer_offset(std::size_t layer) const { return offsets_[layer]; }

private:
    MlpSpec spec_;
    std::vector<double> flat_;
    std::vector<std::size_t> offsets_;
};

// Weights ~ N(0, var) per MlpSpec::init, biases zero. Deterministic in seed.
MlpParams init_mlp(const MlpSpec& spec, std::uint64_t seed);

double param_l2_norm(const MlpParams& params);

// Post-activation values of every layer for a batch (column per sample).
// activations[0] is the input batch, activations.back() the network output.
struct ForwardCache {
    std::vector<Matrix> activations;
};

// Batched forward pass; `inputs` is input_dim x batch.
Matrix forward_batch(const MlpParams& params, const Eigen::Ref<const Matrix>& inputs,
                     ForwardCache* cache = nullptr);

// Reverse-mode pass for the batch stored in `cache`: adds the gradient of
// sum_j <out_grad[:, j], f(x_j)> with respect to every parameter into `grad`.
void backward_batch(const MlpParams& params, const ForwardCache& cache,
                    const Eigen::Ref<const Matrix>& out_grad, std::span<double> grad);

Vector forward(const MlpParams& params, const Eigen::Ref<const Vector>& x);

// Gradient of <out_grad, forward(params, x)> with respect to the flat parameters.
Vector backward(const MlpParams& params, const Eigen::Ref<const Vector>& x,
                const Eigen::Ref<const Vector>& out_grad);

}  // namespace donlab::nn
