#include "donlab/deeponet/model.hpp"

#include <limits>
#include <string>

#include "donlab/errors.hpp"

namespace donlab::deeponet {

namespace {

bool bounded(nn::OutputActivation a) {
    return a == nn::OutputActivation::Sigmoid || a == nn::OutputActivation::Tanh;
}

void check_batch_shapes(const DeepONetModel& model, const Eigen::Ref<const Matrix>& sensors,
                        const Eigen::Ref<const Matrix>& points) {
    if (static_cast<std::size_t>(sensors.rows()) != model.sensor_count()) {
        throw InputError("deeponet: sensor vector has length " + std::to_string(sensors.rows()) + ", branch expects " +
                         std::to_string(model.sensor_count()));
    }
    if (static_cast<std::size_t>(points.rows()) != model.point_dim()) {
        throw InputError("deeponet: query point has length " + std::to_string(points.rows()) + ", trunk expects " +
                         std::to_string(model.point_dim()));
    }
    if (sensors.cols() != points.cols()) throw InputError("deeponet: sensor and point batch sizes differ");
}

}  // namespace

DeepONetModel::DeepONetModel(nn::MlpParams branch, nn::MlpParams trunk)
    : branch_(std::move(branch)), trunk_(std::move(trunk)) {
    if (branch_.spec().output_dim() != trunk_.spec().output_dim()) {
        throw ConfigError("branch and trunk must share the output dimension q");
    }
}

double DeepONetModel::c_bound() const {
    if (bounded(branch_.spec().output) && bounded(trunk_.spec().output)) return 1.0;
    return std::numeric_limits<double>::infinity();
}

nn::MlpSpec branch_spec(const DeepONetArch& arch) {
    return nn::uniform_spec(arch.sensor_count, arch.width, arch.depth, arch.q, arch.hidden, arch.output);
}

nn::MlpSpec trunk_spec(const DeepONetArch& arch) {
    return nn::uniform_spec(arch.point_dim, arch.width, arch.depth, arch.q, arch.hidden, arch.output);
}

DeepONetModel make_deeponet(const DeepONetArch& arch, std::uint64_t seed) {
    return DeepONetModel(nn::init_mlp(branch_spec(arch), seed), nn::init_mlp(trunk_spec(arch), seed + 1));
}

double don_forward(const DeepONetModel& model, const Eigen::Ref<const Vector>& s, const Eigen::Ref<const Vector>& p) {
    return don_forward_batch(model, s, p)(0);
}

Vector don_forward_batch(const DeepONetModel& model, const Eigen::Ref<const Matrix>& sensors,
                         const Eigen::Ref<const Matrix>& points) {
    check_batch_shapes(model, sensors, points);
    const Matrix b = nn::forward_batch(model.branch(), sensors);
    const Matrix t = nn::forward_batch(model.trunk(), points);
    return b.cwiseProduct(t).colwise().sum().transpose();
}

double empirical_risk(const DeepONetModel& model, const Dataset& dataset) {
    if (dataset.empty()) throw InputError("empirical_risk: dataset is empty");
    // Chunked so memory stays bounded for large n.
    constexpr Eigen::Index chunk = 4096;
    const auto n = static_cast<Eigen::Index>(dataset.size());
    double total = 0.0;
    for (Eigen::Index start = 0; start < n; start += chunk) {
        const Eigen::Index len = std::min(chunk, n - start);
        const Vector pred = don_forward_batch(model, dataset.sensors().middleCols(start, len),
                                              dataset.points().middleCols(start, len));
        total += (pred - dataset.labels().segment(start, len)).squaredNorm();
    }
    return total / static_cast<double>(n);
}

LossGrads loss_grads(const DeepONetModel& model, const Eigen::Ref<const Matrix>& sensors,
                     const Eigen::Ref<const Matrix>& points, const Eigen::Ref<const Vector>& labels) {
    check_batch_shapes(model, sensors, points);
    if (labels.size() != sensors.cols()) throw InputError("loss_grads: label count does not match batch");
    if (labels.size() == 0) throw InputError("loss_grads: empty batch");

    nn::ForwardCache branch_cache;
    nn::ForwardCache trunk_cache;
    const Matrix b = nn::forward_batch(model.branch(), sensors, &branch_cache);
    const Matrix t = nn::forward_batch(model.trunk(), points, &trunk_cache);
    const Vector residual = b.cwiseProduct(t).colwise().sum().transpose() - labels;
    const double n = static_cast<double>(labels.size());

    // d/dB_i of (1/n) sum r_i^2 is (2/n) r_i T_i, symmetrically for the trunk.
    const Eigen::RowVectorXd scale = (2.0 / n) * residual.transpose();
    const Matrix branch_upstream = t.array().rowwise() * scale.array();
    const Matrix trunk_upstream = b.array().rowwise() * scale.array();

    LossGrads out;
    out.loss = residual.squaredNorm() / n;
    out.branch = Vector::Zero(static_cast<Eigen::Index>(model.branch().size()));
    out.trunk = Vector::Zero(static_cast<Eigen::Index>(model.trunk().size()));
    nn::backward_batch(model.branch(), branch_cache, branch_upstream, {out.branch.data(), model.branch().size()});
    nn::backward_batch(model.trunk(), trunk_cache, trunk_upstream, {out.trunk.data(), model.trunk().size()});
    return out;
}

LossGrads loss_grads(const DeepONetModel& model, const Dataset& batch) {
    return loss_grads(model, batch.sensors(), batch.points(), batch.labels());
}

}  // namespace donlab::deeponet
