#include "donlab/deeponet/dataset.hpp"

#include <cmath>
#include <string>

#include "donlab/errors.hpp"

namespace donlab::deeponet {

Dataset::Dataset(Matrix sensors, Matrix points, Vector labels, DatasetMeta meta, std::optional<double> label_bound)
    : sensors_(std::move(sensors)), points_(std::move(points)), labels_(std::move(labels)), meta_(std::move(meta)) {
    if (sensors_.cols() != labels_.size() || points_.cols() != labels_.size()) {
        throw InputError("dataset: sensor, point and label counts differ");
    }
    const double measured = labels_.size() == 0 ? 0.0 : labels_.cwiseAbs().maxCoeff();
    if (!std::isfinite(measured)) throw InputError("dataset: non-finite label");
    if (label_bound) {
        if (*label_bound < measured) {
            throw InputError("dataset: label bound " + std::to_string(*label_bound) + " is below max |y| = " +
                             std::to_string(measured));
        }
        meta_.B = *label_bound;
    } else {
        meta_.B = measured;
    }
}

SampleTriple Dataset::sample(std::size_t i) const {
    if (i >= size()) throw InputError("dataset: sample index out of range");
    const auto col = static_cast<Eigen::Index>(i);
    return {sensors_.col(col), points_.col(col), labels_(col)};
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    const auto n = static_cast<Eigen::Index>(indices.size());
    Matrix s(sensors_.rows(), n);
    Matrix p(points_.rows(), n);
    Vector y(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const std::size_t i = indices[static_cast<std::size_t>(j)];
        if (i >= size()) throw InputError("dataset: subset index out of range");
        s.col(j) = sensors_.col(static_cast<Eigen::Index>(i));
        p.col(j) = points_.col(static_cast<Eigen::Index>(i));
        y(j) = labels_(static_cast<Eigen::Index>(i));
    }
    // The parent's bound still dominates every label of the subset.
    return Dataset(std::move(s), std::move(p), std::move(y), meta_, meta_.B);
}

}  // namespace donlab::deeponet
