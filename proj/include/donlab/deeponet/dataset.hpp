#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include <json.hpp>

#include "donlab/nn/mlp.hpp"

namespace donlab::deeponet {

using nn::Matrix;
using nn::Vector;

struct SampleTriple {
    Vector s;  // sensor values of the input function
    Vector p;  // query point
    double y = 0.0;
};

struct DatasetMeta {
    double B = 0.0;  // label bound, max |y| unless overridden
    Vector sensor_grid;
    double noise_std = 0.0;
    std::uint64_t seed = 0;
    nlohmann::json generator = nlohmann::json::object();
};

/// Training triples stored column-wise: sensors is m x n, points is d2 x n.
class Dataset {
public:
    Dataset() = default;
    // B is measured as max |y| unless `label_bound` is given, which must dominate every label.
    Dataset(Matrix sensors, Matrix points, Vector labels, DatasetMeta meta,
            std::optional<double> label_bound = std::nullopt);

    std::size_t size() const { return static_cast<std::size_t>(labels_.size()); }
    bool empty() const { return size() == 0; }
    std::size_t sensor_count() const { return static_cast<std::size_t>(sensors_.rows()); }
    std::size_t point_dim() const { return static_cast<std::size_t>(points_.rows()); }

    const Matrix& sensors() const { return sensors_; }
    const Matrix& points() const { return points_; }
    const Vector& labels() const { return labels_; }
    const DatasetMeta& meta() const { return meta_; }
    DatasetMeta& meta() { return meta_; }
    double label_bound() const { return meta_.B; }

    SampleTriple sample(std::size_t i) const;
    Dataset subset(std::span<const std::size_t> indices) const;

private:
    Matrix sensors_;
    Matrix points_;
    Vector labels_;
    DatasetMeta meta_;
};

}  // namespace donlab::deeponet
