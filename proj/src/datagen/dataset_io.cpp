#include "donlab/datagen/dataset_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "donlab/errors.hpp"

namespace donlab::datagen {

namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    return s;
}

}  // namespace

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    text = trim(text);
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw FormatError("cannot parse number '" + std::string(text) + "'");
    }
    return value;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
    std::filesystem::path p = csv_path;
    p.replace_extension(".meta.json");
    return p;
}

nlohmann::json dataset_meta_to_json(const deeponet::Dataset& dataset) {
    const auto& meta = dataset.meta();
    return {{"B", meta.B},
            {"m", dataset.sensor_count()},
            {"d2", dataset.point_dim()},
            {"n", dataset.size()},
            {"noise_std", meta.noise_std},
            {"seed", meta.seed},
            {"sensor_grid", std::vector<double>(meta.sensor_grid.data(), meta.sensor_grid.data() + meta.sensor_grid.size())},
            {"generator", meta.generator}};
}

void write_dataset_csv(const deeponet::Dataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write dataset " + path.string());
    const std::size_t m = dataset.sensor_count();
    const std::size_t d2 = dataset.point_dim();
    for (std::size_t i = 0; i < m; ++i) out << "s_" << i << ',';
    for (std::size_t i = 0; i < d2; ++i) out << "p_" << i << ',';
    out << "y\n";
    std::string row;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const auto col = static_cast<Eigen::Index>(i);
        row.clear();
        for (Eigen::Index r = 0; r < dataset.sensors().rows(); ++r) {
            row += format_double(dataset.sensors()(r, col));
            row += ',';
        }
        for (Eigen::Index r = 0; r < dataset.points().rows(); ++r) {
            row += format_double(dataset.points()(r, col));
            row += ',';
        }
        row += format_double(dataset.labels()(col));
        row += '\n';
        out << row;
    }
    std::ofstream side(sidecar_path(path));
    if (!side) throw InputError("cannot write dataset sidecar for " + path.string());
    side << dataset_meta_to_json(dataset).dump(2) << '\n';
}

deeponet::Dataset read_dataset_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open dataset " + path.string());
    std::string line;
    if (!std::getline(in, line) || trim(line).empty()) throw InputError("dataset " + path.string() + " is empty");

    const auto header = split(trim(line));
    std::size_t m = 0;
    while (m < header.size() && trim(header[m]) == "s_" + std::to_string(m)) ++m;
    std::size_t d2 = 0;
    while (m + d2 < header.size() && trim(header[m + d2]) == "p_" + std::to_string(d2)) ++d2;
    if (m == 0 || d2 == 0 || m + d2 + 1 != header.size() || trim(header.back()) != "y") {
        throw FormatError("dataset " + path.string() + ": header must be s_0..s_{m-1},p_0..p_{d2-1},y");
    }
    const std::size_t cols = header.size();

    std::vector<double> values;
    std::size_t rows = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty()) continue;
        const auto fields = split(t);
        if (fields.size() != cols) {
            throw FormatError("dataset " + path.string() + ": line " + std::to_string(line_no) + " has " +
                              std::to_string(fields.size()) + " columns, header has " + std::to_string(cols));
        }
        for (auto f : fields) values.push_back(parse_double(f));
        ++rows;
    }

    const auto n = static_cast<Eigen::Index>(rows);
    nn::Matrix s(static_cast<Eigen::Index>(m), n);
    nn::Matrix p(static_cast<Eigen::Index>(d2), n);
    nn::Vector y(n);
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = values.data() + r * cols;
        const auto c = static_cast<Eigen::Index>(r);
        for (std::size_t i = 0; i < m; ++i) s(static_cast<Eigen::Index>(i), c) = row[i];
        for (std::size_t i = 0; i < d2; ++i) p(static_cast<Eigen::Index>(i), c) = row[m + i];
        y(c) = row[m + d2];
    }

    deeponet::DatasetMeta meta;
    std::optional<double> bound;
    const auto side = sidecar_path(path);
    if (std::filesystem::exists(side)) {
        std::ifstream sin(side);
        try {
            nlohmann::json j;
            sin >> j;
            bound = j.at("B").get<double>();
            meta.noise_std = j.value("noise_std", 0.0);
            meta.seed = j.value("seed", std::uint64_t{0});
            meta.generator = j.value("generator", nlohmann::json::object());
            const auto grid = j.value("sensor_grid", std::vector<double>{});
            meta.sensor_grid = Eigen::Map<const nn::Vector>(grid.data(), static_cast<Eigen::Index>(grid.size()));
            if (j.value("m", m) != m || j.value("d2", d2) != d2) {
                throw FormatError("dataset sidecar " + side.string() + " disagrees with the CSV shape");
            }
        } catch (const nlohmann::json::exception& e) {
            throw FormatError("dataset sidecar " + side.string() + ": " + e.what());
        }
    }
    return deeponet::Dataset(std::move(s), std::move(p), std::move(y), std::move(meta), bound);
}

}  // namespace donlab::datagen
