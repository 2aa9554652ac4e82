#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "donlab/deeponet/dataset.hpp"

namespace donlab::datagen {

// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);
double parse_double(std::string_view text);

// data.csv -> data.meta.json
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

nlohmann::json dataset_meta_to_json(const deeponet::Dataset& dataset);

// Header `s_0..s_{m-1},p_0..p_{d2-1},y`, one row per triple, plus the JSON sidecar.
void write_dataset_csv(const deeponet::Dataset& dataset, const std::filesystem::path& path);

// Reads the CSV and, when present, its sidecar. Throws InputError for a missing or
// empty file and FormatError for header or row problems.
deeponet::Dataset read_dataset_csv(const std::filesystem::path& path);

}  // namespace donlab::datagen
