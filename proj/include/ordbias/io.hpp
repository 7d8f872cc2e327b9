// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ordbias/evaluation.hpp"
#include "ordbias/model.hpp"
#include "ordbias/synthetic.hpp"
#include "ordbias/types.hpp"

namespace ordbias {

// Delimited text with a header row: user_id, item_id, then one column per
// aspect named in the header.
std::vector<RawRating> read_raw_ratings(const std::string& path, char delimiter,
                                        std::vector<std::string>* aspect_names = nullptr);
RatingsDataset read_ratings_csv(const std::string& path, int num_levels, char delimiter = ',');
void write_ratings_csv(const RatingsDataset& data, const std::string& path, char delimiter = ',');

// Versioned little-endian binary container plus a plain-text sidecar
// (<path>.meta.json) holding the hyperparameters.
void save_model(const FittedModel& model, const std::string& path);
FittedModel load_model(const std::string& path);

std::uint64_t fnv1a64(const void* bytes, std::size_t size,
                      std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t dataset_hash(const RatingsDataset& data);
std::uint64_t config_hash(const Hyperparameters& hp, const RunConfig& cfg, const ModelSpec& spec);

const char* build_stamp();

void write_ground_truth(const GroundTruth& truth, const std::string& path);
void write_fit_log(const std::vector<double>& sweep_log, const std::string& path);
void write_evaluation_report(const EvaluationReport& report,
                             const std::vector<std::string>& aspect_names,
                             const std::string& out_dir);
// Plot-ready curves: category probabilities over a response grid under the
// posterior-mean cut-points.
void write_category_curves(const std::vector<double>& cuts, const std::string& path);

struct ManifestInfo {
  std::string command;
  std::uint64_t seed = 0;
  std::uint64_t dataset_hash = 0;
  std::uint64_t config_hash = 0;
  std::vector<std::string> outputs;
};
void write_manifest(const ManifestInfo& info, const std::string& path);

}  // namespace ordbias
