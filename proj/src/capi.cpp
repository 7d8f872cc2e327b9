// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#include "ordbias.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ordbias/diagnostics.hpp"
#include "ordbias/evaluation.hpp"
#include "ordbias/io.hpp"
#include "ordbias/model.hpp"
#include "ordbias/synthetic.hpp"
#include "ordbias/types.hpp"

using namespace ordbias;

namespace {

thread_local std::string g_last_error;

ob_status status_from(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return OB_ERROR_INVALID_ARGUMENT;
    case ErrorCode::parse: return OB_ERROR_PARSE;
    case ErrorCode::duplicate_pair: return OB_ERROR_DUPLICATE_PAIR;
    case ErrorCode::rating_out_of_range: return OB_ERROR_RATING_OUT_OF_RANGE;
    case ErrorCode::inconsistent_aspects: return OB_ERROR_INCONSISTENT_ASPECTS;
    case ErrorCode::too_few_observations: return OB_ERROR_TOO_FEW_OBSERVATIONS;
    case ErrorCode::unknown_user: return OB_ERROR_UNKNOWN_USER;
    case ErrorCode::unknown_item: return OB_ERROR_UNKNOWN_ITEM;
    case ErrorCode::io: return OB_ERROR_IO;
    case ErrorCode::numerical: return OB_ERROR_NUMERICAL;
    case ErrorCode::internal: return OB_ERROR_INTERNAL;
  }
  return OB_ERROR_INTERNAL;
}

template <typename Fn>
ob_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return OB_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_from(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return OB_ERROR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return OB_ERROR_INTERNAL;
  }
}

ModelSpec spec_from_kind(int32_t kind) {
  switch (kind) {
    case OB_MODEL_FULL: return {true, BiasMode::group};
    case OB_MODEL_CONTINUOUS_BIAS: return {false, BiasMode::group};
    case OB_MODEL_ORDINAL_NO_BIAS: return {true, BiasMode::none};
    case OB_MODEL_CONTINUOUS_NO_BIAS: return {false, BiasMode::none};
    case OB_MODEL_ORDINAL_GLOBAL: return {true, BiasMode::global};
    case OB_MODEL_CONTINUOUS_GLOBAL: return {false, BiasMode::global};
    default: throw Error(ErrorCode::invalid_argument, "unknown model kind");
  }
}

void options_to_core(const ob_fit_options& in, int num_aspects, ModelSpec& spec,
                     Hyperparameters& hp, RunConfig& cfg) {
  spec = spec_from_kind(in.model_kind);
  const int groups = in.num_groups > 0 ? in.num_groups : 10;
  hp = Hyperparameters::defaults(num_aspects, groups);
  if (in.bias_prior_scale > 0.0) {
    hp.Lambda = in.bias_prior_scale * in.bias_prior_scale *
                Eigen::MatrixXd::Identity(num_aspects, num_aspects);
  }
  if (in.response_scale > 0.0) {
    hp.B = in.response_scale * in.response_scale *
           Eigen::MatrixXd::Identity(num_aspects, num_aspects);
  }
  cfg = RunConfig{};
  cfg.seed = in.seed;
  cfg.burn_in = in.burn_in;
  cfg.num_samples = in.num_samples;
  cfg.thinning = in.thinning > 0 ? in.thinning : 1;
  cfg.parallel_blocks = in.parallel != 0;
}

}  // namespace

struct ob_dataset {
  RatingsDataset data;
};

struct ob_model {
  FittedModel model;
};

struct ob_report {
  EvaluationReport report;
  std::vector<std::string> aspect_names;
};

extern "C" {

const char* ob_version(void) { return "0.1.0"; }

const char* ob_build_stamp(void) { return build_stamp(); }

const char* ob_last_error(void) { return g_last_error.c_str(); }

void ob_set_num_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

ob_status ob_dataset_read(const char* path, int32_t num_levels, char delimiter,
                          ob_dataset** out) {
  return guarded([&] {
    if (!path || !out) throw Error(ErrorCode::invalid_argument, "null argument");
    *out = new ob_dataset{read_ratings_csv(path, num_levels, delimiter)};
  });
}

ob_status ob_dataset_from_rows(const char* const* user_ids, const char* const* item_ids,
                               const int32_t* ratings, int64_t num_rows, int32_t num_aspects,
                               const char* const* aspect_names, int32_t num_levels,
                               ob_dataset** out) {
  return guarded([&] {
    if (!user_ids || !item_ids || !ratings || !out || num_rows < 1 || num_aspects < 1) {
      throw Error(ErrorCode::invalid_argument, "malformed row arguments");
    }
    std::vector<RawRating> raw(num_rows);
    for (int64_t r = 0; r < num_rows; ++r) {
      raw[r].user_id = user_ids[r];
      raw[r].item_id = item_ids[r];
      raw[r].ratings.assign(ratings + r * num_aspects, ratings + (r + 1) * num_aspects);
    }
    std::vector<std::string> names;
    if (aspect_names) {
      for (int32_t a = 0; a < num_aspects; ++a) names.emplace_back(aspect_names[a]);
    }
    *out = new ob_dataset{validate_dataset(raw, num_levels, std::move(names))};
  });
}

ob_status ob_dataset_write(const ob_dataset* data, const char* path, char delimiter) {
  return guarded([&] {
    if (!data || !path) throw Error(ErrorCode::invalid_argument, "null argument");
    write_ratings_csv(data->data, path, delimiter);
  });
}

void ob_dataset_free(ob_dataset* data) { delete data; }

int32_t ob_dataset_num_users(const ob_dataset* data) { return data ? data->data.num_users : 0; }
int32_t ob_dataset_num_items(const ob_dataset* data) { return data ? data->data.num_items : 0; }
int32_t ob_dataset_num_aspects(const ob_dataset* data) {
  return data ? data->data.num_aspects : 0;
}
int32_t ob_dataset_num_levels(const ob_dataset* data) { return data ? data->data.num_levels : 0; }
int64_t ob_dataset_num_observations(const ob_dataset* data) {
  return data ? static_cast<int64_t>(data->data.observations.size()) : 0;
}
uint64_t ob_dataset_content_hash(const ob_dataset* data) {
  return data ? dataset_hash(data->data) : 0;
}

void ob_sim_options_init(ob_sim_options* options) {
  if (!options) return;
  *options = ob_sim_options{};
  options->num_users = 100;
  options->num_items = 30;
  options->num_aspects = 4;
  options->num_levels = 5;
  options->num_groups = 3;
  options->density = 0.2;
  options->bias_scale = 1.0;
  options->seed = 1;
  options->power_law_users = 0;
}

ob_status ob_simulate(const ob_sim_options* options, const char* truth_path, ob_dataset** out) {
  return guarded([&] {
    if (!options || !out) throw Error(ErrorCode::invalid_argument, "null argument");
    Hyperparameters hp = Hyperparameters::defaults(options->num_aspects,
                                                   options->num_groups > 0 ? options->num_groups : 3);
    if (options->bias_scale > 0.0) {
      hp.Lambda = options->bias_scale * options->bias_scale *
                  Eigen::MatrixXd::Identity(options->num_aspects, options->num_aspects);
    }
    SimOptions sim;
    sim.num_users = options->num_users;
    sim.num_items = options->num_items;
    sim.num_aspects = options->num_aspects;
    sim.num_levels = options->num_levels;
    sim.density = options->density;
    sim.seed = options->seed;
    sim.power_law_users = options->power_law_users != 0;
    auto [data, truth] = generate(hp, sim);
    if (truth_path) write_ground_truth(truth, truth_path);
    *out = new ob_dataset{std::move(data)};
  });
}

void ob_fit_options_init(ob_fit_options* options) {
  if (!options) return;
  *options = ob_fit_options{};
  options->model_kind = OB_MODEL_FULL;
  options->num_groups = 10;
  options->seed = 0;
  options->burn_in = 200;
  options->num_samples = 100;
  options->thinning = 1;
  options->parallel = 0;
  options->bias_prior_scale = 1.0;
  options->response_scale = 0.5;
}

uint64_t ob_fit_options_hash(const ob_fit_options* options) {
  if (!options) return 0;
  return fnv1a64(options, sizeof(*options));
}

ob_status ob_fit(const ob_dataset* data, const ob_fit_options* options, ob_model** out) {
  return guarded([&] {
    if (!data || !options || !out) throw Error(ErrorCode::invalid_argument, "null argument");
    ModelSpec spec;
    Hyperparameters hp;
    RunConfig cfg;
    options_to_core(*options, data->data.num_aspects, spec, hp, cfg);
    *out = new ob_model{fit_model(data->data, hp, cfg, spec)};
  });
}

ob_status ob_model_save(const ob_model* model, const char* path) {
  return guarded([&] {
    if (!model || !path) throw Error(ErrorCode::invalid_argument, "null argument");
    save_model(model->model, path);
  });
}

ob_status ob_model_load(const char* path, ob_model** out) {
  return guarded([&] {
    if (!path || !out) throw Error(ErrorCode::invalid_argument, "null argument");
    *out = new ob_model{load_model(path)};
  });
}

void ob_model_free(ob_model* model) { delete model; }

int32_t ob_model_num_aspects(const ob_model* model) {
  return model ? model->model.num_aspects() : 0;
}
int32_t ob_model_num_groups(const ob_model* model) {
  return model ? static_cast<int32_t>(model->model.samples.alignment_reference.rows()) : 0;
}
int32_t ob_model_num_samples(const ob_model* model) {
  return model ? static_cast<int32_t>(model->model.samples.states.size()) : 0;
}
int32_t ob_model_num_levels(const ob_model* model) { return model ? model->model.num_levels : 0; }

ob_status ob_model_aspect_name(const ob_model* model, int32_t aspect, char* buffer,
                               size_t buffer_size) {
  return guarded([&] {
    if (!model || !buffer) throw Error(ErrorCode::invalid_argument, "null argument");
    if (aspect < 0 || aspect >= model->model.num_aspects()) {
      throw Error(ErrorCode::invalid_argument, "aspect index out of range");
    }
    const std::string& name = model->model.aspect_names[aspect];
    if (buffer_size <= name.size()) {
      throw Error(ErrorCode::invalid_argument, "buffer too small");
    }
    std::memcpy(buffer, name.c_str(), name.size() + 1);
  });
}

ob_status ob_model_predict(const ob_model* model, const char* user_id, const char* item_id,
                           int32_t strict, int32_t plug_in, double* out_ratings) {
  return guarded([&] {
    if (!model || !user_id || !item_id || !out_ratings) {
      throw Error(ErrorCode::invalid_argument, "null argument");
    }
    PredictOptions opts;
    opts.strict = strict != 0;
    opts.plug_in = plug_in != 0;
    const Eigen::VectorXd pred = predict_ids(model->model, user_id, item_id, opts);
    for (int a = 0; a < model->model.num_aspects(); ++a) out_ratings[a] = pred[a];
  });
}

ob_status ob_model_user_group(const ob_model* model, const char* user_id, int32_t* out_group) {
  return guarded([&] {
    if (!model || !user_id || !out_group) throw Error(ErrorCode::invalid_argument, "null argument");
    const auto it = model->model.user_index.find(user_id);
    if (it == model->model.user_index.end()) {
      throw Error(ErrorCode::unknown_user, std::string("unknown user id: ") + user_id);
    }
    const std::vector<int> modes =
        posterior_mode_groups(model->model.samples, model->model.num_users());
    *out_group = modes[it->second];
  });
}

ob_status ob_model_group_bias(const ob_model* model, double* out) {
  return guarded([&] {
    if (!model || !out) throw Error(ErrorCode::invalid_argument, "null argument");
    const Eigen::MatrixXd bias = posterior_mean_group_bias(model->model);
    for (Eigen::Index g = 0; g < bias.rows(); ++g) {
      for (Eigen::Index a = 0; a < bias.cols(); ++a) out[g * bias.cols() + a] = bias(g, a);
    }
  });
}

ob_status ob_model_bias_labels(const ob_model* model, const char* user_id, double threshold,
                               int32_t* out_labels) {
  return guarded([&] {
    if (!model || !user_id || !out_labels) {
      throw Error(ErrorCode::invalid_argument, "null argument");
    }
    const auto it = model->model.user_index.find(user_id);
    if (it == model->model.user_index.end()) {
      throw Error(ErrorCode::unknown_user, std::string("unknown user id: ") + user_id);
    }
    const std::vector<int> labels = bias_labels(model->model, it->second, threshold);
    for (std::size_t a = 0; a < labels.size(); ++a) out_labels[a] = labels[a];
  });
}

ob_status ob_model_write_fit_log(const ob_model* model, const char* path) {
  return guarded([&] {
    if (!model || !path) throw Error(ErrorCode::invalid_argument, "null argument");
    write_fit_log(model->model.samples.sweep_log, path);
  });
}

ob_status ob_evaluate(const ob_dataset* data, const ob_fit_options* options, int32_t folds,
                      ob_report** out) {
  return guarded([&] {
    if (!data || !options || !out) throw Error(ErrorCode::invalid_argument, "null argument");
    ModelSpec spec;
    Hyperparameters hp;
    RunConfig cfg;
    options_to_core(*options, data->data.num_aspects, spec, hp, cfg);
    EvaluateOptions eval;
    eval.folds = folds > 0 ? folds : 5;
    auto* report = new ob_report{evaluate_model(data->data, spec, hp, cfg, eval),
                                 data->data.aspect_names};
    *out = report;
  });
}

ob_status ob_report_metric(const ob_report* report, const char* name, double* out) {
  return guarded([&] {
    if (!report || !name || !out) throw Error(ErrorCode::invalid_argument, "null argument");
    const std::string key(name);
    const EvaluationReport& r = report->report;
    if (key == "test_loglik") {
      *out = r.mean_test_loglik;
      return;
    }
    if (key == "rmse") {
      *out = r.pooled_rmse;
      return;
    }
    if (key == "aspect_pearson") {
      *out = r.aspect_pearson;
      return;
    }
    if (key == "delta_pearson_int") {
      *out = r.deltas.pearson_obs_int;
      return;
    }
    if (key == "delta_pearson_avg") {
      *out = r.deltas.pearson_obs_avg;
      return;
    }
    if (key == "group_sd_fraction") {
      if (r.group_sd_pairs.empty()) throw Error(ErrorCode::invalid_argument, "no group sd points");
      int below = 0;
      for (const GroupSdPoint& p : r.group_sd_pairs) {
        if (p.group_sd <= p.control_sd) ++below;
      }
      *out = static_cast<double>(below) / r.group_sd_pairs.size();
      return;
    }
    for (std::size_t a = 0; a < report->aspect_names.size(); ++a) {
      if (key == "rmse." + report->aspect_names[a]) {
        *out = r.per_aspect_rmse[a];
        return;
      }
      if (key == "fcp." + report->aspect_names[a]) {
        *out = r.per_aspect_fcp[a];
        return;
      }
    }
    throw Error(ErrorCode::invalid_argument, "unknown metric: " + key);
  });
}

ob_status ob_report_write(const ob_report* report, const char* out_dir) {
  return guarded([&] {
    if (!report || !out_dir) throw Error(ErrorCode::invalid_argument, "null argument");
    write_evaluation_report(report->report, report->aspect_names, out_dir);
    if (!report->report.mean_cutpoints.empty()) {
      write_category_curves(report->report.mean_cutpoints,
                            std::string(out_dir) + "/category_curves.tsv");
    }
  });
}

void ob_report_free(ob_report* report) { delete report; }

void ob_diag_options_init(ob_diag_options* options) {
  if (!options) return;
  options->seed = 1;
  options->quick = 0;
}

ob_status ob_diagnose(const ob_diag_options* options, const char* report_path,
                      int32_t* out_pass) {
  return guarded([&] {
    if (!options || !out_pass) throw Error(ErrorCode::invalid_argument, "null argument");
    const bool quick = options->quick != 0;

    const double tilts[4] = {0.0, 0.1, 1.0, 4.0};
    const auto pg = pg_moment_checks(tilts, quick ? 20000 : 200000, options->seed);

    GewekeConfig gw;
    gw.seed = options->seed;
    gw.forward_draws = quick ? 3000 : 20000;
    gw.chain_cycles = quick ? 3000 : 20000;
    const GewekeResult geweke = geweke_check(gw);

    bool pass = true;
    for (const MomentCheck& c : pg) pass = pass && std::fabs(c.zscore) < 4.0;
    pass = pass && geweke.max_abs_z < 4.0;
    *out_pass = pass ? 1 : 0;

    if (report_path) {
      std::ofstream out(report_path);
      if (!out) throw Error(ErrorCode::io, std::string("cannot write ") + report_path);
      out << "check\treference\testimate\tse\tzscore\n";
      for (const MomentCheck& c : pg) {
        out << c.name << "\t" << c.reference << "\t" << c.estimate << "\t" << c.se << "\t"
            << c.zscore << "\n";
      }
      for (const MomentCheck& c : geweke.checks) {
        out << "geweke:" << c.name << "\t" << c.reference << "\t" << c.estimate << "\t" << c.se
            << "\t" << c.zscore << "\n";
      }
    }
  });
}

uint64_t ob_bytes_hash(const void* bytes, size_t size) {
  return bytes ? fnv1a64(bytes, size) : 0;
}

ob_status ob_write_manifest(const char* command, uint64_t seed, uint64_t dataset_hash_value,
                            uint64_t config_hash_value, const char* const* outputs,
                            int32_t num_outputs, const char* path) {
  return guarded([&] {
    if (!command || !path) throw Error(ErrorCode::invalid_argument, "null argument");
    ManifestInfo info;
    info.command = command;
    info.seed = seed;
    info.dataset_hash = dataset_hash_value;
    info.config_hash = config_hash_value;
    for (int32_t i = 0; i < num_outputs; ++i) info.outputs.emplace_back(outputs[i]);
    write_manifest(info, path);
  });
}

}  // extern "C"
