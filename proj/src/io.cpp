// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#include "ordbias/io.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#ifndef ORDBIAS_GIT_DESCRIBE
#define ORDBIAS_GIT_DESCRIBE "unknown"
#endif

namespace ordbias {

namespace {

std::vector<std::string> split_line(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, delimiter)) fields.push_back(field);
  if (!line.empty() && line.back() == delimiter) fields.emplace_back();
  return fields;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

std::vector<RawRating> read_raw_ratings(const std::string& path, char delimiter,
                                        std::vector<std::string>* aspect_names) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::parse, path + " is empty");
  const std::vector<std::string> header = split_line(strip_cr(line), delimiter);
  if (header.size() < 3 || header[0] != "user_id" || header[1] != "item_id") {
    throw Error(ErrorCode::parse, path + ": header must start with user_id, item_id");
  }
  if (aspect_names) aspect_names->assign(header.begin() + 2, header.end());

  std::vector<RawRating> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_line(line, delimiter);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::parse,
                  path + ":" + std::to_string(line_no) + ": wrong field count");
    }
    RawRating row;
    row.user_id = fields[0];
    row.item_id = fields[1];
    for (std::size_t f = 2; f < fields.size(); ++f) {
      try {
        std::size_t used = 0;
        const int value = std::stoi(fields[f], &used);
        if (used != fields[f].size()) throw std::invalid_argument(fields[f]);
        row.ratings.push_back(value);
      } catch (const std::exception&) {
        throw Error(ErrorCode::parse, path + ":" + std::to_string(line_no) +
                                          ": non-integer rating '" + fields[f] + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

RatingsDataset read_ratings_csv(const std::string& path, int num_levels, char delimiter) {
  std::vector<std::string> names;
  const std::vector<RawRating> rows = read_raw_ratings(path, delimiter, &names);
  return validate_dataset(rows, num_levels, names);
}

void write_ratings_csv(const RatingsDataset& data, const std::string& path, char delimiter) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path);
  out << "user_id" << delimiter << "item_id";
  for (const std::string& name : data.aspect_names) out << delimiter << name;
  out << "\n";
  for (const Observation& obs : data.observations) {
    out << data.user_ids[obs.user] << delimiter << data.item_ids[obs.item];
    for (int r : obs.ratings) out << delimiter << r;
    out << "\n";
  }
}

namespace {

// Little-endian scalar framing, independent of host byte order.
template <typename T>
void put(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(std::begin(bytes), std::end(bytes));
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T take(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  in.read(reinterpret_cast<char*>(bytes), sizeof(T));
  if (!in) throw Error(ErrorCode::parse, "truncated model archive");
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(std::begin(bytes), std::end(bytes));
  }
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

void put_string(std::ostream& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string take_string(std::istream& in) {
  const auto n = take<std::uint32_t>(in);
  std::string s(n, '\0');
  in.read(s.data(), n);
  if (!in) throw Error(ErrorCode::parse, "truncated model archive");
  return s;
}

void put_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m.rows()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) put<double>(out, m(i, j));
  }
}

Eigen::MatrixXd take_matrix(std::istream& in) {
  const auto rows = take<std::uint32_t>(in);
  const auto cols = take<std::uint32_t>(in);
  Eigen::MatrixXd m(rows, cols);
  for (std::uint32_t i = 0; i < rows; ++i) {
    for (std::uint32_t j = 0; j < cols; ++j) m(i, j) = take<double>(in);
  }
  return m;
}

void put_vector(std::ostream& out, const Eigen::VectorXd& v) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) put<double>(out, v[i]);
}

Eigen::VectorXd take_vector(std::istream& in) {
  const auto n = take<std::uint32_t>(in);
  Eigen::VectorXd v(n);
  for (std::uint32_t i = 0; i < n; ++i) v[i] = take<double>(in);
  return v;
}

void put_doubles(std::ostream& out, const std::vector<double>& v) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(v.size()));
  for (double x : v) put<double>(out, x);
}

std::vector<double> take_doubles(std::istream& in) {
  const auto n = take<std::uint32_t>(in);
  std::vector<double> v(n);
  for (std::uint32_t i = 0; i < n; ++i) v[i] = take<double>(in);
  return v;
}

void put_ints(std::ostream& out, const std::vector<int>& v) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(v.size()));
  for (int x : v) put<std::int32_t>(out, x);
}

std::vector<int> take_ints(std::istream& in) {
  const auto n = take<std::uint32_t>(in);
  std::vector<int> v(n);
  for (std::uint32_t i = 0; i < n; ++i) v[i] = take<std::int32_t>(in);
  return v;
}

constexpr char kMagic[4] = {'O', 'B', 'M', '1'};

nlohmann::ordered_json hyper_to_json(const Hyperparameters& hp) {
  auto matrix = [](const Eigen::MatrixXd& m) {
    std::vector<std::vector<double>> rows;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      rows.emplace_back(m.row(i).begin(), m.row(i).end());
    }
    return rows;
  };
  nlohmann::ordered_json j;
  j["num_groups"] = hp.num_groups;
  j["alpha"] = std::vector<double>(hp.alpha.begin(), hp.alpha.end());
  j["Lambda"] = matrix(hp.Lambda);
  j["B"] = matrix(hp.B);
  j["niw_mu0"] = std::vector<double>(hp.niw_mu0.begin(), hp.niw_mu0.end());
  j["niw_kappa0"] = hp.niw_kappa0;
  j["niw_nu0"] = hp.niw_nu0;
  j["niw_Psi0"] = matrix(hp.niw_Psi0);
  return j;
}

}  // namespace

void save_model(const FittedModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path);
  out.write(kMagic, 4);
  put<std::uint32_t>(out, 1);

  put<std::uint8_t>(out, model.spec.ordinal_link ? 1 : 0);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(model.spec.bias));
  put<std::int32_t>(out, model.num_levels);

  put<std::uint32_t>(out, static_cast<std::uint32_t>(model.aspect_names.size()));
  for (const auto& s : model.aspect_names) put_string(out, s);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(model.user_ids.size()));
  for (const auto& s : model.user_ids) put_string(out, s);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(model.item_ids.size()));
  for (const auto& s : model.item_ids) put_string(out, s);

  const Hyperparameters& hp = model.hp;
  put<std::int32_t>(out, hp.num_groups);
  put_vector(out, hp.alpha);
  put_matrix(out, hp.Lambda);
  put_matrix(out, hp.B);
  put_vector(out, hp.niw_mu0);
  put<double>(out, hp.niw_kappa0);
  put<double>(out, hp.niw_nu0);
  put_matrix(out, hp.niw_Psi0);

  const RunConfig& cfg = model.cfg;
  put<std::uint64_t>(out, cfg.seed);
  put<std::int32_t>(out, cfg.burn_in);
  put<std::int32_t>(out, cfg.num_samples);
  put<std::int32_t>(out, cfg.thinning);
  put_doubles(out, cfg.init_cutpoints);
  // parallel_blocks is an execution detail with no effect on the chain, so
  // archives stay byte-identical across serial and parallel runs
  put<std::uint8_t>(out, cfg.literal_cutpoint_range ? 1 : 0);

  put_matrix(out, model.samples.alignment_reference);
  put_doubles(out, model.samples.sweep_log);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(model.samples.states.size()));
  for (const SampleSnapshot& snap : model.samples.states) {
    put_matrix(out, snap.z);
    put_matrix(out, snap.m);
    put_ints(out, snap.s);
    put_doubles(out, snap.cuts);
    put_vector(out, snap.mu);
    put_matrix(out, snap.Sigma);
  }
  if (!out) throw Error(ErrorCode::io, "write failure on " + path);

  std::ofstream sidecar(path + ".meta.json");
  if (!sidecar) throw Error(ErrorCode::io, "cannot write " + path + ".meta.json");
  nlohmann::ordered_json meta;
  meta["format"] = "ordbias-model";
  meta["version"] = 1;
  meta["model"] = model_name(model.spec);
  meta["num_levels"] = model.num_levels;
  meta["num_aspects"] = model.aspect_names.size();
  meta["num_users"] = model.user_ids.size();
  meta["num_items"] = model.item_ids.size();
  meta["retained_samples"] = model.samples.states.size();
  meta["seed"] = model.cfg.seed;
  meta["hyperparameters"] = hyper_to_json(model.hp);
  sidecar << meta.dump(2) << "\n";
}

FittedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw Error(ErrorCode::parse, path + " is not a model archive");
  }
  const auto version = take<std::uint32_t>(in);
  if (version != 1) throw Error(ErrorCode::parse, "unsupported archive version");

  FittedModel model;
  model.spec.ordinal_link = take<std::uint8_t>(in) != 0;
  model.spec.bias = static_cast<BiasMode>(take<std::uint8_t>(in));
  model.num_levels = take<std::int32_t>(in);

  const auto n_aspects = take<std::uint32_t>(in);
  for (std::uint32_t i = 0; i < n_aspects; ++i) model.aspect_names.push_back(take_string(in));
  const auto n_users = take<std::uint32_t>(in);
  for (std::uint32_t i = 0; i < n_users; ++i) model.user_ids.push_back(take_string(in));
  const auto n_items = take<std::uint32_t>(in);
  for (std::uint32_t i = 0; i < n_items; ++i) model.item_ids.push_back(take_string(in));

  model.hp.num_groups = take<std::int32_t>(in);
  model.hp.alpha = take_vector(in);
  model.hp.Lambda = take_matrix(in);
  model.hp.B = take_matrix(in);
  model.hp.niw_mu0 = take_vector(in);
  model.hp.niw_kappa0 = take<double>(in);
  model.hp.niw_nu0 = take<double>(in);
  model.hp.niw_Psi0 = take_matrix(in);

  model.cfg.seed = take<std::uint64_t>(in);
  model.cfg.burn_in = take<std::int32_t>(in);
  model.cfg.num_samples = take<std::int32_t>(in);
  model.cfg.thinning = take<std::int32_t>(in);
  model.cfg.init_cutpoints = take_doubles(in);
  model.cfg.literal_cutpoint_range = take<std::uint8_t>(in) != 0;

  model.samples.spec = model.spec;
  model.samples.alignment_reference = take_matrix(in);
  model.samples.sweep_log = take_doubles(in);
  const auto n_states = take<std::uint32_t>(in);
  for (std::uint32_t i = 0; i < n_states; ++i) {
    SampleSnapshot snap;
    snap.z = take_matrix(in);
    snap.m = take_matrix(in);
    snap.s = take_ints(in);
    snap.cuts = take_doubles(in);
    snap.mu = take_vector(in);
    snap.Sigma = take_matrix(in);
    model.samples.states.push_back(std::move(snap));
  }
  model.rebuild_indices();
  return model;
}

std::uint64_t fnv1a64(const void* bytes, std::size_t size, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(bytes);
  std::uint64_t hash = seed;
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= p[i];
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

namespace {

std::uint64_t hash_string(std::uint64_t h, const std::string& s) {
  h = fnv1a64(s.data(), s.size(), h);
  return fnv1a64("\x1f", 1, h);
}

std::uint64_t hash_doubles(std::uint64_t h, const double* p, std::size_t n) {
  return fnv1a64(p, n * sizeof(double), h);
}

}  // namespace

std::uint64_t dataset_hash(const RatingsDataset& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const std::int64_t dims[4] = {data.num_users, data.num_items, data.num_aspects,
                                data.num_levels};
  h = fnv1a64(dims, sizeof(dims), h);
  for (const std::string& s : data.user_ids) h = hash_string(h, s);
  for (const std::string& s : data.item_ids) h = hash_string(h, s);
  for (const std::string& s : data.aspect_names) h = hash_string(h, s);
  for (const Observation& obs : data.observations) {
    const std::int32_t pair[2] = {obs.user, obs.item};
    h = fnv1a64(pair, sizeof(pair), h);
    h = fnv1a64(obs.ratings.data(), obs.ratings.size() * sizeof(int), h);
  }
  return h;
}

std::uint64_t config_hash(const Hyperparameters& hp, const RunConfig& cfg,
                          const ModelSpec& spec) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = hash_string(h, model_name(spec));
  const std::int64_t ints[5] = {hp.num_groups, cfg.burn_in, cfg.num_samples, cfg.thinning,
                                static_cast<std::int64_t>(cfg.seed)};
  h = fnv1a64(ints, sizeof(ints), h);
  h = hash_doubles(h, hp.alpha.data(), hp.alpha.size());
  h = hash_doubles(h, hp.Lambda.data(), hp.Lambda.size());
  h = hash_doubles(h, hp.B.data(), hp.B.size());
  h = hash_doubles(h, hp.niw_mu0.data(), hp.niw_mu0.size());
  const double scalars[2] = {hp.niw_kappa0, hp.niw_nu0};
  h = hash_doubles(h, scalars, 2);
  h = hash_doubles(h, hp.niw_Psi0.data(), hp.niw_Psi0.size());
  h = hash_doubles(h, cfg.init_cutpoints.data(), cfg.init_cutpoints.size());
  const std::uint8_t flags[1] = {cfg.literal_cutpoint_range};
  h = fnv1a64(flags, sizeof(flags), h);
  return h;
}

const char* build_stamp() { return ORDBIAS_GIT_DESCRIBE; }

void write_ground_truth(const GroundTruth& truth, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path);
  out << "block\tindex\taspect\tvalue\n";
  for (Eigen::Index g = 0; g < truth.theta.size(); ++g) {
    out << "theta\t" << g << "\t-\t" << truth.theta[g] << "\n";
  }
  for (Eigen::Index g = 0; g < truth.m_true.rows(); ++g) {
    for (Eigen::Index a = 0; a < truth.m_true.cols(); ++a) {
      out << "m\t" << g << "\t" << a << "\t" << truth.m_true(g, a) << "\n";
    }
  }
  for (std::size_t j = 0; j < truth.s_true.size(); ++j) {
    out << "s\t" << j << "\t-\t" << truth.s_true[j] << "\n";
  }
  for (Eigen::Index i = 0; i < truth.z_true.rows(); ++i) {
    for (Eigen::Index a = 0; a < truth.z_true.cols(); ++a) {
      out << "z\t" << i << "\t" << a << "\t" << truth.z_true(i, a) << "\n";
    }
  }
  for (std::size_t k = 0; k < truth.c_true.size(); ++k) {
    out << "c\t" << k + 1 << "\t-\t" << truth.c_true[k] << "\n";
  }
}

void write_fit_log(const std::vector<double>& sweep_log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path);
  out << "sweep\tjoint_log_density\n";
  for (std::size_t t = 0; t < sweep_log.size(); ++t) {
    out << t + 1 << "\t" << sweep_log[t] << "\n";
  }
}

void write_category_curves(const std::vector<double>& cuts, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path);
  const CutPoints c(cuts);
  const double lo = cuts.front() - 5.0;
  const double hi = cuts.back() + 5.0;
  out << "v";
  for (int k = 1; k <= c.num_levels(); ++k) out << "\tp" << k;
  out << "\n";
  const int steps = 400;
  for (int i = 0; i <= steps; ++i) {
    const double v = lo + (hi - lo) * i / steps;
    const Eigen::VectorXd probs = category_probabilities(v, c);
    out << v;
    for (int k = 0; k < c.num_levels(); ++k) out << "\t" << probs[k];
    out << "\n";
  }
}

void write_evaluation_report(const EvaluationReport& report,
                             const std::vector<std::string>& aspect_names,
                             const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  {
    std::ofstream out(out_dir + "/metrics.tsv");
    if (!out) throw Error(ErrorCode::io, "cannot write metrics.tsv");
    out << "metric\taspect\tvalue\n";
    out << "test_loglik\tall\t" << report.mean_test_loglik << "\n";
    out << "rmse\tall\t" << report.pooled_rmse << "\n";
    for (std::size_t a = 0; a < aspect_names.size(); ++a) {
      out << "rmse\t" << aspect_names[a] << "\t" << report.per_aspect_rmse[a] << "\n";
    }
    for (std::size_t a = 0; a < aspect_names.size(); ++a) {
      out << "fcp\t" << aspect_names[a] << "\t" << report.per_aspect_fcp[a] << "\n";
    }
    out << "aspect_ranking_pearson\tall\t" << report.aspect_pearson << "\n";
    out << "delta_pearson_obs_int\tall\t" << report.deltas.pearson_obs_int << "\n";
    out << "delta_pearson_obs_avg\tall\t" << report.deltas.pearson_obs_avg << "\n";
  }
  {
    std::ofstream out(out_dir + "/group_sd.tsv");
    out << "item\taspect\tgroup\tgroup_raters\tgroup_sd\tcontrol_sd\n";
    for (const GroupSdPoint& p : report.group_sd_pairs) {
      out << p.item << "\t" << p.aspect << "\t" << p.group << "\t" << p.group_raters << "\t"
          << p.group_sd << "\t" << p.control_sd << "\n";
    }
  }
  {
    std::ofstream out(out_dir + "/delta_triples.tsv");
    out << "d_obs\td_avg\td_int\n";
    for (const DeltaTriple& t : report.deltas.triples) {
      out << t.d_obs << "\t" << t.d_avg << "\t" << t.d_int << "\n";
    }
  }
  {
    std::ofstream out(out_dir + "/delta_bins.tsv");
    out << "axis\tbin_center\tmean_d_obs\tcount\n";
    for (const DeltaBin& b : report.deltas.bins_int) {
      out << "d_int\t" << b.center << "\t" << b.mean_d_obs << "\t" << b.count << "\n";
    }
    for (const DeltaBin& b : report.deltas.bins_avg) {
      out << "d_avg\t" << b.center << "\t" << b.mean_d_obs << "\t" << b.count << "\n";
    }
  }
  if (report.group_bias.size() > 0) {
    std::ofstream out(out_dir + "/group_bias.tsv");
    out << "group";
    for (const std::string& name : aspect_names) out << "\t" << name;
    out << "\n";
    for (Eigen::Index g = 0; g < report.group_bias.rows(); ++g) {
      out << g;
      for (Eigen::Index a = 0; a < report.group_bias.cols(); ++a) {
        out << "\t" << report.group_bias(g, a);
      }
      out << "\n";
    }
  }
}

void write_manifest(const ManifestInfo& info, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path);
  nlohmann::ordered_json j;
  j["command"] = info.command;
  j["seed"] = info.seed;
  j["dataset_hash"] = info.dataset_hash;
  j["config_hash"] = info.config_hash;
  j["build"] = build_stamp();
  j["outputs"] = info.outputs;
  out << j.dump(2) << "\n";
}

}  // namespace ordbias
