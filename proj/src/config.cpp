// SPDX-License-Identifier: Apache-2.0

#include "rissense/config.hpp"

#include "rissense/seeding.hpp"
#include "rissense/serialization.hpp"

#include <json.hpp>

#include <set>

namespace rissense {

namespace {

using nlohmann::json;

/// A JSON object whose keys must all be consumed before finish().
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where("") + "must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json* get(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  Section child(const std::string& key) {
    static const json empty = json::object();
    const json* v = get(key);
    return Section(v ? *v : empty, path(key));
  }

  template <class T>
  void read(const std::string& key, T& out) {
    const json* v = get(key);
    if (!v) return;
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v->is_boolean()) throw ConfigError("expected true or false");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v->is_number_integer()) throw ConfigError("expected an integer");
        if constexpr (std::is_unsigned_v<T>) {
          if (v->is_number_integer() && !v->is_number_unsigned()) throw ConfigError("expected a non-negative integer");
        }
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v->is_number()) throw ConfigError("expected a number");
      }
      out = v->get<T>();
    } catch (const ConfigError& e) {
      throw ConfigError(where(key) + e.what());
    } catch (const json::exception&) {
      throw ConfigError(where(key) + "has the wrong type");
    }
  }

  void read_vec3(const std::string& key, Vec3& out) {
    const json* v = get(key);
    if (!v) return;
    if (!v->is_array() || v->size() != 3) throw ConfigError(where(key) + "expected [x, y, z]");
    for (int i = 0; i < 3; ++i) {
      if (!(*v)[i].is_number()) throw ConfigError(where(key) + "expected numbers");
      out[i] = (*v)[i].get<double>();
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(where(it.key()) + "unknown key");
    }
  }

  std::string path(const std::string& key) const {
    if (key.empty()) return path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  std::string where(const std::string& key) const {
    const std::string p = path(key);
    return p.empty() ? "config: " : p + ": ";
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_scene(Section s, SceneGeometry& scene) {
  int rows = scene.ris_rows, cols = scene.ris_cols, grows = scene.group_rows, gcols = scene.group_cols;
  double pitch = scene.element_pitch, side = scene.block_side;
  std::array<int, 3> counts = scene.block_counts;
  s.read("ris_rows", rows);
  s.read("ris_cols", cols);
  s.read("group_rows", grows);
  s.read("group_cols", gcols);
  s.read("element_pitch", pitch);
  s.read("block_side", side);
  if (const json* v = s.get("block_counts")) {
    if (!v->is_array() || v->size() != 3) throw ConfigError(s.where("block_counts") + "expected [M_x, M_y, M_z]");
    for (int i = 0; i < 3; ++i) {
      if (!(*v)[i].is_number_integer()) throw ConfigError(s.where("block_counts") + "expected integers");
      counts[i] = (*v)[i].get<int>();
    }
  }
  try {
    scene = make_default_scene(rows, cols, grows, gcols, counts, pitch, side);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(s.where("") + e.what());
  }
  s.read_vec3("tx_position", scene.tx_position);
  s.read_vec3("rx_position", scene.rx_position);
  s.read_vec3("soi_origin", scene.soi_origin);
  s.finish();
}

void read_radio(Section s, RadioParams& radio, std::optional<double>& snr_db) {
  s.read("carrier_frequency", radio.carrier_frequency);
  s.read("transmit_power", radio.transmit_power);
  s.read("tx_gain_los", radio.tx_gain_los);
  s.read("rx_gain_los", radio.rx_gain_los);
  s.read("tx_main_lobe_gain", radio.tx_main_lobe_gain);
  s.read("tx_half_beamwidth_deg", radio.tx_half_beamwidth_deg);
  s.read("rx_gain", radio.rx_gain);
  s.read("include_los", radio.include_los);
  const bool explicit_variances = s.has("multipath_variance") || s.has("noise_variance");
  s.read("multipath_variance", radio.multipath_variance);
  s.read("noise_variance", radio.noise_variance);
  if (const json* v = s.get("snr_db")) {
    if (v->is_null()) {
      snr_db.reset();
    } else if (v->is_number()) {
      snr_db = v->get<double>();
    } else {
      throw ConfigError(s.where("snr_db") + "expected a number or null");
    }
  }
  if (explicit_variances && snr_db) {
    throw ConfigError(s.where("snr_db") + "set snr_db to null when giving explicit noise variances");
  }
  s.finish();
}

void read_states(Section s, StateTable& table) {
  s.read("pattern_exponent", table.pattern_exponent);
  if (const json* v = s.get("table")) {
    if (!v->is_array()) throw ConfigError(s.where("table") + "expected a list of [amplitude, phase] pairs");
    table.states.clear();
    for (const auto& e : *v) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw ConfigError(s.where("table") + "expected a list of [amplitude, phase] pairs");
      }
      table.states.push_back({e[0].get<double>(), e[1].get<double>()});
    }
  }
  s.finish();
}

void read_fcao(Section s, FcaoParams& p) {
  s.read("max_outer_iterations", p.max_outer_iterations);
  s.read("lagrangian_loops", p.lagrangian_loops);
  s.read("alternating_loops", p.alternating_loops);
  s.read("prox_steps", p.prox_steps);
  s.read("prox_initial_step", p.prox_initial_step);
  s.read("pattern_budget", p.pattern_budget);
  s.read("pattern_initial_step", p.pattern_initial_step);
  s.read("pattern_min_step", p.pattern_min_step);
  s.read("rho0", p.rho0);
  s.read("rho_max", p.rho_max);
  s.read("rho_growth", p.rho_growth);
  s.read("tolerance", p.tolerance);
  std::string init = p.dual_init == DualInit::Random ? "random" : "zero";
  s.read("dual_init", init);
  if (init == "random") {
    p.dual_init = DualInit::Random;
  } else if (init == "zero") {
    p.dual_init = DualInit::Zero;
  } else {
    throw ConfigError(s.where("dual_init") + "expected \"random\" or \"zero\"");
  }
  s.finish();
}

void read_dataset(Section s, DatasetSpec& d) {
  s.read("samples_per_class", d.samples_per_class);
  s.read("train_per_class", d.train_per_class);
  s.read("test_per_class", d.test_per_class);
  s.read("noise", d.noise);
  s.finish();
}

void read_postures(Section s, PostureKnobs& k) {
  s.read("magnitude_min", k.magnitude_min);
  s.read("magnitude_max", k.magnitude_max);
  s.read("activation_probability", k.activation_probability);
  s.finish();
}

void read_training(Section s, TrainOptions& t) {
  s.read("hidden", t.hidden);
  std::string act = to_string(t.activation);
  s.read("activation", act);
  std::string init = to_string(t.init);
  s.read("init", init);
  try {
    t.activation = activation_from_string(act);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(s.where("activation") + e.what());
  }
  try {
    t.init = init_mode_from_string(init);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(s.where("init") + e.what());
  }
  s.read("standardize", t.standardize);
  s.read("learning_rate", t.learning_rate);
  s.read("max_epochs", t.max_epochs);
  s.read("patience", t.patience);
  s.read("shuffle", t.shuffle);
  s.finish();
}

void read_cost(Section s, CostModel& c) {
  if (const json* v = s.get("chi")) {
    if (!v->is_array() || v->empty()) throw ConfigError(s.where("chi") + "expected a square matrix");
    const auto n = static_cast<Eigen::Index>(v->size());
    c.chi.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const json& row = (*v)[i];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
        throw ConfigError(s.where("chi") + "expected a square matrix");
      }
      for (Eigen::Index j = 0; j < n; ++j) {
        if (!row[j].is_number()) throw ConfigError(s.where("chi") + "expected numbers");
        c.chi(i, j) = row[j].get<double>();
      }
    }
    c.priors = RealVector::Constant(n, 1.0 / static_cast<double>(n));
  }
  if (const json* v = s.get("priors")) {
    std::vector<double> p;
    try {
      p = v->get<std::vector<double>>();
    } catch (const json::exception&) {
      throw ConfigError(s.where("priors") + "expected a list of numbers");
    }
    c.priors = Eigen::Map<const RealVector>(p.data(), static_cast<Eigen::Index>(p.size()));
  }
  s.finish();
}

template <class F>
void rethrow_as_config(const std::string& field, F&& f) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field + ": " + e.what());
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  rethrow_as_config("scene", [&] { scene.validate(); });
  rethrow_as_config("radio", [&] { radio.validate(); });
  rethrow_as_config("states", [&] { states.validate(); });
  rethrow_as_config("fcao", [&] { fcao.validate(); });
  rethrow_as_config("dataset", [&] { dataset.validate(); });
  rethrow_as_config("cost", [&] { cost.validate(); });
  if (frames < 1) throw ConfigError("K: must be at least 1");
  if (cost.classes() != 4) throw ConfigError("cost.chi: must be 4x4, one row per default posture");
  if (scene.block_counts[0] < 2 || scene.block_counts[1] < 5 || scene.block_counts[2] < 8) {
    throw ConfigError("scene.block_counts: the default postures need at least a 2 x 5 x 8 grid");
  }
  if (!(postures.magnitude_min > 0.0 && postures.magnitude_min <= postures.magnitude_max)) {
    throw ConfigError("postures: need 0 < magnitude_min <= magnitude_max");
  }
  if (!(postures.activation_probability > 0.0 && postures.activation_probability <= 1.0)) {
    throw ConfigError("postures.activation_probability: must lie in (0, 1]");
  }
  if (training.hidden.empty()) throw ConfigError("training.hidden: need at least one hidden layer");
  for (int h : training.hidden) {
    if (h < 1) throw ConfigError("training.hidden: layer sizes must be positive");
  }
  if (!(training.learning_rate > 0.0 && training.learning_rate < 1.0)) {
    throw ConfigError("training.learning_rate: must lie in (0, 1)");
  }
  if (training.max_epochs < 1) throw ConfigError("training.max_epochs: must be at least 1");
  if (training.patience < 1) throw ConfigError("training.patience: must be at least 1");
  if (snr_db && !std::isfinite(*snr_db)) throw ConfigError("radio.snr_db: must be finite");
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: not valid JSON: ") + e.what());
  }
  ExperimentConfig c;
  Section root(j, "");
  read_scene(root.child("scene"), c.scene);
  read_radio(root.child("radio"), c.radio, c.snr_db);
  read_states(root.child("states"), c.states);
  read_fcao(root.child("fcao"), c.fcao);
  read_dataset(root.child("dataset"), c.dataset);
  read_postures(root.child("postures"), c.postures);
  read_training(root.child("training"), c.training);
  read_cost(root.child("cost"), c.cost);
  root.read("K", c.frames);
  // L, N_a and M are implied by the scene and state table; when given they must agree.
  int L = c.groups(), Na = c.state_count(), M = c.blocks();
  root.read("L", L);
  root.read("N_a", Na);
  root.read("M", M);
  if (L != c.groups()) throw ConfigError("L: disagrees with scene.group_rows * scene.group_cols");
  if (Na != c.state_count()) throw ConfigError("N_a: disagrees with the length of states.table");
  if (M != c.blocks()) throw ConfigError("M: disagrees with scene.block_counts");
  root.read("seed", c.seed);
  std::string out = c.out_dir.string();
  root.read("out", out);
  c.out_dir = out;
  root.finish();
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const ArtifactError& e) {
    throw ConfigError(e.what());
  }
  return parse_config(text);
}

std::uint64_t stream_seed(const ExperimentConfig& config, SeedStream stream) {
  return derive_seed(config.seed, {static_cast<std::uint64_t>(stream)});
}

}  // namespace rissense
