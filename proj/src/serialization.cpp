// SPDX-License-Identifier: Apache-2.0

#include "rissense/serialization.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace rissense {

namespace {

constexpr std::string_view kConfigMagic = "# rissense configuration-matrix v1";
constexpr std::string_view kDictMagic = "# rissense sensing-dictionary v1";
constexpr std::string_view kDatasetMagic = "# rissense dataset v1";
constexpr std::string_view kModelMagic = "rissense-model v1";

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> split_ws(std::string_view line) {
  std::istringstream is{std::string(line)};
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

/// Parses "# key=value key=value" into a map.
std::map<std::string, std::string> parse_header_fields(const std::string& line) {
  if (line.empty() || line[0] != '#') throw ArtifactError("expected a '#' header line, got: " + line);
  std::map<std::string, std::string> out;
  for (const auto& tok : split_ws(std::string_view(line).substr(1))) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ArtifactError("malformed header field '" + tok + "'");
    out[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return out;
}

const std::string& field(const std::map<std::string, std::string>& f, const std::string& key) {
  const auto it = f.find(key);
  if (it == f.end()) throw ArtifactError("header is missing '" + key + "'");
  return it->second;
}

int parse_int(const std::string& s) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ArtifactError("not an integer: '" + s + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ArtifactError("not an unsigned integer: '" + s + "'");
  return v;
}

std::string expect_line(std::istream& is, const char* what) {
  std::string line;
  if (!std::getline(is, line)) throw ArtifactError(std::string("unexpected end of file before ") + what);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::string configuration_body(const ConfigurationMatrix& T) {
  std::string body;
  for (int k = 0; k < T.frames(); ++k) {
    for (int j = 0; j < T.row_length(); ++j) {
      if (j) body += ' ';
      body += format_double(T.durations()(k, j));
    }
    body += '\n';
  }
  return body;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

std::uint64_t parse_hex64(const std::string& s) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
  if (ec != std::errc() || p != s.data() + s.size()) throw ArtifactError("not a hex hash: '" + s + "'");
  return v;
}

std::string format_double(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("cannot format double");
  return std::string(buf, p);
}

double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
    throw ArtifactError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

std::uint64_t scene_fingerprint(const SceneGeometry& scene, const StateTable& table, const RadioParams& params) {
  std::ostringstream os;
  auto d = [&](double v) { os << format_double(v) << ' '; };
  os << scene.ris_rows << ' ' << scene.ris_cols << ' ' << scene.group_rows << ' ' << scene.group_cols << ' ';
  d(scene.element_pitch);
  for (const Vec3* p : {&scene.tx_position, &scene.rx_position, &scene.soi_origin}) {
    d(p->x());
    d(p->y());
    d(p->z());
  }
  d(scene.block_side);
  os << scene.block_counts[0] << ' ' << scene.block_counts[1] << ' ' << scene.block_counts[2] << " | ";
  for (const auto& s : table.states) {
    d(s.amplitude_ratio);
    d(s.phase_shift);
  }
  d(table.pattern_exponent);
  os << "| ";
  d(params.carrier_frequency);
  d(params.tx_main_lobe_gain);
  d(params.tx_half_beamwidth_deg);
  d(params.rx_gain);
  return fnv1a64(os.str());
}

void write_configuration(std::ostream& os, const ConfigurationMatrix& T) {
  const std::string body = configuration_body(T);
  os << kConfigMagic << '\n';
  os << "# frames=" << T.frames() << " groups=" << T.groups() << " states=" << T.states()
     << " frame_length=" << format_double(T.frame_length()) << " checksum=" << hex64(fnv1a64(body)) << '\n';
  os << body;
}

ConfigurationMatrix read_configuration(std::istream& is) {
  if (expect_line(is, "configuration header") != kConfigMagic) {
    throw ArtifactError("not a configuration-matrix artifact");
  }
  const auto f = parse_header_fields(expect_line(is, "configuration header"));
  const int K = parse_int(field(f, "frames"));
  const int L = parse_int(field(f, "groups"));
  const int Na = parse_int(field(f, "states"));
  const double delta = parse_double(field(f, "frame_length"));
  const std::uint64_t checksum = parse_hex64(field(f, "checksum"));
  if (K < 1 || L < 1 || Na < 1) throw ArtifactError("configuration header has non-positive dimensions");

  RealMatrix d(K, L * Na);
  std::string body;
  for (int k = 0; k < K; ++k) {
    const std::string line = expect_line(is, "all configuration rows");
    const auto tok = split_ws(line);
    if (static_cast<int>(tok.size()) != L * Na) {
      throw ArtifactError("configuration row " + std::to_string(k + 1) + " has " + std::to_string(tok.size()) +
                          " fields, expected " + std::to_string(L * Na));
    }
    for (int j = 0; j < L * Na; ++j) d(k, j) = parse_double(tok[j]);
    body += line + '\n';
  }
  if (fnv1a64(body) != checksum) throw ArtifactError("configuration checksum mismatch (corrupt artifact)");
  ConfigurationMatrix T(std::move(d), L, Na, delta);
  const auto report = validate_configuration(T);
  if (!report.ok()) throw ArtifactError("configuration artifact violates the simplex constraints:\n" + report.describe());
  return T;
}

void save_configuration(const std::filesystem::path& path, const ConfigurationMatrix& T) {
  std::ostringstream os;
  write_configuration(os, T);
  write_text_file(path, os.str());
}

ConfigurationMatrix load_configuration(const std::filesystem::path& path) {
  std::istringstream is(read_text_file(path));
  return read_configuration(is);
}

std::uint64_t configuration_hash(const ConfigurationMatrix& T) {
  std::ostringstream os;
  write_configuration(os, T);
  return fnv1a64(os.str());
}

void write_dictionary(std::ostream& os, const SensingDictionary& dict) {
  os << kDictMagic << '\n';
  os << "# rows=" << dict.A.rows() << " cols=" << dict.A.cols() << " groups=" << dict.groups
     << " states=" << dict.states << " carrier_frequency=" << format_double(dict.carrier_frequency)
     << " scene_hash=" << hex64(dict.scene_hash) << '\n';
  for (Eigen::Index r = 0; r < dict.A.rows(); ++r) {
    for (Eigen::Index c = 0; c < dict.A.cols(); ++c) {
      if (c) os << ' ';
      os << format_double(dict.A(r, c).real()) << ' ' << format_double(dict.A(r, c).imag());
    }
    os << '\n';
  }
}

SensingDictionary read_dictionary(std::istream& is) {
  if (expect_line(is, "dictionary header") != kDictMagic) throw ArtifactError("not a sensing-dictionary artifact");
  const auto f = parse_header_fields(expect_line(is, "dictionary header"));
  SensingDictionary dict;
  const int rows = parse_int(field(f, "rows"));
  const int cols = parse_int(field(f, "cols"));
  dict.groups = parse_int(field(f, "groups"));
  dict.states = parse_int(field(f, "states"));
  dict.carrier_frequency = parse_double(field(f, "carrier_frequency"));
  dict.scene_hash = parse_hex64(field(f, "scene_hash"));
  if (rows != dict.groups * dict.states) throw ArtifactError("dictionary rows must equal groups * states");
  dict.A.resize(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const auto tok = split_ws(expect_line(is, "all dictionary rows"));
    if (static_cast<int>(tok.size()) != 2 * cols) {
      throw ArtifactError("dictionary row " + std::to_string(r + 1) + " has the wrong number of fields");
    }
    for (int c = 0; c < cols; ++c) dict.A(r, c) = Complex(parse_double(tok[2 * c]), parse_double(tok[2 * c + 1]));
  }
  return dict;
}

std::uint64_t dictionary_hash(const SensingDictionary& dict) {
  std::ostringstream os;
  write_dictionary(os, dict);
  return fnv1a64(os.str());
}

void write_dataset(std::ostream& os, const LabeledDataset& data, const DatasetHeader& header) {
  os << kDatasetMagic << '\n';
  os << "# split=" << (header.split == Split::Train ? "train" : "test") << " frames=" << header.frames
     << " classes=" << header.classes << " seed=" << header.seed
     << " configuration_hash=" << hex64(header.configuration_hash)
     << " dictionary_hash=" << hex64(header.dictionary_hash) << '\n';
  os << "label";
  for (int k = 1; k <= header.frames; ++k) os << ",re_" << k << ",im_" << k;
  os << '\n';
  for (const auto& s : data.samples) {
    if (s.y.size() != header.frames) throw std::invalid_argument("sample length does not match the header");
    os << (s.label + 1);
    for (Eigen::Index k = 0; k < s.y.size(); ++k) {
      os << ',' << format_double(s.y[k].real()) << ',' << format_double(s.y[k].imag());
    }
    os << '\n';
  }
}

LabeledDataset read_dataset(std::istream& is, DatasetHeader* header_out) {
  if (expect_line(is, "dataset header") != kDatasetMagic) throw ArtifactError("not a dataset artifact");
  const auto f = parse_header_fields(expect_line(is, "dataset header"));
  DatasetHeader h;
  const std::string& split_name = field(f, "split");
  if (split_name != "train" && split_name != "test") throw ArtifactError("dataset split must be train or test");
  h.split = split_name == "train" ? Split::Train : Split::Test;
  h.frames = parse_int(field(f, "frames"));
  h.classes = parse_int(field(f, "classes"));
  h.seed = parse_u64(field(f, "seed"));
  h.configuration_hash = parse_hex64(field(f, "configuration_hash"));
  h.dictionary_hash = parse_hex64(field(f, "dictionary_hash"));
  if (h.frames < 1 || h.classes < 2) throw ArtifactError("dataset header has invalid dimensions");
  expect_line(is, "dataset column header");

  LabeledDataset data;
  data.classes = h.classes;
  data.split = h.split;
  std::string line;
  int line_no = 3;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tok = split(line, ',');
    try {
      if (static_cast<int>(tok.size()) != 1 + 2 * h.frames) {
        throw ArtifactError("expected " + std::to_string(1 + 2 * h.frames) + " fields, found " +
                            std::to_string(tok.size()));
      }
      LabeledSample s;
      s.label = parse_int(tok[0]) - 1;
      if (s.label < 0 || s.label >= h.classes) throw ArtifactError("label outside [1, " + std::to_string(h.classes) + "]");
      s.y.resize(h.frames);
      for (int k = 0; k < h.frames; ++k) s.y[k] = Complex(parse_double(tok[1 + 2 * k]), parse_double(tok[2 + 2 * k]));
      data.samples.push_back(std::move(s));
    } catch (const ArtifactError& e) {
      throw ArtifactError("malformed dataset row at line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (header_out) *header_out = h;
  return data;
}

void save_dataset(const std::filesystem::path& path, const LabeledDataset& data, const DatasetHeader& header) {
  std::ostringstream os;
  write_dataset(os, data, header);
  write_text_file(path, os.str());
}

LabeledDataset load_dataset(const std::filesystem::path& path, DatasetHeader* header) {
  std::istringstream is(read_text_file(path));
  try {
    return read_dataset(is, header);
  } catch (const ArtifactError& e) {
    throw ArtifactError(path.string() + ": " + e.what());
  }
}

void write_model(std::ostream& os, const DecisionNetwork& net) {
  os << kModelMagic << '\n';
  os << "layers";
  for (int s : net.layer_sizes()) os << ' ' << s;
  os << '\n' << "activation " << to_string(net.activation()) << '\n';
  os << "mean";
  for (Eigen::Index j = 0; j < net.feature_mean().size(); ++j) os << ' ' << format_double(net.feature_mean()[j]);
  os << '\n' << "scale";
  for (Eigen::Index j = 0; j < net.feature_scale().size(); ++j) os << ' ' << format_double(net.feature_scale()[j]);
  const RealVector theta = net.parameters();
  os << '\n' << "theta " << theta.size() << '\n';
  for (Eigen::Index j = 0; j < theta.size(); ++j) os << format_double(theta[j]) << '\n';
}

DecisionNetwork read_model(std::istream& is) {
  if (expect_line(is, "model header") != kModelMagic) throw ArtifactError("not a model artifact (or unsupported version)");
  auto keyed = [&](const char* key) {
    auto tok = split_ws(expect_line(is, key));
    if (tok.empty() || tok[0] != key) throw ArtifactError(std::string("model is missing the '") + key + "' line");
    tok.erase(tok.begin());
    return tok;
  };
  std::vector<int> sizes;
  for (const auto& t : keyed("layers")) sizes.push_back(parse_int(t));
  const auto act = keyed("activation");
  if (act.size() != 1) throw ArtifactError("model activation line is malformed");
  DecisionNetwork net;
  try {
    net = DecisionNetwork(sizes, activation_from_string(act[0]));
  } catch (const std::invalid_argument& e) {
    throw ArtifactError(std::string("model layer description is invalid: ") + e.what());
  }
  auto vec = [&](const char* key) {
    const auto tok = keyed(key);
    RealVector v(tok.size());
    for (std::size_t j = 0; j < tok.size(); ++j) v[j] = parse_double(tok[j]);
    return v;
  };
  RealVector mean = vec("mean");
  RealVector scale = vec("scale");
  try {
    net.set_standardization(std::move(mean), std::move(scale));
  } catch (const std::invalid_argument& e) {
    throw ArtifactError(std::string("model standardization is invalid: ") + e.what());
  }
  const auto count = keyed("theta");
  if (count.size() != 1 || parse_int(count[0]) != net.parameter_count()) {
    throw ArtifactError("model parameter count does not match its layer sizes");
  }
  RealVector theta(net.parameter_count());
  for (Eigen::Index j = 0; j < theta.size(); ++j) theta[j] = parse_double(expect_line(is, "all parameters"));
  net.set_parameters(theta);
  return net;
}

void write_mu_history(std::ostream& os, const std::vector<FcaoRecord>& history) {
  os << "iteration,frame_index,mu\n";
  for (const auto& r : history) os << r.iteration << ',' << r.frame << ',' << format_double(r.mu) << '\n';
}

void write_coherence_table(std::ostream& os, const CoherenceVector& u, Eigen::Index M) {
  os << "m,m_prime,abs_u\n";
  for (Eigen::Index m = 0; m < M; ++m) {
    for (Eigen::Index m2 = m + 1; m2 < M; ++m2) {
      os << m << ',' << m2 << ',' << format_double(std::abs(u[pair_index(m, m2, M)])) << '\n';
    }
  }
}

void write_confusion(std::ostream& os, const EvaluationReport& report, const std::vector<std::string>& names) {
  const auto P = report.confusion.rows();
  os << "truth";
  for (Eigen::Index j = 0; j < P; ++j) os << ',' << (j < static_cast<Eigen::Index>(names.size()) ? names[j] : std::to_string(j + 1));
  os << ",accuracy\n";
  for (Eigen::Index i = 0; i < P; ++i) {
    os << (i < static_cast<Eigen::Index>(names.size()) ? names[i] : std::to_string(i + 1));
    for (Eigen::Index j = 0; j < P; ++j) os << ',' << report.confusion(i, j);
    os << ',' << format_double(report.per_class_accuracy[i]) << '\n';
  }
}

void write_summary(std::ostream& os, const EvaluationReport& report) {
  os << "metric,value\n";
  os << "samples," << report.samples << '\n';
  os << "accuracy," << format_double(report.accuracy) << '\n';
  os << "psi," << format_double(report.psi) << '\n';
  os << "mean_true_probability," << format_double(report.mean_true_probability) << '\n';
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ArtifactError("cannot write '" + path.string() + "'");
  out << contents;
  if (!out) throw ArtifactError("failed writing '" + path.string() + "'");
}

}  // namespace rissense
