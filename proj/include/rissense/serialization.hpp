// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "rissense/channel.hpp"
#include "rissense/coherence.hpp"
#include "rissense/fcao.hpp"
#include "rissense/geometry.hpp"
#include "rissense/recognizer.hpp"
#include "rissense/ris.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rissense {

/// Missing, malformed or inconsistent on-disk artifact.
class ArtifactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);
std::uint64_t parse_hex64(const std::string& s);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view s);

std::uint64_t scene_fingerprint(const SceneGeometry& scene, const StateTable& table, const RadioParams& params);

// Configuration matrix: two '#' header lines, then one line per frame with
// L*N_a space-separated durations. The header checksum covers the data lines.
void write_configuration(std::ostream& os, const ConfigurationMatrix& T);
ConfigurationMatrix read_configuration(std::istream& is);
void save_configuration(const std::filesystem::path& path, const ConfigurationMatrix& T);
ConfigurationMatrix load_configuration(const std::filesystem::path& path);
std::uint64_t configuration_hash(const ConfigurationMatrix& T);

void write_dictionary(std::ostream& os, const SensingDictionary& dict);
SensingDictionary read_dictionary(std::istream& is);
std::uint64_t dictionary_hash(const SensingDictionary& dict);

struct DatasetHeader {
  Split split = Split::Train;
  int frames = 0;
  int classes = 0;
  std::uint64_t seed = 0;
  std::uint64_t configuration_hash = 0;
  std::uint64_t dictionary_hash = 0;
};

// Dataset: '#' header lines, a CSV header row, then label (1-based) followed
// by Re/Im of every frame.
void write_dataset(std::ostream& os, const LabeledDataset& data, const DatasetHeader& header);
LabeledDataset read_dataset(std::istream& is, DatasetHeader* header = nullptr);
void save_dataset(const std::filesystem::path& path, const LabeledDataset& data, const DatasetHeader& header);
LabeledDataset load_dataset(const std::filesystem::path& path, DatasetHeader* header = nullptr);

void write_model(std::ostream& os, const DecisionNetwork& net);
DecisionNetwork read_model(std::istream& is);

void write_mu_history(std::ostream& os, const std::vector<FcaoRecord>& history);
void write_coherence_table(std::ostream& os, const CoherenceVector& u, Eigen::Index M);
void write_confusion(std::ostream& os, const EvaluationReport& report, const std::vector<std::string>& names);
void write_summary(std::ostream& os, const EvaluationReport& report);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace rissense
