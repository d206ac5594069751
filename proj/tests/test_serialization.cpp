// SPDX-License-Identifier: Apache-2.0

#include "rissense/serialization.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace rissense;

namespace {

std::string to_text(const ConfigurationMatrix& T) {
  std::ostringstream os;
  write_configuration(os, T);
  return os.str();
}

LabeledDataset tiny_dataset() {
  LabeledDataset d;
  d.classes = 3;
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int j = 0; j < 6; ++j) {
    ComplexVector y(2);
    y << Complex(g(rng), g(rng)), Complex(g(rng), g(rng));
    d.samples.push_back({y, j % 3});
  }
  return d;
}

}  // namespace

TEST_CASE("doubles round-trip exactly") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, i % 30 - 15);
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK_THROWS_AS(parse_double("1.5x"), ArtifactError);
  CHECK_THROWS_AS(parse_double(""), ArtifactError);
  CHECK(parse_hex64(hex64(0xdeadbeef12345678ULL)) == 0xdeadbeef12345678ULL);
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("configuration artifact round trip") {
  const ConfigurationMatrix T = random_configuration(4, 3, 4, 9);
  std::istringstream is(to_text(T));
  const ConfigurationMatrix back = read_configuration(is);
  CHECK(back.durations() == T.durations());
  CHECK(back.groups() == 3);
  CHECK(back.states() == 4);
  CHECK(configuration_hash(back) == configuration_hash(T));
  CHECK(configuration_hash(random_configuration(4, 3, 4, 10)) != configuration_hash(T));
}

TEST_CASE("corrupt configuration artifacts are rejected") {
  const ConfigurationMatrix T = random_configuration(2, 2, 4, 1);
  std::string text = to_text(T);

  std::string flipped = text;
  const auto pos = flipped.rfind('0');
  flipped[pos] = '1';
  std::istringstream a(flipped);
  CHECK_THROWS_AS(read_configuration(a), ArtifactError);

  std::istringstream b(text.substr(0, text.size() / 2));
  CHECK_THROWS_AS(read_configuration(b), ArtifactError);

  std::istringstream c("hello\n");
  CHECK_THROWS_AS(read_configuration(c), ArtifactError);

  // Valid checksum but off the simplex.
  RealMatrix d = RealMatrix::Constant(1, 4, 0.3);
  std::string body = "0.3 0.3 0.3 0.3\n";
  std::ostringstream os;
  os << "# rissense configuration-matrix v1\n# frames=1 groups=1 states=4 frame_length=1 checksum="
     << hex64(fnv1a64(body)) << '\n'
     << body;
  std::istringstream e(os.str());
  CHECK_THROWS_AS(read_configuration(e), ArtifactError);
}

TEST_CASE("dictionary artifact round trip") {
  SensingDictionary d = build_dictionary(make_default_scene(4, 4, 2, 2), default_state_table(), RadioParams{});
  std::ostringstream os;
  write_dictionary(os, d);
  std::istringstream is(os.str());
  const SensingDictionary back = read_dictionary(is);
  CHECK(back.A == d.A);
  CHECK(back.scene_hash == d.scene_hash);
  CHECK(back.carrier_frequency == d.carrier_frequency);
  CHECK(dictionary_hash(back) == dictionary_hash(d));
}

TEST_CASE("scene fingerprint tracks the inputs") {
  const SceneGeometry s;
  const StateTable t = default_state_table();
  const RadioParams p;
  const auto h = scene_fingerprint(s, t, p);
  CHECK(scene_fingerprint(s, t, p) == h);
  SceneGeometry s2 = s;
  s2.tx_position.x() += 1e-9;
  CHECK(scene_fingerprint(s2, t, p) != h);
  RadioParams p2 = p;
  p2.carrier_frequency *= 2;
  CHECK(scene_fingerprint(s, t, p2) != h);
}

TEST_CASE("dataset round trip with header") {
  const LabeledDataset d = tiny_dataset();
  DatasetHeader h;
  h.split = Split::Test;
  h.frames = 2;
  h.classes = 3;
  h.seed = 42;
  h.configuration_hash = 0x1234;
  h.dictionary_hash = 0xabcd;
  std::ostringstream os;
  write_dataset(os, d, h);
  const std::string text = os.str();
  CHECK(text.find("label,re_1,im_1,re_2,im_2") != std::string::npos);
  std::istringstream is(text);
  DatasetHeader back_h;
  const LabeledDataset back = read_dataset(is, &back_h);
  REQUIRE(back.size() == d.size());
  for (std::size_t j = 0; j < d.size(); ++j) {
    CHECK(back.samples[j].y == d.samples[j].y);
    CHECK(back.samples[j].label == d.samples[j].label);
  }
  CHECK(back_h.split == Split::Test);
  CHECK(back_h.seed == 42);
  CHECK(back_h.configuration_hash == 0x1234);
  CHECK(back_h.dictionary_hash == 0xabcd);
  // Labels are written 1-based.
  CHECK(text.find("\n1,") != std::string::npos);
  CHECK(text.find("\n0,") == std::string::npos);
}

TEST_CASE("malformed dataset rows report their line") {
  const LabeledDataset d = tiny_dataset();
  DatasetHeader h;
  h.frames = 2;
  h.classes = 3;
  std::ostringstream os;
  write_dataset(os, d, h);
  std::string text = os.str();
  // Break the 5th line (2nd data row).
  std::size_t pos = 0;
  for (int i = 0; i < 4; ++i) pos = text.find('\n', pos) + 1;
  text.insert(text.find('\n', pos), ",9");
  std::istringstream is(text);
  try {
    read_dataset(is);
    FAIL("expected an artifact error");
  } catch (const ArtifactError& e) {
    CHECK(std::string(e.what()).find("line 5") != std::string::npos);
  }

  std::string bad_label = os.str();
  pos = 0;
  for (int i = 0; i < 3; ++i) pos = bad_label.find('\n', pos) + 1;
  bad_label[pos] = '7';
  std::istringstream is2(bad_label);
  CHECK_THROWS_AS(read_dataset(is2), ArtifactError);
}

TEST_CASE("model round trip") {
  DecisionNetwork net({4, 5, 3}, Activation::Tanh);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  RealVector theta(net.parameter_count());
  for (Eigen::Index j = 0; j < theta.size(); ++j) theta[j] = g(rng);
  net.set_parameters(theta);
  RealVector mean(4), scale(4);
  mean << 0.1, -0.2, 0.3, 1e-7;
  scale << 1, 2, 3, 0.5;
  net.set_standardization(mean, scale);
  std::ostringstream os;
  write_model(os, net);
  std::istringstream is(os.str());
  const DecisionNetwork back = read_model(is);
  CHECK(back.parameters() == theta);
  CHECK(back.layer_sizes() == net.layer_sizes());
  CHECK(back.activation() == Activation::Tanh);
  CHECK(back.feature_mean() == mean);
  CHECK(back.feature_scale() == scale);

  std::string text = os.str();
  text.replace(0, 17, "rissense-model v9");
  std::istringstream bad(text);
  CHECK_THROWS_AS(read_model(bad), ArtifactError);
}

TEST_CASE("history and coherence tables") {
  std::ostringstream os;
  write_mu_history(os, {{0, -1, 0.5}, {1, 0, 0.25}});
  CHECK(os.str() == "iteration,frame_index,mu\n0,-1,0.5\n1,0,0.25\n");

  ComplexMatrix G(2, 3);
  G << 1, 0, 1, 0, 1, 1;
  std::ostringstream cs;
  write_coherence_table(cs, column_coherences(G), 3);
  const std::string t = cs.str();
  CHECK(t.rfind("m,m_prime,abs_u\n0,1,0\n0,2,", 0) == 0);
  CHECK(t.find("\n1,2,") != std::string::npos);
}

TEST_CASE("missing files raise artifact errors") {
  CHECK_THROWS_AS(read_text_file("/nonexistent/rissense/file.txt"), ArtifactError);
  CHECK_THROWS_AS(load_configuration("/nonexistent/rissense/configuration.txt"), ArtifactError);
}
