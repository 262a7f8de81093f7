#include <cstring>
#include <random>
#include <sstream>

#include "doctest.h"
#include "goalnet/checkpoint.hpp"
#include "goalnet/error.hpp"
#include "goalnet/synthetic.hpp"
#include "json.hpp"
#include "test_util.hpp"

using namespace goalnet;

namespace {

Checkpoint sample(ModelVariant v) {
  ModelConfig c;
  c.variant = v;
  c.seed = 17;
  GraphModel m(c);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (auto& e : m.params().entries())
    for (double& x : e.tensor.mutable_value().data()) x += 1e-3 * g(rng);
  OptimizerScalars opt;
  opt.adam.lr = 2.5e-5;
  opt.step = 123;
  return Checkpoint{std::move(m), opt, kGraphSchemaVersion, 7};
}

std::string bytes_of(const Checkpoint& c) {
  std::ostringstream out(std::ios::binary);
  write_checkpoint(out, c);
  return out.str();
}

template <typename T>
T read_le(const std::string& s, std::size_t at) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    v |= static_cast<T>(static_cast<unsigned char>(s[at + i])) << (8 * i);
  return v;
}

}  // namespace

TEST_CASE("round trip restores config, scalars and exact predictions") {
  std::mt19937_64 rng(2);
  const auto g = random_graph(rng, 6, 8);
  for (ModelVariant v : {ModelVariant::kGcn, ModelVariant::kGat, ModelVariant::kTransformer}) {
    const Checkpoint c = sample(v);
    std::istringstream in(bytes_of(c), std::ios::binary);
    const Checkpoint back = read_checkpoint(in);
    CHECK(back.model.config() == c.model.config());
    CHECK(back.optimizer.step == 123);
    CHECK(back.optimizer.adam.lr == 2.5e-5);
    CHECK(back.epoch == 7);
    CHECK(back.graph_schema_version == kGraphSchemaVersion);
    CHECK(back.model.predict(g).prediction == c.model.predict(g).prediction);
    for (std::size_t i = 0; i < c.model.params().size(); ++i)
      CHECK(back.model.params().entries()[i].tensor.value() == c.model.params().entries()[i].tensor.value());
  }
}

TEST_CASE("container layout decodes independently") {
  const Checkpoint c = sample(ModelVariant::kGat);
  const std::string s = bytes_of(c);
  REQUIRE(s.size() > 16);
  CHECK(s.substr(0, 4) == "GNCK");
  CHECK(read_le<std::uint32_t>(s, 4) == 1);
  const auto len = read_le<std::uint64_t>(s, 8);
  const auto manifest = nlohmann::json::parse(s.substr(16, len));
  CHECK(manifest.at("tensors").size() == c.model.params().size());
  CHECK(s.size() == 16 + len + 8 * c.model.params().scalar_count());
  // first payload value is the first entry of the first tensor
  double first = 0;
  std::memcpy(&first, s.data() + 16 + len, 8);
  CHECK(first == c.model.params().entries()[0].tensor.value().data()[0]);
  CHECK(manifest.at("tensors")[0].at("name") == c.model.params().entries()[0].name);
}

TEST_CASE("writing is byte deterministic") {
  CHECK(bytes_of(sample(ModelVariant::kTransformer)) == bytes_of(sample(ModelVariant::kTransformer)));
}

TEST_CASE("corrupt containers are rejected") {
  std::string s = bytes_of(sample(ModelVariant::kGcn));
  std::string bad_magic = s;
  bad_magic[0] = 'X';
  std::istringstream a(bad_magic, std::ios::binary);
  CHECK_THROWS_AS((void)read_checkpoint(a), SchemaError);

  std::string bad_version = s;
  bad_version[4] = 2;
  std::istringstream b(bad_version, std::ios::binary);
  CHECK_THROWS_AS((void)read_checkpoint(b), SchemaError);

  std::istringstream c(s.substr(0, s.size() - 3), std::ios::binary);
  CHECK_THROWS_AS((void)read_checkpoint(c), Error);

  CHECK_THROWS_AS((void)read_checkpoint(std::filesystem::path("/nonexistent/model.ckpt")),
                  MissingArtifactError);
}

TEST_CASE("file round trip") {
  const auto dir = testutil::scratch_dir("checkpoint");
  const Checkpoint c = sample(ModelVariant::kGcn);
  write_checkpoint(dir / "m.ckpt", c);
  const Checkpoint back = read_checkpoint(dir / "m.ckpt");
  CHECK(back.model.config() == c.model.config());
}
