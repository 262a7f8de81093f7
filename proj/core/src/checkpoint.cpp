#include "goalnet/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <json.hpp>

#include "goalnet/error.hpp"

namespace goalnet {

using nlohmann::ordered_json;

namespace {

constexpr char kMagic[4] = {'G', 'N', 'C', 'K'};

template <typename T>
void put_le(std::ostream& out, T v) {
  unsigned char b[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), sizeof b);
}

template <typename T>
T get_le(std::istream& in) {
  unsigned char b[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(b), sizeof b)) {
    throw SchemaError("checkpoint: truncated file");
  }
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(b[i]) << (8 * i);
  return v;
}

ordered_json config_to_json(const ModelConfig& c) {
  return ordered_json{{"variant", std::string(to_string(c.variant))},
                      {"node_feature_dim", c.node_feature_dim},
                      {"hidden_dim", c.hidden_dim},
                      {"n_layers", c.n_layers},
                      {"n_heads", c.n_heads},
                      {"ffn_dim", c.ffn_dim},
                      {"edge_mlp_dims", {c.edge_mlp.in, c.edge_mlp.hidden, c.edge_mlp.out}},
                      {"head_hidden_dim", c.head_hidden_dim},
                      {"role_embedding_dim", c.role_embedding_dim},
                      {"seed", c.seed}};
}

ModelConfig config_from_json(const ordered_json& j) {
  ModelConfig c;
  c.variant = model_variant_from_string(j.at("variant").get<std::string>());
  c.node_feature_dim = j.at("node_feature_dim").get<std::size_t>();
  c.hidden_dim = j.at("hidden_dim").get<std::size_t>();
  c.n_layers = j.at("n_layers").get<std::size_t>();
  c.n_heads = j.at("n_heads").get<std::size_t>();
  c.ffn_dim = j.at("ffn_dim").get<std::size_t>();
  const auto& e = j.at("edge_mlp_dims");
  c.edge_mlp = {e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(), e.at(2).get<std::size_t>()};
  c.head_hidden_dim = j.at("head_hidden_dim").get<std::size_t>();
  c.role_embedding_dim = j.at("role_embedding_dim").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
  ordered_json tensors = ordered_json::array();
  for (const auto& e : ckpt.model.params().entries()) {
    tensors.push_back({{"name", e.name},
                       {"shape", {e.tensor.rows(), e.tensor.cols()}},
                       {"scheme", std::string(to_string(e.scheme))}});
  }
  const auto& a = ckpt.optimizer.adam;
  const ordered_json manifest = {
      {"format", "goalnet.checkpoint"},
      {"model", config_to_json(ckpt.model.config())},
      {"seed", ckpt.model.config().seed},
      {"graph_schema_version", ckpt.graph_schema_version},
      {"epoch", ckpt.epoch},
      {"optimizer",
       {{"name", "adam"},
        {"lr", a.lr},
        {"beta1", a.beta1},
        {"beta2", a.beta2},
        {"eps", a.eps},
        {"weight_decay", a.weight_decay},
        {"step", ckpt.optimizer.step}}},
      {"tensors", tensors}};
  const std::string text = manifest.dump();

  out.write(kMagic, 4);
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_le<std::uint64_t>(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& e : ckpt.model.params().entries()) {
    for (double v : e.tensor.value().data()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  }
  if (!out) throw Error("checkpoint: write failed");
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("checkpoint: cannot open " + path.string() + " for writing");
  write_checkpoint(out, ckpt);
}

Checkpoint read_checkpoint(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw SchemaError("checkpoint: bad magic (not a goalnet checkpoint)");
  }
  const auto version = get_le<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw SchemaError("checkpoint: unsupported container version " + std::to_string(version));
  }
  const auto len = get_le<std::uint64_t>(in);
  std::string text(len, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(len))) {
    throw SchemaError("checkpoint: truncated manifest");
  }

  ordered_json manifest;
  ModelConfig config;
  try {
    manifest = ordered_json::parse(text);
    config = config_from_json(manifest.at("model"));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("checkpoint: bad manifest: ") + e.what());
  }
  Checkpoint ckpt{GraphModel(config), {}, 0, 0};
  try {
    ckpt.graph_schema_version = manifest.at("graph_schema_version").get<int>();
    ckpt.epoch = manifest.at("epoch").get<std::size_t>();
    const auto& o = manifest.at("optimizer");
    ckpt.optimizer.adam = {o.at("lr").get<double>(), o.at("beta1").get<double>(),
                           o.at("beta2").get<double>(), o.at("eps").get<double>(),
                           o.at("weight_decay").get<double>()};
    ckpt.optimizer.step = o.at("step").get<std::size_t>();

    auto& entries = ckpt.model.params().entries();
    const auto& tensors = manifest.at("tensors");
    if (tensors.size() != entries.size()) {
      throw SchemaError("checkpoint: manifest lists " + std::to_string(tensors.size()) +
                        " tensors, model expects " + std::to_string(entries.size()));
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto& t = tensors[i];
      auto& e = entries[i];
      if (t.at("name").get<std::string>() != e.name ||
          t.at("shape").at(0).get<std::size_t>() != e.tensor.rows() ||
          t.at("shape").at(1).get<std::size_t>() != e.tensor.cols()) {
        throw SchemaError("checkpoint: tensor " + std::to_string(i) + " does not match '" +
                          e.name + "' " + e.tensor.value().shape_str());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("checkpoint: bad manifest: ") + e.what());
  }
  for (auto& e : ckpt.model.params().entries()) {
    for (double& v : e.tensor.mutable_value().data()) {
      v = std::bit_cast<double>(get_le<std::uint64_t>(in));
    }
  }
  return ckpt;
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifactError("checkpoint not found: " + path.string());
  return read_checkpoint(in);
}

}  // namespace goalnet
