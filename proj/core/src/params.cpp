#include "goalnet/params.hpp"

#include <cmath>
#include <random>

#include "goalnet/error.hpp"

namespace goalnet {

std::string_view to_string(InitScheme s) {
  switch (s) {
    case InitScheme::kXavierUniform: return "xavier_uniform";
    case InitScheme::kKaimingNormal: return "kaiming_normal";
    case InitScheme::kZeros: return "zeros";
    case InitScheme::kOnes: return "ones";
  }
  return "?";
}

InitScheme init_scheme_from_string(std::string_view s) {
  if (s == "xavier_uniform") return InitScheme::kXavierUniform;
  if (s == "kaiming_normal") return InitScheme::kKaimingNormal;
  if (s == "zeros") return InitScheme::kZeros;
  if (s == "ones") return InitScheme::kOnes;
  throw SchemaError("unknown init scheme '" + std::string(s) + "'");
}

Tensor& ParamSet::add(std::string name, std::size_t rows, std::size_t cols, InitScheme scheme) {
  if (index_.contains(name)) throw Error("ParamSet: duplicate parameter '" + name + "'");
  index_.emplace(name, entries_.size());
  entries_.push_back({std::move(name), Tensor::parameter(Matrix(rows, cols)), scheme});
  return entries_.back().tensor;
}

const Tensor& ParamSet::get(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) throw Error("ParamSet: no parameter '" + std::string(name) + "'");
  return entries_[it->second].tensor;
}

Tensor& ParamSet::get(std::string_view name) {
  return const_cast<Tensor&>(std::as_const(*this).get(name));
}

bool ParamSet::contains(std::string_view name) const {
  return index_.contains(std::string(name));
}

std::size_t ParamSet::scalar_count() const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += e.tensor.value().size();
  return n;
}

void ParamSet::zero_grad() {
  for (auto& e : entries_) e.tensor.zero_grad();
}

ParamSet ParamSet::clone() const {
  ParamSet out;
  for (const auto& e : entries_) {
    Tensor& t = out.add(e.name, e.tensor.rows(), e.tensor.cols(), e.scheme);
    t.mutable_value() = e.tensor.value();
  }
  return out;
}

void ParamSet::assign_values(const ParamSet& other) {
  if (other.size() != size()) throw SchemaError("ParamSet::assign_values: size mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& src = other.entries_[i];
    auto& dst = entries_[i];
    if (src.name != dst.name || src.tensor.rows() != dst.tensor.rows() ||
        src.tensor.cols() != dst.tensor.cols()) {
      throw SchemaError("ParamSet::assign_values: mismatch at '" + dst.name + "'");
    }
    dst.tensor.mutable_value() = src.tensor.value();
  }
}

namespace {
std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}
}  // namespace

void init_params(ParamSet& params, std::uint64_t seed) {
  for (auto& e : params.entries()) {
    Matrix& m = e.tensor.mutable_value();
    const double fan_in = static_cast<double>(m.rows());
    const double fan_out = static_cast<double>(m.cols());
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(fnv1a(e.name)),
                      static_cast<std::uint32_t>(fnv1a(e.name) >> 32)};
    std::mt19937_64 rng(seq);
    switch (e.scheme) {
      case InitScheme::kZeros: m.fill(0.0); break;
      case InitScheme::kOnes: m.fill(1.0); break;
      case InitScheme::kXavierUniform: {
        const double a = std::sqrt(6.0 / (fan_in + fan_out));
        std::uniform_real_distribution<double> dist(-a, a);
        for (double& v : m.data()) v = dist(rng);
        break;
      }
      case InitScheme::kKaimingNormal: {
        std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / fan_in));
        for (double& v : m.data()) v = dist(rng);
        break;
      }
    }
  }
}

}  // namespace goalnet
