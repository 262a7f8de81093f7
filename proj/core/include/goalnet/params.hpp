#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "goalnet/tensor.hpp"

namespace goalnet {

enum class InitScheme { kXavierUniform, kKaimingNormal, kZeros, kOnes };

std::string_view to_string(InitScheme s);
InitScheme init_scheme_from_string(std::string_view s);

// Named trainable tensors in insertion order. Names are unique and shapes are
// fixed once added.
class ParamSet {
 public:
  struct Entry {
    std::string name;
    Tensor tensor;
    InitScheme scheme;
  };

  Tensor& add(std::string name, std::size_t rows, std::size_t cols, InitScheme scheme);

  const Tensor& get(std::string_view name) const;
  Tensor& get(std::string_view name);
  bool contains(std::string_view name) const;

  std::vector<Entry>& entries() { return entries_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t scalar_count() const;

  void zero_grad();

  // Deep copy of the values (gradients are not copied).
  ParamSet clone() const;
  // Copies values from `other`, which must have identical names and shapes.
  void assign_values(const ParamSet& other);

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Fills every tensor according to its scheme. Each tensor draws from its own
// stream derived from (seed, name), so results do not depend on how many
// other tensors exist.
//   Xavier uniform:  U(-a, a), a = sqrt(6 / (fan_in + fan_out))
//   Kaiming normal:  N(0, 2 / fan_in)
// A tensor of shape rows x cols is used as X * W, so fan_in = rows and
// fan_out = cols.
void init_params(ParamSet& params, std::uint64_t seed);

}  // namespace goalnet
