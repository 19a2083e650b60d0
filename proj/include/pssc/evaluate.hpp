#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pssc/geometry.hpp"
#include "pssc/tensor.hpp"

namespace pssc {

/// A tensor evaluated by id together with one index letter per slot.
struct NamedTensor {
  std::string id;
  Tensor value;
  std::string index_names;  // e.g. "lijk" for riemann
};

const std::vector<std::string>& tensor_ids();

/// Throws std::invalid_argument for unknown ids and GeometryError for points
/// outside the sampling box.
NamedTensor evaluate_tensor(const Chart& chart, std::string_view id, std::span<const double> point);

/// "[l=2,i=1,j=2,k=1]" style label with 1-based indices.
std::string index_label(const std::string& names, std::span<const int> idx);

/// Builtin name or manifold file, exactly one of them.
ManifoldSpec resolve_manifold(const std::optional<std::string>& builtin_name,
                              const std::optional<std::string>& file);

}  // namespace pssc
