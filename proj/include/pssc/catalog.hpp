#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pssc/geometry.hpp"

namespace pssc {

class CatalogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CatalogEntry {
  std::string name;
  ManifoldSpec spec;
  /// Construction and expected properties, one sentence per line.
  std::vector<std::string> provenance;
};

/// Registered names. "euclidean_n" also accepts a dimension suffix,
/// e.g. "euclidean_n:8"; without one it is 4-dimensional.
const std::vector<std::string>& catalog_names();

CatalogEntry builtin(std::string_view name);

/// Manifold file for an entry: provenance as '#' comments, then the
/// canonical key/value rendering of the spec.
std::string emit_catalog_document(const CatalogEntry& entry);

/// Short descriptor such as "euclidean3 (n=3, parallel xi)".
std::string describe(const CatalogEntry& entry);

}  // namespace pssc
