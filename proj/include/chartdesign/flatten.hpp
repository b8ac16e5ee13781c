#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "chartdesign/schema.hpp"

namespace chartdesign {

/// A leaf value of a design document.
using Scalar = std::variant<std::string, std::int64_t, double, bool>;

/// Text rendering used in attribute keys, prompts and reports: strings
/// verbatim, integers in decimal, doubles in shortest round-trip form,
/// booleans as true/false.
std::string render(const Scalar& value);

Json to_json(const Scalar& value);

/// One leaf of a flattened document, e.g. ("grid_lines.horizontal", 3).
struct FlatAttribute {
  std::string path;
  Scalar value;
  bool operator==(const FlatAttribute&) const = default;
};

/// "path=value", the attribute-value key used by the sampler.
std::string attribute_key(const FlatAttribute& attr);

/// Depth-first listing of every leaf in document order. Array elements get
/// numeric path segments ("legend.labels.0"). Null leaves and empty
/// containers produce nothing. Works on arbitrary (even invalid) documents.
std::vector<FlatAttribute> flatten(const Json& document);

/// Flattens the canonical JSON view of a spec.
std::vector<FlatAttribute> flatten(const DesignSpec& spec);

/// Rebuilds a document from flattened leaves. A container whose child
/// segments are all non-negative integers becomes an array.
Json unflatten_json(const std::vector<FlatAttribute>& flat);

/// Rebuilds and parses a spec: normalize(parse_design(unflatten_json(flat))).
DesignSpec unflatten(const std::vector<FlatAttribute>& flat);

}  // namespace chartdesign
