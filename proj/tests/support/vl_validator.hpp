#pragma once

// Structural checks for the Vega-Lite subset the emitter produces: known
// top-level properties, mark types and properties, encoding channels, field
// references that resolve against the inline data and fold outputs.

#include <string>
#include <vector>

#include "chartdesign/schema.hpp"

namespace chartdesign::testing {

/// Empty when the document is structurally sound.
std::vector<std::string> validate_vegalite(const Json& doc);

}  // namespace chartdesign::testing
