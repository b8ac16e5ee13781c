#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chartdesign/error.hpp"
#include "chartdesign/schema.hpp"
#include "chartdesign/tabular.hpp"

namespace chartdesign {

enum class Backend { vegalite, matplotlib, ggplot2, altair };

inline constexpr Backend kAllBackends[] = {Backend::vegalite, Backend::matplotlib, Backend::ggplot2,
                                           Backend::altair};

std::string_view to_string(Backend b);
std::optional<Backend> backend_from_string(std::string_view name);
/// ".vl.json", ".py", ".R", ".altair.py"
std::string_view file_extension(Backend b);

struct EmitResult {
  Backend backend = Backend::vegalite;
  std::string content;
  /// One entry per degraded attribute, formatted "<attribute path>: <reason>".
  /// Data-binding notes use the pseudo-path "data".
  std::vector<std::string> warnings;
};

/// The table cannot supply the columns the chart needs.
class EmitError : public Error {
 public:
  using Error::Error;
};

/// Vega-Lite v5 document with inline data. See docs/backend_mapping.md for
/// the attribute-to-construct table. Throws SpecError for invalid specs and
/// EmitError when the table lacks usable columns.
EmitResult emit_vegalite(const DesignSpec& spec, const DataTable& table);

/// Self-contained plotting script for matplotlib, ggplot2 or Altair.
/// Throws PreconditionError when called with Backend::vegalite.
EmitResult emit_script(const DesignSpec& spec, const DataTable& table, Backend backend);

/// Dispatches to emit_vegalite or emit_script.
EmitResult emit(const DesignSpec& spec, const DataTable& table, Backend backend);

/// Reverse mapping: reads design attributes back out of a Vega-Lite document
/// produced by emit_vegalite. Attributes listed in that emission's warnings
/// are not recoverable; everything else matches normalize(spec).
Json recover_design(const Json& vegalite);

/// Attribute paths named by a result's warnings (the text before ':').
std::vector<std::string> warned_paths(const EmitResult& result);

}  // namespace chartdesign
