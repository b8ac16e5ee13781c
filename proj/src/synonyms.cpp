#include "chartdesign/synonyms.hpp"

#include <cctype>

#include <nlohmann/json.hpp>

#include "chartdesign/error.hpp"

namespace chartdesign {

namespace detail {
extern const std::string_view kSynonymTableJson;
}

std::string normalize_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (unsigned char c : text) {
    // Bytes >= 0x80 belong to UTF-8 sequences and are kept verbatim.
    const bool word = std::isalnum(c) || c >= 0x80;
    if (!word) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

SynonymTable SynonymTable::from_json(std::string_view document) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("synonym table: ") + e.what());
  }
  if (!doc.is_object()) throw Error("synonym table: expected an object");

  SynonymTable table;
  table.version_ = doc.value("version", 0);
  for (const auto& [name, body] : doc.items()) {
    if (name == "version") continue;
    if (!body.is_object()) throw Error("synonym table: category " + name + " is not an object");
    Category cat;
    auto add = [&](const std::string& alias, const std::string& canonical) {
      const std::string key = normalize_text(alias);
      if (auto it = cat.alias.find(key); it != cat.alias.end() && it->second != canonical)
        throw Error("synonym table: alias '" + alias + "' is ambiguous in " + name);
      cat.alias[key] = canonical;
      if (auto it = table.global_.find(key); it != table.global_.end() && it->second != canonical)
        throw Error("synonym table: alias '" + alias + "' maps to both '" + it->second +
                    "' and '" + canonical + "'");
      table.global_[key] = canonical;
    };
    for (const auto& [canonical, aliases] : body.items()) {
      cat.canonical.push_back(canonical);
      add(canonical, canonical);
      for (const auto& alias : aliases) add(alias.get<std::string>(), canonical);
    }
    table.categories_.emplace(name, std::move(cat));
  }
  return table;
}

const SynonymTable& SynonymTable::builtin() {
  static const SynonymTable table = from_json(detail::kSynonymTableJson);
  return table;
}

std::optional<std::string> SynonymTable::lookup(std::string_view category,
                                                std::string_view text) const {
  auto cat = categories_.find(category);
  if (cat == categories_.end()) return std::nullopt;
  auto it = cat->second.alias.find(normalize_text(text));
  if (it == cat->second.alias.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> SynonymTable::lookup_any(std::string_view text) const {
  auto it = global_.find(normalize_text(text));
  if (it == global_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> SynonymTable::categories() const {
  std::vector<std::string> names;
  for (const auto& [name, _] : categories_) names.push_back(name);
  return names;
}

std::vector<std::string> SynonymTable::canonical_values(std::string_view category) const {
  auto cat = categories_.find(category);
  if (cat == categories_.end()) return {};
  return cat->second.canonical;
}

}  // namespace chartdesign
