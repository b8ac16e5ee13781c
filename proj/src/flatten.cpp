#include "chartdesign/flatten.hpp"

#include <algorithm>
#include <charconv>
#include <map>

namespace chartdesign {

std::string render(const Scalar& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else {
          // Same digits the JSON serializer writes.
          return Json(v).dump();
        }
      },
      value);
}

Json to_json(const Scalar& value) {
  return std::visit([](const auto& v) { return Json(v); }, value);
}

std::string attribute_key(const FlatAttribute& attr) { return attr.path + "=" + render(attr.value); }

namespace {

void walk(const Json& node, const std::string& path, std::vector<FlatAttribute>& out) {
  auto child = [&](const std::string& seg) { return path.empty() ? seg : path + "." + seg; };
  switch (node.type()) {
    case Json::value_t::object:
      for (const auto& [key, value] : node.items()) walk(value, child(key), out);
      break;
    case Json::value_t::array:
      for (std::size_t i = 0; i < node.size(); ++i) walk(node[i], child(std::to_string(i)), out);
      break;
    case Json::value_t::string:
      out.push_back({path, node.get<std::string>()});
      break;
    case Json::value_t::boolean:
      out.push_back({path, node.get<bool>()});
      break;
    case Json::value_t::number_integer:
      out.push_back({path, node.get<std::int64_t>()});
      break;
    case Json::value_t::number_unsigned: {
      const auto u = node.get<std::uint64_t>();
      if (u <= static_cast<std::uint64_t>(INT64_MAX))
        out.push_back({path, static_cast<std::int64_t>(u)});
      else
        out.push_back({path, static_cast<double>(u)});
      break;
    }
    case Json::value_t::number_float:
      out.push_back({path, node.get<double>()});
      break;
    default:
      break;  // null, binary, discarded
  }
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> segs;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    segs.push_back(path.substr(start, dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return segs;
}

bool is_index(const std::string& seg) {
  return !seg.empty() && std::all_of(seg.begin(), seg.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Intermediate tree; converted to Json once every path has been inserted so
// that arrays can be recognised from their complete key set.
struct Node {
  std::optional<Scalar> leaf;
  std::vector<std::pair<std::string, Node>> children;

  Node& child(const std::string& seg) {
    for (auto& [k, n] : children)
      if (k == seg) return n;
    children.emplace_back(seg, Node{});
    return children.back().second;
  }

  Json to_json() const {
    if (leaf) return chartdesign::to_json(*leaf);
    const bool array = !children.empty() &&
                       std::all_of(children.begin(), children.end(),
                                   [](const auto& c) { return is_index(c.first); });
    if (array) {
      std::vector<std::pair<std::size_t, const Node*>> items;
      for (const auto& [k, n] : children) items.emplace_back(std::stoul(k), &n);
      std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      Json arr = Json::array();
      for (const auto& [_, n] : items) arr.push_back(n->to_json());
      return arr;
    }
    Json obj = Json::object();
    for (const auto& [k, n] : children) obj[k] = n.to_json();
    return obj;
  }
};

}  // namespace

std::vector<FlatAttribute> flatten(const Json& document) {
  std::vector<FlatAttribute> out;
  walk(document, "", out);
  return out;
}

std::vector<FlatAttribute> flatten(const DesignSpec& spec) { return flatten(to_json(spec)); }

Json unflatten_json(const std::vector<FlatAttribute>& flat) {
  Node root;
  for (const auto& attr : flat) {
    Node* n = &root;
    for (const auto& seg : split_path(attr.path)) n = &n->child(seg);
    n->leaf = attr.value;
  }
  if (root.children.empty()) return Json::object();
  return root.to_json();
}

DesignSpec unflatten(const std::vector<FlatAttribute>& flat) {
  return normalize(parse_design(unflatten_json(flat)));
}

}  // namespace chartdesign
