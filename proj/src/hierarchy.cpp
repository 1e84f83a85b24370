#include "uigroup/hierarchy.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace uigroup {

bool ViewNode::is_group() const {
  return name.rfind(kGroupPrefix, 0) == 0;
}

bool ViewNode::operator==(const ViewNode& o) const {
  return id == o.id && name == o.name && bbox == o.bbox && kind == o.kind &&
         children == o.children;
}

namespace {

void collect_leaves(const ViewNode& node, int depth, std::vector<LeafRef>& out) {
  if (node.is_leaf()) {
    out.push_back({&node, depth});
    return;
  }
  for (const ViewNode& child : node.children) {
    collect_leaves(child, depth + 1, out);
  }
}

void require_unique_leaf_ids(const std::vector<LeafRef>& ls) {
  std::set<std::string> seen;
  for (const auto& l : ls) {
    if (!seen.insert(l.node->id).second) {
      throw std::invalid_argument("duplicate leaf id in hierarchy: " + l.node->id);
    }
  }
}

}  // namespace

std::vector<LeafRef> leaves(const ViewNode& root) {
  std::vector<LeafRef> out;
  collect_leaves(root, 0, out);
  return out;
}

std::vector<LayerGroup> retrieve_layers(const std::vector<BBox>& boxes,
                                        const ViewNode& tree,
                                        double intersect_threshold,
                                        int depth_threshold) {
  if (!(intersect_threshold > 0.0) || intersect_threshold > 1.0) {
    throw std::invalid_argument("intersect threshold must lie in (0,1]");
  }
  if (depth_threshold < 0) {
    throw std::invalid_argument("depth threshold must be non-negative");
  }
  const std::vector<LeafRef> all = leaves(tree);
  require_unique_leaf_ids(all);

  std::vector<bool> claimed(all.size(), false);
  std::vector<LayerGroup> result;
  result.reserve(boxes.size());

  for (int i = 0; i < int(boxes.size()); ++i) {
    std::vector<int> candidates;
    for (int j = 0; j < int(all.size()); ++j) {
      if (claimed[j]) continue;
      const double ratio =
          intersection_area(boxes[i], all[j].node->bbox) / all[j].node->bbox.area();
      if (ratio > intersect_threshold) {
        candidates.push_back(j);
      }
    }

    LayerGroup group;
    group.box_index = i;
    if (!candidates.empty()) {
      std::map<int, int> depth_counts;
      for (int j : candidates) {
        ++depth_counts[all[j].depth];
      }
      int majority = candidates.front() >= 0 ? all[candidates.front()].depth : 0;
      int best = -1;
      for (const auto& [depth, count] : depth_counts) {
        if (count > best) {  // map iterates depths ascending, so ties keep the smaller
          best = count;
          majority = depth;
        }
      }
      for (int j : candidates) {
        if (std::abs(all[j].depth - majority) <= depth_threshold) {
          claimed[j] = true;
          group.layer_ids.push_back(all[j].node->id);
        }
      }
    }
    result.push_back(std::move(group));
  }
  return result;
}

namespace {

using Path = std::vector<int>;  // child indices from the root

ViewNode* walk(ViewNode& root, const Path& path, std::size_t len) {
  ViewNode* n = &root;
  for (std::size_t i = 0; i < len; ++i) {
    n = &n->children[path[i]];
  }
  return n;
}

void leaf_paths(const ViewNode& node, Path& prefix,
                std::map<std::string, Path>& out) {
  if (node.is_leaf()) {
    out[node.id] = prefix;
    return;
  }
  for (int i = 0; i < int(node.children.size()); ++i) {
    prefix.push_back(i);
    leaf_paths(node.children[i], prefix, out);
    prefix.pop_back();
  }
}

std::set<std::string> leaf_id_set(const ViewNode& node) {
  std::set<std::string> ids;
  for (const auto& l : leaves(node)) {
    ids.insert(l.node->id);
  }
  return ids;
}

// Deepest non-leaf node whose leaf-descendant id set equals `target`.
ViewNode* find_exact_container(ViewNode& node, const std::set<std::string>& target,
                               int depth, int& best_depth) {
  if (node.is_leaf()) return nullptr;
  ViewNode* found = nullptr;
  if (leaf_id_set(node) == target && depth > best_depth) {
    best_depth = depth;
    found = &node;
  }
  for (ViewNode& child : node.children) {
    if (ViewNode* deeper = find_exact_container(child, target, depth + 1, best_depth)) {
      found = deeper;
    }
  }
  return found;
}

// Remove the leaves named in `ids` from the subtree, collecting them in
// document order. Containers emptied by the removal are pruned so no new
// leaves appear.
void extract_leaves(ViewNode& node, const std::set<std::string>& ids,
                    std::vector<ViewNode>& collected) {
  for (auto it = node.children.begin(); it != node.children.end();) {
    if (it->is_leaf()) {
      if (ids.count(it->id)) {
        collected.push_back(std::move(*it));
        it = node.children.erase(it);
        continue;
      }
      ++it;
      continue;
    }
    extract_leaves(*it, ids, collected);
    if (it->children.empty()) {
      it = node.children.erase(it);
    } else {
      ++it;
    }
  }
}

bool id_exists(const ViewNode& node, const std::string& id) {
  if (node.id == id) return true;
  for (const ViewNode& c : node.children) {
    if (id_exists(c, id)) return true;
  }
  return false;
}

BBox cover_of(const std::vector<ViewNode>& nodes) {
  CornerForm c = corner_form(nodes.front().bbox);
  for (const ViewNode& n : nodes) {
    c.x1 = std::min(c.x1, n.bbox.x);
    c.y1 = std::min(c.y1, n.bbox.y);
    c.x2 = std::max(c.x2, n.bbox.x2());
    c.y2 = std::max(c.y2, n.bbox.y2());
  }
  return from_corner_form(c);
}

}  // namespace

ViewNode annotate_groups(const ViewNode& tree, const std::vector<LayerGroup>& groups) {
  // Reject overlapping groups up front, naming both offenders.
  std::map<std::string, int> owner;
  for (int g = 0; g < int(groups.size()); ++g) {
    for (const std::string& id : groups[g].layer_ids) {
      auto [it, inserted] = owner.emplace(id, g);
      if (!inserted) {
        throw std::invalid_argument("groups " + std::to_string(it->second) + " and " +
                                    std::to_string(g) + " share layer '" + id + "'");
      }
    }
  }

  ViewNode result = tree;
  require_unique_leaf_ids(leaves(result));

  for (int g = 0; g < int(groups.size()); ++g) {
    const LayerGroup& group = groups[g];
    if (group.layer_ids.empty()) continue;

    std::map<std::string, Path> paths;
    Path prefix;
    leaf_paths(result, prefix, paths);
    for (const std::string& id : group.layer_ids) {
      if (!paths.count(id)) {
        throw std::invalid_argument("group layer id does not resolve to a leaf: " + id);
      }
    }

    const std::set<std::string> target(group.layer_ids.begin(), group.layer_ids.end());
    int best_depth = -1;
    if (ViewNode* exact = find_exact_container(result, target, 0, best_depth)) {
      if (!exact->is_group()) {
        exact->name = std::string(kGroupPrefix) + exact->name;
      }
      continue;
    }

    // Lowest common ancestor: longest shared path prefix of all members.
    Path lca_path = paths.at(group.layer_ids.front());
    for (const std::string& id : group.layer_ids) {
      const Path& p = paths.at(id);
      std::size_t len = 0;
      while (len < lca_path.size() && len < p.size() && lca_path[len] == p[len]) {
        ++len;
      }
      lca_path.resize(len);
    }
    ViewNode* lca = walk(result, lca_path, lca_path.size());

    // Insert where the document-first member used to live.
    Path first_path = paths.at(group.layer_ids.front());
    for (const std::string& id : group.layer_ids) {
      if (paths.at(id) < first_path) first_path = paths.at(id);
    }
    int insert_at = first_path[lca_path.size()];

    std::vector<ViewNode> collected;
    extract_leaves(*lca, target, collected);

    ViewNode container;
    const std::string tag = "g" + std::to_string(group.box_index);
    container.id = tag;
    int suffix = 2;
    while (id_exists(result, container.id)) {
      container.id = tag + "_" + std::to_string(suffix++);
    }
    container.name = std::string(kGroupPrefix) + tag;
    container.bbox = cover_of(collected);
    container.children = std::move(collected);

    insert_at = std::min(insert_at, int(lca->children.size()));
    lca->children.insert(lca->children.begin() + insert_at, std::move(container));
  }
  return result;
}

namespace {

void emit_into(const ViewNode& node, DomNode& target) {
  for (const ViewNode& child : node.children) {
    if (child.is_leaf()) {
      DomNode leaf;
      leaf.tag = child.kind == LayerKind::Text ? DomTag::Text : DomTag::Image;
      leaf.name = child.name;
      target.children.push_back(std::move(leaf));
    } else if (child.is_group()) {
      DomNode sub;
      sub.tag = DomTag::Container;
      sub.name = child.name.substr(std::string(kGroupPrefix).size());
      emit_into(child, sub);
      target.children.push_back(std::move(sub));
    } else {
      emit_into(child, target);  // flattened
    }
  }
}

std::string escape_attr(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

void serialize_node(const DomNode& node, int depth, std::string& out) {
  out.append(std::size_t(depth) * 2, ' ');
  switch (node.tag) {
    case DomTag::Container:
      out += "<container name=\"" + escape_attr(node.name) + "\">\n";
      for (const DomNode& c : node.children) {
        serialize_node(c, depth + 1, out);
      }
      break;
    case DomTag::Text:
      out += "<text name=\"" + escape_attr(node.name) + "\"/>\n";
      break;
    case DomTag::Image:
      out += "<image name=\"" + escape_attr(node.name) + "\"/>\n";
      break;
  }
}

}  // namespace

DomNode emit_dom(const ViewNode& tree) {
  DomNode root;
  root.tag = DomTag::Container;
  root.name = tree.is_group()
                  ? tree.name.substr(std::string(kGroupPrefix).size())
                  : tree.name;
  if (tree.is_leaf()) {
    DomNode leaf;
    leaf.tag = tree.kind == LayerKind::Text ? DomTag::Text : DomTag::Image;
    leaf.name = tree.name;
    root.children.push_back(std::move(leaf));
    return root;
  }
  emit_into(tree, root);
  return root;
}

std::string serialize_dom(const DomNode& dom) {
  std::string out;
  serialize_node(dom, 0, out);
  return out;
}

ViewNode hierarchy_from_json(const Json& j) {
  if (!j.is_object()) {
    throw std::runtime_error("hierarchy node must be a JSON object");
  }
  ViewNode node;
  if (!j.contains("id") || !j.at("id").is_string() || !j.contains("name") ||
      !j.at("name").is_string()) {
    throw std::runtime_error("hierarchy node needs string 'id' and 'name'");
  }
  node.id = j.at("id").get<std::string>();
  node.name = j.at("name").get<std::string>();
  if (!j.contains("bbox") || !j.at("bbox").is_array() || j.at("bbox").size() != 4) {
    throw std::runtime_error("hierarchy node needs 'bbox' [x,y,w,h]");
  }
  const auto& b = j.at("bbox");
  node.bbox = BBox(b[0].get<double>(), b[1].get<double>(), b[2].get<double>(),
                   b[3].get<double>());
  if (j.contains("type")) {
    const std::string t = j.at("type").get<std::string>();
    if (t == "text") {
      node.kind = LayerKind::Text;
    } else if (t == "image") {
      node.kind = LayerKind::Image;
    } else {
      throw std::runtime_error("hierarchy leaf type must be 'text' or 'image'");
    }
  }
  if (j.contains("children")) {
    for (const Json& c : j.at("children")) {
      node.children.push_back(hierarchy_from_json(c));
    }
  }
  return node;
}

Json hierarchy_to_json(const ViewNode& node) {
  Json j;
  j["id"] = node.id;
  j["name"] = node.name;
  j["bbox"] = {round_sig(node.bbox.x), round_sig(node.bbox.y), round_sig(node.bbox.w),
               round_sig(node.bbox.h)};
  if (node.is_leaf() && node.kind == LayerKind::Text) {
    j["type"] = "text";
  }
  Json children = Json::array();
  for (const ViewNode& c : node.children) {
    children.push_back(hierarchy_to_json(c));
  }
  j["children"] = std::move(children);
  return j;
}

ViewNode load_hierarchy(const std::string& path) {
  return hierarchy_from_json(load_json_file(path));
}

void save_hierarchy(const ViewNode& node, const std::string& path) {
  save_json_file(hierarchy_to_json(node), path);
}

}  // namespace uigroup
