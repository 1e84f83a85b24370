#pragma once

#include <string>
#include <vector>

#include "uigroup/geometry.hpp"
#include "uigroup/json_io.hpp"

namespace uigroup {

/// Name prefix that instructs the code generator to keep a container's
/// layers inside one DOM node.
inline constexpr const char* kGroupPrefix = "#group#";

/// Kind of a leaf layer; nodes with children are containers regardless.
enum class LayerKind { Image, Text };

/// A node of a design prototype view hierarchy. Nodes without children are
/// leaf layers (basic UI elements); everything else is a container.
struct ViewNode {
  std::string id;
  std::string name;
  BBox bbox{0, 0, 1, 1};
  LayerKind kind = LayerKind::Image;
  std::vector<ViewNode> children;

  bool is_leaf() const { return children.empty(); }
  bool is_group() const;

  bool operator==(const ViewNode& o) const;
};

/// The prototype layers retrieved for one predicted box.
struct LayerGroup {
  int box_index = -1;
  std::vector<std::string> layer_ids;  // document order
};

struct LeafRef {
  const ViewNode* node;
  int depth;
};

/// All leaves with their depths, in pre-order. A childless root is itself
/// a leaf at depth 0.
std::vector<LeafRef> leaves(const ViewNode& root);

/// Map predicted boxes onto prototype leaves. A leaf is collected when the
/// intersection area over the leaf's own area exceeds intersect_threshold;
/// collected leaves whose depth deviates from the majority depth by more
/// than depth_threshold are dropped (majority ties resolve toward the
/// smaller depth). Leaves claimed by an earlier box are invisible to later
/// boxes. Boxes and tree coordinates must share one pixel space.
std::vector<LayerGroup> retrieve_layers(const std::vector<BBox>& boxes,
                                        const ViewNode& tree,
                                        double intersect_threshold = 0.5,
                                        int depth_threshold = 2);

/// Apply the group protocol for each layer group: rename the deepest
/// existing container whose leaf set equals the group exactly, or create a
/// new container under the lowest common ancestor and reparent exactly the
/// group's layers into it (document order preserved, containers emptied by
/// the move are pruned). Groups sharing a layer are rejected.
ViewNode annotate_groups(const ViewNode& tree, const std::vector<LayerGroup>& groups);

enum class DomTag { Container, Text, Image };

struct DomNode {
  DomTag tag = DomTag::Container;
  std::string name;
  std::vector<DomNode> children;
};

/// Produce the component tree the code generator would emit: the root and
/// every group-marked container survive as DOM containers (the protocol
/// prefix is stripped from the name); all other containers are flattened,
/// their leaves attaching to the nearest surviving ancestor.
DomNode emit_dom(const ViewNode& tree);

/// Indented textual form, two spaces per level, one node per line.
std::string serialize_dom(const DomNode& dom);

ViewNode hierarchy_from_json(const Json& j);
Json hierarchy_to_json(const ViewNode& node);
ViewNode load_hierarchy(const std::string& path);
void save_hierarchy(const ViewNode& node, const std::string& path);

}  // namespace uigroup
