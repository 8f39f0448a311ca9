#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <optional>
#include <vector>

#include "litecua/common/geometry.hpp"

namespace litecua::ctx {

// One node of a raw accessibility tree as served on the wire:
// {role, name?, description?, bounds:{x,y,w,h}, states:[...], value?, children:[...]}
struct RawA11yNode {
    std::string role;
    std::string name;
    std::string description;
    Rect bounds;
    std::set<std::string> states;
    std::optional<std::string> value;
    std::vector<RawA11yNode> children;
};

struct IngestedTree {
    RawA11yNode root;
    // Set when depth/size caps dropped part of the document.
    bool truncated = false;
};

class MalformedTree : public std::runtime_error {
public:
    explicit MalformedTree(const std::string& what) : std::runtime_error(what) {}
};

// Ingestion caps: anything deeper or larger is dropped, not an error.
inline constexpr int kMaxTreeDepth = 32;
inline constexpr int kMaxTreeNodes = 10000;

// Parses a raw tree document. Throws MalformedTree when the document is not
// valid JSON or the root lacks a "role" field.
IngestedTree ingest_a11y(const std::string& document);

// Pre-order node count, root included.
int count_nodes(const RawA11yNode& root);

// Pre-order role sequence, used by round-trip checks.
std::vector<std::string> preorder_roles(const RawA11yNode& root);

}  // namespace litecua::ctx
