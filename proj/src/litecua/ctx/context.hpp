#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "litecua/common/geometry.hpp"
#include "litecua/ctx/a11y.hpp"

namespace litecua::ctx {

// Canonical role vocabulary. Raw roles outside the map become kUnknown.
enum class Role {
    kButton,
    kTextField,
    kLabel,
    kMenuItem,
    kWindow,
    kCheckbox,
    kScrollbar,
    kListItem,
    kUnknown,
};

// Bumped whenever the raw->canonical role map changes, so corpus goldens
// can pin the vocabulary they were produced with.
inline constexpr int kRoleMapVersion = 1;

Role canonical_role(const std::string& raw);
const std::string& role_name(Role role);

// Caps applied during compaction.
inline constexpr std::size_t kNameCap = 80;
inline constexpr std::size_t kValueCap = 200;

struct UIElement {
    int id = 0;
    Role role = Role::kUnknown;
    std::string name;
    std::string usage;
    Rect bounds;
    std::set<std::string> states;
    std::optional<std::string> value;

    bool operator==(const UIElement&) const = default;
};

struct ContextSnapshot {
    int step = 0;
    Size screen;
    std::uint64_t screenshot_hash = 0;
    std::vector<UIElement> elements;
    std::map<std::string, std::string> system_info;
    std::int64_t captured_at = 0;
};

class BudgetTooSmall : public std::runtime_error {
public:
    explicit BudgetTooSmall(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr int kMinRenderBudget = 256;

// Prunes, canonicalizes and flattens a raw tree into the element table.
// Rules, in order: (1) drop invisible / zero-area / off-screen subtrees,
// (2) splice out nameless valueless non-interactive containers, (3) map roles
// to the canonical vocabulary, (4) cap name/value lengths, (5) assign ids in
// pre-order, 0..n-1.
std::vector<UIElement> compact(const RawA11yNode& root, Size screen);

// Fills the usage annotation from a fixed per-role verb template. Idempotent.
std::vector<UIElement> annotate(std::vector<UIElement> elements);

// Deterministic plain-text view of a snapshot, at most char_budget bytes.
// Truncates at a whole-line boundary with a "[+N more elements]" marker.
std::string render_context(const ContextSnapshot& snapshot, int char_budget);

nlohmann::json element_to_json(const UIElement& e);
nlohmann::json snapshot_to_json(const ContextSnapshot& s);

// Content hash over the canonical JSON serialization.
std::uint64_t snapshot_hash(const ContextSnapshot& s);

}  // namespace litecua::ctx
