#pragma once

#include <optional>
#include <string>

namespace litecua::sim {

// Character produced by releasing `key` while shift is (or is not) held, on a
// US layout. Named keys that do not produce text (arrows, modifiers, esc, ...)
// yield nullopt. Kept deliberately separate from the agent-side keystroke
// table so the two stay independent checks on each other.
std::optional<char> char_for_key(const std::string& key, bool shifted);

// True for shift/ctrl/alt/meta/super.
bool is_modifier_key(const std::string& key);

}  // namespace litecua::sim
