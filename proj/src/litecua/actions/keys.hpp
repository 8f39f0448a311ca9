#pragma once

#include <optional>
#include <string>

namespace litecua::actions {

struct KeyStroke {
    std::string key;  // wire key name ("a", "1", "-", "space", "enter", "tab")
    bool shifted = false;
};

// US-layout decomposition of a typeable character into a key press. Returns
// nullopt for characters keystroke synthesis cannot produce (non-ASCII,
// control characters other than \n and \t).
std::optional<KeyStroke> keystroke_for_char(char c);

inline bool is_typeable(char c) { return keystroke_for_char(c).has_value(); }

// True for key names the action grammar accepts in hotkeys.
bool is_valid_key_name(const std::string& key);

}  // namespace litecua::actions
