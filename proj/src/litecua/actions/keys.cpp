#include "litecua/actions/keys.hpp"

#include <array>
#include <cctype>
#include <set>

namespace litecua::actions {

namespace {

// Shifted symbol -> base key, US layout.
constexpr std::array<std::pair<char, char>, 21> kShiftPairs = {{
    {'!', '1'}, {'@', '2'}, {'#', '3'}, {'$', '4'}, {'%', '5'}, {'^', '6'}, {'&', '7'},
    {'*', '8'}, {'(', '9'}, {')', '0'}, {'_', '-'}, {'+', '='}, {'{', '['}, {'}', ']'},
    {'|', '\\'}, {':', ';'}, {'"', '\''}, {'<', ','}, {'>', '.'}, {'?', '/'}, {'~', '`'},
}};

constexpr bool is_plain_punct(char c) {
    switch (c) {
        case '-': case '=': case '[': case ']': case '\\': case ';': case '\'':
        case ',': case '.': case '/': case '`':
            return true;
        default:
            return false;
    }
}

}  // namespace

std::optional<KeyStroke> keystroke_for_char(char c) {
    if (c >= 'a' && c <= 'z') return KeyStroke{std::string(1, c), false};
    if (c >= 'A' && c <= 'Z') return KeyStroke{std::string(1, static_cast<char>(c - 'A' + 'a')), true};
    if (c >= '0' && c <= '9') return KeyStroke{std::string(1, c), false};
    if (c == ' ') return KeyStroke{"space", false};
    if (c == '\n') return KeyStroke{"enter", false};
    if (c == '\t') return KeyStroke{"tab", false};
    if (is_plain_punct(c)) return KeyStroke{std::string(1, c), false};
    for (auto [shifted, base] : kShiftPairs) {
        if (c == shifted) return KeyStroke{std::string(1, base), true};
    }
    return std::nullopt;
}

bool is_valid_key_name(const std::string& key) {
    if (key.size() == 1) {
        char c = key[0];
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || is_plain_punct(c);
    }
    static const std::set<std::string> named = {
        "shift", "ctrl", "alt", "meta", "super", "enter", "tab",   "space",
        "esc",   "backspace", "delete", "home", "end",   "pageup", "pagedown",
        "up",    "down", "left", "right", "f1",  "f2",   "f3",     "f4",
        "f5",    "f6",   "f7",   "f8",   "f9",  "f10",  "f11",    "f12",
    };
    return named.count(key) > 0;
}

}  // namespace litecua::actions
