#include "litecua/sim/keymap.hpp"

#include <cctype>

namespace litecua::sim {

std::optional<char> char_for_key(const std::string& key, bool shifted) {
    if (key == "space") return ' ';
    if (key == "enter") return '\n';
    if (key == "tab") return '\t';
    if (key.size() != 1) return std::nullopt;

    const char c = key[0];
    if (c >= 'a' && c <= 'z')
        return shifted ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
    if (c >= '0' && c <= '9') {
        // Shifted digit row, US layout: 1!  2@  3#  4$  5%  6^  7&  8*  9(  0)
        static const char kShiftedDigits[] = ")!@#$%^&*(";
        return shifted ? kShiftedDigits[c - '0'] : c;
    }
    switch (c) {
        case '-': return shifted ? '_' : '-';
        case '=': return shifted ? '+' : '=';
        case '[': return shifted ? '{' : '[';
        case ']': return shifted ? '}' : ']';
        case '\\': return shifted ? '|' : '\\';
        case ';': return shifted ? ':' : ';';
        case '\'': return shifted ? '"' : '\'';
        case ',': return shifted ? '<' : ',';
        case '.': return shifted ? '>' : '.';
        case '/': return shifted ? '?' : '/';
        case '`': return shifted ? '~' : '`';
        default: return std::nullopt;
    }
}

bool is_modifier_key(const std::string& key) {
    return key == "shift" || key == "ctrl" || key == "alt" || key == "meta" || key == "super";
}

}  // namespace litecua::sim
