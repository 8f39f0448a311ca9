#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "litecua/actions/action.hpp"
#include "litecua/common/geometry.hpp"
#include "litecua/sim/scene.hpp"

namespace litecua::sim {

// Live per-widget facts. Everything a scene effect or input gesture can change
// lives here; the immutable part stays in the WidgetSpec.
struct WidgetState {
    std::string value;
    bool checked = false;
    int scroll_offset = 0;
    int pressed_count = 0;
    bool selected = false;
    int double_clicks = 0;
    bool operator==(const WidgetState&) const = default;
};

// Simulated time advances 10 ms per command; Sleep(ms) advances by ms rounded
// up to the next 10 ms. The double-click window is measured on this clock.
inline constexpr std::int64_t kTimeStepMs = 10;
inline constexpr std::int64_t kDoubleClickWindowMs = 250;

struct DesktopState {
    SceneSpec scene;
    std::map<std::string, WidgetState> widgets;      // widget id → live state
    std::map<std::string, bool> window_visible;      // window title → mapped
    Point pointer;
    std::set<std::string> held_buttons;              // button names
    std::vector<std::string> held_keys;              // press order preserved
    std::optional<std::string> focus;                // widget id
    std::int64_t tick = 0;                           // primitives applied since reset
    std::int64_t time_ms = 0;                        // simulated clock
    std::uint64_t rng_seed = 0;

    // Gesture bookkeeping. A left press remembers what it landed on; the
    // matching release decides between click and scrollbar drag.
    std::optional<std::string> press_widget;
    Point press_point;
    std::optional<std::string> last_click_widget;
    std::int64_t last_click_ms = 0;

    bool operator==(const DesktopState&) const = default;
};

// A refused primitive. `code` is the wire error code: out_of_bounds,
// unmatched_release, button_already_held, key_already_held.
class StepRejected : public std::runtime_error {
public:
    std::string code;
    StepRejected(std::string code_, const std::string& what)
        : std::runtime_error(what), code(std::move(code_)) {}
};

// Fresh state: tick 0, pointer at (0,0), nothing held, focus per
// initial_focus. The seed is recorded verbatim; the simulator itself is fully
// deterministic. Throws InvalidScene when the scene violates its invariants.
DesktopState load_scene(const SceneSpec& spec, std::uint64_t seed);

// Applies one primitive in place. Every command advances tick by exactly 1.
// Throws StepRejected and leaves the state untouched when the command is
// refused.
void step(DesktopState& state, const actions::PrimitiveCommand& cmd);

// Topmost visible widget under a point, if any. Windows later in the scene
// list cover earlier ones; within a window, later widgets cover earlier ones.
std::optional<std::string> widget_at(const DesktopState& state, Point p);

// Count of widgets in currently visible windows.
int visible_widget_count(const DesktopState& state);

// Full-fidelity serialization (includes gesture bookkeeping) and its hash.
// Equal hashes mean equal states.
nlohmann::json state_to_json(const DesktopState& state);
std::uint64_t state_hash(const DesktopState& state);

// Raw accessibility document: a root "frame" node named after the scene, one
// child per visible window in z-order, widgets in declaration order. States
// reflect live focus/checked/selected facts. Byte-stable for equal states.
nlohmann::json a11y_json(const DesktopState& state);
std::string emit_a11y(const DesktopState& state);

}  // namespace litecua::sim
