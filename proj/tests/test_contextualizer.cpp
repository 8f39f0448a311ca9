#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "litecua/ctx/a11y.hpp"
#include "litecua/ctx/context.hpp"

using namespace litecua;
using namespace litecua::ctx;
using nlohmann::json;

namespace {

json node(const std::string& role, const std::string& name, Rect b,
          std::vector<std::string> states = {"visible"}, json children = json::array()) {
    json j = {
        {"role", role},
        {"name", name},
        {"bounds", {{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}}},
        {"states", states},
        {"children", std::move(children)},
    };
    return j;
}

constexpr Size kScreen{800, 600};

}  // namespace

TEST_CASE("ingest: single node document") {
    auto t = ingest_a11y(R"({"role":"frame","bounds":{"x":0,"y":0,"w":800,"h":600}})");
    CHECK(t.root.role == "frame");
    CHECK(t.root.children.empty());
    CHECK(t.root.bounds == Rect{0, 0, 800, 600});
    CHECK_FALSE(t.truncated);
}

TEST_CASE("ingest: three level fixture preserves pre-order") {
    json doc = node("frame", "", {0, 0, 800, 600}, {"visible"},
                    json::array({node("window", "w", {10, 10, 400, 300}, {"visible"},
                                      json::array({node("push-button", "OK", {20, 20, 60, 24})}))}));
    auto t = ingest_a11y(doc.dump());
    CHECK(count_nodes(t.root) == 3);
    CHECK(preorder_roles(t.root) ==
          std::vector<std::string>{"frame", "window", "push-button"});
}

TEST_CASE("ingest: wrong top-level shape") {
    CHECK_THROWS_AS(ingest_a11y("[]"), MalformedTree);
    CHECK_THROWS_AS(ingest_a11y("{nope"), MalformedTree);
    CHECK_THROWS_AS(ingest_a11y(R"({"name":"x"})"), MalformedTree);
}

TEST_CASE("ingest: depth cap drops deep nodes with truncation flag") {
    json leaf = node("text", "deep", {0, 0, 10, 10});
    json doc = leaf;
    for (int i = 0; i < 40; ++i) {
        doc = node("panel", "", {0, 0, 100, 100}, {"visible"}, json::array({doc}));
    }
    auto t = ingest_a11y(doc.dump());
    CHECK(t.truncated);
    CHECK(count_nodes(t.root) == kMaxTreeDepth + 1);
}

TEST_CASE("ingest: node count cap") {
    json children = json::array();
    for (int i = 0; i < kMaxTreeNodes + 50; ++i) {
        children.push_back(node("push-button", "b" + std::to_string(i), {0, 0, 5, 5}));
    }
    json doc = node("frame", "root", {0, 0, 800, 600}, {"visible"}, std::move(children));
    auto t = ingest_a11y(doc.dump());
    CHECK(t.truncated);
    CHECK(count_nodes(t.root) == kMaxTreeNodes);
}

TEST_CASE("compact: invisible subtree is pruned") {
    json doc = node("window", "main", {10, 10, 300, 200}, {"visible"},
                    json::array({
                        node("push-button", "A", {20, 20, 80, 30}),
                        node("push-button", "B", {20, 60, 80, 30}, {"enabled"}),
                    }));
    auto elements = compact(ingest_a11y(doc.dump()).root, kScreen);
    REQUIRE(elements.size() == 2);
    CHECK(elements[0].role == Role::kWindow);
    CHECK(elements[0].id == 0);
    CHECK(elements[1].name == "A");
    CHECK(elements[1].id == 1);
}

TEST_CASE("compact: zero-area filler panel spliced, child kept in pre-order") {
    json doc = node("window", "main", {0, 0, 400, 300}, {"visible"},
                    json::array({node("panel", "", {0, 0, 0, 0}, {"visible"},
                                      json::array({node("text", "input", {30, 30, 100, 20})}))}));
    auto elements = compact(ingest_a11y(doc.dump()).root, kScreen);
    REQUIRE(elements.size() == 2);
    CHECK(elements[0].role == Role::kWindow);
    CHECK(elements[1].role == Role::kTextField);
    CHECK(elements[1].name == "input");
    CHECK(elements[1].id == 1);
}

TEST_CASE("compact: invisible root yields empty table") {
    json doc = node("frame", "root", {0, 0, 800, 600}, {"enabled"},
                    json::array({node("push-button", "A", {20, 20, 80, 30})}));
    CHECK(compact(ingest_a11y(doc.dump()).root, kScreen).empty());
}

TEST_CASE("compact: off-screen and unknown roles") {
    json doc = node("window", "w", {0, 0, 400, 300}, {"visible"},
                    json::array({
                        node("push-button", "gone", {900, 10, 50, 20}),
                        node("wombat-widget", "odd", {10, 10, 50, 20}),
                    }));
    auto elements = compact(ingest_a11y(doc.dump()).root, kScreen);
    REQUIRE(elements.size() == 2);
    CHECK(elements[1].role == Role::kUnknown);
    CHECK(elements[1].name == "odd");
}

TEST_CASE("compact: name and value caps with ellipsis marker") {
    std::string long_name(100, 'x');
    std::string long_value(250, 'v');
    json n = node("text", long_name, {10, 10, 100, 20});
    n["value"] = long_value;
    json doc = node("window", "w", {0, 0, 400, 300}, {"visible"}, json::array({n}));
    auto elements = compact(ingest_a11y(doc.dump()).root, kScreen);
    REQUIRE(elements.size() == 2);
    CHECK(elements[1].name == std::string(80, 'x') + "\xE2\x80\xA6");
    REQUIRE(elements[1].value.has_value());
    CHECK(*elements[1].value == std::string(200, 'v') + "\xE2\x80\xA6");
}

TEST_CASE("annotate: verb templates") {
    UIElement button;
    button.role = Role::kButton;
    button.name = "Chrome";
    UIElement label;
    label.id = 1;
    label.role = Role::kLabel;
    label.value = "Ready";
    UIElement blank;
    blank.id = 2;
    blank.role = Role::kUnknown;
    auto out = annotate({button, label, blank});
    CHECK(out[0].usage == "Press to trigger Chrome");
    CHECK(out[1].usage == "Reads Ready");
    CHECK(out[2].usage == "Inspect this unknown");
}

TEST_CASE("annotate: idempotent") {
    UIElement e;
    e.role = Role::kCheckbox;
    e.name = "dark mode";
    auto once = annotate({e});
    auto twice = annotate(once);
    CHECK(once == twice);
    CHECK(once[0].usage == "Toggle dark mode");
}

namespace {

ContextSnapshot small_snapshot() {
    json doc = node("window", "main", {10, 10, 300, 200}, {"visible"},
                    json::array({node("push-button", "OK", {20, 20, 80, 30})}));
    ContextSnapshot s;
    s.step = 0;
    s.screen = kScreen;
    s.elements = annotate(compact(ingest_a11y(doc.dump()).root, kScreen));
    return s;
}

}  // namespace

TEST_CASE("render_context: full rendering within budget") {
    auto s = small_snapshot();
    auto text = render_context(s, 4096);
    CHECK(text.size() < 4096);
    CHECK(text == render_context(s, 4096));  // deterministic
    auto lines = std::count(text.begin(), text.end(), '\n');
    CHECK(lines == 2);  // header + 2 element lines, no trailing newline
    CHECK(text.rfind("screen 800x600 step 0", 0) == 0);
    CHECK(text.find("[0] window 'main' @(160,110) state=visible usage=Contains main") !=
          std::string::npos);
}

TEST_CASE("render_context: truncation marker at whole-line boundary") {
    ContextSnapshot s;
    s.screen = kScreen;
    json children = json::array();
    for (int i = 0; i < 100; ++i) {
        children.push_back(node("push-button", "button_number_" + std::to_string(i),
                                {5 * (i % 50), 10 * (i / 10), 40, 20}));
    }
    json doc = node("window", "big", {0, 0, 800, 600}, {"visible"}, std::move(children));
    s.elements = annotate(compact(ingest_a11y(doc.dump()).root, kScreen));
    REQUIRE(s.elements.size() == 101);
    auto text = render_context(s, 500);
    CHECK(text.size() <= 500);
    CHECK(text.find("more elements]") != std::string::npos);
    // every retained element line is complete
    CHECK(text.back() == ']');
}

TEST_CASE("render_context: budget floor") {
    CHECK_THROWS_AS(render_context(small_snapshot(), 255), BudgetTooSmall);
    CHECK_NOTHROW(render_context(small_snapshot(), 256));
}

namespace {

json random_tree(std::mt19937& rng, int depth) {
    static const std::vector<std::string> roles = {"window",   "push-button", "text",
                                                   "label",    "panel",       "check-box",
                                                   "scroll-bar", "widgety"};
    std::uniform_int_distribution<int> dpos(-100, 900), dsize(0, 400), dbool(0, 9);
    std::uniform_int_distribution<std::size_t> drole(0, roles.size() - 1);
    json j;
    j["role"] = roles[drole(rng)];
    j["name"] = dbool(rng) < 6 ? "n" + std::to_string(dbool(rng)) : "";
    j["bounds"] = {{"x", dpos(rng)}, {"y", dpos(rng)}, {"w", dsize(rng)}, {"h", dsize(rng)}};
    json states = json::array();
    if (dbool(rng) < 8) states.push_back("visible");
    if (dbool(rng) < 5) states.push_back("enabled");
    j["states"] = states;
    json children = json::array();
    if (depth < 3) {
        int n = std::uniform_int_distribution<int>(0, 3)(rng);
        for (int i = 0; i < n; ++i) children.push_back(random_tree(rng, depth + 1));
    }
    j["children"] = children;
    return j;
}

void hide_nth(json& doc, int& n) {
    if (n == 0) {
        json states = json::array();
        for (const auto& s : doc["states"]) {
            if (s != "visible") states.push_back(s);
        }
        doc["states"] = states;
    }
    --n;
    for (auto& c : doc["children"]) {
        if (n < 0) return;
        hide_nth(c, n);
    }
}

int tree_size(const json& doc) {
    int n = 1;
    for (const auto& c : doc["children"]) n += tree_size(c);
    return n;
}

}  // namespace

TEST_CASE("compact properties: ids, bounds, visibility monotone") {
    std::mt19937 rng(20240817);
    for (int iter = 0; iter < 300; ++iter) {
        json doc = random_tree(rng, 0);
        auto tree = ingest_a11y(doc.dump());
        auto elements = compact(tree.root, kScreen);
        for (std::size_t i = 0; i < elements.size(); ++i) {
            CHECK(elements[i].id == static_cast<int>(i));
            CHECK(elements[i].bounds.intersects_screen(kScreen));
        }
        // hiding any single node never adds elements
        int size = tree_size(doc);
        int pick = std::uniform_int_distribution<int>(0, size - 1)(rng);
        json hidden = doc;
        hide_nth(hidden, pick);
        auto fewer = compact(ingest_a11y(hidden.dump()).root, kScreen);
        CHECK(fewer.size() <= elements.size());
    }
}

TEST_CASE("render_context: length bounded for fuzzed snapshots") {
    std::mt19937 rng(7);
    for (int iter = 0; iter < 100; ++iter) {
        json doc = random_tree(rng, 0);
        ContextSnapshot s;
        s.screen = kScreen;
        s.elements = annotate(compact(ingest_a11y(doc.dump()).root, kScreen));
        int budget = std::uniform_int_distribution<int>(256, 2000)(rng);
        auto text = render_context(s, budget);
        CHECK(text.size() <= static_cast<std::size_t>(budget));
    }
}
