#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "bonacci/render.hpp"
#include "doctest.h"

using namespace bonacci;

namespace {

std::size_t count_of(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) {
        ++n;
    }
    return n;
}

template <class F>
ErrorCode error_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an exception");
    return ErrorCode::spec_error;
}

std::vector<TileApprox> around_origin(int d, int depth) {
    const auto ctx = FieldContext::make(d);
    std::vector<TileApprox> out;
    for (const auto& x : tiles_containing(AlgNum(ctx))) {
        out.push_back(tile_approx(x, depth, 64));
    }
    return out;
}

} // namespace

TEST_CASE("svg is deterministic and has one marker per depth-0 tile") {
    PlotSpec spec;
    spec.tiles = around_origin(3, 6);
    const std::string a = render_svg(spec);
    const std::string b = render_svg(spec);
    CHECK(a == b);
    CHECK(a.rfind("<?xml", 0) == 0);
    CHECK(a.find("version=\"1.1\"") != std::string::npos);

    const auto ctx = FieldContext::make(3);
    PlotSpec one;
    one.tiles = {tile_approx(parse_algnum(ctx, "b^-3"), 0)};
    const std::string svg = render_svg(one);
    CHECK(count_of(svg, "<circle") == 1);
}

TEST_CASE("render errors") {
    PlotSpec empty;
    CHECK(error_of([&] { render_svg(empty); }) == ErrorCode::empty_plot);

    PlotSpec mixed;
    mixed.tiles = {tile_approx(parse_algnum(FieldContext::make(3), "b^-3"), 0),
                   tile_approx(parse_algnum(FieldContext::make(4), "b^-4"), 0)};
    CHECK(error_of([&] { render_svg(mixed); }) == ErrorCode::context_mismatch);

    PlotSpec d4;
    d4.tiles = {tile_approx(parse_algnum(FieldContext::make(4), "b^-4"), 2)};
    CHECK(error_of([&] { render_svg(d4); }) == ErrorCode::spec_error);
    d4.projection = true;
    CHECK_NOTHROW(render_svg(d4));
    d4.projection = false;
    d4.cut = Cut{{0, 0, 0}, {0, 1}, 0.0};
    CHECK(error_of([&] { render_svg(d4); }) == ErrorCode::spec_error);
    d4.cut = Cut{{0, 0}, {0, 1}, 0.1};
    CHECK(error_of([&] { render_svg(d4); }) == ErrorCode::spec_error);
    d4.cut = Cut{{0, 0, 0}, {1, 1}, 0.1};
    CHECK(error_of([&] { render_svg(d4); }) == ErrorCode::spec_error);

    PlotSpec pal;
    pal.tiles = around_origin(3, 2);
    pal.palette = {{1, "#ff0000"}, {2, "#ff0000"}};
    CHECK(error_of([&] { render_svg(pal); }) == ErrorCode::spec_error);
    pal.palette = {{1, "#ff0000"}};
    CHECK(error_of([&] { render_svg(pal); }) == ErrorCode::spec_error);
    pal.palette = {{1, "#ff0000"}, {2, "#0000ff"}};
    CHECK_NOTHROW(render_svg(pal));
    pal.width = 0;
    CHECK(error_of([&] { render_svg(pal); }) == ErrorCode::spec_error);
}

TEST_CASE("reflected tiles plot as reflected point sets") {
    const auto ctx = FieldContext::make(3);
    for (const char* text : {"b^-3", "b^-2 - b^-3", "b^-1 - b^-2 - b^-3"}) {
        const AlgNum x = parse_algnum(ctx, text);
        PlotSpec pos, neg;
        pos.tiles = {tile_approx(x, 8, 64)};
        neg.tiles = {tile_approx(-x, 8, 64)};
        auto a = plot_points(pos).front().points;
        auto b = plot_points(neg).front().points;
        REQUIRE(a.size() == b.size());
        for (auto& p : b) {
            p = {-p.first, -p.second};
        }
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(std::fabs(a[i].first - b[i].first) < 1e-12);
            CHECK(std::fabs(a[i].second - b[i].second) < 1e-12);
        }
    }
}

TEST_CASE("cut keeps exactly the slab and grows with thickness") {
    const auto ctx = FieldContext::make(4);
    std::vector<TileApprox> tiles;
    for (const auto& x : tiles_containing(parse_algnum(ctx, "1 + b^4 + b^8"))) {
        tiles.push_back(tile_approx(x, 8, 64));
    }
    REQUIRE(tiles.size() == 3);
    const auto anchor = embed(parse_algnum(ctx, "1 + b^4 + b^8"), 64).approx();
    const double t0 = default_cut_thickness(tiles);
    CHECK(t0 > 0);

    std::size_t prev = 0;
    for (double f : {0.25, 0.5, 1.0, 2.0, 8.0}) {
        PlotSpec spec;
        spec.tiles = tiles;
        spec.cut = Cut{anchor, {0, 1}, t0 * f};
        const auto plotted = plot_points(spec);
        std::size_t total = 0;
        for (std::size_t i = 0; i < tiles.size(); ++i) {
            std::multiset<std::pair<double, double>> expected;
            for (const auto& p : tiles[i].points) {
                const auto a = p.approx();
                if (std::fabs(a[2] - anchor[2]) <= t0 * f) {
                    expected.insert({a[0], a[1]});
                }
            }
            const std::multiset<std::pair<double, double>> got(plotted[i].points.begin(), plotted[i].points.end());
            CHECK(got == expected);
            total += got.size();
        }
        CHECK(total >= prev);
        prev = total;
    }
    CHECK(prev > 0);
}

TEST_CASE("default palette") {
    for (int n = 1; n <= 8; ++n) {
        const auto pal = default_palette(n);
        REQUIRE(pal.size() == static_cast<std::size_t>(n));
        std::set<std::string> colors;
        for (const auto& [h, c] : pal) {
            colors.insert(c);
            CHECK(c.size() == 7);
        }
        CHECK(colors.size() == static_cast<std::size_t>(n));
        const std::string red = pal.at(1);
        const int r = std::stoi(red.substr(1, 2), nullptr, 16);
        const int g = std::stoi(red.substr(3, 2), nullptr, 16);
        const int b = std::stoi(red.substr(5, 2), nullptr, 16);
        CHECK(r > g);
        CHECK(g == b);
    }
}

TEST_CASE("labels show the period word") {
    PlotSpec spec;
    spec.tiles = around_origin(3, 2);
    spec.labels = true;
    const std::string svg = render_svg(spec);
    CHECK(svg.find("(01T)") != std::string::npos);
    CHECK(svg.find("(10T)") != std::string::npos);
}

TEST_CASE("json export") {
    using nlohmann::ordered_json;
    const std::string empty = export_json({});
    const auto je = ordered_json::parse(empty);
    CHECK(je.at("tiles").empty());
    CHECK(je.at("d").is_null());
    CHECK(je.dump() == empty);

    const auto ctx = FieldContext::make(3);
    const std::string one = export_json({tile_approx(parse_algnum(ctx, "b^-3"), 0)});
    const auto j1 = ordered_json::parse(one);
    CHECK(j1.at("d") == 3);
    REQUIRE(j1.at("tiles").size() == 1);
    CHECK(j1.at("tiles")[0].at("points").size() == 1);
    CHECK(j1.at("tiles")[0].at("points")[0].size() == 2);
    CHECK(j1.dump() == one);

    const auto tiles = around_origin(3, 5);
    const std::string text = export_json(tiles);
    const auto j = ordered_json::parse(text);
    CHECK(j.dump() == text);
    std::set<int> layers;
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        const auto& t = j.at("tiles")[i];
        layers.insert(t.at("layer").get<int>());
        CHECK(t.at("layer").get<int>() == layer_of(tiles[i].base).rep);
        CHECK(t.at("points").size() == tiles[i].points.size());
        for (const int digit : t.at("expansion").at("period")) {
            CHECK((digit >= -1 && digit <= 1));
        }
    }
    CHECK(layers == std::set<int>{1, 2});
}
