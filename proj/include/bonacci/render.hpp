#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bonacci/tiling.hpp"

namespace bonacci {

/// Axis-aligned slab around an anchor: a point is kept when every
/// non-axis coordinate is within thickness of the anchor's.
struct Cut {
    std::vector<double> anchor;
    std::pair<int, int> axes{0, 1};
    double thickness = 0;
};

struct PlotSpec {
    std::vector<TileApprox> tiles;
    int width = 800;
    int height = 800;
    std::map<int, std::string> palette; // layer -> color; empty means default_palette
    double marker_size = 1.0;
    std::optional<Cut> cut;
    bool projection = false; // orthogonal projection onto the first complex-pair plane
    bool labels = false;
    std::optional<std::vector<double>> highlight; // e.g. Phi(z), drawn as a cross
    std::string title;
};

/// Evenly spaced hues starting at red, one per layer 1..layers.
std::map<int, std::string> default_palette(int layers);

/// 2% of the diagonal of the bounding box of all cloud points.
double default_cut_thickness(const std::vector<TileApprox>& tiles);

struct PlottedTile {
    int layer = 0;
    std::string label; // period word of the base expansion
    std::vector<std::pair<double, double>> points;
};

/// Points that end up in the figure, in plane coordinates (before scaling).
std::vector<PlottedTile> plot_points(const PlotSpec& spec);

/// Byte-deterministic SVG 1.1 document.
std::string render_svg(const PlotSpec& spec);

/// {"d", "depth", "tiles": [{"base", "layer", "expansion", "points"}]}.
std::string export_json(const std::vector<TileApprox>& tiles);

} // namespace bonacci
