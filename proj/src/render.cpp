#include "bonacci/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <fmt/format.h>

namespace bonacci {

namespace {

std::string hsl_hex(double hue, double s, double l) {
    const double c = (1 - std::fabs(2 * l - 1)) * s;
    const double hp = hue / 60.0;
    const double x = c * (1 - std::fabs(std::fmod(hp, 2.0) - 1));
    double r = 0, g = 0, b = 0;
    if (hp < 1) {
        r = c, g = x;
    } else if (hp < 2) {
        r = x, g = c;
    } else if (hp < 3) {
        g = c, b = x;
    } else if (hp < 4) {
        g = x, b = c;
    } else if (hp < 5) {
        r = x, b = c;
    } else {
        r = c, b = x;
    }
    const double m = l - c / 2;
    auto byte = [m](double v) { return static_cast<int>(std::lround((v + m) * 255)); };
    return fmt::format("#{:02x}{:02x}{:02x}", byte(r), byte(g), byte(b));
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(ch);
        }
    }
    return out;
}

int degree_of(const std::vector<TileApprox>& tiles) {
    if (tiles.empty()) {
        throw Error(ErrorCode::empty_plot, "no tiles to plot");
    }
    const int d = tiles.front().base.degree();
    for (const auto& t : tiles) {
        if (t.base.degree() != d) {
            throw Error(ErrorCode::context_mismatch, "tiles from different fields");
        }
    }
    return d;
}

std::string period_label(const EventuallyPeriodic& e) {
    std::string s = "." + compact_digits(e.preperiod) + "(" + compact_digits(e.period) + ")";
    return s;
}

struct Plane {
    int ax = 0;
    int ay = 1;
    const Cut* cut = nullptr;
    std::string mode;
};

Plane plane_of(const PlotSpec& spec, int dim) {
    Plane p;
    if (spec.cut) {
        const Cut& c = *spec.cut;
        if (!(c.thickness > 0)) {
            throw Error(ErrorCode::spec_error, "cut thickness must be positive");
        }
        if (c.axes.first == c.axes.second || c.axes.first < 0 || c.axes.second < 0 || c.axes.first >= dim ||
            c.axes.second >= dim) {
            throw Error(ErrorCode::spec_error, "cut axes must be two distinct coordinates");
        }
        if (static_cast<int>(c.anchor.size()) != dim) {
            throw Error(ErrorCode::spec_error, "cut anchor has the wrong dimension");
        }
        p.ax = c.axes.first;
        p.ay = c.axes.second;
        p.cut = &c;
        std::string anchor;
        for (double a : c.anchor) {
            anchor += (anchor.empty() ? "" : ", ") + fmt::format("{:.6f}", a);
        }
        p.mode = fmt::format("cut: axis-aligned slab through ({}) on axes {},{} with thickness {:.6f}; "
                             "the slab orientation is a visualization choice",
                             anchor, p.ax, p.ay, c.thickness);
    } else if (dim == 2) {
        p.mode = "plane of the complex conjugate";
    } else if (spec.projection) {
        p.mode = "diagnostic projection onto the first complex-pair plane";
    } else {
        throw Error(ErrorCode::spec_error, "embedding dimension above 2 needs a cut or a projection");
    }
    return p;
}

} // namespace

std::map<int, std::string> default_palette(int layers) {
    std::map<int, std::string> out;
    for (int h = 1; h <= layers; ++h) {
        out[h] = hsl_hex(360.0 * (h - 1) / layers, 0.75, 0.45);
    }
    return out;
}

double default_cut_thickness(const std::vector<TileApprox>& tiles) {
    std::vector<double> lo, hi;
    for (const auto& t : tiles) {
        for (const auto& p : t.points) {
            const auto a = p.approx();
            if (lo.empty()) {
                lo = hi = a;
            }
            for (std::size_t i = 0; i < a.size(); ++i) {
                lo[i] = std::min(lo[i], a[i]);
                hi[i] = std::max(hi[i], a[i]);
            }
        }
    }
    double diag = 0;
    for (std::size_t i = 0; i < lo.size(); ++i) {
        diag += (hi[i] - lo[i]) * (hi[i] - lo[i]);
    }
    diag = std::sqrt(diag);
    return diag > 0 ? 0.02 * diag : 1e-3;
}

std::vector<PlottedTile> plot_points(const PlotSpec& spec) {
    const int d = degree_of(spec.tiles);
    const Plane plane = plane_of(spec, d - 1);
    std::vector<PlottedTile> out;
    for (const auto& t : spec.tiles) {
        PlottedTile pt{t.layer.rep, period_label(t.expansion), {}};
        for (const auto& p : t.points) {
            const auto a = p.approx();
            bool keep = true;
            if (plane.cut != nullptr) {
                for (std::size_t j = 0; j < a.size() && keep; ++j) {
                    if (static_cast<int>(j) != plane.ax && static_cast<int>(j) != plane.ay) {
                        keep = std::fabs(a[j] - plane.cut->anchor[j]) <= plane.cut->thickness;
                    }
                }
            }
            if (keep) {
                pt.points.emplace_back(a[static_cast<std::size_t>(plane.ax)], a[static_cast<std::size_t>(plane.ay)]);
            }
        }
        out.push_back(std::move(pt));
    }
    return out;
}

std::string render_svg(const PlotSpec& spec) {
    const int d = degree_of(spec.tiles);
    if (spec.width <= 0 || spec.height <= 0 || !(spec.marker_size > 0)) {
        throw Error(ErrorCode::spec_error, "width, height and marker size must be positive");
    }
    const Plane plane = plane_of(spec, d - 1);
    const auto tiles = plot_points(spec);

    std::set<int> layers;
    for (const auto& t : tiles) {
        layers.insert(t.layer);
    }
    const int n_layers = std::max(1, d - 1);
    const auto palette = spec.palette.empty() ? default_palette(n_layers) : spec.palette;
    std::set<std::string> colors;
    for (int h : layers) {
        auto it = palette.find(h);
        if (it == palette.end()) {
            throw Error(ErrorCode::spec_error, "palette has no color for layer " + std::to_string(h));
        }
        colors.insert(it->second);
    }
    if (colors.size() != layers.size()) {
        throw Error(ErrorCode::spec_error, "palette repeats a color across layers");
    }

    std::optional<std::pair<double, double>> mark;
    if (spec.highlight) {
        const auto& h = *spec.highlight;
        if (static_cast<int>(h.size()) != d - 1) {
            throw Error(ErrorCode::spec_error, "highlight point has the wrong dimension");
        }
        mark.emplace(h[static_cast<std::size_t>(plane.ax)], h[static_cast<std::size_t>(plane.ay)]);
    }

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    auto grow = [&](double x, double y) {
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
    };
    for (const auto& t : tiles) {
        for (const auto& [x, y] : t.points) {
            grow(x, y);
        }
    }
    if (mark) {
        grow(mark->first, mark->second);
    }
    if (!(x0 <= x1)) {
        x0 = y0 = -1;
        x1 = y1 = 1;
    }
    const double margin = 20;
    const double span_x = std::max(x1 - x0, 1e-12);
    const double span_y = std::max(y1 - y0, 1e-12);
    const double scale = std::min((spec.width - 2 * margin) / span_x, (spec.height - 2 * margin) / span_y);
    const double off_x = (spec.width - scale * span_x) / 2;
    const double off_y = (spec.height - scale * span_y) / 2;
    auto sx = [&](double x) { return off_x + (x - x0) * scale; };
    auto sy = [&](double y) { return spec.height - off_y - (y - y0) * scale; };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" "
                       "viewBox=\"0 0 {} {}\">\n",
                       spec.width, spec.height, spec.width, spec.height);
    if (!spec.title.empty()) {
        svg += "<title>" + xml_escape(spec.title) + "</title>\n";
    }
    svg += fmt::format("<desc>d={} depth={} tiles={}; {}</desc>\n", d, spec.tiles.front().depth, tiles.size(),
                       xml_escape(plane.mode));
    svg += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n", spec.width,
                       spec.height);

    const std::string r = fmt::format("{:.2f}", spec.marker_size);
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        const auto& t = tiles[i];
        svg += fmt::format("<g fill=\"{}\" data-layer=\"{}\" data-base=\"{}\">\n", palette.at(t.layer), t.layer,
                           xml_escape(spec.tiles[i].base.to_string()));
        std::set<std::pair<long, long>> seen;
        for (const auto& [x, y] : t.points) {
            const double px = sx(x);
            const double py = sy(y);
            if (!seen.insert({std::lround(px * 100), std::lround(py * 100)}).second) {
                continue;
            }
            svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{}\"/>\n", px, py, r);
        }
        svg += "</g>\n";
    }
    if (spec.labels) {
        for (const auto& t : tiles) {
            if (t.points.empty()) {
                continue;
            }
            double cx = 0, cy = 0;
            for (const auto& [x, y] : t.points) {
                cx += x;
                cy += y;
            }
            cx /= static_cast<double>(t.points.size());
            cy /= static_cast<double>(t.points.size());
            svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" "
                               "text-anchor=\"middle\" fill=\"#000000\">{}</text>\n",
                               sx(cx), sy(cy), xml_escape(t.label));
        }
    }
    if (mark) {
        const double mx = sx(mark->first);
        const double my = sy(mark->second);
        svg += fmt::format("<path d=\"M {:.2f} {:.2f} L {:.2f} {:.2f} M {:.2f} {:.2f} L {:.2f} {:.2f}\" "
                           "stroke=\"#000000\" stroke-width=\"1.5\" fill=\"none\"/>\n",
                           mx - 6, my - 6, mx + 6, my + 6, mx - 6, my + 6, mx + 6, my - 6);
    }
    int row = 0;
    for (int h : layers) {
        const double ly = 16 + 16 * row++;
        svg += fmt::format("<rect x=\"8\" y=\"{:.2f}\" width=\"10\" height=\"10\" fill=\"{}\"/>\n", ly - 9,
                           palette.at(h));
        svg += fmt::format("<text x=\"22\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" "
                           "fill=\"#000000\">L{}</text>\n",
                           ly, h);
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace bonacci
