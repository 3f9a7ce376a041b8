#include <json.hpp>

#include "bonacci/render.hpp"

namespace bonacci {

std::string export_json(const std::vector<TileApprox>& tiles) {
    using json = nlohmann::ordered_json;
    json doc;
    if (tiles.empty()) {
        doc["d"] = nullptr;
        doc["depth"] = nullptr;
    } else {
        doc["d"] = tiles.front().base.degree();
        doc["depth"] = tiles.front().depth;
    }
    double max_error = 0;
    json arr = json::array();
    for (const auto& t : tiles) {
        json pts = json::array();
        for (const auto& p : t.points) {
            pts.push_back(p.approx());
            max_error = std::max(max_error, p.radius());
        }
        arr.push_back({{"base", t.base.to_string()},
                       {"layer", t.layer.rep},
                       {"expansion", {{"preperiod", t.expansion.preperiod}, {"period", t.expansion.period}}},
                       {"points", std::move(pts)}});
    }
    doc["tiles"] = std::move(arr);
    doc["max_error"] = max_error;
    return doc.dump();
}

} // namespace bonacci
