#include "posterforge/metrics/poster.hpp"

namespace posterforge::metrics {

PosterElements poster_elements(const typography::PosterDocument& doc) {
    PosterElements out;
    typography::for_each_node(doc.nodes, [&](const typography::Node& n) {
        if (!n.is_leaf()) return;
        out.ids.push_back(n.id);
        out.boxes.push_back({n.rect.left, n.rect.top, n.rect.width, n.rect.height});
    });
    return out;
}

nlohmann::json poster_overlap_json(const typography::PosterDocument& doc) {
    const PosterElements elements = poster_elements(doc);
    const OverlapReport report = overlap(elements.boxes);
    nlohmann::json j = to_json(report);
    nlohmann::json by_id = nlohmann::json::object();
    for (std::size_t i = 0; i < elements.ids.size(); ++i) by_id[elements.ids[i]] = report.per_element[i];
    j["elements"] = by_id;
    return j;
}

}  // namespace posterforge::metrics
