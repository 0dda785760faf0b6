#include "posterforge/metrics/overlap.hpp"

namespace posterforge::metrics {

Rational intersection_area(const Box& a, const Box& b) {
    const Rational w = min(a.left + a.width, b.left + b.width) - max(a.left, b.left);
    const Rational h = min(a.top + a.height, b.top + b.height) - max(a.top, b.top);
    if (!w.is_positive() || !h.is_positive()) return 0;
    return w * h;
}

OverlapReport overlap(const std::vector<Box>& elements) {
    OverlapReport report;
    report.per_element.assign(elements.size(), 0.0);
    report.per_element_exact.assign(elements.size(), Rational(0));
    for (std::size_t i = 0; i < elements.size(); ++i) {
        const Rational area_i = elements[i].area();
        if (!area_i.is_positive()) continue;
        Rational shared = 0;
        for (std::size_t j = 0; j < elements.size(); ++j) {
            if (j == i || !elements[j].area().is_positive()) continue;
            shared += intersection_area(elements[i], elements[j]);
        }
        report.per_element_exact[i] = shared / area_i;
        report.per_element[i] = report.per_element_exact[i].to_double();
        report.value += report.per_element[i];
    }
    return report;
}

nlohmann::json to_json(const OverlapReport& r) {
    return {{"value", r.value}, {"per_element", r.per_element}};
}

}  // namespace posterforge::metrics
