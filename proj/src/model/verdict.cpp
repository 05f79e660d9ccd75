#include "ghabuse/verdict.hpp"

#include "ghabuse/error.hpp"

namespace ghabuse {

const Evidence* DetectionVerdict::find(std::string_view clause) const {
    for (const auto& e : evidence)
        if (e.clause == clause) return &e;
    return nullptr;
}

std::string to_json_line(const DetectionVerdict& v) {
    nlohmann::ordered_json j;
    j["detector"] = to_string(v.detector);
    j["subject"] = v.subject;
    j["flagged"] = v.flagged;
    j["indeterminate"] = v.indeterminate;
    j["evidence"] = nlohmann::ordered_json::array();
    for (const auto& e : v.evidence) {
        nlohmann::ordered_json ej;
        ej["clause"] = e.clause;
        ej["observed"] = e.observed;
        ej["threshold"] = e.threshold;
        ej["holds"] = e.holds;
        j["evidence"].push_back(std::move(ej));
    }
    return j.dump();
}

DetectionVerdict verdict_from_json(const nlohmann::json& j) {
    try {
        DetectionVerdict v;
        v.detector = parse_detector(j.at("detector").get<std::string>());
        v.subject = j.at("subject").get<std::string>();
        v.flagged = j.at("flagged").get<bool>();
        v.indeterminate = j.at("indeterminate").get<bool>();
        for (const auto& ej : j.at("evidence"))
            v.add(ej.at("clause").get<std::string>(), ej.at("observed"), ej.at("threshold"),
                  ej.at("holds").get<bool>());
        return v;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("verdict: ") + e.what());
    }
}

}  // namespace ghabuse
