#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ghabuse/model.hpp"

namespace ghabuse {

/// One clause of a predicate as it was evaluated.
struct Evidence {
    std::string clause;
    nlohmann::json observed;
    nlohmann::json threshold;
    bool holds = false;

    friend bool operator==(const Evidence&, const Evidence&) = default;
};

struct DetectionVerdict {
    Detector detector = Detector::fake_stars;
    std::string subject;
    bool flagged = false;
    /// The subject could not be judged yet (e.g. observation window still open).
    bool indeterminate = false;
    std::vector<Evidence> evidence;

    void add(std::string clause, nlohmann::json observed, nlohmann::json threshold, bool holds) {
        evidence.push_back({std::move(clause), std::move(observed), std::move(threshold), holds});
    }

    /// First evidence entry with the given clause name, or nullptr.
    const Evidence* find(std::string_view clause) const;

    friend bool operator==(const DetectionVerdict&, const DetectionVerdict&) = default;
};

/// Single-line JSON with fixed key order:
/// detector, subject, flagged, indeterminate, evidence[clause, observed, threshold, holds].
std::string to_json_line(const DetectionVerdict& v);
DetectionVerdict verdict_from_json(const nlohmann::json& j);

}  // namespace ghabuse
