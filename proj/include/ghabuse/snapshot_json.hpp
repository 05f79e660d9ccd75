#pragma once

// JSON codec for snapshots and threshold profiles.
//
// A snapshot document carries `schema_version: 1` and `kind: "repo" | "user"`
// at the top level followed by the snapshot fields in declaration order.
// Decoding rejects unknown fields, a wrong schema version, and any value that
// breaks a model invariant. Timestamps are written as integer UTC seconds;
// ISO-8601 strings are also accepted on input.

#include <string>
#include <variant>

#include <json.hpp>

#include "ghabuse/model.hpp"

namespace ghabuse {

inline constexpr int kSnapshotSchemaVersion = 1;

using Snapshot = std::variant<RepoSnapshot, UserSnapshot>;

nlohmann::ordered_json to_json(const RepoSnapshot& repo);
nlohmann::ordered_json to_json(const UserSnapshot& user);
nlohmann::ordered_json to_json(const Snapshot& snapshot);

/// Throws SchemaError (version/kind/unknown field/type) or InvalidInput
/// (invariant violation).
Snapshot snapshot_from_json(const nlohmann::json& j);
RepoSnapshot repo_from_json(const nlohmann::json& j);
UserSnapshot user_from_json(const nlohmann::json& j);

/// Canonical text form: two-space indented, trailing newline.
std::string dump_snapshot(const Snapshot& snapshot);

nlohmann::ordered_json to_json(const ThresholdConfig& cfg);
/// Partial documents are allowed: missing keys keep `base` values. Unknown
/// keys are rejected with SchemaError; out-of-range values with InvalidInput.
ThresholdConfig thresholds_from_json(const nlohmann::json& j, ThresholdConfig base = {});

}  // namespace ghabuse
