#pragma once

#include <filesystem>

#include "ghabuse/snapshot_json.hpp"

namespace ghabuse::ingest {

/// Writes the canonical snapshot text. Throws InvalidInput when the file
/// cannot be written.
void store_snapshot(const std::filesystem::path& path, const Snapshot& snapshot);

/// Throws NotFound for a missing file, SchemaError for malformed JSON or a
/// schema mismatch, InvalidInput for invariant violations.
Snapshot load_snapshot(const std::filesystem::path& path);

/// Whole file as a string; throws NotFound.
std::string read_text_file(const std::filesystem::path& path);

}  // namespace ghabuse::ingest
