#include "ghabuse/ingest/store.hpp"

#include <fstream>
#include <sstream>

#include "ghabuse/error.hpp"

namespace ghabuse::ingest {

void store_snapshot(const std::filesystem::path& path, const Snapshot& snapshot) {
    const auto text = dump_snapshot(snapshot);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write snapshot to " + path.string());
    out << text;
    if (!out) throw InvalidInput("failed writing snapshot to " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFound("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Snapshot load_snapshot(const std::filesystem::path& path) {
    const auto text = read_text_file(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
    try {
        return snapshot_from_json(j);
    } catch (const SchemaError& e) {
        throw SchemaError(path.string() + ": " + e.what());
    } catch (const InvalidInput& e) {
        throw InvalidInput(path.string() + ": " + e.what());
    }
}

}  // namespace ghabuse::ingest
