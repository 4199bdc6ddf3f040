#ifndef CCECR_CORE_TOPOLOGY_IO_HPP
#define CCECR_CORE_TOPOLOGY_IO_HPP

#include <string>

#include "core/domain.hpp"

namespace ccecr {

// JSON (de)serialization for topology and configuration files. Serialization
// is deterministic: fixed key order, arrays in input order, no float noise
// (doubles are emitted via the shortest round-trip form the writer produces).
// Every file carries "schema_version": 1.

Topology topology_from_json(const std::string& text);
std::string topology_to_json(const Topology& t);

Topology load_topology(const std::string& path);
void save_topology(const Topology& t, const std::string& path);

FleetConfiguration configuration_from_json(const std::string& text);
std::string configuration_to_json(const FleetConfiguration& p);

FleetConfiguration load_configuration(const std::string& path);
void save_configuration(const FleetConfiguration& p, const std::string& path);

// Stable content hash over the serialized form, for run provenance lines.
std::uint64_t topology_fingerprint(const Topology& t);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace ccecr

#endif  // CCECR_CORE_TOPOLOGY_IO_HPP
