#ifndef CCDARP_INSTANCE_IO_HPP
#define CCDARP_INSTANCE_IO_HPP

#include <filesystem>
#include <string>

#include <json.hpp>

#include "ccdarp/instance.hpp"

namespace ccdarp {

// Canonical interchange document: keys meta, fleet, nodes, requests, travel_time, travel_cost.
nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& doc);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// Loads canonical JSON (.json) or benchmark text (anything else).
// Trip CSVs need a travel-time table and go through ingest_trips instead.
Instance load_instance(const std::filesystem::path& path, const CordeauOptions& options = {});

// Writes an instance in the benchmark text layout (Euclidean instances only).
std::string to_cordeau_text(const Instance& inst);

}  // namespace ccdarp

#endif  // CCDARP_INSTANCE_IO_HPP
