#pragma once

#include <filesystem>
#include <string>

#include "vzeno/bloch.hpp"
#include "vzeno/ideal.hpp"
#include "vzeno/jump.hpp"
#include "vzeno/periods.hpp"

#include <json.hpp>

namespace vzeno::io {

using json = nlohmann::ordered_json;

// Doubles are written with 17 significant digits so every file re-reads to
// the identical bit pattern.
std::string format_double(double v);

std::string record_to_csv(const EmissionRecord& record);
EmissionRecord record_from_csv(const std::string& text);

json record_metadata(const EmissionRecord& record);
void record_metadata_into(const EmissionRecord& record, json& j);
EmissionRecord record_metadata_from(const json& j);

std::string outcomes_to_csv(const ideal::OutcomeSequence& seq);
ideal::OutcomeSequence outcomes_from_csv(const std::string& text);

std::string periods_to_csv(std::span<const periods::PeriodSample> samples);
std::vector<periods::PeriodSample> periods_from_csv(const std::string& text);

std::string master_trajectory_to_csv(std::span<const bloch::MasterState> samples);

json period_report_to_json(const periods::PeriodReport& report);
json validity_report_to_json(const ValidityReport& report);

void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace vzeno::io
