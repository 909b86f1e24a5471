#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "mqdc/harness/config.hpp"
#include "mqdc/harness/experiment.hpp"
#include "mqdc/protocol/messages.hpp"

namespace mqdc::harness {

inline constexpr const char* kReportSchemaVersion = "1";
inline constexpr const char* kToolVersion = "1.0.0";
/// Overrides the directory that relative output paths resolve against.
inline constexpr const char* kOutputDirEnv = "MQDC_OUTPUT_DIR";

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal string that parses back to exactly `value`.
std::string format_rate(double value);

nlohmann::ordered_json transcript_to_json(const protocol::Transcript& transcript);
/// Inverse of transcript_to_json. Throws std::invalid_argument on malformed input.
protocol::Transcript transcript_from_json(const nlohmann::json& messages);

/// Report document. Holds no wall-clock data, so equal inputs give equal bytes.
nlohmann::ordered_json report_to_json(const ExperimentResult& result, const ExperimentSpec& spec);

/// Relative paths resolve against $MQDC_OUTPUT_DIR when it is set.
std::filesystem::path resolve_output_path(const std::string& path);

/// Writes report_to_json(...) to `path`. Throws IoError.
void emit_report(const ExperimentResult& result, const ExperimentSpec& spec,
                 const std::filesystem::path& path);

}  // namespace mqdc::harness
