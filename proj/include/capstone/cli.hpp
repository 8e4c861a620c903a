#pragma once

#include <string>
#include <vector>

#include "capstone/json_io.hpp"
#include "capstone/types.hpp"

namespace capstone::cli {

using json_io::Json;

inline constexpr const char* kVersion = "capstone 0.1.0";

enum ExitCode : int {
    kOk = 0,
    kOtherError = 1,
    kConfigError = 2,
    kNonConvergence = 3,
    kInconclusive = 4,
};

/// Bad job file: malformed JSON, unknown command, missing or extra fields.
class ConfigError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// A command and its parameters with every default filled in.
struct JobConfig {
    std::string command;
    Json params = Json::object();

    /// {"command": ..., params...}
    Json echo() const;
};

std::vector<std::string> commands();

JobConfig parse_config(const std::string& text);

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Json>> rows;
};

struct Report {
    JobConfig config;
    Json results = Json::object();
    Json diagnostics = Json::object();
    std::vector<Table> tables;
    std::string version = kVersion;
    int exit_code = kOk;  // kInconclusive when the answer is not decided

    /// config, results and version; diagnostics (timings) left out.
    Json payload() const;
};

/// Dispatches to the library. Module errors come back with the command name prefixed.
Report run(const JobConfig& config);

enum class Format { json, csv_tables };

Format parse_format(const std::string& name);

/// json: the full report. csv-tables: a summary table of scalar results
/// followed by each data table, separated by "# table: <name>" lines.
std::string emit(const Report& report, Format format);

/// Exit code for an exception escaping parse_config or run.
int exit_code_for(const std::exception& e);

}  // namespace capstone::cli
