#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pipeline.hpp"
#include "services.hpp"

namespace privar {

// End-to-end pass over a directory of frames. When edge_url is empty the
// run spins up in-process edge and cloud services on loopback ports, so a
// fresh pair of services backs every invocation.
struct RunConfig {
    std::string input_dir;
    std::string out_dir;
    std::string edge_url;   // non-empty: submit to an already running edge
    std::string cloud_url;  // non-empty: in-process edge calls this cloud
    DetectorChoice detector = DetectorChoice::heuristic;
    DetectorConfig detector_config;
    ObfuscationParams obfuscation;
    int quality = 75;
    std::string backend = "mock";  // mock | remote
    std::string scenarios_path;    // required for the mock backend
    std::string manifest_path;     // required for the annotation detector
    std::string external_path;     // required for the external detector
    int concurrency = 8;
};

struct RunRow {
    std::string frame_id;
    bool ok = false;
    std::string error;
    RiskAssessment assessment;
};

struct RunResult {
    std::vector<RunRow> rows;  // ordered by frame_id
    std::size_t failures = 0;
};

// Writes run_report.csv and run_report.md under out_dir. Deterministic for
// mock backends: report content carries no timestamps or latencies.
RunResult run_directory(const RunConfig& config);

std::string run_report_csv(const RunResult& result);
std::string run_report_markdown(const RunResult& result);

std::vector<std::string> list_frame_files(const std::string& dir);

}  // namespace privar
