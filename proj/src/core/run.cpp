#include "run.hpp"

#include <algorithm>
#include <filesystem>
#include <memory>

#include "codec.hpp"
#include "csv.hpp"
#include "errors.hpp"

namespace privar {

std::vector<std::string> list_frame_files(const std::string& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw IoError("input directory " + dir + " does not exist");
    }
    std::vector<std::string> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") {
            files.push_back(entry.path().string());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

RunResult run_directory(const RunConfig& config) {
    const std::vector<std::string> files = list_frame_files(config.input_dir);
    if (files.empty()) {
        throw IoError("no frames (*.png, *.jpg, *.jpeg) in " + config.input_dir);
    }

    // Inputs that must outlive the in-process services.
    std::optional<DatasetManifest> manifest;
    if (!config.manifest_path.empty()) manifest = load_manifest(config.manifest_path);
    std::optional<DetectionSidecar> external;
    if (!config.external_path.empty()) external = DetectionSidecar::load(config.external_path);

    std::unique_ptr<VlmBackend> backend;
    std::unique_ptr<CloudCore> cloud_core;
    std::unique_ptr<HttpServer> cloud_server;
    std::unique_ptr<CloudClient> cloud_client;
    std::unique_ptr<EdgeCore> edge_core;
    std::unique_ptr<HttpServer> edge_server;

    std::string edge_url = config.edge_url;
    if (edge_url.empty()) {
        std::string cloud_url = config.cloud_url;
        if (cloud_url.empty()) {
            if (config.backend == "mock") {
                if (config.scenarios_path.empty()) {
                    throw InvalidArgumentError("mock backend needs --scenarios");
                }
                backend =
                    std::make_unique<MockVlmBackend>(ScenarioTable::load(config.scenarios_path));
            } else if (config.backend == "remote") {
                backend = std::make_unique<RemoteVlmBackend>(remote_config_from_env());
            } else {
                throw InvalidArgumentError("unknown backend \"" + config.backend +
                                           "\" (expected mock or remote)");
            }
            cloud_core = std::make_unique<CloudCore>(*backend);
            cloud_server =
                HttpServer::serve_cloud(*cloud_core, "127.0.0.1", 0, config.concurrency);
            cloud_url = cloud_server->base_url();
        }

        EdgeParams params;
        params.detector = config.detector;
        params.detector_config = config.detector_config;
        params.obfuscation = config.obfuscation;
        params.quality = config.quality;
        params.annotations = manifest ? &*manifest : nullptr;
        params.external = external ? &*external : nullptr;
        cloud_client = std::make_unique<HttpCloudClient>(cloud_url, 30);
        edge_core = std::make_unique<EdgeCore>(params, *cloud_client);
        edge_server = HttpServer::serve_edge(*edge_core, "127.0.0.1", 0, config.concurrency);
        edge_url = edge_server->base_url();
    }

    RunResult result;
    for (const std::string& file : files) {
        RunRow row;
        row.frame_id = frame_id_from_path(file);
        try {
            const AssessResponse response = device_submit(file, edge_url, config.quality);
            row.assessment = response.assessment;
            row.ok = true;
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
            ++result.failures;
        }
        result.rows.push_back(std::move(row));
    }
    std::sort(result.rows.begin(), result.rows.end(),
              [](const RunRow& a, const RunRow& b) { return a.frame_id < b.frame_id; });

    if (!config.out_dir.empty()) {
        std::filesystem::create_directories(config.out_dir);
        write_file(join_path(config.out_dir, "run_report.csv"), run_report_csv(result));
        write_file(join_path(config.out_dir, "run_report.md"), run_report_markdown(result));
    }
    return result;
}

std::string run_report_csv(const RunResult& result) {
    std::string out =
        "frame_id,ok,risk,scene_label,topic_inference,risk_rationale,n_regions,backend_id,"
        "error\n";
    for (const RunRow& row : result.rows) {
        const RiskAssessment& a = row.assessment;
        out += csv_join({row.frame_id, row.ok ? "1" : "0",
                         row.ok ? (a.risk ? "1" : "0") : "", a.scene_label,
                         a.topic_inference, a.risk_rationale,
                         std::to_string(a.regions.size()), a.backend_id, row.error});
        out += '\n';
    }
    return out;
}

std::string run_report_markdown(const RunResult& result) {
    std::size_t risky = 0;
    std::size_t assessed = 0;
    for (const RunRow& row : result.rows) {
        if (!row.ok) continue;
        ++assessed;
        if (row.assessment.risk) ++risky;
    }
    std::string out = "# Run report\n\n";
    out += "- frames: " + std::to_string(result.rows.size()) + "\n";
    out += "- assessed: " + std::to_string(assessed) + "\n";
    out += "- flagged as privacy risk: " + std::to_string(risky) + "\n";
    out += "- failures: " + std::to_string(result.failures) + "\n\n";
    out += "| frame | risk | scene | topic |\n|---|---|---|---|\n";
    for (const RunRow& row : result.rows) {
        if (!row.ok) {
            out += "| " + row.frame_id + " | error | | |\n";
            continue;
        }
        const RiskAssessment& a = row.assessment;
        out += "| " + row.frame_id + " | " + (a.risk ? "YES" : "NO") + " | " + a.scene_label +
               " | " + a.topic_inference + " |\n";
    }
    return out;
}

}  // namespace privar
