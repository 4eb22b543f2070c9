#pragma once


#include <optional>
#include <string>
#include <vector>

#include "backend.hpp"
#include "baselines.hpp"
#include "dataset.hpp"
#include "metrics.hpp"
#include "pipeline.hpp"

namespace privar {

// Which box source protects the frames before assessment.
enum class ProtectionMode { privar, no_obfuscation, oracle_guided };

ProtectionMode protection_mode_from_string(const std::string& name);
const char* to_string(ProtectionMode mode);

enum class ClassifierKind { privar, rule_based, object_recognition, caption };

ClassifierKind classifier_kind_from_string(const std::string& name);
const char* to_string(ClassifierKind kind);

struct EvalConfig {
    ProtectionMode mode = ProtectionMode::privar;
    ClassifierKind classifier = ClassifierKind::privar;
    int quality = 75;
    ObfuscationParams obfuscation;  // seed is re-derived per frame
    DetectorChoice detector = DetectorChoice::heuristic;
    DetectorConfig detector_config;
    OcrSource ocr_source = OcrSource::transcript;
    // Recorded OCR of the unprotected images (rule-based external source).
    std::optional<std::string> ocr_original_path;
    // Recorded OCR of the protected images for this mode (CER hypotheses).
    std::optional<std::string> ocr_protected_path;
    std::optional<std::string> detections_path;          // recorded object detections
    std::optional<std::string> external_detection_path;  // replayed text detector
    double confidence_threshold = 0.5;
    std::vector<PatternRule> rules;  // empty = default_rules()
    bool leakage_extraction = true;  // effective only with a mock backend
    int workers = 1;
};

struct EvalRow {
    std::string id;
    bool label_sensitive = false;
    bool predicted = false;
    bool ok = false;
    std::string error;
    std::string scene;
    std::size_t n_boxes = 0;
    double mask_fraction = 0.0;
    std::optional<double> cer_value;  // ratio, unclamped
    std::optional<bool> leaked;
};

struct EvalReport {
    ProtectionMode mode = ProtectionMode::privar;
    ClassifierKind classifier = ClassifierKind::privar;
    std::string backend_id;
    std::vector<EvalRow> rows;  // ordered by item id
    ConfusionCounts counts;     // over rows with ok == true
    ClassificationMetrics metrics;
    std::optional<MeanStd> cer;  // aggregated as mean +- sample std-dev, in percent
    std::optional<double> plr_pct;
    std::size_t failures = 0;
};

// Runs the configured classifier over every manifest item. Per-item failures
// are recorded in the report and never abort the run. Deterministic for mock
// backends regardless of the worker count: rows are reduced in item-id order.
EvalReport run_evaluation(const DatasetManifest& manifest, const EvalConfig& config,
                          VlmBackend* vlm_backend, VlmBackend* llm_backend);

std::string report_csv(const EvalReport& report);
std::string report_markdown(const EvalReport& report);

// Writes report.csv and report.md under out_dir (created if needed).
void write_report(const EvalReport& report, const std::string& out_dir);

}  // namespace privar
