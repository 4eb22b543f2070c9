#pragma once

#include <optional>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "backend.hpp"
#include "dataset.hpp"
#include "image.hpp"

namespace privar {

// One structured-information pattern; validator names an optional checksum
// ("luhn" is the only one shipped).
struct PatternRule {
    std::string name;
    std::string pattern;
    std::optional<std::string> validator;
    std::regex compiled;
};

// Shipped set: credit-card (13-19 digit groups, Luhn-checked), phone-number
// (7-15 digits with separators), id-number (labeled prefixes and
// ddd-dd-dddd).
std::vector<PatternRule> default_rules();

// Rule file: UTF-8 JSON array of {name, pattern, validator?}.
std::vector<PatternRule> load_rules(const std::string& path);
std::vector<PatternRule> rules_from_json_text(const std::string& text,
                                              const std::string& origin);

bool luhn_valid(const std::string& digits);

struct RuleMatch {
    std::string rule_name;
    std::string span;
};

// risk = true iff at least one rule matches; image-independent by
// construction (depends only on the text).
std::pair<bool, std::vector<RuleMatch>> rule_based_classify(
    const std::string& extracted_text, const std::vector<PatternRule>& rules);

enum class OcrSource { transcript, external_file };

// Concatenated region text in reading order. transcript reads the manifest's
// ground-truth string; external_file reads the recorded OCR sidecar.
// A missing source raises MissingError naming the item.
std::string extract_text(const DatasetItem& item, OcrSource source,
                         const OcrSidecar* sidecar = nullptr);

// true iff any recorded detection is a sensitive class at or above the
// confidence threshold.
bool object_recognition_classify(const std::vector<RecordedDetection>& detections,
                                 const std::set<std::string>& sensitive_classes,
                                 double confidence_threshold);

const std::set<std::string>& default_sensitive_classes();

// Caption the obfuscated frame with the VLM, then classify the caption text
// alone with the text-only backend; returns the parsed verdict.
bool caption_then_classify(const Image& obfuscated_image, VlmBackend& vlm_backend,
                           VlmBackend& llm_backend);

}  // namespace privar
