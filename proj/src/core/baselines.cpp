#include "baselines.hpp"

#include <nlohmann/json.hpp>

#include "codec.hpp"
#include "errors.hpp"
#include "prompts.hpp"

namespace privar {

namespace {

using nlohmann::json;

PatternRule make_rule(std::string name, std::string pattern,
                      std::optional<std::string> validator) {
    PatternRule rule;
    rule.name = std::move(name);
    rule.pattern = std::move(pattern);
    rule.validator = std::move(validator);
    try {
        rule.compiled = std::regex(rule.pattern);
    } catch (const std::regex_error& e) {
        throw ParseError("rule \"" + rule.name + "\" has an invalid pattern: " + e.what(),
                         rule.pattern);
    }
    return rule;
}

std::string digits_only(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c >= '0' && c <= '9') out += c;
    }
    return out;
}

bool validator_passes(const PatternRule& rule, const std::string& span) {
    if (!rule.validator) return true;
    if (*rule.validator == "luhn") return luhn_valid(digits_only(span));
    throw InvalidArgumentError("rule \"" + rule.name + "\" names unknown validator \"" +
                               *rule.validator + "\"");
}

}  // namespace

std::vector<PatternRule> default_rules() {
    std::vector<PatternRule> rules;
    // Digit groups, optionally separated, totaling 13-19 digits; Luhn gate.
    rules.push_back(make_rule("credit-card", R"((?:\d[ \-]?){12,18}\d)", "luhn"));
    // 7-15 digits with common phone separators, optional leading +.
    rules.push_back(make_rule("phone-number", R"(\+?(?:[()\-. ]{0,2}\d){7,15})", std::nullopt));
    // Labeled prefixes and the classic ddd-dd-dddd shape.
    rules.push_back(make_rule(
        "id-number", R"((?:\b(?:ID|SSN)\s*[:#]\s*[A-Za-z0-9\-]+)|(?:\d{3}-\d{2}-\d{4}))",
        std::nullopt));
    return rules;
}

std::vector<PatternRule> load_rules(const std::string& path) {
    const auto bytes = read_file(path);
    return rules_from_json_text(std::string(bytes.begin(), bytes.end()), path);
}

std::vector<PatternRule> rules_from_json_text(const std::string& text,
                                              const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("rule file " + origin + " is not valid JSON: " + e.what(), "");
    }
    std::vector<PatternRule> rules;
    std::set<std::string> names;
    try {
        for (const json& j : doc) {
            std::optional<std::string> validator;
            if (j.contains("validator") && !j.at("validator").is_null()) {
                validator = j.at("validator").get<std::string>();
            }
            PatternRule rule = make_rule(j.at("name").get<std::string>(),
                                         j.at("pattern").get<std::string>(), validator);
            if (!names.insert(rule.name).second) {
                throw ParseError("rule file " + origin + " has duplicate rule name \"" +
                                     rule.name + "\"",
                                 rule.name);
            }
            rules.push_back(std::move(rule));
        }
    } catch (const json::exception& e) {
        throw ParseError("rule file " + origin + " has invalid structure: " + e.what(), "");
    }
    return rules;
}

bool luhn_valid(const std::string& digits) {
    if (digits.size() < 2) return false;
    int sum = 0;
    bool double_it = false;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        if (*it < '0' || *it > '9') return false;
        int d = *it - '0';
        if (double_it) {
            d *= 2;
            if (d > 9) d -= 9;
        }
        sum += d;
        double_it = !double_it;
    }
    return sum % 10 == 0;
}

std::pair<bool, std::vector<RuleMatch>> rule_based_classify(
    const std::string& extracted_text, const std::vector<PatternRule>& rules) {
    std::vector<RuleMatch> matches;
    for (const PatternRule& rule : rules) {
        auto begin = std::sregex_iterator(extracted_text.begin(), extracted_text.end(),
                                          rule.compiled);
        for (auto it = begin; it != std::sregex_iterator(); ++it) {
            const std::string span = it->str();
            if (!validator_passes(rule, span)) continue;
            matches.push_back(RuleMatch{rule.name, span});
        }
    }
    return {!matches.empty(), matches};
}

std::string extract_text(const DatasetItem& item, OcrSource source, const OcrSidecar* sidecar) {
    if (source == OcrSource::transcript) {
        if (!item.transcript) {
            throw MissingError("item " + item.id + " has no transcript");
        }
        return *item.transcript;
    }
    if (sidecar == nullptr) {
        throw MissingError("item " + item.id + ": no OCR sidecar configured");
    }
    if (!sidecar->has_frame(item.id)) {
        throw MissingError("item " + item.id + ": OCR sidecar " + sidecar->origin() +
                           " has no rows for it");
    }
    return sidecar->text_for(item.id);
}

bool object_recognition_classify(const std::vector<RecordedDetection>& detections,
                                 const std::set<std::string>& sensitive_classes,
                                 double confidence_threshold) {
    if (confidence_threshold < 0.0 || confidence_threshold > 1.0) {
        throw InvalidArgumentError("confidence threshold must be in [0,1], got " +
                                   std::to_string(confidence_threshold));
    }
    for (const RecordedDetection& det : detections) {
        if (det.confidence >= confidence_threshold &&
            sensitive_classes.count(det.class_label) > 0) {
            return true;
        }
    }
    return false;
}

const std::set<std::string>& default_sensitive_classes() {
    static const std::set<std::string> classes = {"laptop",        "id-card",
                                                  "credit-card",   "document",
                                                  "phone-screen",  "monitor",
                                                  "medical-chart", "whiteboard"};
    return classes;
}

bool caption_then_classify(const Image& obfuscated_image, VlmBackend& vlm_backend,
                           VlmBackend& llm_backend) {
    require_valid(obfuscated_image);
    const std::string caption = vlm_backend.complete(
        VlmRequest{build_caption_prompt(), encode_png(obfuscated_image)});
    const std::string verdict =
        llm_backend.complete(VlmRequest{build_caption_classify_prompt(caption), std::nullopt});
    return parse_verdict(verdict).first;
}

}  // namespace privar
