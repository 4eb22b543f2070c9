#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace privar {

struct ConfusionCounts {
    long long tp = 0;
    long long fp = 0;
    long long tn = 0;
    long long fn = 0;

    long long total() const { return tp + fp + tn + fn; }

    bool operator==(const ConfusionCounts&) const = default;
};

// Binary confusion with "sensitive" as the positive class. Prediction ids
// must exactly cover the label ids; a mismatch raises MissingError listing
// the offending ids.
ConfusionCounts confusion(const std::vector<std::pair<std::string, bool>>& predictions,
                          const std::unordered_map<std::string, bool>& labels);

// All four values are percentages in [0,100]. When tp+fp == 0 precision is
// defined as 0 and flagged; when P+R == 0 the F1 is defined as 0 and flagged.
struct ClassificationMetrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool precision_degenerate = false;
    bool f1_degenerate = false;
};

ClassificationMetrics classification_metrics(const ConfusionCounts& counts);

// F1 from precision/recall given as percentages.
double f1_from_precision_recall(double precision_pct, double recall_pct);

// Minimal insert/delete/substitute count with unit costs, over Unicode
// scalar values (inputs are UTF-8).
std::size_t levenshtein(const std::string& a, const std::string& b);

// Character error rate: levenshtein(reference, hypothesis) / |reference|,
// unclamped. The reference must be non-empty.
double cer(const std::string& reference, const std::string& hypothesis);

struct MeanStd {
    double mean = 0.0;
    double stddev = 0.0;  // sample std-dev (n-1); 0 when n < 2
    std::size_t count = 0;
};

MeanStd mean_and_sample_stddev(const std::vector<double>& values);

// One original/obfuscated extraction pair. Item strings are normalized
// (ASCII case-fold, whitespace collapse) at construction.
struct LeakagePair {
    std::string item_id;
    std::vector<std::string> items_from_original;
    std::vector<std::string> items_from_obfuscated;

    static LeakagePair make(std::string item_id, const std::vector<std::string>& original,
                            const std::vector<std::string>& obfuscated);

    bool leaked() const;  // true iff the normalized lists intersect
};

std::string normalize_leak_item(const std::string& text);

// Percentage of pairs whose normalized item lists share at least one exact
// entry. The pair list must be non-empty.
double plr(const std::vector<LeakagePair>& pairs);

// Decodes UTF-8 into Unicode scalar values; invalid bytes decode as U+FFFD.
std::vector<std::uint32_t> utf8_decode(const std::string& text);

}  // namespace privar
