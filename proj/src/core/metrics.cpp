#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "errors.hpp"

namespace privar {

ConfusionCounts confusion(const std::vector<std::pair<std::string, bool>>& predictions,
                          const std::unordered_map<std::string, bool>& labels) {
    std::set<std::string> missing_predictions;
    for (const auto& [id, label] : labels) missing_predictions.insert(id);

    ConfusionCounts counts;
    std::set<std::string> seen;
    std::string unknown;
    std::string duplicated;
    for (const auto& [id, predicted] : predictions) {
        if (!seen.insert(id).second) {
            duplicated += duplicated.empty() ? id : ", " + id;
            continue;
        }
        auto it = labels.find(id);
        if (it == labels.end()) {
            unknown += unknown.empty() ? id : ", " + id;
            continue;
        }
        missing_predictions.erase(id);
        const bool actual = it->second;
        if (predicted && actual) ++counts.tp;
        else if (predicted && !actual) ++counts.fp;
        else if (!predicted && !actual) ++counts.tn;
        else ++counts.fn;
    }

    if (!duplicated.empty()) {
        throw MissingError("duplicate prediction ids: " + duplicated);
    }
    if (!unknown.empty() || !missing_predictions.empty()) {
        std::string msg = "prediction ids do not cover label ids";
        if (!missing_predictions.empty()) {
            msg += "; missing predictions for: ";
            bool first = true;
            for (const std::string& id : missing_predictions) {
                if (!first) msg += ", ";
                msg += id;
                first = false;
            }
        }
        if (!unknown.empty()) msg += "; predictions without labels: " + unknown;
        throw MissingError(msg);
    }
    return counts;
}

ClassificationMetrics classification_metrics(const ConfusionCounts& c) {
    const long long total = c.total();
    if (total <= 0) throw InvalidArgumentError("empty evaluation: no items counted");
    if (c.tp < 0 || c.fp < 0 || c.tn < 0 || c.fn < 0) {
        throw InvalidArgumentError("confusion counts must be non-negative");
    }

    ClassificationMetrics m;
    m.accuracy = 100.0 * static_cast<double>(c.tp + c.tn) / static_cast<double>(total);
    if (c.tp + c.fp > 0) {
        m.precision = 100.0 * static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    } else {
        m.precision = 0.0;
        m.precision_degenerate = true;
    }
    m.recall = c.tp + c.fn > 0
                   ? 100.0 * static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn)
                   : 0.0;
    if (m.precision + m.recall > 0.0) {
        m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    } else {
        m.f1 = 0.0;
        m.f1_degenerate = true;
    }
    return m;
}

double f1_from_precision_recall(double precision_pct, double recall_pct) {
    if (precision_pct + recall_pct <= 0.0) return 0.0;
    return 2.0 * precision_pct * recall_pct / (precision_pct + recall_pct);
}

std::vector<std::uint32_t> utf8_decode(const std::string& text) {
    std::vector<std::uint32_t> out;
    out.reserve(text.size());
    std::size_t i = 0;
    const auto bad = [&]() { out.push_back(0xFFFDu); };
    while (i < text.size()) {
        const std::uint8_t b0 = static_cast<std::uint8_t>(text[i]);
        if (b0 < 0x80) {
            out.push_back(b0);
            ++i;
            continue;
        }
        int extra = 0;
        std::uint32_t cp = 0;
        if ((b0 & 0xE0) == 0xC0) {
            extra = 1;
            cp = b0 & 0x1Fu;
        } else if ((b0 & 0xF0) == 0xE0) {
            extra = 2;
            cp = b0 & 0x0Fu;
        } else if ((b0 & 0xF8) == 0xF0) {
            extra = 3;
            cp = b0 & 0x07u;
        } else {
            bad();
            ++i;
            continue;
        }
        if (i + extra >= text.size()) {
            bad();
            ++i;
            continue;
        }
        bool ok = true;
        for (int k = 1; k <= extra; ++k) {
            const std::uint8_t b = static_cast<std::uint8_t>(text[i + k]);
            if ((b & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (b & 0x3Fu);
        }
        if (!ok) {
            bad();
            ++i;
            continue;
        }
        out.push_back(cp);
        i += static_cast<std::size_t>(extra) + 1;
    }
    return out;
}

std::size_t levenshtein(const std::string& a, const std::string& b) {
    const std::vector<std::uint32_t> s = utf8_decode(a);
    const std::vector<std::uint32_t> t = utf8_decode(b);
    const std::size_t n = s.size();
    const std::size_t m = t.size();
    if (n == 0) return m;
    if (m == 0) return n;

    std::vector<std::size_t> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t sub = prev[j - 1] + (s[i - 1] == t[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

double cer(const std::string& reference, const std::string& hypothesis) {
    const std::size_t ref_len = utf8_decode(reference).size();
    if (ref_len == 0) {
        throw InvalidArgumentError("cer reference must be non-empty");
    }
    return static_cast<double>(levenshtein(reference, hypothesis)) /
           static_cast<double>(ref_len);
}

MeanStd mean_and_sample_stddev(const std::vector<double>& values) {
    MeanStd out;
    out.count = values.size();
    if (values.empty()) return out;
    double sum = 0.0;
    for (double v : values) sum += v;
    out.mean = sum / static_cast<double>(values.size());
    if (values.size() >= 2) {
        double sq = 0.0;
        for (double v : values) sq += (v - out.mean) * (v - out.mean);
        out.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    return out;
}

std::string normalize_leak_item(const std::string& text) {
    std::string out;
    bool pending_space = false;
    for (char c : text) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
            if (!out.empty()) pending_space = true;
            continue;
        }
        if (pending_space) {
            out += ' ';
            pending_space = false;
        }
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

LeakagePair LeakagePair::make(std::string item_id, const std::vector<std::string>& original,
                              const std::vector<std::string>& obfuscated) {
    LeakagePair pair;
    pair.item_id = std::move(item_id);
    for (const std::string& s : original) {
        const std::string n = normalize_leak_item(s);
        if (!n.empty()) pair.items_from_original.push_back(n);
    }
    for (const std::string& s : obfuscated) {
        const std::string n = normalize_leak_item(s);
        if (!n.empty()) pair.items_from_obfuscated.push_back(n);
    }
    return pair;
}

bool LeakagePair::leaked() const {
    for (const std::string& a : items_from_original) {
        for (const std::string& b : items_from_obfuscated) {
            if (a == b) return true;
        }
    }
    return false;
}

double plr(const std::vector<LeakagePair>& pairs) {
    if (pairs.empty()) throw InvalidArgumentError("empty evaluation: no leakage pairs");
    std::size_t leaked = 0;
    for (const LeakagePair& pair : pairs) {
        if (pair.leaked()) ++leaked;
    }
    return 100.0 * static_cast<double>(leaked) / static_cast<double>(pairs.size());
}

}  // namespace privar
