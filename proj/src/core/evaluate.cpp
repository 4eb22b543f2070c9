#include "evaluate.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <thread>

#include "codec.hpp"
#include "csv.hpp"
#include "errors.hpp"
#include "risk.hpp"

namespace privar {

ProtectionMode protection_mode_from_string(const std::string& name) {
    if (name == "privar") return ProtectionMode::privar;
    if (name == "no-obfuscation") return ProtectionMode::no_obfuscation;
    if (name == "oracle-guided") return ProtectionMode::oracle_guided;
    throw InvalidArgumentError("unknown protection mode \"" + name +
                               "\" (expected privar, no-obfuscation or oracle-guided)");
}

const char* to_string(ProtectionMode mode) {
    switch (mode) {
        case ProtectionMode::privar: return "privar";
        case ProtectionMode::no_obfuscation: return "no-obfuscation";
        case ProtectionMode::oracle_guided: return "oracle-guided";
    }
    return "privar";
}

ClassifierKind classifier_kind_from_string(const std::string& name) {
    if (name == "privar") return ClassifierKind::privar;
    if (name == "rule-based") return ClassifierKind::rule_based;
    if (name == "object-recognition") return ClassifierKind::object_recognition;
    if (name == "caption") return ClassifierKind::caption;
    throw InvalidArgumentError(
        "unknown classifier \"" + name +
        "\" (expected privar, rule-based, object-recognition or caption)");
}

const char* to_string(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::privar: return "privar";
        case ClassifierKind::rule_based: return "rule-based";
        case ClassifierKind::object_recognition: return "object-recognition";
        case ClassifierKind::caption: return "caption";
    }
    return "privar";
}

namespace {

std::string fmt(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

struct ItemContext {
    const DatasetItem* item = nullptr;
    const EvalConfig* config = nullptr;
    const DatasetManifest* manifest = nullptr;
    const OcrSidecar* ocr_original = nullptr;
    const OcrSidecar* ocr_protected = nullptr;
    const RecordedDetectionSidecar* detections = nullptr;
    const DetectionSidecar* external = nullptr;
    const std::vector<PatternRule>* rules = nullptr;
    VlmBackend* vlm = nullptr;
    VlmBackend* llm = nullptr;
    MockVlmBackend* mock = nullptr;
};

EvalRow evaluate_item(const ItemContext& ctx, std::vector<LeakagePair>& pairs_out) {
    const DatasetItem& item = *ctx.item;
    const EvalConfig& config = *ctx.config;
    EvalRow row;
    row.id = item.id;
    row.label_sensitive = item.sensitive;
    row.scene = item.scene;

    const Image raw = load_image(join_path(ctx.manifest->base_dir, item.image_path));
    if (!item.fingerprint.empty() &&
        parse_fingerprint_hex(item.fingerprint) != fingerprint(raw)) {
        throw InvalidArgumentError("item " + item.id +
                                   ": image content does not match manifest fingerprint");
    }

    // Device hop, then the shared edge chain for the selected mode.
    const Image comp = decompress(compress(raw, config.quality));

    EdgeParams params;
    params.detector_config = config.detector_config;
    params.obfuscation = config.obfuscation;
    params.quality = config.quality;
    params.annotations = ctx.manifest;
    params.external = ctx.external;
    switch (config.mode) {
        case ProtectionMode::privar:
            params.detector = config.detector;
            break;
        case ProtectionMode::oracle_guided:
            params.detector = DetectorChoice::annotation;
            break;
        case ProtectionMode::no_obfuscation:
            params.detector = config.detector;
            params.obfuscation_enabled = false;
            break;
    }

    const EdgeResult edge = edge_process(comp, item.id, params);
    const Image cloud_view = decompress(edge.wire_jpeg);

    row.n_boxes = edge.boxes.boxes.size();
    const BinaryMask mask =
        build_mask(edge.boxes.boxes, comp.width, comp.height, config.obfuscation.pad);
    row.mask_fraction = static_cast<double>(mask.popcount()) /
                        (static_cast<double>(comp.width) * comp.height);

    switch (config.classifier) {
        case ClassifierKind::privar: {
            if (ctx.vlm == nullptr) throw InvalidArgumentError("privar classifier needs a VLM backend");
            row.predicted = assess(item.id, cloud_view, edge.boxes.boxes, *ctx.vlm).risk;
            break;
        }
        case ClassifierKind::rule_based: {
            const std::string text = extract_text(item, config.ocr_source, ctx.ocr_original);
            row.predicted = rule_based_classify(text, *ctx.rules).first;
            break;
        }
        case ClassifierKind::object_recognition: {
            if (ctx.detections == nullptr) {
                throw MissingError("item " + item.id +
                                   ": no recorded-detection sidecar configured");
            }
            row.predicted = object_recognition_classify(ctx.detections->detections_for(item.id),
                                                        default_sensitive_classes(),
                                                        config.confidence_threshold);
            break;
        }
        case ClassifierKind::caption: {
            if (ctx.vlm == nullptr || ctx.llm == nullptr) {
                throw InvalidArgumentError("caption classifier needs VLM and LLM backends");
            }
            row.predicted = caption_then_classify(cloud_view, *ctx.vlm, *ctx.llm);
            break;
        }
    }

    if (item.transcript && ctx.ocr_protected != nullptr &&
        ctx.ocr_protected->has_frame(item.id)) {
        row.cer_value = cer(*item.transcript, ctx.ocr_protected->text_for(item.id));
    }

    if (config.leakage_extraction && ctx.mock != nullptr) {
        try {
            const std::vector<std::string> original_items =
                ctx.mock->extract_sensitive_items(comp);
            if (!original_items.empty()) {
                const std::vector<std::string> obfuscated_items =
                    ctx.mock->extract_sensitive_items(cloud_view);
                const LeakagePair pair =
                    LeakagePair::make(item.id, original_items, obfuscated_items);
                row.leaked = pair.leaked();
                pairs_out.push_back(pair);
            }
        } catch (const MissingError&) {
            // No scenario recorded for this variant; leakage stays unmeasured.
        }
    }

    row.ok = true;
    return row;
}

}  // namespace

EvalReport run_evaluation(const DatasetManifest& manifest, const EvalConfig& config,
                          VlmBackend* vlm_backend, VlmBackend* llm_backend) {
    if (manifest.items.empty()) {
        throw InvalidArgumentError("empty evaluation: manifest has no items");
    }

    std::optional<OcrSidecar> ocr_original;
    if (config.ocr_original_path) ocr_original = OcrSidecar::load(*config.ocr_original_path);
    std::optional<OcrSidecar> ocr_protected;
    if (config.ocr_protected_path) ocr_protected = OcrSidecar::load(*config.ocr_protected_path);
    std::optional<RecordedDetectionSidecar> detections;
    if (config.detections_path) {
        detections = RecordedDetectionSidecar::load(*config.detections_path);
    }
    std::optional<DetectionSidecar> external;
    if (config.external_detection_path) {
        external = DetectionSidecar::load(*config.external_detection_path);
    }
    const std::vector<PatternRule> rules =
        config.rules.empty() ? default_rules() : config.rules;

    EvalReport report;
    report.mode = config.mode;
    report.classifier = config.classifier;
    if (vlm_backend != nullptr) report.backend_id = vlm_backend->id();

    const std::size_t n = manifest.items.size();
    report.rows.resize(n);
    std::vector<std::vector<LeakagePair>> pairs_per_item(n);

    std::atomic<std::size_t> next{0};
    const int workers = std::max(1, config.workers);
    auto worker_fn = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            ItemContext ctx;
            ctx.item = &manifest.items[i];
            ctx.config = &config;
            ctx.manifest = &manifest;
            ctx.ocr_original = ocr_original ? &*ocr_original : nullptr;
            ctx.ocr_protected = ocr_protected ? &*ocr_protected : nullptr;
            ctx.detections = detections ? &*detections : nullptr;
            ctx.external = external ? &*external : nullptr;
            ctx.rules = &rules;
            ctx.vlm = vlm_backend;
            ctx.llm = llm_backend;
            ctx.mock = dynamic_cast<MockVlmBackend*>(vlm_backend);
            try {
                report.rows[i] = evaluate_item(ctx, pairs_per_item[i]);
            } catch (const std::exception& e) {
                EvalRow row;
                row.id = manifest.items[i].id;
                row.label_sensitive = manifest.items[i].sensitive;
                row.scene = manifest.items[i].scene;
                row.ok = false;
                row.error = e.what();
                report.rows[i] = std::move(row);
            }
        }
    };

    if (workers == 1) {
        worker_fn();
    } else {
        std::vector<std::thread> threads;
        for (int t = 0; t < workers; ++t) threads.emplace_back(worker_fn);
        for (std::thread& t : threads) t.join();
    }

    // Single deterministic reduction in item-id order (items are sorted).
    std::vector<std::pair<std::string, bool>> predictions;
    std::unordered_map<std::string, bool> labels;
    std::vector<double> cer_values;
    std::vector<LeakagePair> pairs;
    for (std::size_t i = 0; i < n; ++i) {
        const EvalRow& row = report.rows[i];
        if (!row.ok) {
            ++report.failures;
            continue;
        }
        predictions.emplace_back(row.id, row.predicted);
        labels.emplace(row.id, row.label_sensitive);
        if (row.cer_value) cer_values.push_back(*row.cer_value * 100.0);
        for (const LeakagePair& p : pairs_per_item[i]) pairs.push_back(p);
    }
    if (predictions.empty()) {
        throw InvalidArgumentError("empty evaluation: every item failed");
    }
    report.counts = confusion(predictions, labels);
    report.metrics = classification_metrics(report.counts);
    if (!cer_values.empty()) report.cer = mean_and_sample_stddev(cer_values);
    if (!pairs.empty()) report.plr_pct = plr(pairs);
    return report;
}

std::string report_csv(const EvalReport& report) {
    std::string out =
        "id,label,predicted,correct,ok,scene,n_boxes,mask_fraction,cer,leaked,error\n";
    for (const EvalRow& row : report.rows) {
        const std::string label = row.label_sensitive ? "sensitive" : "non-sensitive";
        const std::string predicted = row.ok ? (row.predicted ? "sensitive" : "non-sensitive")
                                             : "";
        const std::string correct =
            row.ok ? (row.predicted == row.label_sensitive ? "1" : "0") : "";
        out += csv_join({row.id, label, predicted, correct, row.ok ? "1" : "0", row.scene,
                         std::to_string(row.n_boxes), fmt(row.mask_fraction, 4),
                         row.cer_value ? fmt(*row.cer_value, 4) : "",
                         row.leaked ? (*row.leaked ? "1" : "0") : "", row.error});
        out += '\n';
    }
    return out;
}

std::string report_markdown(const EvalReport& report) {
    const ClassificationMetrics& m = report.metrics;
    std::string out = "# Evaluation report\n\n";
    out += "- protection mode: " + std::string(to_string(report.mode)) + "\n";
    out += "- classifier: " + std::string(to_string(report.classifier)) + "\n";
    if (!report.backend_id.empty()) out += "- backend: " + report.backend_id + "\n";
    out += "- items: " + std::to_string(report.rows.size()) +
           " (failures: " + std::to_string(report.failures) + ")\n\n";

    out += "## Risk detection\n\n";
    out += "| Classifier | Acc.(%) | Prec.(%) | Rec.(%) | F1(%) |\n";
    out += "|---|---|---|---|---|\n";
    std::string prec = fmt(m.precision, 2);
    if (m.precision_degenerate) prec += " (degenerate)";
    std::string f1 = fmt(m.f1, 2);
    if (m.f1_degenerate) f1 += " (degenerate)";
    out += "| " + std::string(to_string(report.classifier)) + " | " + fmt(m.accuracy, 2) +
           " | " + prec + " | " + fmt(m.recall, 2) + " | " + f1 + " |\n\n";

    out += "| tp | fp | tn | fn |\n|---|---|---|---|\n";
    out += "| " + std::to_string(report.counts.tp) + " | " + std::to_string(report.counts.fp) +
           " | " + std::to_string(report.counts.tn) + " | " +
           std::to_string(report.counts.fn) + " |\n\n";

    out += "## Protection effectiveness\n\n";
    out += "| Protection method | CER (%) | PLR (%) |\n|---|---|---|\n";
    const std::string cer_text =
        report.cer ? fmt(report.cer->mean, 2) + "±" + fmt(report.cer->stddev, 2) : "n/a";
    const std::string plr_text = report.plr_pct ? fmt(*report.plr_pct, 2) : "n/a";
    out += "| " + std::string(to_string(report.mode)) + " | " + cer_text + " | " + plr_text +
           " |\n";
    return out;
}

void write_report(const EvalReport& report, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_file(join_path(out_dir, "report.csv"), report_csv(report));
    write_file(join_path(out_dir, "report.md"), report_markdown(report));
}

}  // namespace privar
