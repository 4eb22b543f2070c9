#include "privar/privar.h"


#include <memory>
#include <optional>
#include <string>

#include "backend.hpp"
#include "codec.hpp"
#include "dataset.hpp"
#include "detect.hpp"
#include "errors.hpp"
#include "evaluate.hpp"
#include "imaging.hpp"
#include "pipeline.hpp"
#include "risk.hpp"
#include "run.hpp"
#include "services.hpp"
#include "warnings.hpp"

using namespace privar;

namespace {

thread_local std::string t_last_error = "";

privar_status status_from_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument: return PRIVAR_E_INVALID_ARGUMENT;
        case ErrorCode::io: return PRIVAR_E_IO;
        case ErrorCode::decode: return PRIVAR_E_DECODE;
        case ErrorCode::parse: return PRIVAR_E_PARSE;
        case ErrorCode::missing: return PRIVAR_E_MISSING;
        case ErrorCode::transport: return PRIVAR_E_TRANSPORT;
        case ErrorCode::rejected: return PRIVAR_E_REJECTED;
        case ErrorCode::internal: return PRIVAR_E_INTERNAL;
    }
    return PRIVAR_E_INTERNAL;
}

template <typename Fn>
privar_status guarded(Fn&& fn) {
    try {
        fn();
        return PRIVAR_OK;
    } catch (const Error& e) {
        t_last_error = e.what();
        return status_from_code(e.code());
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return PRIVAR_E_INTERNAL;
    } catch (...) {
        t_last_error = "unknown failure";
        return PRIVAR_E_INTERNAL;
    }
}

privar_status invalid(const char* message) {
    t_last_error = message;
    return PRIVAR_E_INVALID_ARGUMENT;
}

std::string opt(const char* s) { return s == nullptr ? std::string() : std::string(s); }

DetectorConfig to_core(const privar_detector_config& c) {
    DetectorConfig config;
    config.min_area = c.min_area;
    config.max_area_fraction = c.max_area_fraction;
    config.min_aspect = c.min_aspect;
    config.max_aspect = c.max_aspect;
    if (c.use_fixed_threshold) config.fixed_threshold = c.fixed_threshold;
    config.merge_iou = c.merge_iou;
    return config;
}

ObfuscationParams to_core(const privar_obfuscation_params& p) {
    return ObfuscationParams{p.sigma, p.beta, p.pad, p.seed};
}

std::unique_ptr<VlmBackend> make_backend(const std::string& kind,
                                         const std::string& scenarios_path) {
    if (kind.empty() || kind == "mock") {
        if (scenarios_path.empty()) {
            throw InvalidArgumentError("mock backend needs a scenario table path");
        }
        return std::make_unique<MockVlmBackend>(ScenarioTable::load(scenarios_path));
    }
    if (kind == "remote") {
        return std::make_unique<RemoteVlmBackend>(remote_config_from_env());
    }
    throw InvalidArgumentError("unknown backend \"" + kind + "\" (expected mock or remote)");
}

}  // namespace

struct privar_image {
    Image image;
};

struct privar_boxes {
    std::vector<BoundingBox> boxes;
};

struct privar_assessment {
    RiskAssessment assessment;
    std::string json_cache;
};

struct privar_server {
    // Owns everything the running service refers to.
    std::unique_ptr<VlmBackend> backend;
    std::unique_ptr<CloudCore> cloud_core;
    std::optional<DatasetManifest> manifest;
    std::optional<DetectionSidecar> external;
    std::unique_ptr<CloudClient> cloud_client;
    std::unique_ptr<EdgeCore> edge_core;
    std::unique_ptr<HttpServer> http;
};

extern "C" {

const char* privar_version(void) { return "0.1.0"; }

const char* privar_last_error(void) { return t_last_error.c_str(); }

/* ---- images ---- */

privar_status privar_image_load(const char* path, privar_image** out) {
    if (path == nullptr || out == nullptr) return invalid("path and out must be non-NULL");
    return guarded([&] { *out = new privar_image{load_image(path)}; });
}

privar_status privar_image_decode(const uint8_t* bytes, size_t len, privar_image** out) {
    if (bytes == nullptr || out == nullptr) return invalid("bytes and out must be non-NULL");
    return guarded([&] { *out = new privar_image{decode_image(bytes, len)}; });
}

privar_status privar_image_save_png(const privar_image* image, const char* path) {
    if (image == nullptr || path == nullptr) return invalid("image and path must be non-NULL");
    return guarded([&] { save_png(image->image, path); });
}

privar_status privar_image_save_jpeg(const privar_image* image, const char* path, int quality) {
    if (image == nullptr || path == nullptr) return invalid("image and path must be non-NULL");
    return guarded([&] { save_jpeg(image->image, path, quality); });
}

privar_status privar_image_encode_jpeg(const privar_image* image, int quality, uint8_t** bytes,
                                       size_t* len) {
    if (image == nullptr || bytes == nullptr || len == nullptr) {
        return invalid("image, bytes and len must be non-NULL");
    }
    return guarded([&] {
        const std::vector<std::uint8_t> encoded = encode_jpeg(image->image, quality);
        *bytes = new uint8_t[encoded.size()];
        std::copy(encoded.begin(), encoded.end(), *bytes);
        *len = encoded.size();
    });
}

void privar_bytes_free(uint8_t* bytes) { delete[] bytes; }

void privar_image_free(privar_image* image) { delete image; }

int privar_image_width(const privar_image* image) { return image ? image->image.width : 0; }
int privar_image_height(const privar_image* image) { return image ? image->image.height : 0; }
int privar_image_channels(const privar_image* image) {
    return image ? image->image.channels : 0;
}

uint64_t privar_image_fingerprint(const privar_image* image) {
    return image ? fingerprint(image->image) : 0;
}

/* ---- boxes ---- */

privar_boxes* privar_boxes_create(void) { return new privar_boxes{}; }

privar_status privar_boxes_push(privar_boxes* boxes, int x, int y, int w, int h) {
    if (boxes == nullptr) return invalid("boxes must be non-NULL");
    return guarded([&] {
        const BoundingBox box{x, y, w, h};
        require_valid(box);
        boxes->boxes.push_back(box);
    });
}

size_t privar_boxes_count(const privar_boxes* boxes) { return boxes ? boxes->boxes.size() : 0; }

privar_status privar_boxes_get(const privar_boxes* boxes, size_t index, int* x, int* y, int* w,
                               int* h) {
    if (boxes == nullptr || index >= boxes->boxes.size()) {
        return invalid("box index out of range");
    }
    const BoundingBox& b = boxes->boxes[index];
    if (x) *x = b.x;
    if (y) *y = b.y;
    if (w) *w = b.w;
    if (h) *h = b.h;
    return PRIVAR_OK;
}

void privar_boxes_free(privar_boxes* boxes) { delete boxes; }

/* ---- detection ---- */

void privar_detector_config_init(privar_detector_config* config) {
    if (config == nullptr) return;
    const DetectorConfig defaults;
    config->min_area = defaults.min_area;
    config->max_area_fraction = defaults.max_area_fraction;
    config->min_aspect = defaults.min_aspect;
    config->max_aspect = defaults.max_aspect;
    config->use_fixed_threshold = 0;
    config->fixed_threshold = 128;
    config->merge_iou = defaults.merge_iou;
}

privar_status privar_detect_heuristic(const privar_image* image,
                                      const privar_detector_config* config,
                                      privar_boxes** out) {
    if (image == nullptr || out == nullptr) return invalid("image and out must be non-NULL");
    return guarded([&] {
        privar_detector_config defaults;
        privar_detector_config_init(&defaults);
        const DetectorConfig core_config = to_core(config ? *config : defaults);
        *out = new privar_boxes{detect_heuristic(image->image, core_config)};
    });
}

/* ---- obfuscation ---- */

void privar_obfuscation_params_init(privar_obfuscation_params* params) {
    if (params == nullptr) return;
    const ObfuscationParams defaults;
    params->sigma = defaults.sigma;
    params->beta = defaults.beta;
    params->pad = defaults.pad;
    params->seed = defaults.seed;
}

privar_status privar_obfuscate(const privar_image* image, const privar_boxes* boxes,
                               const privar_obfuscation_params* params, privar_image** out) {
    if (image == nullptr || boxes == nullptr || params == nullptr || out == nullptr) {
        return invalid("image, boxes, params and out must be non-NULL");
    }
    return guarded([&] {
        *out = new privar_image{obfuscate(image->image, boxes->boxes, to_core(*params))};
    });
}

privar_status privar_mask_save_png(const privar_boxes* boxes, int width, int height, int pad,
                                   const char* path) {
    if (boxes == nullptr || path == nullptr) return invalid("boxes and path must be non-NULL");
    return guarded([&] { save_mask_png(build_mask(boxes->boxes, width, height, pad), path); });
}

/* ---- assessment ---- */

void privar_pipeline_config_init(privar_pipeline_config* config) {
    if (config == nullptr) return;
    config->detector = "heuristic";
    config->backend = "mock";
    config->scenarios_path = nullptr;
    config->manifest_path = nullptr;
    config->external_path = nullptr;
    privar_detector_config_init(&config->detector_config);
    privar_obfuscation_params_init(&config->obfuscation);
    config->use_seed = 0;
    config->quality = 75;
}

privar_status privar_assess_file(const char* image_path, const privar_pipeline_config* config,
                                 privar_assessment** out) {
    if (image_path == nullptr || config == nullptr || out == nullptr) {
        return invalid("image_path, config and out must be non-NULL");
    }
    return guarded([&] {
        const Image raw = load_image(image_path);
        const std::string frame_id = frame_id_from_path(image_path);
        const Image comp = decompress(compress(raw, config->quality));

        std::optional<DatasetManifest> manifest;
        if (config->manifest_path != nullptr) manifest = load_manifest(config->manifest_path);
        std::optional<DetectionSidecar> external;
        if (config->external_path != nullptr) {
            external = DetectionSidecar::load(config->external_path);
        }

        EdgeParams params;
        params.detector = detector_choice_from_string(
            opt(config->detector).empty() ? "heuristic" : config->detector);
        params.detector_config = to_core(config->detector_config);
        params.obfuscation = to_core(config->obfuscation);
        if (config->use_seed) params.seed_override = config->obfuscation.seed;
        params.quality = config->quality;
        params.annotations = manifest ? &*manifest : nullptr;
        params.external = external ? &*external : nullptr;

        const EdgeResult edge = edge_process(comp, frame_id, params);
        const Image cloud_view = decompress(edge.wire_jpeg);

        std::unique_ptr<VlmBackend> backend =
            make_backend(opt(config->backend), opt(config->scenarios_path));
        *out = new privar_assessment{
            assess(frame_id, cloud_view, edge.boxes.boxes, *backend), ""};
    });
}

const char* privar_assessment_json(privar_assessment* assessment) {
    if (assessment == nullptr) return "";
    if (assessment->json_cache.empty()) {
        assessment->json_cache = assessment_to_json(assessment->assessment);
    }
    return assessment->json_cache.c_str();
}

privar_status privar_assessment_from_json(const char* json, privar_assessment** out) {
    if (json == nullptr || out == nullptr) return invalid("json and out must be non-NULL");
    return guarded([&] { *out = new privar_assessment{assessment_from_json(json), ""}; });
}

int privar_assessment_risk(const privar_assessment* assessment) {
    return assessment != nullptr && assessment->assessment.risk ? 1 : 0;
}

void privar_assessment_free(privar_assessment* assessment) { delete assessment; }

/* ---- services ---- */

void privar_cloud_config_init(privar_cloud_config* config) {
    if (config == nullptr) return;
    config->host = "127.0.0.1";
    config->port = 0;
    config->backend = "mock";
    config->scenarios_path = nullptr;
    config->concurrency = 8;
}

privar_status privar_cloud_serve(const privar_cloud_config* config, privar_server** out) {
    if (config == nullptr || out == nullptr) return invalid("config and out must be non-NULL");
    return guarded([&] {
        auto server = std::make_unique<privar_server>();
        server->backend = make_backend(opt(config->backend), opt(config->scenarios_path));
        server->cloud_core = std::make_unique<CloudCore>(*server->backend);
        server->http = HttpServer::serve_cloud(*server->cloud_core,
                                               opt(config->host).empty() ? "127.0.0.1"
                                                                         : config->host,
                                               config->port, config->concurrency);
        *out = server.release();
    });
}

void privar_edge_config_init(privar_edge_config* config) {
    if (config == nullptr) return;
    config->host = "127.0.0.1";
    config->port = 0;
    config->cloud_url = nullptr;
    config->detector = "heuristic";
    config->manifest_path = nullptr;
    config->external_path = nullptr;
    privar_detector_config_init(&config->detector_config);
    privar_obfuscation_params_init(&config->obfuscation);
    config->use_seed = 0;
    config->quality = 75;
    config->concurrency = 8;
    config->cloud_timeout_s = 30;
}

privar_status privar_edge_serve(const privar_edge_config* config, privar_server** out) {
    if (config == nullptr || out == nullptr) return invalid("config and out must be non-NULL");
    if (config->cloud_url == nullptr || opt(config->cloud_url).empty()) {
        return invalid("edge config needs cloud_url");
    }
    return guarded([&] {
        auto server = std::make_unique<privar_server>();
        if (config->manifest_path != nullptr) {
            server->manifest = load_manifest(config->manifest_path);
        }
        if (config->external_path != nullptr) {
            server->external = DetectionSidecar::load(config->external_path);
        }

        EdgeParams params;
        params.detector = detector_choice_from_string(
            opt(config->detector).empty() ? "heuristic" : config->detector);
        params.detector_config = to_core(config->detector_config);
        params.obfuscation = to_core(config->obfuscation);
        if (config->use_seed) params.seed_override = config->obfuscation.seed;
        params.quality = config->quality;
        params.annotations = server->manifest ? &*server->manifest : nullptr;
        params.external = server->external ? &*server->external : nullptr;

        server->cloud_client =
            std::make_unique<HttpCloudClient>(config->cloud_url, config->cloud_timeout_s);
        server->edge_core = std::make_unique<EdgeCore>(params, *server->cloud_client);
        server->http = HttpServer::serve_edge(*server->edge_core,
                                              opt(config->host).empty() ? "127.0.0.1"
                                                                        : config->host,
                                              config->port, config->concurrency);
        *out = server.release();
    });
}

int privar_server_port(const privar_server* server) {
    return server && server->http ? server->http->port() : 0;
}

void privar_server_stop(privar_server* server) {
    if (server == nullptr) return;
    if (server->http) server->http->stop();
    delete server;
}

privar_status privar_submit(const char* image_path, const char* edge_url, int quality,
                            privar_assessment** out) {
    if (image_path == nullptr || edge_url == nullptr || out == nullptr) {
        return invalid("image_path, edge_url and out must be non-NULL");
    }
    return guarded([&] {
        const AssessResponse response = device_submit(image_path, edge_url, quality);
        *out = new privar_assessment{response.assessment, ""};
    });
}

/* ---- run ---- */

void privar_run_config_init(privar_run_config* config) {
    if (config == nullptr) return;
    config->input_dir = nullptr;
    config->out_dir = nullptr;
    config->edge_url = nullptr;
    config->cloud_url = nullptr;
    config->detector = "heuristic";
    config->backend = "mock";
    config->scenarios_path = nullptr;
    config->manifest_path = nullptr;
    config->external_path = nullptr;
    privar_detector_config_init(&config->detector_config);
    privar_obfuscation_params_init(&config->obfuscation);
    config->quality = 75;
    config->concurrency = 8;
}

privar_status privar_run(const privar_run_config* config, int* failures) {
    if (config == nullptr || config->input_dir == nullptr) {
        return invalid("config and input_dir must be non-NULL");
    }
    return guarded([&] {
        RunConfig run_config;
        run_config.input_dir = config->input_dir;
        run_config.out_dir = opt(config->out_dir);
        run_config.edge_url = opt(config->edge_url);
        run_config.cloud_url = opt(config->cloud_url);
        run_config.detector = detector_choice_from_string(
            opt(config->detector).empty() ? "heuristic" : config->detector);
        run_config.detector_config = to_core(config->detector_config);
        run_config.obfuscation = to_core(config->obfuscation);
        run_config.quality = config->quality;
        run_config.backend = opt(config->backend).empty() ? "mock" : config->backend;
        run_config.scenarios_path = opt(config->scenarios_path);
        run_config.manifest_path = opt(config->manifest_path);
        run_config.external_path = opt(config->external_path);
        run_config.concurrency = config->concurrency;
        const RunResult result = run_directory(run_config);
        if (failures != nullptr) *failures = static_cast<int>(result.failures);
    });
}

/* ---- evaluation ---- */

void privar_eval_config_init(privar_eval_config* config) {
    if (config == nullptr) return;
    config->manifest_path = nullptr;
    config->out_dir = nullptr;
    config->mode = "privar";
    config->classifier = "privar";
    config->backend = "mock";
    config->scenarios_path = nullptr;
    config->rules_path = nullptr;
    config->detections_path = nullptr;
    config->external_path = nullptr;
    config->ocr_original_path = nullptr;
    config->ocr_protected_path = nullptr;
    config->ocr_source = "transcript";
    config->detector = "heuristic";
    privar_detector_config_init(&config->detector_config);
    privar_obfuscation_params_init(&config->obfuscation);
    config->quality = 75;
    config->confidence_threshold = 0.5;
    config->workers = 1;
    config->leakage_extraction = 1;
}

privar_status privar_evaluate(const privar_eval_config* config, int* failures) {
    if (config == nullptr || config->manifest_path == nullptr) {
        return invalid("config and manifest_path must be non-NULL");
    }
    return guarded([&] {
        const DatasetManifest manifest = load_manifest(config->manifest_path);

        EvalConfig eval_config;
        eval_config.mode = protection_mode_from_string(opt(config->mode));
        eval_config.classifier = classifier_kind_from_string(opt(config->classifier));
        eval_config.quality = config->quality;
        eval_config.obfuscation = to_core(config->obfuscation);
        eval_config.detector = detector_choice_from_string(
            opt(config->detector).empty() ? "heuristic" : config->detector);
        eval_config.detector_config = to_core(config->detector_config);
        const std::string ocr_source = opt(config->ocr_source);
        if (ocr_source.empty() || ocr_source == "transcript") {
            eval_config.ocr_source = OcrSource::transcript;
        } else if (ocr_source == "external-file") {
            eval_config.ocr_source = OcrSource::external_file;
        } else {
            throw InvalidArgumentError("unknown ocr source \"" + ocr_source +
                                       "\" (expected transcript or external-file)");
        }
        if (config->ocr_original_path) eval_config.ocr_original_path = config->ocr_original_path;
        if (config->ocr_protected_path) {
            eval_config.ocr_protected_path = config->ocr_protected_path;
        }
        if (config->detections_path) eval_config.detections_path = config->detections_path;
        if (config->external_path) eval_config.external_detection_path = config->external_path;
        if (config->rules_path) eval_config.rules = load_rules(config->rules_path);
        eval_config.confidence_threshold = config->confidence_threshold;
        eval_config.workers = config->workers;
        eval_config.leakage_extraction = config->leakage_extraction != 0;

        std::unique_ptr<VlmBackend> backend;
        const ClassifierKind kind = eval_config.classifier;
        const bool needs_backend = kind == ClassifierKind::privar ||
                                   kind == ClassifierKind::caption ||
                                   eval_config.leakage_extraction;
        if (needs_backend) {
            try {
                backend = make_backend(opt(config->backend), opt(config->scenarios_path));
            } catch (const InvalidArgumentError&) {
                // Leakage extraction is best-effort; classifiers that need a
                // backend re-raise below.
                if (kind == ClassifierKind::privar || kind == ClassifierKind::caption) throw;
            }
        }

        const EvalReport report =
            run_evaluation(manifest, eval_config, backend.get(), backend.get());
        if (config->out_dir != nullptr) write_report(report, config->out_dir);
        if (failures != nullptr) *failures = static_cast<int>(report.failures);
    });
}

/* ---- warnings ---- */

int privar_flash_visible(double t) {
    try {
        return flash_visible(t) ? 1 : 0;
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return -1;
    }
}

privar_status privar_render_warnings(const char* frame_path, const char* assessment_json,
                                     const char* mode, double fps, const char* out_dir,
                                     size_t* frame_count) {
    if (frame_path == nullptr || assessment_json == nullptr || mode == nullptr ||
        out_dir == nullptr) {
        return invalid("frame_path, assessment_json, mode and out_dir must be non-NULL");
    }
    return guarded([&] {
        const Image frame = load_image(frame_path);
        const RiskAssessment assessment = assessment_from_json(assessment_json);
        const FrameSequenceResult result = render_warning_sequence(
            frame, assessment, warning_mode_from_string(mode), fps, out_dir);
        if (frame_count != nullptr) *frame_count = result.frame_count;
    });
}

} /* extern "C" */
