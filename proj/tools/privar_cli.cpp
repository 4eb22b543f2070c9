// privar: command-line front end over the shared library's C API.
// Exit codes: 0 success, 1 operational error, 2 usage error.

#include <csignal>
#include <cstdio>
#include <cstring>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "privar/privar.h"

namespace {

int fail_op(const std::string& what) {
    std::fprintf(stderr, "error: %s: %s\n", what.c_str(), privar_last_error());
    return 1;
}

struct AddrParts {
    std::string host = "127.0.0.1";
    int port = 0;
};

AddrParts split_addr(const std::string& addr) {
    AddrParts parts;
    const std::size_t colon = addr.rfind(':');
    if (colon == std::string::npos) {
        parts.host = addr;
        return parts;
    }
    parts.host = addr.substr(0, colon);
    parts.port = std::stoi(addr.substr(colon + 1));
    if (parts.host.empty()) parts.host = "127.0.0.1";
    return parts;
}

const char* or_null(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

volatile std::sig_atomic_t g_stop = 0;
void handle_signal(int) { g_stop = 1; }

void wait_for_signal() {
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
}

// Shared obfuscation/detector flags.
struct CommonParams {
    double sigma = 5.0;
    double beta = 40.0;
    int pad = 4;
    int quality = 75;
    std::string detector = "heuristic";
    std::string backend = "mock";
    std::string scenarios;
    std::string manifest;
    std::string external;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_obfuscation_flags(CLI::App* cmd, CommonParams& params) {
    cmd->add_option("--sigma", params.sigma, "Gaussian blur std-dev in pixels")
        ->envname("PRIVAR_SIGMA")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--beta", params.beta, "Max elastic warp displacement in pixels")
        ->envname("PRIVAR_BETA")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--pad", params.pad, "Mask dilation in pixels")
        ->envname("PRIVAR_PAD")
        ->check(CLI::NonNegativeNumber);
    auto* seed = cmd->add_option("--seed", params.seed,
                                 "Warp RNG seed (default: per-frame hash of the frame id)");
    cmd->callback([seed, &params]() { params.seed_set = seed->count() > 0; });
}

void add_quality_flag(CLI::App* cmd, CommonParams& params) {
    cmd->add_option("--quality", params.quality, "JPEG quality factor")
        ->envname("PRIVAR_QUALITY")
        ->check(CLI::Range(1, 100));
}

void add_detector_flags(CLI::App* cmd, CommonParams& params) {
    cmd->add_option("--detector", params.detector, "heuristic | annotation | external")
        ->envname("PRIVAR_DETECTOR")
        ->check(CLI::IsMember({"heuristic", "annotation", "external"}));
    cmd->add_option("--manifest", params.manifest,
                    "Dataset manifest (annotation detector / evaluate)");
    cmd->add_option("--detections", params.external,
                    "External text-detection sidecar CSV (external detector)");
}

void add_backend_flags(CLI::App* cmd, CommonParams& params) {
    cmd->add_option("--backend", params.backend, "mock | remote")
        ->envname("PRIVAR_BACKEND")
        ->check(CLI::IsMember({"mock", "remote"}));
    cmd->add_option("--scenarios", params.scenarios, "Mock scenario table (JSON)");
}

void fill_pipeline_config(privar_pipeline_config& config, const CommonParams& params) {
    privar_pipeline_config_init(&config);
    config.detector = params.detector.c_str();
    config.backend = params.backend.c_str();
    config.scenarios_path = or_null(params.scenarios);
    config.manifest_path = or_null(params.manifest);
    config.external_path = or_null(params.external);
    config.obfuscation.sigma = params.sigma;
    config.obfuscation.beta = params.beta;
    config.obfuscation.pad = params.pad;
    config.obfuscation.seed = params.seed;
    config.use_seed = params.seed_set ? 1 : 0;
    config.quality = params.quality;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PrivAR: three-tier privacy pipeline for AR frames"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(privar_version()));

    // ---- obfuscate ----
    auto* obfuscate = app.add_subcommand("obfuscate", "Blur and warp text regions of an image");
    std::string obf_in, obf_out;
    std::vector<std::string> obf_boxes;
    CommonParams obf_params;
    obfuscate->add_option("--in", obf_in, "Input image (PNG or JPEG)")->required();
    obfuscate->add_option("--out", obf_out, "Output image path")->required();
    obfuscate->add_option("--box", obf_boxes,
                          "Explicit box x,y,w,h (repeatable; skips detection)");
    add_obfuscation_flags(obfuscate, obf_params);
    add_quality_flag(obfuscate, obf_params);
    add_detector_flags(obfuscate, obf_params);

    // ---- detect ----
    auto* detect = app.add_subcommand("detect", "Detect text regions, print sidecar CSV");
    std::string det_in, det_out;
    CommonParams det_params;
    detect->add_option("--in", det_in, "Input image")->required();
    detect->add_option("--out", det_out, "Write CSV here instead of stdout");

    // ---- assess ----
    auto* assess = app.add_subcommand("assess",
                                      "Run one image through the local pipeline "
                                      "(compress, detect, obfuscate, assess)");
    std::string assess_in, assess_out;
    CommonParams assess_params;
    assess->add_option("--in", assess_in, "Input image")->required();
    assess->add_option("--out", assess_out, "Write the assessment JSON here");
    add_obfuscation_flags(assess, assess_params);
    add_quality_flag(assess, assess_params);
    add_detector_flags(assess, assess_params);
    add_backend_flags(assess, assess_params);

    // ---- serve-edge ----
    auto* serve_edge = app.add_subcommand("serve-edge", "Run the edge obfuscation service");
    std::string edge_addr = "127.0.0.1:8571";
    std::string edge_cloud_url;
    CommonParams edge_params;
    serve_edge->add_option("--addr", edge_addr, "host:port to bind")
        ->envname("PRIVAR_EDGE_ADDR");
    serve_edge->add_option("--cloud", edge_cloud_url, "Cloud base URL (http://host:port)")
        ->envname("PRIVAR_CLOUD_ADDR")
        ->required();
    add_obfuscation_flags(serve_edge, edge_params);
    add_quality_flag(serve_edge, edge_params);
    add_detector_flags(serve_edge, edge_params);

    // ---- serve-cloud ----
    auto* serve_cloud = app.add_subcommand("serve-cloud", "Run the cloud assessment service");
    std::string cloud_addr = "127.0.0.1:8572";
    CommonParams cloud_params;
    serve_cloud->add_option("--addr", cloud_addr, "host:port to bind")
        ->envname("PRIVAR_CLOUD_ADDR");
    add_backend_flags(serve_cloud, cloud_params);

    // ---- run ----
    auto* run = app.add_subcommand("run", "End-to-end pipeline over a directory of frames");
    std::string run_dir, run_out = "run-out", run_edge_url, run_cloud_url;
    CommonParams run_params;
    run->add_option("--dir", run_dir, "Directory of *.png / *.jpg frames")->required();
    run->add_option("--out-dir", run_out, "Report output directory");
    run->add_option("--edge", run_edge_url, "Submit to this edge URL instead of in-process");
    run->add_option("--cloud", run_cloud_url, "In-process edge calls this cloud URL");
    add_obfuscation_flags(run, run_params);
    add_quality_flag(run, run_params);
    add_detector_flags(run, run_params);
    add_backend_flags(run, run_params);

    // ---- evaluate ----
    auto* evaluate = app.add_subcommand("evaluate", "Manifest-driven evaluation harness");
    std::string eval_manifest, eval_out = "eval-out", eval_mode = "privar";
    std::string eval_classifier = "privar", eval_rules, eval_detections;
    std::string eval_ocr_original, eval_ocr_protected, eval_ocr_source = "transcript";
    int eval_workers = 1;
    double eval_threshold = 0.5;
    CommonParams eval_params;
    evaluate->add_option("--manifest", eval_manifest, "Dataset manifest JSON")->required();
    evaluate->add_option("--out-dir", eval_out, "Report output directory");
    evaluate->add_option("--mode", eval_mode, "privar | no-obfuscation | oracle-guided")
        ->check(CLI::IsMember({"privar", "no-obfuscation", "oracle-guided"}));
    evaluate
        ->add_option("--classifier", eval_classifier,
                     "privar | rule-based | object-recognition | caption")
        ->check(CLI::IsMember({"privar", "rule-based", "object-recognition", "caption"}));
    evaluate->add_option("--rules", eval_rules, "Pattern rule set JSON");
    evaluate->add_option("--recorded-detections", eval_detections,
                         "Recorded object-detection sidecar CSV");
    evaluate->add_option("--ocr-original", eval_ocr_original,
                         "Recorded OCR sidecar of the unprotected images");
    evaluate->add_option("--ocr-protected", eval_ocr_protected,
                         "Recorded OCR sidecar of the protected images (CER)");
    evaluate->add_option("--ocr-source", eval_ocr_source, "transcript | external-file")
        ->check(CLI::IsMember({"transcript", "external-file"}));
    evaluate->add_option("--workers", eval_workers, "Parallel item workers")
        ->check(CLI::PositiveNumber);
    evaluate->add_option("--confidence-threshold", eval_threshold,
                         "Object-recognition confidence threshold")
        ->check(CLI::Range(0.0, 1.0));
    add_obfuscation_flags(evaluate, eval_params);
    add_quality_flag(evaluate, eval_params);
    add_detector_flags(evaluate, eval_params);
    add_backend_flags(evaluate, eval_params);

    // ---- render-warnings ----
    auto* render = app.add_subcommand("render-warnings",
                                      "Render a warning frame sequence for an assessment");
    std::string rw_frame, rw_assessment, rw_mode = "center-screen", rw_out = "warning-frames";
    double rw_fps = 10.0;
    render->add_option("--frame", rw_frame, "Frame image (PNG or JPEG)")->required();
    render->add_option("--assessment", rw_assessment, "Assessment JSON file")->required();
    render->add_option("--mode", rw_mode, "center-screen | top-screen | region-overlay")
        ->check(CLI::IsMember({"center-screen", "top-screen", "region-overlay"}));
    render->add_option("--fps", rw_fps, "Frames per second")->check(CLI::PositiveNumber);
    render->add_option("--out-dir", rw_out, "Frame output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::CallForVersion& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (obfuscate->parsed()) {
        privar_image* image = nullptr;
        if (privar_image_load(obf_in.c_str(), &image) != PRIVAR_OK) return fail_op(obf_in);

        privar_boxes* boxes = nullptr;
        if (!obf_boxes.empty()) {
            boxes = privar_boxes_create();
            for (const std::string& spec : obf_boxes) {
                int x, y, w, h;
                if (std::sscanf(spec.c_str(), "%d,%d,%d,%d", &x, &y, &w, &h) != 4) {
                    std::fprintf(stderr, "error: --box expects x,y,w,h, got \"%s\"\n",
                                 spec.c_str());
                    privar_boxes_free(boxes);
                    privar_image_free(image);
                    return 2;
                }
                if (privar_boxes_push(boxes, x, y, w, h) != PRIVAR_OK) {
                    fail_op("box " + spec);
                    privar_boxes_free(boxes);
                    privar_image_free(image);
                    return 1;
                }
            }
        } else if (privar_detect_heuristic(image, nullptr, &boxes) != PRIVAR_OK) {
            privar_image_free(image);
            return fail_op("detection");
        }

        privar_obfuscation_params params;
        privar_obfuscation_params_init(&params);
        params.sigma = obf_params.sigma;
        params.beta = obf_params.beta;
        params.pad = obf_params.pad;
        params.seed = obf_params.seed_set
                          ? obf_params.seed
                          : 0x9e3779b97f4a7c15ull;  // fixed default for file mode
        privar_image* out = nullptr;
        int rc = 0;
        if (privar_obfuscate(image, boxes, &params, &out) != PRIVAR_OK) {
            rc = fail_op("obfuscation");
        } else {
            const bool jpeg = obf_out.size() > 4 &&
                              (obf_out.rfind(".jpg") == obf_out.size() - 4 ||
                               obf_out.rfind(".jpeg") == obf_out.size() - 5);
            const privar_status st =
                jpeg ? privar_image_save_jpeg(out, obf_out.c_str(), obf_params.quality)
                     : privar_image_save_png(out, obf_out.c_str());
            if (st != PRIVAR_OK) rc = fail_op(obf_out);
        }
        privar_image_free(out);
        privar_boxes_free(boxes);
        privar_image_free(image);
        return rc;
    }

    if (detect->parsed()) {
        privar_image* image = nullptr;
        if (privar_image_load(det_in.c_str(), &image) != PRIVAR_OK) return fail_op(det_in);
        privar_boxes* boxes = nullptr;
        if (privar_detect_heuristic(image, nullptr, &boxes) != PRIVAR_OK) {
            privar_image_free(image);
            return fail_op("detection");
        }
        std::string frame_id = det_in;
        const std::size_t slash = frame_id.find_last_of('/');
        if (slash != std::string::npos) frame_id = frame_id.substr(slash + 1);
        const std::size_t dot = frame_id.find_last_of('.');
        if (dot != std::string::npos) frame_id = frame_id.substr(0, dot);

        std::string csv = "frame_id,x,y,w,h,confidence\n";
        for (std::size_t i = 0; i < privar_boxes_count(boxes); ++i) {
            int x, y, w, h;
            privar_boxes_get(boxes, i, &x, &y, &w, &h);
            csv += frame_id + "," + std::to_string(x) + "," + std::to_string(y) + "," +
                   std::to_string(w) + "," + std::to_string(h) + ",1.00\n";
        }
        int rc = 0;
        if (det_out.empty()) {
            std::fputs(csv.c_str(), stdout);
        } else {
            FILE* f = std::fopen(det_out.c_str(), "wb");
            if (f == nullptr) {
                std::fprintf(stderr, "error: cannot open %s\n", det_out.c_str());
                rc = 1;
            } else {
                std::fputs(csv.c_str(), f);
                std::fclose(f);
            }
        }
        privar_boxes_free(boxes);
        privar_image_free(image);
        return rc;
    }

    if (assess->parsed()) {
        privar_pipeline_config config;
        fill_pipeline_config(config, assess_params);
        privar_assessment* assessment = nullptr;
        if (privar_assess_file(assess_in.c_str(), &config, &assessment) != PRIVAR_OK) {
            return fail_op("assessment of " + assess_in);
        }
        const char* json = privar_assessment_json(assessment);
        std::printf("%s\n", json);
        int rc = 0;
        if (!assess_out.empty()) {
            FILE* f = std::fopen(assess_out.c_str(), "wb");
            if (f == nullptr) {
                std::fprintf(stderr, "error: cannot open %s\n", assess_out.c_str());
                rc = 1;
            } else {
                std::fputs(json, f);
                std::fputc('\n', f);
                std::fclose(f);
            }
        }
        privar_assessment_free(assessment);
        return rc;
    }

    if (serve_cloud->parsed()) {
        const AddrParts addr = split_addr(cloud_addr);
        privar_cloud_config config;
        privar_cloud_config_init(&config);
        config.host = addr.host.c_str();
        config.port = addr.port;
        config.backend = cloud_params.backend.c_str();
        config.scenarios_path = or_null(cloud_params.scenarios);
        privar_server* server = nullptr;
        if (privar_cloud_serve(&config, &server) != PRIVAR_OK) return fail_op("serve-cloud");
        std::printf("cloud service listening on %s:%d\n", addr.host.c_str(),
                    privar_server_port(server));
        std::fflush(stdout);
        wait_for_signal();
        privar_server_stop(server);
        return 0;
    }

    if (serve_edge->parsed()) {
        const AddrParts addr = split_addr(edge_addr);
        privar_edge_config config;
        privar_edge_config_init(&config);
        config.host = addr.host.c_str();
        config.port = addr.port;
        config.cloud_url = edge_cloud_url.c_str();
        config.detector = edge_params.detector.c_str();
        config.manifest_path = or_null(edge_params.manifest);
        config.external_path = or_null(edge_params.external);
        config.obfuscation.sigma = edge_params.sigma;
        config.obfuscation.beta = edge_params.beta;
        config.obfuscation.pad = edge_params.pad;
        config.obfuscation.seed = edge_params.seed;
        config.use_seed = edge_params.seed_set ? 1 : 0;
        config.quality = edge_params.quality;
        privar_server* server = nullptr;
        if (privar_edge_serve(&config, &server) != PRIVAR_OK) return fail_op("serve-edge");
        std::printf("edge service listening on %s:%d (cloud: %s)\n", addr.host.c_str(),
                    privar_server_port(server), edge_cloud_url.c_str());
        std::fflush(stdout);
        wait_for_signal();
        privar_server_stop(server);
        return 0;
    }

    if (run->parsed()) {
        privar_run_config config;
        privar_run_config_init(&config);
        config.input_dir = run_dir.c_str();
        config.out_dir = run_out.c_str();
        config.edge_url = or_null(run_edge_url);
        config.cloud_url = or_null(run_cloud_url);
        config.detector = run_params.detector.c_str();
        config.backend = run_params.backend.c_str();
        config.scenarios_path = or_null(run_params.scenarios);
        config.manifest_path = or_null(run_params.manifest);
        config.external_path = or_null(run_params.external);
        config.obfuscation.sigma = run_params.sigma;
        config.obfuscation.beta = run_params.beta;
        config.obfuscation.pad = run_params.pad;
        config.quality = run_params.quality;
        int failures = 0;
        if (privar_run(&config, &failures) != PRIVAR_OK) return fail_op("run");
        std::printf("run complete; reports in %s (failures: %d)\n", run_out.c_str(), failures);
        return 0;
    }

    if (evaluate->parsed()) {
        privar_eval_config config;
        privar_eval_config_init(&config);
        config.manifest_path = eval_manifest.c_str();
        config.out_dir = eval_out.c_str();
        config.mode = eval_mode.c_str();
        config.classifier = eval_classifier.c_str();
        config.backend = eval_params.backend.c_str();
        config.scenarios_path = or_null(eval_params.scenarios);
        config.rules_path = or_null(eval_rules);
        config.detections_path = or_null(eval_detections);
        config.external_path = or_null(eval_params.external);
        config.ocr_original_path = or_null(eval_ocr_original);
        config.ocr_protected_path = or_null(eval_ocr_protected);
        config.ocr_source = eval_ocr_source.c_str();
        config.detector = eval_params.detector.c_str();
        config.obfuscation.sigma = eval_params.sigma;
        config.obfuscation.beta = eval_params.beta;
        config.obfuscation.pad = eval_params.pad;
        config.quality = eval_params.quality;
        config.confidence_threshold = eval_threshold;
        config.workers = eval_workers;
        int failures = 0;
        if (privar_evaluate(&config, &failures) != PRIVAR_OK) return fail_op("evaluate");
        std::printf("evaluation complete; reports in %s (failures: %d)\n", eval_out.c_str(),
                    failures);
        return 0;
    }

    if (render->parsed()) {
        privar_image* probe = nullptr;  // early, friendlier error for a bad frame path
        if (privar_image_load(rw_frame.c_str(), &probe) != PRIVAR_OK) return fail_op(rw_frame);
        privar_image_free(probe);

        FILE* f = std::fopen(rw_assessment.c_str(), "rb");
        if (f == nullptr) {
            std::fprintf(stderr, "error: cannot open %s\n", rw_assessment.c_str());
            return 1;
        }
        std::string json;
        char buf[4096];
        std::size_t n;
        while ((n = std::fread(buf, 1, sizeof(buf), f)) > 0) json.append(buf, n);
        std::fclose(f);

        size_t frames = 0;
        if (privar_render_warnings(rw_frame.c_str(), json.c_str(), rw_mode.c_str(), rw_fps,
                                   rw_out.c_str(), &frames) != PRIVAR_OK) {
            return fail_op("render-warnings");
        }
        std::printf("wrote %zu frames to %s\n", frames, rw_out.c_str());
        return 0;
    }

    return 2;
}
