/* PrivAR C API: the stable surface of the shared library.
 *
 * Conventions:
 *   - every function returns a privar_status; PRIVAR_OK is 0
 *   - on failure, privar_last_error() returns a thread-local message
 *   - objects returned through privar_*_t** out-parameters are owned by the
 *     caller and released with the matching privar_*_free()
 *   - config structs must be initialized with their privar_*_init() before
 *     overriding individual fields
 */

#ifndef PRIVAR_H
#define PRIVAR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PRIVAR_API __declspec(dllexport)
#else
#define PRIVAR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum privar_status {
    PRIVAR_OK = 0,
    PRIVAR_E_INVALID_ARGUMENT = 1,
    PRIVAR_E_IO = 2,
    PRIVAR_E_DECODE = 3,
    PRIVAR_E_PARSE = 4,
    PRIVAR_E_MISSING = 5,
    PRIVAR_E_TRANSPORT = 6,
    PRIVAR_E_REJECTED = 7,
    PRIVAR_E_INTERNAL = 8
} privar_status;

PRIVAR_API const char* privar_version(void);

/* Message for the most recent failure on this thread; never NULL. */
PRIVAR_API const char* privar_last_error(void);

/* ---- images -------------------------------------------------------------- */

typedef struct privar_image privar_image;

PRIVAR_API privar_status privar_image_load(const char* path, privar_image** out);
PRIVAR_API privar_status privar_image_decode(const uint8_t* bytes, size_t len,
                                             privar_image** out);
PRIVAR_API privar_status privar_image_save_png(const privar_image* image, const char* path);
PRIVAR_API privar_status privar_image_save_jpeg(const privar_image* image, const char* path,
                                                int quality);
PRIVAR_API privar_status privar_image_encode_jpeg(const privar_image* image, int quality,
                                                  uint8_t** bytes, size_t* len);
PRIVAR_API void privar_bytes_free(uint8_t* bytes);
PRIVAR_API void privar_image_free(privar_image* image);

PRIVAR_API int privar_image_width(const privar_image* image);
PRIVAR_API int privar_image_height(const privar_image* image);
PRIVAR_API int privar_image_channels(const privar_image* image);
PRIVAR_API uint64_t privar_image_fingerprint(const privar_image* image);

/* ---- boxes --------------------------------------------------------------- */

typedef struct privar_boxes privar_boxes;

PRIVAR_API privar_boxes* privar_boxes_create(void);
PRIVAR_API privar_status privar_boxes_push(privar_boxes* boxes, int x, int y, int w, int h);
PRIVAR_API size_t privar_boxes_count(const privar_boxes* boxes);
PRIVAR_API privar_status privar_boxes_get(const privar_boxes* boxes, size_t index, int* x,
                                          int* y, int* w, int* h);
PRIVAR_API void privar_boxes_free(privar_boxes* boxes);

/* ---- detection ------------------------------------------------------------ */

typedef struct privar_detector_config {
    int min_area;              /* px^2 */
    double max_area_fraction;  /* (0,1] */
    double min_aspect;         /* w/h */
    double max_aspect;
    int use_fixed_threshold;   /* 0: Otsu */
    int fixed_threshold;       /* 0..255, used when use_fixed_threshold != 0 */
    double merge_iou;          /* [0,1] */
} privar_detector_config;

PRIVAR_API void privar_detector_config_init(privar_detector_config* config);

PRIVAR_API privar_status privar_detect_heuristic(const privar_image* image,
                                                 const privar_detector_config* config,
                                                 privar_boxes** out);

/* ---- obfuscation ----------------------------------------------------------- */

typedef struct privar_obfuscation_params {
    double sigma;   /* blur std-dev, px */
    double beta;    /* max warp displacement, px */
    int pad;        /* mask dilation, px */
    uint64_t seed;  /* warp RNG seed (used as-is) */
} privar_obfuscation_params;

PRIVAR_API void privar_obfuscation_params_init(privar_obfuscation_params* params);

PRIVAR_API privar_status privar_obfuscate(const privar_image* image, const privar_boxes* boxes,
                                          const privar_obfuscation_params* params,
                                          privar_image** out);

/* 1-bit-per-pixel PNG of the padded box-union mask, for debugging. */
PRIVAR_API privar_status privar_mask_save_png(const privar_boxes* boxes, int width, int height,
                                              int pad, const char* path);

/* ---- assessment ------------------------------------------------------------ */

typedef struct privar_assessment privar_assessment;

typedef struct privar_pipeline_config {
    const char* detector;        /* heuristic | annotation | external */
    const char* backend;         /* mock | remote */
    const char* scenarios_path;  /* mock scenario table (JSON) */
    const char* manifest_path;   /* for the annotation detector */
    const char* external_path;   /* for the external detector */
    privar_detector_config detector_config;
    privar_obfuscation_params obfuscation;
    int use_seed;                /* 0: per-frame hash of the frame id */
    int quality;                 /* capture + edge re-encode quality */
} privar_pipeline_config;

PRIVAR_API void privar_pipeline_config_init(privar_pipeline_config* config);

/* Single image through the local pipeline:
 * compress -> decode -> detect -> obfuscate -> re-encode -> assess. */
PRIVAR_API privar_status privar_assess_file(const char* image_path,
                                            const privar_pipeline_config* config,
                                            privar_assessment** out);

PRIVAR_API const char* privar_assessment_json(privar_assessment* assessment);
PRIVAR_API privar_status privar_assessment_from_json(const char* json,
                                                     privar_assessment** out);
PRIVAR_API int privar_assessment_risk(const privar_assessment* assessment);
PRIVAR_API void privar_assessment_free(privar_assessment* assessment);

/* ---- services --------------------------------------------------------------- */

typedef struct privar_server privar_server;

typedef struct privar_cloud_config {
    const char* host;            /* default 127.0.0.1 */
    int port;                    /* 0: ephemeral */
    const char* backend;         /* mock | remote */
    const char* scenarios_path;
    int concurrency;
} privar_cloud_config;

PRIVAR_API void privar_cloud_config_init(privar_cloud_config* config);
PRIVAR_API privar_status privar_cloud_serve(const privar_cloud_config* config,
                                            privar_server** out);

typedef struct privar_edge_config {
    const char* host;
    int port;
    const char* cloud_url;       /* required */
    const char* detector;
    const char* manifest_path;
    const char* external_path;
    privar_detector_config detector_config;
    privar_obfuscation_params obfuscation;
    int use_seed;
    int quality;
    int concurrency;
    int cloud_timeout_s;         /* default 30 */
} privar_edge_config;

PRIVAR_API void privar_edge_config_init(privar_edge_config* config);
PRIVAR_API privar_status privar_edge_serve(const privar_edge_config* config,
                                           privar_server** out);

PRIVAR_API int privar_server_port(const privar_server* server);
PRIVAR_API void privar_server_stop(privar_server* server);

/* Device submission: compress at quality, POST to the edge, wait for the
 * assessment. No automatic retries. */
PRIVAR_API privar_status privar_submit(const char* image_path, const char* edge_url,
                                       int quality, privar_assessment** out);

/* ---- end-to-end run ----------------------------------------------------------- */

typedef struct privar_run_config {
    const char* input_dir;
    const char* out_dir;
    const char* edge_url;   /* empty/NULL: start in-process services */
    const char* cloud_url;
    const char* detector;
    const char* backend;
    const char* scenarios_path;
    const char* manifest_path;
    const char* external_path;
    privar_detector_config detector_config;
    privar_obfuscation_params obfuscation;
    int quality;
    int concurrency;
} privar_run_config;

PRIVAR_API void privar_run_config_init(privar_run_config* config);
PRIVAR_API privar_status privar_run(const privar_run_config* config, int* failures);

/* ---- evaluation ----------------------------------------------------------------- */

typedef struct privar_eval_config {
    const char* manifest_path;
    const char* out_dir;
    const char* mode;        /* privar | no-obfuscation | oracle-guided */
    const char* classifier;  /* privar | rule-based | object-recognition | caption */
    const char* backend;     /* mock | remote */
    const char* scenarios_path;
    const char* rules_path;
    const char* detections_path;
    const char* external_path;
    const char* ocr_original_path;
    const char* ocr_protected_path;
    const char* ocr_source;  /* transcript | external-file */
    const char* detector;
    privar_detector_config detector_config;
    privar_obfuscation_params obfuscation;
    int quality;
    double confidence_threshold;
    int workers;
    int leakage_extraction;
} privar_eval_config;

PRIVAR_API void privar_eval_config_init(privar_eval_config* config);
PRIVAR_API privar_status privar_evaluate(const privar_eval_config* config, int* failures);

/* ---- warnings ----------------------------------------------------------------------- */

/* 1 when the flash schedule is in an on-second at t, 0 when off, -1 on error. */
PRIVAR_API int privar_flash_visible(double t);

/* mode: center-screen | top-screen | region-overlay. Writes numbered PNGs
 * plus frames.json under out_dir. */
PRIVAR_API privar_status privar_render_warnings(const char* frame_path,
                                                const char* assessment_json, const char* mode,
                                                double fps, const char* out_dir,
                                                size_t* frame_count);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PRIVAR_H */
