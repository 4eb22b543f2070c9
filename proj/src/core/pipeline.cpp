#include "pipeline.hpp"

#include "codec.hpp"
#include "errors.hpp"

namespace privar {

DetectorChoice detector_choice_from_string(const std::string& name) {
    if (name == "heuristic") return DetectorChoice::heuristic;
    if (name == "annotation") return DetectorChoice::annotation;
    if (name == "external") return DetectorChoice::external_file;
    throw InvalidArgumentError("unknown detector \"" + name +
                               "\" (expected heuristic, annotation or external)");
}

const char* to_string(DetectorChoice choice) {
    switch (choice) {
        case DetectorChoice::heuristic: return "heuristic";
        case DetectorChoice::annotation: return "annotation";
        case DetectorChoice::external_file: return "external";
    }
    return "heuristic";
}

std::uint64_t per_frame_seed(const std::string& frame_id, const EdgeParams& params) {
    return params.seed_override ? *params.seed_override : hash64(frame_id);
}

namespace {

BoxSet select_boxes(const Image& frame, const std::string& frame_id, const EdgeParams& params) {
    switch (params.detector) {
        case DetectorChoice::heuristic:
            return detect_heuristic_tagged(frame, params.detector_config);
        case DetectorChoice::annotation: {
            if (params.annotations == nullptr) {
                throw InvalidArgumentError(
                    "annotation detector selected but no manifest configured");
            }
            for (const DatasetItem& item : params.annotations->items) {
                if (item.id == frame_id) {
                    return load_annotated_boxes(item, frame.width, frame.height);
                }
            }
            throw MissingError("no manifest item for frame " + frame_id);
        }
        case DetectorChoice::external_file: {
            if (params.external == nullptr) {
                throw InvalidArgumentError(
                    "external detector selected but no detection sidecar configured");
            }
            BoxSet set;
            set.source = DetectionSource{DetectionKind::external_file,
                                         params.external->origin()};
            for (BoundingBox box : params.external->boxes_for(frame_id)) {
                if (clamp_to_bounds(box, frame.width, frame.height)) set.boxes.push_back(box);
            }
            return set;
        }
    }
    throw InvalidArgumentError("unhandled detector choice");
}

}  // namespace

EdgeResult edge_process(const Image& frame, const std::string& frame_id,
                        const EdgeParams& params) {
    require_valid(frame);
    require_valid(params.obfuscation);
    if (params.quality < 1 || params.quality > 100) {
        throw InvalidArgumentError("edge re-encode quality must be in 1..100, got " +
                                   std::to_string(params.quality));
    }

    EdgeResult result;
    result.boxes = select_boxes(frame, frame_id, params);

    if (params.obfuscation_enabled) {
        ObfuscationParams obf = params.obfuscation;
        obf.seed = per_frame_seed(frame_id, params);
        result.obfuscated = obfuscate(frame, result.boxes.boxes, obf);
    } else {
        result.obfuscated = frame;
    }
    result.wire_jpeg = encode_jpeg(result.obfuscated, params.quality);
    return result;
}

std::vector<std::uint8_t> compress(const Image& image, int quality) {
    return encode_jpeg(image, quality);
}

Image decompress(const std::vector<std::uint8_t>& bytes) {
    return decode_jpeg(bytes.data(), bytes.size());
}

}  // namespace privar
