#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "detect.hpp"
#include "geometry.hpp"
#include "image.hpp"
#include "imaging.hpp"

namespace privar {

enum class DetectorChoice { heuristic, annotation, external_file };

DetectorChoice detector_choice_from_string(const std::string& name);
const char* to_string(DetectorChoice choice);

// Everything the edge needs to turn a decoded frame into the wire payload.
// annotations/external must be set when the matching detector is selected.
struct EdgeParams {
    DetectorChoice detector = DetectorChoice::heuristic;
    DetectorConfig detector_config;
    ObfuscationParams obfuscation;
    std::optional<std::uint64_t> seed_override;  // nullopt: hash of frame_id
    int quality = 75;                            // re-encode quality
    const DatasetManifest* annotations = nullptr;
    const DetectionSidecar* external = nullptr;
    bool obfuscation_enabled = true;  // false only in the ablation mode
};

struct EdgeResult {
    BoxSet boxes;
    Image obfuscated;                     // pixels after masked blur+warp
    std::vector<std::uint8_t> wire_jpeg;  // what actually leaves the edge
};

// The full edge chain shared by the HTTP service and the local evaluation
// harness: detect on the decoded frame, obfuscate with the per-frame seed,
// re-encode for the cloud hop. Deterministic in (image, frame_id, params).
EdgeResult edge_process(const Image& frame, const std::string& frame_id,
                        const EdgeParams& params);

std::uint64_t per_frame_seed(const std::string& frame_id, const EdgeParams& params);

// The device-side capture step: lossy compression at the given quality.
// compress/decompress round-trips preserve dimensions and channels.
std::vector<std::uint8_t> compress(const Image& image, int quality);
Image decompress(const std::vector<std::uint8_t>& bytes);

}  // namespace privar
