#pragma once


#include <string>
#include <vector>

#include "backend.hpp"
#include "geometry.hpp"
#include "image.hpp"

namespace privar {

// Output of the three-stage assessment for one frame.
struct RiskAssessment {
    std::string frame_id;
    std::string scene_label;
    std::string scene_rationale;
    std::string topic_inference;
    bool risk = false;
    std::string risk_rationale;
    std::vector<BoundingBox> regions;  // echo of the obfuscated regions
    std::string backend_id;

    bool operator==(const RiskAssessment&) const = default;
};

std::string assessment_to_json(const RiskAssessment& assessment);
RiskAssessment assessment_from_json(const std::string& text);

// Runs the three chain-of-thought stages strictly in order, feeding each
// stage's output into the next, and parses the final verdict. The caller
// guarantees the image is already obfuscated; this module never sees raw
// frames. Backend failures surface as TransportError, unparseable stage
// outputs as ParseError carrying the raw text (never silently defaulted).
RiskAssessment assess(const std::string& frame_id, const Image& obfuscated_image,
                      const std::vector<BoundingBox>& boxes, VlmBackend& backend);

}  // namespace privar
