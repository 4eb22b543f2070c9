#pragma once


#include <array>
#include <optional>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "image.hpp"

namespace privar {

// Versioned template id; embedded as the first line of every prompt so
// backends (and the deterministic mock) can identify the requesting stage.
inline constexpr char kCotPromptVersion[] = "privar-cot-v1";
inline constexpr char kCaptionPromptVersion[] = "privar-caption-v1";

enum class CotStage { scene, topic, risk };

const char* to_string(CotStage stage);

// One staged request: instruction text, optionally the (already obfuscated)
// frame encoded as PNG, and the verbatim outputs of earlier stages.
struct CotStagePrompt {
    CotStage stage = CotStage::scene;
    std::string instruction_text;
    std::optional<std::vector<std::uint8_t>> attached_image;
    std::vector<std::string> prior_stage_outputs;
};

// Relative region descriptors (position and size as percentages), one line
// per box; resolution independent.
std::string describe_regions(const std::vector<BoundingBox>& boxes, int width, int height);

CotStagePrompt build_scene_prompt(const Image& obfuscated);
CotStagePrompt build_topic_prompt(const Image& obfuscated, const std::vector<BoundingBox>& boxes,
                                  const std::string& scene_output);
CotStagePrompt build_risk_prompt(const Image& obfuscated, const std::string& scene_output,
                                 const std::string& topic_output);

// All three stages at once; stage outputs not yet known may be left empty.
std::array<CotStagePrompt, 3> build_cot_prompts(const Image& obfuscated,
                                                const std::vector<BoundingBox>& boxes,
                                                const std::string& scene_output = "",
                                                const std::string& topic_output = "");

// Caption-baseline templates: an image caption request and a text-only
// classification over that caption.
std::string build_caption_prompt();
std::string build_caption_classify_prompt(const std::string& caption);

// Stage-1 output grammar: `SCENE: <label> - <rationale>`.
std::pair<std::string, std::string> parse_scene(const std::string& raw_text);

// Stage-3 output grammar: leading `RISK: YES|NO`, remainder is the rationale.
// Raises ParseError (carrying the raw text) when the token is absent.
std::pair<bool, std::string> parse_verdict(const std::string& raw_text);

}  // namespace privar
