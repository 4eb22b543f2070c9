#include "risk.hpp"

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "prompts.hpp"

namespace privar {

namespace {
using nlohmann::json;
}

std::string assessment_to_json(const RiskAssessment& a) {
    json regions = json::array();
    for (const BoundingBox& b : a.regions) {
        regions.push_back(json{{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}});
    }
    return json{{"frame_id", a.frame_id},
                {"scene_label", a.scene_label},
                {"scene_rationale", a.scene_rationale},
                {"topic_inference", a.topic_inference},
                {"risk", a.risk},
                {"risk_rationale", a.risk_rationale},
                {"regions", std::move(regions)},
                {"backend_id", a.backend_id}}
        .dump(2);
}

RiskAssessment assessment_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("assessment is not valid JSON: ") + e.what(), text);
    }
    RiskAssessment a;
    try {
        a.frame_id = j.at("frame_id").get<std::string>();
        a.scene_label = j.at("scene_label").get<std::string>();
        a.scene_rationale = j.at("scene_rationale").get<std::string>();
        a.topic_inference = j.at("topic_inference").get<std::string>();
        a.risk = j.at("risk").get<bool>();
        a.risk_rationale = j.at("risk_rationale").get<std::string>();
        a.backend_id = j.at("backend_id").get<std::string>();
        for (const json& bj : j.at("regions")) {
            a.regions.push_back(BoundingBox{bj.at("x").get<int>(), bj.at("y").get<int>(),
                                            bj.at("w").get<int>(), bj.at("h").get<int>()});
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("assessment JSON has invalid structure: ") + e.what(),
                         text);
    }
    return a;
}

RiskAssessment assess(const std::string& frame_id, const Image& obfuscated_image,
                      const std::vector<BoundingBox>& boxes, VlmBackend& backend) {
    require_valid(obfuscated_image);

    const CotStagePrompt scene_prompt = build_scene_prompt(obfuscated_image);
    const std::string scene_output =
        backend.complete(VlmRequest{scene_prompt.instruction_text, scene_prompt.attached_image});
    const auto [scene_label, scene_rationale] = parse_scene(scene_output);

    const CotStagePrompt topic_prompt =
        build_topic_prompt(obfuscated_image, boxes, scene_output);
    const std::string topic_output =
        backend.complete(VlmRequest{topic_prompt.instruction_text, topic_prompt.attached_image});
    if (topic_output.empty()) {
        throw ParseError("topic stage returned empty output", topic_output);
    }

    const CotStagePrompt risk_prompt =
        build_risk_prompt(obfuscated_image, scene_output, topic_output);
    const std::string risk_output =
        backend.complete(VlmRequest{risk_prompt.instruction_text, risk_prompt.attached_image});
    const auto [risk, risk_rationale] = parse_verdict(risk_output);

    RiskAssessment a;
    a.frame_id = frame_id;
    a.scene_label = scene_label;
    a.scene_rationale = scene_rationale;
    a.topic_inference = topic_output;
    a.risk = risk;
    a.risk_rationale = risk_rationale;
    a.regions = boxes;
    a.backend_id = backend.id();
    return a;
}

}  // namespace privar
