#include "prompts.hpp"

#include <cmath>
#include <cstdio>

#include "codec.hpp"
#include "errors.hpp"

namespace privar {

namespace {

std::string pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f%%", v);
    return buf;
}

std::string stage_header(const char* version, const char* stage) {
    return std::string("[") + version + "/" + stage + "]\n";
}

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Strips a leading separator run ("-", em/en dash bytes, ":", whitespace).
std::string strip_separator(std::string s) {
    s = trim(s);
    static const std::vector<std::string> seps = {"\xE2\x80\x94", "\xE2\x80\x93", "-", ":",
                                                  "."};
    bool again = true;
    while (again) {
        again = false;
        for (const std::string& sep : seps) {
            if (s.rfind(sep, 0) == 0) {
                s = trim(s.substr(sep.size()));
                again = true;
            }
        }
    }
    return s;
}

}  // namespace

const char* to_string(CotStage stage) {
    switch (stage) {
        case CotStage::scene: return "scene";
        case CotStage::topic: return "topic";
        case CotStage::risk: return "risk";
    }
    return "scene";
}

std::string describe_regions(const std::vector<BoundingBox>& boxes, int width, int height) {
    if (width <= 0 || height <= 0) {
        throw InvalidArgumentError("region descriptors need positive image dimensions");
    }
    std::string out;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        const BoundingBox& b = boxes[i];
        const double cx = 100.0 * (b.x + b.w / 2.0) / width;
        const double cy = 100.0 * (b.y + b.h / 2.0) / height;
        const double rw = 100.0 * b.w / width;
        const double rh = 100.0 * b.h / height;
        out += "region " + std::to_string(i + 1) + ": center at (" + pct(cx) + " across, " +
               pct(cy) + " down), size " + pct(rw) + " x " + pct(rh) + " of the image\n";
    }
    return out;
}

CotStagePrompt build_scene_prompt(const Image& obfuscated) {
    CotStagePrompt prompt;
    prompt.stage = CotStage::scene;
    prompt.instruction_text =
        stage_header(kCotPromptVersion, "scene") +
        "You are looking at a frame captured by an augmented reality headset. Text regions in "
        "the frame have been obfuscated before you received it.\n"
        "Classify the environment shown in the frame (for example: office, living room, "
        "bedroom, café) and name the visual evidence.\n"
        "Answer in one line of the form:\n"
        "SCENE: <environment label> - <short description of the evidence>";
    prompt.attached_image = encode_png(obfuscated);
    return prompt;
}

CotStagePrompt build_topic_prompt(const Image& obfuscated, const std::vector<BoundingBox>& boxes,
                                  const std::string& scene_output) {
    CotStagePrompt prompt;
    prompt.stage = CotStage::topic;
    std::string body = stage_header(kCotPromptVersion, "topic");
    body += "Scene context from the previous step:\n" + scene_output + "\n\n";
    if (boxes.empty()) {
        body +=
            "No text regions were detected in this frame, so no text was obfuscated.\n"
            "State what written content, if any, such an environment would plausibly "
            "contain.\n";
    } else {
        body += "The frame contains " + std::to_string(boxes.size()) +
                " obfuscated text region(s):\n" +
                describe_regions(boxes, obfuscated.width, obfuscated.height);
        body +=
            "\nUsing the scene context and the visual surroundings of each region (surface, "
            "object it is attached to, layout), infer the likely topic of the obfuscated "
            "text. Answer with one short sentence naming the most plausible topic.\n";
    }
    prompt.instruction_text = std::move(body);
    prompt.attached_image = encode_png(obfuscated);
    prompt.prior_stage_outputs = {scene_output};
    return prompt;
}

CotStagePrompt build_risk_prompt(const Image& obfuscated, const std::string& scene_output,
                                 const std::string& topic_output) {
    CotStagePrompt prompt;
    prompt.stage = CotStage::risk;
    prompt.instruction_text =
        stage_header(kCotPromptVersion, "risk") +
        "Scene context from step 1:\n" + scene_output + "\n\n" +
        "Likely text topic from step 2:\n" + topic_output + "\n\n" +
        "Combining the environment and the inferred text topic, decide whether capturing "
        "this frame exposes private information.\n"
        "Answer in one line of the form:\n"
        "RISK: YES - <short rationale>  |  RISK: NO - <short rationale>";
    prompt.attached_image = encode_png(obfuscated);
    prompt.prior_stage_outputs = {scene_output, topic_output};
    return prompt;
}

std::array<CotStagePrompt, 3> build_cot_prompts(const Image& obfuscated,
                                                const std::vector<BoundingBox>& boxes,
                                                const std::string& scene_output,
                                                const std::string& topic_output) {
    return {build_scene_prompt(obfuscated),
            build_topic_prompt(obfuscated, boxes, scene_output),
            build_risk_prompt(obfuscated, scene_output, topic_output)};
}

std::string build_caption_prompt() {
    return stage_header(kCaptionPromptVersion, "caption") +
           "Describe this frame in one comprehensive sentence, covering the environment and "
           "every visible object.";
}

std::string build_caption_classify_prompt(const std::string& caption) {
    return stage_header(kCaptionPromptVersion, "classify") +
           "A frame from an augmented reality headset was captioned as follows:\n" + caption +
           "\n\nBased only on this caption, decide whether the frame exposes private "
           "information.\n"
           "Answer in one line of the form:\n"
           "RISK: YES - <short rationale>  |  RISK: NO - <short rationale>";
}

std::pair<std::string, std::string> parse_scene(const std::string& raw_text) {
    const std::string text = trim(raw_text);
    if (text.empty()) throw ParseError("empty scene output", raw_text);
    if (text.rfind("SCENE:", 0) != 0) {
        throw ParseError("scene output lacks the SCENE: token", raw_text);
    }
    std::string rest = trim(text.substr(6));
    // Label runs up to the first separator; the remainder is the rationale.
    std::size_t sep = std::string::npos;
    for (const std::string& cand : {std::string("\xE2\x80\x94"), std::string(" - ")}) {
        const std::size_t p = rest.find(cand);
        if (p != std::string::npos && p < sep) sep = p;
    }
    if (sep == std::string::npos) return {rest, ""};
    const std::string label = trim(rest.substr(0, sep));
    const std::string rationale = strip_separator(rest.substr(sep));
    if (label.empty()) throw ParseError("scene output has empty label", raw_text);
    return {label, rationale};
}

std::pair<bool, std::string> parse_verdict(const std::string& raw_text) {
    const std::string text = trim(raw_text);
    if (text.empty()) throw ParseError("empty verdict output", raw_text);
    if (text.rfind("RISK:", 0) != 0) {
        throw ParseError("verdict lacks the RISK: token", raw_text);
    }
    std::string rest = trim(text.substr(5));
    bool risk = false;
    if (rest.rfind("YES", 0) == 0) {
        risk = true;
        rest = rest.substr(3);
    } else if (rest.rfind("NO", 0) == 0) {
        risk = false;
        rest = rest.substr(2);
    } else {
        throw ParseError("verdict token must be RISK: YES or RISK: NO", raw_text);
    }
    return {risk, strip_separator(rest)};
}

}  // namespace privar
