#include "backend.hpp"

#include <algorithm>
#include <cctype>

#include <nlohmann/json.hpp>

#include "codec.hpp"
#include "errors.hpp"
#include "prompts.hpp"

namespace privar {

namespace {

using nlohmann::json;

std::string lowercase(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

ScenarioTable ScenarioTable::load(const std::string& path) {
    const auto bytes = read_file(path);
    return from_json_text(std::string(bytes.begin(), bytes.end()), path);
}

ScenarioTable ScenarioTable::from_json_text(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("scenario table " + origin + " is not valid JSON: " + e.what(), "");
    }
    ScenarioTable table;
    try {
        for (const json& j : doc) {
            MockScenario s;
            s.fingerprint = parse_fingerprint_hex(j.at("fingerprint").get<std::string>());
            s.scene = j.at("scene").get<std::string>();
            s.topic = j.at("topic").get<std::string>();
            s.risk = j.at("risk").get<bool>();
            const json& rationales = j.at("rationales");
            s.scene_rationale = rationales.at("scene").get<std::string>();
            s.risk_rationale = rationales.at("risk").get<std::string>();
            table.add(s);
        }
    } catch (const json::exception& e) {
        throw ParseError("scenario table " + origin + " has invalid structure: " + e.what(),
                         "");
    }
    return table;
}

void ScenarioTable::add(const MockScenario& scenario) {
    if (!scenarios_.emplace(scenario.fingerprint, scenario).second) {
        throw InvalidArgumentError("duplicate scenario fingerprint " +
                                   fingerprint_hex(scenario.fingerprint));
    }
}

const MockScenario& ScenarioTable::lookup(std::uint64_t fingerprint) const {
    auto it = scenarios_.find(fingerprint);
    if (it == scenarios_.end()) {
        throw MissingError("no scenario for fingerprint " + fingerprint_hex(fingerprint));
    }
    return it->second;
}

bool ScenarioTable::contains(std::uint64_t fingerprint) const {
    return scenarios_.count(fingerprint) > 0;
}

std::string ScenarioTable::to_json_text() const {
    json arr = json::array();
    for (const auto& [fp, s] : scenarios_) {
        arr.push_back(json{{"fingerprint", fingerprint_hex(fp)},
                           {"scene", s.scene},
                           {"topic", s.topic},
                           {"risk", s.risk},
                           {"rationales",
                            json{{"scene", s.scene_rationale}, {"risk", s.risk_rationale}}}});
    }
    return arr.dump(2) + "\n";
}

void ScenarioTable::save(const std::string& path) const {
    write_file(path, to_json_text());
}

MockVlmBackend::MockVlmBackend(ScenarioTable table) : table_(std::move(table)) {}

const std::vector<std::string>& MockVlmBackend::sensitive_keywords() {
    static const std::vector<std::string> keywords = {
        "id card",   "credit card", "password",   "ssn",    "social security",
        "medical",   "transcript",  "agenda",     "account", "license",
        "passport",  "diagnosis",   "salary"};
    return keywords;
}

std::string MockVlmBackend::complete(const VlmRequest& request) {
    const std::string& prompt = request.prompt;
    const auto has_header = [&](const char* version, const char* stage) {
        return prompt.rfind(std::string("[") + version + "/" + stage + "]", 0) == 0;
    };

    if (has_header(kCaptionPromptVersion, "classify")) {
        // Text-only path: keyword scan over the embedded caption.
        const std::string lowered = lowercase(prompt);
        for (const std::string& kw : sensitive_keywords()) {
            if (lowered.find(kw) != std::string::npos) {
                return "RISK: YES - caption mentions " + kw;
            }
        }
        return "RISK: NO - caption names nothing sensitive";
    }

    if (!request.image_png) {
        throw MissingError("mock backend needs an attached image for prompt \"" +
                           prompt.substr(0, 40) + "\"");
    }
    const Image image = decode_png(request.image_png->data(), request.image_png->size());
    const MockScenario& s = table_.lookup(fingerprint(image));

    if (has_header(kCotPromptVersion, "scene")) {
        return "SCENE: " + s.scene + " - " + s.scene_rationale;
    }
    if (has_header(kCotPromptVersion, "topic")) {
        return s.topic;
    }
    if (has_header(kCotPromptVersion, "risk")) {
        return std::string("RISK: ") + (s.risk ? "YES" : "NO") + " - " + s.risk_rationale;
    }
    if (has_header(kCaptionPromptVersion, "caption")) {
        return "A " + s.scene + " scene containing " + s.topic + ".";
    }
    throw ParseError("mock backend cannot identify the prompt template", prompt.substr(0, 60));
}

std::vector<std::string> MockVlmBackend::extract_sensitive_items(const Image& image) const {
    const MockScenario& s = table_.lookup(fingerprint(image));
    if (!s.risk) return {};
    return {s.topic};
}

RemoteBackendConfig remote_config_from_env() {
    RemoteBackendConfig config;
    if (const char* url = std::getenv("PRIVAR_VLM_URL")) config.url = url;
    if (const char* model = std::getenv("PRIVAR_VLM_MODEL")) config.model = model;
    if (const char* key = std::getenv("PRIVAR_VLM_KEY")) config.api_key = key;
    return config;
}

}  // namespace privar
