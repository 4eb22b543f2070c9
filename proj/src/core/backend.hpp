#pragma once


#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "image.hpp"

namespace privar {

// One completion request to a vision/text model: prompt text plus an
// optional attached image (PNG bytes).
struct VlmRequest {
    std::string prompt;
    std::optional<std::vector<std::uint8_t>> image_png;
};

class VlmBackend {
public:
    virtual ~VlmBackend() = default;
    virtual std::string complete(const VlmRequest& request) = 0;
    virtual std::string id() const = 0;
};

// Recorded staged responses for one image, keyed by its content fingerprint.
struct MockScenario {
    std::uint64_t fingerprint = 0;
    std::string scene;            // environment label
    std::string scene_rationale;  // evidence sentence
    std::string topic;            // inferred text topic
    bool risk = false;
    std::string risk_rationale;
};

class ScenarioTable {
public:
    static ScenarioTable load(const std::string& path);
    static ScenarioTable from_json_text(const std::string& text, const std::string& origin);

    void add(const MockScenario& scenario);  // duplicate fingerprints rejected
    // Exact fingerprint match; a miss raises MissingError naming the
    // fingerprint (no fuzzy fallback).
    const MockScenario& lookup(std::uint64_t fingerprint) const;
    bool contains(std::uint64_t fingerprint) const;
    std::size_t size() const { return scenarios_.size(); }

    std::string to_json_text() const;
    void save(const std::string& path) const;

private:
    std::map<std::uint64_t, MockScenario> scenarios_;
};

// Deterministic offline backend. The attached image's fingerprint selects a
// scenario; the prompt's version header selects which staged answer to
// synthesize. Text-only caption classification falls back to a fixed
// sensitive-keyword list.
class MockVlmBackend : public VlmBackend {
public:
    explicit MockVlmBackend(ScenarioTable table);

    std::string complete(const VlmRequest& request) override;
    std::string id() const override { return "mock"; }

    const ScenarioTable& table() const { return table_; }

    // Keywords that flip the text-only caption classifier to YES.
    static const std::vector<std::string>& sensitive_keywords();

    // Items the mock "recovers" from an image: the scenario topic when the
    // scenario is risky, nothing otherwise. Used for leakage extraction.
    std::vector<std::string> extract_sensitive_items(const Image& image) const;

private:
    ScenarioTable table_;
};

struct RemoteBackendConfig {
    std::string url;    // e.g. http://host:port/v1/complete
    std::string model;  // model id sent with every request
    std::string api_key;
    int timeout_s = 30;
    int max_in_flight = 4;
    std::string transcript_path;  // empty = no transcript logging
};

// Reads PRIVAR_VLM_URL, PRIVAR_VLM_MODEL, PRIVAR_VLM_KEY.
RemoteBackendConfig remote_config_from_env();

// HTTP adapter: POST {model, prompt, image_base64?} -> {text}. Transcripts
// are appended verbatim as JSON lines when transcript_path is set.
class RemoteVlmBackend : public VlmBackend {
public:
    explicit RemoteVlmBackend(RemoteBackendConfig config);
    ~RemoteVlmBackend() override;

    std::string complete(const VlmRequest& request) override;
    std::string id() const override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace privar
