#include <fstream>
#include <mutex>
#include <semaphore>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "backend.hpp"
#include "base64.hpp"
#include "codec.hpp"
#include "errors.hpp"

namespace privar {

namespace {
using nlohmann::json;
}

struct RemoteVlmBackend::Impl {
    RemoteBackendConfig config;
    std::string host;
    std::string path;
    std::counting_semaphore<64> slots;
    std::mutex transcript_mutex;

    explicit Impl(RemoteBackendConfig cfg)
        : config(std::move(cfg)), slots(std::max(1, std::min(64, config.max_in_flight))) {
        // Split http://host:port/route into client target and request path.
        const std::string& url = config.url;
        const std::size_t scheme = url.find("://");
        if (url.empty() || scheme == std::string::npos) {
            throw InvalidArgumentError("remote backend URL must look like http://host[:port]/path, got \"" +
                                       url + "\"");
        }
        const std::size_t slash = url.find('/', scheme + 3);
        host = slash == std::string::npos ? url : url.substr(0, slash);
        path = slash == std::string::npos ? "/" : url.substr(slash);
    }

    void log_transcript(const std::string& prompt, const std::string& response) {
        if (config.transcript_path.empty()) return;
        const std::string line =
            json{{"model", config.model}, {"prompt", prompt}, {"response", response}}.dump() +
            "\n";
        std::lock_guard<std::mutex> lock(transcript_mutex);
        std::ofstream out(config.transcript_path, std::ios::app | std::ios::binary);
        if (out) out << line;
    }
};

RemoteVlmBackend::RemoteVlmBackend(RemoteBackendConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

RemoteVlmBackend::~RemoteVlmBackend() = default;

std::string RemoteVlmBackend::id() const { return "remote:" + impl_->config.model; }

std::string RemoteVlmBackend::complete(const VlmRequest& request) {
    impl_->slots.acquire();
    struct Release {
        std::counting_semaphore<64>& s;
        ~Release() { s.release(); }
    } release{impl_->slots};

    json body{{"model", impl_->config.model}, {"prompt", request.prompt}};
    if (request.image_png) {
        body["image_base64"] = base64_encode(request.image_png->data(),
                                             request.image_png->size());
    }

    httplib::Client client(impl_->host);
    client.set_connection_timeout(impl_->config.timeout_s, 0);
    client.set_read_timeout(impl_->config.timeout_s, 0);
    httplib::Headers headers;
    if (!impl_->config.api_key.empty()) {
        headers.emplace("Authorization", "Bearer " + impl_->config.api_key);
    }

    const auto result = client.Post(impl_->path, headers, body.dump(), "application/json");
    if (!result) {
        throw TransportError("VLM backend unreachable at " + impl_->config.url + ": " +
                             httplib::to_string(result.error()));
    }
    if (result->status != 200) {
        throw TransportError("VLM backend returned HTTP " + std::to_string(result->status) +
                             ": " + result->body);
    }
    std::string text;
    try {
        text = json::parse(result->body).at("text").get<std::string>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("VLM backend response is not {\"text\": ...}: ") +
                             e.what(),
                         result->body);
    }
    impl_->log_transcript(request.prompt, text);
    return text;
}

}  // namespace privar
