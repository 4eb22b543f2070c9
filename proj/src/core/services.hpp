#pragma once


#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "backend.hpp"
#include "errors.hpp"
#include "pipeline.hpp"
#include "risk.hpp"

namespace privar {

// Device -> edge submission. image_data is base64 of a JPEG or PNG container.
struct FrameEnvelope {
    std::string frame_id;
    std::string captured_at;  // UTC timestamp, informational only
    std::string format;       // "jpeg" | "png"
    std::string image_data;   // base64
    int quality = 75;         // quality used at capture
};

// Edge -> cloud request. The cloud refuses requests whose
// obfuscation_applied marker is false.
struct AssessRequest {
    std::string frame_id;
    std::string obfuscated_image;  // base64 JPEG
    std::vector<BoundingBox> boxes;
    bool obfuscation_applied = false;
    double sigma = 0.0;  // params echo (seed intentionally omitted)
    double beta = 0.0;
    int pad = 0;
};

struct AssessResponse {
    RiskAssessment assessment;
    double edge_ms = 0.0;
    double cloud_ms = 0.0;
};

std::string envelope_to_json(const FrameEnvelope& envelope);
FrameEnvelope envelope_from_json(const std::string& text);
std::string assess_request_to_json(const AssessRequest& request);
AssessRequest assess_request_from_json(const std::string& text);
std::string assess_response_to_json(const AssessResponse& response);
AssessResponse assess_response_from_json(const std::string& text);

// Service-level failure: carries the HTTP-class status used on the wire.
class ServiceError : public Error {
public:
    ServiceError(int http_status, ErrorCode code, const std::string& message)
        : Error(code, message), http_status_(http_status) {}
    int http_status() const { return http_status_; }

private:
    int http_status_;
};

// ---- cloud tier -------------------------------------------------------------

class CloudCore {
public:
    explicit CloudCore(VlmBackend& backend) : backend_(backend) {}

    // Validates the contract (obfuscation marker, box bounds), runs the
    // three-stage assessment, fills in cloud_ms.
    AssessResponse handle(const AssessRequest& request) const;

private:
    VlmBackend& backend_;
};

// Transport used by the edge to reach the cloud. Pluggable so integration
// tests can tap or short-circuit the hop.
class CloudClient {
public:
    virtual ~CloudClient() = default;
    virtual AssessResponse assess(const AssessRequest& request) = 0;
};

class LocalCloudClient : public CloudClient {
public:
    explicit LocalCloudClient(const CloudCore& core) : core_(core) {}
    AssessResponse assess(const AssessRequest& request) override { return core_.handle(request); }

private:
    const CloudCore& core_;
};

class HttpCloudClient : public CloudClient {
public:
    explicit HttpCloudClient(std::string base_url, int timeout_s = 30);
    AssessResponse assess(const AssessRequest& request) override;

private:
    std::string base_url_;
    int timeout_s_;
};

// Records every request on its way through; the privacy-boundary tests use
// this to inspect exactly what would cross to the cloud.
class TappedCloudClient : public CloudClient {
public:
    explicit TappedCloudClient(CloudClient& inner) : inner_(inner) {}
    AssessResponse assess(const AssessRequest& request) override {
        requests_.push_back(request);
        return inner_.assess(request);
    }
    const std::vector<AssessRequest>& requests() const { return requests_; }

private:
    CloudClient& inner_;
    std::vector<AssessRequest> requests_;
};

// ---- edge tier --------------------------------------------------------------

class EdgeCore {
public:
    EdgeCore(EdgeParams params, CloudClient& cloud) : params_(std::move(params)), cloud_(cloud) {}

    // decode -> detect -> obfuscate -> forward. The raw frame is never
    // persisted and never forwarded.
    AssessResponse handle(const FrameEnvelope& envelope) const;

private:
    const EdgeParams params_;
    CloudClient& cloud_;
};

// ---- HTTP servers -----------------------------------------------------------

// Endpoints: POST /v1/assess, GET /v1/health (cloud);
//            POST /v1/frames, GET /v1/health (edge).
class HttpServer {
public:
    ~HttpServer();

    // port 0 binds an ephemeral port; the bound port is available afterwards.
    static std::unique_ptr<HttpServer> serve_cloud(const CloudCore& core, const std::string& host,
                                                   int port, int concurrency = 8);
    static std::unique_ptr<HttpServer> serve_edge(const EdgeCore& core, const std::string& host,
                                                  int port, int concurrency = 8);

    int port() const { return port_; }
    std::string base_url() const;
    void stop();

    struct Impl;

private:
    HttpServer() = default;
    std::unique_ptr<Impl> impl_;
    std::string host_;
    int port_ = 0;
};

// ---- device tier ------------------------------------------------------------

// load -> compress at quality -> wrap in an envelope -> POST to the edge.
// No automatic retries: a stale privacy verdict is worse than a visible
// failure. frame_id defaults to the file stem.
AssessResponse device_submit(const std::string& image_path, const std::string& edge_url,
                             int quality, const std::string& frame_id = "", int timeout_s = 35);

AssessResponse device_submit_envelope(const FrameEnvelope& envelope, const std::string& edge_url,
                                      int timeout_s = 35);

std::string frame_id_from_path(const std::string& image_path);

}  // namespace privar
