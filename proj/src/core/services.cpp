#include "services.hpp"

#include <chrono>
#include <filesystem>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "base64.hpp"
#include "codec.hpp"
#include "errors.hpp"

namespace privar {

namespace {

using nlohmann::json;

double elapsed_ms(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

json boxes_to_json(const std::vector<BoundingBox>& boxes) {
    json arr = json::array();
    for (const BoundingBox& b : boxes) {
        arr.push_back(json{{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}});
    }
    return arr;
}

std::vector<BoundingBox> boxes_from_json(const json& arr) {
    std::vector<BoundingBox> boxes;
    for (const json& bj : arr) {
        boxes.push_back(BoundingBox{bj.at("x").get<int>(), bj.at("y").get<int>(),
                                    bj.at("w").get<int>(), bj.at("h").get<int>()});
    }
    return boxes;
}

[[noreturn]] void rethrow_as_parse(const char* what, const json::exception& e,
                                   const std::string& text) {
    throw ParseError(std::string(what) + ": " + e.what(), text.substr(0, 200));
}

}  // namespace

std::string envelope_to_json(const FrameEnvelope& e) {
    return json{{"frame_id", e.frame_id},
                {"captured_at", e.captured_at},
                {"format", e.format},
                {"image_data", e.image_data},
                {"quality", e.quality}}
        .dump();
}

FrameEnvelope envelope_from_json(const std::string& text) {
    FrameEnvelope e;
    try {
        const json j = json::parse(text);
        e.frame_id = j.at("frame_id").get<std::string>();
        e.captured_at = j.value("captured_at", "");
        e.format = j.at("format").get<std::string>();
        e.image_data = j.at("image_data").get<std::string>();
        e.quality = j.at("quality").get<int>();
    } catch (const json::exception& ex) {
        rethrow_as_parse("frame envelope JSON invalid", ex, text);
    }
    return e;
}

std::string assess_request_to_json(const AssessRequest& r) {
    return json{{"frame_id", r.frame_id},
                {"obfuscated_image", r.obfuscated_image},
                {"boxes", boxes_to_json(r.boxes)},
                {"obfuscation_applied", r.obfuscation_applied},
                {"params_echo", json{{"sigma", r.sigma}, {"beta", r.beta}, {"pad", r.pad}}}}
        .dump();
}

AssessRequest assess_request_from_json(const std::string& text) {
    AssessRequest r;
    try {
        const json j = json::parse(text);
        r.frame_id = j.at("frame_id").get<std::string>();
        r.obfuscated_image = j.at("obfuscated_image").get<std::string>();
        r.boxes = boxes_from_json(j.at("boxes"));
        r.obfuscation_applied = j.at("obfuscation_applied").get<bool>();
        const json& echo = j.at("params_echo");
        r.sigma = echo.at("sigma").get<double>();
        r.beta = echo.at("beta").get<double>();
        r.pad = echo.at("pad").get<int>();
    } catch (const json::exception& ex) {
        rethrow_as_parse("assess request JSON invalid", ex, text);
    }
    return r;
}

std::string assess_response_to_json(const AssessResponse& r) {
    const RiskAssessment& a = r.assessment;
    return json{{"frame_id", a.frame_id},
                {"scene_label", a.scene_label},
                {"scene_rationale", a.scene_rationale},
                {"topic_inference", a.topic_inference},
                {"risk", a.risk},
                {"risk_rationale", a.risk_rationale},
                {"regions", boxes_to_json(a.regions)},
                {"backend_id", a.backend_id},
                {"processing_ms", json{{"edge", r.edge_ms}, {"cloud", r.cloud_ms}}}}
        .dump();
}

AssessResponse assess_response_from_json(const std::string& text) {
    AssessResponse r;
    try {
        const json j = json::parse(text);
        r.assessment.frame_id = j.at("frame_id").get<std::string>();
        r.assessment.scene_label = j.at("scene_label").get<std::string>();
        r.assessment.scene_rationale = j.at("scene_rationale").get<std::string>();
        r.assessment.topic_inference = j.at("topic_inference").get<std::string>();
        r.assessment.risk = j.at("risk").get<bool>();
        r.assessment.risk_rationale = j.at("risk_rationale").get<std::string>();
        r.assessment.regions = boxes_from_json(j.at("regions"));
        r.assessment.backend_id = j.at("backend_id").get<std::string>();
        const json& ms = j.at("processing_ms");
        r.edge_ms = ms.at("edge").get<double>();
        r.cloud_ms = ms.at("cloud").get<double>();
    } catch (const json::exception& ex) {
        rethrow_as_parse("assess response JSON invalid", ex, text);
    }
    return r;
}

// ---- cloud ------------------------------------------------------------------

AssessResponse CloudCore::handle(const AssessRequest& request) const {
    const auto start = std::chrono::steady_clock::now();
    if (!request.obfuscation_applied) {
        throw ServiceError(422, ErrorCode::rejected, "unobfuscated frame refused");
    }
    if (request.frame_id.empty()) {
        throw ServiceError(422, ErrorCode::invalid_argument, "frame_id must be non-empty");
    }

    std::vector<std::uint8_t> bytes;
    try {
        bytes = base64_decode(request.obfuscated_image);
    } catch (const ParseError& e) {
        throw ServiceError(400, ErrorCode::parse,
                           std::string("obfuscated_image is not valid base64: ") + e.what());
    }
    Image image;
    try {
        image = decode_image(bytes.data(), bytes.size());
    } catch (const DecodeError& e) {
        throw ServiceError(400, ErrorCode::decode, e.what());
    }

    for (std::size_t i = 0; i < request.boxes.size(); ++i) {
        const BoundingBox& b = request.boxes[i];
        if (b.x < 0 || b.y < 0 || b.w <= 0 || b.h <= 0 || b.right() > image.width ||
            b.bottom() > image.height) {
            throw ServiceError(422, ErrorCode::invalid_argument,
                               "box " + std::to_string(i) + " overflows image bounds");
        }
    }

    AssessResponse response;
    try {
        response.assessment = assess(request.frame_id, image, request.boxes, backend_);
    } catch (const TransportError& e) {
        throw ServiceError(502, ErrorCode::transport,
                           std::string("backend failure during assessment: ") + e.what());
    } catch (const MissingError& e) {
        throw ServiceError(502, ErrorCode::missing,
                           std::string("backend failure during assessment: ") + e.what());
    } catch (const ParseError& e) {
        throw ServiceError(502, ErrorCode::parse,
                           std::string("backend output unparseable: ") + e.what());
    }
    response.cloud_ms = elapsed_ms(start);
    return response;
}

// ---- edge -------------------------------------------------------------------

AssessResponse EdgeCore::handle(const FrameEnvelope& envelope) const {
    const auto start = std::chrono::steady_clock::now();
    if (envelope.frame_id.empty()) {
        throw ServiceError(400, ErrorCode::invalid_argument, "frame_id must be non-empty");
    }
    if (envelope.format != "jpeg" && envelope.format != "png") {
        throw ServiceError(400, ErrorCode::invalid_argument,
                           "format must be jpeg or png, got \"" + envelope.format + "\"");
    }

    std::vector<std::uint8_t> bytes;
    try {
        bytes = base64_decode(envelope.image_data);
    } catch (const ParseError& e) {
        throw ServiceError(400, ErrorCode::parse,
                           std::string("image_data is not valid base64: ") + e.what());
    }
    Image frame;
    try {
        frame = decode_image(bytes.data(), bytes.size());
    } catch (const DecodeError& e) {
        throw ServiceError(400, ErrorCode::decode, e.what());
    }

    EdgeResult result;
    try {
        result = edge_process(frame, envelope.frame_id, params_);
    } catch (const ServiceError&) {
        throw;
    } catch (const Error& e) {
        throw ServiceError(500, ErrorCode::internal,
                           std::string("detector/obfuscation failure: ") + e.what());
    }

    AssessRequest request;
    request.frame_id = envelope.frame_id;
    request.obfuscated_image = base64_encode(result.wire_jpeg);
    request.boxes = result.boxes.boxes;
    request.obfuscation_applied = params_.obfuscation_enabled;
    request.sigma = params_.obfuscation.sigma;
    request.beta = params_.obfuscation.beta;
    request.pad = params_.obfuscation.pad;

    AssessResponse response;
    try {
        response = cloud_.assess(request);
    } catch (const ServiceError&) {
        throw;
    } catch (const TransportError& e) {
        throw ServiceError(504, ErrorCode::transport,
                           "cloud unavailable for frame " + envelope.frame_id + ": " +
                               e.what());
    }
    response.edge_ms = elapsed_ms(start);
    return response;
}

// ---- HTTP plumbing ----------------------------------------------------------

namespace {

struct WireError {
    int status;
    std::string body;
};

WireError wire_error(const std::exception& e, int fallback_status) {
    int status = fallback_status;
    std::string code = "internal";
    if (const auto* se = dynamic_cast<const ServiceError*>(&e)) {
        status = se->http_status();
        code = std::to_string(static_cast<int>(se->code()));
    } else if (const auto* pe = dynamic_cast<const Error*>(&e)) {
        code = std::to_string(static_cast<int>(pe->code()));
    }
    return WireError{status, json{{"error", e.what()}, {"code", code}}.dump()};
}

[[noreturn]] void throw_from_wire(int status, const std::string& body,
                                  const std::string& context) {
    std::string message = context + ": HTTP " + std::to_string(status);
    try {
        message += ": " + json::parse(body).at("error").get<std::string>();
    } catch (const json::exception&) {
        if (!body.empty()) message += ": " + body.substr(0, 200);
    }
    if (status == 422 && message.find("unobfuscated") != std::string::npos) {
        throw RejectedError(message);
    }
    if (status == 504 || status == 502) throw TransportError(message);
    if (status == 400 || status == 422) throw InvalidArgumentError(message);
    throw TransportError(message);
}

}  // namespace

HttpCloudClient::HttpCloudClient(std::string base_url, int timeout_s)
    : base_url_(std::move(base_url)), timeout_s_(timeout_s) {}

AssessResponse HttpCloudClient::assess(const AssessRequest& request) {
    httplib::Client client(base_url_);
    client.set_connection_timeout(timeout_s_, 0);
    client.set_read_timeout(timeout_s_, 0);
    const auto result =
        client.Post("/v1/assess", assess_request_to_json(request), "application/json");
    if (!result) {
        throw TransportError("cloud at " + base_url_ + " unreachable: " +
                             httplib::to_string(result.error()));
    }
    if (result->status != 200) {
        throw_from_wire(result->status, result->body, "cloud rejected frame " + request.frame_id);
    }
    return assess_response_from_json(result->body);
}

struct HttpServer::Impl {
    httplib::Server server;
    std::thread worker;
};

HttpServer::~HttpServer() { stop(); }

void HttpServer::stop() {
    if (impl_ && impl_->server.is_running()) {
        impl_->server.stop();
    }
    if (impl_ && impl_->worker.joinable()) {
        impl_->worker.join();
    }
}

std::string HttpServer::base_url() const {
    return "http://" + host_ + ":" + std::to_string(port_);
}

namespace {

void install_common_routes(httplib::Server& server) {
    server.Get("/v1/health", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(json{{"status", "ok"}}.dump(), "application/json");
    });
}

// Binds (ephemeral when port == 0), then serves on a background thread.
void start_listening(HttpServer::Impl& impl, const std::string& host, int& port) {
    if (port == 0) {
        port = impl.server.bind_to_any_port(host);
        if (port <= 0) throw TransportError("cannot bind ephemeral port on " + host);
    } else {
        if (!impl.server.bind_to_port(host, port)) {
            throw TransportError("cannot bind " + host + ":" + std::to_string(port));
        }
    }
    impl.worker = std::thread([&impl]() { impl.server.listen_after_bind(); });
    impl.server.wait_until_ready();
}

}  // namespace

std::unique_ptr<HttpServer> HttpServer::serve_cloud(const CloudCore& core,
                                                    const std::string& host, int port,
                                                    int concurrency) {
    auto server = std::unique_ptr<HttpServer>(new HttpServer());
    server->impl_ = std::make_unique<Impl>();
    server->host_ = host;
    server->port_ = port;

    httplib::Server& s = server->impl_->server;
    s.new_task_queue = [concurrency] { return new httplib::ThreadPool(std::max(1, concurrency)); };
    install_common_routes(s);
    s.Post("/v1/assess", [&core](const httplib::Request& req, httplib::Response& res) {
        try {
            const AssessRequest request = assess_request_from_json(req.body);
            const AssessResponse response = core.handle(request);
            res.set_content(assess_response_to_json(response), "application/json");
        } catch (const std::exception& e) {
            const WireError we = wire_error(e, 500);
            res.status = we.status;
            res.set_content(we.body, "application/json");
        }
    });

    start_listening(*server->impl_, server->host_, server->port_);
    return server;
}

std::unique_ptr<HttpServer> HttpServer::serve_edge(const EdgeCore& core, const std::string& host,
                                                   int port, int concurrency) {
    auto server = std::unique_ptr<HttpServer>(new HttpServer());
    server->impl_ = std::make_unique<Impl>();
    server->host_ = host;
    server->port_ = port;

    httplib::Server& s = server->impl_->server;
    s.new_task_queue = [concurrency] { return new httplib::ThreadPool(std::max(1, concurrency)); };
    install_common_routes(s);
    s.Post("/v1/frames", [&core](const httplib::Request& req, httplib::Response& res) {
        try {
            const FrameEnvelope envelope = envelope_from_json(req.body);
            const AssessResponse response = core.handle(envelope);
            res.set_content(assess_response_to_json(response), "application/json");
        } catch (const std::exception& e) {
            const WireError we = wire_error(e, 500);
            res.status = we.status;
            res.set_content(we.body, "application/json");
        }
    });

    start_listening(*server->impl_, server->host_, server->port_);
    return server;
}

// ---- device -----------------------------------------------------------------

std::string frame_id_from_path(const std::string& image_path) {
    return std::filesystem::path(image_path).stem().string();
}

AssessResponse device_submit_envelope(const FrameEnvelope& envelope, const std::string& edge_url,
                                      int timeout_s) {
    httplib::Client client(edge_url);
    client.set_connection_timeout(timeout_s, 0);
    client.set_read_timeout(timeout_s, 0);
    const auto result =
        client.Post("/v1/frames", envelope_to_json(envelope), "application/json");
    if (!result) {
        throw TransportError("edge at " + edge_url + " unreachable: " +
                             httplib::to_string(result.error()));
    }
    if (result->status != 200) {
        throw_from_wire(result->status, result->body,
                        "edge rejected frame " + envelope.frame_id);
    }
    return assess_response_from_json(result->body);
}

AssessResponse device_submit(const std::string& image_path, const std::string& edge_url,
                             int quality, const std::string& frame_id, int timeout_s) {
    const Image image = load_image(image_path);
    FrameEnvelope envelope;
    envelope.frame_id = frame_id.empty() ? frame_id_from_path(image_path) : frame_id;
    envelope.format = "jpeg";
    envelope.image_data = base64_encode(compress(image, quality));
    envelope.quality = quality;
    return device_submit_envelope(envelope, edge_url, timeout_s);
}

}  // namespace privar
