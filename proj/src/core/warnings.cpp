#include "warnings.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "codec.hpp"
#include "dataset.hpp"
#include "errors.hpp"
#include "raster.hpp"

namespace privar {

namespace {

constexpr Rgb kRed{255, 0, 0};
constexpr Rgb kWhite{255, 255, 255};
constexpr char kWarningText[] = "PRIVACY WARNING!";

int fitting_scale(int frame_width, int budget_fraction_pct) {
    const int text_cols = static_cast<int>(sizeof(kWarningText) - 1) * kGlyphAdvance - 1;
    const int budget = frame_width * budget_fraction_pct / 100;
    return std::max(1, budget / text_cols);
}

}  // namespace

void require_valid(const FlashSchedule& schedule) {
    if (schedule.cycle_s <= 0.0 || schedule.on_s < 0.0 || schedule.total_s < 0.0) {
        throw InvalidArgumentError("flash schedule durations must be positive");
    }
    if (schedule.on_s > schedule.cycle_s) {
        throw InvalidArgumentError("flash on_s must not exceed cycle_s");
    }
    const double cycles = schedule.total_s / schedule.cycle_s;
    if (std::abs(cycles - std::round(cycles)) > 1e-9) {
        throw InvalidArgumentError("flash total_s must be an integer multiple of cycle_s");
    }
}

bool flash_visible(double t, const FlashSchedule& schedule) {
    require_valid(schedule);
    if (t < 0.0 || !std::isfinite(t)) {
        throw InvalidArgumentError("flash time must be finite and non-negative");
    }
    if (t >= schedule.total_s) return false;
    return std::fmod(t, schedule.cycle_s) < schedule.on_s;
}

WarningMode warning_mode_from_string(const std::string& name) {
    if (name == "center-screen") return WarningMode::center_screen;
    if (name == "top-screen") return WarningMode::top_screen;
    if (name == "region-overlay") return WarningMode::region_overlay;
    throw InvalidArgumentError("unknown warning mode \"" + name +
                               "\" (expected center-screen, top-screen or region-overlay)");
}

const char* to_string(WarningMode mode) {
    switch (mode) {
        case WarningMode::center_screen: return "center-screen";
        case WarningMode::top_screen: return "top-screen";
        case WarningMode::region_overlay: return "region-overlay";
    }
    return "center-screen";
}

Image render_warning(const Image& frame, const RiskAssessment& assessment, WarningMode mode,
                     double t, const FlashSchedule& schedule) {
    require_valid(frame);
    if (!assessment.risk) {
        throw InvalidArgumentError("render_warning called for a no-risk assessment");
    }
    if (!flash_visible(t, schedule)) return frame;

    Image out = frame;
    switch (mode) {
        case WarningMode::center_screen: {
            const int scale = fitting_scale(frame.width, 60);
            const TextExtent extent = text_extent(kWarningText, scale);
            const int pad = 3 * scale;
            const BoundingBox block{(frame.width - extent.width) / 2 - pad,
                                    (frame.height - extent.height) / 2 - pad,
                                    extent.width + 2 * pad, extent.height + 2 * pad};
            fill_rect(out, block, kRed);
            draw_text(out, (frame.width - extent.width) / 2,
                      (frame.height - extent.height) / 2, kWarningText, scale, kWhite);
            break;
        }
        case WarningMode::top_screen: {
            const int scale = fitting_scale(frame.width, 80);
            const TextExtent extent = text_extent(kWarningText, scale);
            draw_text(out, (frame.width - extent.width) / 2, 2 * scale, kWarningText, scale,
                      kRed);
            break;
        }
        case WarningMode::region_overlay: {
            for (const BoundingBox& region : assessment.regions) {
                draw_rect_outline(out, region, kOverlayOutlineThickness, kRed);
            }
            break;
        }
    }
    return out;
}

FrameSequenceResult render_warning_sequence(const Image& frame,
                                            const RiskAssessment& assessment, WarningMode mode,
                                            double fps, const std::string& out_dir,
                                            const FlashSchedule& schedule) {
    require_valid(schedule);
    if (fps <= 0.0 || !std::isfinite(fps)) {
        throw InvalidArgumentError("fps must be positive and finite");
    }
    std::filesystem::create_directories(out_dir);

    const std::size_t frame_count =
        static_cast<std::size_t>(std::llround(std::ceil(schedule.total_s * fps)));
    nlohmann::json manifest;
    manifest["fps"] = fps;
    manifest["mode"] = to_string(mode);
    nlohmann::json frames = nlohmann::json::array();
    for (std::size_t k = 0; k < frame_count; ++k) {
        const double t = static_cast<double>(k) / fps;
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%04zu.png", k);
        const Image rendered = render_warning(frame, assessment, mode, t, schedule);
        save_png(rendered, join_path(out_dir, name));
        char t_text[32];
        std::snprintf(t_text, sizeof(t_text), "%.3f", t);
        frames.push_back(nlohmann::json{{"file", name},
                                        {"t", t_text},
                                        {"visible", flash_visible(t, schedule)}});
    }
    manifest["frames"] = std::move(frames);

    FrameSequenceResult result;
    result.frame_count = frame_count;
    result.manifest_path = join_path(out_dir, "frames.json");
    write_file(result.manifest_path, manifest.dump(2) + "\n");
    return result;
}

}  // namespace privar
