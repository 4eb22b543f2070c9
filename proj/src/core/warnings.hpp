#pragma once

#include <string>

#include "image.hpp"
#include "risk.hpp"

namespace privar {

// Flash timing: 2 s cycle, 1 s on, 6 s total.
struct FlashSchedule {
    double cycle_s = 2.0;
    double on_s = 1.0;
    double total_s = 6.0;
};

void require_valid(const FlashSchedule& schedule);

// true iff t < total_s and (t mod cycle_s) < on_s; t must be >= 0.
bool flash_visible(double t, const FlashSchedule& schedule = {});

enum class WarningMode { center_screen, top_screen, region_overlay };

WarningMode warning_mode_from_string(const std::string& name);
const char* to_string(WarningMode mode);

// Renders one warning frame at time t. Off-phase frames are returned
// unchanged; each mode touches only its designated geometry:
//   center-screen: filled red block with "PRIVACY WARNING!" centered
//   top-screen:    red "PRIVACY WARNING!" glyphs across the top band
//   region-overlay: 3 px red outlines over assessment.regions
// The assessment must carry risk == true (rendering a warning on a no-risk
// frame is a caller error).
Image render_warning(const Image& frame, const RiskAssessment& assessment, WarningMode mode,
                     double t, const FlashSchedule& schedule = {});

inline constexpr int kOverlayOutlineThickness = 3;

// Numbered PNG frames frame_0000.png ... covering [0, total_s) at the given
// fps, plus frames.json listing timestamps and visibility.
struct FrameSequenceResult {
    std::size_t frame_count = 0;
    std::string manifest_path;
};

FrameSequenceResult render_warning_sequence(const Image& frame,
                                            const RiskAssessment& assessment, WarningMode mode,
                                            double fps, const std::string& out_dir,
                                            const FlashSchedule& schedule = {});

}  // namespace privar
