#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace subrom {

struct Event {
    double time = 0.0;  // simulation time, 0 for load-time events
    std::string code;
    std::string detail;
};

/// Collector for non-fatal runtime events (clamping, saturation,
/// extrapolation warnings). Evaluation functions take an optional
/// EventLog*; a null sink drops the event. Per-code detail storage is
/// capped so a clamped query inside a long run cannot grow unbounded;
/// counts are always exact.
class EventLog {
public:
    void record(const std::string& code, const std::string& detail = "", double time = 0.0) {
        auto& n = counts_[code];
        ++n;
        if (n <= kMaxStoredPerCode) events_.push_back({time, code, detail});
    }

    const std::vector<Event>& events() const { return events_; }
    std::size_t count(const std::string& code) const {
        auto it = counts_.find(code);
        return it == counts_.end() ? 0 : it->second;
    }
    const std::map<std::string, std::size_t>& counts() const { return counts_; }
    bool empty() const { return events_.empty(); }
    void clear() {
        events_.clear();
        counts_.clear();
    }

private:
    static constexpr std::size_t kMaxStoredPerCode = 16;
    std::vector<Event> events_;
    std::map<std::string, std::size_t> counts_;
};

inline void record_event(EventLog* log, const std::string& code, const std::string& detail = "",
                         double time = 0.0) {
    if (log != nullptr) log->record(code, detail, time);
}

namespace evc {
inline constexpr const char* depth_below_table = "hydro/depth-below-table";
inline constexpr const char* angle_extrapolation = "hydro/angle-extrapolation";
inline constexpr const char* advance_ratio_clamped = "hydro/advance-ratio-clamped";
inline constexpr const char* deflection_saturated = "actuator/deflection-saturated";
inline constexpr const char* rate_command_saturated = "guidance/rate-command-saturated";
inline constexpr const char* gamma_clamped = "path/gamma-clamped";
inline constexpr const char* aim_point_fallback = "guidance/aim-point-fallback";
inline constexpr const char* dispersion_override = "wave/dispersion-override";
inline constexpr const char* defaulted_coefficients = "coeffs/defaulted";
inline constexpr const char* mesh_normal_mismatch = "mesh/normal-winding-mismatch";
inline constexpr const char* terrain_clearance = "sim/terrain-clearance-violation";
}  // namespace evc

}  // namespace subrom
