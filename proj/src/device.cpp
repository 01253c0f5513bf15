#include "honeynet/device.hpp"

#include "honeynet/store.hpp"

#include <cstdio>

namespace honeynet {

std::string format_fixed(double v, int decimals) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s = buf;
    if (s.size() > 1 && s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

Device::Device(vessel::ShipIdentity identity, nmea::NavFix initial, vessel::AntennaConfig antenna,
               std::uint64_t seed, Clock& clock)
    : clock_(clock),
      vessel_(std::move(identity), initial, clock),
      antenna_(antenna, seed),
      uptime_(clock) {}

Telemetry Device::read() {
    std::lock_guard lock(mu_);
    auto snap = vessel_.snapshot_ptr();
    if (cached_seq_ != snap->snapshot_seq) {
        cached_ = antenna_.next(snap->fix);
        cached_seq_ = snap->snapshot_seq;
    }
    return {*snap, cached_};
}

void Device::point_antenna(std::optional<double> azimuth, std::optional<double> elevation) {
    std::lock_guard lock(mu_);
    antenna_.set_manual_pointing(azimuth, elevation);
    cached_seq_.reset();
}

void Device::set_satellite(double longitude) {
    std::lock_guard lock(mu_);
    antenna_.set_satellite_longitude(longitude);
    cached_seq_.reset();
}

vessel::VesselSnapshot Device::set_position(double latitude, double longitude) {
    return vessel_.override_position(latitude, longitude);
}

void Device::apply_settings(const store::DeceptionStore& store) {
    auto number = [&](const char* endpoint, const char* key) -> std::optional<double> {
        auto v = store.setting(endpoint, key);
        if (!v) return std::nullopt;
        try {
            return std::stod(*v);
        } catch (const std::exception&) {
            return std::nullopt;
        }
    };
    auto az = number("setAntParams", "azimuth");
    auto el = number("setAntParams", "elevation");
    if (az || el) point_antenna(az, el);
    if (auto sat = number("ConfigSat", "satellite_longitude")) set_satellite(*sat);
}

nlohmann::json Device::status_document(const Telemetry& t) {
    auto nav = vessel::render_nav(t.snapshot);
    const auto& id = identity();
    return {
        {"ship", {{"name", t.snapshot.ship_name}, {"call_sign", t.snapshot.call_sign}, {"mmsi", t.snapshot.mmsi}}},
        {"position",
         {{"latitude", nav.latitude},
          {"longitude", nav.longitude},
          {"heading", nav.heading},
          {"speed", nav.speed},
          {"utc", nav.utc}}},
        {"snapshot_seq", t.snapshot.snapshot_seq},
        {"antenna",
         {{"azimuth", format_fixed(t.antenna.azimuth_deg, 1)},
          {"elevation", format_fixed(t.antenna.elevation_deg, 1)},
          {"relative_azimuth", format_fixed(t.antenna.relative_az_deg, 1)},
          {"signal", format_fixed(t.antenna.signal_strength_db, 1)},
          {"tracking", t.antenna.tracking}}},
        {"satellite_longitude", format_fixed(t.antenna.satellite_longitude_deg, 1)},
        {"uptime", uptime_.render()},
        {"uptime_seconds", uptime_.elapsed().count()},
        {"firmware", id.firmware_version},
        {"model", id.model},
        {"serial", id.serial},
        {"mac", id.mac_address},
    };
}

std::vector<std::string> Device::log_lines(std::size_t max_lines) {
    auto hist = vessel_.history();
    std::vector<std::string> out;
    auto boot = clock_.now() - uptime_.elapsed();
    auto stamp = [](Timestamp t) {
        auto s = format_iso8601_ms(t);
        return s.substr(0, 10) + " " + s.substr(11, 8);
    };
    out.push_back(stamp(boot) + " SYS  boot complete, firmware " + identity().firmware_version);
    std::size_t start = hist.size() > max_lines ? hist.size() - max_lines : 0;
    for (std::size_t i = start; i < hist.size(); ++i) {
        auto nav = vessel::render_nav(hist[i]);
        out.push_back(stamp(hist[i].updated_at) + " NAV  pos " + nav.latitude + "," + nav.longitude + " hdg " +
                      nav.heading + " sog " + nav.speed);
    }
    if (out.size() > max_lines) out.erase(out.begin(), out.end() - static_cast<std::ptrdiff_t>(max_lines));
    return out;
}

}  // namespace honeynet
