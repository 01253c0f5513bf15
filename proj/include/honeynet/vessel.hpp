#pragma once

#include "honeynet/common.hpp"
#include "honeynet/nmea.hpp"

#include <atomic>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace honeynet::vessel {

/// Static, plausible identity of the emulated ship and its terminal.
struct ShipIdentity {
    std::string ship_name = "MV NORDIC TERN";
    std::string call_sign = "9HA4721";
    std::string mmsi = "248731000";
    std::string mac_address = "00:0C:8B:3A:51:7E";
    std::string firmware_version = "6.06a";
    std::string model = "DAC-2202";
    std::string serial = "DAC2202-10493";
};

struct VesselSnapshot {
    nmea::NavFix fix;
    std::string ship_name;
    std::string call_sign;
    std::string mmsi;
    std::uint64_t snapshot_seq = 0;
    Timestamp updated_at{};

    bool operator==(const VesselSnapshot&) const = default;
};

/// Navigation values exactly as both services print them.
struct RenderedNav {
    std::string latitude;
    std::string longitude;
    std::string heading;
    std::string speed;
    std::string utc;
    std::string seq;

    bool operator==(const RenderedNav&) const = default;
};

RenderedNav render_nav(const VesselSnapshot& s);

/// Live navigation state shared by the web and Telnet services.
///
/// Holds one immutable snapshot behind a shared pointer. Ingest decodes
/// outside any lock and then swaps the pointer; readers copy the pointer
/// and never observe a half-applied sentence.
class VesselState {
public:
    VesselState(ShipIdentity identity, nmea::NavFix initial, Clock& clock,
                std::size_t history_capacity = 720);

    /// Best effort: navigation sentences bump snapshot_seq, anything else
    /// (garbage, unknown types, decode failures) leaves the snapshot alone.
    /// Returns true when the snapshot changed.
    bool ingest_datagram(std::string_view payload);

    VesselSnapshot current_snapshot() const;
    std::shared_ptr<const VesselSnapshot> snapshot_ptr() const;

    /// Manual position override (portal "set ship position"). Holds until a
    /// position-bearing sentence arrives from the replay feed.
    VesselSnapshot override_position(double latitude, double longitude);

    /// Recent snapshots, oldest first; the last element is the current one.
    std::vector<VesselSnapshot> history() const;

    const ShipIdentity& identity() const { return identity_; }

    void set_debug_sink(std::function<void(std::string_view)> sink);
    std::size_t rejected_count() const { return rejected_.load(); }

private:
    void publish(nmea::NavFix fix);

    ShipIdentity identity_;
    Clock& clock_;
    std::size_t history_capacity_;

    mutable std::mutex read_mu_;  // guards current_ only; held for a pointer copy
    std::shared_ptr<const VesselSnapshot> current_;

    std::mutex write_mu_;  // serializes writers
    mutable std::mutex history_mu_;
    std::deque<VesselSnapshot> history_;

    std::function<void(std::string_view)> debug_;
    std::atomic<std::size_t> rejected_{0};
};

struct AntennaConfig {
    double satellite_longitude_deg = 25.5;   // fixed per deployment
    double jitter_deg = 0.4;                 // max change of az/el per refresh
    double pointing_tolerance_deg = 1.5;     // max distance from the geometric look angle
    double signal_nominal_db = 9.5;
    double signal_min_db = 3.0;
    double signal_max_db = 14.0;
    double signal_jitter_db = 0.3;
};

struct AntennaStatus {
    double azimuth_deg = 0.0;           // true, [0, 360)
    double elevation_deg = 0.0;         // [0, 90]
    double relative_az_deg = 0.0;       // relative to ship heading, [0, 360)
    double signal_strength_db = 0.0;
    double satellite_longitude_deg = 0.0;
    bool tracking = false;

    bool operator==(const AntennaStatus&) const = default;
};

struct LookAngles {
    double azimuth_deg;
    double elevation_deg;  // may be negative: satellite below the horizon
};

/// Look angles from a ship position to a geostationary satellite.
LookAngles geostationary_look_angles(double lat_deg, double lon_deg, double sat_lon_deg);

/// Signed smallest difference a - b in degrees, in (-180, 180].
double angle_diff(double a, double b);

/// Seeded generator of plausible antenna telemetry. Each call to next()
/// is one refresh; values random-walk around the geometric look angle and
/// never move more than the configured jitter between refreshes.
class AntennaModel {
public:
    AntennaModel(AntennaConfig cfg, std::uint64_t seed);

    AntennaStatus next(const nmea::NavFix& fix);

    /// Commanded pointing (setAntParams / ACU AZ,EL). The next refresh
    /// reports exactly the commanded values; tracking stops until cleared.
    void set_manual_pointing(std::optional<double> azimuth, std::optional<double> elevation);
    void clear_manual_pointing();
    void set_satellite_longitude(double lon);
    double satellite_longitude() const;
    const AntennaConfig& config() const { return cfg_; }

private:
    mutable std::mutex mu_;
    AntennaConfig cfg_;
    std::mt19937_64 rng_;
    std::optional<AntennaStatus> prev_;
    double az_offset_ = 0.0;
    double el_offset_ = 0.0;
    std::optional<double> manual_az_;
    std::optional<double> manual_el_;
    bool snap_to_manual_ = false;
};

/// Emulated device uptime; a reboot resets it.
class Uptime {
public:
    explicit Uptime(Clock& clock) : clock_(clock), boot_(clock.now()) {}

    std::chrono::seconds elapsed() const;
    void reset();
    std::string render() const;  // "3d 04:12:09"

private:
    Clock& clock_;
    std::atomic<Timestamp> boot_;
};

}  // namespace honeynet::vessel
