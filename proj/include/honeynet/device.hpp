#pragma once

#include "honeynet/common.hpp"
#include "honeynet/vessel.hpp"

#include <json.hpp>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace honeynet {

namespace store {
class DeceptionStore;
}

struct Telemetry {
    vessel::VesselSnapshot snapshot;
    vessel::AntennaStatus antenna;
};

std::string format_fixed(double v, int decimals);

/// The emulated terminal as both services see it: vessel state, antenna,
/// uptime and identity behind one object.
///
/// Antenna telemetry is drawn once per snapshot_seq (and again after a
/// pointing command), so two reads of the same snapshot agree on every
/// value regardless of which service asked.
class Device {
public:
    Device(vessel::ShipIdentity identity, nmea::NavFix initial, vessel::AntennaConfig antenna,
           std::uint64_t seed, Clock& clock);

    vessel::VesselState& vessel() { return vessel_; }
    vessel::Uptime& uptime() { return uptime_; }
    const vessel::ShipIdentity& identity() const { return vessel_.identity(); }
    Clock& clock() { return clock_; }

    Telemetry read();

    void point_antenna(std::optional<double> azimuth, std::optional<double> elevation);
    void set_satellite(double longitude);
    double satellite() const { return antenna_.satellite_longitude(); }
    vessel::VesselSnapshot set_position(double latitude, double longitude);

    /// Re-applies persisted antenna settings after a restart.
    void apply_settings(const store::DeceptionStore& store);

    nlohmann::json status_document(const Telemetry& t);
    /// Plausible device log, newest last.
    std::vector<std::string> log_lines(std::size_t max_lines);

private:
    Clock& clock_;
    vessel::VesselState vessel_;
    vessel::AntennaModel antenna_;
    vessel::Uptime uptime_;

    std::mutex mu_;
    std::optional<std::uint64_t> cached_seq_;
    vessel::AntennaStatus cached_;
};

}  // namespace honeynet
