#include "honeynet/vessel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace honeynet::vessel {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
// Earth radius over geostationary orbit radius (6378.137 km / 42164.17 km).
constexpr double kGeoRatio = 6378.137 / 42164.17;

bool is_navigation_type(std::string_view t) {
    return t == "RMC" || t == "GGA" || t == "HDT" || t == "VTG";
}

std::string fmt1(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

}  // namespace

RenderedNav render_nav(const VesselSnapshot& s) {
    return RenderedNav{nmea::render_degrees(s.fix.latitude), nmea::render_degrees(s.fix.longitude),
                       fmt1(s.fix.heading_true), fmt1(s.fix.speed_over_ground),
                       format_iso8601_ms(s.fix.utc).substr(0, 19) + "Z",
                       std::to_string(s.snapshot_seq)};
}

VesselState::VesselState(ShipIdentity identity, nmea::NavFix initial, Clock& clock,
                         std::size_t history_capacity)
    : identity_(std::move(identity)), clock_(clock), history_capacity_(std::max<std::size_t>(1, history_capacity)) {
    auto snap = std::make_shared<VesselSnapshot>();
    snap->fix = initial;
    snap->ship_name = identity_.ship_name;
    snap->call_sign = identity_.call_sign;
    snap->mmsi = identity_.mmsi;
    snap->snapshot_seq = 0;
    snap->updated_at = clock_.now();
    history_.push_back(*snap);
    current_ = std::move(snap);
}

void VesselState::set_debug_sink(std::function<void(std::string_view)> sink) {
    std::lock_guard lock(write_mu_);
    debug_ = std::move(sink);
}

std::shared_ptr<const VesselSnapshot> VesselState::snapshot_ptr() const {
    std::lock_guard lock(read_mu_);
    return current_;
}

VesselSnapshot VesselState::current_snapshot() const { return *snapshot_ptr(); }

bool VesselState::ingest_datagram(std::string_view payload) {
    std::lock_guard lock(write_mu_);
    auto reject = [&](std::string_view why) {
        ++rejected_;
        if (debug_) debug_(why);
        return false;
    };

    nmea::NmeaSentence sentence;
    try {
        sentence = nmea::parse_sentence(trim(payload));
    } catch (const nmea::NmeaError& e) {
        return reject(e.what());
    }
    if (!is_navigation_type(sentence.sentence_type))
        return reject("ignored sentence type " + sentence.sentence_type);

    nmea::NavFix fix;
    try {
        fix = nmea::decode_fix(sentence, snapshot_ptr()->fix);
    } catch (const nmea::NmeaError& e) {
        return reject(e.what());
    }
    publish(fix);
    return true;
}

VesselSnapshot VesselState::override_position(double latitude, double longitude) {
    std::lock_guard lock(write_mu_);
    auto fix = snapshot_ptr()->fix;
    fix.latitude = latitude;
    fix.longitude = longitude;
    publish(fix);
    return current_snapshot();
}

void VesselState::publish(nmea::NavFix fix) {
    auto prev = snapshot_ptr();
    auto next = std::make_shared<VesselSnapshot>(*prev);
    next->fix = fix;
    next->snapshot_seq = prev->snapshot_seq + 1;
    next->updated_at = clock_.now();
    {
        std::lock_guard lock(history_mu_);
        history_.push_back(*next);
        while (history_.size() > history_capacity_) history_.pop_front();
    }
    std::lock_guard lock(read_mu_);
    current_ = std::move(next);
}

std::vector<VesselSnapshot> VesselState::history() const {
    std::lock_guard lock(history_mu_);
    return {history_.begin(), history_.end()};
}

LookAngles geostationary_look_angles(double lat_deg, double lon_deg, double sat_lon_deg) {
    double phi = lat_deg * kDeg;
    double dlon = (sat_lon_deg - lon_deg) * kDeg;
    double c = std::cos(phi) * std::cos(dlon);
    double el = std::atan2(c - kGeoRatio, std::sqrt(std::max(0.0, 1.0 - c * c)));
    double az = std::atan2(std::sin(dlon), -std::sin(phi) * std::cos(dlon));
    return {nmea::normalize_heading(az / kDeg), el / kDeg};
}

double angle_diff(double a, double b) {
    double d = std::fmod(a - b, 360.0);
    if (d <= -180.0) d += 360.0;
    if (d > 180.0) d -= 360.0;
    return d;
}

AntennaModel::AntennaModel(AntennaConfig cfg, std::uint64_t seed) : cfg_(cfg), rng_(seed) {}

void AntennaModel::set_manual_pointing(std::optional<double> azimuth, std::optional<double> elevation) {
    std::lock_guard lock(mu_);
    if (azimuth) manual_az_ = nmea::normalize_heading(*azimuth);
    if (elevation) manual_el_ = std::clamp(*elevation, 0.0, 90.0);
    snap_to_manual_ = true;
}

void AntennaModel::clear_manual_pointing() {
    std::lock_guard lock(mu_);
    manual_az_.reset();
    manual_el_.reset();
}

void AntennaModel::set_satellite_longitude(double lon) {
    std::lock_guard lock(mu_);
    cfg_.satellite_longitude_deg = std::clamp(lon, -180.0, 180.0);
}

double AntennaModel::satellite_longitude() const {
    std::lock_guard lock(mu_);
    return cfg_.satellite_longitude_deg;
}

AntennaStatus AntennaModel::next(const nmea::NavFix& fix) {
    std::lock_guard lock(mu_);
    auto geo = geostationary_look_angles(fix.latitude, fix.longitude, cfg_.satellite_longitude_deg);
    double base_az = manual_az_.value_or(geo.azimuth_deg);
    double base_el = manual_el_.value_or(std::clamp(geo.elevation_deg, 0.0, 90.0));

    const double j = cfg_.jitter_deg;
    const double half_tol = cfg_.pointing_tolerance_deg / 2.0;
    std::uniform_real_distribution<double> step(-j / 2.0, j / 2.0);
    std::uniform_real_distribution<double> sig_step(-cfg_.signal_jitter_db, cfg_.signal_jitter_db);

    AntennaStatus st;
    st.satellite_longitude_deg = cfg_.satellite_longitude_deg;
    st.tracking = !manual_az_ && !manual_el_ && geo.elevation_deg > 0.0;

    if (!prev_ || snap_to_manual_) {
        az_offset_ = 0.0;
        el_offset_ = 0.0;
        st.azimuth_deg = nmea::normalize_heading(base_az);
        st.elevation_deg = base_el;
        st.signal_strength_db = prev_ ? prev_->signal_strength_db : cfg_.signal_nominal_db;
        snap_to_manual_ = false;
    } else {
        az_offset_ = std::clamp(az_offset_ + step(rng_), -half_tol, half_tol);
        el_offset_ = std::clamp(el_offset_ + step(rng_), -half_tol, half_tol);
        double target_az = base_az + az_offset_;
        double target_el = std::clamp(base_el + el_offset_, 0.0, 90.0);
        st.azimuth_deg = nmea::normalize_heading(
            prev_->azimuth_deg + std::clamp(angle_diff(target_az, prev_->azimuth_deg), -j, j));
        st.elevation_deg = std::clamp(
            prev_->elevation_deg + std::clamp(target_el - prev_->elevation_deg, -j, j), 0.0, 90.0);

        double s = prev_->signal_strength_db;
        double pull = 0.1 * (cfg_.signal_nominal_db - s);
        double ds = std::clamp(sig_step(rng_) + pull, -cfg_.signal_jitter_db, cfg_.signal_jitter_db);
        st.signal_strength_db = std::clamp(s + ds, cfg_.signal_min_db, cfg_.signal_max_db);
    }
    st.relative_az_deg = nmea::normalize_heading(st.azimuth_deg - fix.heading_true);
    prev_ = st;
    return st;
}

std::chrono::seconds Uptime::elapsed() const {
    auto d = clock_.now() - boot_.load();
    if (d.count() < 0) return std::chrono::seconds{0};
    return std::chrono::duration_cast<std::chrono::seconds>(d);
}

void Uptime::reset() { boot_.store(clock_.now()); }

std::string Uptime::render() const {
    long long s = elapsed().count();
    char buf[48];
    std::snprintf(buf, sizeof buf, "%lldd %02lld:%02lld:%02lld", s / 86400, (s / 3600) % 24,
                  (s / 60) % 60, s % 60);
    return buf;
}

}  // namespace honeynet::vessel
