#pragma once

#include "honeynet/common.hpp"
#include "honeynet/vessel.hpp"

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace honeynet::web::pages {

std::string layout(const std::string& title, const std::string& body, const vessel::ShipIdentity& id);
std::string login_form(const std::string& error);
std::string menu(Role role, const nlohmann::json& status);
std::string config_sat(const std::string& satellite, const std::string& message);
std::string ship_position(const std::string& lat, const std::string& lon, const std::string& message);
std::string password_form(Role role, const std::string& message);
std::string view_log(const std::vector<std::string>& lines);
std::string data_export();
std::string diagnostics(const nlohmann::json& status);
std::string commissioning(const vessel::ShipIdentity& id);
std::string upload_form(const std::string& action, const std::string& field, const std::string& label,
                        const std::string& message);
std::string upload_accepted(const std::string& what, const std::string& filename, std::uint64_t size);
std::string error_body(int status);

/// Built-in static files keyed by request path.
std::optional<std::pair<std::string, std::string>> builtin_asset(const std::string& path);  // (type, body)

}  // namespace honeynet::web::pages
