#include "web_pages.hpp"

#include "honeynet/http.hpp"

namespace honeynet::web::pages {

using http::html_escape;

namespace {

struct MenuItem {
    const char* href;
    const char* label;
    Role min;
};

const MenuItem kMenu[] = {
    {"/UserShpPosSet.html", "Ship Position", Role::User},
    {"/UserPassword.html", "Change Password", Role::User},
    {"/Viewlog.html", "View Log", Role::User},
    {"/DataExport.html", "Data Export", Role::User},
    {"/ConfigSat.html", "Satellite Configuration", Role::SysAdmin},
    {"/Diagnostics.html", "Diagnostics", Role::SysAdmin},
    {"/ConfigUpload.html", "Configuration Upload", Role::SysAdmin},
    {"/Commissioning.html", "Commissioning", Role::Dealer},
    {"/FirmwareUpload.html", "Firmware Upload", Role::Dealer},
};

std::string message_row(const std::string& message) {
    if (message.empty()) return "";
    return "<p class=\"msg\">" + html_escape(message) + "</p>\n";
}

std::string status_value(const nlohmann::json& status, const char* group, const char* key) {
    auto g = status.find(group);
    if (g == status.end() || !g->contains(key)) return "";
    const auto& v = (*g)[key];
    return v.is_string() ? v.get<std::string>() : v.dump();
}

}  // namespace

std::string layout(const std::string& title, const std::string& body, const vessel::ShipIdentity& id) {
    return "<!DOCTYPE HTML PUBLIC \"-//W3C//DTD HTML 4.01 Transitional//EN\">\n"
           "<html>\n<head>\n<meta http-equiv=\"Content-Type\" content=\"text/html; charset=iso-8859-1\">\n"
           "<title>" + html_escape(id.model) + " - " + html_escape(title) + "</title>\n"
           "<link rel=\"stylesheet\" type=\"text/css\" href=\"/css/style.css\">\n</head>\n<body>\n"
           "<table class=\"frame\" width=\"760\" cellpadding=\"0\" cellspacing=\"0\">\n"
           "<tr><td class=\"banner\">" + html_escape(id.model) + " Antenna Control Unit</td></tr>\n"
           "<tr><td class=\"content\">\n<h2>" + html_escape(title) + "</h2>\n" + body +
           "</td></tr>\n<tr><td class=\"footer\">Firmware " + html_escape(id.firmware_version) +
           " &nbsp; S/N " + html_escape(id.serial) + "</td></tr>\n</table>\n</body>\n</html>\n";
}

std::string login_form(const std::string& error) {
    return message_row(error) +
           "<form method=\"post\" action=\"/Login\">\n<table>\n"
           "<tr><td>Username</td><td><input type=\"text\" name=\"username\" size=\"20\"></td></tr>\n"
           "<tr><td>Password</td><td><input type=\"password\" name=\"password\" size=\"20\"></td></tr>\n"
           "<tr><td></td><td><input type=\"submit\" value=\"Login\"></td></tr>\n</table>\n</form>\n";
}

std::string menu(Role role, const nlohmann::json& status) {
    std::string html = "<table class=\"menu\"><tr><td valign=\"top\" width=\"200\">\n<ul>\n";
    for (const auto& item : kMenu)
        if (role_at_least(role, item.min))
            html += std::string("<li><a href=\"") + item.href + "\">" + item.label + "</a></li>\n";
    html += "<li><a href=\"/Logout\">Logout</a></li>\n</ul>\n</td><td valign=\"top\">\n";
    html += "<table class=\"status\" id=\"status\">\n";
    const std::pair<const char*, std::pair<const char*, const char*>> rows[] = {
        {"Latitude", {"position", "latitude"}},   {"Longitude", {"position", "longitude"}},
        {"Heading", {"position", "heading"}},     {"Speed", {"position", "speed"}},
        {"Azimuth", {"antenna", "azimuth"}},      {"Elevation", {"antenna", "elevation"}},
        {"Signal", {"antenna", "signal"}},
    };
    for (const auto& [label, where] : rows) {
        std::string id = std::string(where.first) + "." + where.second;
        html += std::string("<tr><td>") + label + "</td><td id=\"" + id + "\">" +
                html_escape(status_value(status, where.first, where.second)) + "</td></tr>\n";
    }
    html += "<tr><td>Satellite</td><td id=\"satellite_longitude\">" +
            html_escape(status.value("satellite_longitude", std::string())) + "</td></tr>\n";
    html += "<tr><td>Uptime</td><td id=\"uptime\">" + html_escape(status.value("uptime", std::string())) +
            "</td></tr>\n</table>\n</td></tr></table>\n<script type=\"text/javascript\" src=\"/js/status.js\"></script>\n";
    return html;
}

std::string config_sat(const std::string& satellite, const std::string& message) {
    return message_row(message) +
           "<form method=\"post\" action=\"/ConfigSat.html\">\n<table>\n"
           "<tr><td>Satellite longitude</td><td><input type=\"text\" name=\"satellite_longitude\" value=\"" +
           html_escape(satellite) + "\"></td></tr>\n"
           "<tr><td>Polarization</td><td><select name=\"polarization\"><option>H</option><option>V</option></select></td></tr>\n"
           "<tr><td>Rx frequency (MHz)</td><td><input type=\"text\" name=\"rx_frequency\"></td></tr>\n"
           "<tr><td></td><td><input type=\"submit\" value=\"Apply\"></td></tr>\n</table>\n</form>\n"
           "<h3>Antenna</h3>\n<form method=\"post\" action=\"/cgi-bin/setAntParams\">\n<table>\n"
           "<tr><td>Azimuth</td><td><input type=\"text\" name=\"azimuth\"></td></tr>\n"
           "<tr><td>Elevation</td><td><input type=\"text\" name=\"elevation\"></td></tr>\n"
           "<tr><td></td><td><input type=\"submit\" value=\"Set\"></td></tr>\n</table>\n</form>\n";
}

std::string ship_position(const std::string& lat, const std::string& lon, const std::string& message) {
    return message_row(message) +
           "<form method=\"post\" action=\"/UserShpPosSet.html\">\n<table>\n"
           "<tr><td>Latitude</td><td><input type=\"text\" name=\"latitude\" value=\"" + html_escape(lat) +
           "\"></td></tr>\n<tr><td>Longitude</td><td><input type=\"text\" name=\"longitude\" value=\"" +
           html_escape(lon) + "\"></td></tr>\n"
           "<tr><td></td><td><input type=\"submit\" value=\"Set Position\"></td></tr>\n</table>\n</form>\n";
}

std::string password_form(Role role, const std::string& message) {
    std::string options;
    for (Role r : {Role::User, Role::SysAdmin, Role::Dealer})
        if (role_at_least(role, r))
            options += std::string("<option value=\"") + std::string(role_name(r)) + "\">" +
                       std::string(role_name(r)) + "</option>";
    return message_row(message) +
           "<form method=\"post\" action=\"/UserPassword.html\">\n<table>\n"
           "<tr><td>Account</td><td><select name=\"account\">" + options + "</select></td></tr>\n"
           "<tr><td>New password</td><td><input type=\"password\" name=\"new_password\"></td></tr>\n"
           "<tr><td></td><td><input type=\"submit\" value=\"Change\"></td></tr>\n</table>\n</form>\n";
}

std::string view_log(const std::vector<std::string>& lines) {
    std::string html = "<pre class=\"log\">\n";
    for (const auto& l : lines) html += html_escape(l) + "\n";
    return html + "</pre>\n";
}

std::string data_export() {
    return "<p>Export the recent navigation history as comma separated values.</p>\n"
           "<p><a href=\"/cgi-bin/dataExport\">Download navlog.csv</a></p>\n";
}

std::string diagnostics(const nlohmann::json& status) {
    return "<pre class=\"log\">\n" + html_escape(status.dump(2)) + "\n</pre>\n";
}

std::string commissioning(const vessel::ShipIdentity& id) {
    return "<table>\n<tr><td>Model</td><td>" + html_escape(id.model) + "</td></tr>\n<tr><td>Serial</td><td>" +
           html_escape(id.serial) + "</td></tr>\n<tr><td>MAC</td><td>" + html_escape(id.mac_address) +
           "</td></tr>\n<tr><td>Vessel</td><td>" + html_escape(id.ship_name) + " (" + html_escape(id.call_sign) +
           ", MMSI " + html_escape(id.mmsi) + ")</td></tr>\n</table>\n"
           "<p><a href=\"/FirmwareUpload.html\">Firmware upload</a></p>\n";
}

std::string upload_form(const std::string& action, const std::string& field, const std::string& label,
                        const std::string& message) {
    return message_row(message) + "<form method=\"post\" action=\"" + action +
           "\" enctype=\"multipart/form-data\">\n<table>\n<tr><td>" + html_escape(label) +
           "</td><td><input type=\"file\" name=\"" + field + "\"></td></tr>\n"
           "<tr><td></td><td><input type=\"submit\" value=\"Upload\"></td></tr>\n</table>\n</form>\n";
}

std::string upload_accepted(const std::string& what, const std::string& filename, std::uint64_t size) {
    return "<p class=\"msg\">" + html_escape(what) + " file " + html_escape(filename) + " (" + std::to_string(size) +
           " bytes) accepted.</p>\n<p>The new image will be applied after the next reboot.</p>\n";
}

std::string error_body(int status) {
    switch (status) {
        case 400: return "<html><head><title>Document Error: Bad Request</title></head>\n<body><h2>Access Error: Bad Request</h2>\n<p>Invalid request</p></body></html>\n";
        case 404: return "<html><head><title>Document Error: Site or Page Not Found</title></head>\n<body><h2>Access Error: Site or Page Not Found</h2>\n<p>Cannot open URL</p></body></html>\n";
        case 413: return "<html><head><title>Document Error: Request Too Large</title></head>\n<body><h2>Access Error: Request Too Large</h2>\n<p>Upload exceeds the allowed size</p></body></html>\n";
        default: return "<html><head><title>Document Error: Unavailable</title></head>\n<body><h2>Access Error: Unavailable</h2>\n<p>Operation failed, please try again later</p></body></html>\n";
    }
}

std::optional<std::pair<std::string, std::string>> builtin_asset(const std::string& path) {
    if (path == "/css/style.css")
        return std::pair<std::string, std::string>{
            "text/css",
            "body { font-family: Arial, Helvetica, sans-serif; font-size: 12px; background: #d8dce0; }\n"
            ".frame { background: #ffffff; border: 1px solid #5a6a7a; margin: 10px auto; }\n"
            ".banner { background: #1c3f6e; color: #ffffff; font-size: 16px; font-weight: bold; padding: 8px; }\n"
            ".content { padding: 10px; }\n"
            ".footer { background: #e4e8ec; color: #555555; font-size: 10px; padding: 4px; }\n"
            ".status td { border-bottom: 1px solid #cccccc; padding: 2px 8px; }\n"
            ".msg { color: #b00000; font-weight: bold; }\n"
            ".log { font-family: Courier New, monospace; font-size: 11px; }\n"};
    if (path == "/js/status.js")
        return std::pair<std::string, std::string>{
            "application/javascript",
            "var statusTimer = null;\n"
            "function setCell(id, value) {\n"
            "  var el = document.getElementById(id);\n"
            "  if (el && value !== undefined) { el.innerHTML = value; }\n"
            "}\n"
            "function pollStatus() {\n"
            "  var xhr = new XMLHttpRequest();\n"
            "  xhr.open('GET', '/cgi-bin/getSysStatus', true);\n"
            "  xhr.onreadystatechange = function () {\n"
            "    if (xhr.readyState != 4) { return; }\n"
            "    if (xhr.status == 200) {\n"
            "      try {\n"
            "        var s = eval('(' + xhr.responseText + ')');\n"
            "        setCell('position.latitude', s.position.latitude);\n"
            "        setCell('position.longitude', s.position.longitude);\n"
            "        setCell('position.heading', s.position.heading);\n"
            "        setCell('position.speed', s.position.speed);\n"
            "        setCell('antenna.azimuth', s.antenna.azimuth);\n"
            "        setCell('antenna.elevation', s.antenna.elevation);\n"
            "        setCell('antenna.signal', s.antenna.signal);\n"
            "        setCell('satellite_longitude', s.satellite_longitude);\n"
            "        setCell('uptime', s.uptime);\n"
            "      } catch (e) {}\n"
            "    }\n"
            "  };\n"
            "  xhr.send(null);\n"
            "}\n"
            "statusTimer = setInterval(pollStatus, 5000);\n"};
    return std::nullopt;
}

}  // namespace honeynet::web::pages
