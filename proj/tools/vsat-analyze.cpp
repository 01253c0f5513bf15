// vsat-analyze: offline reports over honeynet event-log files.

#include "honeynet/analyzer.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace an = honeynet::analyzer;
namespace ev = honeynet::eventlog;

int main(int argc, char** argv) {
    CLI::App app{"Reports over honeynet event logs (files or directories of *.jsonl)"};
    app.require_subcommand(1);

    std::vector<std::filesystem::path> inputs;
    std::size_t n = 10;
    std::string format = "text";
    std::filesystem::path geo_path;
    std::string service;

    auto common = [&](CLI::App* sub) {
        sub->add_option("inputs", inputs, "event-log files or directories")->required();
        sub->add_option("--format", format, "text, csv or json")
            ->check(CLI::IsMember({"text", "csv", "json"}))
            ->capture_default_str();
    };
    auto* top = app.add_subcommand("top-creds", "most used credential combinations");
    common(top);
    top->add_option("--n", n, "rows to show")->check(CLI::PositiveNumber)->capture_default_str();
    top->add_option("--service", service, "count only this service")->check(CLI::IsMember({"web", "telnet"}));
    auto* daily = app.add_subcommand("daily", "events per UTC day and service");
    common(daily);
    auto* sources = app.add_subcommand("sources", "distinct source addresses");
    common(sources);
    sources->add_option("--n", n, "rows of the busiest-source and country tables (text format)")->capture_default_str();
    sources->add_option("--geo-map", geo_path, "prefix,country mapping for a per-country table")
        ->check(CLI::ExistingFile);
    auto* techniques = app.add_subcommand("techniques", "ATT&CK for ICS technique tags per event");
    common(techniques);
    auto* rqs = app.add_subcommand("rqs", "research question report");
    common(rqs);

    CLI11_PARSE(app, argc, argv);
    auto f = *an::parse_format(format);

    an::EventSet es;
    try {
        es = an::load(inputs);
    } catch (const an::NoFiles& e) {
        std::cerr << "vsat-analyze: " << e.what() << "\n";
        return 2;
    }
    for (const auto& m : es.malformed)
        std::cerr << "vsat-analyze: " << m.file.string() << ":" << m.line << ": skipped malformed line: " << m.error
                  << "\n";
    if (!es.malformed.empty())
        std::cerr << "vsat-analyze: " << es.malformed.size() << " malformed line(s) skipped, " << es.events.size()
                  << " events loaded\n";

    if (*top) {
        std::optional<ev::Service> only;
        if (!service.empty()) only = ev::parse_service(service);
        std::cout << an::render_top_credentials(an::top_credentials(es, n, only), f);
    } else if (*daily) {
        std::cout << an::render_daily(an::daily_counts(es), f);
    } else if (*sources) {
        std::optional<an::GeoMap> geo;
        if (!geo_path.empty()) {
            try {
                geo = an::GeoMap::load(geo_path);
            } catch (const std::exception& e) {
                std::cerr << "vsat-analyze: " << geo_path.string() << ": " << e.what() << "\n";
                return 2;
            }
        }
        std::cout << an::render_sources(an::distinct_sources(es, geo ? &*geo : nullptr), n, f);
    } else if (*techniques) {
        std::cout << an::render_techniques(es, an::tag_techniques(es), f);
    } else if (*rqs) {
        std::cout << an::render_rqs(es, an::answer_rqs(es), f);
    }
    return 0;
}
