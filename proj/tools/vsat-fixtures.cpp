// vsat-fixtures: writes synthetic event-log corpora together with the
// ground truth (truth.json) the generator used.

#include "honeynet/fixtures.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace fx = honeynet::fixtures;

namespace {

void summary(const fx::CorpusTruth& t, const std::filesystem::path& dir) {
    std::cout << "wrote " << t.events << " events in " << t.files.size() << " files to " << dir.string() << "\n"
              << "distinct sources: " << t.distinct_sources << ", on both services: " << t.dual_service_sources
              << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synthetic honeynet log corpora with recorded ground truth"};
    app.require_subcommand(1);

    std::filesystem::path table, out;
    fx::CredentialCorpusOptions copt;
    auto* creds = app.add_subcommand("credentials", "Telnet brute-force corpus following a credential table");
    creds->add_option("--table", table, "CSV with username,password,count rows")->required()->check(CLI::ExistingFile);
    creds->add_option("--out", out, "output directory")->required();
    creds->add_option("--seed", copt.seed, "generator seed")->capture_default_str();
    creds->add_option("--dual", copt.dual_sources, "sources that use both services")->capture_default_str();

    std::size_t events = 0;
    std::uint64_t seed = 7;
    std::size_t pool = 9054;
    auto* synth = app.add_subcommand("synthetic", "mixed web and Telnet traffic of a given size");
    synth->add_option("--events", events, "number of events")->required()->check(CLI::PositiveNumber);
    synth->add_option("--out", out, "output directory")->required();
    synth->add_option("--seed", seed, "generator seed")->capture_default_str();
    synth->add_option("--sources", pool, "size of the source address pool")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        fx::CorpusTruth truth;
        if (*creds)
            truth = fx::write_credential_corpus(out, fx::read_credential_table(table), copt);
        else
            truth = fx::write_synthetic_corpus(out, events, seed, pool);
        fx::write_truth(out, truth);
        summary(truth, out);
    } catch (const std::exception& e) {
        std::cerr << "vsat-fixtures: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
