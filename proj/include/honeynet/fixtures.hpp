#pragma once

#include "honeynet/event_log.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

// Synthetic event-log corpora with the ground truth the generator used to
// build them. Output is a pure function of the seed.
namespace honeynet::fixtures {

struct CredentialRow {
    std::string username;
    std::string password;
    std::uint64_t count = 0;
};

struct CorpusTruth {
    std::uint64_t events = 0;
    std::uint64_t distinct_sources = 0;
    std::uint64_t dual_service_sources = 0;
    std::map<std::pair<std::string, std::string>, std::uint64_t> daily;  // (date, service) -> events
    std::vector<CredentialRow> credentials;  // every combination used, by descending count then name
    std::vector<std::string> files;          // file names written, sorted

    nlohmann::json to_json() const;
};

struct CredentialCorpusOptions {
    std::uint64_t seed = 20250403;
    std::size_t telnet_only_sources = 2400;
    std::size_t web_only_sources = 500;
    std::size_t dual_sources = 196;
};

/// Telnet brute-force traffic whose ten most used combinations carry the
/// counts in `top` and whose long tail stays below the tenth count.
CorpusTruth write_credential_corpus(const std::filesystem::path& dir, const std::vector<CredentialRow>& top,
                                    const CredentialCorpusOptions& opt = {});

/// Mixed web and Telnet traffic with exactly `events` events.
CorpusTruth write_synthetic_corpus(const std::filesystem::path& dir, std::size_t events, std::uint64_t seed = 7,
                                   std::size_t source_pool = 9054);

/// Reads `username,password,count` rows after a header line. An empty
/// password field is the empty password.
std::vector<CredentialRow> read_credential_table(const std::filesystem::path& csv);

void write_truth(const std::filesystem::path& dir, const CorpusTruth& truth);

}  // namespace honeynet::fixtures
