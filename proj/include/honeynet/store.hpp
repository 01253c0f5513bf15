#pragma once

#include "honeynet/common.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

struct sqlite3;

namespace honeynet::store {

enum class StoreErrc { PrivilegeDenied, EmptyPassword, StorageFailure, UploadTooLarge };

std::string_view errc_name(StoreErrc e);

class StoreError : public std::runtime_error {
public:
    StoreError(StoreErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    StoreErrc code() const noexcept { return code_; }

private:
    StoreErrc code_;
};

struct Account {
    std::string username;  // case-sensitive
    std::string password;  // plain text: these are deception credentials
    Role role = Role::User;

    bool operator==(const Account&) const = default;
};

struct ConfigChange {
    std::int64_t change_id = 0;
    std::string session_ref;
    std::string endpoint;
    std::map<std::string, std::string> parameters;
    Timestamp applied_at{};

    bool operator==(const ConfigChange&) const = default;
};

enum class UploadKind { Firmware, Config };
std::string_view upload_kind_name(UploadKind k);

struct QuarantinedUpload {
    std::string upload_id;
    UploadKind kind = UploadKind::Firmware;
    std::string original_filename;
    std::uint64_t size_bytes = 0;
    std::string content_digest;  // sha256 hex
    std::string stored_path;
    std::string session_ref;
    Timestamp received_at{};
};

/// Shipped default accounts, one per role.
struct CredentialDefaults {
    Account user{"User", "seatel1", Role::User};
    Account sysadmin{"SysAdmin", "seatel2", Role::SysAdmin};
    Account dealer{"Dealer", "seatel3", Role::Dealer};

    std::vector<Account> all() const { return {user, sysadmin, dealer}; }
};

struct StoreConfig {
    std::filesystem::path database;        // ":memory:" for an ephemeral store
    std::filesystem::path quarantine_dir;
    std::uint64_t upload_cap_bytes = 64ull * 1024 * 1024;
    CredentialDefaults defaults;
};

/// Endpoint name recorded for password changes in the change history.
inline constexpr std::string_view kPasswordChangeEndpoint = "change_password";

/// Mutable deception state derived from the change history.
struct DerivedState {
    std::map<Role, Account> accounts;
    std::map<std::string, std::string> settings;  // "endpoint.key" -> latest value

    bool operator==(const DerivedState&) const = default;
};

/// Replays `history` over the default accounts. The store guarantees this
/// equals its live state.
DerivedState replay_history(const CredentialDefaults& defaults, const std::vector<ConfigChange>& history);

/// Single source of truth shared by the web and Telnet services: accounts,
/// the append-only change history, and quarantined uploads.
///
/// All operations are serialized on one mutex, which makes per-account
/// operations linearizable and totally orders history appends.
class DeceptionStore {
public:
    DeceptionStore(StoreConfig cfg, Clock& clock);
    ~DeceptionStore();
    DeceptionStore(const DeceptionStore&) = delete;
    DeceptionStore& operator=(const DeceptionStore&) = delete;

    /// Exact, case-sensitive match on both fields. Compares against every
    /// account so unknown-user and wrong-password cost the same.
    std::optional<Role> verify_credentials(std::string_view username, std::string_view password) const;

    /// `actor` may change roles at or below its own level.
    Account change_password(Role actor, Role target, const std::string& new_password,
                            const std::string& session_ref);

    ConfigChange record_change(const std::string& session_ref, const std::string& endpoint,
                               const std::map<std::string, std::string>& parameters);

    /// Stores `bytes` under the quarantine directory without interpreting
    /// them. Firmware requires Dealer, configuration files SysAdmin.
    QuarantinedUpload quarantine_upload(Role actor, const std::string& session_ref, UploadKind kind,
                                        const std::string& filename, std::span<const char> bytes);

    std::vector<Account> accounts() const;
    Account account(Role role) const;
    std::vector<ConfigChange> history() const;
    std::vector<QuarantinedUpload> uploads() const;
    DerivedState derived_state() const;
    std::optional<std::string> setting(const std::string& endpoint, const std::string& key) const;

    /// Makes every subsequent write fail with StorageFailure (tests).
    void inject_fault(bool on);

    const StoreConfig& config() const { return cfg_; }

private:
    void exec(const char* sql);
    void check_fault() const;
    std::vector<ConfigChange> load_history() const;
    ConfigChange append_change(const std::string& session_ref, const std::string& endpoint,
                               const std::map<std::string, std::string>& parameters);

    StoreConfig cfg_;
    Clock& clock_;
    mutable std::mutex mu_;
    sqlite3* db_ = nullptr;
    std::map<Role, Account> accounts_;
    std::map<std::string, std::string> settings_;
    bool fault_ = false;
};

}  // namespace honeynet::store
