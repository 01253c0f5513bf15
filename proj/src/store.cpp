#include "honeynet/store.hpp"

#include <sqlite3.h>

#include <fstream>
#include <json.hpp>

namespace honeynet::store {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::int64_t to_ms(Timestamp t) {
    return std::chrono::duration_cast<Millis>(t.time_since_epoch()).count();
}

Timestamp from_ms(std::int64_t ms) { return Timestamp{Millis{ms}}; }

// Length leaks, content does not.
bool ct_equal(std::string_view a, std::string_view b) {
    unsigned char diff = a.size() == b.size() ? 0 : 1;
    std::size_t n = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        unsigned char x = i < a.size() ? static_cast<unsigned char>(a[i]) : 0;
        unsigned char y = i < b.size() ? static_cast<unsigned char>(b[i]) : 0;
        diff |= static_cast<unsigned char>(x ^ y);
    }
    return diff == 0;
}

class Statement {
public:
    Statement(sqlite3* db, const char* sql) {
        if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK)
            throw StoreError(StoreErrc::StorageFailure, sqlite3_errmsg(db));
    }
    ~Statement() { sqlite3_finalize(stmt_); }
    Statement(const Statement&) = delete;
    Statement& operator=(const Statement&) = delete;

    Statement& bind(int i, std::string_view v) {
        sqlite3_bind_text(stmt_, i, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT);
        return *this;
    }
    Statement& bind(int i, std::int64_t v) {
        sqlite3_bind_int64(stmt_, i, v);
        return *this;
    }
    bool step() {
        int rc = sqlite3_step(stmt_);
        if (rc == SQLITE_ROW) return true;
        if (rc == SQLITE_DONE) return false;
        throw StoreError(StoreErrc::StorageFailure, sqlite3_errmsg(sqlite3_db_handle(stmt_)));
    }
    std::string text(int col) const {
        auto p = sqlite3_column_text(stmt_, col);
        return p ? std::string(reinterpret_cast<const char*>(p),
                               static_cast<std::size_t>(sqlite3_column_bytes(stmt_, col)))
                 : std::string();
    }
    std::int64_t integer(int col) const { return sqlite3_column_int64(stmt_, col); }

private:
    sqlite3_stmt* stmt_ = nullptr;
};

void apply_change(DerivedState& st, const ConfigChange& c) {
    if (c.endpoint == kPasswordChangeEndpoint) {
        auto role_it = c.parameters.find("role");
        auto pw_it = c.parameters.find("password");
        if (role_it == c.parameters.end() || pw_it == c.parameters.end()) return;
        if (auto role = parse_role(role_it->second)) st.accounts[*role].password = pw_it->second;
        return;
    }
    for (const auto& [k, v] : c.parameters) st.settings[c.endpoint + "." + k] = v;
}

}  // namespace

std::string_view errc_name(StoreErrc e) {
    switch (e) {
        case StoreErrc::PrivilegeDenied: return "PrivilegeDenied";
        case StoreErrc::EmptyPassword: return "EmptyPassword";
        case StoreErrc::StorageFailure: return "StorageFailure";
        case StoreErrc::UploadTooLarge: return "UploadTooLarge";
    }
    return "Unknown";
}

std::string_view upload_kind_name(UploadKind k) {
    return k == UploadKind::Firmware ? "firmware" : "config";
}

DerivedState replay_history(const CredentialDefaults& defaults, const std::vector<ConfigChange>& history) {
    DerivedState st;
    for (const auto& a : defaults.all()) st.accounts[a.role] = a;
    for (const auto& c : history) apply_change(st, c);
    return st;
}

DeceptionStore::DeceptionStore(StoreConfig cfg, Clock& clock) : cfg_(std::move(cfg)), clock_(clock) {
    if (cfg_.database != ":memory:" && cfg_.database.has_parent_path())
        fs::create_directories(cfg_.database.parent_path());
    if (!cfg_.quarantine_dir.empty()) fs::create_directories(cfg_.quarantine_dir);

    int flags = SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX;
    if (sqlite3_open_v2(cfg_.database.c_str(), &db_, flags, nullptr) != SQLITE_OK) {
        std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
        sqlite3_close(db_);
        throw StoreError(StoreErrc::StorageFailure, "cannot open store: " + msg);
    }
    sqlite3_busy_timeout(db_, 2000);
    exec("PRAGMA journal_mode=WAL");
    exec("PRAGMA synchronous=NORMAL");
    exec(R"sql(
        CREATE TABLE IF NOT EXISTS accounts (
            role INTEGER PRIMARY KEY,
            username TEXT NOT NULL UNIQUE,
            password TEXT NOT NULL);
        CREATE TABLE IF NOT EXISTS config_changes (
            change_id INTEGER PRIMARY KEY AUTOINCREMENT,
            session_ref TEXT NOT NULL,
            endpoint TEXT NOT NULL,
            parameters TEXT NOT NULL,
            applied_at_ms INTEGER NOT NULL);
        CREATE TABLE IF NOT EXISTS uploads (
            upload_id TEXT PRIMARY KEY,
            kind TEXT NOT NULL,
            original_filename TEXT NOT NULL,
            size_bytes INTEGER NOT NULL,
            content_digest TEXT NOT NULL,
            stored_path TEXT NOT NULL,
            session_ref TEXT NOT NULL,
            received_at_ms INTEGER NOT NULL);
    )sql");

    for (const auto& a : cfg_.defaults.all()) {
        Statement(db_, "INSERT OR IGNORE INTO accounts(role, username, password) VALUES (?, ?, ?)")
            .bind(1, static_cast<std::int64_t>(a.role))
            .bind(2, a.username)
            .bind(3, a.password)
            .step();
    }
    Statement q(db_, "SELECT role, username, password FROM accounts ORDER BY role");
    while (q.step()) {
        auto role = static_cast<Role>(q.integer(0));
        accounts_[role] = Account{q.text(1), q.text(2), role};
    }
    for (const auto& c : load_history()) {
        if (c.endpoint == kPasswordChangeEndpoint) continue;
        for (const auto& [k, v] : c.parameters) settings_[c.endpoint + "." + k] = v;
    }
}

DeceptionStore::~DeceptionStore() { sqlite3_close(db_); }

void DeceptionStore::exec(const char* sql) {
    char* err = nullptr;
    if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
        std::string msg = err ? err : "sqlite error";
        sqlite3_free(err);
        throw StoreError(StoreErrc::StorageFailure, msg);
    }
}

void DeceptionStore::check_fault() const {
    if (fault_) throw StoreError(StoreErrc::StorageFailure, "storage fault injected");
}

void DeceptionStore::inject_fault(bool on) {
    std::lock_guard lock(mu_);
    fault_ = on;
}

std::optional<Role> DeceptionStore::verify_credentials(std::string_view username,
                                                       std::string_view password) const {
    std::lock_guard lock(mu_);
    std::optional<Role> match;
    for (const auto& [role, acct] : accounts_) {
        bool ok = ct_equal(acct.username, username) & ct_equal(acct.password, password);
        if (ok) match = role;
    }
    return match;
}

ConfigChange DeceptionStore::append_change(const std::string& session_ref, const std::string& endpoint,
                                           const std::map<std::string, std::string>& parameters) {
    ConfigChange c{0, session_ref, endpoint, parameters, truncate_to_ms(clock_.now())};
    Statement(db_, "INSERT INTO config_changes(session_ref, endpoint, parameters, applied_at_ms) VALUES (?, ?, ?, ?)")
        .bind(1, session_ref)
        .bind(2, endpoint)
        .bind(3, json(parameters).dump())
        .bind(4, to_ms(c.applied_at))
        .step();
    c.change_id = sqlite3_last_insert_rowid(db_);
    return c;
}

Account DeceptionStore::change_password(Role actor, Role target, const std::string& new_password,
                                        const std::string& session_ref) {
    std::lock_guard lock(mu_);
    if (!role_at_least(actor, target))
        throw StoreError(StoreErrc::PrivilegeDenied,
                         std::string(role_name(actor)) + " may not change " + std::string(role_name(target)));
    if (new_password.empty()) throw StoreError(StoreErrc::EmptyPassword, "password must not be empty");
    check_fault();

    exec("BEGIN IMMEDIATE");
    try {
        Statement(db_, "UPDATE accounts SET password = ? WHERE role = ?")
            .bind(1, new_password)
            .bind(2, static_cast<std::int64_t>(target))
            .step();
        append_change(session_ref, std::string(kPasswordChangeEndpoint),
                      {{"role", std::string(role_name(target))}, {"password", new_password}});
        exec("COMMIT");
    } catch (...) {
        sqlite3_exec(db_, "ROLLBACK", nullptr, nullptr, nullptr);
        throw;
    }
    accounts_[target].password = new_password;
    return accounts_[target];
}

ConfigChange DeceptionStore::record_change(const std::string& session_ref, const std::string& endpoint,
                                           const std::map<std::string, std::string>& parameters) {
    std::lock_guard lock(mu_);
    check_fault();
    auto c = append_change(session_ref, endpoint, parameters);
    for (const auto& [k, v] : parameters) settings_[endpoint + "." + k] = v;
    return c;
}

QuarantinedUpload DeceptionStore::quarantine_upload(Role actor, const std::string& session_ref,
                                                     UploadKind kind, const std::string& filename,
                                                     std::span<const char> bytes) {
    std::lock_guard lock(mu_);
    Role needed = kind == UploadKind::Firmware ? Role::Dealer : Role::SysAdmin;
    if (!role_at_least(actor, needed))
        throw StoreError(StoreErrc::PrivilegeDenied,
                         std::string(upload_kind_name(kind)) + " upload requires " + std::string(role_name(needed)));
    if (bytes.size() > cfg_.upload_cap_bytes)
        throw StoreError(StoreErrc::UploadTooLarge, "upload exceeds " + std::to_string(cfg_.upload_cap_bytes) + " bytes");
    check_fault();

    QuarantinedUpload up;
    up.upload_id = random_hex(16);
    up.kind = kind;
    up.original_filename = filename;
    up.size_bytes = bytes.size();
    up.content_digest = sha256_hex(std::string_view(bytes.data(), bytes.size()));
    up.session_ref = session_ref;
    up.received_at = truncate_to_ms(clock_.now());
    // opaque name, no extension, never inside a path anything executes from
    fs::path path = cfg_.quarantine_dir / (up.upload_id + ".quarantine");
    up.stored_path = path.string();

    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw StoreError(StoreErrc::StorageFailure, "cannot write quarantine file");
    }
    std::error_code ec;
    fs::permissions(path, fs::perms::owner_read | fs::perms::owner_write, fs::perm_options::replace, ec);

    Statement(db_, "INSERT INTO uploads VALUES (?, ?, ?, ?, ?, ?, ?, ?)")
        .bind(1, up.upload_id)
        .bind(2, upload_kind_name(kind))
        .bind(3, up.original_filename)
        .bind(4, static_cast<std::int64_t>(up.size_bytes))
        .bind(5, up.content_digest)
        .bind(6, up.stored_path)
        .bind(7, up.session_ref)
        .bind(8, to_ms(up.received_at))
        .step();
    return up;
}

std::vector<Account> DeceptionStore::accounts() const {
    std::lock_guard lock(mu_);
    std::vector<Account> out;
    for (const auto& [r, a] : accounts_) out.push_back(a);
    return out;
}

Account DeceptionStore::account(Role role) const {
    std::lock_guard lock(mu_);
    return accounts_.at(role);
}

std::vector<ConfigChange> DeceptionStore::load_history() const {
    std::vector<ConfigChange> out;
    Statement q(db_, "SELECT change_id, session_ref, endpoint, parameters, applied_at_ms FROM config_changes ORDER BY change_id");
    while (q.step()) {
        ConfigChange c;
        c.change_id = q.integer(0);
        c.session_ref = q.text(1);
        c.endpoint = q.text(2);
        c.parameters = json::parse(q.text(3)).get<std::map<std::string, std::string>>();
        c.applied_at = from_ms(q.integer(4));
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<ConfigChange> DeceptionStore::history() const {
    std::lock_guard lock(mu_);
    return load_history();
}

std::vector<QuarantinedUpload> DeceptionStore::uploads() const {
    std::lock_guard lock(mu_);
    std::vector<QuarantinedUpload> out;
    Statement q(db_, "SELECT upload_id, kind, original_filename, size_bytes, content_digest, stored_path, session_ref, received_at_ms FROM uploads ORDER BY received_at_ms, upload_id");
    while (q.step()) {
        QuarantinedUpload u;
        u.upload_id = q.text(0);
        u.kind = q.text(1) == "firmware" ? UploadKind::Firmware : UploadKind::Config;
        u.original_filename = q.text(2);
        u.size_bytes = static_cast<std::uint64_t>(q.integer(3));
        u.content_digest = q.text(4);
        u.stored_path = q.text(5);
        u.session_ref = q.text(6);
        u.received_at = from_ms(q.integer(7));
        out.push_back(std::move(u));
    }
    return out;
}

DerivedState DeceptionStore::derived_state() const {
    std::lock_guard lock(mu_);
    return DerivedState{accounts_, settings_};
}

std::optional<std::string> DeceptionStore::setting(const std::string& endpoint, const std::string& key) const {
    std::lock_guard lock(mu_);
    auto it = settings_.find(endpoint + "." + key);
    if (it == settings_.end()) return std::nullopt;
    return it->second;
}

}  // namespace honeynet::store
