#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "leaguetrend/types.hpp"

namespace leaguetrend {

struct CacheEntry {
    SeasonKey key;
    std::filesystem::path local_path;
    std::string fetched_at;  // UTC, ISO 8601
    std::uint64_t byte_length = 0;
    std::string checksum;  // sha256 of the raw bytes, lowercase hex
};

/// Minimal HTTP abstraction so tests can inject fakes and offline runs can
/// prove no connection is ever opened.
class HttpTransport {
public:
    struct Response {
        int status = 0;
        std::string body;
    };

    virtual ~HttpTransport() = default;
    /// Throws Error(NetworkUnavailable) when no connection can be made.
    virtual Response get(const std::string& url) = 0;
};

std::unique_ptr<HttpTransport> make_http_transport();

inline constexpr const char* kDefaultUrlTemplate =
    "https://www.football-data.co.uk/mmz4281/{season_code}/{league_code}.csv";

struct FetchOptions {
    bool offline = false;
    std::string url_template = kDefaultUrlTemplate;
    std::filesystem::path fixture_dir;   // consulted before the network in offline mode
    HttpTransport* transport = nullptr;  // defaults to the real HTTP client
};

/// Retrieve one season file into `<cache_dir>/<season_code>/<league_code>.csv`.
/// A cached entry whose checksum matches the index is returned without any
/// network traffic; a corrupt entry is refetched online or reported offline.
CacheEntry fetch_season(const SeasonKey& key, const std::filesystem::path& cache_dir,
                        const FetchOptions& options = {});

/// Manifest: one `country,league_code,season_code[,display_name]` per line,
/// `#` comments allowed. Keys come back sorted by (country, league, season).
std::vector<SeasonKey> list_manifest(const std::filesystem::path& manifest_path);
std::vector<SeasonKey> parse_manifest(std::string_view text);
std::string serialize_manifest(const std::vector<SeasonKey>& keys);

std::string expand_url_template(const std::string& url_template, const SeasonKey& key);

std::string sha256_hex(std::string_view bytes);

/// Precedence: explicit flag, then LEAGUE_TREND_CACHE, then ./league-trend-cache.
std::filesystem::path resolve_cache_dir(const std::optional<std::string>& flag_value);

std::filesystem::path cache_file_path(const std::filesystem::path& cache_dir, const SeasonKey& key);

}  // namespace leaguetrend
