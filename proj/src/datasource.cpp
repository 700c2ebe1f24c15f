#include "leaguetrend/datasource.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "leaguetrend/csvio.hpp"
#include "leaguetrend/errors.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

namespace leaguetrend {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::CacheCorrupt, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void atomic_write(const fs::path& path, std::string_view bytes) {
    static std::atomic<unsigned> counter{0};
    fs::path tmp = path;
    tmp += ".tmp" + std::to_string(counter.fetch_add(1)) + "-" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw Error(Errc::CacheCorrupt, "cannot write " + path.string());
        }
    }
    fs::rename(tmp, path);  // atomic on POSIX: last complete write wins
}

std::string utc_now_iso() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct IndexRecord {
    std::uint64_t byte_length = 0;
    std::string checksum;
    std::string fetched_at;
};

using CacheIndex = std::map<std::pair<std::string, std::string>, IndexRecord>;

fs::path index_path(const fs::path& cache_dir) { return cache_dir / "index.tsv"; }

CacheIndex load_index(const fs::path& cache_dir) {
    CacheIndex index;
    std::ifstream in(index_path(cache_dir));
    if (!in) return index;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::istringstream fields(line);
        std::string season, league, bytes, checksum, fetched;
        if (!std::getline(fields, season, '\t') || !std::getline(fields, league, '\t') ||
            !std::getline(fields, bytes, '\t') || !std::getline(fields, checksum, '\t'))
            continue;
        std::getline(fields, fetched, '\t');
        IndexRecord rec;
        rec.byte_length = std::strtoull(bytes.c_str(), nullptr, 10);
        rec.checksum = checksum;
        rec.fetched_at = fetched;
        index[{season, league}] = rec;
    }
    return index;
}

void store_index(const fs::path& cache_dir, const CacheIndex& index) {
    std::string out;
    for (const auto& [key, rec] : index) {
        out += key.first + "\t" + key.second + "\t" + std::to_string(rec.byte_length) + "\t" +
               rec.checksum + "\t" + rec.fetched_at + "\n";
    }
    atomic_write(index_path(cache_dir), out);
}

// single writer per key inside this process; cross-process safety comes from
// the atomic renames
std::mutex& key_mutex(const SeasonKey& key) {
    static std::mutex registry_mutex;
    static std::map<std::string, std::unique_ptr<std::mutex>> registry;
    std::lock_guard lock(registry_mutex);
    auto& slot = registry[key.season_code + "/" + key.league_code];
    if (!slot) slot = std::make_unique<std::mutex>();
    return *slot;
}

std::mutex& index_mutex() {
    static std::mutex m;
    return m;
}

CacheEntry make_entry(const SeasonKey& key, const fs::path& path, const IndexRecord& rec) {
    return CacheEntry{key, path, rec.fetched_at, rec.byte_length, rec.checksum};
}

void record_entry(const fs::path& cache_dir, const SeasonKey& key, const IndexRecord& rec) {
    std::lock_guard lock(index_mutex());
    CacheIndex index = load_index(cache_dir);
    index[{key.season_code, key.league_code}] = rec;
    store_index(cache_dir, index);
}

class HttplibTransport : public HttpTransport {
public:
    Response get(const std::string& url) override {
        auto scheme_end = url.find("://");
        if (scheme_end == std::string::npos)
            throw Error(Errc::NetworkUnavailable, "bad url: " + url);
        auto path_start = url.find('/', scheme_end + 3);
        std::string base = path_start == std::string::npos ? url : url.substr(0, path_start);
        std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
        httplib::Client client(base);
        client.set_follow_location(true);
        client.set_connection_timeout(20);
        client.set_read_timeout(60);
        auto res = client.Get(path);
        if (!res)
            throw Error(Errc::NetworkUnavailable,
                        url + " (" + httplib::to_string(res.error()) + ")");
        return Response{res->status, res->body};
    }
};

}  // namespace

std::unique_ptr<HttpTransport> make_http_transport() {
    return std::make_unique<HttplibTransport>();
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error(Errc::CacheCorrupt, "sha256 failure");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

std::string expand_url_template(const std::string& url_template, const SeasonKey& key) {
    std::string url = url_template;
    auto replace_all = [&url](const std::string& token, const std::string& value) {
        for (std::size_t pos = url.find(token); pos != std::string::npos;
             pos = url.find(token, pos + value.size()))
            url.replace(pos, token.size(), value);
    };
    replace_all("{season_code}", key.season_code);
    replace_all("{league_code}", key.league_code);
    return url;
}

fs::path cache_file_path(const fs::path& cache_dir, const SeasonKey& key) {
    return cache_dir / key.season_code / (key.league_code + ".csv");
}

std::filesystem::path resolve_cache_dir(const std::optional<std::string>& flag_value) {
    if (flag_value && !flag_value->empty()) return *flag_value;
    if (const char* env = std::getenv("LEAGUE_TREND_CACHE"); env && *env) return env;
    return "league-trend-cache";
}

CacheEntry fetch_season(const SeasonKey& key, const fs::path& cache_dir,
                        const FetchOptions& options) {
    if (!fs::is_directory(cache_dir))
        throw Error(Errc::CacheCorrupt, "cache dir missing: " + cache_dir.string());

    std::lock_guard key_lock(key_mutex(key));
    const fs::path path = cache_file_path(cache_dir, key);

    auto indexed = [&]() -> std::optional<IndexRecord> {
        std::lock_guard lock(index_mutex());
        CacheIndex index = load_index(cache_dir);
        auto it = index.find({key.season_code, key.league_code});
        if (it == index.end()) return std::nullopt;
        return it->second;
    }();

    if (fs::exists(path)) {
        std::string bytes = read_file(path);
        std::string checksum = sha256_hex(bytes);
        if (indexed && indexed->checksum == checksum && indexed->byte_length == bytes.size())
            return make_entry(key, path, *indexed);
        if (!indexed) {
            // present but unindexed (hand-seeded cache): adopt it as-is
            IndexRecord rec{bytes.size(), checksum, utc_now_iso()};
            record_entry(cache_dir, key, rec);
            return make_entry(key, path, rec);
        }
        if (options.offline)
            throw Error(Errc::CacheCorrupt, path.string() + " does not match its recorded checksum");
        // fall through: refetch below
    } else if (options.offline && !options.fixture_dir.empty()) {
        fs::path fixture = cache_file_path(options.fixture_dir, key);
        if (fs::exists(fixture)) {
            std::string bytes = read_file(fixture);
            fs::create_directories(path.parent_path());
            atomic_write(path, bytes);
            IndexRecord rec{bytes.size(), sha256_hex(bytes), utc_now_iso()};
            record_entry(cache_dir, key, rec);
            return make_entry(key, path, rec);
        }
    }

    if (options.offline)
        throw Error(Errc::NetworkUnavailable,
                    "offline and no cached copy of " + key.season_code + "/" + key.league_code);

    std::unique_ptr<HttpTransport> owned;
    HttpTransport* transport = options.transport;
    if (!transport) {
        owned = make_http_transport();
        transport = owned.get();
    }
    const std::string url = expand_url_template(options.url_template, key);
    HttpTransport::Response res = transport->get(url);
    if (res.status == 404)
        throw Error(Errc::RemoteNotFound, url);
    if (res.status != 200)
        throw Error(Errc::NetworkUnavailable, url + " returned HTTP " + std::to_string(res.status));

    fs::create_directories(path.parent_path());
    atomic_write(path, res.body);
    IndexRecord rec{res.body.size(), sha256_hex(res.body), utc_now_iso()};
    record_entry(cache_dir, key, rec);
    return make_entry(key, path, rec);
}

std::vector<SeasonKey> parse_manifest(std::string_view text) {
    std::vector<SeasonKey> keys;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line =
            nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty() && line.front() != '#') {
            std::vector<std::string> fields = split_csv_line(line);
            if (fields.size() < 3 || fields.size() > 4)
                throw Error(Errc::ManifestMalformed,
                            "line " + std::to_string(line_no) + ": expected 3 or 4 fields");
            SeasonKey key;
            key.country = fields[0];
            key.league_code = fields[1];
            key.season_code = fields[2];
            key.display_name = fields.size() == 4 ? fields[3] : fields[1] + " " + fields[2];
            if (key.country.empty() || !valid_league_code(key.league_code))
                throw Error(Errc::ManifestMalformed,
                            "line " + std::to_string(line_no) + ": bad league code '" +
                                key.league_code + "'");
            if (!valid_season_code(key.season_code))
                throw Error(Errc::ManifestMalformed,
                            "line " + std::to_string(line_no) + ": bad season code '" +
                                key.season_code + "'");
            keys.push_back(std::move(key));
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    std::sort(keys.begin(), keys.end(), [](const SeasonKey& a, const SeasonKey& b) {
        return std::tie(a.country, a.league_code, a.season_code) <
               std::tie(b.country, b.league_code, b.season_code);
    });
    return keys;
}

std::vector<SeasonKey> list_manifest(const fs::path& manifest_path) {
    std::ifstream in(manifest_path, std::ios::binary);
    if (!in)
        throw Error(Errc::ManifestMalformed, "cannot open " + manifest_path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_manifest(buf.str());
}

std::string serialize_manifest(const std::vector<SeasonKey>& keys) {
    std::vector<SeasonKey> sorted = keys;
    std::sort(sorted.begin(), sorted.end(), [](const SeasonKey& a, const SeasonKey& b) {
        return std::tie(a.country, a.league_code, a.season_code) <
               std::tie(b.country, b.league_code, b.season_code);
    });
    std::string out;
    for (const SeasonKey& k : sorted) {
        out += csv_quote(k.country) + "," + csv_quote(k.league_code) + "," +
               csv_quote(k.season_code) + "," + csv_quote(k.display_name) + "\n";
    }
    return out;
}

}  // namespace leaguetrend
