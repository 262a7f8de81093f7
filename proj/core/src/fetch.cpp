#include "goalnet/fetch.hpp"

#include <httplib.h>

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "goalnet/error.hpp"

namespace goalnet {

namespace fs = std::filesystem;

std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw FetchError("bad URL (no scheme): " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, ""};
  std::string path = url.substr(path_start);
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {url.substr(0, path_start), path};
}

namespace {

std::string get_with_retries(httplib::Client& client, const std::string& path, int retries) {
  std::string last_error;
  for (int attempt = 0; attempt <= retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(200 * attempt));
    auto res = client.Get(path);
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) return res->body;
    last_error = "HTTP " + std::to_string(res->status);
    if (res->status == 404) break;  // not worth retrying
  }
  throw FetchError("GET " + path + " failed: " + last_error);
}

void write_atomically(const fs::path& path, const std::string& body) {
  fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".part";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << body;
    if (!out) throw FetchError("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// An event file must be a JSON array of objects.
void check_event_payload(const std::string& body, const std::string& name) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(name + ": malformed event payload: " + e.what());
  }
  if (!doc.is_array()) throw ParseError(name + ": event payload is not an array");
}

}  // namespace

FetchReport fetch_season(const FetchOptions& o,
                         const std::function<void(const std::string&)>& log) {
  const auto [host, prefix] = split_url(o.base_url);
  httplib::Client client(host);
  client.set_follow_location(true);
  client.set_connection_timeout(o.timeout_s, 0);
  client.set_read_timeout(o.timeout_s, 0);

  FetchReport report;
  const std::string list_rel =
      "matches/" + std::to_string(o.competition_id) + "/" + std::to_string(o.season_id) + ".json";
  const fs::path list_path = o.cache_dir / list_rel;
  std::string list_body;
  if (fs::exists(list_path)) {
    list_body = read_file(list_path);
    ++report.from_cache;
  } else {
    list_body = get_with_retries(client, prefix + "/" + list_rel, o.retries);
    write_atomically(list_path, list_body);
    ++report.downloaded;
  }

  try {
    const auto matches = nlohmann::json::parse(list_body);
    for (const auto& m : matches) report.match_ids.push_back(m.at("match_id").get<MatchId>());
  } catch (const nlohmann::json::exception& e) {
    throw FetchError(list_rel + ": bad match list: " + e.what());
  }
  std::sort(report.match_ids.begin(), report.match_ids.end());
  if (o.max_matches > 0 && report.match_ids.size() > o.max_matches) {
    report.match_ids.resize(o.max_matches);
  }

  report.events_dir = o.cache_dir / "events";
  std::vector<MatchId> missing;
  std::string last_error;
  for (std::size_t i = 0; i < report.match_ids.size(); ++i) {
    const std::string rel = "events/" + std::to_string(report.match_ids[i]) + ".json";
    const fs::path path = o.cache_dir / rel;
    if (fs::exists(path)) {
      check_event_payload(read_file(path), path.string());
      ++report.from_cache;
      continue;
    }
    std::string body;
    try {
      body = get_with_retries(client, prefix + "/" + rel, o.retries);
    } catch (const FetchError& e) {
      missing.push_back(report.match_ids[i]);
      last_error = e.what();
      continue;
    }
    check_event_payload(body, rel);
    write_atomically(path, body);
    ++report.downloaded;
    if (log) {
      log("fetched " + rel + " (" + std::to_string(i + 1) + "/" +
          std::to_string(report.match_ids.size()) + ")");
    }
  }
  if (!missing.empty()) {
    std::string ids;
    for (MatchId id : missing) ids += (ids.empty() ? "" : ", ") + std::to_string(id);
    throw FetchError(std::to_string(missing.size()) + " match file(s) missing: " + ids +
                     " (last error: " + last_error + ")");
  }
  return report;
}

}  // namespace goalnet
