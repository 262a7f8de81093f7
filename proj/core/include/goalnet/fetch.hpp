#pragma once

// Download of open-data match lists and event files into a local cache.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "goalnet/ingest.hpp"

namespace goalnet {

struct FetchOptions {
  // Root of the open-data tree; files are fetched from
  // {base_url}/matches/{competition}/{season}.json and {base_url}/events/{id}.json.
  std::string base_url;
  int competition_id = 2;
  int season_id = 27;
  std::size_t max_matches = 0;  // 0 = all
  int timeout_s = 30;
  int retries = 3;
  std::filesystem::path cache_dir;  // receives matches/... and events/...
};

struct FetchReport {
  std::vector<MatchId> match_ids;  // ascending
  std::size_t downloaded = 0;
  std::size_t from_cache = 0;
  std::filesystem::path events_dir;
};

// Files already in the cache are not downloaded again. Every event file,
// cached or fresh, must parse as a JSON array (ParseError naming the file).
// Matches that still fail after the configured retries are collected and
// reported together in one FetchError.
FetchReport fetch_season(const FetchOptions& options,
                         const std::function<void(const std::string&)>& log = {});

// Splits "https://host:port/a/b" into {"https://host:port", "/a/b"}.
std::pair<std::string, std::string> split_url(const std::string& url);

}  // namespace goalnet
