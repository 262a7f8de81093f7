#include <httplib.h>

#include <atomic>
#include <fstream>
#include <set>
#include <thread>

#include "doctest.h"
#include "goalnet/error.hpp"
#include "goalnet/fetch.hpp"
#include "test_util.hpp"

using namespace goalnet;

namespace {

// Local stand-in for the open-data host: three matches, with optional
// missing or malformed event files.
class FakeHost {
 public:
  FakeHost(std::set<MatchId> missing = {}, std::set<MatchId> malformed = {})
      : missing_(std::move(missing)), malformed_(std::move(malformed)) {
    server_.Get("/data/matches/2/27.json", [this](const httplib::Request&, httplib::Response& res) {
      ++requests_;
      res.set_content(R"([{"match_id": 30}, {"match_id": 10}, {"match_id": 20}])", "application/json");
    });
    server_.Get(R"(/data/events/(\d+)\.json)", [this](const httplib::Request& req, httplib::Response& res) {
      ++requests_;
      const MatchId id = std::stoll(req.matches[1]);
      if (missing_.contains(id)) {
        res.status = 404;
        return;
      }
      res.set_content(malformed_.contains(id) ? "[{\"id\": " : "[]", "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeHost() {
    server_.stop();
    thread_.join();
  }
  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/data"; }
  int requests() const { return requests_; }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> requests_{0};
  std::set<MatchId> missing_, malformed_;
};

FetchOptions options(const std::string& base, const std::filesystem::path& cache) {
  FetchOptions o;
  o.base_url = base;
  o.cache_dir = cache;
  o.retries = 0;
  o.timeout_s = 2;
  return o;
}

}  // namespace

TEST_CASE("empty cache downloads everything, warm cache needs no network") {
  const auto cache = testutil::scratch_dir("fetch_warm");
  std::string base;
  {
    FakeHost host;
    base = host.base_url();
    const auto r = fetch_season(options(base, cache));
    CHECK(r.match_ids == std::vector<MatchId>{10, 20, 30});
    CHECK(r.downloaded == 4);
    CHECK(host.requests() == 4);
    for (MatchId id : r.match_ids) CHECK(std::filesystem::exists(r.events_dir / (std::to_string(id) + ".json")));
  }
  // host is gone now
  const auto again = fetch_season(options(base, cache));
  CHECK(again.match_ids == std::vector<MatchId>{10, 20, 30});
  CHECK(again.downloaded == 0);
  CHECK(again.from_cache == 4);
}

TEST_CASE("max_matches keeps the lowest ids") {
  FakeHost host;
  auto o = options(host.base_url(), testutil::scratch_dir("fetch_max"));
  o.max_matches = 2;
  CHECK(fetch_season(o).match_ids == std::vector<MatchId>{10, 20});
}

TEST_CASE("a corrupted cached file is named") {
  const auto cache = testutil::scratch_dir("fetch_corrupt");
  FakeHost host;
  (void)fetch_season(options(host.base_url(), cache));
  std::ofstream(cache / "events" / "20.json", std::ios::trunc) << "{oops";
  CHECK_THROWS_WITH_AS(fetch_season(options(host.base_url(), cache)), doctest::Contains("20.json"),
                       ParseError);
}

TEST_CASE("failed downloads are listed together") {
  FakeHost host({10, 30});
  CHECK_THROWS_WITH_AS(fetch_season(options(host.base_url(), testutil::scratch_dir("fetch_missing"))),
                       doctest::Contains("10, 30"), FetchError);
}

TEST_CASE("a malformed payload is a parse error naming the file and is not cached") {
  const auto cache = testutil::scratch_dir("fetch_malformed");
  FakeHost host({}, {20});
  CHECK_THROWS_WITH_AS(fetch_season(options(host.base_url(), cache)), doctest::Contains("20.json"),
                       ParseError);
  CHECK_FALSE(std::filesystem::exists(cache / "events" / "20.json"));
}

TEST_CASE("unreachable host without cache is a fetch error") {
  CHECK_THROWS_AS(fetch_season(options("http://127.0.0.1:1/data", testutil::scratch_dir("fetch_down"))),
                  FetchError);
}

TEST_CASE("url splitting") {
  CHECK(split_url("https://a.b:8080/x/y/") == std::pair<std::string, std::string>{"https://a.b:8080", "/x/y"});
  CHECK(split_url("http://h") == std::pair<std::string, std::string>{"http://h", ""});
  CHECK_THROWS_AS(split_url("nohost"), FetchError);
}
