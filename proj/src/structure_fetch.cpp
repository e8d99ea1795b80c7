#include "dtagraph/structure_fetch.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <regex>
#include <thread>

#include "httplib.h"

#include "dtagraph/error.hpp"
#include "dtagraph/hashing.hpp"

namespace dtagraph::dataset {

namespace fs = std::filesystem;

namespace {

void require_valid_accession(const std::string& accession) {
  const bool ok = !accession.empty() && std::all_of(accession.begin(), accession.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
  if (!ok) throw InvalidArgument("invalid accession '" + accession + "'");
}

}  // namespace

HttpGet make_http_client(std::chrono::seconds timeout) {
  return [timeout](const std::string& url) -> HttpResponse {
    static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(url, m, kUrl)) throw IoError("malformed URL '" + url + "'");
    httplib::Client client(m[1].str());
    client.set_follow_location(true);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    const std::string path = m[2].matched ? m[2].str() : "/";
    auto res = client.Get(path);
    if (!res) throw IoError("request to '" + url + "' failed: " + httplib::to_string(res.error()));
    return {res->status, std::move(res->body)};
  };
}

std::string structure_filename(const std::string& accession, int version) {
  return "AF-" + accession + "-F1-model_v" + std::to_string(version) + ".pdb";
}

std::optional<fs::path> cached_structure(const std::string& accession, const fs::path& cache_dir) {
  require_valid_accession(accession);
  if (!fs::is_directory(cache_dir)) return std::nullopt;
  const std::regex pattern("AF-" + accession + R"(-F1-model_v(\d+)\.pdb)");
  std::optional<fs::path> best;
  int best_version = -1;
  for (const auto& entry : fs::directory_iterator(cache_dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    std::smatch m;
    if (!std::regex_match(name, m, pattern)) continue;
    const int version = std::stoi(m[1].str());
    if (version > best_version) {
      best_version = version;
      best = entry.path();
    }
  }
  return best;
}

StructureFetcher::StructureFetcher(HttpGet get, FetchOptions options)
    : get_(std::move(get)), options_(std::move(options)) {
  if (!get_) throw InvalidArgument("StructureFetcher needs a transport");
  if (options_.attempts < 1) throw InvalidArgument("attempts must be >= 1");
  if (!options_.sleep) options_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  if (!options_.base_url.empty() && options_.base_url.back() != '/') options_.base_url.push_back('/');
}

// nullopt means the server answered 404.
std::optional<HttpResponse> StructureFetcher::get_with_retry(const std::string& url, const std::string& accession) {
  auto backoff = options_.initial_backoff;
  std::string last_error;
  for (int attempt = 1; attempt <= options_.attempts; ++attempt) {
    ++requests_;
    try {
      HttpResponse res = get_(url);
      if (res.status == 200) return res;
      if (res.status == 404) return std::nullopt;
      last_error = "HTTP " + std::to_string(res.status);
    } catch (const IoError& e) {
      last_error = e.what();
    }
    if (attempt < options_.attempts) {
      options_.sleep(backoff);
      backoff *= 2;
    }
  }
  throw IoError("fetching structure for " + accession + " failed after " + std::to_string(options_.attempts) +
                " attempts: " + last_error);
}

fs::path StructureFetcher::fetch(const std::string& accession, const fs::path& cache_dir) {
  if (auto hit = cached_structure(accession, cache_dir)) return *hit;
  fs::create_directories(cache_dir);
  for (int version = options_.newest_version; version >= options_.oldest_version; --version) {
    const std::string name = structure_filename(accession, version);
    auto res = get_with_retry(options_.base_url + name, accession);
    if (!res) continue;
    if (res->body.find("ATOM  ") == std::string::npos) {
      throw IoError("response for " + accession + " is not a PDB file");
    }
    const fs::path target = cache_dir / name;
    write_file_atomic(target, res->body);
    return target;
  }
  throw NotFoundError("accession " + accession + " not found in the structure database");
}

std::vector<FetchOutcome> StructureFetcher::fetch_all(const std::vector<std::string>& accessions,
                                                      const fs::path& cache_dir, std::size_t parallelism) {
  std::vector<FetchOutcome> out(accessions.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= accessions.size()) return;
      out[i].accession = accessions[i];
      try {
        out[i].path = fetch(accessions[i], cache_dir);
      } catch (const Error& e) {
        out[i].error = e.what();
      }
    }
  };
  fs::create_directories(cache_dir);
  const std::size_t threads = std::max<std::size_t>(1, std::min(parallelism, accessions.size()));
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  pool.clear();  // join
  return out;
}

}  // namespace dtagraph::dataset
