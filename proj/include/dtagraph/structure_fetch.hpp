#pragma once

// AlphaFold-DB structure client with an on-disk cache keyed by the remote
// filename AF-{accession}-F1-model_v{N}.pdb.

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dtagraph::dataset {

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// Performs one GET. Transport failures are reported by throwing IoError.
using HttpGet = std::function<HttpResponse(const std::string& url)>;

/// cpp-httplib backed transport (HTTP and HTTPS).
HttpGet make_http_client(std::chrono::seconds timeout = std::chrono::seconds(60));

struct FetchOptions {
  std::string base_url = "https://alphafold.ebi.ac.uk/files/";
  int newest_version = 6;  // probed downward to oldest_version
  int oldest_version = 1;
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
  std::function<void(std::chrono::milliseconds)> sleep;  // defaults to this_thread::sleep_for
};

std::string structure_filename(const std::string& accession, int version);

/// Highest-version cached file for the accession, if any.
std::optional<std::filesystem::path> cached_structure(const std::string& accession,
                                                      const std::filesystem::path& cache_dir);

struct FetchOutcome {
  std::string accession;
  std::optional<std::filesystem::path> path;
  std::string error;  // set when path is empty
};

class StructureFetcher {
 public:
  StructureFetcher(HttpGet get, FetchOptions options = {});

  /// Returns the cached path, downloading the newest available model on a miss.
  /// Throws NotFoundError when no model version exists remotely and IoError
  /// after `attempts` failed tries of a transient error.
  std::filesystem::path fetch(const std::string& accession, const std::filesystem::path& cache_dir);

  /// Fetches many accessions with at most `parallelism` concurrent downloads.
  std::vector<FetchOutcome> fetch_all(const std::vector<std::string>& accessions,
                                      const std::filesystem::path& cache_dir, std::size_t parallelism = 4);

  std::size_t request_count() const noexcept { return requests_.load(); }

 private:
  std::optional<HttpResponse> get_with_retry(const std::string& url, const std::string& accession);

  HttpGet get_;
  FetchOptions options_;
  std::atomic<std::size_t> requests_{0};
};

}  // namespace dtagraph::dataset
