#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "dtagraph/error.hpp"
#include "dtagraph/protein_graph.hpp"
#include "dtagraph/structure_fetch.hpp"
#include "support/fixtures.hpp"

// After Eigen: resolv.h (pulled in here) defines a _res macro.
#include "httplib.h"

using namespace dtagraph;
using namespace dtagraph::dataset;
namespace fs = std::filesystem;

namespace {

// In-memory stand-in for the remote database.
struct FakeRemote {
  std::map<std::string, HttpResponse> files;  // keyed by filename
  std::vector<std::string> urls;
  int failures_before_success = 0;
  std::mutex mu;

  HttpGet transport() {
    return [this](const std::string& url) {
      std::lock_guard lock(mu);
      urls.push_back(url);
      if (failures_before_success > 0) {
        --failures_before_success;
        throw IoError("connection reset");
      }
      const auto name = url.substr(url.rfind('/') + 1);
      auto it = files.find(name);
      return it == files.end() ? HttpResponse{404, "not found"} : it->second;
    };
  }
};

std::vector<std::chrono::milliseconds> sleeps;

FetchOptions quick_options() {
  FetchOptions o;
  o.base_url = "https://example.invalid/files";
  o.newest_version = 4;
  o.initial_backoff = std::chrono::milliseconds(100);
  o.sleep = [](std::chrono::milliseconds d) { sleeps.push_back(d); };
  return o;
}

}  // namespace

TEST(StructureFilename, Pattern) {
  EXPECT_EQ(structure_filename("P12345", 4), "AF-P12345-F1-model_v4.pdb");
}

TEST(FetchStructure, CacheHitMakesNoRequest) {
  test::TempDir t;
  std::ofstream(t / "AF-P11111-F1-model_v2.pdb") << test::helix_pdb("MKV");
  FakeRemote remote;
  StructureFetcher f(remote.transport(), quick_options());
  EXPECT_EQ(f.fetch("P11111", t.path()), t / "AF-P11111-F1-model_v2.pdb");
  EXPECT_EQ(f.request_count(), 0u);
  EXPECT_TRUE(remote.urls.empty());
}

TEST(FetchStructure, CachePrefersNewestVersion) {
  test::TempDir t;
  std::ofstream(t / "AF-P11111-F1-model_v2.pdb") << "x";
  std::ofstream(t / "AF-P11111-F1-model_v10.pdb") << "x";
  std::ofstream(t / "AF-P111110-F1-model_v11.pdb") << "x";
  EXPECT_EQ(cached_structure("P11111", t.path()), t / "AF-P11111-F1-model_v10.pdb");
  EXPECT_FALSE(cached_structure("Q00000", t.path()));
  EXPECT_THROW(cached_structure("../etc", t.path()), InvalidArgument);
}

TEST(FetchStructure, UnknownAccessionIsNotFound) {
  test::TempDir t;
  FakeRemote remote;
  StructureFetcher f(remote.transport(), quick_options());
  try {
    f.fetch("ZZZZZZ", t.path());
    FAIL();
  } catch (const NotFoundError& e) {
    EXPECT_NE(std::string(e.what()).find("ZZZZZZ"), std::string::npos);
  }
  EXPECT_EQ(remote.urls.size(), 4u);  // v4 down to v1, one try each
  EXPECT_TRUE(fs::is_empty(t.path()));
}

TEST(FetchStructure, DownloadsNewestAvailableVersion) {
  test::TempDir t;
  FakeRemote remote;
  const auto pdb = test::helix_pdb("MKTAYIAKQR");
  remote.files["AF-P22222-F1-model_v3.pdb"] = {200, pdb};
  remote.files["AF-P22222-F1-model_v1.pdb"] = {200, "old"};
  StructureFetcher f(remote.transport(), quick_options());
  const auto path = f.fetch("P22222", t.path() / "cache");
  EXPECT_EQ(path.filename(), "AF-P22222-F1-model_v3.pdb");
  EXPECT_EQ(remote.urls.front(), "https://example.invalid/files/AF-P22222-F1-model_v4.pdb");
  std::ifstream in(path);
  const std::string body{std::istreambuf_iterator<char>(in), {}};
  EXPECT_EQ(body, pdb);
  EXPECT_EQ(structure::parse_structure(body).size(), 10u);
  for (const auto& e : fs::directory_iterator(t.path() / "cache"))
    EXPECT_EQ(e.path().extension(), ".pdb") << "leftover temp file " << e.path();
  const auto before = f.request_count();
  f.fetch("P22222", t.path() / "cache");
  EXPECT_EQ(f.request_count(), before);
}

TEST(FetchStructure, RetriesWithExponentialBackoff) {
  test::TempDir t;
  FakeRemote remote;
  remote.files["AF-P33333-F1-model_v4.pdb"] = {200, test::helix_pdb("MK")};
  remote.failures_before_success = 2;
  sleeps.clear();
  StructureFetcher f(remote.transport(), quick_options());
  EXPECT_NO_THROW(f.fetch("P33333", t.path()));
  EXPECT_EQ(f.request_count(), 3u);
  EXPECT_EQ(sleeps, (std::vector<std::chrono::milliseconds>{std::chrono::milliseconds(100),
                                                             std::chrono::milliseconds(200)}));
}

TEST(FetchStructure, GivesUpAfterThreeAttempts) {
  test::TempDir t;
  FakeRemote remote;
  remote.failures_before_success = 100;
  sleeps.clear();
  StructureFetcher f(remote.transport(), quick_options());
  EXPECT_THROW(f.fetch("P44444", t.path()), IoError);
  EXPECT_EQ(f.request_count(), 3u);
  EXPECT_EQ(sleeps.size(), 2u);
  EXPECT_TRUE(fs::is_empty(t.path()));
}

TEST(FetchStructure, ServerErrorIsRetried) {
  test::TempDir t;
  FakeRemote remote;
  remote.files["AF-P55555-F1-model_v4.pdb"] = {503, "busy"};
  StructureFetcher f(remote.transport(), quick_options());
  EXPECT_THROW(f.fetch("P55555", t.path()), IoError);
  EXPECT_EQ(f.request_count(), 3u);
}

TEST(FetchStructure, NonPdbBodyRejected) {
  test::TempDir t;
  FakeRemote remote;
  remote.files["AF-P66666-F1-model_v4.pdb"] = {200, "<html>oops</html>"};
  StructureFetcher f(remote.transport(), quick_options());
  EXPECT_THROW(f.fetch("P66666", t.path()), IoError);
  EXPECT_FALSE(cached_structure("P66666", t.path()));
}

TEST(FetchStructure, FetchAllReportsPerAccession) {
  test::TempDir t;
  FakeRemote remote;
  for (const char* acc : {"A1", "A2", "A3", "A4", "A5"})
    remote.files[structure_filename(acc, 2)] = {200, test::helix_pdb("MKV")};
  StructureFetcher f(remote.transport(), quick_options());
  const auto out = f.fetch_all({"A1", "A2", "ZZZZZZ", "A3", "A4", "A5"}, t.path(), 4);
  ASSERT_EQ(out.size(), 6u);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i == 2) {
      EXPECT_FALSE(out[i].path);
      EXPECT_NE(out[i].error.find("ZZZZZZ"), std::string::npos);
    } else {
      ASSERT_TRUE(out[i].path) << out[i].error;
      EXPECT_TRUE(fs::exists(*out[i].path));
    }
  }
}

TEST(HttpTransport, LocalServerRoundTrip) {
  httplib::Server server;
  const std::string pdb = test::helix_pdb("MKTAYIAKQRQISFVKSHFSRQ");
  server.Get(R"(/files/(.+))", [&](const httplib::Request& req, httplib::Response& res) {
    if (req.matches[1] == "AF-P77777-F1-model_v2.pdb") {
      res.set_content(pdb, "chemical/x-pdb");
    } else {
      res.status = 404;
    }
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  test::TempDir t;
  FetchOptions o = quick_options();
  o.base_url = "http://127.0.0.1:" + std::to_string(port) + "/files/";
  StructureFetcher f(make_http_client(std::chrono::seconds(5)), o);
  fs::path path;
  EXPECT_NO_THROW(path = f.fetch("P77777", t.path()));
  EXPECT_THROW(f.fetch("ZZZZZZ", t.path()), NotFoundError);
  server.stop();
  th.join();

  ASSERT_TRUE(fs::exists(path));
  std::ifstream in(path);
  const auto residues = structure::parse_structure(std::string{std::istreambuf_iterator<char>(in), {}});
  EXPECT_GE(residues.size(), 1u);
  EXPECT_EQ(structure::residue_sequence(residues), "MKTAYIAKQRQISFVKSHFSRQ");
}

TEST(HttpTransport, ConnectionFailureIsIoError) {
  auto get = make_http_client(std::chrono::seconds(1));
  EXPECT_THROW(get("http://127.0.0.1:1/x"), IoError);
  EXPECT_THROW(get("not a url"), IoError);
}
