#include "dtagraph/run_config.hpp"

#include "dtagraph/error.hpp"
#include "dtagraph/hashing.hpp"

namespace dtagraph {

namespace {

std::filesystem::path resolve(const std::string& p, const std::filesystem::path& base) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

RunConfig run_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  RunConfig c;
  try {
    c.dataset_dir = resolve(j.at("dataset").get<std::string>(), base_dir);
    c.structure_dir =
        j.contains("structures") ? resolve(j.at("structures").get<std::string>(), base_dir) : c.dataset_dir / "structures";
    if (j.contains("cache") && !j.at("cache").is_null()) c.cache_dir = resolve(j.at("cache").get<std::string>(), base_dir);
    if (j.contains("min_interactions") && !j.at("min_interactions").is_null())
      c.min_interactions = j.at("min_interactions").get<int>();
    if (j.contains("split")) {
      const auto& s = j.at("split");
      c.split.seed = s.value("seed", c.split.seed);
      c.split.test_fraction = s.value("test_fraction", c.split.test_fraction);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad config: ") + e.what());
  }
  if (j.contains("model")) c.model = nn::model_config_from_json(j.at("model"));
  if (j.contains("train")) c.train = training::train_config_from_json(j.at("train"));
  if (c.min_interactions && *c.min_interactions < 1) throw InvalidArgument("min_interactions must be >= 1");
  if (!(c.split.test_fraction > 0.0 && c.split.test_fraction < 1.0))
    throw InvalidArgument("split.test_fraction must lie in (0, 1)");
  return c;
}

RunConfig load_run_config(const std::filesystem::path& file) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(file));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
  return run_config_from_json(j, file.parent_path());
}

void apply_seed(RunConfig& c, std::uint64_t seed) {
  c.split.seed = seed;
  c.model.seed = seed;
  c.train.seed = seed;
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["dataset"] = c.dataset_dir.string();
  j["structures"] = c.structure_dir.string();
  j["cache"] = c.cache_dir ? nlohmann::json(c.cache_dir->string()) : nlohmann::json(nullptr);
  j["min_interactions"] = c.min_interactions ? nlohmann::json(*c.min_interactions) : nlohmann::json(nullptr);
  j["split"] = {{"seed", c.split.seed}, {"test_fraction", c.split.test_fraction}};
  j["model"] = nn::to_json(c.model);
  j["train"] = training::to_json(c.train);
  return j;
}

}  // namespace dtagraph
