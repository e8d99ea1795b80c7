#include "dtagraph/checkpoint.hpp"

#include <cstring>

#include "dtagraph/error.hpp"
#include "dtagraph/hashing.hpp"

namespace dtagraph {

namespace {
constexpr std::string_view kMagic = "GPCK1\n";
}

void save_checkpoint(const std::filesystem::path& path, nn::Model& model, const std::string& feature_version,
                     const nlohmann::json& metadata) {
  nlohmann::json header;
  header["model_config"] = nn::to_json(model.config());
  header["feature_version"] = feature_version;
  header["metadata"] = metadata;
  auto& shapes = header["parameters"] = nlohmann::json::array();
  std::size_t total = 0;
  for (auto* p : model.parameters()) {
    shapes.push_back({{"name", p->name}, {"rows", p->value.rows()}, {"cols", p->value.cols()}});
    total += static_cast<std::size_t>(p->value.size());
  }
  const std::string text = header.dump();
  std::string out;
  out.reserve(kMagic.size() + 8 + text.size() + total * sizeof(double));
  out += kMagic;
  const std::uint64_t len = text.size();
  out.append(reinterpret_cast<const char*>(&len), sizeof len);
  out += text;
  for (auto* p : model.parameters()) {
    // column-major storage, matching Eigen's default layout
    out.append(reinterpret_cast<const char*>(p->value.data()), static_cast<std::size_t>(p->value.size()) * sizeof(double));
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  write_file_atomic(path, out);
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path, const std::string& expected_feature_version) {
  const std::string data = read_file(path);
  auto corrupt = [&](const std::string& why) { return IntegrityError("checkpoint " + path.string() + ": " + why); };
  if (data.size() < kMagic.size() + 8 || std::string_view(data).substr(0, kMagic.size()) != kMagic)
    throw corrupt("not a checkpoint file");
  std::uint64_t len;
  std::memcpy(&len, data.data() + kMagic.size(), sizeof len);
  std::size_t pos = kMagic.size() + 8;
  if (len > data.size() - pos) throw corrupt("truncated header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(data.substr(pos, len));
  } catch (const nlohmann::json::exception& e) {
    throw corrupt(std::string("bad header: ") + e.what());
  }
  pos += len;

  const std::string version = header.value("feature_version", "");
  if (version != expected_feature_version)
    throw IntegrityError("checkpoint " + path.string() + " was trained on featurization version " + version +
                         ", current version is " + expected_feature_version);

  LoadedCheckpoint out{nn::Model(nn::model_config_from_json(header.at("model_config"))), version,
                       header.value("metadata", nlohmann::json::object())};
  auto params = out.model.parameters();
  const auto& shapes = header.at("parameters");
  if (shapes.size() != params.size()) throw corrupt("parameter count does not match the model config");
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto* p = params[i];
    if (shapes[i].at("name").get<std::string>() != p->name || shapes[i].at("rows").get<Eigen::Index>() != p->value.rows() ||
        shapes[i].at("cols").get<Eigen::Index>() != p->value.cols())
      throw corrupt("parameter " + p->name + " has a different shape");
    const std::size_t bytes = static_cast<std::size_t>(p->value.size()) * sizeof(double);
    if (data.size() - pos < bytes) throw corrupt("truncated parameter data");
    std::memcpy(p->value.data(), data.data() + pos, bytes);
    pos += bytes;
  }
  if (pos != data.size()) throw corrupt("trailing bytes after parameter data");
  return out;
}

void copy_parameters(nn::Model& from, nn::Model& to) {
  auto a = from.parameters();
  auto b = to.parameters();
  if (a.size() != b.size()) throw InvalidArgument("models have different parameter layouts");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i]->value.rows() != b[i]->value.rows() || a[i]->value.cols() != b[i]->value.cols())
      throw InvalidArgument("parameter " + a[i]->name + " differs in shape");
    b[i]->value = a[i]->value;
  }
}

}  // namespace dtagraph
