#include "moeq/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "moeq/config.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint payload is little-endian; big-endian hosts need byte swaps");

namespace moeq {

namespace {

using nlohmann::json;

json header_json(Checkpoint& ckpt, std::vector<TensorView>& views) {
  json shapes = json::array();
  for (const TensorView& tv : views) {
    shapes.push_back({{"name", tv.name}, {"rows", tv.rows}, {"cols", tv.cols}});
  }
  json h;
  h["format_version"] = kCheckpointVersion;
  h["scenario"] = scenario_name(ckpt.config.scenario);
  h["role"] = ckpt.role;
  h["agent_kind"] = ckpt.net.is_moe() ? "ddqn-moe" : "ddqn";
  h["num_experts"] = ckpt.net.is_moe() ? ckpt.net.moe().num_experts : 0;
  h["seed"] = ckpt.config.seed;
  h["shapes"] = shapes;
  h["config"] = config_to_text(ckpt.config);
  return h;
}

std::vector<TensorView> net_views(PolicyNet& net) {
  return net.is_moe() ? tensor_views(net.moe()) : tensor_views(net.mlp());
}

void check_role(const std::string& role) {
  if (role != "good" && role != "adversary") {
    throw std::runtime_error("checkpoint: bad role '" + role + "'");
  }
}

}  // namespace

void save_checkpoint(const std::string& path, Checkpoint& ckpt) {
  check_role(ckpt.role);
  std::vector<TensorView> views = net_views(ckpt.net);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint '" + path + "'");
  out << kCheckpointMagic << kCheckpointVersion << "\n";
  out << header_json(ckpt, views).dump() << "\n";
  for (const TensorView& tv : views) {
    out.write(reinterpret_cast<const char*>(tv.data->data()),
              static_cast<std::streamsize>(tv.data->size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("short write for checkpoint '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint '" + path + "'");
  std::string magic, header_line;
  if (!std::getline(in, magic) || magic != std::string(kCheckpointMagic) +
                                               std::to_string(kCheckpointVersion)) {
    throw std::runtime_error("'" + path + "' is not a version-" +
                             std::to_string(kCheckpointVersion) + " checkpoint");
  }
  if (!std::getline(in, header_line)) {
    throw std::runtime_error("checkpoint '" + path + "' is missing its header");
  }
  json h = json::parse(header_line);

  RunConfig config = parse_config_text(h.at("config").get<std::string>(), path + " (header)");
  const std::string role = h.at("role").get<std::string>();
  check_role(role);
  const std::string kind = h.at("agent_kind").get<std::string>();
  const bool good_side = role == "good";
  const int dim = observation_dim(config.scenario, good_side);

  PolicyNet net = [&] {
    if (kind == "ddqn-moe") {
      const int k = h.at("num_experts").get<int>();
      return PolicyNet(MoeQNetwork(dim, kNumActions, k));
    }
    if (kind == "ddqn") return PolicyNet(MlpParams(dim, kPlainHidden1, kPlainHidden2, kNumActions));
    throw std::runtime_error("checkpoint: unknown agent kind '" + kind + "'");
  }();

  std::vector<TensorView> views = net_views(net);
  const json& shapes = h.at("shapes");
  if (shapes.size() != views.size()) {
    throw std::runtime_error("checkpoint '" + path + "': shape table size mismatch");
  }
  for (std::size_t i = 0; i < views.size(); ++i) {
    const json& s = shapes[i];
    if (s.at("name") != views[i].name || s.at("rows") != views[i].rows ||
        s.at("cols") != views[i].cols) {
      throw std::runtime_error("checkpoint '" + path + "': shape mismatch at tensor '" +
                               views[i].name + "'");
    }
  }
  for (TensorView& tv : views) {
    in.read(reinterpret_cast<char*>(tv.data->data()),
            static_cast<std::streamsize>(tv.data->size() * sizeof(double)));
    if (!in) throw std::runtime_error("checkpoint '" + path + "': truncated payload");
  }
  char extra;
  if (in.read(&extra, 1)) {
    throw std::runtime_error("checkpoint '" + path + "': trailing bytes after payload");
  }
  return Checkpoint(std::move(config), role, std::move(net));
}

std::string checkpoint_to_json(Checkpoint& ckpt) {
  std::vector<TensorView> views = net_views(ckpt.net);
  json h = header_json(ckpt, views);
  json payload = json::array();
  for (const TensorView& tv : views) {
    for (double x : *tv.data) payload.push_back(x);
  }
  h["payload"] = std::move(payload);
  return h.dump(2) + "\n";
}

}  // namespace moeq
