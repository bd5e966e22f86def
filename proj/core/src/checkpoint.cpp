#include "ntn/checkpoint.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/core.h>

namespace ntn {

namespace {

constexpr const char* kMagic = "NTNCKPT1";

std::string join_sizes(const std::vector<int>& sizes) {
  std::string out;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(sizes[i]);
  }
  return out;
}

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw CheckpointError(fmt::format("bad size list '{}'", text));
    }
  }
  return out;
}

void put_doubles(std::ostream& os, std::span<const double> values) {
  for (double v : values) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    char bytes[8];
    for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xffu);
    os.write(bytes, 8);
  }
}

void get_doubles(std::istream& is, std::span<double> values) {
  for (double& v : values) {
    unsigned char bytes[8];
    if (!is.read(reinterpret_cast<char*>(bytes), 8)) throw CheckpointError("checkpoint blob is truncated");
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
    v = std::bit_cast<double>(bits);
  }
}

std::string expect_line(std::istream& is, const std::string& key) {
  std::string line;
  if (!std::getline(is, line)) throw CheckpointError(fmt::format("checkpoint header ends before '{}'", key));
  if (line.rfind(key + ' ', 0) != 0) throw CheckpointError(fmt::format("expected '{}' in checkpoint header, got '{}'", key, line));
  return line.substr(key.size() + 1);
}

template <typename T>
T parse_number(const std::string& text, const char* key) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw CheckpointError(fmt::format("bad {} '{}' in checkpoint header", key, text));
  return value;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Learners& l, const CheckpointMeta& meta) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw CheckpointError(fmt::format("cannot write checkpoint '{}'", path.string()));
  const ActionHeads h = l.actors.empty() ? ActionHeads{} : l.actors.front().heads();
  std::size_t blob = 0;
  os << kMagic << '\n';
  os << "seed " << meta.seed << '\n';
  os << "config_hash " << fmt::format("{:016x}", meta.config_hash) << '\n';
  os << "agents " << l.actors.size() << '\n';
  os << "heads " << h.lane1 << ',' << h.lane2 << ',' << h.accel_x << ',' << h.accel_y << '\n';
  for (std::size_t j = 0; j < l.actors.size(); ++j) {
    os << "actor " << j << ' ' << join_sizes(l.actors[j].network().layer_sizes()) << '\n';
    blob += 2 * l.actors[j].network().parameter_count();
  }
  os << "critic " << join_sizes(l.critic.network().layer_sizes()) << '\n';
  blob += 2 * l.critic.network().parameter_count();
  os << "value_scale " << fmt::format("{}", l.value_scale) << '\n';
  os << "blob " << blob << '\n';
  for (std::size_t j = 0; j < l.actors.size(); ++j) {
    put_doubles(os, l.actors[j].network().parameters());
    put_doubles(os, l.actor_opt[j].mean_square());
  }
  put_doubles(os, l.critic.network().parameters());
  put_doubles(os, l.critic_opt.mean_square());
  if (!os) throw CheckpointError(fmt::format("failed writing checkpoint '{}'", path.string()));
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path, std::size_t observation_size,
                                 const ActionHeads& heads, int agents) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw CheckpointError(fmt::format("cannot open checkpoint '{}'", path.string()));
  std::string line;
  if (!std::getline(is, line) || line != kMagic) throw CheckpointError("not a checkpoint file (bad magic)");
  LoadedCheckpoint out;
  try {
    out.meta.seed = std::stoull(expect_line(is, "seed"));
    out.meta.config_hash = std::stoull(expect_line(is, "config_hash"), nullptr, 16);
  } catch (const std::logic_error&) {
    throw CheckpointError("bad seed or config hash in checkpoint header");
  }
  const int file_agents = parse_number<int>(expect_line(is, "agents"), "agents");
  if (file_agents != agents) throw CheckpointError(fmt::format("checkpoint has {} agents, expected {}", file_agents, agents));
  const std::vector<int> hs = parse_sizes(expect_line(is, "heads"));
  if (hs != std::vector<int>{heads.lane1, heads.lane2, heads.accel_x, heads.accel_y}) {
    throw CheckpointError("checkpoint action heads do not match the scenario");
  }
  std::vector<Mlp> actor_nets;
  for (int j = 0; j < agents; ++j) {
    const std::string rest = expect_line(is, "actor");
    const auto space = rest.find(' ');
    if (space == std::string::npos || rest.substr(0, space) != std::to_string(j)) {
      throw CheckpointError(fmt::format("malformed actor line '{}'", rest));
    }
    const std::vector<int> sizes = parse_sizes(rest.substr(space + 1));
    if (sizes.size() < 2 || sizes.front() != static_cast<int>(observation_size) || sizes.back() != heads.total()) {
      throw CheckpointError(fmt::format("actor {} shape does not match the scenario", j));
    }
    actor_nets.emplace_back(sizes);
  }
  const std::vector<int> critic_sizes = parse_sizes(expect_line(is, "critic"));
  if (critic_sizes.size() < 2 || critic_sizes.front() != agents * (static_cast<int>(observation_size) + heads.total()) ||
      critic_sizes.back() != 1) {
    throw CheckpointError("critic shape does not match the scenario");
  }
  Mlp critic_net(critic_sizes);
  const double value_scale = parse_number<double>(expect_line(is, "value_scale"), "value_scale");
  if (!(value_scale > 0.0) || !std::isfinite(value_scale)) throw CheckpointError("value_scale must be positive");
  std::size_t expected = 2 * critic_net.parameter_count();
  for (const Mlp& m : actor_nets) expected += 2 * m.parameter_count();
  if (parse_number<std::size_t>(expect_line(is, "blob"), "blob") != expected) throw CheckpointError("checkpoint blob size does not match shapes");

  for (Mlp& m : actor_nets) {
    get_doubles(is, m.parameters());
    Rmsprop opt(m.parameter_count(), RmspropConfig{});
    get_doubles(is, opt.mean_square());
    out.learners.actors.emplace_back(std::move(m), heads);
    out.learners.actor_opt.push_back(std::move(opt));
  }
  get_doubles(is, critic_net.parameters());
  out.learners.critic_opt = Rmsprop(critic_net.parameter_count(), RmspropConfig{});
  get_doubles(is, out.learners.critic_opt.mean_square());
  out.learners.critic = CentralCritic(std::move(critic_net), heads, agents);
  out.learners.value_scale = value_scale;
  out.learners.value_scale_set = true;
  if (is.peek() != std::char_traits<char>::eof()) throw CheckpointError("trailing bytes after checkpoint blob");
  return out;
}

}  // namespace ntn
