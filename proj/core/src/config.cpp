#include "ntn/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/core.h>

#include "ntn/baselines.hpp"

namespace ntn {

namespace pt = boost::property_tree;

namespace {

const std::set<std::string> kSections{"run", "scenario", "lane1", "lane2", "lane_mid", "channel",
                                      "power", "reward", "marl", "baseline"};
const std::set<std::string> kSchemes{"direct", "sat_only_1", "sat_only_2", "sat_only_3", "sat_ground"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

class Section {
 public:
  Section(const pt::ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

  bool present() const { return tree_ != nullptr; }

  std::optional<std::string> optional(const std::string& key) {
    used_.insert(key);
    if (!tree_) return std::nullopt;
    const auto child = tree_->get_child_optional(pt::ptree::path_type(key, '\0'));
    if (!child) return std::nullopt;
    return trim(child->data());
  }

  std::string text(const std::string& key) {
    auto v = optional(key);
    if (!v) throw ConfigError(fmt::format("missing required key [{}] {}", name_, key));
    return *v;
  }

  double parse_number(const std::string& key, const std::string& v) const {
    double x = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
      throw ConfigError(fmt::format("[{}] {}: '{}' is not a number", name_, key, v));
    }
    return x;
  }

  double number(const std::string& key) { return parse_number(key, text(key)); }

  std::optional<double> optional_number(const std::string& key) {
    auto v = optional(key);
    if (!v || *v == "auto") return std::nullopt;
    return parse_number(key, *v);
  }

  long long integer(const std::string& key) { return parse_integer(key, text(key)); }

  long long parse_integer(const std::string& key, const std::string& v) const {
    long long x = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
      throw ConfigError(fmt::format("[{}] {}: '{}' is not an integer", name_, key, v));
    }
    return x;
  }

  std::vector<double> numbers(const std::string& key, const std::string& v, std::size_t count) const {
    const auto parts = split(v, ',');
    if (parts.size() != count) {
      throw ConfigError(fmt::format("[{}] {}: expected {} comma separated values, got '{}'", name_, key, count, v));
    }
    std::vector<double> out;
    for (const std::string& p : parts) out.push_back(parse_number(key, p));
    return out;
  }

  Vec3 point_km(const std::string& key) {
    const auto v = numbers(key, text(key), 3);
    return Vec3{km(v[0]), km(v[1]), km(v[2])};
  }

  // "x,y; x,y; ..." pairs
  std::vector<std::array<double, 2>> pairs(const std::string& key) {
    std::vector<std::array<double, 2>> out;
    for (const std::string& item : split(text(key), ';')) {
      const auto v = numbers(key, item, 2);
      out.push_back({v[0], v[1]});
    }
    return out;
  }

  const std::string& name() const { return name_; }

  void finish() const {
    if (!tree_) return;
    for (const auto& [key, child] : *tree_) {
      if (!used_.count(key)) throw ConfigError(fmt::format("unknown key [{}] {}", name_, key));
    }
  }

 private:
  const pt::ptree* tree_;
  std::string name_;
  std::set<std::string> used_;
};

template <typename F>
auto wrap(const std::string& section, const std::string& key, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(fmt::format("[{}] {}: {}", section, key, e.what()));
  }
}

OrbitalLane read_lane(Section& s) {
  OrbitalLane lane;
  lane.x_m = km(s.number("x_km"));
  lane.y_min_m = km(s.number("y_min_km"));
  lane.altitude_m = km(s.number("altitude_km"));
  lane.speed_mps = s.number("speed_mps");
  lane.segment_m = km(s.number("segment_km"));
  lane.circumference_m = km(s.number("circumference_km"));
  lane.spacing_m = km(s.number("spacing_km"));
  lane.visible_count = static_cast<int>(s.integer("visible_count"));
  lane.phase_m = km(s.optional_number("phase_km").value_or(0.0));
  wrap(s.name(), "lane", [&] {
    validate_lane(lane);
    return 0;
  });
  return lane;
}

AsnrConvention parse_asnr(const std::string& v) {
  if (v == "squared_power") return AsnrConvention::squared_power;
  if (v == "linear_power") return AsnrConvention::linear_power;
  throw ConfigError(fmt::format("[channel] asnr_convention: unknown value '{}'", v));
}

const char* asnr_name(AsnrConvention c) { return c == AsnrConvention::squared_power ? "squared_power" : "linear_power"; }

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  pt::ptree root;
  try {
    std::istringstream is{std::string(text)};
    pt::read_ini(is, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("config syntax error at line {}: {}", e.line(), e.message()));
  }
  std::map<std::string, const pt::ptree*> sections;
  for (const auto& [name, child] : root) {
    if (!kSections.count(name)) throw ConfigError(fmt::format("unknown section [{}]", name));
    if (child.empty() && !child.data().empty()) throw ConfigError(fmt::format("key '{}' outside any section", name));
    sections[name] = &child;
  }
  auto section = [&](const std::string& name) {
    const auto it = sections.find(name);
    return Section(it == sections.end() ? nullptr : it->second, name);
  };

  ExperimentConfig c;

  Section run = section("run");
  c.train.seed = static_cast<std::uint64_t>(run.integer("seed"));
  c.seeds = {c.train.seed};
  if (auto v = run.optional("seeds")) {
    c.seeds.clear();
    for (const std::string& item : split(*v, ',')) c.seeds.push_back(static_cast<std::uint64_t>(run.parse_integer("seeds", item)));
  }
  c.out_dir = run.text("out_dir");
  run.finish();

  Section sc = section("scenario");
  Scenario& s = c.scenario;
  s.src = sc.point_km("src_km");
  s.dst = sc.point_km("dst_km");
  s.uav_altitude_m = km(sc.number("uav_altitude_km"));
  s.uav_initial_positions.clear();
  for (const auto& xy : sc.pairs("uav_xy_km")) s.uav_initial_positions.push_back(Vec3{km(xy[0]), km(xy[1]), s.uav_altitude_m});
  s.uav_initial_velocities.clear();
  for (const auto& v : sc.pairs("uav_velocity_mps")) s.uav_initial_velocities.push_back(Vec3{v[0], v[1], 0.0});
  s.dt_s = sc.number("slot_s");
  s.slots = static_cast<int>(sc.integer("slots"));
  s.max_accel = sc.number("max_accel_mps2");
  s.accel_levels = static_cast<int>(sc.integer("accel_levels"));
  sc.finish();

  Section l1 = section("lane1");
  s.lane1 = read_lane(l1);
  l1.finish();
  Section l2 = section("lane2");
  s.lane2 = read_lane(l2);
  l2.finish();
  Section lm = section("lane_mid");
  s.lane_mid.reset();
  if (lm.present()) {
    s.lane_mid = read_lane(lm);
    lm.finish();
  }

  Section ch = section("channel");
  ChannelConfig cc;
  cc.rf_bandwidth_hz = ch.number("rf_bandwidth_hz");
  cc.fso_bandwidth_hz = ch.number("fso_bandwidth_hz");
  cc.gamma0 = ch.number("gamma0");
  cc.visibility_km = ch.number("visibility_km");
  cc.wavelength_nm = ch.number("wavelength_nm");
  cc.asnr_db = ch.number("fso_asnr_db");
  cc.asnr_convention = parse_asnr(ch.optional("asnr_convention").value_or("squared_power"));
  cc.apr_alpha = ch.number("apr_alpha");
  ch.finish();
  s.channel = wrap("channel", "parameters", [&] { return ChannelParams(cc); });

  Section pw = section("power");
  s.power.c1 = pw.number("c1");
  s.power.c2 = pw.number("c2");
  s.power.gravity = pw.number("gravity");
  s.power.mass_kg = pw.number("mass_kg");
  s.power.v_min_mps = pw.number("v_min_mps");
  pw.finish();

  wrap("scenario", "consistency", [&] {
    validate_scenario(s);
    return 0;
  });

  Section rw = section("reward");
  c.mode = wrap("reward", "mode", [&] { return parse_reward_mode(rw.text("mode")); });
  c.objective = wrap("reward", "objective", [&] { return parse_objective(rw.text("objective")); });
  c.d_max_m = km(rw.number("d_max_km"));
  c.sigma_d_m = km(rw.number("sigma_d_km"));
  c.mu_r = rw.optional_number("mu_r_bps");
  c.sigma_r = rw.optional_number("sigma_r_bps");
  c.mu_e = rw.optional_number("mu_e_j");
  c.sigma_e = rw.optional_number("sigma_e_j");
  rw.finish();
  if (c.mode == RewardMode::fairness && s.agents() != 2) throw ConfigError("[reward] mode: fairness needs exactly two UAVs");

  Section ml = section("marl");
  TrainConfig& t = c.train;
  t.episodes = static_cast<int>(ml.integer("episodes"));
  t.gamma = ml.number("gamma");
  t.actor_lr = ml.number("actor_lr");
  t.critic_lr = ml.number("critic_lr");
  t.rms_decay = ml.number("rms_decay");
  t.rms_epsilon = ml.number("rms_epsilon");
  t.batch_size = static_cast<int>(ml.integer("batch_size"));
  t.minibatch_size = static_cast<int>(ml.integer("minibatch_size"));
  if (ml.optional("actor_minibatch_size")) t.actor_minibatch_size = static_cast<int>(ml.integer("actor_minibatch_size"));
  t.hidden = static_cast<int>(ml.integer("hidden"));
  t.entropy_coef = ml.optional_number("entropy_coef").value_or(0.0);
  if (auto v = ml.optional("advantage")) t.advantage = wrap("marl", "advantage", [&] { return parse_advantage_mode(*v); });
  if (auto v = ml.optional("normalize_values")) {
    if (*v != "true" && *v != "false") throw ConfigError("[marl] normalize_values: expected true or false");
    t.normalize_values = *v == "true";
  }
  if (auto v = ml.optional_number("value_scale_decay")) t.value_scale_decay = *v;
  ml.finish();
  wrap("marl", "parameters", [&] {
    validate_train_config(t);
    return 0;
  });

  Section bl = section("baseline");
  if (auto v = bl.optional("schemes")) {
    for (const std::string& name : split(*v, ',')) {
      if (!kSchemes.count(name)) throw ConfigError(fmt::format("[baseline] schemes: unknown scheme '{}'", name));
      c.baselines.push_back(name);
    }
  }
  bl.finish();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError(fmt::format("cannot read config '{}'", path.string()));
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string canonical_config(const ExperimentConfig& c) {
  std::string out;
  auto put = [&](std::string_view key, double v) { out += fmt::format("{}={:.17g}\n", key, v); };
  auto put_s = [&](std::string_view key, std::string_view v) { out += fmt::format("{}={}\n", key, v); };
  auto put_vec = [&](std::string_view key, const Vec3& v) { out += fmt::format("{}={:.17g},{:.17g},{:.17g}\n", key, v.x, v.y, v.z); };
  auto put_lane = [&](std::string_view name, const OrbitalLane& l) {
    put(fmt::format("{}.x", name), l.x_m);
    put(fmt::format("{}.y_min", name), l.y_min_m);
    put(fmt::format("{}.altitude", name), l.altitude_m);
    put(fmt::format("{}.speed", name), l.speed_mps);
    put(fmt::format("{}.segment", name), l.segment_m);
    put(fmt::format("{}.circumference", name), l.circumference_m);
    put(fmt::format("{}.spacing", name), l.spacing_m);
    put(fmt::format("{}.visible", name), l.visible_count);
    put(fmt::format("{}.phase", name), l.phase_m);
  };
  const Scenario& s = c.scenario;
  put_vec("src", s.src);
  put_vec("dst", s.dst);
  for (std::size_t j = 0; j < s.uav_initial_positions.size(); ++j) {
    put_vec(fmt::format("uav{}.q", j), s.uav_initial_positions[j]);
    put_vec(fmt::format("uav{}.v", j), s.uav_initial_velocities[j]);
  }
  put("uav_altitude", s.uav_altitude_m);
  put("dt", s.dt_s);
  put("slots", s.slots);
  put("max_accel", s.max_accel);
  put("accel_levels", s.accel_levels);
  put_lane("lane1", s.lane1);
  put_lane("lane2", s.lane2);
  if (s.lane_mid) put_lane("lane_mid", *s.lane_mid);
  const ChannelConfig& cc = s.channel.config();
  put("rf_bandwidth", cc.rf_bandwidth_hz);
  put("fso_bandwidth", cc.fso_bandwidth_hz);
  put("gamma0", cc.gamma0);
  put("visibility", cc.visibility_km);
  put("wavelength", cc.wavelength_nm);
  put("asnr_db", cc.asnr_db);
  put_s("asnr_convention", asnr_name(cc.asnr_convention));
  put("apr_alpha", cc.apr_alpha);
  put("c1", s.power.c1);
  put("c2", s.power.c2);
  put("gravity", s.power.gravity);
  put("mass", s.power.mass_kg);
  put("v_min", s.power.v_min_mps);
  put_s("mode", to_string(c.mode));
  put_s("objective", to_string(c.objective));
  put("d_max", c.d_max_m);
  put("sigma_d", c.sigma_d_m);
  auto put_opt = [&](std::string_view key, const std::optional<double>& v) {
    if (v) put(key, *v);
    else put_s(key, "auto");
  };
  put_opt("mu_r", c.mu_r);
  put_opt("sigma_r", c.sigma_r);
  put_opt("mu_e", c.mu_e);
  put_opt("sigma_e", c.sigma_e);
  const TrainConfig& t = c.train;
  put("episodes", t.episodes);
  put("gamma", t.gamma);
  put("actor_lr", t.actor_lr);
  put("critic_lr", t.critic_lr);
  put("rms_decay", t.rms_decay);
  put("rms_epsilon", t.rms_epsilon);
  put("batch_size", t.batch_size);
  put("minibatch_size", t.minibatch_size);
  put("actor_minibatch_size", t.actor_minibatch_size);
  put("value_scale_decay", t.value_scale_decay);
  put("hidden", t.hidden);
  put("entropy_coef", t.entropy_coef);
  put_s("advantage", to_string(t.advantage));
  put_s("normalize_values", t.normalize_values ? "true" : "false");
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t config_hash(const ExperimentConfig& c) { return fnv1a64(canonical_config(c)); }

RewardWeights reward_weights(const ExperimentConfig& c) {
  RewardWeights w = derive_reward_weights(c.scenario, c.mode, c.objective);
  w.d_max_m = c.d_max_m;
  w.sigma_d_m = c.sigma_d_m;
  if (c.mu_r) w.mu_r = *c.mu_r;
  if (c.sigma_r) w.sigma_r = *c.sigma_r;
  if (c.mu_e) w.mu_e = *c.mu_e;
  if (c.sigma_e) w.sigma_e = *c.sigma_e;
  validate_reward_weights(w);
  return w;
}

}  // namespace ntn
