#include <charconv>
#include <fstream>
#include <functional>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "lexforge/error.hpp"
#include "lexforge/pipeline.hpp"

namespace lexforge {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ConfigError(fmt::format("{}: cannot parse '{}'", key, value));
  return out;
}

using Setter = std::function<void(PipelineConfig&, std::string_view key, std::string_view value)>;

const std::vector<std::pair<std::string_view, Setter>>& setters() {
  static const std::vector<std::pair<std::string_view, Setter>> table = {
      {"noun-tags", [](auto& c, auto k, auto v) {
         TagFilter::parse(v);
         c.noun_tags = std::string(v);
         (void)k;
       }},
      {"min-freq", [](auto& c, auto k, auto v) { c.prefilter.min_frequency = parse_number<std::size_t>(k, v); }},
      {"max-freq-ratio", [](auto& c, auto k, auto v) { c.prefilter.max_freq_ratio = parse_number<double>(k, v); }},
      {"max-start-offset", [](auto& c, auto k, auto v) { c.prefilter.max_start_offset_ratio = parse_number<double>(k, v); }},
      {"euclid-threshold", [](auto& c, auto k, auto v) { c.prefilter.euclid_threshold = parse_number<double>(k, v); }},
      {"dtw-threshold", [](auto& c, auto k, auto v) { c.dtw_threshold = parse_number<double>(k, v); }},
      {"dtw-band", [](auto& c, auto k, auto v) {
         if (v == "none" || v == "off") {
           c.dtw_band.reset();
         } else {
           c.dtw_band = parse_number<std::size_t>(k, v);
         }
       }},
      {"top-n", [](auto& c, auto k, auto v) { c.top_n = parse_number<std::size_t>(k, v); }},
      {"min-gap-source", [](auto& c, auto k, auto v) { c.anchors.min_gap_source = parse_number<std::size_t>(k, v); }},
      {"max-jump-target", [](auto& c, auto k, auto v) { c.anchors.max_jump_target = parse_number<std::size_t>(k, v); }},
      {"slope-band", [](auto& c, auto k, auto v) { c.anchors.slope_band = parse_number<double>(k, v); }},
      {"min-support", [](auto& c, auto k, auto v) { c.anchors.min_support = parse_number<std::size_t>(k, v); }},
      {"resync-gap", [](auto& c, auto k, auto v) { c.anchors.resync_gap = parse_number<std::size_t>(k, v); }},
      {"t-threshold", [](auto& c, auto k, auto v) { c.t_threshold = parse_number<double>(k, v); }},
      {"min-secondary-freq", [](auto& c, auto k, auto v) { c.min_secondary_freq = parse_number<std::size_t>(k, v); }},
      {"threads", [](auto& c, auto k, auto v) { c.threads = parse_number<std::size_t>(k, v); }},
  };
  return table;
}

}  // namespace

const std::vector<std::string_view>& config_keys() {
  static const std::vector<std::string_view> keys = [] {
    std::vector<std::string_view> out;
    for (const auto& [k, _] : setters()) out.push_back(k);
    return out;
  }();
  return keys;
}

void set_config_value(PipelineConfig& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  for (const auto& [name, setter] : setters()) {
    if (name == key) {
      setter(cfg, key, value);
      return;
    }
  }
  throw ConfigError(fmt::format("unknown setting '{}'", key));
}

void load_config(std::istream& in, PipelineConfig& cfg) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(fmt::format("config line {}: expected 'key = value'", line_no));
    try {
      set_config_value(cfg, view.substr(0, eq), view.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("config line {}: {}", line_no, e.what()));
    }
  }
}

void load_config_file(const std::filesystem::path& path, PipelineConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open config '{}'", path.string()));
  load_config(in, cfg);
}

void write_config(std::ostream& out, const PipelineConfig& cfg) {
  fmt::print(out, "noun-tags = {}\n", cfg.noun_tags);
  fmt::print(out, "min-freq = {}\n", cfg.prefilter.min_frequency);
  fmt::print(out, "max-freq-ratio = {}\n", cfg.prefilter.max_freq_ratio);
  fmt::print(out, "max-start-offset = {}\n", cfg.prefilter.max_start_offset_ratio);
  fmt::print(out, "euclid-threshold = {}\n", cfg.prefilter.euclid_threshold);
  fmt::print(out, "dtw-threshold = {}\n", cfg.dtw_threshold);
  if (cfg.dtw_band) {
    fmt::print(out, "dtw-band = {}\n", *cfg.dtw_band);
  } else {
    fmt::print(out, "dtw-band = none\n");
  }
  fmt::print(out, "top-n = {}\n", cfg.top_n);
  fmt::print(out, "min-gap-source = {}\n", cfg.anchors.min_gap_source);
  fmt::print(out, "max-jump-target = {}\n", cfg.anchors.max_jump_target);
  fmt::print(out, "slope-band = {}\n", cfg.anchors.slope_band);
  fmt::print(out, "min-support = {}\n", cfg.anchors.min_support);
  fmt::print(out, "resync-gap = {}\n", cfg.anchors.resync_gap);
  fmt::print(out, "t-threshold = {}\n", cfg.t_threshold);
  fmt::print(out, "min-secondary-freq = {}\n", cfg.min_secondary_freq);
  fmt::print(out, "threads = {}\n", cfg.threads);
}

void validate(const PipelineConfig& cfg) {
  auto positive = [](double v, std::string_view name) {
    if (!(v > 0.0)) throw ConfigError(fmt::format("{} must be positive", name));
  };
  TagFilter::parse(cfg.noun_tags);
  if (cfg.prefilter.min_frequency < 2) throw ConfigError("min-freq must be at least 2");
  positive(cfg.prefilter.max_freq_ratio, "max-freq-ratio");
  if (cfg.prefilter.max_freq_ratio < 1.0) throw ConfigError("max-freq-ratio must be at least 1");
  positive(cfg.prefilter.max_start_offset_ratio, "max-start-offset");
  positive(cfg.prefilter.euclid_threshold, "euclid-threshold");
  positive(cfg.dtw_threshold, "dtw-threshold");
  if (cfg.top_n == 0) throw ConfigError("top-n must be at least 1");
  positive(cfg.anchors.slope_band, "slope-band");
  positive(cfg.t_threshold, "t-threshold");
  if (cfg.min_secondary_freq == 0) throw ConfigError("min-secondary-freq must be at least 1");
}

}  // namespace lexforge
