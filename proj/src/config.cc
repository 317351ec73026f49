// Copyright 2026 The EvoLeague Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "evoleague/config.h"

#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "evoleague/error.h"

namespace evoleague {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void KeyError(const std::string& key, const std::string& what) {
  Fail(ErrorKind::kConfig, "config key '" + key + "': " + what);
}

std::string FormatDouble(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double ParseDouble(const std::string& key, const std::string& text) {
  if (text == "inf") return kInf;
  double x = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(x)) {
    KeyError(key, "expected a real number, got '" + text + "'");
  }
  return x;
}

template <typename Int>
Int ParseInt(const std::string& key, const std::string& text) {
  Int x = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    KeyError(key, "expected an integer, got '" + text + "'");
  }
  return x;
}

bool ParseBool(const std::string& key, const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  KeyError(key, "expected true or false, got '" + text + "'");
}

struct KeySpec {
  std::string key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <typename Access>
KeySpec IntKey(std::string key, Access access, std::int64_t lo,
               std::int64_t hi = std::numeric_limits<std::int64_t>::max()) {
  return KeySpec{
      key,
      [=](ExperimentConfig& c, const std::string& text) {
        const auto v = ParseInt<std::int64_t>(key, text);
        if (v < lo || v > hi) {
          std::string range = "expected an integer >= " + std::to_string(lo);
          if (hi != std::numeric_limits<std::int64_t>::max()) {
            range += " and <= " + std::to_string(hi);
          }
          KeyError(key, range + " (minimum " + std::to_string(lo) + "), got " + text);
        }
        auto& field = access(c);
        field = static_cast<std::remove_reference_t<decltype(field)>>(v);
      },
      [=](const ExperimentConfig& c) {
        return std::to_string(access(const_cast<ExperimentConfig&>(c)));
      }};
}

template <typename Access>
KeySpec SeedKey(std::string key, Access access) {
  return KeySpec{
      key,
      [=](ExperimentConfig& c, const std::string& text) {
        access(c) = ParseInt<std::uint64_t>(key, text);
      },
      [=](const ExperimentConfig& c) {
        return std::to_string(access(const_cast<ExperimentConfig&>(c)));
      }};
}

enum class Edge { kClosed, kOpen };

template <typename Access>
KeySpec RealKey(std::string key, Access access, double lo, double hi,
                Edge lo_edge = Edge::kClosed, Edge hi_edge = Edge::kClosed) {
  return KeySpec{
      key,
      [=](ExperimentConfig& c, const std::string& text) {
        const double v = ParseDouble(key, text);
        const bool ok_lo = lo_edge == Edge::kClosed ? v >= lo : v > lo;
        const bool ok_hi = hi_edge == Edge::kClosed ? v <= hi : v < hi;
        if (!ok_lo || !ok_hi) {
          KeyError(key, std::string("expected a value in ") +
                            (lo_edge == Edge::kClosed ? "[" : "(") + FormatDouble(lo) +
                            ", " + FormatDouble(hi) +
                            (hi_edge == Edge::kClosed ? "]" : ")") + ", got " + text);
        }
        access(c) = v;
      },
      [=](const ExperimentConfig& c) {
        return FormatDouble(access(const_cast<ExperimentConfig&>(c)));
      }};
}

template <typename Access>
KeySpec BoolKey(std::string key, Access access) {
  return KeySpec{
      key,
      [=](ExperimentConfig& c, const std::string& text) { access(c) = ParseBool(key, text); },
      [=](const ExperimentConfig& c) {
        return std::string(access(const_cast<ExperimentConfig&>(c)) ? "true" : "false");
      }};
}

template <typename Parse, typename Format>
KeySpec EnumKey(std::string key, Parse parse, Format format) {
  return KeySpec{
      key,
      [=](ExperimentConfig& c, const std::string& text) {
        try {
          parse(c, text);
        } catch (const LeagueError& e) {
          KeyError(key, e.what());
        }
      },
      format};
}

const std::vector<KeySpec>& Keys() {
  static const std::vector<KeySpec> keys = [] {
    using C = ExperimentConfig;
    std::vector<KeySpec> k;
    k.push_back(EnumKey(
        "game.name",
        [](C& c, const std::string& v) {
          if (v != "rps" && v != "blotto" && v != "random") {
            Fail(ErrorKind::kConfig, "expected rps|blotto|random, got '" + v + "'");
          }
          c.game.name = v;
        },
        [](const C& c) { return c.game.name; }));
    k.push_back(IntKey("game.k", [](C& c) -> int& { return c.game.k; }, 2, 1000));
    k.push_back(IntKey("game.soldiers", [](C& c) -> int& { return c.game.soldiers; }, 1));
    k.push_back(IntKey("game.fields", [](C& c) -> int& { return c.game.fields; }, 2));
    k.push_back(IntKey("game.blotto_cap", [](C& c) -> int& { return c.game.blotto_cap; }, 1,
                       100000));
    k.push_back(SeedKey("game.seed", [](C& c) -> std::uint64_t& { return c.game.seed; }));

    k.push_back(IntKey("population.N", [](C& c) -> int& { return c.population.size; }, 2,
                       100000));
    k.push_back(RealKey("population.sigma0",
                        [](C& c) -> double& { return c.population.sigma0; }, 0.0, 100.0));
    k.push_back(RealKey("population.R0",
                        [](C& c) -> double& { return c.population.initial_rating; }, -1e9,
                        1e9));
    k.push_back(IntKey("population.hall_cap",
                       [](C& c) -> int& { return c.population.hall_cap; }, 1, 1000000));
    k.push_back(RealKey("population.lr_min",
                        [](C& c) -> double& { return c.population.bounds.learning_rate.lo; },
                        0.0, 100.0, Edge::kOpen));
    k.push_back(RealKey("population.lr_max",
                        [](C& c) -> double& { return c.population.bounds.learning_rate.hi; },
                        0.0, 100.0, Edge::kOpen));
    k.push_back(RealKey("population.entropy_min",
                        [](C& c) -> double& { return c.population.bounds.entropy_coeff.lo; },
                        0.0, 10.0, Edge::kOpen));
    k.push_back(RealKey("population.entropy_max",
                        [](C& c) -> double& { return c.population.bounds.entropy_coeff.hi; },
                        0.0, 10.0, Edge::kOpen));

    k.push_back(BoolKey("pbt.enabled", [](C& c) -> bool& { return c.pbt.enabled; }));
    k.push_back(IntKey("pbt.ready_interval",
                       [](C& c) -> std::int64_t& { return c.pbt.ready_interval; }, 1));
    k.push_back(IntKey("pbt.min_matches",
                       [](C& c) -> std::int64_t& { return c.pbt.min_matches; }, 0));
    k.push_back(EnumKey(
        "pbt.perturb_factors",
        [](C& c, const std::string& v) {
          const auto comma = v.find(',');
          if (comma == std::string::npos) {
            Fail(ErrorKind::kConfig, "expected two comma-separated factors, got '" + v + "'");
          }
          const double a = ParseDouble("pbt.perturb_factors", v.substr(0, comma));
          const double b = ParseDouble("pbt.perturb_factors", v.substr(comma + 1));
          if (!(a > 0.0 && b > 0.0) || std::isinf(a) || std::isinf(b)) {
            Fail(ErrorKind::kConfig, "factors must be positive and finite, got '" + v + "'");
          }
          c.pbt.perturb_factors = {a, b};
        },
        [](const C& c) {
          return FormatDouble(c.pbt.perturb_factors.first) + "," +
                 FormatDouble(c.pbt.perturb_factors.second);
        }));
    k.push_back(RealKey("pbt.resample_prob", [](C& c) -> double& { return c.pbt.resample_prob; },
                        0.0, 1.0));
    k.push_back(EnumKey(
        "pbt.selection",
        [](C& c, const std::string& v) { c.pbt.selection = ParseSelection(v); },
        [](const C& c) { return SelectionName(c.pbt.selection); }));

    k.push_back(IntKey("learner.steps_per_burst",
                       [](C& c) -> int& { return c.learner.steps_per_burst; }, 1, 1000000));
    k.push_back(IntKey("learner.opponents_per_burst",
                       [](C& c) -> int& { return c.learner.opponents_per_burst; }, 1, 10000));

    k.push_back(RealKey("league.K", [](C& c) -> double& { return c.league.elo.k_factor; }, 0.0,
                        1e6, Edge::kOpen));
    k.push_back(RealKey("league.elo_scale", [](C& c) -> double& { return c.league.elo.scale; },
                        0.0, 1e9, Edge::kOpen));
    k.push_back(RealKey("league.elo_base", [](C& c) -> double& { return c.league.elo.base; },
                        1.0, 1e9, Edge::kOpen));
    k.push_back(RealKey("league.sigma_match",
                        [](C& c) -> double& { return c.league.sigma_match; }, 0.0, kInf,
                        Edge::kOpen));
    k.push_back(IntKey("league.episodes", [](C& c) -> int& { return c.league.episodes; }, 1,
                       100000000));
    k.push_back(BoolKey("league.exact_payoff",
                        [](C& c) -> bool& { return c.league.exact_payoff; }));
    k.push_back(EnumKey(
        "league.opponent",
        [](C& c, const std::string& v) {
          if (v == "league") {
            c.league.opponent = OpponentMode::kLeague;
          } else if (v == "fixed") {
            c.league.opponent = OpponentMode::kFixed;
          } else {
            Fail(ErrorKind::kConfig, "expected league|fixed, got '" + v + "'");
          }
        },
        [](const C& c) {
          return std::string(c.league.opponent == OpponentMode::kLeague ? "league" : "fixed");
        }));
    k.push_back(IntKey("league.fixed_strategy",
                       [](C& c) -> int& { return c.league.fixed_strategy; }, 0));

    k.push_back(BoolKey("qd.enabled", [](C& c) -> bool& { return c.qd.enabled; }));
    k.push_back(IntKey("qd.R", [](C& c) -> int& { return c.qd.resolution; }, 1, 1000));
    k.push_back(RealKey("qd.beta_f", [](C& c) -> double& { return c.qd.beta_f; }, 0.0, 1e9));
    k.push_back(RealKey("qd.s_hi", [](C& c) -> double& { return c.qd.s_hi; }, 0.0, 1.0));
    k.push_back(RealKey("qd.s_lo", [](C& c) -> double& { return c.qd.s_lo; }, 0.0, 1.0));
    k.push_back(IntKey("qd.adapt_window", [](C& c) -> int& { return c.qd.adapt_window; }, 1,
                       100000));
    k.push_back(IntKey("qd.bd_window", [](C& c) -> int& { return c.qd.bd_window; }, 1, 100000));
    k.push_back(BoolKey("qd.adapt", [](C& c) -> bool& { return c.qd.adapt; }));
    k.push_back(RealKey("qd.beat_margin", [](C& c) -> double& { return c.qd.beat_margin; },
                        -1.0, 1.0));
    k.push_back(IntKey("qd.target_radius", [](C& c) -> int& { return c.qd.target_radius; }, 0,
                       1000));

    k.push_back(EnumKey(
        "nash.population",
        [](C& c, const std::string& v) { c.nash.population = ParseNashPopulation(v); },
        [](const C& c) { return NashPopulationName(c.nash.population); }));
    k.push_back(EnumKey(
        "nash.source", [](C& c, const std::string& v) { c.nash.source = ParseNashSource(v); },
        [](const C& c) { return NashSourceName(c.nash.source); }));
    k.push_back(RealKey("nash.min_coverage",
                        [](C& c) -> double& { return c.nash.min_coverage; }, 0.0, 1.0));
    k.push_back(IntKey("nash.max_iters", [](C& c) -> std::int64_t& { return c.nash.max_iters; },
                       1));
    k.push_back(RealKey("nash.tol", [](C& c) -> double& { return c.nash.tol; }, 0.0, 1e9,
                        Edge::kOpen));
    k.push_back(RealKey("nash.theta", [](C& c) -> double& { return c.nash.theta; }, 0.0, 1.0,
                        Edge::kClosed, Edge::kOpen));

    k.push_back(IntKey("runtime.workers", [](C& c) -> int& { return c.runtime.workers; }, 1,
                       1024));
    k.push_back(IntKey("runtime.total_units",
                       [](C& c) -> std::int64_t& { return c.runtime.total_units; }, 0));
    k.push_back(SeedKey("runtime.seed", [](C& c) -> std::uint64_t& { return c.runtime.seed; }));
    k.push_back(IntKey("runtime.checkpoint_every",
                       [](C& c) -> std::int64_t& { return c.runtime.checkpoint_every; }, 1));
    k.push_back(RealKey("runtime.preemption_gamma",
                        [](C& c) -> double& { return c.runtime.preemption_gamma; }, 0.0, 1e6));

    k.push_back(EnumKey(
        "output.dir",
        [](C& c, const std::string& v) {
          if (v.empty()) Fail(ErrorKind::kConfig, "expected a non-empty path");
          c.output.dir = v;
        },
        [](const C& c) { return c.output.dir; }));
    k.push_back(BoolKey("output.match_log", [](C& c) -> bool& { return c.output.match_log; }));
    return k;
  }();
  return keys;
}

const KeySpec& FindKey(const std::string& key) {
  for (const auto& entry : Keys()) {
    if (entry.key == key) return entry;
  }
  Fail(ErrorKind::kConfig, "unknown config key '" + key + "'");
}

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

void SetConfigValue(ExperimentConfig& config, const std::string& key,
                    const std::string& value) {
  FindKey(key).set(config, value);
}

ExperimentConfig ParseConfig(std::string_view text) {
  ExperimentConfig config;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string trimmed = Trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      Fail(ErrorKind::kConfig,
           "line " + std::to_string(line_no) + ": expected 'key = value', got '" + trimmed + "'");
    }
    const std::string key = Trim(std::string_view(trimmed).substr(0, eq));
    const std::string value = Trim(std::string_view(trimmed).substr(eq + 1));
    if (!seen.insert(key).second) KeyError(key, "assigned more than once");
    SetConfigValue(config, key, value);
  }
  ValidateConfig(config);
  return config;
}

std::map<std::string, std::string> ConfigValues(const ExperimentConfig& config) {
  std::map<std::string, std::string> out;
  for (const auto& entry : Keys()) out[entry.key] = entry.get(config);
  return out;
}

std::vector<std::string> ConfigKeys() {
  std::vector<std::string> out;
  for (const auto& entry : Keys()) out.push_back(entry.key);
  return out;
}

std::string FormatConfig(const ExperimentConfig& config) {
  std::string out;
  for (const auto& entry : Keys()) out += entry.key + " = " + entry.get(config) + "\n";
  return out;
}

void ValidateConfig(const ExperimentConfig& c) {
  const auto& b = c.population.bounds;
  if (b.learning_rate.lo > b.learning_rate.hi) {
    KeyError("population.lr_min", "must not exceed population.lr_max");
  }
  if (b.entropy_coeff.lo > b.entropy_coeff.hi) {
    KeyError("population.entropy_min", "must not exceed population.entropy_max");
  }
  if (c.qd.s_lo >= c.qd.s_hi) KeyError("qd.s_lo", "must be below qd.s_hi");
  ValidatePbtConfig(c.pbt);
  ValidateQdConfig(c.qd);
  try {
    const GameSpec game = MakeGame(c.game);
    if (c.league.opponent == OpponentMode::kFixed && c.league.fixed_strategy >= game.k()) {
      KeyError("league.fixed_strategy",
               "must be below the game's " + std::to_string(game.k()) + " strategies");
    }
  } catch (const LeagueError& e) {
    if (e.kind() == ErrorKind::kConfig) throw;
    KeyError("game." + std::string(c.game.name == "blotto" ? "soldiers" : "k"), e.what());
  }
}

GameSpec MakeGame(const GameConfig& config) {
  if (config.name == "rps") return MakeRps(config.k);
  if (config.name == "blotto") {
    return MakeBlotto(config.soldiers, config.fields, config.blotto_cap);
  }
  if (config.name == "random") return MakeRandomAntisymmetric(config.k, config.seed);
  Fail(ErrorKind::kConfig, "unknown game '" + config.name + "'");
}

}  // namespace evoleague
