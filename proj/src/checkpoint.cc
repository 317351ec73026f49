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

#include "evoleague/checkpoint.h"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "evoleague/error.h"

namespace evoleague {

using nlohmann::json;

namespace {

json CellToJson(const Cell& cell) { return json(cell); }

template <typename T>
T Get(const json& j, const char* key) {
  if (!j.contains(key)) Fail(ErrorKind::kParse, std::string("checkpoint: missing field '") + key + "'");
  return j.at(key).get<T>();
}

}  // namespace

json CriterionToJson(const NicheCriterion& criterion) {
  struct Visitor {
    json operator()(const BdTarget& c) const {
      return {{"kind", "bd_target"},
              {"center", CellToJson(c.region.center)},
              {"radius", c.region.radius}};
    }
    json operator()(const BeatAgent& c) const {
      return {{"kind", "beat_agent"}, {"target", c.target}, {"margin", c.margin}};
    }
    json operator()(const BeatSet& c) const {
      return {{"kind", "beat_set"},
              {"targets", c.targets},
              {"required_fraction", c.required_fraction}};
    }
    json operator()(const Mixture& c) const {
      json parts = json::array();
      for (const auto& p : c.parts) parts.push_back(CriterionToJson(p));
      return {{"kind", "mixture"}, {"parts", parts}, {"weights", c.weights}};
    }
  };
  return std::visit(Visitor{}, criterion.value);
}

NicheCriterion CriterionFromJson(const json& j) {
  const auto kind = Get<std::string>(j, "kind");
  if (kind == "bd_target") {
    return NicheCriterion{
        BdTarget{CellRegion{Get<Cell>(j, "center"), Get<int>(j, "radius")}}};
  }
  if (kind == "beat_agent") {
    return NicheCriterion{BeatAgent{Get<AgentId>(j, "target"), Get<double>(j, "margin")}};
  }
  if (kind == "beat_set") {
    return NicheCriterion{BeatSet{Get<std::vector<AgentId>>(j, "targets"),
                                  Get<double>(j, "required_fraction")}};
  }
  if (kind == "mixture") {
    Mixture m;
    for (const auto& p : j.at("parts")) m.parts.push_back(CriterionFromJson(p));
    m.weights = Get<std::vector<double>>(j, "weights");
    return NicheCriterion{std::move(m)};
  }
  Fail(ErrorKind::kParse, "checkpoint: unknown criterion kind '" + kind + "'");
}

json AgentToJson(const Agent& a) {
  json j;
  j["id"] = a.id;
  j["logits"] = a.params.logits;
  j["learning_rate"] = a.hypers.learning_rate;
  j["entropy_coeff"] = a.hypers.entropy_coeff;
  j["rating"] = a.rating;
  j["bd"] = a.bd.has_value() ? json(*a.bd) : json(nullptr);
  j["criterion"] = CriterionToJson(a.criterion);
  j["born_at"] = a.born_at;
  j["matches_played"] = a.matches_played;
  j["last_exploit_at"] = a.last_exploit_at;
  j["matches_at_last_exploit"] = a.matches_at_last_exploit;
  j["active"] = a.active;
  j["units"] = a.units;
  j["recent_bds"] = a.recent_bds;
  j["satisfaction_history"] = a.satisfaction_history;
  return j;
}

Agent AgentFromJson(const json& j) {
  Agent a;
  a.id = Get<AgentId>(j, "id");
  a.params.logits = Get<std::vector<double>>(j, "logits");
  a.hypers.learning_rate = Get<double>(j, "learning_rate");
  a.hypers.entropy_coeff = Get<double>(j, "entropy_coeff");
  a.rating = Get<double>(j, "rating");
  if (!j.at("bd").is_null()) a.bd = j.at("bd").get<BdVector>();
  a.criterion = CriterionFromJson(j.at("criterion"));
  a.born_at = Get<LogicalTime>(j, "born_at");
  a.matches_played = Get<std::int64_t>(j, "matches_played");
  a.last_exploit_at = Get<LogicalTime>(j, "last_exploit_at");
  a.matches_at_last_exploit = Get<std::int64_t>(j, "matches_at_last_exploit");
  a.active = Get<bool>(j, "active");
  a.units = Get<std::int64_t>(j, "units");
  a.recent_bds = Get<std::vector<BdVector>>(j, "recent_bds");
  a.satisfaction_history = Get<std::vector<double>>(j, "satisfaction_history");
  return a;
}

json MatchToJson(const MatchResult& m) {
  return {{"a", m.a},       {"b", m.b},   {"payoff_a", m.payoff_a}, {"bd_a", m.bd_a},
          {"bd_b", m.bd_b}, {"at", m.at}, {"seed", m.seed}};
}

MatchResult MatchFromJson(const json& j) {
  MatchResult m;
  m.a = Get<AgentId>(j, "a");
  m.b = Get<AgentId>(j, "b");
  m.payoff_a = Get<double>(j, "payoff_a");
  m.bd_a = Get<BdVector>(j, "bd_a");
  m.bd_b = Get<BdVector>(j, "bd_b");
  m.at = Get<LogicalTime>(j, "at");
  m.seed = Get<std::uint64_t>(j, "seed");
  return m;
}

json MetricsToJson(const Metrics& m) {
  return {{"type", "metrics"},
          {"at", m.at},
          {"unit", m.at},
          {"ratings", {{"min", m.rating_min}, {"max", m.rating_max}, {"mean", m.rating_mean}}},
          {"exploitability", m.exploitability.has_value() ? json(*m.exploitability) : json()},
          {"nash_coverage", m.nash_coverage},
          {"coverage", m.coverage},
          {"qd_score", m.qd_score},
          {"hall_size", m.hall_size},
          {"unit_spread", m.unit_spread}};
}

json ArchiveRecords(const Archive& archive, LogicalTime at) {
  json out = json::array();
  for (const auto& [cell, entry] : archive.cells()) {
    out.push_back({{"type", "archive_cell"},
                   {"at", at},
                   {"cell", cell},
                   {"agent", entry.agent->id},
                   {"quality", entry.quality}});
  }
  return out;
}

json RatingsDocument(const LeagueState& state) {
  json agents = json::array();
  auto add = [&](const Agent& a) {
    agents.push_back({{"id", a.id},
                      {"rating", a.rating},
                      {"active", a.active},
                      {"matches_played", a.matches_played},
                      {"units", a.units}});
  };
  for (const auto& a : state.league.active()) add(*a);
  for (const auto& a : state.league.hall()) add(*a);
  return {{"at", state.clock}, {"agents", agents}};
}

json PayoffMatrixDocument(const LeagueState& state) {
  std::vector<AgentId> ids;
  for (const auto& a : state.league.active()) ids.push_back(a->id);
  for (const auto& a : state.league.hall()) ids.push_back(a->id);
  const EmpiricalGame g = BuildEmpiricalGame(state.table, ids);
  json rows = json::array();
  json observed = json::array();
  const int n = static_cast<int>(ids.size());
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    json obs = json::array();
    for (int j = 0; j < n; ++j) {
      row.push_back(g.payoff(i, j));
      obs.push_back(static_cast<bool>(g.observed[i * n + j]));
    }
    rows.push_back(std::move(row));
    observed.push_back(std::move(obs));
  }
  return {{"at", state.clock},
          {"ids", ids},
          {"payoff", rows},
          {"observed", observed},
          {"coverage", g.coverage}};
}

json ProposalToJson(const UnitProposal& p) {
  return {{"ticket", p.ticket},
          {"agent", p.agent},
          {"logits_before", p.logits_before},
          {"logits_after", p.logits_after},
          {"burst_opponents", p.burst_opponents},
          {"match", MatchToJson(p.match)},
          {"rating_a", p.rating_a},
          {"rating_b", p.rating_b},
          {"snapshot_time", p.snapshot_time}};
}

std::string SerializeCheckpoint(const ExperimentConfig& config, const LeagueState& state) {
  json j;
  j["schema_version"] = kCheckpointSchemaVersion;
  json cfg = json::object();
  for (const auto& [k, v] : ConfigValues(config)) cfg[k] = v;
  j["config"] = std::move(cfg);
  j["clock"] = state.clock;
  j["rng"] = {{"root_seed", config.runtime.seed}, {"next_ticket", state.clock}};

  const League& league = state.league;
  json active = json::array();
  for (const auto& a : league.active()) active.push_back(AgentToJson(*a));
  json hall = json::array();
  for (const auto& a : league.hall()) hall.push_back(AgentToJson(*a));
  json lineage = json::array();
  for (const auto& r : league.lineage()) {
    lineage.push_back({{"child", r.child},
                       {"parent", r.parent.has_value() ? json(*r.parent) : json()},
                       {"event", r.event},
                       {"time", r.time}});
  }
  j["league"] = {{"capacity", league.capacity()}, {"hall_cap", league.hall_cap()},
                 {"hall_seen", league.hall_seen()}, {"next_id", league.next_id()},
                 {"active", active},                {"hall", hall},
                 {"lineage", lineage}};

  json table = json::array();
  for (const auto& [key, e] : state.table.entries()) {
    table.push_back({key.first, key.second, e.sum, e.count});
  }
  j["payoff_table"] = std::move(table);

  json cells = json::array();
  for (const auto& [cell, entry] : state.archive.cells()) {
    cells.push_back({{"cell", cell}, {"agent", AgentToJson(*entry.agent)},
                     {"quality", entry.quality}});
  }
  j["archive"] = {{"dim", state.archive.dim()},
                  {"resolution", state.archive.resolution()},
                  {"cells", cells}};
  return j.dump();
}

Checkpoint ParseCheckpoint(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    Fail(ErrorKind::kParse, "checkpoint is not valid JSON at byte offset " +
                                std::to_string(e.byte) + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("schema_version") ||
      !j.at("schema_version").is_number_integer()) {
    Fail(ErrorKind::kMigration, "checkpoint has no integer schema_version field");
  }
  const int version = j.at("schema_version").get<int>();
  if (version != kCheckpointSchemaVersion) {
    Fail(ErrorKind::kMigration, "checkpoint schema version " + std::to_string(version) +
                                    " cannot be migrated to version " +
                                    std::to_string(kCheckpointSchemaVersion));
  }
  try {
    ExperimentConfig config;
    for (const auto& [k, v] : j.at("config").items()) {
      SetConfigValue(config, k, v.get<std::string>());
    }
    ValidateConfig(config);
    const GameSpec game = MakeGame(config.game);

    const json& lj = j.at("league");
    League league(Get<int>(lj, "capacity"), Get<int>(lj, "hall_cap"));
    std::vector<Agent> active;
    for (const auto& a : lj.at("active")) active.push_back(AgentFromJson(a));
    std::vector<Agent> hall;
    for (const auto& a : lj.at("hall")) hall.push_back(AgentFromJson(a));
    std::vector<LineageRecord> lineage;
    for (const auto& r : lj.at("lineage")) {
      LineageRecord rec;
      rec.child = Get<AgentId>(r, "child");
      if (!r.at("parent").is_null()) rec.parent = r.at("parent").get<AgentId>();
      rec.event = Get<std::string>(r, "event");
      rec.time = Get<LogicalTime>(r, "time");
      lineage.push_back(std::move(rec));
    }
    league.Restore(std::move(active), std::move(hall), std::move(lineage),
                   Get<AgentId>(lj, "next_id"), Get<std::int64_t>(lj, "hall_seen"));

    PayoffTable table;
    for (const auto& e : j.at("payoff_table")) {
      table.Add(e.at(0).get<AgentId>(), e.at(1).get<AgentId>(), e.at(2).get<double>(),
                e.at(3).get<std::int64_t>());
    }

    const json& aj = j.at("archive");
    Archive archive(Get<int>(aj, "dim"), Get<int>(aj, "resolution"));
    if (archive.dim() != game.feature_dim() || archive.resolution() != config.qd.resolution) {
      Fail(ErrorKind::kParse, "checkpoint archive shape does not match its config");
    }
    for (const auto& c : aj.at("cells")) {
      archive.RestoreEntry(Get<Cell>(c, "cell"),
                           std::make_shared<const Agent>(AgentFromJson(c.at("agent"))),
                           Get<double>(c, "quality"));
    }
    const LogicalTime clock = Get<LogicalTime>(j, "clock");
    if (j.at("rng").at("next_ticket").get<LogicalTime>() != clock ||
        j.at("rng").at("root_seed").get<std::uint64_t>() != config.runtime.seed) {
      Fail(ErrorKind::kParse, "checkpoint generator state is inconsistent with its clock/seed");
    }
    return Checkpoint{config, LeagueState{clock, std::move(league), std::move(table),
                                          std::move(archive)}};
  } catch (const json::exception& e) {
    Fail(ErrorKind::kParse, std::string("malformed checkpoint: ") + e.what());
  }
}

void SaveCheckpoint(const ExperimentConfig& config, const LeagueState& state,
                    const std::string& path) {
  const std::string text = SerializeCheckpoint(config, state);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    out.flush();
    if (!out) Fail(ErrorKind::kIo, "cannot write checkpoint to '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    Fail(ErrorKind::kIo, "cannot move checkpoint into place at '" + path + "'");
  }
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot read checkpoint '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseCheckpoint(buf.str());
}

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    Fail(ErrorKind::kIo, "SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

std::string StateDigest(const ExperimentConfig& config, const LeagueState& state) {
  json j = json::parse(SerializeCheckpoint(config, state));
  for (const char* key : {"output.dir", "output.match_log", "runtime.total_units",
                          "runtime.workers", "runtime.checkpoint_every"}) {
    j["config"].erase(key);
  }
  return Sha256Hex(j.dump());
}

}  // namespace evoleague
