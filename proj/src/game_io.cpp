#include "clugame/game_io.hpp"

#include <fstream>

#include "clugame/errors.hpp"

namespace clugame {

namespace {

Rat rat_from_json(const nlohmann::json& j, const char* what) {
  if (j.is_number_integer()) {
    return Rat(static_cast<long long>(j.get<std::int64_t>()));
  }
  if (j.is_string()) return parse_rat(j.get<std::string>());
  if (j.is_number_float()) {
    throw Error(ErrorCode::ParseError,
                std::string(what) +
                    ": decimal floats are rejected in game files, use \"p/q\"");
  }
  throw Error(ErrorCode::ParseError,
              std::string(what) + ": expected integer or \"p/q\" string");
}

nlohmann::ordered_json rat_to_json(const Rat& r) {
  if (denominator(r) == 1) {
    auto n = to_int64(numerator(r));
    if (n) return *n;
  }
  return format_rat(r);
}

EdgeKind kind_from_string(const std::string& s) {
  if (s == "coord") return EdgeKind::coordination;
  if (s == "anti") return EdgeKind::anti_coordination;
  throw Error(ErrorCode::ParseError, "edge kind must be \"coord\" or \"anti\"");
}

}  // namespace

GameInput game_input_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::ParseError, "game file must be a JSON object");
  }
  GameInput input;
  if (!j.contains("n") || !j.contains("colors") || !j.contains("edges")) {
    throw Error(ErrorCode::ParseError,
                "game file needs \"n\", \"colors\" and \"edges\"");
  }
  input.node_count = j.at("n").get<int>();
  input.color_count = j.at("colors").get<int>();
  input.planar_declared = j.value("planar", false);

  for (const auto& je : j.at("edges")) {
    GameInput::EdgeInput e;
    e.u = je.at("u").get<int>();
    e.v = je.at("v").get<int>();
    e.kind = kind_from_string(je.at("kind").get<std::string>());
    e.weight = rat_from_json(je.at("w"), "edge weight");
    if (je.contains("alpha")) {
      const auto& a = je.at("alpha");
      if (!a.is_array() || a.size() != 2) {
        throw Error(ErrorCode::ParseError, "alpha must be a pair");
      }
      e.alpha_uv = rat_from_json(a[0], "alpha");
      e.alpha_vu = rat_from_json(a[1], "alpha");
    }
    input.edges.push_back(std::move(e));
  }

  if (j.contains("strategy_sets") && !j.at("strategy_sets").is_null()) {
    input.strategy_sets = j.at("strategy_sets").get<std::vector<std::vector<int>>>();
  }
  if (j.contains("preferences") && !j.at("preferences").is_null()) {
    std::vector<std::map<int, Rat>> prefs;
    for (const auto& jp : j.at("preferences")) {
      std::map<int, Rat> m;
      for (auto it = jp.begin(); it != jp.end(); ++it) {
        int color = 0;
        try {
          color = std::stoi(it.key());
        } catch (const std::exception&) {
          throw Error(ErrorCode::ParseError,
                      "preference keys must be color integers");
        }
        m[color] = rat_from_json(it.value(), "preference");
      }
      prefs.push_back(std::move(m));
    }
    input.preferences = std::move(prefs);
  }
  if (j.contains("meta")) input.meta = j.at("meta");
  return input;
}

nlohmann::ordered_json game_to_json(const ClusteringGame& game) {
  nlohmann::ordered_json j;
  j["n"] = game.graph.node_count;
  j["colors"] = game.color_count;
  j["edges"] = nlohmann::ordered_json::array();
  for (std::size_t ei = 0; ei < game.graph.edges.size(); ++ei) {
    const Edge& e = game.graph.edges[ei];
    nlohmann::ordered_json je;
    je["u"] = e.u;
    je["v"] = e.v;
    je["kind"] = e.kind == EdgeKind::coordination ? "coord" : "anti";
    je["w"] = rat_to_json(e.weight);
    je["alpha"] = {rat_to_json(game.rule.shares[ei].first),
                   rat_to_json(game.rule.shares[ei].second)};
    j["edges"].push_back(std::move(je));
  }
  if (!game.symmetric) {
    j["strategy_sets"] = game.strategy_sets;
  }
  bool any_pref = false;
  for (const auto& prefs : game.preferences) {
    for (const auto& q : prefs) {
      if (q != 0) any_pref = true;
    }
  }
  if (any_pref) {
    j["preferences"] = nlohmann::ordered_json::array();
    for (int i = 0; i < game.player_count(); ++i) {
      nlohmann::ordered_json jp = nlohmann::ordered_json::object();
      for (std::size_t slot = 0; slot < game.strategy_sets[i].size(); ++slot) {
        if (game.preferences[i][slot] != 0) {
          jp[std::to_string(game.strategy_sets[i][slot])] =
              rat_to_json(game.preferences[i][slot]);
        }
      }
      j["preferences"].push_back(std::move(jp));
    }
  }
  if (game.graph.planar_declared) j["planar"] = true;
  if (!game.meta.is_null()) j["meta"] = game.meta;
  return j;
}

GameInput read_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open game file '" + path + "'");
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError,
                "invalid JSON in '" + path + "': " + e.what());
  }
  return game_input_from_json(j);
}

void write_game_file(const ClusteringGame& game, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write game file '" + path + "'");
  }
  out << game_to_json(game).dump(2) << "\n";
}

nlohmann::ordered_json profile_to_json(const StrategyProfile& s) {
  return nlohmann::ordered_json(s.colors);
}

}  // namespace clugame
