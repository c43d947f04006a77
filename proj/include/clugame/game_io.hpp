#pragma once

#include <string>

#include "json.hpp"

#include "clugame/game.hpp"

namespace clugame {

// Game file schema:
//   {"n": int, "colors": int,
//    "edges": [{"u": int, "v": int, "kind": "coord"|"anti",
//               "w": "p/q"|int, "alpha": ["p/q"|int, "p/q"|int]}],
//    "strategy_sets": [[int,...],...]      (optional)
//    "preferences": [{"<color>": value}]   (optional)
//    "planar": bool                        (optional)
//    "meta": {...}                         (optional, passed through)}
// Rationals are "p/q" strings or integers; decimal floats are rejected so
// files stay exact.
GameInput game_input_from_json(const nlohmann::json& j);
nlohmann::ordered_json game_to_json(const ClusteringGame& game);

GameInput read_game_file(const std::string& path);
void write_game_file(const ClusteringGame& game, const std::string& path);

nlohmann::ordered_json profile_to_json(const StrategyProfile& s);

}  // namespace clugame
