#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "peaksharp/parser.hpp"

namespace testing_support {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string data_path(const std::string& name) { return std::string(PEAKSHARP_DATA_DIR) + "/" + name; }

inline peaksharp::ReactionNetwork load(const std::string& name) {
  return peaksharp::parse_network(read_file(data_path(name)));
}

inline peaksharp::ReactionNetwork gene() { return load("gene.rxn"); }
inline peaksharp::ReactionNetwork schlogl() { return load("schlogl.rxn"); }

// 0 -> 1 @ a, 1 -> 0 @ b.
inline peaksharp::ReactionNetwork birth_death(double a, double b) {
  peaksharp::ReactionNetwork net;
  net.name = "birth_death";
  net.reactions = {{0, 1, {a, 0.0}}, {1, -1, {b, 0.0}}};
  return net;
}

}  // namespace testing_support
