#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "osrlab/interp.hpp"
#include "osrlab/parse.hpp"

namespace testutil {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::filesystem::path> corpus_files() {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(OSRLAB_CORPUS_DIR))
    if (entry.path().extension() == ".osr") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

inline osrlab::Program load_corpus(const std::string& name) {
  return osrlab::parse_program(read_file(std::filesystem::path(OSRLAB_CORPUS_DIR) / name));
}

// Random input store over the program's in-vars, values in [-9, 9].
inline osrlab::Store random_store(const osrlab::Program& p, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(-9, 9);
  osrlab::Store s;
  for (const auto& v : p.in_vars()) s.set(v, osrlab::Value(dist(rng)));
  return s;
}

inline const char* kP1 = "in X\nV := 3\nY := V + X\nout Y\n";
inline const char* kP2 = "in X\nskip\nY := 3 + X\nout Y\n";
inline const char* kP3 = "in X\nskip\nY := X * 2\nout Y\n";
inline const char* kP4 = "in X\nY := X * 2\nskip\nout Y\n";

inline osrlab::Program P1() { return osrlab::parse_program(kP1); }
inline osrlab::Program P2() { return osrlab::parse_program(kP2); }
inline osrlab::Program P3() { return osrlab::parse_program(kP3); }
inline osrlab::Program P4() { return osrlab::parse_program(kP4); }

}  // namespace testutil
