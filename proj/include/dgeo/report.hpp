#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dgeo/io.hpp"

namespace dgeo::report {

std::string sha256_hex(const std::string& bytes);

struct Artifact {
  std::string name;
  std::string contents;
};

// Files of one run plus the manifest describing them.
struct Bundle {
  io::json config = io::json::object();
  std::optional<std::uint64_t> seed;
  std::vector<Artifact> files;

  void add(std::string name, std::string contents) { files.push_back({std::move(name), std::move(contents)}); }
};

// {"version", "seed", "config", "files": [{"name", "sha256", "bytes"}]}
io::json manifest(const Bundle& b);

// Writes every file and manifest.json into dir, creating it when needed;
// throws std::runtime_error when the directory is not writable.
void write_bundle(const Bundle& b, const std::string& dir);

}  // namespace dgeo::report
