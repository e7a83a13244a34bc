#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nlwave {

std::uint64_t fnv1a64_file(const std::string& path);

/// Collects artifact files written into one output directory and emits a
/// manifest (one line per artifact: path, byte length, content hash).
class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::string out_dir);

  const std::string& dir() const { return dir_; }
  std::string path(const std::string& name) const;
  /// Records an already-written file (size + hash).
  void record(const std::string& name);
  void write_manifest() const;

 private:
  std::string dir_;
  struct Row {
    std::string name;
    std::uint64_t bytes;
    std::uint64_t hash;
  };
  std::vector<Row> rows_;
};

}  // namespace nlwave
