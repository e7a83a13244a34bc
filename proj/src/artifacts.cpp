#include "nlwave/artifacts.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace nlwave {

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("fnv1a64_file: cannot open " + path);
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[1 << 16];
  while (is) {
    is.read(buf, sizeof buf);
    std::streamsize got = is.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

ArtifactWriter::ArtifactWriter(std::string out_dir) : dir_(std::move(out_dir)) {
  std::filesystem::create_directories(dir_);
}

std::string ArtifactWriter::path(const std::string& name) const {
  return dir_ + "/" + name;
}

void ArtifactWriter::record(const std::string& name) {
  std::string p = path(name);
  Row row;
  row.name = name;
  row.bytes = std::filesystem::file_size(p);
  row.hash = fnv1a64_file(p);
  rows_.push_back(std::move(row));
}

void ArtifactWriter::write_manifest() const {
  std::ofstream os(path("manifest.txt"));
  if (!os) throw std::runtime_error("ArtifactWriter: cannot write manifest");
  char buf[32];
  for (const auto& row : rows_) {
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(row.hash));
    os << row.name << "\t" << row.bytes << "\tfnv1a64:" << buf << "\n";
  }
}

}  // namespace nlwave
