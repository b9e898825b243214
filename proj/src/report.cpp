#include "dgeo/report.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <openssl/evp.h>

namespace dgeo::report {

std::string sha256_hex(const std::string& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

io::json manifest(const Bundle& b) {
  io::json out;
  out["version"] = DGEO_VERSION;
  out["seed"] = b.seed ? io::json(*b.seed) : io::json(nullptr);
  out["config"] = b.config;
  io::json files = io::json::array();
  for (const auto& f : b.files)
    files.push_back({{"name", f.name}, {"sha256", sha256_hex(f.contents)}, {"bytes", f.contents.size()}});
  out["files"] = files;
  return out;
}

void write_bundle(const Bundle& b, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
  auto put = [&](const std::string& name, const std::string& contents) {
    const fs::path path = fs::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    out << contents;
    if (!out) throw std::runtime_error("cannot write " + path.string());
  };
  for (const auto& f : b.files) put(f.name, f.contents);
  put("manifest.json", io::dump(manifest(b)));
}

}  // namespace dgeo::report
