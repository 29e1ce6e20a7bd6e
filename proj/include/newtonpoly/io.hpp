#pragma once

// Input parsing, versioned JSON/CSV output, run manifests and the content-addressed cache.

#include "newtonpoly/classifier.hpp"
#include "newtonpoly/numeric/decay.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace npoly::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr const char* kPolynomialSchema = "newtonpoly.polynomial/1";
inline constexpr const char* kReportSchema = "newtonpoly.report/1";
inline constexpr const char* kDecaySchema = "newtonpoly.decay/1";
inline constexpr const char* kVerifySchema = "newtonpoly.verify/1";
inline constexpr const char* kBundleSchema = "newtonpoly.bundle/1";

/// Malformed input. what() carries "source:line:column" for syntax errors and the JSON path
/// of the offending field for schema errors.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PolynomialInput {
  TaylorPoly g{1};
  std::optional<BasePoint> base_point;
  TaylorPoly H{1};  // g recentred at the base point (the origin when absent)
  std::vector<std::string> notes;
};

PolynomialInput parse_polynomial(std::string_view text, std::string_view source = "<input>");
PolynomialInput load_polynomial(const std::filesystem::path& path);
/// Inverse of parse_polynomial up to term order: terms are emitted in canonical order.
Json polynomial_to_json(const TaylorPoly& g, const std::optional<BasePoint>& z = std::nullopt);

MOverride parse_override(std::string_view text, std::string_view source = "<override>");
MOverride load_override(const std::filesystem::path& path);

Json polyhedron_to_json(const NewtonPolyhedron& N);
Json face_to_json(const FaceRecord& F);
Json report_to_json(const AnalysisReport& r);
/// Structural check of a report document; returns the list of problems (empty when valid).
std::vector<std::string> validate_report(const Json& j);

/// Shortest round-trip decimal is not required; every double is printed with 17 significant digits.
std::string format_double(double v);
std::string decay_csv(const std::vector<numeric::DecaySample>& samples);

std::string sha256_hex(std::string_view data);

struct RunManifest {
  std::string command;
  std::string input_hash;  // SHA-256 of the canonical input document
  Json parameters = Json::object();
  std::string artifact_version = kArtifactVersion;

  Json to_json() const;
  /// Hash of to_json().dump(); the cache key.
  std::string hash() const;
};

/// NEWTONPOLY_CACHE, else $XDG_CACHE_HOME/newtonpoly, else $HOME/.cache/newtonpoly.
std::filesystem::path cache_dir();

/// Writes to a sibling temporary file and renames it over the target.
void atomic_write(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

class Cache {
 public:
  explicit Cache(std::filesystem::path root) : root_(std::move(root)) {}
  const std::filesystem::path& root() const { return root_; }

  std::filesystem::path entry(const RunManifest& m) const { return root_ / m.hash(); }
  /// Files of a stored run whose manifest matches this artifact version exactly.
  std::optional<std::filesystem::path> lookup(const RunManifest& m) const;
  void store(const RunManifest& m, const std::vector<std::pair<std::string, std::string>>& files) const;
  /// Every entry written by this artifact version, ordered by key.
  Json bundle() const;

 private:
  std::filesystem::path root_;
};

}  // namespace npoly::io
