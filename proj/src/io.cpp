#include "newtonpoly/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <system_error>

namespace npoly::io {

namespace fs = std::filesystem;

namespace {

std::string location(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

Json parse_json(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    // byte is one past the offending character
    throw InputError(std::string(source) + ":" + location(text, e.byte ? e.byte - 1 : 0) + ": invalid JSON (" +
                     e.what() + ")");
  }
}

[[noreturn]] void field_error(std::string_view source, const std::string& path, const std::string& what) {
  throw InputError(std::string(source) + ": field '" + path + "': " + what);
}

const Json& require(const Json& obj, const char* key, std::string_view source, const std::string& path) {
  if (!obj.is_object()) field_error(source, path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) field_error(source, path.empty() ? key : path + "." + key, "missing");
  return *it;
}

Rational rational_field(const Json& v, std::string_view source, const std::string& path) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (!v.is_string()) field_error(source, path, "expected a rational string such as \"3/4\"");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    field_error(source, path, e.what());
  }
}

Json rationals(std::span<const Rational> v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(to_string(q));
  return a;
}

Json index_json(const MultiIndex& a) { return Json(a.entries()); }

Json threshold_json(const Threshold& t) { return t.infinite() ? Json("inf") : Json(to_string(*t.value)); }

}  // namespace

PolynomialInput parse_polynomial(std::string_view text, std::string_view source) {
  const Json j = parse_json(text, source);
  if (!j.is_object()) field_error(source, "", "expected an object");
  const Json& nj = require(j, "n", source, "");
  if (!nj.is_number_integer() || nj.get<long long>() < 1 || nj.get<long long>() > 16)
    field_error(source, "n", "expected an integer between 1 and 16");
  const std::size_t n = nj.get<std::size_t>();

  const Json& terms = require(j, "terms", source, "");
  if (!terms.is_array()) field_error(source, "terms", "expected an array");
  PolynomialInput in;
  in.g = TaylorPoly(n);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const std::string base = "terms[" + std::to_string(t) + "]";
    const Json& alpha = require(terms[t], "alpha", source, base);
    if (!alpha.is_array() || alpha.size() != n)
      field_error(source, base + ".alpha", "expected an array of " + std::to_string(n) + " integers");
    std::vector<int> e(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string p = base + ".alpha[" + std::to_string(i) + "]";
      const Json& v = alpha[i];
      if (!v.is_number_integer()) field_error(source, p, "exponent must be an integer, got " + v.dump());
      const long long x = v.get<long long>();
      if (x < 0) field_error(source, p, "negative exponent " + std::to_string(x));
      if (x > 1000) field_error(source, p, "exponent " + std::to_string(x) + " is unreasonably large");
      e[i] = static_cast<int>(x);
    }
    in.g.add_term(MultiIndex(std::move(e)), rational_field(require(terms[t], "coef", source, base), source, base + ".coef"));
  }

  BasePoint z;
  z.z.assign(n, Rational(0));
  if (auto it = j.find("base_point"); it != j.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != n) field_error(source, "base_point", "expected " + std::to_string(n) + " rationals");
    for (std::size_t i = 0; i < n; ++i)
      z.z[i] = rational_field((*it)[i], source, "base_point[" + std::to_string(i) + "]");
    in.base_point = z;
  }
  in.H = build_H(in.g, z);
  if (!in.base_point && !(in.H == in.g))
    in.notes.push_back("constant and linear terms were dropped (recentring at the origin)");
  return in;
}

PolynomialInput load_polynomial(const fs::path& path) { return parse_polynomial(read_file(path), path.string()); }

Json polynomial_to_json(const TaylorPoly& g, const std::optional<BasePoint>& z) {
  Json j;
  j["schema"] = kPolynomialSchema;
  j["n"] = g.dim();
  Json terms = Json::array();
  for (const auto& [a, c] : g.terms()) terms.push_back({{"alpha", a.entries()}, {"coef", to_string(c)}});
  j["terms"] = std::move(terms);
  if (z) j["base_point"] = rationals(z->z);
  return j;
}

MOverride parse_override(std::string_view text, std::string_view source) {
  const Json j = parse_json(text, source);
  const Json& m = require(j, "m_override", source, "");
  if (!m.is_number_integer() || m.get<long long>() < 0 || m.get<long long>() > 1000)
    field_error(source, "m_override", "expected a nonnegative integer");
  const Json& why = require(j, "justification", source, "");
  if (!why.is_string() || why.get<std::string>().empty()) field_error(source, "justification", "expected a nonempty string");
  return {m.get<int>(), why.get<std::string>()};
}

MOverride load_override(const fs::path& path) { return parse_override(read_file(path), path.string()); }

Json face_to_json(const FaceRecord& F) {
  Json v = Json::array();
  for (const auto& a : F.vertices) v.push_back(index_json(a));
  return {{"vertices", v},         {"recession", F.recession}, {"dim", F.dim},
          {"compact", F.compact},  {"weight", rationals(F.weight)}, {"degree", to_string(F.degree)}};
}

namespace {

Json polyhedron_json(std::size_t n, std::vector<MultiIndex> verts, const std::vector<Facet>& facet_list) {
  std::sort(verts.begin(), verts.end());
  Json v = Json::array();
  for (const auto& a : verts) v.push_back(index_json(a));
  std::vector<std::pair<std::string, Json>> facets;
  for (const auto& f : facet_list) {
    Json fj = {{"normal", rationals(f.normal)}, {"offset", to_string(f.offset)}};
    facets.emplace_back(fj.dump(), fj);
  }
  std::sort(facets.begin(), facets.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Json fa = Json::array();
  for (auto& [k, f] : facets) fa.push_back(std::move(f));
  return {{"n", n}, {"vertices", v}, {"facets", fa}};
}

}  // namespace

Json polyhedron_to_json(const NewtonPolyhedron& N) { return polyhedron_json(N.dim(), N.vertices(), N.facets()); }

Json report_to_json(const AnalysisReport& r) {
  Json j;
  j["schema"] = kReportSchema;
  j["artifact_version"] = kArtifactVersion;
  j["n"] = r.n;
  j["H"] = polynomial_to_json(r.H);
  j["polyhedron"] = polyhedron_json(r.n, r.vertices, r.facets);
  j["distance"] = {{"d", to_string(r.distance.d)}, {"d_decimal", to_double(r.distance.d)},
                   {"witness", rationals(r.distance.witness)}};
  j["bisectrix_face"] = {{"face", face_to_json(r.bisectrix.face)}, {"k", r.bisectrix.k}};

  Json faces = Json::array();
  for (const auto& f : r.zeros.faces) {
    Json fj = {{"face", face_to_json(f.face)}, {"order", f.order}, {"method", to_string(f.method)}};
    fj["witness"] = f.witness ? Json(*f.witness) : Json(nullptr);
    faces.push_back(std::move(fj));
  }
  j["zero_orders"] = {{"m", r.zeros.m}, {"M", r.zeros.M}, {"b", r.zeros.b}, {"method", to_string(r.zeros.method)},
                      {"faces", faces}};
  j["zero_orders"]["override"] = r.zeros.override_m
                                     ? Json{{"m_override", r.zeros.override_m->m},
                                            {"justification", r.zeros.override_m->justification}}
                                     : Json(nullptr);

  Json deg = {{"hessian_condition_holds", r.degeneracy.hessian_condition_holds},
              {"axis_vertex_only", r.degeneracy.axis_vertex_only}};
  if (r.degeneracy.structural_form) {
    Json sf = Json::array();
    for (const auto& s : *r.degeneracy.structural_form)
      sf.push_back({{"face", face_to_json(s.face)}, {"c", to_string(s.c)}, {"beta", rationals(s.beta)}, {"m", s.m}});
    deg["structural_form"] = sf;
  } else {
    deg["structural_form"] = nullptr;
  }
  deg["common_m"] = r.degeneracy.common_m ? Json(*r.degeneracy.common_m) : Json(nullptr);
  j["degeneracy"] = deg;
  if (r.direction_pair)
    j["direction_pair"] = {{"u", rationals(r.direction_pair->u)},
                           {"v", rationals(r.direction_pair->v)},
                           {"D", polynomial_to_json(r.direction_pair->D)}};
  else
    j["direction_pair"] = nullptr;

  Json fo = {{"case", to_string(r.fourier.case_label)},
             {"epsilon", to_string(r.fourier.epsilon)},
             {"log_power", r.fourier.log_power},
             {"d_integer", r.fourier.d_integer}};
  fo["lower_bound_log_power"] =
      r.fourier.lower_bound_log_power ? Json(*r.fourier.lower_bound_log_power) : Json(nullptr);
  j["fourier"] = fo;
  Json mx = {{"case", to_string(r.maximal.case_label)},
             {"p0", to_string(r.maximal.p0)},
             {"case_p0", to_string(r.maximal.case_p0)},
             {"sharpness", to_string(r.maximal.sharp)},
             {"hessian_ok", r.maximal.hessian_ok},
             {"fallback_b", r.maximal.fallback_b}};
  mx["warning"] = r.maximal.warning ? Json(*r.maximal.warning) : Json(nullptr);
  j["maximal"] = mx;
  j["interpolation"] = {{"a", threshold_json(r.interpolation.a)},
                        {"regime", to_string(r.interpolation.regime)},
                        {"p0", to_string(r.p0_interpolated)}};
  j["conditional_on_m"] = r.conditional_on_m;
  j["flags"] = {{"y_not_in_tangent_plane", r.options.y_not_in_tangent_plane},
                {"factorization_hypothesis", r.options.factorization_hypothesis}};
  j["commentary"] = r.commentary;
  return j;
}

std::vector<std::string> validate_report(const Json& j) {
  std::vector<std::string> bad;
  auto need = [&](const Json& obj, const std::string& path, const char* key, auto pred, const char* what) {
    if (!obj.is_object() || !obj.contains(key)) {
      bad.push_back(path + key + ": missing");
      return;
    }
    if (!pred(obj.at(key))) bad.push_back(path + key + ": expected " + what);
  };
  auto is_str = [](const Json& v) { return v.is_string(); };
  auto is_int = [](const Json& v) { return v.is_number_integer(); };
  auto is_bool = [](const Json& v) { return v.is_boolean(); };
  auto is_obj = [](const Json& v) { return v.is_object(); };
  auto is_arr = [](const Json& v) { return v.is_array(); };
  auto is_rat = [](const Json& v) {
    if (!v.is_string()) return false;
    try {
      (void)parse_rational(v.get<std::string>());
      return true;
    } catch (const std::invalid_argument&) {
      return false;
    }
  };
  if (!j.is_object()) return {"report: expected an object"};
  if (j.value("schema", "") != kReportSchema) bad.push_back(std::string("schema: expected ") + kReportSchema);
  need(j, "", "artifact_version", is_str, "a string");
  need(j, "", "n", is_int, "an integer");
  need(j, "", "H", is_obj, "an object");
  need(j, "", "polyhedron", is_obj, "an object");
  need(j, "", "distance", is_obj, "an object");
  need(j, "", "bisectrix_face", is_obj, "an object");
  need(j, "", "zero_orders", is_obj, "an object");
  need(j, "", "degeneracy", is_obj, "an object");
  need(j, "", "fourier", is_obj, "an object");
  need(j, "", "maximal", is_obj, "an object");
  need(j, "", "interpolation", is_obj, "an object");
  need(j, "", "conditional_on_m", is_bool, "a boolean");
  need(j, "", "commentary", is_arr, "an array");
  if (!bad.empty()) return bad;
  need(j["polyhedron"], "polyhedron.", "vertices", is_arr, "an array");
  need(j["polyhedron"], "polyhedron.", "facets", is_arr, "an array");
  need(j["distance"], "distance.", "d", is_rat, "a rational string");
  need(j["bisectrix_face"], "bisectrix_face.", "k", is_int, "an integer");
  for (const char* k : {"m", "M", "b"}) need(j["zero_orders"], "zero_orders.", k, is_int, "an integer");
  need(j["zero_orders"], "zero_orders.", "method", is_str, "a string");
  need(j["degeneracy"], "degeneracy.", "hessian_condition_holds", is_bool, "a boolean");
  need(j["fourier"], "fourier.", "case", is_str, "a string");
  need(j["fourier"], "fourier.", "epsilon", is_rat, "a rational string");
  need(j["fourier"], "fourier.", "log_power", is_int, "an integer");
  need(j["maximal"], "maximal.", "p0", is_rat, "a rational string");
  need(j["maximal"], "maximal.", "sharpness", is_str, "a string");
  need(j["interpolation"], "interpolation.", "p0", is_rat, "a rational string");
  if (j["interpolation"].contains("a") && !(is_rat(j["interpolation"]["a"]) || j["interpolation"]["a"] == "inf"))
    bad.push_back("interpolation.a: expected a rational string or \"inf\"");
  return bad;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string decay_csv(const std::vector<numeric::DecaySample>& samples) {
  std::string out = "lambda,reT,imT,absT,err_est,flagged\n";
  for (const auto& s : samples) {
    out += format_double(s.lambda) + "," + format_double(s.T.real()) + "," + format_double(s.T.imag()) + "," +
           format_double(std::abs(s.T)) + "," + format_double(s.abs_err) + "," + (s.flagged ? "1" : "0") + "\n";
  }
  return out;
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

Json RunManifest::to_json() const {
  return {{"command", command},
          {"input_hash", input_hash},
          {"parameters", parameters},
          {"artifact_version", artifact_version}};
}

std::string RunManifest::hash() const { return sha256_hex(to_json().dump()); }

fs::path cache_dir() {
  if (const char* c = std::getenv("NEWTONPOLY_CACHE"); c && *c) return c;
  if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return fs::path(x) / "newtonpoly";
  if (const char* h = std::getenv("HOME"); h && *h) return fs::path(h) / ".cache" / "newtonpoly";
  return fs::temp_directory_path() / "newtonpoly-cache";
}

void atomic_write(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::random_device rd;
  const fs::path tmp = path.string() + ".tmp-" + std::to_string(rd());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("short write to " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::optional<fs::path> Cache::lookup(const RunManifest& m) const {
  const fs::path e = entry(m);
  std::error_code ec;
  if (!fs::is_regular_file(e / "manifest.json", ec)) return std::nullopt;
  try {
    const Json stored = Json::parse(read_file(e / "manifest.json"));
    if (stored.value("manifest", Json()) != m.to_json()) return std::nullopt;
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return e;
}

void Cache::store(const RunManifest& m, const std::vector<std::pair<std::string, std::string>>& files) const {
  const fs::path e = entry(m);
  fs::create_directories(e);
  Json index = Json::array();
  for (const auto& [name, content] : files) {
    atomic_write(e / name, content);
    index.push_back({{"name", name}, {"sha256", sha256_hex(content)}});
  }
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  // The manifest file is written last, so a partially written entry never looks valid.
  Json doc = {{"manifest", m.to_json()},
              {"key", m.hash()},
              {"files", index},
              {"created_unix", std::chrono::duration_cast<std::chrono::seconds>(now).count()}};
  atomic_write(e / "manifest.json", doc.dump(2) + "\n");
}

Json Cache::bundle() const {
  Json runs = Json::array();
  std::error_code ec;
  std::vector<fs::path> entries;
  if (fs::is_directory(root_, ec))
    for (const auto& d : fs::directory_iterator(root_)) entries.push_back(d.path());
  std::sort(entries.begin(), entries.end());
  for (const auto& e : entries) {
    if (!fs::is_regular_file(e / "manifest.json", ec)) continue;
    Json doc;
    try {
      doc = Json::parse(read_file(e / "manifest.json"));
    } catch (const std::exception&) {
      continue;
    }
    if (doc["manifest"].value("artifact_version", "") != kArtifactVersion) continue;
    Json run = {{"key", doc["key"]}, {"manifest", doc["manifest"]}, {"outputs", Json::object()}};
    for (const auto& f : doc["files"]) {
      const std::string name = f["name"];
      const std::string body = read_file(e / name);
      if (sha256_hex(body) != f["sha256"]) continue;  // torn or edited entry
      if (name.ends_with(".json"))
        run["outputs"][name] = Json::parse(body);
      else
        run["outputs"][name] = body;
    }
    runs.push_back(std::move(run));
  }
  return {{"schema", kBundleSchema}, {"artifact_version", kArtifactVersion}, {"runs", runs}};
}

}  // namespace npoly::io
