/* Serialization: spec/event JSON, CSV emission with metadata headers,
 * grid parsing, atomic file writes. */
#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "multising/errors.hpp"
#include "multising/gibbs.hpp"
#include "multising/semigroup.hpp"

namespace multising {

inline nlohmann::json spec_to_json(const SemigroupSpec& spec) {
  nlohmann::json j;
  j["d"] = spec.d;
  j["generators"] = spec.generators;
  j["direction"] = spec.direction;
  return j;
}

inline SemigroupSpec spec_from_json(const nlohmann::json& j) {
  try {
    int d = j.at("d").get<int>();
    std::vector<Index> gens = j.at("generators").get<std::vector<Index>>();
    int direction = j.value("direction", 1);
    return validate_generators(gens, d, direction);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad spec JSON: ") + e.what());
  }
}

inline SemigroupSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open spec file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad spec JSON: ") + e.what());
  }
  return spec_from_json(j);
}

inline nlohmann::json event_to_json(const CylinderEvent& ev) {
  nlohmann::json j;
  j["sites"] = ev.sites;
  j["values"] = ev.values;
  return j;
}

inline CylinderEvent event_from_json(const nlohmann::json& j) {
  try {
    CylinderEvent ev;
    ev.sites = j.at("sites").get<std::vector<Index>>();
    ev.values = j.at("values").get<std::vector<int>>();
    return ev;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad event JSON: ") + e.what());
  }
}

inline CylinderEvent load_event(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open event file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad event JSON: ") + e.what());
  }
  return event_from_json(j);
}

// Shortest decimal form that round-trips, so identical runs produce
// byte-identical files.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = 0.0;
  std::sscanf(buf, "%lf", &back);
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[40];
    std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
    std::sscanf(shorter, "%lf", &back);
    if (back == v) return shorter;
  }
  return buf;
}

inline std::string format_index(const Index& v) {
  std::string out;
  for (std::size_t t = 0; t < v.size(); ++t) {
    if (t) out += 'x';
    out += std::to_string(v[t]);
  }
  return out;
}

// "start:stop:count" with inclusive endpoints.
inline std::vector<double> parse_grid(const std::string& text) {
  double start = 0.0, stop = 0.0;
  long count = 0;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%ld%c", &start, &stop, &count,
                  &extra) != 3 ||
      count < 1)
    throw ConfigError("grid must be start:stop:count with count >= 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  if (count == 1) {
    out.push_back(start);
    return out;
  }
  for (long t = 0; t < count; ++t)
    out.push_back(start + (stop - start) * static_cast<double>(t) /
                              static_cast<double>(count - 1));
  out.back() = stop;
  return out;
}

// Collects lines, then writes through a temp file + rename.
class AtomicWriter {
 public:
  explicit AtomicWriter(std::string path) : path_(std::move(path)) {}

  void line(const std::string& s) { body_ += s + "\n"; }
  void meta(const std::string& key, const std::string& value) {
    body_ += "# " + key + "=" + value + "\n";
  }

  void commit() const {
    if (path_.empty() || path_ == "-") {
      std::fputs(body_.c_str(), stdout);
      return;
    }
    const std::string tmp = path_ + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cannot write " + tmp);
      out << body_;
    }
    if (std::rename(tmp.c_str(), path_.c_str()) != 0)
      throw Error("cannot move output into place: " + path_);
  }

  const std::string& body() const { return body_; }

 private:
  std::string path_;
  std::string body_;
};

}  // namespace multising
