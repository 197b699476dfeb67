#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

#include "pasrect/geometry.hpp"

namespace pasrect::io {

using json = nlohmann::ordered_json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// FNV-1a, 64 bit.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// ---------------------------------------------------------------------------
// Instances

struct InstanceFile {
  std::variant<MisrInstance, KnapsackInstance> body;
  json meta = json::object();  // seed, generator, parameters; not part of the hash

  bool is_misr() const { return std::holds_alternative<MisrInstance>(body); }
  const MisrInstance& misr() const { return std::get<MisrInstance>(body); }
  const KnapsackInstance& gknap() const { return std::get<KnapsackInstance>(body); }
  std::string type() const { return is_misr() ? "misr" : "gknap"; }
};

inline json body_json(const InstanceFile& f) {
  json j;
  j["type"] = f.type();
  if (f.is_misr()) {
    j["rects"] = json::array();
    for (const auto& r : f.misr().rects) j["rects"].push_back({r.x1, r.y1, r.x2, r.y2});
  } else {
    const auto& g = f.gknap();
    j["N"] = g.N;
    j["rotations"] = g.rotations;
    j["items"] = json::array();
    for (const auto& it : g.items) j["items"].push_back({it.w, it.h});
  }
  return j;
}

/// Hash of the canonical body (metadata excluded).
inline std::string content_hash(const InstanceFile& f) { return hex64(fnv1a(body_json(f).dump())); }

inline std::string serialize(const InstanceFile& f) {
  json j = body_json(f);
  if (!f.meta.empty()) j["meta"] = f.meta;
  return j.dump(2) + "\n";
}

inline Coord get_coord(const json& v, const char* what) {
  if (!v.is_number_integer()) throw FormatError(std::string(what) + " must be an integer");
  return v.get<Coord>();
}

inline InstanceFile parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("type")) throw FormatError("instance needs a type tag");
  InstanceFile f;
  const auto type = j["type"].get<std::string>();
  if (type == "misr") {
    MisrInstance inst;
    if (!j.contains("rects") || !j["rects"].is_array()) throw FormatError("misr instance needs a rects array");
    for (const auto& r : j["rects"]) {
      if (!r.is_array() || r.size() != 4) throw FormatError("rect must be [x1, y1, x2, y2]");
      inst.rects.push_back({get_coord(r[0], "x1"), get_coord(r[1], "y1"), get_coord(r[2], "x2"), get_coord(r[3], "y2")});
    }
    f.body = std::move(inst);
  } else if (type == "gknap") {
    KnapsackInstance inst;
    if (!j.contains("N") || !j.contains("items") || !j["items"].is_array())
      throw FormatError("gknap instance needs N and items");
    inst.N = get_coord(j["N"], "N");
    inst.rotations = j.value("rotations", true);
    for (const auto& it : j["items"]) {
      if (!it.is_array() || it.size() != 2) throw FormatError("item must be [w, h]");
      inst.items.push_back({get_coord(it[0], "w"), get_coord(it[1], "h")});
    }
    f.body = std::move(inst);
  } else {
    throw FormatError("unknown instance type: " + type);
  }
  if (j.contains("meta")) f.meta = j["meta"];
  return f;
}

// ---------------------------------------------------------------------------
// Solutions

struct SolutionFile {
  std::string type;           // "misr" | "gknap"
  std::string instance_hash;  // content_hash of the instance solved
  IndexSet selected;          // misr
  Packing packing;            // gknap
  json provenance = json::object();
};

inline std::string serialize(const SolutionFile& s) {
  json j;
  j["type"] = s.type;
  j["instance"] = s.instance_hash;
  if (s.type == "misr") {
    j["selected"] = s.selected;
  } else {
    j["N"] = s.packing.N;
    j["placements"] = json::array();
    for (const auto& p : s.packing.placements)
      j["placements"].push_back({{"item", p.item}, {"x", p.x}, {"y", p.y}, {"rotated", p.rotated}});
  }
  j["provenance"] = s.provenance;
  return j.dump(2) + "\n";
}

inline SolutionFile parse_solution(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("type")) throw FormatError("solution needs a type tag");
  SolutionFile s;
  s.type = j["type"].get<std::string>();
  s.instance_hash = j.value("instance", "");
  if (s.type == "misr") {
    if (!j.contains("selected") || !j["selected"].is_array()) throw FormatError("misr solution needs selected");
    for (const auto& v : j["selected"]) {
      if (!v.is_number_unsigned()) throw FormatError("selected entries must be non-negative integers");
      s.selected.push_back(v.get<Index>());
    }
  } else if (s.type == "gknap") {
    s.packing.N = get_coord(j.value("N", json(0)), "N");
    if (!j.contains("placements") || !j["placements"].is_array()) throw FormatError("packing needs placements");
    for (const auto& p : j["placements"]) {
      if (!p.is_object() || !p.contains("item") || !p["item"].is_number_unsigned())
        throw FormatError("placement needs a non-negative item index");
      s.packing.placements.push_back(
          {p["item"].get<Index>(), get_coord(p.value("x", json(0)), "x"), get_coord(p.value("y", json(0)), "y"),
           p.value("rotated", false)});
    }
  } else {
    throw FormatError("unknown solution type: " + s.type);
  }
  if (j.contains("provenance")) s.provenance = j["provenance"];
  return s;
}

// ---------------------------------------------------------------------------
// Files

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline InstanceFile load_instance(const std::string& path) { return parse_instance(read_file(path)); }
inline SolutionFile load_solution(const std::string& path) { return parse_solution(read_file(path)); }

}  // namespace pasrect::io
