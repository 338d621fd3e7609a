#pragma once

// Versioned JSON documents for links. Doubles are written in shortest
// round-trip form, so parse(dump(link)) reproduces every bit.

#include "linklab/catalog.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace linklab {

using Json = nlohmann::ordered_json;

inline constexpr int kLinkSchemaVersion = 1;

inline Json to_json(const Vec& v) {
  Json out = Json::array();
  for (int k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

/// Frame as a list of its column vectors.
inline Json frame_to_json(const Mat& frame) {
  Json out = Json::array();
  for (int c = 0; c < frame.cols(); ++c) out.push_back(to_json(Vec(frame.col(c))));
  return out;
}

inline Json to_json(const EmbeddedSphere& s, const std::string& name) {
  Json out;
  out["name"] = name;
  out["center"] = to_json(s.center);
  out["frame"] = frame_to_json(s.frame);
  out["radii"] = to_json(s.radii);
  return out;
}

inline Json to_json(const Coefficients& c) {
  Json out;
  out["c1"] = c.c1;
  out["c2"] = c.c2;
  out["c3"] = c.c3;
  out["c4"] = c.c4;
  return out;
}

inline Json to_json(const Link& link) {
  Json out;
  out["family"] = link.family;
  out["version"] = kLinkSchemaVersion;
  out["i"] = link.i;
  out["j"] = link.j;
  out["n"] = link.n;
  out["coeffs"] = to_json(link.coeffs);
  Json comps = Json::array();
  for (int m = 0; m < 3; ++m) comps.push_back(to_json(link.components[static_cast<std::size_t>(m)], "K" + std::to_string(m + 1)));
  out["components"] = std::move(comps);
  return out;
}

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::parse, std::string("link json: missing field '") + key + "'");
  return j.at(key);
}

inline Vec vec_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.empty() || j.size() > static_cast<std::size_t>(kMaxDim)) {
    throw Error(ErrorKind::parse, std::string("link json: bad vector in '") + what + "'");
  }
  Vec v(static_cast<int>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) throw Error(ErrorKind::parse, std::string("link json: non-numeric entry in '") + what + "'");
    v(static_cast<int>(k)) = j[k].get<double>();
  }
  return v;
}

inline EmbeddedSphere sphere_from_json(const Json& j) {
  const Vec center = vec_from_json(field(j, "center"), "center");
  const Json& cols = field(j, "frame");
  if (!cols.is_array() || cols.empty() || cols.size() > static_cast<std::size_t>(kMaxDim)) {
    throw Error(ErrorKind::parse, "link json: bad frame");
  }
  Mat frame(center.size(), static_cast<int>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const Vec col = vec_from_json(cols[c], "frame");
    if (col.size() != center.size()) throw Error(ErrorKind::parse, "link json: frame column has wrong length");
    frame.col(static_cast<int>(c)) = col;
  }
  return make_sphere(center, frame, vec_from_json(field(j, "radii"), "radii"));
}

}  // namespace detail

inline Link link_from_json(const Json& j) {
  const int version = detail::field(j, "version").get<int>();
  if (version != kLinkSchemaVersion) {
    throw Error(ErrorKind::parse, "link json: unsupported version " + std::to_string(version));
  }
  Link link;
  link.family = detail::field(j, "family").get<std::string>();
  link.i = detail::field(j, "i").get<int>();
  link.j = detail::field(j, "j").get<int>();
  link.n = detail::field(j, "n").get<int>();
  const Json& c = detail::field(j, "coeffs");
  link.coeffs = {detail::field(c, "c1").get<double>(), detail::field(c, "c2").get<double>(),
                 detail::field(c, "c3").get<double>(), detail::field(c, "c4").get<double>()};
  const Json& comps = detail::field(j, "components");
  if (!comps.is_array() || comps.size() != 3) throw Error(ErrorKind::parse, "link json: need three components");
  for (std::size_t m = 0; m < 3; ++m) {
    link.components[m] = detail::sphere_from_json(comps[m]);
    if (link.components[m].ambient_dim() != link.n) {
      throw Error(ErrorKind::parse, "link json: component dimension does not match n");
    }
  }
  return link;
}

inline Link link_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("link json: ") + e.what());
  }
  try {
    return link_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("link json: ") + e.what());
  }
}

}  // namespace linklab
