#pragma once

// Certificate <-> JSON. Elements are written in (c1, c2) coordinates "(c1,c2)".

#include <json.hpp>

#include "idemfact/certify.hpp"

namespace idem {

using json = nlohmann::json;

inline json to_json(const Mat2& m) {
  return json::array({m.p().to_pair_string(), m.q().to_pair_string(), m.r().to_pair_string(), m.s().to_pair_string()});
}

inline json to_json(const SL2Element& e) {
  if (const auto* c = std::get_if<Conjugator>(&e)) {
    return json{{"kind", std::string(to_string(c->kind))}, {"a", c->a.to_pair_string()}};
  }
  return to_json(std::get<Mat2>(e));
}

inline json to_json(const CertificateData& c) {
  json j;
  j["ring"] = {{"alpha", c.target.ring().alpha()}};
  j["target"] = to_json(c.target);
  j["conjugators"] = json::array();
  for (const auto& e : c.conjugators) j["conjugators"].push_back(to_json(e));
  j["idempotents"] = json::array();
  for (const auto& a : c.idempotents) j["idempotents"].push_back(to_json(a));
  j["counts"] = {{"r", c.r()}, {"s", c.s()}};
  j["flags"] = c.flags.names();
  j["annotations"] = c.annotations;
  return j;
}

inline json to_json(const Certificate& c) { return to_json(c.data()); }

struct ParsedCertificate {
  CertificateData data;
  int declared_r = 0;
  int declared_s = 0;
};

namespace detail {

inline QuadInt element_from_json(const RingSpec& ring, const json& j) {
  require(j.is_string(), ErrorKind::ParseError, "element must be a string");
  return parse_element(ring, j.get<std::string>());
}

inline Mat2 matrix_from_json(const RingSpec& ring, const json& j) {
  require(j.is_array() && j.size() == 4, ErrorKind::ParseError, "matrix must be an array of 4 elements");
  return {element_from_json(ring, j[0]), element_from_json(ring, j[1]), element_from_json(ring, j[2]),
          element_from_json(ring, j[3])};
}

}  // namespace detail

/// Throws ParseError on any structural problem (not on failed verification).
inline ParsedCertificate certificate_from_json(const json& j) {
  try {
    require(j.is_object(), ErrorKind::ParseError, "certificate must be a JSON object");
    RingSpec ring = RingSpec::make(Int(j.at("ring").at("alpha").get<long>()));
    ParsedCertificate out{{detail::matrix_from_json(ring, j.at("target")), {}, {}, {}, {}}, 0, 0};
    for (const auto& e : j.at("conjugators")) {
      if (e.is_object()) {
        out.data.conjugators.emplace_back(
            Conjugator{parse_conj_kind(e.at("kind").get<std::string>()), detail::element_from_json(ring, e.at("a"))});
      } else {
        out.data.conjugators.emplace_back(detail::matrix_from_json(ring, e));
      }
    }
    for (const auto& a : j.at("idempotents")) out.data.idempotents.push_back(detail::matrix_from_json(ring, a));
    if (j.contains("flags")) {
      for (const auto& f : j.at("flags")) out.data.flags.set(Flags::parse(f.get<std::string>()));
    }
    if (j.contains("annotations")) out.data.annotations = j.at("annotations").get<std::vector<std::string>>();
    out.declared_r = j.at("counts").at("r").get<int>();
    out.declared_s = j.at("counts").at("s").get<int>();
    return out;
  } catch (const json::exception& e) {
    fail(ErrorKind::ParseError, std::string("malformed certificate: ") + e.what());
  }
}

inline ParsedCertificate certificate_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::ParseError, std::string("invalid JSON: ") + e.what());
  }
  return certificate_from_json(j);
}

}  // namespace idem
