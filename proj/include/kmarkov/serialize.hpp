#pragma once

// JSON forms. Big integers are decimal strings throughout.

#include <optional>
#include <string>

#include <json.hpp>

#include "kmarkov/cohn.hpp"
#include "kmarkov/criterion.hpp"
#include "kmarkov/farey.hpp"
#include "kmarkov/markov_tree.hpp"
#include "kmarkov/numtheory.hpp"
#include "kmarkov/report.hpp"

namespace kmarkov {

using Json = nlohmann::ordered_json;

namespace detail {
inline Integer int_from_json(const Json& j) {
  if (j.is_string()) return parse_integer(j.get<std::string>());
  if (j.is_number_integer()) return Integer(std::to_string(j.get<long long>()));
  throw DomainError("expected a decimal string, got " + j.dump());
}

inline std::optional<TreeAddress> address_from_json(const Json& j) {
  if (!j.contains("address") || j["address"].is_null()) return std::nullopt;
  return TreeAddress::parse(j["address"].get<std::string>());
}

inline Json address_to_json(const std::optional<TreeAddress>& a) { return a ? Json(a->str()) : Json(nullptr); }
}  // namespace detail

inline Json to_json(const MarkovTriple& t) {
  return Json{{"k", to_decimal(t.k)},
              {"a", to_decimal(t.a)},
              {"b", to_decimal(t.b)},
              {"c", to_decimal(t.c)},
              {"address", detail::address_to_json(t.address)}};
}

inline MarkovTriple markov_triple_from_json(const Json& j) {
  return {detail::int_from_json(j.at("k")), detail::int_from_json(j.at("a")), detail::int_from_json(j.at("b")),
          detail::int_from_json(j.at("c")), detail::address_from_json(j)};
}

inline Json to_json(const Mat2& m) {
  return Json::array({Json::array({to_decimal(m.m11), to_decimal(m.m12)}),
                      Json::array({to_decimal(m.m21), to_decimal(m.m22)})});
}

inline Mat2 mat2_from_json(const Json& j) {
  return {detail::int_from_json(j.at(0).at(0)), detail::int_from_json(j.at(0).at(1)),
          detail::int_from_json(j.at(1).at(0)), detail::int_from_json(j.at(1).at(1))};
}

inline Json to_json(const CohnTriple& t) {
  return Json{{"k", to_decimal(t.k())},
              {"l", t.l() ? Json(to_decimal(*t.l())) : Json(nullptr)},
              {"P", to_json(t.P())},
              {"Q", to_json(t.Q())},
              {"R", to_json(t.R())},
              {"address", detail::address_to_json(t.address())}};
}

/// Validates on the way in.
inline CohnTriple cohn_triple_from_json(const Json& j) {
  std::optional<Integer> l;
  if (j.contains("l") && !j["l"].is_null()) l = detail::int_from_json(j["l"]);
  return CohnTriple::checked(detail::int_from_json(j.at("k")), mat2_from_json(j.at("P")), mat2_from_json(j.at("Q")),
                             mat2_from_json(j.at("R")), l, detail::address_from_json(j));
}

inline Json to_json(const Fraction& f) { return f.str(); }

inline Json to_json(const Label& l) {
  return Json{{"k", to_decimal(l.k)},
              {"t", l.t.str()},
              {"m_t", to_decimal(l.m_t)},
              {"u_t", l.u_t ? Json(to_decimal(*l.u_t)) : Json(nullptr)}};
}

inline Label label_from_json(const Json& j) {
  Label l{detail::int_from_json(j.at("k")), Fraction::parse(j.at("t").get<std::string>()),
          detail::int_from_json(j.at("m_t")), std::nullopt};
  if (j.contains("u_t") && !j["u_t"].is_null()) l.u_t = detail::int_from_json(j["u_t"]);
  return l;
}

inline Json to_json(const Factorization& f) {
  Json factors = Json::array();
  for (const PrimePower& pp : f.factors) factors.push_back(Json::array({to_decimal(pp.prime), pp.exponent}));
  return Json{{"factors", factors}, {"cofactor", to_decimal(f.cofactor)}, {"complete", f.complete()}};
}

inline Json to_json(const UniquenessVerdict& v) {
  Json j{{"k", to_decimal(v.k)}, {"b", to_decimal(v.b)}, {"verdict", name(v.verdict)}};
  if (v.solution_count) j["solution_count"] = to_decimal(*v.solution_count);
  if (v.solutions) {
    Json s = Json::array();
    for (const Natural& r : v.solutions->residues) s.push_back(to_decimal(r));
    j["solutions"] = s;
  }
  if (v.factorization) j["factorization"] = to_json(*v.factorization);
  if (v.bound) j["bound"] = to_decimal(*v.bound);
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

inline Json to_json(const CheckReport& r) {
  return Json{{"name", r.name}, {"checks", r.checks}, {"ok", r.ok()}, {"failures", r.failures}};
}

}  // namespace kmarkov
