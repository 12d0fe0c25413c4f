#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "jetcalc/dist.hpp"
#include "jetcalc/errors.hpp"
#include "jetcalc/jet.hpp"
#include "jetcalc/parse.hpp"
#include "jetcalc/testspace.hpp"

namespace jetcalc::io {

using Json = nlohmann::ordered_json;

inline Json rational_array(const std::vector<Rational>& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(to_string(x));
  return a;
}

inline std::vector<Rational> parse_rational_array(const Json& j) {
  detail::require(j.is_array(), "expected an array of rationals");
  std::vector<Rational> out;
  for (const auto& v : j) out.push_back(parse_rational(v.get<std::string>()));
  return out;
}

inline Json poly_array(const std::vector<Poly>& ps) {
  Json a = Json::array();
  for (const auto& p : ps) a.push_back(to_string(p));
  return a;
}

inline std::vector<Poly> parse_poly_array(const Json& j, std::size_t dim) {
  detail::require(j.is_array(), "expected an array of polynomial strings");
  std::vector<Poly> out;
  for (const auto& v : j) out.push_back(parse_poly(v.get<std::string>(), dim));
  return out;
}

inline Json to_json(const Box& box) {
  Json a = Json::array();
  for (const auto& [l, r] : box.bounds()) a.push_back(Json::array({to_string(l), to_string(r)}));
  return a;
}

inline Box box_from_json(const Json& j) {
  detail::require(j.is_array(), "box must be an array of [lower, upper] pairs");
  std::vector<std::pair<Rational, Rational>> bounds;
  for (const auto& axis : j) {
    auto lr = parse_rational_array(axis);
    detail::require(lr.size() == 2, "box axis needs exactly two bounds");
    bounds.emplace_back(lr[0], lr[1]);
  }
  return Box(std::move(bounds));
}

inline Json multi_index_json(const MultiIndex& a) { return Json(a.to_vector()); }

inline MultiIndex multi_index_from_json(const Json& j) { return MultiIndex(j.get<std::vector<unsigned>>()); }

/// JetHom with an explicit basis-order header.
inline Json to_json(const JetHom& h) {
  Json basis = Json::array();
  for (const auto& slot : h.domain().basis()) basis.push_back({{"alpha", multi_index_json(slot.alpha)}, {"fiber", slot.fiber}});
  Json rows = Json::array();
  for (std::size_t r = 0; r < h.codomain_rank(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < h.domain().rank(); ++c) row.push_back(to_string(h.matrix()(r, c)));
    rows.push_back(std::move(row));
  }
  return {{"dimension", h.domain().dim()},
          {"order", h.domain().order()},
          {"fiber_rank", h.domain().fiber_rank()},
          {"basis", std::move(basis)},
          {"rows", std::move(rows)}};
}

inline JetHom jet_hom_from_json(const Json& j) {
  JetSpace space(j.at("dimension").get<std::size_t>(), j.at("fiber_rank").get<std::size_t>(), j.at("order").get<unsigned>());
  const Json& basis = j.at("basis");
  auto expected = space.basis();
  detail::require(basis.size() == expected.size(), "basis header does not match the jet space");
  for (std::size_t i = 0; i < expected.size(); ++i)
    detail::require(multi_index_from_json(basis[i].at("alpha")) == expected[i].alpha &&
                        basis[i].at("fiber").get<std::size_t>() == expected[i].fiber,
                    "basis header is not in canonical order");
  const Json& rows = j.at("rows");
  PolyMatrix m(space.dim(), rows.size(), space.rank());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto entries = parse_poly_array(rows[r], space.dim());
    detail::require(entries.size() == space.rank(), "jet hom row has the wrong length");
    for (std::size_t c = 0; c < entries.size(); ++c) m(r, c) = entries[c];
  }
  return JetHom(space, std::move(m));
}

inline Json to_json(const JetVector& v) {
  Json basis = Json::array();
  for (const auto& slot : v.space().basis()) basis.push_back({{"alpha", multi_index_json(slot.alpha)}, {"fiber", slot.fiber}});
  return {{"basis", std::move(basis)}, {"coords", poly_array(v.coords())}};
}

inline Json to_json(const TestSection& s) {
  return {{"box", to_json(s.box())}, {"p", s.bump_exponent()}, {"components", poly_array(s.polynomial_part().components())}};
}

inline TestSection test_section_from_json(const Json& j) {
  Box box = box_from_json(j.at("box"));
  return TestSection(box, j.at("p").get<unsigned>(), FreeModuleElement(parse_poly_array(j.at("components"), box.dim())));
}

inline Json to_json(const Distribution& d) {
  Json points = Json::array();
  for (const auto& f : d.point_functionals())
    points.push_back({{"point", rational_array(f.point)}, {"alpha", multi_index_json(f.alpha)}, {"fiber", f.fiber}, {"coeff", to_string(f.coeff)}});
  Json out = {{"dimension", d.dim()}, {"rank", d.rank()}, {"points", std::move(points)}};
  if (const auto& r = d.regular_part()) {
    Json dens = {{"polys", poly_array(r->densities)}};
    if (r->embedding) {
      dens["embedded"] = r->embedding->exponent;
      dens["box"] = to_json(r->embedding->box);
    }
    out["density"] = std::move(dens);
  }
  return out;
}

/// Reads a distribution. `dim`/`rank` fill in for missing header fields and
/// `default_box` for an embedded density that does not name its box.
inline Distribution distribution_from_json(const Json& j, std::size_t dim, std::size_t rank = 1,
                                           const std::optional<Box>& default_box = std::nullopt) {
  dim = j.value("dimension", dim);
  rank = j.value("rank", rank);
  Distribution d(dim, rank);
  if (j.contains("points"))
    for (const auto& p : j.at("points")) {
      PointFunctional f{parse_rational_array(p.at("point")), multi_index_from_json(p.at("alpha")), p.value("fiber", std::size_t{0}),
                        parse_rational(p.value("coeff", std::string("1")))};
      d.add_point(f);
    }
  if (j.contains("density")) {
    const Json& dens = j.at("density");
    RegularDensity r{parse_poly_array(dens.at("polys"), dim), std::nullopt};
    if (dens.contains("embedded")) {
      std::optional<Box> box = dens.contains("box") ? std::optional<Box>(box_from_json(dens.at("box"))) : default_box;
      detail::require(box.has_value(), "embedded density needs a box");
      r.embedding = RegularDensity::Embedding{*box, dens.at("embedded").get<unsigned>()};
    }
    d.add_density(std::move(r));
  }
  return d;
}

}  // namespace jetcalc::io
