// jetcalc: command-line front end. Every subcommand prints one JSON document
// on stdout. Exit codes: 0 ok, 2 parse error, 3 precondition violation,
// verify-all: number of failed properties (capped at 100).

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "jetcalc/jetcalc.hpp"
#include "jetcalc/json_io.hpp"
#include "jetcalc/properties.hpp"

namespace {

using jetcalc::io::Json;

constexpr int kExitParse = 2;
constexpr int kExitPrecondition = 3;
constexpr int kMaxVerifyExit = 100;

struct SessionFlags {
  std::optional<std::size_t> dim;
  std::string box;
  std::optional<unsigned> bump;
  std::uint64_t seed = 1;
  bool pretty = false;
};

struct Inputs {
  std::string op, poly, section, dist, phi, field;
  std::vector<std::string> gamma;
  unsigned k = 0;
  std::size_t m = 1;
  std::optional<unsigned> order;
  unsigned degree = 4;
  std::size_t resolution = 1024;
  std::size_t workers = 1;
};

/// Resolved session: dimension, box and default bump exponent.
struct Session {
  std::size_t dim;
  jetcalc::Box box;
  SessionFlags flags;

  unsigned bump_for(const std::optional<jetcalc::NormalOperator>& op) const {
    if (flags.bump) return *flags.bump;
    return op ? op->order().value_or(0) + 1 : 1;
  }
};

std::vector<jetcalc::Rational> parse_box_numbers(const std::string& text) {
  std::vector<jetcalc::Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    out.push_back(jetcalc::parse_rational(item));
  }
  if (out.empty() || out.size() % 2 != 0) throw jetcalc::ParseError("--box needs pairs l1,r1[,l2,r2...]", 0);
  return out;
}

Session resolve_session(const SessionFlags& flags, const std::vector<std::string>& texts) {
  std::optional<std::vector<jetcalc::Rational>> box_numbers;
  if (!flags.box.empty()) box_numbers = parse_box_numbers(flags.box);
  std::size_t dim = 1;
  if (flags.dim) {
    dim = *flags.dim;
  } else if (box_numbers) {
    dim = box_numbers->size() / 2;
  } else {
    for (const auto& t : texts) dim = std::max(dim, jetcalc::infer_dimension(t));
  }
  if (dim < 1 || dim > jetcalc::kDefaultDimensionLimit) throw jetcalc::InvalidInput("dimension must be between 1 and 4");
  jetcalc::Box box = jetcalc::Box::unit(dim);
  if (box_numbers) {
    if (box_numbers->size() / 2 != dim) throw jetcalc::InvalidInput("--box does not match the dimension");
    std::vector<std::pair<jetcalc::Rational, jetcalc::Rational>> bounds;
    for (std::size_t i = 0; i < box_numbers->size(); i += 2) bounds.emplace_back((*box_numbers)[i], (*box_numbers)[i + 1]);
    box = jetcalc::Box(std::move(bounds));
  }
  if (flags.bump && *flags.bump < 1) throw jetcalc::InvalidInput("bump exponent must be at least 1");
  return {dim, std::move(box), flags};
}

Json read_json_argument(const std::string& text) {
  std::string body = text;
  if (!body.empty() && body.front() == '@') {
    std::ifstream in(body.substr(1));
    if (!in) throw jetcalc::InvalidInput("cannot open " + body.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    body = ss.str();
  }
  try {
    return Json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw jetcalc::ParseError(std::string("malformed JSON: ") + e.what(), e.byte > 0 ? e.byte - 1 : 0);
  }
}

Json order_json(const jetcalc::NormalOperator& op) {
  auto k = op.order();
  return k ? Json(*k) : Json(nullptr);
}

Json section_json(const jetcalc::FreeModuleElement& s) { return jetcalc::io::poly_array(s.components()); }

}  // namespace

int main(int argc, char** argv) {
  using namespace jetcalc;

  CLI::App app{"Exact differential operators, jets, test sections and distributions over Q[x,y,z,w]"};
  app.require_subcommand(1);
  app.fallthrough();

  SessionFlags flags;
  Inputs in;
  app.add_option("-n,--dim", flags.dim, "ambient dimension (default: inferred)");
  app.add_option("--box", flags.box, "box bounds l1,r1[,l2,r2...] (default: unit box)");
  app.add_option("-p,--bump", flags.bump, "bump exponent (default: operator order + 1)");
  app.add_option("--seed", flags.seed, "random seed");
  app.add_flag("--pretty", flags.pretty, "indented output");

  auto add = [&](const char* name, const char* help) { return app.add_subcommand(name, help); };
  auto* c_normalize = add("normalize", "normal form of an operator expression");
  auto* c_order = add("order", "order of an operator (null for zero)");
  auto* c_delta = add("delta", "delta_a D = a D - D(a .)");
  auto* c_decompose = add("decompose", "split a first-order operator into D(1) plus a derivation");
  auto* c_curry = add("curry", "scalar operator a -> D(a p)");
  auto* c_rank = add("jet-rank", "rank of J^k of a rank-m free module");
  auto* c_prolong = add("prolong", "jet prolongation J^k s");
  auto* c_factorize = add("factorize", "jet hom through which an operator factors");
  auto* c_d1 = add("d1", "differential d1 f as one-form components");
  auto* c_nabla = add("nabla", "covariant differential of a section");
  auto* c_seminorm = add("seminorm", "grid estimate of sup |phi(J s)| over the box");
  auto* c_pair = add("pair", "pairing of a test section with a distribution");
  auto* c_transpose = add("transpose", "formal adjoint and transpose action on a distribution");
  auto* c_adjoint = add("adjoint-check", "check <D s, psi> = <s, D' psi>");
  auto* c_lie = add("lie", "Lie derivative of a scalar distribution");
  auto* c_recover = add("recover", "recover an operator from its action on test sections");
  auto* c_verify = add("verify-all", "run the full property suite");

  for (auto* c : {c_normalize, c_order, c_decompose, c_factorize, c_transpose})
    c->add_option("operator", in.op, "operator literal")->required();
  c_delta->add_option("multiplier", in.poly, "polynomial a")->required();
  c_delta->add_option("operator", in.op, "operator literal")->required();
  c_curry->add_option("operator", in.op, "operator literal")->required();
  c_curry->add_option("section", in.section, "comma-separated components")->required();
  c_rank->add_option("-k,--order", in.k, "jet order")->required();
  c_rank->add_option("-m,--fiber-rank", in.m, "fiber rank");
  c_prolong->add_option("section", in.section, "comma-separated components")->required();
  c_prolong->add_option("-k,--order", in.k, "jet order")->required();
  c_d1->add_option("poly", in.poly, "polynomial")->required();
  c_nabla->add_option("section", in.section, "comma-separated components")->required();
  c_nabla->add_option("--gamma", in.gamma, "connection matrix per axis, e.g. [[1, x], [0, y]]")->required();
  c_nabla->add_option("--field", in.field, "vector field components for nabla_u");
  c_seminorm->add_option("section", in.section, "polynomial part of the test section")->required();
  c_seminorm->add_option("--phi", in.phi, "jet function as a 1 x m operator, e.g. dx")->required();
  c_seminorm->add_option("--resolution", in.resolution, "grid cells per axis");
  c_seminorm->add_option("--workers", in.workers, "threads for the grid scan");
  c_pair->add_option("section", in.section, "polynomial part of the test section")->required();
  c_pair->add_option("--dist", in.dist, "distribution JSON or @file")->required();
  c_transpose->add_option("--dist", in.dist, "distribution JSON or @file");
  c_adjoint->add_option("operator", in.op, "operator literal")->required();
  c_adjoint->add_option("section", in.section, "polynomial part of the test section")->required();
  c_adjoint->add_option("--dist", in.dist, "distribution JSON or @file")->required();
  c_lie->add_option("--field", in.field, "vector field components")->required();
  c_lie->add_option("--dist", in.dist, "distribution JSON or @file")->required();
  c_recover->add_option("operator", in.op, "operator whose action serves as the black box")->required();
  c_recover->add_option("-k,--order", in.order, "claimed order (default: the operator's order)");
  c_recover->add_option("--degree", in.degree, "coefficient degree bound");

  CLI11_PARSE(app, argc, argv);

  try {
    Session session = resolve_session(flags, {in.op, in.poly, in.section, in.phi, in.field});
    const std::size_t n = session.dim;
    Json out;

    auto parsed_op = [&]() { return parse_operator(in.op, n); };
    auto test_section = [&](const std::optional<NormalOperator>& op, std::size_t rank_hint) {
      FreeModuleElement q = parse_section(in.section, n);
      if (q.rank() != rank_hint) throw InvalidInput("section rank does not match the operator");
      return TestSection(session.box, session.bump_for(op), std::move(q));
    };
    auto distribution = [&](std::size_t rank) {
      return io::distribution_from_json(read_json_argument(in.dist), n, rank, session.box);
    };

    if (*c_normalize || *c_order) {
      NormalOperator op = parsed_op();
      if (*c_normalize) out["operator"] = to_string(op);
      out["order"] = order_json(op);
    } else if (*c_delta) {
      NormalOperator d = delta(parse_poly(in.poly, n), parsed_op());
      out["operator"] = to_string(d);
      out["order"] = order_json(d);
    } else if (*c_decompose) {
      auto [q, d] = decompose_first_order(parsed_op());
      out["q"] = to_string(q);
      out["derivation"] = to_string(d);
      out["field"] = io::poly_array(*derivation_components(d));
    } else if (*c_curry) {
      NormalOperator c = curry(parsed_op(), parse_section(in.section, n));
      out["operator"] = to_string(c);
      out["order"] = order_json(c);
    } else if (*c_rank) {
      out["rank"] = std::stoull(jet_rank(n, in.k, in.m).get_str());
    } else if (*c_prolong) {
      out = io::to_json(jet_prolong(in.k, parse_section(in.section, n)));
    } else if (*c_factorize) {
      out = io::to_json(factorize(parsed_op()));
    } else if (*c_d1) {
      JetVector j = d1(parse_poly(in.poly, n));
      Json comps = Json::array();
      for (std::size_t mu = 0; mu < n; ++mu) comps.push_back(to_string(j.at(MultiIndex::unit(n, mu), 0)));
      out["d1"] = std::move(comps);
    } else if (*c_nabla) {
      FreeModuleElement s = parse_section(in.section, n);
      if (in.gamma.size() != n) throw InvalidInput("--gamma must be given once per axis");
      std::vector<PolyMatrix> g;
      for (const auto& text : in.gamma) g.push_back(parse_poly_matrix(text, n));
      ConnectionRepr gamma(std::move(g));
      Json parts = Json::array();
      for (const auto& part : covariant_differential(gamma, s)) parts.push_back(section_json(part));
      out["nabla"] = std::move(parts);
      if (!in.field.empty()) out["nabla_u"] = section_json(covariant_derivative(gamma, parse_section(in.field, n).components(), s));
    } else if (*c_seminorm) {
      FiberJetFunction phi(parse_operator(in.phi, n));
      auto est = seminorm(phi, test_section(std::nullopt, phi.fiber_rank()), in.resolution, in.workers);
      out["value"] = est.value;
      out["grid_spacing"] = est.grid_spacing;
      out["resolution"] = est.resolution;
    } else if (*c_pair) {
      FreeModuleElement q = parse_section(in.section, n);
      TestSection s(session.box, session.bump_for(std::nullopt), q);
      out["value"] = to_string(pair(s, distribution(q.rank())));
    } else if (*c_transpose) {
      NormalOperator op = parsed_op();
      out["adjoint"] = to_string(formal_adjoint(op));
      if (!in.dist.empty()) out["distribution"] = io::to_json(transpose(op)(distribution(op.m_out())));
    } else if (*c_adjoint) {
      NormalOperator op = parsed_op();
      TestSection s = test_section(op, op.m_in());
      Distribution psi = distribution(op.m_out());
      Rational lhs = pair(apply_operator(op, s), psi);
      Rational rhs = pair(s, transpose(op)(psi));
      out["holds"] = adjoint_check(op, s, psi);
      out["lhs"] = to_string(lhs);
      out["rhs"] = to_string(rhs);
    } else if (*c_lie) {
      out["distribution"] = io::to_json(lie_derivative_dist(parse_section(in.field, n).components(), distribution(1)));
    } else if (*c_recover) {
      NormalOperator op = parsed_op();
      RecoveryConfig cfg{session.box, op.m_in(), op.m_out(), in.order.value_or(op.order().value_or(0)), in.degree, 2};
      NormalOperator rec = recover_coefficients([&op](const TestSection& t) { return apply_operator(op, t); }, cfg);
      out["operator"] = to_string(rec);
      out["order"] = order_json(rec);
    } else if (*c_verify) {
      auto results = properties::run(properties::all_properties(), flags.seed);
      Json props = Json::array();
      int failed = 0;
      for (const auto& r : results) {
        props.push_back({{"id", r.id}, {"description", r.description}, {"passed", r.passed}, {"detail", r.detail}});
        if (!r.passed) ++failed;
      }
      out["seed"] = flags.seed;
      out["properties"] = std::move(props);
      out["failed"] = failed;
      std::cout << (flags.pretty ? out.dump(2) : out.dump()) << "\n";
      return std::min(failed, kMaxVerifyExit);
    }
    std::cout << (flags.pretty ? out.dump(2) : out.dump()) << "\n";
    return 0;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const InvalidInput& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: malformed input document: " << e.what() << "\n";
    return kExitParse;
  }
}
