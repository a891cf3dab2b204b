#pragma once
// JSON forms of diagrams and algebra elements.
//
//   diagram: {"n": N, "blocks": [{"nodes": [["L",1],["R",2]], "colours": ["e","t"]}, ...]}
//   element: {"terms": [{"coeff": "2/3", "diagram": {...}}, ...]}
//
// colours[k] is gamma(nodes[0], nodes[k]) by element name, so colours[0] is
// always the identity.

#include <string>
#include <vector>

#include "json.hpp"

#include "cpa/algebra.hpp"
#include "cpa/diagram.hpp"
#include "cpa/error.hpp"
#include "cpa/group.hpp"

namespace cpa {

inline nlohmann::json diagram_to_json(const ColouredDiagram& d, const FiniteGroup& g) {
  const std::size_t n = d.n();
  std::vector<std::vector<std::size_t>> blocks(d.block_count());
  for (std::size_t x = 0; x < 2 * n; ++x) blocks[d.block_of(x)].push_back(x);
  nlohmann::json out{{"n", n}, {"blocks", nlohmann::json::array()}};
  for (const auto& b : blocks) {
    nlohmann::json nodes = nlohmann::json::array(), colours = nlohmann::json::array();
    for (std::size_t x : b) {
      NodeId id = NodeId::from_flat(n, x);
      nodes.push_back({id.side == Side::Left ? "L" : "R", id.index});
      colours.push_back(g.name(d.colour(x)));
    }
    out["blocks"].push_back({{"nodes", nodes}, {"colours", colours}});
  }
  return out;
}

inline ColouredDiagram diagram_from_json(const nlohmann::json& j, const FiniteGroup& g) {
  try {
    const std::size_t n = j.at("n").get<std::size_t>();
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<std::vector<Element>> colours;
    for (const auto& b : j.at("blocks")) {
      const auto& nodes = b.at("nodes");
      const auto& cols = b.at("colours");
      if (nodes.size() != cols.size()) throw Error(ErrorKind::BadInput, "each node needs a colour");
      std::vector<std::size_t> flat;
      std::vector<Element> pot;
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        const std::string side = nodes[k].at(0).get<std::string>();
        const auto index = nodes[k].at(1).get<std::size_t>();
        if ((side != "L" && side != "R") || index < 1 || index > n)
          throw Error(ErrorKind::BadInput, "bad node [" + side + "," + std::to_string(index) + "]");
        flat.push_back(NodeId{side == "L" ? Side::Left : Side::Right, index}.flat(n));
        const std::string name = cols[k].get<std::string>();
        auto e = g.find(name);
        if (!e) throw Error(ErrorKind::BadInput, "unknown group element '" + name + "'");
        if (k == 0 && *e != g.identity()) throw Error(ErrorKind::BadInput, "first colour of a block must be the identity");
        pot.push_back(*e);
      }
      blocks.push_back(std::move(flat));
      colours.push_back(std::move(pot));
    }
    return ColouredDiagram::from_blocks(n, blocks, colours, g);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::BadInput, std::string("malformed diagram JSON: ") + e.what());
  }
}

template <class Ring>
nlohmann::json element_to_json(const AlgebraElement<Ring>& u) {
  const auto& ctx = u.context();
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [i, c] : u.terms())
    terms.push_back({{"coeff", ctx.ring().to_string(c)}, {"diagram", diagram_to_json(ctx.basis()[i], ctx.group())}});
  return {{"terms", terms}};
}

template <class Ring>
AlgebraElement<Ring> element_from_json(const AlgebraContext<Ring>& ctx, const nlohmann::json& j) {
  try {
    AlgebraElement<Ring> u(ctx);
    for (const auto& t : j.at("terms")) {
      const auto d = diagram_from_json(t.at("diagram"), ctx.group());
      if (d.n() != ctx.n()) throw Error(ErrorKind::SizeMismatch, "diagram size differs from --n");
      const auto& c = t.at("coeff");
      const auto value = c.is_number_integer() ? ctx.ring().from_int(c.get<long long>())
                                               : ctx.ring().parse(c.get<std::string>());
      u.add_term(static_cast<std::uint32_t>(ctx.basis().index_of(d)), value);
    }
    return u;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::BadInput, std::string("malformed element JSON: ") + e.what());
  }
}

}  // namespace cpa
