#pragma once

// JSON input files (groups, modules, twists, short exact sequences) and report serialization.

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fk/stable.hpp"

namespace fk {

using Json = nlohmann::ordered_json;

[[noreturn]] inline void input_error(const std::string& where, const std::string& what) {
  fail(ErrorCode::InvalidInput, where + ": " + what);
}

inline Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    input_error(source + ":" + std::to_string(line) + ":" + std::to_string(col), "malformed JSON");
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) input_error(path, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

inline const Json& field(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) input_error(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) input_error(where, "missing field \"" + key + "\"");
  return *it;
}

inline std::int64_t as_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) input_error(where, "expected an integer");
  return j.get<std::int64_t>();
}

inline std::size_t as_count(const Json& j, const std::string& where, std::int64_t lo = 0) {
  auto v = as_int(j, where);
  if (v < lo) input_error(where, "must be at least " + std::to_string(lo));
  return static_cast<std::size_t>(v);
}

// Group file: {"degree": n, "generators": [[img_0, ..., img_{n-1}], ...]}.
inline GroupPtr parse_group(const Json& j, const std::string& src) {
  const std::size_t n = as_count(field(j, "degree", src), src + "/degree", 1);
  const Json& gens = field(j, "generators", src);
  if (!gens.is_array()) input_error(src + "/generators", "expected an array");
  std::vector<Permutation> perms;
  for (std::size_t g = 0; g < gens.size(); ++g) {
    const std::string where = src + "/generators/" + std::to_string(g);
    if (!gens[g].is_array() || gens[g].size() != n)
      input_error(where, "expected an image array of length " + std::to_string(n));
    std::vector<std::uint32_t> img;
    for (std::size_t i = 0; i < n; ++i)
      img.push_back(static_cast<std::uint32_t>(as_count(gens[g][i], where + "/" + std::to_string(i))));
    try {
      perms.emplace_back(std::move(img));
    } catch (const Error& e) {
      input_error(where, "not a permutation of 0.." + std::to_string(n - 1));
    }
  }
  return std::make_shared<const FiniteGroup>(n, std::move(perms));
}

inline Matrix parse_matrix(const Json& j, std::size_t rows, std::size_t cols, const ZMod& R, const std::string& where) {
  if (!j.is_array() || j.size() != rows) input_error(where, "expected " + std::to_string(rows) + " rows");
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string w = where + "/" + std::to_string(i);
    if (!j[i].is_array() || j[i].size() != cols) input_error(w, "expected " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = R.from_int(as_int(j[i][c], w + "/" + std::to_string(c)));
  }
  return m;
}

inline ZMod parse_ring(const Json& j, const std::string& src, std::uint32_t p) {
  const auto pj = as_count(field(j, "p", src), src + "/p", 2);
  const auto e = as_count(field(j, "e", src), src + "/e", 1);
  if (pj != p) input_error(src + "/p", "module prime " + std::to_string(pj) + " differs from --p " + std::to_string(p));
  if (e > 30) input_error(src + "/e", "exponent too large");
  return ZMod(p, static_cast<int>(e));
}

// A G-module given on generators: {"p", "e", "rank", "action": {"<generator id>": matrix}}.
// Generators not listed act trivially.
struct ModuleSpec {
  ZMod ring;
  std::size_t rank = 0;
  std::vector<Matrix> on_elements;
};

inline ModuleSpec parse_module(const Json& j, const FiniteGroup& G, std::uint32_t p, const std::string& src) {
  ModuleSpec m{parse_ring(j, src, p), 0, {}};
  m.rank = as_count(field(j, "rank", src), src + "/rank", 1);
  std::vector<Matrix> gens(G.generators().size(), Matrix::identity(m.rank));
  if (j.contains("action")) {
    const Json& act = j["action"];
    if (!act.is_object()) input_error(src + "/action", "expected an object keyed by generator id");
    for (const auto& [key, val] : act.items()) {
      const std::string w = src + "/action/" + key;
      std::size_t id = 0;
      try {
        std::size_t used = 0;
        id = std::stoul(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        input_error(w, "generator id must be a number");
      }
      if (id >= gens.size()) input_error(w, "group has " + std::to_string(gens.size()) + " generators");
      gens[id] = parse_matrix(val, m.rank, m.rank, m.ring, w);
    }
  }
  try {
    m.on_elements = extend_action(G, m.ring, m.rank, gens);
  } catch (const Error& e) {
    input_error(src + "/action", e.what());
  }
  return m;
}

// Twist file: {"kind": "unipotent", "e": 1} or
// {"kind": "assignment", "p", "e", "rank", "morphisms": {"<morphism id>": matrix}}.
inline LocalSystem parse_twist(const Json& j, const LinkingPtr& L, std::uint32_t p, const std::string& src) {
  const Json& kind = field(j, "kind", src);
  if (kind == "unipotent") {
    const auto e = j.contains("e") ? as_count(j["e"], src + "/e", 1) : 1;
    auto rho = LocalSystem::unipotent(L, pi1_presentation(*L), ZMod(p, static_cast<int>(e)));
    if (!rho) input_error(src + "/kind", "h1 of the linking system has no p-part; no unipotent twist exists");
    return *rho;
  }
  if (kind == "assignment") {
    ZMod R = parse_ring(j, src, p);
    const auto rank = as_count(field(j, "rank", src), src + "/rank", 1);
    std::map<std::size_t, Matrix> given;
    const Json& ms = field(j, "morphisms", src);
    if (!ms.is_object()) input_error(src + "/morphisms", "expected an object keyed by morphism id");
    for (const auto& [key, val] : ms.items()) {
      const std::string w = src + "/morphisms/" + key;
      std::size_t id = 0;
      try {
        id = std::stoul(key);
      } catch (const std::exception&) {
        input_error(w, "morphism id must be a number");
      }
      given.emplace(id, parse_matrix(val, rank, rank, R, w));
    }
    try {
      return LocalSystem::from_assignment(L, R, rank, given);
    } catch (const Error& e) {
      input_error(src + "/morphisms", e.what());
    }
  }
  input_error(src + "/kind", "expected \"unipotent\" or \"assignment\"");
}

inline LocalSystem local_system_from_module(const LinkingPtr& L, const ModuleSpec& m, const std::string& src) {
  try {
    return LocalSystem::from_group_action(L, m.ring, m.rank, m.on_elements);
  } catch (const Error& e) {
    input_error(src, e.what());
  }
}

// Short exact sequence file: {"L": c, "M": c, "N": c, "iota": matrix, "sigma": matrix}, where each
// c is a module object or {"twist": twist object}.
inline LocalSes parse_ses(const Json& j, const LinkingPtr& L, std::uint32_t p, const std::string& src) {
  auto coef = [&](const char* key) {
    const std::string w = src + "/" + key;
    const Json& c = field(j, key, src);
    if (c.is_object() && c.contains("twist")) return parse_twist(c["twist"], L, p, w + "/twist");
    return local_system_from_module(L, parse_module(c, L->fusion().G(), p, w), w);
  };
  LocalSystem a = coef("L"), b = coef("M"), c = coef("N");
  Matrix iota = parse_matrix(field(j, "iota", src), b.rank(), a.rank(), b.ring(), src + "/iota");
  Matrix sigma = parse_matrix(field(j, "sigma", src), c.rank(), b.rank(), c.ring(), src + "/sigma");
  try {
    return LocalSes{a, b, c, ModuleMap(a.ring(), a.rank(), b.ring(), b.rank(), iota),
                    ModuleMap(b.ring(), b.rank(), c.ring(), c.rank(), sigma)};
  } catch (const Error& e) {
    input_error(src, e.what());
  }
}

// Serialization.

inline Json perm_json(const FiniteGroup& G, Elem x) { return G.elem(x).img; }

inline Json subgroup_json(const FiniteGroup& G, const Subgroup& P) {
  Json elems = Json::array();
  for (Elem x : P.elems) elems.push_back(x);
  Json gens = Json::array();
  for (Elem x : P.gens) gens.push_back(perm_json(G, x));
  return Json{{"order", P.order()}, {"elements", elems}, {"generators", gens}};
}

inline Json vec_json(const Vec& v) {
  Json a = Json::array();
  for (auto x : v) a.push_back(x);
  return a;
}

inline Json matrix_json(const Matrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    a.push_back(r);
  }
  return a;
}

inline Json factors_json(const std::vector<std::int64_t>& f) {
  Json a = Json::array();
  for (auto x : f) a.push_back(x);
  return a;
}

inline Json biset_json(const Biset& X) {
  Json classes = Json::array();
  for (const auto& [c, m] : X.expanded()) {
    Json K = Json::array(), phi = Json::array();
    for (Elem x : c.K.elems) K.push_back(x);
    for (Elem x : c.phi) phi.push_back(x);
    classes.push_back(Json{{"K", K}, {"phi", phi}, {"mult", m}});
  }
  return classes;
}

}  // namespace fk
