#pragma once

// JSON documents for the command-line tool. Rationals are written as strings
// "num" or "num/den"; on input plain JSON integers are accepted as well.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hlat/hlat.hpp"

namespace hlat::io {

using nlohmann::json;

inline json to_json(const Rational& x) { return to_string(x); }

inline Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw InputError("expected an integer or a \"num/den\" string, got " + j.dump());
}

template <class T>
json matrix_to_json(const DenseMatrix<T>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if constexpr (std::is_same_v<T, Rational>)
        row.push_back(to_json(m(i, j)));
      else
        row.push_back(m(i, j));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline QMatrix matrix_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? (j[0].is_array() ? j[0].size() : 0) : 0;
  QMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw InputError(std::string(what) + " is ragged");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = rational_from_json(j[i][k]);
  }
  return m;
}

inline Bounds bounds_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array of rows");
  const std::size_t n = j.size();
  Bounds b(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n) throw InputError(std::string(what) + " must be square");
    for (std::size_t k = 0; k < n; ++k) {
      if (!j[i][k].is_number_integer()) throw InputError(std::string(what) + " entries must be integers");
      b(i, k) = j[i][k].get<long>();
    }
  }
  return b;
}

inline json bounds_to_json(const Bounds& b) {
  json rows = json::array();
  for (std::size_t i = 0; i < b.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < b.cols(); ++k) row.push_back(b(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline const json& require(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw InputError(std::string("document is missing \"") + key + "\"");
  return doc.at(key);
}

inline Prime prime_from_json(const json& doc) {
  const json& p = require(doc, "p");
  if (!p.is_number_integer()) throw InputError("\"p\" must be an integer");
  return Prime(p.get<long>());
}

// ---------------------------------------------------------------------------

/// {"p", "epsilon"?, "gram", "basis"?, "precision"?, "seed"?}
struct LatticeDocument {
  Prime p{3};
  int epsilon = 1;
  QMatrix gram;
  std::optional<QMatrix> basis;
  std::optional<long> precision;
  std::optional<std::uint64_t> seed;

  GramForm form() const { return GramForm(p, epsilon, gram); }
};

inline LatticeDocument lattice_from_json(const json& doc) {
  LatticeDocument d;
  d.p = prime_from_json(doc);
  if (doc.contains("epsilon")) {
    if (!doc["epsilon"].is_number_integer()) throw InputError("\"epsilon\" must be 1 or -1");
    d.epsilon = doc["epsilon"].get<int>();
  }
  d.gram = matrix_from_json(require(doc, "gram"), "gram");
  if (doc.contains("basis")) d.basis = matrix_from_json(doc["basis"], "basis");
  if (doc.contains("precision")) d.precision = doc["precision"].get<long>();
  if (doc.contains("seed")) d.seed = doc["seed"].get<std::uint64_t>();
  return d;
}

/// {"p", "group_table", "action": {"<index>": matrix}, "gram"}; the identity may be omitted.
inline GammaLattice gamma_from_json(const json& doc) {
  Prime p = prime_from_json(doc);
  const json& table = require(doc, "group_table");
  std::vector<std::vector<int>> t;
  try {
    t = table.get<std::vector<std::vector<int>>>();
  } catch (const json::exception&) {
    throw InputError("\"group_table\" must be a square array of integers");
  }
  FiniteGroup g(std::move(t));
  QMatrix gram = matrix_from_json(require(doc, "gram"), "gram");
  const json& act = require(doc, "action");
  if (!act.is_object()) throw InputError("\"action\" must map element indices to matrices");
  std::vector<QMatrix> rho(g.order());
  for (int k = 0; k < g.order(); ++k) {
    const std::string key = std::to_string(k);
    if (act.contains(key))
      rho[k] = matrix_from_json(act[key], "action matrix");
    else if (k == g.identity())
      rho[k] = QMatrix::identity(gram.rows());
    else
      throw InputError("\"action\" has no matrix for element " + key);
  }
  return GammaLattice(p, std::move(g), std::move(rho), std::move(gram));
}

// ---------------------------------------------------------------------------

inline json to_json(const CoradicalProfile& c) {
  return {{"exponents", c.exponents}, {"rank_defect", c.rank_defect}};
}

inline json to_json(const RationalClass& c) {
  return {{"rank", c.rank}, {"disc_parity", c.disc_parity}, {"disc_unit", to_string(c.disc_unit)}, {"hasse", c.hasse}};
}

inline json to_json(const JordanSignature& sig) {
  json out = json::array();
  for (const auto& c : sig) out.push_back({{"scale", c.scale}, {"rank", c.rank}, {"disc", to_string(c.disc)}});
  return out;
}

}  // namespace hlat::io
