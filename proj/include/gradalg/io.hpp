#pragma once

#include "gradalg/burnside.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>

namespace gradalg {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

// Parses text as JSON; ParseError carries the line and column.
json parse_json(const std::string& text, const std::string& origin);
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Indented JSON with scalar arrays (matrix rows) kept on one line.
std::string pretty(const json& j);

FieldSpec field_from_json(const json& j);
json field_to_json(const FieldSpec& f);

// Header of a problem file, read before the scalar type is known.
struct ProblemHeader {
  FieldSpec field;
  int truncation = 0;
  int margin = 0;
  std::uint64_t seed = 0;
  std::vector<int> stored_dims;
};

ProblemHeader problem_header(const json& j);

namespace detail {

inline int int_field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ValidationError(where + ": missing \"" + key + "\"");
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ValidationError(where + ": \"" + key + "\" must be an integer");
  return v.get<int>();
}

}  // namespace detail

template <class S>
Mat<S> matrix_from_json(const json& j, const Field<S>& f, Eigen::Index rows, Eigen::Index cols,
                        const std::string& where) {
  auto shape = [&] { return std::to_string(rows) + "x" + std::to_string(cols); };
  if (!j.is_array()) throw ValidationError(where + ": block must be an array of rows, expected shape " + shape());
  const auto r = static_cast<Eigen::Index>(j.size());
  Eigen::Index c = r == 0 ? 0 : (j[0].is_array() ? static_cast<Eigen::Index>(j[0].size()) : -1);
  for (const auto& row : j)
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c)
      throw ValidationError(where + ": rows have inconsistent lengths, expected shape " + shape());
  // An empty list stands for any block with a zero dimension.
  if (r == 0 && (rows == 0 || cols == 0)) return zeros<S>(rows, cols);
  if (r != rows || c != cols)
    throw ValidationError(where + ": block has shape " + std::to_string(r) + "x" + std::to_string(c) +
                          ", expected " + shape());
  Mat<S> m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < cols; ++k) {
      const json& e = j[i][k];
      if (!e.is_string()) throw ValidationError(where + ": matrix entries must be scalar strings");
      try {
        m(i, k) = f.parse(e.get<std::string>());
      } catch (const ParseError& err) {
        throw ValidationError(where + ": " + err.what());
      }
    }
  return m;
}

template <class S>
json matrix_to_json(const Mat<S>& m, const Field<S>& f) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(f.format(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

// {"degree": k, "blocks": {"<m>": rows}}; absent blocks are zero.
template <class S>
GradedMap<S> graded_map_from_json(const json& j, const GradedSpace<S>& sp, const std::string& where,
                                  std::optional<int> degree = std::nullopt) {
  if (!j.is_object()) throw ValidationError(where + ": expected an object with \"degree\" and \"blocks\"");
  const int k = degree ? *degree : detail::int_field(j, "degree", where);
  if (degree && j.contains("degree") && j.at("degree") != *degree)
    throw ValidationError(where + ": declared degree differs from " + std::to_string(*degree));
  GradedMap<S> g(sp, k);
  if (!j.contains("blocks")) return g;
  const json& blocks = j.at("blocks");
  if (!blocks.is_object()) throw ValidationError(where + ": \"blocks\" must be an object keyed by source degree");
  for (const auto& [key, value] : blocks.items()) {
    int m = -1;
    if (!key.empty() && key.size() < 9 && std::all_of(key.begin(), key.end(), [](char ch) { return ch >= '0' && ch <= '9'; }) &&
        (key == "0" || key[0] != '0'))
      m = std::stoi(key);
    const std::string at = where + ", degree " + std::to_string(k) + ", source " + key;
    if (m < 0) throw ValidationError(at + ": block keys must be decimal source degrees");
    if (m > sp.top() || m + k < 0 || m + k > sp.top())
      throw ValidationError(at + ": source or target lies outside 0.." + std::to_string(sp.top()));
    g.set_block(m, matrix_from_json(value, sp.field(), sp.dim(m + k), sp.dim(m), at));
  }
  return g;
}

template <class S>
json graded_map_to_json(const GradedMap<S>& g) {
  json blocks = json::object();
  const auto& sp = g.space();
  for (int m = 0; m <= sp.top(); ++m) {
    int t = m + g.degree();
    if (t < 0 || t > sp.top()) continue;
    const Mat<S>& b = g.block_ref(m);
    if (b.size() == 0 || all_zero(b)) continue;
    blocks[std::to_string(m)] = matrix_to_json(b, sp.field());
  }
  return json{{"degree", g.degree()}, {"blocks", blocks}};
}

template <class S>
Action<S> action_from_json(const json& j, const Field<S>& f) {
  ProblemHeader h = problem_header(j);
  if (!(h.field == f.spec())) throw ValidationError("problem field differs from the requested field");
  GradedSpace<S> sp(h.stored_dims, f);
  std::vector<Generator<S>> gens;
  std::set<std::string> names;
  if (j.contains("generators")) {
    const json& list = j.at("generators");
    if (!list.is_array()) throw ValidationError("\"generators\" must be an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const json& g = list[i];
      std::string where = "generator #" + std::to_string(i);
      if (!g.is_object() || !g.contains("name") || !g.at("name").is_string())
        throw ValidationError(where + ": needs a string \"name\"");
      std::string name = g.at("name").get<std::string>();
      where = "generator '" + name + "'";
      if (!names.insert(name).second) throw ValidationError(where + ": duplicate name");
      for (const auto& [key, v] : g.items())
        if (key != "name" && key != "degree" && key != "blocks") throw ValidationError(where + ": unknown key \"" + key + "\"");
      gens.push_back({name, graded_map_from_json(g, sp, where)});
    }
  }
  bool unital = true;
  if (j.contains("unital")) unital = j.at("unital").get<bool>();
  return Action<S>(sp, h.truncation, std::move(gens), unital, h.seed);
}

template <class S>
json action_to_json(const Action<S>& a) {
  json gens = json::array();
  for (const auto& g : a.generators()) {
    json m = graded_map_to_json(g.map);
    m["name"] = g.name;
    gens.push_back(std::move(m));
  }
  json out{{"field", field_to_json(a.field().spec())},
            {"truncation", a.trusted()},
            {"dims", a.space().dims()},
            {"margin", a.margin()},
            {"seed", a.seed()},
            {"generators", gens}};
  if (!a.unital()) out["unital"] = false;
  return out;
}

// Certificate document: target, degree, level and the stages.
template <class S>
json certificate_to_json(const Action<S>& a, const GradedMap<S>& target, const Certificate<S>& c) {
  json stages = json::array();
  for (const auto& stage : c.stages) {
    json terms = json::array();
    for (const auto& t : stage)
      terms.push_back(
          {{"coeff", a.field().format(t.coeff)}, {"left", a.word_names(t.left)}, {"right", a.word_names(t.right)}});
    stages.push_back(std::move(terms));
  }
  return json{{"degree", c.degree}, {"level", c.level}, {"target", graded_map_to_json(target)},
              {"stages", stages}, {"verified", c.verified}};
}

template <class S>
std::pair<GradedMap<S>, Certificate<S>> certificate_from_json(const Action<S>& a, const json& j) {
  if (!j.is_object()) throw ValidationError("certificate must be an object");
  Certificate<S> c;
  c.degree = detail::int_field(j, "degree", "certificate");
  c.level = detail::int_field(j, "level", "certificate");
  if (!j.contains("target")) throw ValidationError("certificate: missing \"target\"");
  GradedMap<S> target = graded_map_from_json(j.at("target"), a.space(), "certificate target");
  if (!j.contains("stages") || !j.at("stages").is_array()) throw ValidationError("certificate: \"stages\" must be an array");
  auto word = [&](const json& w, const std::string& where) {
    if (!w.is_array()) throw ValidationError(where + ": words are arrays of generator names");
    std::vector<std::string> names;
    for (const auto& x : w) {
      if (!x.is_string()) throw ValidationError(where + ": words are arrays of generator names");
      names.push_back(x.get<std::string>());
    }
    try {
      return a.parse_word(names);
    } catch (const std::exception& e) {
      throw ValidationError(where + ": " + e.what());
    }
  };
  for (std::size_t r = 0; r < j.at("stages").size(); ++r) {
    const json& stage = j.at("stages")[r];
    const std::string where = "certificate stage " + std::to_string(r);
    if (!stage.is_array()) throw ValidationError(where + ": must be an array of terms");
    std::vector<CertificateTerm<S>> terms;
    for (const auto& t : stage) {
      if (!t.is_object() || !t.contains("coeff") || !t.at("coeff").is_string() || !t.contains("left") ||
          !t.contains("right"))
        throw ValidationError(where + ": terms need \"coeff\", \"left\" and \"right\"");
      S coeff;
      try {
        coeff = a.field().parse(t.at("coeff").get<std::string>());
      } catch (const ParseError& e) {
        throw ValidationError(where + ": " + e.what());
      }
      terms.push_back({coeff, word(t.at("left"), where), word(t.at("right"), where)});
    }
    c.stages.push_back(std::move(terms));
  }
  c.verified = j.value("verified", false);
  return {std::move(target), std::move(c)};
}

template <class S>
json subspace_to_json(const GradedSubspace<S>& v, const Field<S>& f, int upto) {
  json out = json::object();
  for (int n = 0; n <= upto && n < static_cast<int>(v.basis.size()); ++n)
    if (v.basis[n].cols() > 0) out[std::to_string(n)] = matrix_to_json(Mat<S>(v.basis[n].transpose()), f);
  return out;
}

}  // namespace gradalg
