#include "gradalg/io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

namespace gradalg {

namespace {

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

const std::set<std::string> kProblemKeys = {"field", "truncation", "dims", "margin", "seed", "unital", "generators"};

bool scalar_array(const json& j) {
  if (!j.is_array()) return false;
  for (const auto& v : j)
    if (v.is_structured()) return false;
  return true;
}

void pretty_into(const json& j, std::string& out, int indent) {
  const std::string pad(indent + 2, ' ');
  if (j.is_object() && !j.empty()) {
    out += "{\n";
    std::size_t i = 0;
    for (const auto& [k, v] : j.items()) {
      out += pad + json(k).dump() + ": ";
      pretty_into(v, out, indent + 2);
      out += ++i < j.size() ? ",\n" : "\n";
    }
    out += std::string(indent, ' ') + "}";
  } else if (j.is_array() && !j.empty() && !scalar_array(j)) {
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      out += pad;
      pretty_into(j[i], out, indent + 2);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += std::string(indent, ' ') + "]";
  } else if (j.is_array()) {
    out += "[";
    for (std::size_t i = 0; i < j.size(); ++i) out += (i ? ", " : "") + j[i].dump();
    out += "]";
  } else {
    out += j.dump();
  }
}

}  // namespace

std::string pretty(const json& j) {
  std::string out;
  pretty_into(j, out, 0);
  return out;
}

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // byte is one past the offending character.
    auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string what = e.what();
    auto at = what.find(", column ");
    auto cut = at == std::string::npos ? std::string::npos : what.find(": ", at);
    throw ParseError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                     (cut == std::string::npos ? what : what.substr(cut + 2)));
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
}

FieldSpec field_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw ValidationError("\"field\" must be {\"kind\": \"rational\"} or {\"kind\": \"prime\", \"p\": <int>}");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "rational") {
    if (j.size() != 1) throw ValidationError("rational field takes no further keys");
    return FieldSpec::rational();
  }
  if (kind != "prime") throw ValidationError("unknown field kind '" + kind + "'");
  if (!j.contains("p") || !j.at("p").is_number_unsigned() || j.size() != 2)
    throw ValidationError("prime field needs a positive integer \"p\"");
  const auto p = j.at("p").get<std::uint64_t>();
  if (p > std::numeric_limits<std::uint32_t>::max() || !is_prime(p))
    throw ValidationError("field p = " + std::to_string(p) + " is not a supported prime");
  return FieldSpec::prime(static_cast<std::uint32_t>(p));
}

json field_to_json(const FieldSpec& f) {
  if (f.is_rational()) return json{{"kind", "rational"}};
  return json{{"kind", "prime"}, {"p", f.p}};
}

ProblemHeader problem_header(const json& j) {
  if (!j.is_object()) throw ValidationError("problem must be a JSON object");
  for (const auto& [key, v] : j.items())
    if (!kProblemKeys.count(key)) throw ValidationError("unknown problem key \"" + key + "\"");
  ProblemHeader h;
  if (j.contains("field")) h.field = field_from_json(j.at("field"));
  h.truncation = detail::int_field(j, "truncation", "problem");
  if (h.truncation < 0) throw ValidationError("problem: truncation must be nonnegative");
  if (!j.contains("dims") || !j.at("dims").is_array() || j.at("dims").empty())
    throw ValidationError("problem: \"dims\" must be a nonempty array of nonnegative integers");
  for (const auto& d : j.at("dims")) {
    if (!d.is_number_integer() || d.get<long long>() < 0 || d.get<long long>() > 1000000)
      throw ValidationError("problem: \"dims\" must be a nonempty array of nonnegative integers");
    h.stored_dims.push_back(d.get<int>());
  }
  int max_degree = 0;
  if (j.contains("generators") && j.at("generators").is_array())
    for (const auto& g : j.at("generators"))
      if (g.is_object() && g.contains("degree") && g.at("degree").is_number_integer())
        max_degree = std::max(max_degree, std::abs(g.at("degree").get<int>()));
  const int given = static_cast<int>(h.stored_dims.size());
  if (j.contains("margin")) {
    h.margin = detail::int_field(j, "margin", "problem");
    if (h.margin < 0) throw ValidationError("problem: margin must be nonnegative");
  } else {
    h.margin = given > h.truncation + 1 ? given - 1 - h.truncation : max_degree;
  }
  if (given == h.truncation + 1) {
    h.stored_dims.resize(h.truncation + h.margin + 1, 0);
  } else if (given != h.truncation + h.margin + 1) {
    throw ValidationError("problem: dims has " + std::to_string(given) + " entries, expected " +
                          std::to_string(h.truncation + 1) + " or " + std::to_string(h.truncation + h.margin + 1));
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ValidationError("problem: seed must be an unsigned integer");
    h.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("unital") && !j.at("unital").is_boolean()) throw ValidationError("problem: unital must be a boolean");
  return h;
}

}  // namespace gradalg
