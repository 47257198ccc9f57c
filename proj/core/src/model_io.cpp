#include "structsel/model_io.hpp"

#include <json.hpp>

#include "structsel/errors.hpp"

namespace structsel {

using nlohmann::json;

namespace {

json parse_json(std::string_view document) {
  try {
    return json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed document: ") + e.what());
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

int read_count(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ParseError("field '" + field + "': expected a non-negative integer");
  const auto value = v.get<long long>();
  if (value < 0 || value > 1'000'000) throw ParseError("field '" + field + "': count out of range");
  return static_cast<int>(value);
}

SparsityPattern read_pattern(const json& v, int rows, int cols, const std::string& field) {
  if (!v.is_array()) throw ParseError("field '" + field + "': expected a list of [i,j] pairs");
  std::vector<Entry> entries;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::string at = field + "[" + std::to_string(k) + "]";
    const json& pair = v[k];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number_integer()) {
      throw ParseError("field '" + at + "': expected [i,j] with integer indices");
    }
    const auto i = pair[0].get<long long>();
    const auto j = pair[1].get<long long>();
    if (i < 1 || i > rows) {
      throw ParseError("field '" + at + "': row index " + std::to_string(i) + " out of range [1, " +
                       std::to_string(rows) + "]");
    }
    if (j < 1 || j > cols) {
      throw ParseError("field '" + at + "': column index " + std::to_string(j) + " out of range [1, " +
                       std::to_string(cols) + "]");
    }
    entries.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1)});
  }
  try {
    return SparsityPattern(rows, cols, std::move(entries));
  } catch (const std::invalid_argument& e) {
    throw ParseError("field '" + field + "': " + e.what());
  }
}

std::vector<Rational> read_costs(const json& v, const std::string& field) {
  if (!v.is_array()) throw ParseError("field '" + field + "': expected a list of costs");
  std::vector<Rational> costs;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::string at = field + "[" + std::to_string(k) + "]";
    Rational c;
    if (v[k].is_number_integer()) {
      c = Rational(mpz_class(v[k].dump(), 10));
    } else if (v[k].is_string()) {
      try {
        c = parse_rational(v[k].get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw ParseError("field '" + at + "': " + e.what());
      }
    } else {
      throw ParseError("field '" + at + "': costs must be integers or \"p/q\" strings");
    }
    if (sgn(c) < 0) throw ParseError("field '" + at + "': negative cost " + to_string(c));
    costs.push_back(c);
  }
  return costs;
}

json pattern_json(const SparsityPattern& p) {
  json out = json::array();
  for (const Entry& e : p.entries()) out.push_back({e.row + 1, e.col + 1});
  return out;
}

json costs_json(std::span<const Rational> costs) {
  json out = json::array();
  for (const Rational& c : costs) {
    if (is_integral(c) && c.get_num().fits_slong_p()) {
      out.push_back(c.get_num().get_si());
    } else {
      out.push_back(to_string(c));
    }
  }
  return out;
}

}  // namespace

StructuredSystem parse_system(std::string_view document) {
  const json doc = parse_json(document);
  const int n = read_count(require(doc, "n", "document"), "n");
  const int m = read_count(require(doc, "m", "document"), "m");
  SparsityPattern a = read_pattern(require(doc, "A", "document"), n, n, "A");
  SparsityPattern b = read_pattern(require(doc, "B", "document"), n, m, "B");
  std::vector<Rational> costs = read_costs(require(doc, "costs", "document"), "costs");
  if (static_cast<int>(costs.size()) != m) {
    throw ParseError("field 'costs': dimension mismatch, " + std::to_string(costs.size()) + " costs for m = " +
                     std::to_string(m));
  }
  return StructuredSystem(std::move(a), std::move(b), std::move(costs));
}

SwitchedStructuredSystem parse_switched_system(std::string_view document, std::vector<std::string>* warnings) {
  const json doc = parse_json(document);
  const int n = read_count(require(doc, "n", "document"), "n");
  const json& modes = require(doc, "modes", "document");
  if (!modes.is_array()) throw ParseError("field 'modes': expected a list");
  if (modes.empty()) throw ParseError("field 'modes': empty mode list");
  std::vector<Mode> parsed;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const std::string where = "modes[" + std::to_string(k) + "]";
    const json& md = modes[k];
    if (md.contains("n") && read_count(md["n"], where + ".n") != n) {
      throw ParseError("field '" + where + ".n': dimension mismatch with top-level n = " + std::to_string(n));
    }
    std::vector<Rational> costs = read_costs(require(md, "costs", where), where + ".costs");
    int m = static_cast<int>(costs.size());
    if (md.contains("m")) {
      m = read_count(md["m"], where + ".m");
      if (m != static_cast<int>(costs.size())) {
        throw ParseError("field '" + where + ".costs': dimension mismatch, " + std::to_string(costs.size()) +
                         " costs for m = " + std::to_string(m));
      }
    }
    SparsityPattern a = read_pattern(require(md, "A", where), n, n, where + ".A");
    SparsityPattern b = read_pattern(require(md, "B", where), n, m, where + ".B");
    std::vector<int> stripped;
    parsed.push_back(make_effective_mode(std::move(a), b, std::move(costs), &stripped));
    if (warnings && !stripped.empty()) {
      std::string msg = "mode " + std::to_string(k + 1) + ": stripped zero input columns";
      for (int j : stripped) msg += " " + std::to_string(j + 1);
      warnings->push_back(msg);
    }
  }
  return SwitchedStructuredSystem(n, std::move(parsed));
}

bool is_switched_document(std::string_view document) {
  const json doc = parse_json(document);
  return doc.is_object() && doc.contains("modes");
}

std::string serialize_system(const StructuredSystem& sys) {
  json doc;
  doc["n"] = sys.n();
  doc["m"] = sys.m();
  doc["A"] = pattern_json(sys.a());
  doc["B"] = pattern_json(sys.b());
  doc["costs"] = costs_json(sys.costs());
  return doc.dump(2) + "\n";
}

std::string serialize_switched_system(const SwitchedStructuredSystem& sw) {
  json doc;
  doc["n"] = sw.n();
  doc["modes"] = json::array();
  for (const Mode& md : sw.modes()) {
    json j;
    j["A"] = pattern_json(md.a);
    j["B"] = pattern_json(md.b);
    j["costs"] = costs_json(md.costs);
    doc["modes"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

}  // namespace structsel
