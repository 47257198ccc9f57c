#include "structsel/lp_format.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace structsel {

namespace {

constexpr std::size_t kTermsPerLine = 8;

std::string number(const Rational& v, std::vector<std::string>& exact_notes, const std::string& where) {
  if (is_integral(v)) return v.get_num().get_str();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", to_double(v));
  exact_notes.push_back(where + " = " + to_string(v));
  return buf;
}

// Emits "c1 x1 + c2 x2 ..." wrapped over several lines.
void write_terms(std::ostringstream& os, const std::vector<std::pair<int, Rational>>& terms,
                 const std::vector<std::string>& names, std::vector<std::string>& notes, const std::string& where) {
  if (terms.empty()) {
    // The format has no empty linear expression; a zero term stands in.
    os << " 0 " << (names.empty() ? std::string("x") : names.front());
    return;
  }
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto& [j, a] = terms[k];
    const std::string& name = names.at(static_cast<std::size_t>(j));
    if (k > 0 && k % kTermsPerLine == 0) os << "\n   ";
    Rational mag = abs(a);
    os << (sgn(a) < 0 ? " - " : (k == 0 ? " " : " + "));
    if (mag != 1) os << number(mag, notes, where + " coefficient of " + name) << ' ';
    os << name;
  }
}

void flush_notes(std::ostringstream& os, std::vector<std::string>& notes) {
  for (const auto& n : notes) os << "\\ exact: " << n << '\n';
  notes.clear();
}

}  // namespace

std::string write_lp_format(const LinearProgram& lp, const std::vector<std::string>& var_names,
                            const std::vector<std::string>& row_names, const std::string& title, bool binary) {
  if (static_cast<int>(var_names.size()) != lp.num_vars || row_names.size() != lp.rows.size()) {
    throw std::invalid_argument("write_lp_format: name lists do not match the program");
  }
  std::ostringstream os;
  std::vector<std::string> notes;
  os << "\\ " << title << '\n';

  std::vector<std::pair<int, Rational>> objective;
  for (int j = 0; j < lp.num_vars; ++j) {
    const Rational& c = lp.objective[static_cast<std::size_t>(j)];
    if (sgn(c) != 0) objective.emplace_back(j, c);
  }
  std::ostringstream body;
  write_terms(body, objective, var_names, notes, "obj");
  flush_notes(os, notes);
  os << "Minimize\n obj:" << body.str() << '\n';

  os << "Subject To\n";
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const auto& row = lp.rows[i];
    std::ostringstream line;
    write_terms(line, row.coeffs, var_names, notes, row_names[i]);
    const char* op = row.sense == RowSense::kLessEqual ? "<=" : row.sense == RowSense::kGreaterEqual ? ">=" : "=";
    const std::string rhs = number(row.rhs, notes, row_names[i] + " rhs");
    flush_notes(os, notes);
    os << ' ' << row_names[i] << ':' << line.str() << ' ' << op << ' ' << rhs << '\n';
  }

  os << "Bounds\n";
  for (int j = 0; j < lp.num_vars; ++j) {
    const auto js = static_cast<std::size_t>(j);
    const std::string lo = number(lp.lower[js], notes, var_names[js] + " lower bound");
    std::string hi = "+inf";
    if (lp.upper[js]) hi = number(*lp.upper[js], notes, var_names[js] + " upper bound");
    flush_notes(os, notes);
    os << ' ' << lo << " <= " << var_names[js] << " <= " << hi << '\n';
  }
  if (binary && lp.num_vars > 0) {
    os << "Binaries\n";
    for (int j = 0; j < lp.num_vars; ++j) {
      os << (j % kTermsPerLine == 0 ? (j == 0 ? " " : "\n ") : " ") << var_names[static_cast<std::size_t>(j)];
    }
    os << '\n';
  }
  os << "End\n";
  return os.str();
}

std::string write_lp_format(const IlpModel& model) {
  std::vector<std::string> names;
  for (int v = 0; v < model.vars.num_vars(); ++v) names.push_back(model.vars.name(v));
  std::string title = std::string("input selection model ") + to_string(model.problem);
  if (model.k) title += ", k = " + std::to_string(*model.k);
  return write_lp_format(model.lp, names, model.row_names, title, true);
}

}  // namespace structsel
