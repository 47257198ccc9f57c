#include "cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "structsel/controllability.hpp"
#include "structsel/errors.hpp"
#include "structsel/ilp.hpp"
#include "structsel/incidence.hpp"
#include "structsel/lp_format.hpp"
#include "structsel/model_io.hpp"
#include "structsel/selection.hpp"

namespace structsel::cli {

using json = nlohmann::ordered_json;

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return os.str();
}

namespace {

// Bad command-line arguments or input documents.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Loaded {
  std::string sha;
  bool switched = false;
  std::optional<StructuredSystem> fixed;
  std::optional<SwitchedStructuredSystem> sw;
  std::vector<std::string> warnings;
};

Loaded load(const std::string& path, bool force_switched) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  Loaded out;
  out.sha = sha256_hex(text);
  if (is_switched_document(text)) {
    out.switched = true;
    out.sw = parse_switched_system(text, &out.warnings);
  } else {
    out.fixed = parse_system(text);
    if (force_switched) {
      out.switched = true;
      out.sw = as_switched(*out.fixed);
    }
  }
  return out;
}

std::vector<int> parse_input_list(const std::string& list, int total) {
  std::vector<int> out;
  if (list.empty() || list == "none") return out;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    if (!tok.empty() && (tok[0] == 'u' || tok[0] == 'U')) tok.erase(0, 1);
    int value = 0;
    try {
      std::size_t used = 0;
      value = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw InputError("--inputs: cannot parse '" + tok + "'");
    }
    if (value < 1 || value > total) {
      throw InputError("--inputs: unknown input index " + std::to_string(value) + " (valid 1.." +
                       std::to_string(total) + ")");
    }
    out.push_back(value - 1);
  }
  return out;
}

json one_based(const std::vector<int>& v) {
  json a = json::array();
  for (int x : v) a.push_back(x + 1);
  return a;
}

json input_label(const Loaded& ld, int flat) {
  json j;
  j["index"] = flat + 1;
  if (ld.switched) {
    const auto [mode, local] = ld.sw->split_input(flat);
    j["mode"] = mode + 1;
    j["column"] = ld.sw->mode(mode).source_columns[static_cast<std::size_t>(local)] + 1;
  }
  return j;
}

json matching_json(const std::vector<MatchedEdge>& edges, bool switched) {
  json a = json::array();
  for (const MatchedEdge& e : edges) {
    json j;
    j["state"] = e.state + 1;
    if (e.by_input) {
      j["input"] = e.index + 1;
    } else {
      j["from_state"] = e.index + 1;
      if (switched) j["mode"] = e.mode + 1;
    }
    a.push_back(j);
  }
  return a;
}

std::string edge_text(const MatchedEdge& e, bool switched) {
  std::string s = "x" + std::to_string(e.state + 1) + " <- ";
  if (e.by_input) return s + "u" + std::to_string(e.index + 1);
  s += "x" + std::to_string(e.index + 1);
  if (switched) s += " (mode " + std::to_string(e.mode + 1) + ")";
  return s;
}

std::string set_text(const std::vector<int>& v, char prefix) {
  if (v.empty()) return "{}";
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::string(1, prefix) + std::to_string(v[i] + 1);
  return s + "}";
}

json witness_json(const std::optional<SubmatrixWitness>& w) {
  if (!w) return nullptr;
  json j;
  j["rows"] = one_based(w->rows);
  j["cols"] = one_based(w->cols);
  j["determinant"] = w->determinant.get_str();
  return j;
}

// ---- check ---------------------------------------------------------------

struct CheckArgs {
  std::string path;
  bool switched = false;
  std::optional<std::string> inputs;
  std::optional<std::string> export_dot;
};

std::string to_dot(const SparsityPattern& a, const SparsityPattern& b, const std::vector<int>& selected) {
  std::ostringstream os;
  os << "digraph G {\n  rankdir=LR;\n";
  for (int i = 0; i < a.rows(); ++i) os << "  x" << i + 1 << " [shape=circle];\n";
  for (int u : selected) os << "  u" << u + 1 << " [shape=box];\n";
  for (const Entry& e : a.entries()) os << "  x" << e.col + 1 << " -> x" << e.row + 1 << ";\n";
  for (int u : selected) {
    for (int x : b.column_support(u)) os << "  u" << u + 1 << " -> x" << x + 1 << ";\n";
  }
  os << "}\n";
  return os.str();
}

json cmd_check(const CheckArgs& args, const Loaded& ld, std::string& pretty, int& code) {
  const int total = ld.switched ? ld.sw->total_inputs() : ld.fixed->m();
  const std::vector<int> selected = args.inputs ? parse_input_list(*args.inputs, total) : all_inputs(total);
  const ControllabilityCertificate cert = ld.switched ? is_switched_structurally_controllable(*ld.sw, selected)
                                                     : is_structurally_controllable(*ld.fixed, selected);
  if (args.export_dot) {
    std::ofstream f(*args.export_dot);
    if (!f) throw InputError("cannot write '" + *args.export_dot + "'");
    if (ld.switched) {
      const UnionSystem u = union_system(*ld.sw);
      f << to_dot(u.a_hat, u.b_hat, selected);
    } else {
      f << to_dot(ld.fixed->a(), ld.fixed->b(), selected);
    }
  }

  json r;
  r["switched"] = ld.switched;
  r["selected"] = json::array();
  for (int u : selected) r["selected"].push_back(input_label(ld, u));
  r["controllable"] = cert.controllable;
  json reach;
  reach["all_reachable"] = cert.all_reachable;
  reach["source_sccs"] = json::array();
  for (std::size_t s = 0; s < cert.source_sccs.size(); ++s) {
    json scc;
    scc["states"] = one_based(cert.source_sccs[s]);
    const int act = cert.actuator[s];
    scc["actuator"] = act >= 0 ? json(act + 1) : json(nullptr);
    reach["source_sccs"].push_back(scc);
  }
  reach["failing_scc"] =
      cert.failing_scc >= 0 ? one_based(cert.source_sccs[static_cast<std::size_t>(cert.failing_scc)]) : json(nullptr);
  reach["unreachable_states"] = one_based(cert.unreachable_states);
  r["reachability"] = reach;
  json match;
  match["saturating"] = cert.matching_saturates;
  match["size"] = cert.matching_size;
  match["edges"] = matching_json(cert.matching, ld.switched);
  match["deficient_states"] = one_based(cert.deficient_states);
  r["matching"] = match;

  std::ostringstream os;
  os << "structurally controllable: " << (cert.controllable ? "yes" : "no") << "\n";
  os << "selected inputs: " << set_text(selected, 'u') << "\n";
  os << "source SCCs:\n";
  for (std::size_t s = 0; s < cert.source_sccs.size(); ++s) {
    os << "  " << std::left << std::setw(24) << set_text(cert.source_sccs[s], 'x');
    if (cert.actuator[s] >= 0) {
      os << "actuated by u" << cert.actuator[s] + 1 << "\n";
    } else {
      os << "not actuated\n";
    }
  }
  os << "unreachable states: " << set_text(cert.unreachable_states, 'x') << "\n";
  os << "matching: " << cert.matching_size << "/" << (ld.switched ? ld.sw->n() : ld.fixed->n())
     << (cert.matching_saturates ? " (saturating)" : " (deficient)") << "\n";
  for (const MatchedEdge& e : cert.matching) os << "  " << edge_text(e, ld.switched) << "\n";
  if (!cert.deficient_states.empty()) {
    os << "deficient states: " << set_text(cert.deficient_states, 'x') << "\n";
  }
  pretty = os.str();
  code = kOk;
  return r;
}

// ---- classify ------------------------------------------------------------

struct ClassifyArgs {
  std::string path;
  bool switched = false;
  bool uniform_rows = false;
  int tu_cap = 20;
};

json flags_json(const ConstraintClass& c) {
  json f;
  f["sssi"] = to_string(c.sssi);
  f["extended_sssi"] = to_string(c.extended_sssi);
  f["row_monotone"] = to_string(c.row_monotone);
  f["column_monotone"] = to_string(c.column_monotone);
  f["permutable_row_monotone"] = to_string(c.permutable_row_monotone);
  f["permutable_column_monotone"] = to_string(c.permutable_column_monotone);
  f["block_diagonal_monotone"] = to_string(c.block_diagonal_monotone);
  f["restricted_tu"] = to_string(c.restricted_tu);
  return f;
}

json cmd_classify(const ClassifyArgs& args, const Loaded& ld, std::string& pretty, int& code) {
  ClassifyOptions opt;
  opt.uniform_row_monotone = args.uniform_rows;
  opt.tu.max_dimension = args.tu_cap;
  const IncidenceMatrix inc = ld.switched ? build_switched_incidence(*ld.sw) : build_incidence(*ld.fixed);
  const ConstraintClass cls = classify(inc.w, opt);

  json r;
  r["switched"] = ld.switched;
  r["w"] = inc.w;
  r["rows"] = json::array();
  for (const auto& s : inc.row_sccs) r["rows"].push_back(one_based(s));
  r["columns"] = json::array();
  for (int j = 0; j < inc.cols(); ++j) r["columns"].push_back(input_label(ld, j));
  r["flags"] = flags_json(cls);
  r["restricted_tu_from_class"] = cls.restricted_tu_from_class;
  r["witness"] = witness_json(cls.witness);
  r["f"] = inc.max_row_sum();

  std::vector<bool> per_mode;
  if (ld.switched) {
    r["joint_sssi"] = is_sssi(inc.w);
    r["per_mode_sssi"] = json::array();
    for (const Mode& md : ld.sw->modes()) {
      const StructuredSystem sub(md.a, md.b, md.costs);
      per_mode.push_back(is_sssi(build_incidence(sub).w));
      r["per_mode_sssi"].push_back(per_mode.back());
    }
  }

  std::ostringstream os;
  os << "incidence matrix w (rows: source SCCs, columns: inputs)\n";
  os << std::setw(26) << "";
  for (int j = 0; j < inc.cols(); ++j) os << std::setw(4) << ("u" + std::to_string(j + 1));
  os << "\n";
  for (int i = 0; i < inc.rows(); ++i) {
    os << "  " << std::left << std::setw(24) << set_text(inc.row_sccs[static_cast<std::size_t>(i)], 'x')
       << std::right;
    for (int v : inc.w[static_cast<std::size_t>(i)]) os << std::setw(4) << v;
    os << "\n";
  }
  os << "flags:\n";
  for (const auto& [name, value] : r["flags"].items()) {
    os << "  " << std::left << std::setw(28) << name << value.get<std::string>() << "\n";
  }
  os << std::right;
  if (ld.switched) {
    os << "joint SSSI: " << (is_sssi(inc.w) ? "true" : "false") << "\n";
    for (std::size_t k = 0; k < per_mode.size(); ++k) {
      os << "mode " << k + 1 << " SSSI: " << (per_mode[k] ? "true" : "false") << "\n";
    }
  }
  if (cls.witness) {
    os << "violating submatrix of [w; 1]: rows " << set_text(cls.witness->rows, 'r') << ", columns "
       << set_text(cls.witness->cols, 'c') << ", determinant " << cls.witness->determinant.get_str() << "\n";
  }
  pretty = os.str();
  code = kOk;
  return r;
}

// ---- solve / bound -------------------------------------------------------

struct SolveArgs {
  std::string path;
  std::string problem;
  std::optional<int> k;
  bool allow_heuristic = false;
  bool oracle = false;
  bool verbose = false;
  bool switched = false;
  std::optional<std::string> export_lp;
};

json selection_json(const SelectionResult& s, const Loaded& ld, bool verbose) {
  json r;
  r["problem"] = to_string(s.problem);
  r["k"] = s.k ? json(*s.k) : json(nullptr);
  r["status"] = to_string(s.status);
  r["provenance"] = to_string(s.provenance);
  if (s.status == SelectionStatus::kOptimal || s.status == SelectionStatus::kFeasible) {
    r["selected"] = one_based(s.selected);
    if (ld.switched) {
      r["per_mode"] = json::array();
      for (const auto& m : s.per_mode) r["per_mode"].push_back(one_based(m));
      r["inputs"] = json::array();
      for (int u : s.selected) r["inputs"].push_back(input_label(ld, u));
    }
    r["cost"] = to_string(s.cost);
    r["objective"] = to_string(s.objective);
    r["matching"] = matching_json(s.matching, ld.switched);
  }
  r["restricted_tu"] = to_string(s.restricted_tu);
  if (s.f) r["f"] = *s.f;
  if (s.lp_bound) r["lp_bound"] = to_string(*s.lp_bound);
  if (s.f) r["perfect_matching_in_a"] = s.perfect_matching_in_a;
  if (s.f_bound) r["f_bound"] = to_string(*s.f_bound);
  if (!s.message.empty()) r["message"] = s.message;
  if (verbose) r["stats"] = json{{"pivots", s.pivots}};
  return r;
}

std::string selection_text(const SelectionResult& s, bool switched) {
  std::ostringstream os;
  os << "problem: " << to_string(s.problem);
  if (s.k) os << " (k = " << *s.k << ")";
  os << "\nstatus: " << to_string(s.status) << " [" << to_string(s.provenance) << "]\n";
  if (s.status == SelectionStatus::kOptimal || s.status == SelectionStatus::kFeasible) {
    os << "selected: " << set_text(s.selected, 'u') << "\n";
    if (switched) {
      for (std::size_t k = 0; k < s.per_mode.size(); ++k) {
        os << "  mode " << k + 1 << ": " << set_text(s.per_mode[k], 'u') << "\n";
      }
    }
    os << "cost: " << to_string(s.cost) << "\n";
    if (s.objective != s.cost) os << "objective: " << to_string(s.objective) << "\n";
    os << "matching:\n";
    for (const MatchedEdge& e : s.matching) os << "  " << edge_text(e, switched) << "\n";
  }
  if (s.f) os << "f: " << *s.f << "\n";
  if (s.lp_bound) os << "LP bound: " << to_string(*s.lp_bound) << "\n";
  if (s.f_bound) os << "f * LP bound: " << to_string(*s.f_bound) << "\n";
  if (!s.message.empty()) os << "note: " << s.message << "\n";
  return os.str();
}

void export_model(const std::optional<std::string>& path, const IlpModel& model) {
  if (!path) return;
  std::ofstream f(*path);
  if (!f) throw InputError("cannot write '" + *path + "'");
  f << write_lp_format(model);
}

int exit_for(const SelectionResult& s) {
  switch (s.status) {
    case SelectionStatus::kInfeasible:
      return kInfeasible;
    case SelectionStatus::kRefused:
      return kRefused;
    default:
      return kOk;
  }
}

json bounds_json(const BoundsReport& b) {
  json r;
  r["c_mat"] = to_string(b.c_mat);
  r["c_lp"] = to_string(b.c_lp);
  r["ordered"] = b.ordered;
  r["f"] = b.f;
  r["perfect_matching_in_a"] = b.perfect_matching_in_a;
  r["matching_inputs"] = one_based(b.matching_inputs);
  r["lp_support"] = one_based(b.lp_support);
  r["lp_integral"] = b.lp_integral;
  return r;
}

std::string bounds_text(const BoundsReport& b) {
  std::ostringstream os;
  os << "c*_mat: " << to_string(b.c_mat) << "   (inputs " << set_text(b.matching_inputs, 'u') << ")\n";
  os << "c*_LP:  " << to_string(b.c_lp) << "   (support " << set_text(b.lp_support, 'u')
     << (b.lp_integral ? ", integral" : ", fractional") << ")\n";
  os << "c*_mat <= c*_LP: " << (b.ordered ? "yes" : "NO") << "\n";
  os << "f: " << b.f << "\n";
  os << "B(A) has a perfect matching: " << (b.perfect_matching_in_a ? "yes" : "no") << "\n";
  return os.str();
}

json cmd_solve(const SolveArgs& args, const Loaded& ld, std::string& pretty, int& code) {
  const auto problem = parse_problem(args.problem);
  if (!problem) throw InputError("--problem: unknown problem '" + args.problem + "'");
  if (needs_cardinality(*problem) && !args.k) {
    throw InputError(std::string("--k is required for ") + to_string(*problem));
  }
  if (args.k && *args.k < 1) throw InputError("--k must be at least 1");
  const bool switched_problem = is_switched_problem(*problem);
  if (switched_problem && !ld.switched) throw InputError("problem needs a switched document (with \"modes\")");
  if (!switched_problem && !ld.fixed) throw InputError("problem needs a fixed-system document");

  SelectionOptions opt;
  const std::optional<int> k = needs_cardinality(*problem) ? args.k : std::nullopt;
  SelectionResult res;
  json extra;
  if (args.oracle) {
    res = switched_problem ? brute_force_switched(*ld.sw, *problem, k, opt) : brute_force(*ld.fixed, *problem, k, opt);
  } else {
    res = switched_problem ? solve_exact_switched(*ld.sw, *problem, k, opt) : solve_exact(*ld.fixed, *problem, k, opt);
    if (res.status == SelectionStatus::kRefused && args.allow_heuristic) {
      if (switched_problem || *problem != Problem::kP1) {
        res.message += "; the heuristic route covers p1 only";
      } else {
        const BoundsReport b = bounds(*ld.fixed, opt);
        extra = bounds_json(b);
        res = lp_round(*ld.fixed, opt);
        res.restricted_tu = Verdict::kFalse;
      }
    }
  }

  if (args.export_lp) {
    switch (*problem) {
      case Problem::kP1:
        export_model(args.export_lp, build_p1(*ld.fixed));
        break;
      case Problem::kP2:
        export_model(args.export_lp, build_p2(*ld.fixed, *k));
        break;
      case Problem::kP3:
        export_model(args.export_lp, build_p3(*ld.fixed));
        break;
      case Problem::kP4:
        export_model(args.export_lp, build_p4(*ld.sw));
        break;
      case Problem::kP5:
        export_model(args.export_lp, build_p5(*ld.sw, *k));
        break;
      case Problem::kP4Fix:
        export_model(args.export_lp, build_p4fix(*ld.sw));
        break;
      case Problem::kP5Fix:
        export_model(args.export_lp, build_p5fix(*ld.sw, *k));
        break;
    }
  }

  const bool sw_labels = switched_problem;
  Loaded view;
  view.switched = sw_labels;
  if (sw_labels) view.sw = ld.sw;
  json r = selection_json(res, view, args.verbose);
  if (!extra.is_null()) r["bounds"] = extra;
  pretty = selection_text(res, sw_labels);
  if (!extra.is_null()) pretty += bounds_text(bounds(*ld.fixed, opt));
  code = exit_for(res);
  return r;
}

json cmd_bound(const SolveArgs& args, const Loaded& ld, std::string& pretty, int& code) {
  if (!ld.fixed) throw InputError("bound needs a fixed-system document");
  SelectionOptions opt;
  if (!is_structurally_controllable(*ld.fixed, all_inputs(ld.fixed->m())).controllable) {
    json r;
    r["status"] = "infeasible";
    r["message"] = "not structurally controllable even with all inputs";
    pretty = "not structurally controllable even with all inputs\n";
    code = kInfeasible;
    return r;
  }
  const BoundsReport b = bounds(*ld.fixed, opt);
  const SelectionResult rounded = lp_round(*ld.fixed, opt);
  export_model(args.export_lp, build_p1(*ld.fixed));

  json r = bounds_json(b);
  Loaded view;
  r["rounded"] = selection_json(rounded, view, args.verbose);
  if (rounded.f_bound) {
    r["guarantee"] = json{{"bound", to_string(*rounded.f_bound)}, {"holds", rounded.cost <= *rounded.f_bound}};
  } else {
    r["guarantee"] = nullptr;
  }
  std::ostringstream os;
  os << bounds_text(b) << "rounded selection: " << set_text(rounded.selected, 'u') << ", cost "
     << to_string(rounded.cost) << (rounded.status == SelectionStatus::kOptimal ? " (meets the LP bound)" : "")
     << "\n";
  if (rounded.f_bound) {
    os << "guarantee cost <= f * c*_LP = " << to_string(*rounded.f_bound) << ": "
       << (rounded.cost <= *rounded.f_bound ? "holds" : "VIOLATED") << "\n";
  } else {
    os << "no approximation guarantee (B(A) lacks a perfect matching)\n";
  }
  pretty = os.str();
  code = kOk;
  return r;
}

std::string join_args(const std::vector<std::string>& args) {
  std::string s = "structsel";
  for (const auto& a : args) s += " " + a;
  return s;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimum-cost input selection for structural controllability"};
  app.name("structsel");
  app.require_subcommand(1);
  bool pretty = false;
  app.add_flag("--pretty", pretty, "Human-readable tables instead of JSON");

  CheckArgs check;
  auto* c_check = app.add_subcommand("check", "Structural controllability of a (switched) system");
  c_check->add_option("path", check.path, "System document")->required();
  c_check->add_flag("--switched", check.switched, "Treat the document as a switched system");
  c_check->add_option("--inputs", check.inputs, "Comma-separated 1-based inputs (\"none\" for the empty set)");
  c_check->add_option("--export-dot", check.export_dot, "Write the system digraph in DOT format");
  c_check->add_flag("--pretty", pretty, "Human-readable output");

  ClassifyArgs classify_args;
  auto* c_classify = app.add_subcommand("classify", "Incidence matrix and constraint classes");
  c_classify->add_option("path", classify_args.path, "System document")->required();
  c_classify->add_flag("--switched", classify_args.switched, "Treat the document as a switched system");
  c_classify->add_flag("--uniform-rows", classify_args.uniform_rows,
                       "Row-monotone requires all rows to share one direction");
  c_classify->add_option("--tu-cap", classify_args.tu_cap, "Largest dimension for the exhaustive TU test")
      ->check(CLI::Range(1, 30));
  c_classify->add_flag("--pretty", pretty, "Human-readable output");

  SolveArgs solve;
  auto* c_solve = app.add_subcommand("solve", "Minimum-cost input selection");
  c_solve->add_option("path", solve.path, "System document")->required();
  c_solve->add_option("--problem", solve.problem, "p1|p2|p3|p4|p5|p4fix|p5fix")->required();
  c_solve->add_option("--k", solve.k, "Cardinality bound for p2, p5 and p5fix");
  c_solve->add_flag("--allow-heuristic", solve.allow_heuristic, "Fall back to bounds and LP rounding");
  c_solve->add_flag("--oracle", solve.oracle, "Exact answer by exhaustive enumeration");
  c_solve->add_flag("--switched", solve.switched, "Treat the document as a switched system");
  c_solve->add_option("--export-lp", solve.export_lp, "Write the model in CPLEX LP format");
  c_solve->add_flag("--verbose", solve.verbose, "Include solver statistics");
  c_solve->add_flag("--pretty", pretty, "Human-readable output");

  SolveArgs bound;
  auto* c_bound = app.add_subcommand("bound", "Lower bounds and LP rounding for p1");
  c_bound->add_option("path", bound.path, "System document")->required();
  c_bound->add_option("--export-lp", bound.export_lp, "Write the p1 model in CPLEX LP format");
  c_bound->add_flag("--verbose", bound.verbose, "Include solver statistics");
  c_bound->add_flag("--pretty", pretty, "Human-readable output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    json result;
    std::string text;
    int code = kOk;
    std::string command;
    Loaded ld;
    if (c_check->parsed()) {
      command = "check";
      ld = load(check.path, check.switched);
      result = cmd_check(check, ld, text, code);
    } else if (c_classify->parsed()) {
      command = "classify";
      ld = load(classify_args.path, classify_args.switched);
      result = cmd_classify(classify_args, ld, text, code);
    } else if (c_solve->parsed()) {
      command = "solve";
      ld = load(solve.path, solve.switched);
      result = cmd_solve(solve, ld, text, code);
    } else {
      command = "bound";
      ld = load(bound.path, false);
      result = cmd_bound(bound, ld, text, code);
    }
    for (const auto& w : ld.warnings) err << "warning: " << w << "\n";
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (pretty) {
      out << text;
    } else {
      json report;
      report["command"] = command;
      report["argv"] = join_args(args);
      report["input_sha256"] = ld.sha;
      report["warnings"] = ld.warnings;
      report["result"] = result;
      report["timing_ms"] = std::round(ms * 1000.0) / 1000.0;
      out << report.dump(2) << "\n";
    }
    return code;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
  }
  return kInputError;
}

}  // namespace structsel::cli
